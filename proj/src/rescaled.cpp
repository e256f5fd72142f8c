#include "qns/rescaled.hpp"

#include <cmath>

namespace qns {

double tau_acceleration(const TauParams& p, double tau, double tau_dot)
{
  return p.a / tau + p.kappa * p.kappa / (tau * tau * tau) - 2.0 * p.nu * tau_dot / (tau * tau);
}

TauState tau_rk4(const TauState& s, const TauParams& p, double dt)
{
  auto f = [&](double tau, double v) { return std::pair<double, double>{v, tau_acceleration(p, tau, v)}; };
  auto [k1x, k1v] = f(s.tau, s.tau_dot);
  auto [k2x, k2v] = f(s.tau + 0.5 * dt * k1x, s.tau_dot + 0.5 * dt * k1v);
  auto [k3x, k3v] = f(s.tau + 0.5 * dt * k2x, s.tau_dot + 0.5 * dt * k2v);
  auto [k4x, k4v] = f(s.tau + dt * k3x, s.tau_dot + dt * k3v);
  TauState out;
  out.t = s.t + dt;
  out.tau = s.tau + dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
  out.tau_dot = s.tau_dot + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  if (!(out.tau > 0.0) || !std::isfinite(out.tau_dot))
    throw Error(ErrorKind::StepFailure, "tau integration left the positive half-line");
  return out;
}

std::vector<TauState> tau_solve(const TauParams& p, double t_final, double dt)
{
  if (!(dt > 0.0))
    throw Error(ErrorKind::InvalidParameter, "time step must be positive");
  const long steps = std::lround(t_final / dt);
  std::vector<TauState> out;
  out.reserve(steps + 1);
  TauState s;
  out.push_back(s);
  for (long k = 1; k <= steps; ++k) {
    s = tau_rk4(s, p, dt);
    s.t = k * dt;
    out.push_back(s);
  }
  return out;
}

double tau_invariant(const TauParams& p, const TauState& s)
{
  return 0.5 * s.tau_dot * s.tau_dot - p.a * std::log(s.tau) + p.kappa * p.kappa / (2.0 * s.tau * s.tau);
}

namespace {

void add_drift(VectorField& u, double coeff)
{
  const FramePtr& f = u.frame;
  if (f->degree() < 1)
    throw Error(ErrorKind::Dimension, "the rescaling drift needs degree at least one");
  for (int j = 0; j < f->dim(); ++j) {
    MultiIndex e{0, 0};
    e[j] = 1;
    u.c(f->index_of(e), j) += coeff;
  }
}

}  // namespace

PhysicalState rescale_map_inverse(const ScalarField& Q, const VectorField& U, const TauState& s)
{
  if (!(s.tau > 0.0))
    throw Error(ErrorKind::InvalidParameter, "tau must be positive");
  const FramePtr& src = Q.frame;
  FramePtr dst = src->rescaled(src->sigma() * s.tau);
  PhysicalState out{ScalarField{dst, Q.c}, VectorField{dst, U.c / s.tau}};
  // (tau'/tau) x_j = (tau'/tau) * (tau sigma_Q) phi_{e_j}
  add_drift(out.u, s.tau_dot * src->sigma());
  return out;
}

PhysicalState rescale_map(const ScalarField& q, const VectorField& u, const TauState& s)
{
  if (!(s.tau > 0.0))
    throw Error(ErrorKind::InvalidParameter, "tau must be positive");
  const FramePtr& src = q.frame;
  FramePtr dst = src->rescaled(src->sigma() / s.tau);
  VectorField w = u;
  add_drift(w, -s.tau_dot * src->sigma() / s.tau);
  return {ScalarField{dst, q.c}, VectorField{dst, w.c * s.tau}};
}

ScalarField resample_density(const ScalarField& q, const FramePtr& target)
{
  const Grid& g = target->fine();
  Eigen::VectorXd v(g.size());
  for (int k = 0; k < g.size(); ++k) {
    const double* y = &g.x(k, 0);
    v[k] = q.at(y) * q.frame->gaussian_density(y) / target->gaussian_density(y);
  }
  return project_fine(target, v);
}

VectorField resample_velocity(const VectorField& u, const FramePtr& target)
{
  const Grid& g = target->fine();
  const int d = target->dim();
  Eigen::MatrixXd v(g.size(), d);
  for (int k = 0; k < g.size(); ++k) {
    Eigen::RowVectorXd b = u.frame->basis_at(&g.x(k, 0));
    for (int j = 0; j < d; ++j)
      v(k, j) = b.dot(u.c.col(j));
  }
  return {target, g.V.transpose() * (v.array().colwise() * g.w.array()).matrix()};
}

MomentumCoefficients rescaled_coefficients(const TauParams& p, double tau, double tau_dot)
{
  const double t2 = tau * tau;
  MomentumCoefficients m;
  m.transport = 1.0 / t2;
  m.nu = p.nu / t2;
  m.kappa2 = p.kappa * p.kappa / t2;
  // Korteweg term in weak form contributes kappa^2/tau^2 to the pressure on a unit-width frame.
  m.pressure = p.a - 2.0 * p.nu * tau_dot / tau + p.kappa * p.kappa / t2;
  return m;
}

SimState rescaled_step(const SimState& s, const TauState& tau, const TauParams& p, double dt,
                       const SolverOptions& opt)
{
  TauState mid = tau_rk4(tau, p, 0.5 * dt);
  MomentumCoefficients m = rescaled_coefficients(p, mid.tau, mid.tau_dot);
  return coupled_step(s, m, 1.0 / (mid.tau * mid.tau), 0.0, dt, opt);
}

RescaledEnergy rescaled_energy(const ScalarField& Q, const VectorField& U, const TauState& tau, const TauParams& p,
                               double floor)
{
  FieldIntegrals fi = field_integrals(Q, U, floor);
  const double t = tau.tau, t2 = t * t, t3 = t2 * t, t4 = t2 * t2;
  const double k2 = p.kappa * p.kappa;
  const double nu = p.nu;
  const double kin = fi.q_u2 + k2 * fi.fisher;  // 4 kappa^2 int |grad sqrt Q|^2 = kappa^2 int Q |grad ln Q|^2
  const double w2 = fi.q_u2 + 4.0 * nu * fi.u_gradq + 4.0 * nu * nu * fi.fisher;
  RescaledEnergy e;
  e.E = kin / (2.0 * t2) + p.a * fi.q_logq;
  e.D = tau.tau_dot / t3 * kin + 2.0 * nu / t4 * fi.q_Du2;
  e.E_BD = (w2 + k2 * fi.fisher) / (2.0 * t2) + p.a * fi.q_logq;
  e.D_BD = tau.tau_dot / t3 * kin + 2.0 * nu / t4 * fi.q_Au2 + 2.0 * nu * k2 / t4 * fi.q_hess_logq2
           + 2.0 * nu * (p.a / t2 + k2 / t4) * fi.fisher;
  e.cross = tau.tau_dot / t3 * 2.0 * nu * fi.u_gradq;
  e.R_BD = 2.0 * nu / t4 * (fi.q_u2 + 2.0 * nu * fi.u_gradq);
  return e;
}

RescaledRun rescaled_integrate(const SimState& init, const TauParams& p, double dt, double t_final,
                               const SolverOptions& opt)
{
  if (!(dt > 0.0))
    throw Error(ErrorKind::InvalidParameter, "time step must be positive");
  if (std::abs(init.q.frame->sigma() - 1.0) > 1e-12)
    throw Error(ErrorKind::InvalidParameter, "the rescaled system uses a unit-width frame");
  RescaledRun run;
  const long steps = std::lround(t_final / dt);
  SimState s = init;
  TauState tau;
  tau.t = s.t;
  auto make = [&](const SimState& st, const TauState& ts) {
    RescaledRecord r;
    r.tau = ts;
    r.mass = integrate(st.q);
    r.e = rescaled_energy(st.q, st.u, ts, p, opt.floor);
    return r;
  };
  try {
    run.records.push_back(make(s, tau));
    for (long k = 1; k <= steps; ++k) {
      SimState next = rescaled_step(s, tau, p, dt, opt);
      TauState tn = tau_rk4(tau, p, dt);
      tn.t = k * dt;
      next.t = tn.t;
      RescaledRecord r = make(next, tn);
      const RescaledRecord& prev = run.records.back();
      const double F0 = prev.e.E + prev.e.E_BD, F1 = r.e.E + r.e.E_BD;
      const double D0 = prev.e.D + prev.e.D_BD - prev.e.R_BD, D1 = r.e.D + r.e.D_BD - r.e.R_BD;
      r.residual = (F1 - F0) / dt + 0.5 * (D0 + D1);
      run.max_residual = std::max(run.max_residual, std::abs(r.residual));
      run.records.push_back(r);
      s = std::move(next);
      tau = tn;
    }
  } catch (const Error& e) {
    run.ok = false;
    run.failure_kind = e.kind();
    run.failure = e.what();
  }
  run.final = s;
  run.final_tau = tau;
  return run;
}

}  // namespace qns
