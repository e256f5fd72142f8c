#include "qns/galerkin.hpp"

#include <cmath>
#include <sstream>

namespace qns {

MomentumCoefficients momentum_coefficients(const ModelParams& p, const Frame& frame)
{
  const double s2 = frame.sigma() * frame.sigma();
  MomentumCoefficients m;
  m.transport = 1.0;
  m.nu = p.nu;
  m.kappa2 = p.kappa * p.kappa;
  m.pressure = p.lambda * s2;
  m.delta1 = p.delta1;
  m.r0 = p.r0;
  m.r1 = p.r1;
  m.r4 = p.r4;
  return m;
}

MassOperator assemble_mass(const ScalarField& q)
{
  const Grid& g = q.frame->fine();
  Eigen::VectorXd wq = g.ww.cwiseProduct(g.V * q.c);
  MassOperator M;
  M.dim = q.frame->dim();
  M.block = g.V.transpose() * (g.V.array().colwise() * wq.array()).matrix();
  M.block = 0.5 * (M.block + M.block.transpose()).eval();
  return M;
}

namespace {

Eigen::LLT<Eigen::MatrixXd> factor(const MassOperator& M)
{
  Eigen::LLT<Eigen::MatrixXd> llt(M.block);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorKind::StepFailure, "mass operator is not positive definite");
  return llt;
}

}  // namespace

VectorField project_initial_velocity(const ScalarField& q0, const Eigen::MatrixXd& u0, double floor)
{
  const FramePtr& f = q0.frame;
  const Grid& g = f->fine();
  if (u0.rows() != g.size() || u0.cols() != f->dim())
    throw Error(ErrorKind::Dimension, "initial velocity samples do not match the padded grid");
  Eigen::VectorXd qn = g.V * q0.c;
  require_positive(g, qn, floor);
  Eigen::VectorXd wq = g.ww.cwiseProduct(qn);
  Eigen::MatrixXd b = g.V.transpose() * (u0.array().colwise() * wq.array()).matrix();
  auto llt = factor(assemble_mass(q0));
  return {f, llt.solve(b)};
}

Eigen::MatrixXd momentum_rhs(const ScalarField& q, const VectorField& u, const ModelParams& p, double floor)
{
  return momentum_rhs(q, u, momentum_coefficients(p, *q.frame), floor);
}

Eigen::MatrixXd momentum_rhs(const ScalarField& q, const VectorField& u, const MomentumCoefficients& m,
                             double floor)
{
  const FramePtr& f = q.frame;
  const Grid& g = f->fine();
  const int d = f->dim();
  const int n = g.size();
  const double s4 = std::pow(f->sigma(), 4);
  DensityJet J = density_jet(q);

  std::vector<Eigen::VectorXd> un(d), du(d * d);
  for (int i = 0; i < d; ++i) {
    un[i] = g.V * u.c.col(i);
    for (int l = 0; l < d; ++l)
      du[i * d + l] = g.G[l] * u.c.col(i);
  }
  NodalTensor S;
  if (m.kappa2 != 0.0)
    S = korteweg_tensor(q, floor);

  Eigen::VectorXd speed2 = Eigen::VectorXd::Zero(n), r2 = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < d; ++i) {
    speed2 += un[i].cwiseAbs2();
    r2 += g.x.col(i).cwiseAbs2();
  }

  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(f->size(), d);
  Eigen::VectorXd T(n), Z(n);
  for (int i = 0; i < d; ++i) {
    for (int l = 0; l < d; ++l) {
      for (int k = 0; k < n; ++k) {
        double Dil = 0.5 * (du[i * d + l][k] + du[l * d + i][k]);
        double v = m.transport * J.q[k] * un[l][k] * un[i][k] - 2.0 * m.nu * J.q[k] * Dil;
        if (m.kappa2 != 0.0)
          v -= 2.0 * m.kappa2 * S(i, l)[k];
        T[k] = g.ww[k] * v;
      }
      out.col(i) += g.G[l].transpose() * T;
    }
    for (int k = 0; k < n; ++k) {
      double v = -m.pressure * J.g[i][k];
      if (m.delta1 != 0.0) {
        double c = 0.0;
        for (int l = 0; l < d; ++l)
          c += du[i * d + l][k] * J.g[l][k];
        v -= m.delta1 * c;
      }
      v -= m.r1 * J.q[k] * speed2[k] * un[i][k];
      v -= (m.r4 / s4) * J.q[k] * r2[k] * g.x(k, i);
      Z[k] = g.ww[k] * v;
    }
    out.col(i) += g.V.transpose() * Z;
    out.col(i) -= m.r0 * u.c.col(i);
  }
  return out;
}

SimState make_state(const ScalarField& q, const VectorField& u, double t)
{
  SimState s;
  s.q = q;
  s.u = u;
  s.t = t;
  s.env = envelope_init(q);
  return s;
}

SimState coupled_step(const SimState& s, const ModelParams& p, double dt, const SolverOptions& opt)
{
  return coupled_step(s, momentum_coefficients(p, *s.q.frame), 1.0, p.delta1, dt, opt);
}

Eigen::MatrixXd momentum_linearization(const ScalarField& q, const VectorField& u, const MomentumCoefficients& m)
{
  const FramePtr& f = q.frame;
  const Grid& g = f->fine();
  const int d = f->dim(), nb = f->size();
  Eigen::VectorXd qn = g.V * q.c;
  Eigen::VectorXd wq = g.ww.cwiseProduct(qn);
  Eigen::VectorXd speed2 = Eigen::VectorXd::Zero(g.size());
  for (int i = 0; i < d; ++i)
    speed2 += (g.V * u.c.col(i)).cwiseAbs2();

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nb * d, nb * d);
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(nb, nb);
  for (int l = 0; l < d; ++l)
    lap += g.G[l].transpose() * (g.G[l].array().colwise() * wq.array()).matrix();
  Eigen::VectorXd zero_order = m.r1 * wq.cwiseProduct(speed2);
  Eigen::MatrixXd mass = g.V.transpose() * (g.V.array().colwise() * zero_order.array()).matrix();
  Eigen::MatrixXd coupling = Eigen::MatrixXd::Zero(nb, nb);
  if (m.delta1 != 0.0) {
    Eigen::MatrixXd dq_grad = Eigen::MatrixXd::Zero(g.size(), nb);
    for (int l = 0; l < d; ++l)
      dq_grad += (g.G[l].array().colwise() * (g.ww.array() * (g.G[l] * q.c).array())).matrix();
    coupling = g.V.transpose() * dq_grad;
  }
  for (int i = 0; i < d; ++i) {
    auto blk = A.block(i * nb, i * nb, nb, nb);
    blk -= m.nu * lap + mass + m.delta1 * coupling;
    blk.diagonal().array() -= m.r0;
    for (int j = 0; j < d; ++j)
      A.block(i * nb, j * nb, nb, nb) -= m.nu * g.G[j].transpose() * (g.G[i].array().colwise() * wq.array()).matrix();
  }
  return A;
}

SimState coupled_step(const SimState& s, const MomentumCoefficients& m, double advect_scale, double delta1,
                      double dt, const SolverOptions& opt)
{
  if (!(dt > 0.0))
    throw Error(ErrorKind::InvalidParameter, "time step must be positive");
  const FramePtr& f = s.q.frame;
  MassOperator M0 = assemble_mass(s.q);
  const Eigen::MatrixXd b0 = M0.block * s.u.c;
  FpOptions fo;
  fo.sweeps = opt.fp_sweeps;
  fo.advect_scale = advect_scale;

  // Defect correction with the terms linear in u (viscosity, drags, diffusion coupling)
  // frozen at the start of the step; its fixed point is the implicit midpoint update.
  const int nb = f->size(), d = f->dim();
  Eigen::MatrixXd S = -0.5 * dt * momentum_linearization(s.q, s.u, m);
  for (int i = 0; i < d; ++i)
    S.block(i * nb, i * nb, nb, nb) += M0.block;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(S);

  Eigen::MatrixXd U = s.u.c;
  ScalarField q_new = s.q;
  bool converged = false;
  int growth = 0;
  double prev = INFINITY;
  int it = 0;
  for (; it < opt.picard_max; ++it) {
    VectorField u_mid{f, 0.5 * (s.u.c + U)};
    q_new = fp_step(s.q, u_mid, delta1, dt, fo);
    ScalarField q_mid{f, 0.5 * (s.q.c + q_new.c)};
    Eigen::MatrixXd rhs = momentum_rhs(q_mid, u_mid, m, opt.floor);
    MassOperator M1 = assemble_mass(q_new);
    Eigen::MatrixXd defect = b0 + dt * rhs - M1.block * U;
    Eigen::VectorXd step = lu.solve(Eigen::Map<const Eigen::VectorXd>(defect.data(), defect.size()));
    Eigen::MatrixXd dU = Eigen::Map<const Eigen::MatrixXd>(step.data(), nb, d);
    Eigen::MatrixXd U_next = U + dU;
    double change = std::sqrt(std::max(0.0, (dU.transpose() * M1.block * dU).trace()));
    U = std::move(U_next);
    if (change < opt.picard_tol) {
      converged = true;
      ++it;
      break;
    }
    growth = change > prev ? growth + 1 : 0;
    if (growth >= 3)
      break;
    prev = change;
  }
  if (!converged) {
    std::ostringstream os;
    os << "coupled Picard iteration did not converge in " << it << " sweeps at t = " << s.t << "; reduce dt";
    throw Error(ErrorKind::StepFailure, os.str());
  }
  require_positive(f->fine(), f->fine().V * q_new.c, opt.floor);
  if (std::abs(q_new.c[0] - s.q.c[0]) > opt.mass_tol)
    throw Error(ErrorKind::Consistency, "mass drift exceeds tolerance");

  SimState out;
  out.q = q_new;
  out.u = VectorField{f, U};
  out.t = s.t + dt;
  out.sweeps = it;
  VectorField ue{f, U * advect_scale};
  out.env = s.env;
  if (out.env.last_sup < 0.0)
    out.env = envelope_update(out.env, VectorField{f, s.u.c * advect_scale}, 0.0);
  out.env = envelope_update(out.env, ue, dt);
  return out;
}

SimState recenter(const SimState& s, std::string* warning)
{
  const FramePtr& f = s.q.frame;
  const Grid& g = f->fine();
  const int d = f->dim();
  const double s2 = f->sigma() * f->sigma();
  const double mass = s.q.c[0];
  double Mx[2] = {0.0, 0.0}, Mu[2] = {0.0, 0.0};
  for (int j = 0; j < d; ++j) {
    Mx[j] = integrate(multiply_coordinate(s.q, j)) / mass;
    Mu[j] = integrate(multiply(s.q, s.u.component(j))) / mass;
  }
  double shift2 = Mx[0] * Mx[0] + Mx[1] * Mx[1];
  if (warning && std::sqrt(shift2) > 2.0 * f->sigma())
    *warning = "recentering shift exceeds two standard deviations of the reference measure";
  Eigen::VectorXd qv(g.size());
  Eigen::MatrixXd uv(g.size(), d);
  for (int k = 0; k < g.size(); ++k) {
    double y[2] = {0.0, 0.0};
    double xm = 0.0;
    for (int j = 0; j < d; ++j) {
      y[j] = g.x(k, j) + Mx[j];
      xm += g.x(k, j) * Mx[j];
    }
    Eigen::RowVectorXd b = f->basis_at(y);
    qv[k] = b.dot(s.q.c) * std::exp(-(2.0 * xm + shift2) / (2.0 * s2));
    for (int j = 0; j < d; ++j)
      uv(k, j) = b.dot(s.u.c.col(j)) - Mu[j];
  }
  SimState out = s;
  out.q = project_fine(f, qv);
  Eigen::MatrixXd uc = g.V.transpose() * (uv.array().colwise() * g.w.array()).matrix();
  out.u = VectorField{f, uc};
  out.env = envelope_init(out.q);
  return out;
}

}  // namespace qns
