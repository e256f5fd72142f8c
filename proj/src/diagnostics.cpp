#include "qns/diagnostics.hpp"

#include <cmath>

namespace qns {

FieldIntegrals field_integrals(const ScalarField& q, const VectorField& u, double floor)
{
  const FramePtr& f = q.frame;
  const Grid& g = f->fine();
  const int d = f->dim();
  const int n = g.size();
  const double s2 = f->sigma() * f->sigma();
  DensityJet J = density_jet(q);
  require_positive(g, J.q, floor);

  std::vector<Eigen::VectorXd> un(d), du(d * d);
  for (int i = 0; i < d; ++i) {
    un[i] = g.V * u.c.col(i);
    for (int l = 0; l < d; ++l)
      du[i * d + l] = g.G[l] * u.c.col(i);
  }

  FieldIntegrals r;
  r.min_q = INFINITY;
  r.max_q = -INFINITY;
  double gl[2], hl[4], sq[4];
  for (int k = 0; k < n; ++k) {
    // q-only polynomial integrands use the full padded rule; anything involving u,
    // whose nodal values outside the window carry no information, uses the window.
    const double wf = g.w[k];
    const double w = g.ww[k];
    const double qk = J.q[k];
    double sp2 = 0.0, x2 = 0.0, ux = 0.0, ugq = 0.0, Du2 = 0.0, Au2 = 0.0;
    for (int i = 0; i < d; ++i) {
      sp2 += un[i][k] * un[i][k];
      x2 += g.x(k, i) * g.x(k, i);
      ux += un[i][k] * g.x(k, i);
      ugq += un[i][k] * J.g[i][k];
      for (int l = 0; l < d; ++l) {
        double s = 0.5 * (du[i * d + l][k] + du[l * d + i][k]);
        double a = 0.5 * (du[i * d + l][k] - du[l * d + i][k]);
        Du2 += s * s;
        Au2 += a * a;
      }
    }
    r.mass += wf * qk;
    r.q_u2 += w * qk * sp2;
    r.u2 += w * sp2;
    r.q_u4 += w * qk * sp2 * sp2;
    r.q_Du2 += w * qk * Du2;
    r.q_Au2 += w * qk * Au2;
    r.u_gradq += w * ugq;
    r.u2u_gradq += w * sp2 * ugq;
    r.u_x += w * ux;
    r.q_u2u_x += w * qk * sp2 * ux;
    r.q_u_x += w * qk * ux;
    r.I2 += wf * qk * x2 / s2;
    r.I4 += wf * qk * x2 * x2 / (s2 * s2);
    for (int i = 0; i < d; ++i) {
      r.Mx[i] += wf * qk * g.x(k, i);
      r.Mu[i] += w * qk * un[i][k];
      double c = 0.0;
      for (int l = 0; l < d; ++l)
        c += du[i * d + l][k] * J.g[l][k];
      r.gradu_gradq_x += w * c * g.x(k, i);
    }

    if (!g.window[k])
      continue;
    r.min_q = std::min(r.min_q, qk);
    r.max_q = std::max(r.max_q, qk);
    const double rt = std::sqrt(qk);
    double gl2 = 0.0, hl2 = 0.0, sq2 = 0.0, dhl = 0.0, ggl = 0.0, g2 = 0.0;
    for (int i = 0; i < d; ++i) {
      gl[i] = J.g[i][k] / qk;
      gl2 += gl[i] * gl[i];
      g2 += J.g[i][k] * J.g[i][k];
    }
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        const double h = J.h[i * d + j][k];
        hl[i * d + j] = h / qk - gl[i] * gl[j];
        sq[i * d + j] = h / (2.0 * rt) - J.g[i][k] * J.g[j][k] / (4.0 * qk * rt);
        hl2 += hl[i * d + j] * hl[i * d + j];
        sq2 += sq[i * d + j] * sq[i * d + j];
        dhl += 0.5 * (du[i * d + j][k] + du[j * d + i][k]) * hl[i * d + j];
        ggl += du[i * d + j][k] * J.g[j][k] * gl[i];
      }
    }
    r.q_logq += w * qk * std::log(qk);
    r.logq += w * std::log(qk);
    r.fisher += w * qk * gl2;
    r.grad_logq2 += w * gl2;
    r.q_hess_logq2 += w * qk * hl2;
    r.q_Du_hess += w * qk * dhl;
    r.gradu_gradq_glog += w * ggl;
    r.hess_A += w * sq2;
    r.hess_B += w * g2 * g2 / (16.0 * qk * qk * qk);
  }
  r.hess_D = 0.25 * r.q_hess_logq2;
  return r;
}

EnergyTriple energy(const FieldIntegrals& fi, const ModelParams& p, double sigma, int dim)
{
  const double s2 = sigma * sigma;
  const double k2 = p.kappa * p.kappa;
  EnergyTriple e;
  e.E = 0.5 * fi.q_u2 + 0.5 * k2 * fi.fisher + p.a * fi.q_logq + 0.25 * p.r4 * fi.I4;
  e.D = 2.0 * p.nu * fi.q_Du2 + p.delta1 * p.lambda * s2 * fi.fisher + k2 * p.delta1 * fi.q_hess_logq2
        + p.r0 * fi.u2 + p.r1 * fi.q_u4 + p.r4 * p.delta1 / (4.0 * s2) * fi.I4;
  e.R = p.r4 * p.delta1 * (dim + 2) * fi.I2 / s2;
  return e;
}

EnergyTriple bd_entropy(const FieldIntegrals& fi, const ModelParams& p, double sigma, int dim)
{
  const double s2 = sigma * sigma;
  const double k2 = p.kappa * p.kappa;
  const double nu = p.nu, d1 = p.delta1;
  EnergyTriple e;
  // |u + 2 nu grad ln q|^2 q = q|u|^2 + 4 nu u.grad q + 4 nu^2 q |grad ln q|^2
  const double w2 = fi.q_u2 + 4.0 * nu * fi.u_gradq + 4.0 * nu * nu * fi.fisher;
  e.E = 0.5 * w2 + 0.5 * k2 * fi.fisher + p.a * fi.q_logq + 2.0 * nu * p.r0 * (fi.mass - fi.logq)
        + 0.25 * p.r4 * fi.I4;
  e.D = 2.0 * nu * fi.q_Au2 + (d1 + 2.0 * nu) * p.lambda * s2 * fi.fisher
        + (k2 * (d1 + 2.0 * nu) + 4.0 * nu * nu * d1) * fi.q_hess_logq2 + p.r0 * fi.u2
        + 2.0 * nu * p.r0 * d1 * fi.grad_logq2 + p.r1 * fi.q_u4 + p.r4 * (d1 + 2.0 * nu) * fi.I4 / s2;
  // q (u + 2 nu grad ln q).(u - d1 grad ln q)
  const double cross = fi.q_u2 + (2.0 * nu - d1) * fi.u_gradq - 2.0 * nu * d1 * fi.fisher;
  e.R = p.r4 * (d1 + 2.0 * nu) * (dim + 2) * fi.I2 / s2 - 2.0 * nu * d1 * fi.q_Du_hess
        - 2.0 * nu * d1 * fi.gradu_gradq_glog - 2.0 * nu * p.r1 * fi.u2u_gradq + 2.0 * nu / s2 * cross;
  return e;
}

EnergyTriple energy(const ScalarField& q, const VectorField& u, const ModelParams& p, double floor)
{
  return energy(field_integrals(q, u, floor), p, q.frame->sigma(), q.frame->dim());
}

EnergyTriple bd_entropy(const ScalarField& q, const VectorField& u, const ModelParams& p, double floor)
{
  return bd_entropy(field_integrals(q, u, floor), p, q.frame->sigma(), q.frame->dim());
}

double minimal_energy(const ModelParams& p, double sigma, int dim)
{
  const double s2 = sigma * sigma;
  return dim * (p.kappa * p.kappa / s2 - 0.5 * p.a * std::log(2.0 * M_PI * s2));
}

Moments moments(const ScalarField& q, const VectorField& u)
{
  const FramePtr& f = q.frame;
  const Grid& g = f->fine();
  const int d = f->dim();
  const double s2 = f->sigma() * f->sigma();
  Eigen::VectorXd qn = g.V * q.c;
  Moments m;
  for (int k = 0; k < g.size(); ++k) {
    double x2 = 0.0;
    for (int i = 0; i < d; ++i)
      x2 += g.x(k, i) * g.x(k, i);
    const double wq = g.w[k] * qn[k];
    m.mass += wq;
    m.I2 += wq * x2 / s2;
    m.I4 += wq * x2 * x2 / (s2 * s2);
    for (int i = 0; i < d; ++i) {
      m.Mx[i] += wq * g.x(k, i);
      m.Mu[i] += wq * g.V.row(k).dot(u.c.col(i));
    }
  }
  m.I2_tilde = m.I2 - d;
  return m;
}

namespace {

void require_normalized(const ScalarField& q)
{
  if (std::abs(integrate(q) - 1.0) > 1e-8)
    throw Error(ErrorKind::InvalidParameter, "density must have unit mass");
}

}  // namespace

LsiMargins check_log_sobolev(const ScalarField& q, double floor)
{
  require_normalized(q);
  FieldIntegrals fi = field_integrals(q, VectorField::zero(q.frame), floor);
  const double s2 = q.frame->sigma() * q.frame->sigma();
  const double grad_sqrt = 0.25 * fi.fisher;
  LsiMargins m;
  m.margin = 2.0 * s2 * grad_sqrt - fi.q_logq;
  m.margin_inverse = 2.0 / s2 * grad_sqrt - fi.q_logq;
  return m;
}

HessianLemma hessian_lemma(const FieldIntegrals& fi, double sigma)
{
  HessianLemma h;
  h.A = fi.hess_A;
  h.B = fi.hess_B;
  h.D = fi.hess_D;
  h.I4 = fi.I4;
  h.margin_intermediate = h.D + std::sqrt(3.0 * h.B * h.D) + std::pow(h.I4, 0.25) * std::pow(h.B, 0.75) / sigma
                          - (h.A + h.B);
  h.margin_final = 4.0 * h.D + 0.75 * h.I4 / std::pow(sigma, 4) - (h.A + 0.5 * h.B);
  return h;
}

HessianLemma check_hessian_lemma(const ScalarField& q, double floor)
{
  require_normalized(q);
  return hessian_lemma(field_integrals(q, VectorField::zero(q.frame), floor), q.frame->sigma());
}

namespace {

// int (1 + |x|^2) sum_i v_i^2 and int |x|^2 sum_i v_i^2 on the padded grid.
std::pair<double, double> weighted_norms(const Grid& g, const std::vector<Eigen::VectorXd>& v)
{
  double full = 0.0, xonly = 0.0;
  for (int k = 0; k < g.size(); ++k) {
    double x2 = 0.0, v2 = 0.0;
    for (int i = 0; i < g.x.cols(); ++i)
      x2 += g.x(k, i) * g.x(k, i);
    for (const auto& c : v)
      v2 += c[k] * c[k];
    full += g.w[k] * (1.0 + x2) * v2;
    xonly += g.w[k] * x2 * v2;
  }
  return {full, xonly};
}

double ratio(double num, double den)
{
  if (num == 0.0)
    return 0.0;
  return den > 0.0 ? num / den : INFINITY;
}

}  // namespace

PoincareReport check_poincare(const ScalarField& f)
{
  const Grid& g = f.frame->fine();
  Eigen::VectorXd c = f.c;
  c[0] = 0.0;
  auto [lhs2, unused] = weighted_norms(g, {g.V * c});
  auto [unused2, xf2] = weighted_norms(g, {g.V * f.c});
  double grad2 = 0.0;
  for (int j = 0; j < f.frame->dim(); ++j)
    grad2 += (f.frame->diff(j) * f.c).squaredNorm();
  PoincareReport r;
  const double lhs = std::sqrt(lhs2);
  r.strong_poincare = lhs < 1e-14 ? 0.0 : ratio(lhs, std::sqrt(grad2));
  r.weighted_bound = ratio(std::sqrt(xf2), std::sqrt(grad2) + f.c.norm());
  return r;
}

VectorField rotation_projection(const VectorField& u)
{
  const FramePtr& f = u.frame;
  VectorField p = VectorField::zero(f);
  if (f->dim() < 2 || f->degree() < 1)
    return p;
  const double s = f->sigma();
  const int e1 = f->index_of({1, 0});
  const int e2 = f->index_of({0, 1});
  // Generator (-y, x) has squared norm 2 sigma^2 and components -s phi_e2, s phi_e1.
  const double c = s * (u.c(e1, 1) - u.c(e2, 0)) / (2.0 * s * s);
  p.c(e2, 0) = -s * c;
  p.c(e1, 1) = s * c;
  return p;
}

KornReport check_korn(const VectorField& u)
{
  const FramePtr& f = u.frame;
  const Grid& g = f->fine();
  const int d = f->dim();
  Eigen::MatrixXd c = u.c - rotation_projection(u).c;
  c.row(0).setZero();
  std::vector<Eigen::VectorXd> rem(d), val(d);
  for (int i = 0; i < d; ++i) {
    rem[i] = g.V * c.col(i);
    val[i] = g.V * u.c.col(i);
  }
  Eigen::VectorXd xu = Eigen::VectorXd::Zero(g.size());
  for (int i = 0; i < d; ++i)
    xu += g.x.col(i).cwiseProduct(val[i]);
  auto [lhs2, unused] = weighted_norms(g, rem);
  double xu2 = g.w.dot(xu.cwiseAbs2());
  const double Dn = std::sqrt(grad_parts(u).first.c.squaredNorm());
  KornReport r;
  r.lhs = std::sqrt(lhs2);
  r.rhs = Dn;
  r.strong_korn = r.lhs < 1e-12 * (1.0 + u.c.norm()) ? 0.0 : ratio(r.lhs, Dn);
  r.transport_bound = ratio(std::sqrt(xu2), Dn + u.c.norm());
  return r;
}

double i2_forcing(const FieldIntegrals& fi, const ModelParams& p, double sigma, int dim)
{
  const double s2 = sigma * sigma;
  const double k2 = p.kappa * p.kappa;
  const double d1 = p.delta1;
  double F = 2.0 / s2 * (fi.q_u2 + k2 * fi.fisher) + 4.0 * p.nu / s2 * fi.u_gradq - 2.0 * p.r0 / s2 * fi.u_x
             - 2.0 * p.r1 / s2 * fi.q_u2u_x - 2.0 * p.r4 / s2 * fi.I4;
  // Extra terms produced by the diffusion of the density when delta1 > 0.
  const double I2t = fi.I2 - dim * fi.mass;
  F += -2.0 * d1 / s2 * fi.gradu_gradq_x - 4.0 * d1 / (s2 * s2) * fi.q_u_x
       + 4.0 * d1 * (d1 - p.nu) / (s2 * s2) * I2t;
  return F;
}

DiagnosticsRecord diagnose(const SimState& s, const ModelParams& p, double floor)
{
  const FramePtr& f = s.q.frame;
  const double sigma = f->sigma();
  const int d = f->dim();
  FieldIntegrals fi = field_integrals(s.q, s.u, floor);
  EnergyTriple e = energy(fi, p, sigma, d);
  EnergyTriple b = bd_entropy(fi, p, sigma, d);
  HessianLemma h = hessian_lemma(fi, sigma);
  const double s2 = sigma * sigma;

  DiagnosticsRecord r;
  r.dim = d;
  r.t = s.t;
  r.mass = fi.mass;
  r.E_reg = e.E;
  r.D_reg = e.D;
  r.R_reg = e.R;
  r.E_BD = b.E;
  r.D_BD = b.D;
  r.R_BD = b.R;
  r.I2 = fi.I2;
  r.I2_tilde = fi.I2 - d * fi.mass;
  r.I4 = fi.I4;
  r.Mx = fi.Mx;
  r.Mu = fi.Mu;
  r.min_q = fi.min_q;
  r.max_q = fi.max_q;
  r.lsi_margin = 2.0 * s2 * 0.25 * fi.fisher - fi.q_logq;
  r.lsi_margin_inverse = 2.0 / s2 * 0.25 * fi.fisher - fi.q_logq;
  r.hessian_intermediate = h.margin_intermediate;
  r.hessian_final = h.margin_final;
  r.i2_forcing = i2_forcing(fi, p, sigma, d);
  r.envelope_ok = envelope_check(s.q, s.env);
  return r;
}

double i2_ode_residual(const std::vector<DiagnosticsRecord>& traj, const ModelParams& p, double sigma)
{
  const size_t n = traj.size();
  if (n < 5)
    throw Error(ErrorKind::InvalidParameter, "second-moment residual needs at least five samples");
  const double h = traj[1].t - traj[0].t;
  if (!(h > 0.0))
    throw Error(ErrorKind::InvalidParameter, "trajectory times must increase");
  for (size_t k = 1; k < n; ++k)
    if (std::abs(traj[k].t - traj[k - 1].t - h) > 1e-9 * std::max(1.0, std::abs(traj[k].t)))
      throw Error(ErrorKind::InvalidParameter, "second-moment residual needs uniformly spaced samples");
  const double s2 = sigma * sigma;
  const double stiff = 2.0 * (p.lambda + p.kappa * p.kappa / (s2 * s2));
  double worst = 0.0;
  for (size_t k = 2; k + 2 < n; ++k) {
    const double fm2 = traj[k - 2].I2_tilde, fm1 = traj[k - 1].I2_tilde, f0 = traj[k].I2_tilde;
    const double fp1 = traj[k + 1].I2_tilde, fp2 = traj[k + 2].I2_tilde;
    const double d2 = (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h);
    const double d1 = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h);
    const double res = d2 + 2.0 * p.nu / s2 * d1 + stiff * f0 - traj[k].i2_forcing;
    worst = std::max(worst, std::abs(res));
  }
  return worst;
}

AuditReport energy_inequality_audit(const std::vector<DiagnosticsRecord>& traj, const ModelParams& p,
                                    double sigma)
{
  AuditReport r;
  if (traj.empty())
    return r;
  const int d = traj.front().dim;
  const double allowance = 2.0 * p.r4 * p.delta1 * (d + 2) * (d + 2) / (sigma * sigma);
  const DiagnosticsRecord& first = traj.front();
  double int_D = 0.0, int_DBD = 0.0, int_RBD = 0.0;
  r.min_E_BD = first.E_BD;
  r.envelope_ok = first.envelope_ok;
  for (size_t k = 0; k < traj.size(); ++k) {
    const DiagnosticsRecord& c = traj[k];
    if (k > 0) {
      const DiagnosticsRecord& pr = traj[k - 1];
      const double dt = c.t - pr.t;
      int_D += 0.5 * dt * (pr.D_reg + c.D_reg);
      int_DBD += 0.5 * dt * (pr.D_BD + c.D_BD);
      int_RBD += 0.5 * dt * (pr.R_BD + c.R_BD);
    }
    const double ev = c.E_reg + 0.5 * int_D - (first.E_reg + allowance * (c.t - first.t));
    const double bv = c.E_BD + 0.5 * int_DBD - (first.E_BD + int_RBD);
    r.energy_violation = std::max(r.energy_violation, ev);
    r.bd_violation = std::max(r.bd_violation, bv);
    r.min_E_BD = std::min(r.min_E_BD, c.E_BD);
    r.max_mass_drift = std::max(r.max_mass_drift, std::abs(c.mass - first.mass));
    r.envelope_ok = r.envelope_ok && c.envelope_ok;
  }
  return r;
}

}  // namespace qns
