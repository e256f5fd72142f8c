#include "qns/continuation.hpp"

#include <cmath>

#include <boost/math/quadrature/gauss.hpp>

#include "qns/driver.hpp"

namespace qns {

double cutoff_chi(double r)
{
  r = std::abs(r);
  if (r <= 0.5)
    return 1.0;
  if (r >= 1.0)
    return 0.0;
  const double t = 2.0 * (r - 0.5);
  return 1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
}

double mollifier_zeta(double r, int dim)
{
  r = std::abs(r);
  if (r >= 1.0)
    return 0.0;
  const double b = 1.0 - r * r;
  const double c = dim == 1 ? 35.0 / 32.0 : 4.0 / M_PI;
  return c * b * b * b;
}

double renormalization_cutoff(double y, double l)
{
  if (!(l >= 1.0))
    throw Error(ErrorKind::InvalidParameter, "cutoff index must be at least 1");
  if (y >= 1.0 / l && y <= l)
    return 1.0;
  if (y >= 0.5 / l && y < 1.0 / l)
    return 2.0 * l * y - 1.0;
  if (y > l && y <= 2.0 * l)
    return 2.0 - y / l;
  return 0.0;
}

namespace {

using Rule = boost::math::quadrature::gauss<double, 30>;

// (g * zeta_n)(x) with g(y) = sqrt(max(q0(y), 0)) chi(|y|/n) + 1/n.
double convolved(const ScalarField& q0, int n, const double* x)
{
  const int d = q0.frame->dim();
  auto g = [&](const double* y) {
    double r2 = 0.0;
    for (int j = 0; j < d; ++j)
      r2 += y[j] * y[j];
    return std::sqrt(std::max(q0.at(y), 0.0)) * cutoff_chi(std::sqrt(r2) / n) + 1.0 / n;
  };
  if (d == 1) {
    return Rule::integrate(
        [&](double z) {
          double y[2] = {x[0] - z / n, 0.0};
          return mollifier_zeta(z, 1) * g(y);
        },
        -1.0, 1.0);
  }
  constexpr int kAngles = 32;
  return Rule::integrate(
      [&](double r) {
        double acc = 0.0;
        for (int a = 0; a < kAngles; ++a) {
          const double th = 2.0 * M_PI * a / kAngles;
          double y[2] = {x[0] - r * std::cos(th) / n, x[1] - r * std::sin(th) / n};
          acc += g(y);
        }
        return r * mollifier_zeta(r, 2) * acc * (2.0 * M_PI / kAngles);
      },
      0.0, 1.0);
}

}  // namespace

MollifiedData mollify_initial_data(const ScalarField& q0, const VectorField& u0, int n, double floor)
{
  if (n < 1)
    throw Error(ErrorKind::InvalidParameter, "mollification index must be at least 1");
  const FramePtr& f = q0.frame;
  const Grid& g = f->fine();
  const int d = f->dim();
  Eigen::VectorXd s(g.size());
  for (int k = 0; k < g.size(); ++k)
    s[k] = convolved(q0, n, &g.x(k, 0));
  // The square root is projected onto degree N/2 and squared, so q_n stays a
  // non-negative element of the degree-N space with unit mass exactly.
  ScalarField root = project_fine(f, s);
  for (int k = 0; k < f->size(); ++k)
    if (2 * f->total_degree(k) > f->degree())
      root.c[k] = 0.0;
  root.c /= root.c.norm();

  MollifiedData out;
  out.q = multiply(root, root);
  out.q.c /= out.q.c[0];
  Eigen::VectorXd qv = g.V * out.q.c;
  require_positive(g, qv, floor);
  out.min_q = INFINITY;
  for (int k = 0; k < g.size(); ++k)
    if (g.window[k])
      out.min_q = std::min(out.min_q, qv[k]);

  Eigen::VectorXd q0v = g.V * q0.c;
  Eigen::MatrixXd un(g.size(), d);
  for (int k = 0; k < g.size(); ++k) {
    double r2 = 0.0;
    for (int j = 0; j < d; ++j)
      r2 += g.x(k, j) * g.x(k, j);
    const double ratio = std::sqrt(std::max(q0v[k], 0.0)) * cutoff_chi(std::sqrt(r2) / n)
                         / std::sqrt(std::max(qv[k], floor));
    for (int j = 0; j < d; ++j)
      un(k, j) = ratio * g.V.row(k).dot(u0.c.col(j));
  }
  if (u0.c.cwiseAbs().maxCoeff() == 0.0)
    out.u = VectorField::zero(f);
  else
    out.u = project_initial_velocity(out.q, un, floor);
  return out;
}

DragSchedule drag_schedule(int n, const ScalarField& q0n, double delta1, double floor)
{
  if (n < 1)
    throw Error(ErrorKind::InvalidParameter, "schedule index must be at least 1");
  FieldIntegrals fi = field_integrals(q0n, VectorField::zero(q0n.frame), floor);
  const double ent = fi.mass - fi.logq;
  DragSchedule s;
  s.n = n;
  s.r1n = 1.0 / n;
  s.r0n = 1.0 / (n + ent * ent);
  s.r4n = 1.0 / (n + fi.I4 * fi.I4);
  s.delta1n = delta1 / n;
  s.r0_product = s.r0n * ent;
  s.r4_product = s.r4n * fi.I4;
  return s;
}

double sqrt_h1_distance(const ScalarField& qa, const ScalarField& qb, double floor)
{
  const Grid& g = qa.frame->fine();
  const int d = qa.frame->dim();
  Eigen::VectorXd a = g.V * qa.c, b = g.V * qb.c;
  require_positive(g, a, floor);
  require_positive(g, b, floor);
  double acc = 0.0;
  for (int k = 0; k < g.size(); ++k) {
    if (!g.window[k])
      continue;
    const double sa = std::sqrt(a[k]), sb = std::sqrt(b[k]);
    double v = (sa - sb) * (sa - sb);
    for (int j = 0; j < d; ++j) {
      const double ga = g.G[j].row(k).dot(qa.c) / (2.0 * sa);
      const double gb = g.G[j].row(k).dot(qb.c) / (2.0 * sb);
      v += (ga - gb) * (ga - gb);
    }
    acc += g.w[k] * v;
  }
  return std::sqrt(acc);
}

double momentum_l2_distance(const SimState& a, const SimState& b, double floor)
{
  const Grid& g = a.q.frame->fine();
  const int d = a.q.frame->dim();
  Eigen::VectorXd qa = g.V * a.q.c, qb = g.V * b.q.c;
  require_positive(g, qa, floor);
  require_positive(g, qb, floor);
  double acc = 0.0;
  for (int k = 0; k < g.size(); ++k) {
    if (!g.window[k])
      continue;
    const double sa = std::sqrt(qa[k]), sb = std::sqrt(qb[k]);
    for (int j = 0; j < d; ++j) {
      const double m = sa * g.V.row(k).dot(a.u.c.col(j)) - sb * g.V.row(k).dot(b.u.c.col(j));
      acc += g.w[k] * m * m;
    }
  }
  return std::sqrt(acc);
}

SweepReport vanishing_drag_sweep(const SweepSpec& spec)
{
  for (size_t k = 1; k < spec.n_list.size(); ++k)
    if (spec.n_list[k] <= spec.n_list[k - 1])
      throw Error(ErrorKind::InvalidParameter, "sweep indices must increase");
  SweepReport rep;
  RunOptions ro;
  ro.dt = spec.dt;
  ro.t_final = spec.t_final;
  ro.record_every = spec.record_every;
  ro.keep_snapshots = true;
  ro.solver = spec.solver;
  const double sigma = spec.q0.frame->sigma();

  for (size_t k = 0; k < spec.n_list.size(); ++k) {
    SweepMember m;
    m.n = spec.n_list[k];
    try {
      MollifiedData data = mollify_initial_data(spec.q0, spec.u0, m.n, spec.solver.floor);
      m.drag = drag_schedule(m.n, data.q, spec.base.delta1, spec.solver.floor);
      ModelParams p = spec.base;
      p.r0 = m.drag.r0n;
      p.r1 = m.drag.r1n;
      p.r4 = m.drag.r4n;
      p.delta1 = m.drag.delta1n;
      RunResult run = integrate(make_state(data.q, data.u), p, ro);
      m.records = std::move(run.records);
      m.snapshots = std::move(run.snapshots);
      m.ok = run.ok;
      m.failure = run.failure;
      if (run.ok)
        m.audit = energy_inequality_audit(m.records, p, sigma);
    } catch (const Error& e) {
      m.ok = false;
      m.failure = e.what();
    }
    rep.members.push_back(std::move(m));
    if (!rep.members.back().ok) {
      rep.failed_index = static_cast<int>(k);
      break;
    }
  }

  rep.audits_ok = rep.failed_index < 0;
  for (const SweepMember& m : rep.members)
    rep.audits_ok = rep.audits_ok && m.audit.energy_violation <= spec.audit_tol
                    && m.audit.bd_violation <= spec.audit_tol && m.audit.min_E_BD >= 0.0;

  for (size_t k = 1; k < rep.members.size(); ++k) {
    const SweepMember& a = rep.members[k - 1];
    const SweepMember& b = rep.members[k];
    const size_t len = std::min(a.snapshots.size(), b.snapshots.size());
    double h1 = 0.0, l2 = 0.0;
    for (size_t i = 0; i < len; ++i) {
      h1 = std::max(h1, sqrt_h1_distance(a.snapshots[i].q, b.snapshots[i].q, spec.solver.floor));
      l2 = std::max(l2, momentum_l2_distance(a.snapshots[i], b.snapshots[i], spec.solver.floor));
    }
    rep.h1_increments.push_back(h1);
    rep.l2_increments.push_back(l2);
  }
  rep.monotone = rep.failed_index < 0;
  for (size_t k = spec.burn_in + 1; k < rep.h1_increments.size(); ++k)
    rep.monotone = rep.monotone && rep.h1_increments[k] <= rep.h1_increments[k - 1]
                   && rep.l2_increments[k] <= rep.l2_increments[k - 1];
  return rep;
}

}  // namespace qns
