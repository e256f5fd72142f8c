#include "qns/fokker_planck.hpp"

#include <cmath>

namespace qns {

double PositivityEnvelope::lower() const
{
  return c0 * std::exp(-accumulated);
}

double PositivityEnvelope::upper() const
{
  return std::exp(accumulated) / c0;
}

PositivityEnvelope envelope_init(const ScalarField& q)
{
  const Grid& g = q.frame->fine();
  Eigen::VectorXd v = g.V * q.c;
  double lo = INFINITY, hi = -INFINITY;
  for (int k = 0; k < g.size(); ++k) {
    if (!g.window[k])
      continue;
    lo = std::min(lo, v[k]);
    hi = std::max(hi, v[k]);
  }
  PositivityEnvelope env;
  env.c0 = std::min(lo, 1.0 / hi);
  return env;
}

double div_m_sup(const VectorField& u)
{
  const Grid& g = u.frame->fine();
  Eigen::VectorXd v = g.V * div_m(u).c;
  double s = 0.0;
  for (int k = 0; k < g.size(); ++k)
    if (g.window[k])
      s = std::max(s, std::abs(v[k]));
  return s;
}

PositivityEnvelope envelope_update(const PositivityEnvelope& env, const VectorField& u, double dt)
{
  PositivityEnvelope out = env;
  double s = div_m_sup(u);
  double prev = env.last_sup < 0.0 ? s : env.last_sup;
  out.accumulated += 0.5 * dt * (prev + s);
  out.last_sup = s;
  return out;
}

bool envelope_check(const ScalarField& q, const PositivityEnvelope& env, double eps)
{
  const Grid& g = q.frame->fine();
  Eigen::VectorXd v = g.V * q.c;
  const double lo = env.lower() - eps, hi = env.upper() + eps;
  for (int k = 0; k < g.size(); ++k)
    if (g.window[k] && (v[k] < lo || v[k] > hi))
      return false;
  return true;
}

ScalarField ou_semigroup(const ScalarField& q, double s, double delta1)
{
  if (s < 0.0)
    throw Error(ErrorKind::InvalidParameter, "semigroup time must be non-negative");
  ScalarField r = q;
  if (delta1 == 0.0 || s == 0.0)
    return r;
  const double s2 = q.frame->sigma() * q.frame->sigma();
  for (int k = 0; k < r.c.size(); ++k)
    r.c[k] *= std::exp(-delta1 * q.frame->total_degree(k) * s / s2);
  return r;
}

Eigen::VectorXd advection(const ScalarField& q, const VectorField& u)
{
  const Grid& g = q.frame->fine();
  Eigen::VectorXd wq = g.ww.cwiseProduct(g.V * q.c);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(q.frame->size());
  for (int j = 0; j < q.frame->dim(); ++j)
    out += g.G[j].transpose() * wq.cwiseProduct(g.V * u.c.col(j));
  return out;
}

ScalarField fp_step(const ScalarField& q, const VectorField& u, double delta1, double dt, const FpOptions& opt)
{
  if (!(dt > 0.0))
    throw Error(ErrorKind::InvalidParameter, "time step must be positive");
  const FramePtr& f = q.frame;
  VectorField ue{u.frame, u.c * opt.advect_scale};
  if (ue.c.cwiseAbs().maxCoeff() == 0.0)
    return ou_semigroup(q, dt, delta1);

  ScalarField base_half = ou_semigroup(q, 0.5 * dt, delta1);
  ScalarField mid = base_half;
  double prev_change = INFINITY;
  for (int it = 0; it < opt.sweeps; ++it) {
    ScalarField F{f, advection(mid, ue)};
    ScalarField next = ou_semigroup(F, 0.25 * dt, delta1);
    next.c = base_half.c + 0.5 * dt * next.c;
    double change = (next.c - mid.c).norm();
    mid = std::move(next);
    if (it >= 2 && change > prev_change && change > 1e-12 * (1.0 + mid.c.norm()))
      throw Error(ErrorKind::StepFailure, "Fokker-Planck Picard iteration diverges; reduce dt");
    prev_change = change;
  }
  ScalarField F{f, advection(mid, ue)};
  ScalarField out = ou_semigroup(q, dt, delta1);
  out.c += dt * ou_semigroup(F, 0.5 * dt, delta1).c;
  return out;
}

}  // namespace qns
