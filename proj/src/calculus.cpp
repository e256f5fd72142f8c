#include "qns/calculus.hpp"

#include <cmath>
#include <limits>

namespace qns {

void ModelParams::validate() const
{
  if (!(a > 0.0) || !(nu > 0.0) || !(lambda > 0.0))
    throw Error(ErrorKind::InvalidParameter, "a, nu and lambda must be positive");
  if (!(kappa >= 0.0))
    throw Error(ErrorKind::InvalidParameter, "kappa must be non-negative");
  for (double r : {r0, r1, r4, delta1})
    if (!(r >= 0.0 && r <= 1.0))
      throw Error(ErrorKind::InvalidParameter, "drag and diffusion coefficients must lie in [0, 1]");
}

DensityJet density_jet(const ScalarField& q)
{
  const Grid& g = q.frame->fine();
  const int d = q.frame->dim();
  DensityJet j;
  j.q = g.V * q.c;
  for (int a = 0; a < d; ++a)
    j.g.push_back(g.G[a] * q.c);
  for (int a = 0; a < d * d; ++a)
    j.h.push_back(g.H[a] * q.c);
  return j;
}

void require_positive(const Grid& grid, const Eigen::VectorXd& q, double floor)
{
  for (int i = 0; i < grid.size(); ++i) {
    if (grid.window[i] && !(q[i] >= floor)) {
      double x1 = grid.x.cols() > 1 ? grid.x(i, 1) : std::numeric_limits<double>::quiet_NaN();
      throw PositivityError(i, grid.x(i, 0), x1, q[i], floor);
    }
  }
}

ScalarField div_m(const VectorField& v)
{
  const FramePtr& f = v.frame;
  const double s2 = f->sigma() * f->sigma();
  Eigen::VectorXd c = Eigen::VectorXd::Zero(f->size());
  for (int j = 0; j < f->dim(); ++j)
    c += f->diff(j) * v.c.col(j) - (f->xmul(j) * v.c.col(j)) / s2;
  return {f, c};
}

TensorField velocity_gradient(const VectorField& u)
{
  const int d = u.frame->dim();
  TensorField t{u.frame, Eigen::MatrixXd(u.frame->size(), d * d), Symmetry::General};
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      t.c.col(i * d + j) = u.frame->diff(j) * u.c.col(i);
  return t;
}

std::pair<TensorField, TensorField> grad_parts(const VectorField& u)
{
  const int d = u.frame->dim();
  TensorField g = velocity_gradient(u);
  TensorField D{u.frame, g.c, Symmetry::Symmetric};
  TensorField A{u.frame, g.c, Symmetry::Skew};
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      D.c.col(i * d + j) = 0.5 * (g.c.col(i * d + j) + g.c.col(j * d + i));
      A.c.col(i * d + j) = 0.5 * (g.c.col(i * d + j) - g.c.col(j * d + i));
    }
  }
  return {D, A};
}

namespace {

NodalTensor empty_tensor(int d, int n, Symmetry s)
{
  NodalTensor t;
  t.dim = d;
  t.symmetry = s;
  t.e.assign(d * d, Eigen::VectorXd::Zero(n));
  return t;
}

// Derivatives of rho = q rho_m up to third order, each divided by rho_m.
struct RhoJet
{
  Eigen::VectorXd r;
  std::vector<Eigen::VectorXd> r1, r2, r3;
};

RhoJet rho_jet(const ScalarField& q, bool third)
{
  const FramePtr& f = q.frame;
  const Grid& g = f->fine();
  const int d = f->dim();
  const int n = g.size();
  const double s2 = f->sigma() * f->sigma();
  auto coeff = [&](std::initializer_list<int> axes) {
    Eigen::VectorXd c = q.c;
    for (int a : axes)
      c = f->diff(a) * c;
    return Eigen::VectorXd(g.V * c);
  };
  // Derivatives of rho_m divided by rho_m.
  auto m1 = [&](int i, int k) { return -g.x(k, i) / s2; };
  auto m2 = [&](int i, int j, int k) { return g.x(k, i) * g.x(k, j) / (s2 * s2) - (i == j ? 1.0 / s2 : 0.0); };
  auto m3 = [&](int i, int j, int l, int k) {
    double v = -g.x(k, i) * g.x(k, j) * g.x(k, l) / (s2 * s2 * s2);
    if (i == j)
      v += g.x(k, l) / (s2 * s2);
    if (i == l)
      v += g.x(k, j) / (s2 * s2);
    if (j == l)
      v += g.x(k, i) / (s2 * s2);
    return v;
  };
  RhoJet J;
  Eigen::VectorXd q0 = coeff({});
  std::vector<Eigen::VectorXd> q1(d), q2(d * d), q3(d * d * d);
  for (int i = 0; i < d; ++i)
    q1[i] = coeff({i});
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      q2[i * d + j] = coeff({i, j});
  if (third)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int l = 0; l < d; ++l)
          q3[(i * d + j) * d + l] = coeff({i, j, l});
  J.r = q0;
  J.r1.assign(d, Eigen::VectorXd(n));
  J.r2.assign(d * d, Eigen::VectorXd(n));
  if (third)
    J.r3.assign(d * d * d, Eigen::VectorXd(n));
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < d; ++i)
      J.r1[i][k] = q1[i][k] + q0[k] * m1(i, k);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        J.r2[i * d + j][k] = q2[i * d + j][k] + q1[i][k] * m1(j, k) + q1[j][k] * m1(i, k) + q0[k] * m2(i, j, k);
    if (!third)
      continue;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int l = 0; l < d; ++l) {
          double v = q3[(i * d + j) * d + l][k];
          v += q2[i * d + j][k] * m1(l, k) + q2[i * d + l][k] * m1(j, k) + q2[j * d + l][k] * m1(i, k);
          v += q1[i][k] * m2(j, l, k) + q1[j][k] * m2(i, l, k) + q1[l][k] * m2(i, j, k);
          v += q0[k] * m3(i, j, l, k);
          J.r3[(i * d + j) * d + l][k] = v;
        }
  }
  return J;
}

}  // namespace

NodalTensor korteweg_tensor(const ScalarField& q, double floor)
{
  const Grid& g = q.frame->fine();
  const int d = q.frame->dim();
  DensityJet J = density_jet(q);
  require_positive(g, J.q, floor);
  NodalTensor S = empty_tensor(d, g.size(), Symmetry::Symmetric);
  for (int k = 0; k < g.size(); ++k) {
    if (!g.window[k])
      continue;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        S(i, j)[k] = 0.5 * J.h[i * d + j][k] - J.g[i][k] * J.g[j][k] / (2.0 * J.q[k]);
  }
  return S;
}

NodalTensor korteweg_tensor_rho(const ScalarField& q, double floor)
{
  const Grid& g = q.frame->fine();
  const int d = q.frame->dim();
  const double s2 = q.frame->sigma() * q.frame->sigma();
  RhoJet R = rho_jet(q, false);
  require_positive(g, R.r, floor);
  NodalTensor S = empty_tensor(d, g.size(), Symmetry::Symmetric);
  for (int k = 0; k < g.size(); ++k) {
    if (!g.window[k])
      continue;
    const double s = std::sqrt(R.r[k]);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        double si = R.r1[i][k] / (2.0 * s);
        double sj = R.r1[j][k] / (2.0 * s);
        double sij = R.r2[i * d + j][k] / (2.0 * s) - R.r1[i][k] * R.r1[j][k] / (4.0 * s * s * s);
        S(i, j)[k] = s * sij - si * sj + (i == j ? R.r[k] / (2.0 * s2) : 0.0);
      }
    }
  }
  return S;
}

double korteweg_consistency(const ScalarField& q, double floor)
{
  NodalTensor a = korteweg_tensor(q, floor);
  NodalTensor b = korteweg_tensor_rho(q, floor);
  double worst = 0.0, scale = 1.0;
  for (size_t e = 0; e < a.e.size(); ++e) {
    worst = std::max(worst, (a.e[e] - b.e[e]).cwiseAbs().maxCoeff());
    scale = std::max(scale, a.e[e].cwiseAbs().maxCoeff());
  }
  return worst / scale;
}

NodalTensor hessian_log(const ScalarField& q, double floor)
{
  const Grid& g = q.frame->fine();
  const int d = q.frame->dim();
  DensityJet J = density_jet(q);
  require_positive(g, J.q, floor);
  NodalTensor T = empty_tensor(d, g.size(), Symmetry::Symmetric);
  for (int k = 0; k < g.size(); ++k) {
    if (!g.window[k])
      continue;
    const double s = std::sqrt(J.q[k]);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        double si = J.g[i][k] / (2.0 * s);
        double sj = J.g[j][k] / (2.0 * s);
        double sij = J.h[i * d + j][k] / (2.0 * s) - J.g[i][k] * J.g[j][k] / (4.0 * s * s * s);
        T(i, j)[k] = 2.0 * (sij - si * sj / s);
      }
    }
  }
  return T;
}

double bohm_residual(const ScalarField& q, double kappa, double floor)
{
  const Grid& g = q.frame->fine();
  const int d = q.frame->dim();
  RhoJet R = rho_jet(q, true);
  require_positive(g, R.r, floor);
  const double k2 = kappa * kappa;
  double acc = 0.0;
  for (int k = 0; k < g.size(); ++k) {
    if (!g.window[k])
      continue;
    const double rho = R.r[k];
    auto r1 = [&](int i) { return R.r1[i][k]; };
    auto r2 = [&](int i, int j) { return R.r2[i * d + j][k]; };
    auto r3 = [&](int i, int j, int l) { return R.r3[(i * d + j) * d + l][k]; };

    // Square-root route: s = sqrt(rho), g = Delta s / s.
    const double s = std::sqrt(rho);
    auto s1 = [&](int i) { return r1(i) / (2.0 * s); };
    auto s2 = [&](int i, int j) { return r2(i, j) / (2.0 * s) - r1(i) * r1(j) / (4.0 * s * s * s); };
    auto s3 = [&](int i, int j, int l) {
      double s5 = s * s * s * s * s;
      return r3(i, j, l) / (2.0 * s) - (r2(i, j) * r1(l) + r2(i, l) * r1(j) + r1(i) * r2(j, l)) / (4.0 * s * s * s)
             + 3.0 * r1(i) * r1(j) * r1(l) / (8.0 * s5);
    };
    double lap_s = 0.0;
    for (int j = 0; j < d; ++j)
      lap_s += s2(j, j);

    // Logarithmic route: L = ln rho, div(rho D^2 L).
    double lap_r = 0.0, grad2 = 0.0;
    for (int j = 0; j < d; ++j) {
      lap_r += r2(j, j);
      grad2 += r1(j) * r1(j);
    }
    for (int i = 0; i < d; ++i) {
      double dlap_s = 0.0;
      for (int j = 0; j < d; ++j)
        dlap_s += s3(j, j, i);
      double lhs = 2.0 * k2 * rho * (dlap_s / s - lap_s * s1(i) / (s * s));

      double div = 0.0;
      for (int j = 0; j < d; ++j)
        div += r3(i, j, j) - r2(i, j) * r1(j) / rho;
      div += -r1(i) * lap_r / rho + r1(i) * grad2 / (rho * rho);
      double rhs = k2 * div;
      acc += g.w[k] * (lhs - rhs) * (lhs - rhs);
    }
  }
  return std::sqrt(acc);
}

LebesgueDensity rho_of_q(const ScalarField& q)
{
  const Grid& g = q.frame->fine();
  LebesgueDensity r{q.frame, g.V * q.c};
  for (int k = 0; k < g.size(); ++k)
    r.values[k] *= q.frame->gaussian_density(&g.x(k, 0));
  return r;
}

ScalarField q_of_rho(const LebesgueDensity& rho)
{
  const Grid& g = rho.frame->fine();
  Eigen::VectorXd q(g.size());
  for (int k = 0; k < g.size(); ++k)
    q[k] = rho.values[k] / rho.frame->gaussian_density(&g.x(k, 0));
  return project_fine(rho.frame, q);
}

double lebesgue_integral(const LebesgueDensity& rho)
{
  const Grid& g = rho.frame->fine();
  double s = 0.0;
  for (int k = 0; k < g.size(); ++k)
    s += g.w[k] * rho.values[k] / rho.frame->gaussian_density(&g.x(k, 0));
  return s;
}

double lebesgue_moment(const LebesgueDensity& rho, int axis)
{
  const Grid& g = rho.frame->fine();
  double s = 0.0;
  for (int k = 0; k < g.size(); ++k)
    s += g.w[k] * g.x(k, axis) * rho.values[k] / rho.frame->gaussian_density(&g.x(k, 0));
  return s;
}

}  // namespace qns
