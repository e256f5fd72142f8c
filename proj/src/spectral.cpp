#include "qns/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qns {

PositivityError::PositivityError(int node, double x0, double x1, double value, double floor)
    : Error(ErrorKind::Positivity,
            [&] {
              std::ostringstream os;
              os.precision(6);
              os << "density " << value << " below floor " << floor << " at node " << node << " (x = " << x0;
              if (!std::isnan(x1))
                os << ", " << x1;
              os << ")";
              return os.str();
            }())
    , node_(node)
    , value_(value)
{
}

void hermite_values(int n, double y, double* out)
{
  out[0] = 1.0;
  if (n >= 1)
    out[1] = y;
  for (int k = 1; k < n; ++k)
    out[k + 1] = (y * out[k] - std::sqrt(double(k)) * out[k - 1]) / std::sqrt(double(k + 1));
}

void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights)
{
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  if (n == 1) {
    weights[0] = 1.0;
    return;
  }
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n - 1);
  for (int k = 0; k < n - 1; ++k)
    sub[k] = std::sqrt(double(k + 1));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  std::vector<double> phi(n + 1);
  for (int i = 0; i < n; ++i) {
    double y = es.eigenvalues()[i];
    for (int it = 0; it < 3; ++it) {
      hermite_values(n, y, phi.data());
      double dphi = std::sqrt(double(n)) * phi[n - 1];
      y -= phi[n] / dphi;
    }
    hermite_values(n, y, phi.data());
    double s = 0.0;
    for (int k = 0; k < n; ++k)
      s += phi[k] * phi[k];
    nodes[i] = y;
    weights[i] = 1.0 / s;
  }
  // Enforce the exact reflection symmetry of the rule.
  for (int i = 0; i < n / 2; ++i) {
    double y = 0.5 * (nodes[n - 1 - i] - nodes[i]);
    double w = 0.5 * (weights[i] + weights[n - 1 - i]);
    nodes[i] = -y;
    nodes[n - 1 - i] = y;
    weights[i] = weights[n - 1 - i] = w;
  }
  if (n % 2 == 1)
    nodes[n / 2] = 0.0;
  double total = 0.0;
  for (double w : weights)
    total += w;
  for (double& w : weights)
    w /= total;
}

double sigma_from_params(double a, double kappa, double lambda)
{
  if (!(a > 0.0) || !(lambda > 0.0) || !(kappa >= 0.0))
    throw Error(ErrorKind::InvalidParameter, "frame requires a > 0, lambda > 0 and kappa >= 0");
  double s2 = (a + std::sqrt(a * a + 4.0 * lambda * kappa * kappa)) / (2.0 * lambda);
  return std::sqrt(s2);
}

FramePtr Frame::build(double a, double kappa, double lambda, int dim, int degree, const Options& opt)
{
  return with_sigma(sigma_from_params(a, kappa, lambda), dim, degree, opt);
}

FramePtr Frame::build(double a, double kappa, double lambda, int dim, int degree, int quad_order)
{
  Options opt;
  opt.quad_order = quad_order;
  return build(a, kappa, lambda, dim, degree, opt);
}

FramePtr Frame::with_sigma(double sigma, int dim, int degree, int quad_order)
{
  Options opt;
  opt.quad_order = quad_order;
  return with_sigma(sigma, dim, degree, opt);
}

FramePtr Frame::with_sigma(double sigma, int dim, int degree, const Options& opt)
{
  if (!(sigma > 0.0))
    throw Error(ErrorKind::InvalidParameter, "sigma must be positive");
  if (dim != 1 && dim != 2)
    throw Error(ErrorKind::InvalidParameter, "dimension must be 1 or 2");
  if (degree < 0)
    throw Error(ErrorKind::InvalidParameter, "degree must be non-negative");
  int q = opt.quad_order == 0 ? 2 * degree + 4 : opt.quad_order;
  if (q < 2 * degree + 4)
    throw Error(ErrorKind::InvalidParameter, "quad_order must be at least 2*degree+4");
  std::shared_ptr<Frame> f(new Frame());
  f->sigma_ = sigma;
  f->dim_ = dim;
  f->degree_ = degree;
  f->quad_order_ = q;
  f->window_weight_ = opt.window_weight;
  f->with_hessians_ = opt.with_hessians;
  f->setup(opt);
  return f;
}

FramePtr Frame::rescaled(double sigma) const
{
  Options opt;
  opt.quad_order = quad_order_;
  opt.window_weight = window_weight_;
  opt.with_hessians = with_hessians_;
  return with_sigma(sigma, dim_, degree_, opt);
}

int Frame::index_of(const MultiIndex& alpha) const
{
  if (alpha[0] < 0 || alpha[1] < 0 || alpha[0] + alpha[1] > degree_)
    return -1;
  if (dim_ == 1 && alpha[1] != 0)
    return -1;
  return lookup_[alpha[0] * (degree_ + 1) + alpha[1]];
}

void Frame::setup(const Options&)
{
  const int N = degree_;
  lookup_.assign((N + 1) * (N + 1), -1);
  for (int k = 0; k <= N; ++k) {
    if (dim_ == 1) {
      lookup_[k * (N + 1)] = static_cast<int>(indices_.size());
      indices_.push_back({k, 0});
    } else {
      for (int j = 0; j <= k; ++j) {
        MultiIndex a{k - j, j};
        lookup_[a[0] * (N + 1) + a[1]] = static_cast<int>(indices_.size());
        indices_.push_back(a);
      }
    }
  }
  const int nb = size();
  diff_.assign(dim_, Eigen::MatrixXd::Zero(nb, nb));
  xmul_.assign(dim_, Eigen::MatrixXd::Zero(nb, nb));
  for (int k = 0; k < nb; ++k) {
    for (int ax = 0; ax < dim_; ++ax) {
      MultiIndex lo = indices_[k];
      lo[ax] -= 1;
      int klo = index_of(lo);
      if (klo >= 0) {
        // d/dx phi_alpha = sqrt(alpha)/sigma phi_{alpha - e}
        diff_[ax](klo, k) = std::sqrt(double(indices_[k][ax])) / sigma_;
        // x phi_alpha = sigma (sqrt(alpha+1) phi_{alpha+e} + sqrt(alpha) phi_{alpha-e})
        xmul_[ax](klo, k) = sigma_ * std::sqrt(double(indices_[k][ax]));
      }
      MultiIndex hi = indices_[k];
      hi[ax] += 1;
      int khi = index_of(hi);
      if (khi >= 0)
        xmul_[ax](khi, k) = sigma_ * std::sqrt(double(indices_[k][ax] + 1));
    }
  }
  fill_grid(base_, quad_order_, false);
  fill_grid(fine_, (3 * quad_order_ + 1) / 2, with_hessians_);
}

void Frame::fill_grid(Grid& g, int n, bool derivatives) const
{
  std::vector<double> y, w;
  gauss_hermite(n, y, w);
  const int nb = size();
  const int nodes = dim_ == 1 ? n : n * n;
  g.points_per_axis = n;
  g.x.resize(nodes, dim_);
  g.w.resize(nodes);
  g.V.resize(nodes, nb);
  std::vector<double> tab(static_cast<size_t>(n) * (degree_ + 1));
  for (int i = 0; i < n; ++i)
    hermite_values(degree_, y[i], &tab[static_cast<size_t>(i) * (degree_ + 1)]);
  for (int i = 0; i < nodes; ++i) {
    int i0 = dim_ == 1 ? i : i / n;
    int i1 = dim_ == 1 ? 0 : i % n;
    g.x(i, 0) = sigma_ * y[i0];
    g.w[i] = w[i0];
    if (dim_ == 2) {
      g.x(i, 1) = sigma_ * y[i1];
      g.w[i] *= w[i1];
    }
    for (int k = 0; k < nb; ++k) {
      double v = tab[static_cast<size_t>(i0) * (degree_ + 1) + indices_[k][0]];
      if (dim_ == 2)
        v *= tab[static_cast<size_t>(i1) * (degree_ + 1) + indices_[k][1]];
      g.V(i, k) = v;
    }
  }
  g.window.assign(nodes, 0);
  for (int i = 0; i < nodes; ++i)
    g.window[i] = g.w[i] >= window_weight_ ? 1 : 0;
  g.ww = g.w;
  for (int i = 0; i < nodes; ++i)
    if (!g.window[i])
      g.ww[i] = 0.0;
  g.G.clear();
  g.H.clear();
  if (derivatives) {
    for (int ax = 0; ax < dim_; ++ax)
      g.G.push_back(g.V * diff_[ax]);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j)
        g.H.push_back(g.V * (diff_[i] * diff_[j]));
  }
}

Eigen::RowVectorXd Frame::basis_at(const double* x) const
{
  std::vector<double> t0(degree_ + 1), t1(degree_ + 1, 1.0);
  hermite_values(degree_, x[0] / sigma_, t0.data());
  if (dim_ == 2)
    hermite_values(degree_, x[1] / sigma_, t1.data());
  Eigen::RowVectorXd row(size());
  for (int k = 0; k < size(); ++k)
    row[k] = t0[indices_[k][0]] * (dim_ == 2 ? t1[indices_[k][1]] : 1.0);
  return row;
}

double Frame::gaussian_density(const double* x) const
{
  double r2 = 0.0;
  for (int j = 0; j < dim_; ++j)
    r2 += x[j] * x[j];
  return std::pow(2.0 * M_PI * sigma_ * sigma_, -0.5 * dim_) * std::exp(-r2 / (2.0 * sigma_ * sigma_));
}

ScalarField ScalarField::zero(FramePtr f)
{
  Eigen::VectorXd c = Eigen::VectorXd::Zero(f->size());
  return {std::move(f), std::move(c)};
}

ScalarField ScalarField::constant(FramePtr f, double value)
{
  ScalarField s = zero(std::move(f));
  s.c[0] = value;
  return s;
}

ScalarField ScalarField::basis(FramePtr f, const MultiIndex& alpha)
{
  int k = f->index_of(alpha);
  if (k < 0)
    throw Error(ErrorKind::Dimension, "multi-index outside the truncation");
  ScalarField s = zero(std::move(f));
  s.c[k] = 1.0;
  return s;
}

ScalarField ScalarField::coordinate(FramePtr f, int axis)
{
  MultiIndex a{0, 0};
  a[axis] = 1;
  ScalarField s = basis(f, a);
  s.c *= f->sigma();
  return s;
}

double ScalarField::at(const double* x) const
{
  return frame->basis_at(x).dot(c);
}

VectorField VectorField::zero(FramePtr f)
{
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(f->size(), f->dim());
  return {std::move(f), std::move(c)};
}

ScalarField TensorField::component(int i, int j) const
{
  return {frame, c.col(i * frame->dim() + j)};
}

Eigen::VectorXd inverse_transform(const ScalarField& f)
{
  return f.frame->base().V * f.c;
}

ScalarField transform(const FramePtr& frame, const Eigen::VectorXd& nodal)
{
  const Grid& g = frame->base();
  if (nodal.size() != g.size())
    throw Error(ErrorKind::Dimension, "nodal vector does not match the quadrature grid");
  return {frame, g.V.transpose() * g.w.cwiseProduct(nodal)};
}

ScalarField project_fine(const FramePtr& frame, const Eigen::VectorXd& nodal)
{
  const Grid& g = frame->fine();
  if (nodal.size() != g.size())
    throw Error(ErrorKind::Dimension, "nodal vector does not match the padded grid");
  return {frame, g.V.transpose() * g.w.cwiseProduct(nodal)};
}

double integrate(const ScalarField& f)
{
  return f.c[0];
}

double quadrature_integral(const ScalarField& f)
{
  const Grid& g = f.frame->base();
  return g.w.dot(g.V * f.c);
}

ScalarField ou_apply(const ScalarField& f)
{
  ScalarField r = f;
  const double s2 = f.frame->sigma() * f.frame->sigma();
  for (int k = 0; k < r.c.size(); ++k)
    r.c[k] *= -f.frame->total_degree(k) / s2;
  return r;
}

ScalarField derivative(const ScalarField& f, int axis)
{
  return {f.frame, f.frame->diff(axis) * f.c};
}

ScalarField multiply(const ScalarField& f, const ScalarField& g)
{
  const Grid& gr = f.frame->fine();
  Eigen::VectorXd prod = (gr.V * f.c).cwiseProduct(gr.V * g.c);
  return project_fine(f.frame, prod);
}

VectorField gradient(const ScalarField& f)
{
  VectorField v = VectorField::zero(f.frame);
  for (int j = 0; j < f.frame->dim(); ++j)
    v.c.col(j) = f.frame->diff(j) * f.c;
  return v;
}

ScalarField multiply_coordinate(const ScalarField& f, int axis)
{
  return {f.frame, f.frame->xmul(axis) * f.c};
}

}  // namespace qns
