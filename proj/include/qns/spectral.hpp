#pragma once

#include <array>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "qns/error.hpp"

namespace qns {

using MultiIndex = std::array<int, 2>;

using NodeMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Tensor Gauss-Hermite grid for the normalized Gaussian of variance sigma^2
// per axis, with the basis sampled at its nodes.
struct Grid
{
  int points_per_axis = 0;
  NodeMatrix x;  // nodes x dim, row k is node k
  Eigen::VectorXd w;  // sums to 1
  Eigen::MatrixXd V;  // basis values, nodes x basis
  std::vector<Eigen::MatrixXd> G;  // first derivatives, one per axis
  std::vector<Eigen::MatrixXd> H;  // second derivatives, index i*dim+j
  std::vector<char> window;  // nodes where the truncated expansion is trusted
  Eigen::VectorXd ww;  // w restricted to the window

  int size() const { return static_cast<int>(w.size()); }
};

// 1D Gauss-Hermite rule for the standard normal density (probabilists').
void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Orthonormal Hermite polynomials phi_0..phi_n at y (argument already scaled by sigma).
void hermite_values(int n, double y, double* out);

class Frame
{
 public:
  struct Options
  {
    int quad_order = 0;  // 0 selects 2*degree+4
    double window_weight = 1e-12;  // nodes with smaller weight are dropped from windowed sums
    bool with_hessians = true;
  };

  static std::shared_ptr<const Frame> build(double a, double kappa, double lambda, int dim, int degree,
                                            const Options& opt);
  static std::shared_ptr<const Frame> build(double a, double kappa, double lambda, int dim, int degree,
                                            int quad_order = 0);
  static std::shared_ptr<const Frame> with_sigma(double sigma, int dim, int degree, const Options& opt);
  static std::shared_ptr<const Frame> with_sigma(double sigma, int dim, int degree, int quad_order = 0);

  double sigma() const { return sigma_; }
  int dim() const { return dim_; }
  int degree() const { return degree_; }
  int quad_order() const { return quad_order_; }
  int size() const { return static_cast<int>(indices_.size()); }
  double window_weight() const { return window_weight_; }

  const std::vector<MultiIndex>& indices() const { return indices_; }
  int total_degree(int k) const { return indices_[k][0] + indices_[k][1]; }
  // -1 when the multi-index lies outside the truncation.
  int index_of(const MultiIndex& alpha) const;

  const Grid& base() const { return base_; }
  const Grid& fine() const { return fine_; }

  // Coefficient-space derivative along an axis (exact, lowers degree by one).
  const Eigen::MatrixXd& diff(int axis) const { return diff_[axis]; }
  // Coefficient-space multiplication by x_axis, truncated back to degree N.
  const Eigen::MatrixXd& xmul(int axis) const { return xmul_[axis]; }

  Eigen::RowVectorXd basis_at(const double* x) const;
  double gaussian_density(const double* x) const;

  // A frame with the same degree, quadrature and dimension but another sigma.
  std::shared_ptr<const Frame> rescaled(double sigma) const;

 private:
  Frame() = default;
  void setup(const Options& opt);
  void fill_grid(Grid& g, int n, bool derivatives) const;

  double sigma_ = 1.0;
  int dim_ = 1;
  int degree_ = 0;
  int quad_order_ = 0;
  double window_weight_ = 1e-12;
  bool with_hessians_ = true;
  std::vector<MultiIndex> indices_;
  std::vector<int> lookup_;
  std::vector<Eigen::MatrixXd> diff_;
  std::vector<Eigen::MatrixXd> xmul_;
  Grid base_;
  Grid fine_;
};

using FramePtr = std::shared_ptr<const Frame>;

// sigma^2 = (a + sqrt(a^2 + 4 lambda kappa^2)) / (2 lambda)
double sigma_from_params(double a, double kappa, double lambda);

struct ScalarField
{
  FramePtr frame;
  Eigen::VectorXd c;

  ScalarField() = default;
  ScalarField(FramePtr f, Eigen::VectorXd coeffs)
      : frame(std::move(f))
      , c(std::move(coeffs))
  {
  }

  static ScalarField zero(FramePtr f);
  static ScalarField constant(FramePtr f, double value);
  static ScalarField basis(FramePtr f, const MultiIndex& alpha);
  // x_axis, which is sigma times the degree-one basis function.
  static ScalarField coordinate(FramePtr f, int axis);

  double at(const double* x) const;
  Eigen::VectorXd nodal(const Grid& g) const { return g.V * c; }
};

struct VectorField
{
  FramePtr frame;
  Eigen::MatrixXd c;  // basis x dim

  VectorField() = default;
  VectorField(FramePtr f, Eigen::MatrixXd coeffs)
      : frame(std::move(f))
      , c(std::move(coeffs))
  {
  }

  static VectorField zero(FramePtr f);
  ScalarField component(int j) const { return {frame, c.col(j)}; }
  int dim() const { return static_cast<int>(c.cols()); }
};

enum class Symmetry { General, Symmetric, Skew };

struct TensorField
{
  FramePtr frame;
  Eigen::MatrixXd c;  // basis x (dim*dim), entry (i,j) in column i*dim+j
  Symmetry symmetry = Symmetry::General;

  ScalarField component(int i, int j) const;
};

Eigen::VectorXd inverse_transform(const ScalarField& f);
ScalarField transform(const FramePtr& frame, const Eigen::VectorXd& nodal);
// Projection of values sampled on the padded grid.
ScalarField project_fine(const FramePtr& frame, const Eigen::VectorXd& nodal);

double integrate(const ScalarField& f);
double quadrature_integral(const ScalarField& f);
ScalarField ou_apply(const ScalarField& f);
ScalarField derivative(const ScalarField& f, int axis);
ScalarField multiply(const ScalarField& f, const ScalarField& g);
VectorField gradient(const ScalarField& f);
ScalarField multiply_coordinate(const ScalarField& f, int axis);

}  // namespace qns
