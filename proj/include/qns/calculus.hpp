#pragma once

#include <utility>
#include <vector>

#include "qns/spectral.hpp"

namespace qns {

struct ModelParams
{
  double a = 1.0;
  double kappa = 1.0;
  double nu = 0.5;
  double lambda = 2.0;
  double r0 = 0.0;
  double r1 = 0.0;
  double r4 = 0.0;
  double delta1 = 0.0;

  void validate() const;
};

constexpr double kDefaultFloor = 1e-10;

// Values of a tensor field at the nodes of a grid.
struct NodalTensor
{
  int dim = 1;
  std::vector<Eigen::VectorXd> e;  // entry (i,j) at index i*dim+j
  Symmetry symmetry = Symmetry::General;

  const Eigen::VectorXd& operator()(int i, int j) const { return e[i * dim + j]; }
  Eigen::VectorXd& operator()(int i, int j) { return e[i * dim + j]; }
};

// q together with its first and second derivatives at the padded-grid nodes.
struct DensityJet
{
  Eigen::VectorXd q;
  std::vector<Eigen::VectorXd> g;
  std::vector<Eigen::VectorXd> h;  // index i*dim+j
};

DensityJet density_jet(const ScalarField& q);
// Throws PositivityError when q < floor at a node of the resolved window.
void require_positive(const Grid& grid, const Eigen::VectorXd& q, double floor);

ScalarField div_m(const VectorField& v);
// D(u) and A(u), symmetric and skew parts of grad u with grad u_{ij} = d_j u_i.
std::pair<TensorField, TensorField> grad_parts(const VectorField& u);
TensorField velocity_gradient(const VectorField& u);

// sqrt(q) D^2 sqrt(q) - grad sqrt(q) (x) grad sqrt(q), evaluated as
// (1/2) D^2 q - grad q (x) grad q / (2q) on the resolved window (zero elsewhere).
NodalTensor korteweg_tensor(const ScalarField& q, double floor = kDefaultFloor);
// (1/rho_m)[sqrt(rho) D^2 sqrt(rho) - grad sqrt(rho) (x) grad sqrt(rho) + rho I/(2 sigma^2)] with rho = q rho_m.
NodalTensor korteweg_tensor_rho(const ScalarField& q, double floor = kDefaultFloor);
// Largest nodal discrepancy between the two forms, relative to max(1, largest entry).
double korteweg_consistency(const ScalarField& q, double floor = kDefaultFloor);

// sqrt(q) D^2 ln q through 2[D^2 sqrt(q) - grad sqrt(q) (x) grad sqrt(q) / sqrt(q)].
NodalTensor hessian_log(const ScalarField& q, double floor = kDefaultFloor);

// || 2 kappa^2 rho grad(Delta sqrt(rho)/sqrt(rho)) - kappa^2 div(rho D^2 ln rho) || for rho = q rho_m,
// measured as the L^2(mu_m) norm of the residual divided by rho_m.
double bohm_residual(const ScalarField& q, double kappa, double floor = kDefaultFloor);

// Density with respect to Lebesgue measure, sampled at the padded-grid nodes.
struct LebesgueDensity
{
  FramePtr frame;
  Eigen::VectorXd values;
};

LebesgueDensity rho_of_q(const ScalarField& q);
ScalarField q_of_rho(const LebesgueDensity& rho);
double lebesgue_integral(const LebesgueDensity& rho);
double lebesgue_moment(const LebesgueDensity& rho, int axis);

}  // namespace qns
