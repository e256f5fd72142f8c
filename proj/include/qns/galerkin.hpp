#pragma once

#include <string>

#include "qns/fokker_planck.hpp"

namespace qns {

// Coefficients of the weak momentum balance
//   d/dt int q u.phi = transport int q (grad phi u).u - 2 nu int q D(u):D(phi)
//                      - 2 kappa2 int S:D(phi) - pressure int grad q.phi
//                      - delta1 int (grad u grad q).phi - r0 int u.phi
//                      - r1 int q|u|^2 u.phi - (r4/sigma^4) int q|x|^2 x.phi
struct MomentumCoefficients
{
  double transport = 1.0;
  double nu = 0.0;
  double kappa2 = 0.0;
  double pressure = 0.0;
  double delta1 = 0.0;
  double r0 = 0.0;
  double r1 = 0.0;
  double r4 = 0.0;
};

// pressure = lambda sigma^2, which also equals a + kappa^2/sigma^2.
MomentumCoefficients momentum_coefficients(const ModelParams& p, const Frame& frame);

// Gram matrix of the scalar basis weighted by q; the velocity operator is
// block diagonal with this block repeated once per component.
struct MassOperator
{
  Eigen::MatrixXd block;
  int dim = 1;
};

MassOperator assemble_mass(const ScalarField& q);

// Weighted projection: int q0 u0_N . w = int q0 u0 . w for all w in the velocity space.
// u0 holds the samples of the initial velocity on the padded grid (nodes x dim).
VectorField project_initial_velocity(const ScalarField& q0, const Eigen::MatrixXd& u0, double floor = kDefaultFloor);

Eigen::MatrixXd momentum_rhs(const ScalarField& q, const VectorField& u, const MomentumCoefficients& m,
                             double floor = kDefaultFloor);
Eigen::MatrixXd momentum_rhs(const ScalarField& q, const VectorField& u, const ModelParams& p,
                             double floor = kDefaultFloor);

// Matrix of the part of momentum_rhs that is linear in u (viscosity, r0 drag, the
// delta1 coupling, and the cubic drag with |u|^2 frozen at u), acting on the
// column-stacked coefficients (component-major).
Eigen::MatrixXd momentum_linearization(const ScalarField& q, const VectorField& u, const MomentumCoefficients& m);

struct SolverOptions
{
  double picard_tol = 1e-10;
  int picard_max = 25;
  int fp_sweeps = 2;
  double floor = kDefaultFloor;
  double mass_tol = 1e-10;
};

struct SimState
{
  ScalarField q;
  VectorField u;
  double t = 0.0;
  PositivityEnvelope env;
  int sweeps = 0;  // Picard sweeps used by the last step
};

SimState make_state(const ScalarField& q, const VectorField& u, double t = 0.0);

// Implicit-midpoint Picard iteration on the coupled density/momentum system.
SimState coupled_step(const SimState& s, const ModelParams& p, double dt, const SolverOptions& opt = {});
SimState coupled_step(const SimState& s, const MomentumCoefficients& m, double advect_scale, double delta1,
                      double dt, const SolverOptions& opt = {});

// Moves the mean position and mean velocity to zero by resampling on shifted nodes.
SimState recenter(const SimState& s, std::string* warning = nullptr);

}  // namespace qns
