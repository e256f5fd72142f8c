#pragma once

#include <vector>

#include "qns/diagnostics.hpp"

namespace qns {

struct TauState
{
  double t = 0.0;
  double tau = 1.0;
  double tau_dot = 0.0;
};

struct TauParams
{
  double a = 1.0;
  double kappa = 1.0;
  double nu = 0.5;
};

// tau'' = a/tau + kappa^2/tau^3 - 2 nu tau'/tau^2
double tau_acceleration(const TauParams& p, double tau, double tau_dot);
TauState tau_rk4(const TauState& s, const TauParams& p, double dt);
// RK4 from tau(0) = 1, tau'(0) = 0; returns the state at every step including t = 0.
std::vector<TauState> tau_solve(const TauParams& p, double t_final, double dt);
// Conserved when nu = 0: tau'^2/2 - a ln tau + kappa^2/(2 tau^2).
double tau_invariant(const TauParams& p, const TauState& s);

// Physical (rho, u) expressed in the frame of width tau * sigma_Q:
// rho(x) = tau^{-d} R(x/tau), u(x) = U(x/tau)/tau + (tau'/tau) x.
struct PhysicalState
{
  ScalarField q;  // rho divided by the Gaussian of the dilated frame
  VectorField u;
};

PhysicalState rescale_map_inverse(const ScalarField& Q, const VectorField& U, const TauState& s);
// (rho, u) -> (R, U) for fields given in any frame; the output frame has width sigma / tau.
PhysicalState rescale_map(const ScalarField& q, const VectorField& u, const TauState& s);

// Re-expands a density (relative to its frame's Gaussian) or a velocity in another frame by
// sampling on the target padded grid. Exact only when the quotient of Gaussians is polynomial.
ScalarField resample_density(const ScalarField& q, const FramePtr& target);
VectorField resample_velocity(const VectorField& u, const FramePtr& target);

// Momentum coefficients of the rescaled system at a given (tau, tau'), for a unit-width frame.
MomentumCoefficients rescaled_coefficients(const TauParams& p, double tau, double tau_dot);

// One step: tau and tau' frozen at the RK4 half step, density advected with 1/tau^2.
SimState rescaled_step(const SimState& s, const TauState& tau, const TauParams& p, double dt,
                       const SolverOptions& opt = {});

struct RescaledEnergy
{
  double E = 0.0;
  double D = 0.0;
  double E_BD = 0.0;
  double D_BD = 0.0;
  double cross = 0.0;  // (tau'/tau^3) int Q U . 2 nu grad ln Q
  // Source of the BD balance from the curvature of the Gaussian weight:
  // (2 nu / tau^4) int Q U . (U + 2 nu grad ln Q).
  double R_BD = 0.0;
};

RescaledEnergy rescaled_energy(const ScalarField& Q, const VectorField& U, const TauState& tau, const TauParams& p,
                               double floor = kDefaultFloor);

struct RescaledRecord
{
  TauState tau;
  double mass = 0.0;
  RescaledEnergy e;
  double residual = 0.0;  // (F_{n+1}-F_n)/dt + (Dsum_n + Dsum_{n+1})/2, F = E + E_BD,
                          // Dsum = D + D_BD - R_BD; 0 on the first row
};

struct RescaledRun
{
  std::vector<RescaledRecord> records;
  SimState final;
  TauState final_tau;
  bool ok = true;
  ErrorKind failure_kind = ErrorKind::StepFailure;
  std::string failure;
  double max_residual = 0.0;
};

RescaledRun rescaled_integrate(const SimState& init, const TauParams& p, double dt, double t_final,
                               const SolverOptions& opt = {});

}  // namespace qns
