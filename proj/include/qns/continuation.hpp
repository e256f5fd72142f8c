#pragma once

#include <vector>

#include "qns/diagnostics.hpp"

namespace qns {

// Smooth radial cutoff: 1 for r <= 1/2, 0 for r >= 1, quintic (C^2) in between.
double cutoff_chi(double r);
// Unit-mass bump c_d (1 - r^2)^3 supported in the unit ball, d in {1, 2}.
double mollifier_zeta(double r, int dim);
// Renormalization cutoff phi_l, piecewise linear, equal to 1 on [1/l, l].
double renormalization_cutoff(double y, double l);

struct MollifiedData
{
  ScalarField q;
  VectorField u;
  double min_q = 0.0;  // smallest nodal value on the resolved window
};

// sqrt(q_n) = ((sqrt(q0) chi_n + 1/n) * zeta_n) / norm, u_n = sqrt(q0) u0 chi_n / sqrt(q_n),
// with chi_n(x) = chi(x/n) and zeta_n(x) = n^d zeta(n x). The root is represented
// in degree N/2, so q_n is its exact square.
MollifiedData mollify_initial_data(const ScalarField& q0, const VectorField& u0, int n,
                                   double floor = kDefaultFloor);

struct DragSchedule
{
  int n = 1;
  double r0n = 0.0;
  double r1n = 0.0;
  double r4n = 0.0;
  double delta1n = 0.0;
  double r0_product = 0.0;  // r0n * int (q - ln q)
  double r4_product = 0.0;  // r4n * I4
};

// delta1n = delta1 / n so that the diffusion vanishes together with the drag.
DragSchedule drag_schedule(int n, const ScalarField& q0n, double delta1 = 0.0, double floor = kDefaultFloor);

struct SweepMember
{
  int n = 0;
  DragSchedule drag;
  AuditReport audit;
  bool ok = false;
  std::string failure;
  std::vector<DiagnosticsRecord> records;
  std::vector<SimState> snapshots;
};

struct SweepReport
{
  std::vector<SweepMember> members;
  std::vector<double> h1_increments;  // sup_t ||sqrt(q_n) - sqrt(q_m)||_{H^1}
  std::vector<double> l2_increments;  // sup_t ||sqrt(q_n) u_n - sqrt(q_m) u_m||_{L^2}
  int failed_index = -1;
  bool monotone = false;  // increments non-increasing beyond the burn-in index
  bool audits_ok = false;
};

struct SweepSpec
{
  ModelParams base;
  ScalarField q0;
  VectorField u0;
  std::vector<int> n_list;
  double dt = 2e-3;
  double t_final = 0.5;
  int record_every = 1;
  int burn_in = 1;  // increments are compared from this index on
  double audit_tol = 0.0;
  SolverOptions solver;
};

// Distances between two states sharing a frame.
double sqrt_h1_distance(const ScalarField& qa, const ScalarField& qb, double floor = kDefaultFloor);
double momentum_l2_distance(const SimState& a, const SimState& b, double floor = kDefaultFloor);

SweepReport vanishing_drag_sweep(const SweepSpec& spec);

}  // namespace qns
