#pragma once

#include <array>
#include <vector>

#include "qns/galerkin.hpp"

namespace qns {

// Integrals shared by the energy, BD entropy and moment functionals. Integrands
// involving u, ln q or 1/q are summed with the windowed weights; the mass and the
// position moments of q use the whole padded grid.
struct FieldIntegrals
{
  double mass = 0.0;
  double q_u2 = 0.0;         // int q |u|^2
  double u2 = 0.0;           // int |u|^2
  double q_u4 = 0.0;         // int q |u|^4
  double q_logq = 0.0;       // int q ln q
  double logq = 0.0;         // int ln q
  double fisher = 0.0;       // int q |grad ln q|^2
  double grad_logq2 = 0.0;   // int |grad ln q|^2
  double q_hess_logq2 = 0.0; // int q |D^2 ln q|^2
  double q_Du2 = 0.0;        // int q |D(u)|^2
  double q_Au2 = 0.0;        // int q |A(u)|^2
  double u_gradq = 0.0;      // int u . grad q
  double q_Du_hess = 0.0;    // int q D(u) : D^2 ln q
  double gradu_gradq_glog = 0.0;  // int (grad u grad q) . grad ln q
  double gradu_gradq_x = 0.0;     // int (grad u grad q) . x
  double u2u_gradq = 0.0;    // int |u|^2 u . grad q
  double u_x = 0.0;          // int u . x
  double q_u2u_x = 0.0;      // int q |u|^2 u . x
  double q_u_x = 0.0;        // int q u . x
  double I2 = 0.0;
  double I4 = 0.0;
  std::array<double, 2> Mx{0.0, 0.0};
  std::array<double, 2> Mu{0.0, 0.0};
  double min_q = 0.0;
  double max_q = 0.0;
  // Hessian lemma quantities.
  double hess_A = 0.0;  // int |D^2 sqrt q|^2
  double hess_B = 0.0;  // int |2 grad q^{1/4}|^4
  double hess_D = 0.0;  // int q |D^2 ln sqrt q|^2
};

FieldIntegrals field_integrals(const ScalarField& q, const VectorField& u, double floor = kDefaultFloor);

struct EnergyTriple
{
  double E = 0.0;
  double D = 0.0;
  double R = 0.0;
};

EnergyTriple energy(const FieldIntegrals& fi, const ModelParams& p, double sigma, int dim);
EnergyTriple bd_entropy(const FieldIntegrals& fi, const ModelParams& p, double sigma, int dim);
EnergyTriple energy(const ScalarField& q, const VectorField& u, const ModelParams& p, double floor = kDefaultFloor);
EnergyTriple bd_entropy(const ScalarField& q, const VectorField& u, const ModelParams& p,
                        double floor = kDefaultFloor);

// E(rho_m, 0) = d (kappa^2/sigma^2 - (a/2) ln(2 pi sigma^2)).
double minimal_energy(const ModelParams& p, double sigma, int dim);

struct Moments
{
  double mass = 0.0;
  double I2 = 0.0;
  double I2_tilde = 0.0;
  double I4 = 0.0;
  std::array<double, 2> Mx{0.0, 0.0};
  std::array<double, 2> Mu{0.0, 0.0};
};

Moments moments(const ScalarField& q, const VectorField& u);

struct LsiMargins
{
  double margin = 0.0;        // 2 sigma^2 int |grad sqrt q|^2 - int q ln q
  double margin_inverse = 0.0;  // same with the constant 2/sigma^2
};

LsiMargins check_log_sobolev(const ScalarField& q, double floor = kDefaultFloor);

struct HessianLemma
{
  double A = 0.0;
  double B = 0.0;
  double D = 0.0;
  double I4 = 0.0;
  double margin_intermediate = 0.0;
  double margin_final = 0.0;
};

HessianLemma hessian_lemma(const FieldIntegrals& fi, double sigma);
HessianLemma check_hessian_lemma(const ScalarField& q, double floor = kDefaultFloor);

struct PoincareReport
{
  double strong_poincare = 0.0;  // ||sqrt(1+|x|^2)(f - mean)|| / ||grad f||
  double weighted_bound = 0.0;   // ||x f|| / (||grad f|| + ||f||)
};

struct KornReport
{
  double strong_korn = 0.0;      // ||sqrt(1+|x|^2)(u - mean - Proj u)|| / ||D(u)||
  double transport_bound = 0.0;  // ||x . u|| / (||D(u)|| + ||u||)
  double lhs = 0.0;
  double rhs = 0.0;
};

PoincareReport check_poincare(const ScalarField& f);
KornReport check_korn(const VectorField& u);
// Orthogonal projection in [L^2(mu_m)]^d onto the infinitesimal rotations x -> A x.
VectorField rotation_projection(const VectorField& u);

struct DiagnosticsRecord
{
  int dim = 1;
  double t = 0.0;
  double mass = 0.0;
  double E_reg = 0.0, D_reg = 0.0, R_reg = 0.0;
  double E_BD = 0.0, D_BD = 0.0, R_BD = 0.0;
  double I2 = 0.0, I2_tilde = 0.0, I4 = 0.0;
  std::array<double, 2> Mx{0.0, 0.0};
  std::array<double, 2> Mu{0.0, 0.0};
  double min_q = 0.0, max_q = 0.0;
  double lsi_margin = 0.0, lsi_margin_inverse = 0.0;
  double hessian_intermediate = 0.0, hessian_final = 0.0;
  double i2_forcing = 0.0;  // right-hand side of the second-moment ODE
  bool envelope_ok = true;
};

DiagnosticsRecord diagnose(const SimState& s, const ModelParams& p, double floor = kDefaultFloor);

// Right-hand side of the damped oscillator satisfied by I2 - d. With delta1 > 0 the
// diffusion adds -(2 d1/s^2) int (grad u grad q).x - (4 d1/s^4) int q u.x + 4 d1 (d1 - nu)/s^4 (I2 - d).
double i2_forcing(const FieldIntegrals& fi, const ModelParams& p, double sigma, int dim);

// Max over interior samples of |I2'' + (2 nu/sigma^2) I2' + 2(lambda + kappa^2/sigma^4) I2_tilde - forcing|,
// derivatives by fourth-order central differences.
double i2_ode_residual(const std::vector<DiagnosticsRecord>& traj, const ModelParams& p, double sigma);

struct AuditReport
{
  double energy_violation = 0.0;  // worst excess of E + (1/2) int D over E(0) + allowance t
  double bd_violation = 0.0;      // worst excess of E_BD + (1/2) int D_BD over E_BD(0) + int R_BD
  double min_E_BD = 0.0;
  double max_mass_drift = 0.0;
  bool envelope_ok = true;
};

AuditReport energy_inequality_audit(const std::vector<DiagnosticsRecord>& traj, const ModelParams& p,
                                    double sigma);

}  // namespace qns
