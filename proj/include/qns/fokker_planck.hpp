#pragma once

#include "qns/calculus.hpp"

namespace qns {

struct PositivityEnvelope
{
  double c0 = 1.0;
  double accumulated = 0.0;  // trapezoid sum of sup_nodes |div_m u| dt
  double last_sup = -1.0;    // negative until the first update

  double lower() const;
  double upper() const;
};

// c0 = min(min q, 1/max q) over the resolved nodes of the padded grid.
PositivityEnvelope envelope_init(const ScalarField& q);
double div_m_sup(const VectorField& u);
PositivityEnvelope envelope_update(const PositivityEnvelope& env, const VectorField& u, double dt);
bool envelope_check(const ScalarField& q, const PositivityEnvelope& env, double eps = 1e-8);

// exp(s delta1 Delta_m) q: mode of total degree k decays by exp(-delta1 k s / sigma^2).
ScalarField ou_semigroup(const ScalarField& q, double s, double delta1);

// Galerkin image of -div_m(q u): coefficient k equals int q u . grad phi_k dmu_m.
Eigen::VectorXd advection(const ScalarField& q, const VectorField& u);

struct FpOptions
{
  int sweeps = 2;
  double advect_scale = 1.0;  // multiplies u, used by the rescaled system
};

// One Duhamel step with the convolution closed by the midpoint rule and the
// midpoint density found by Picard sweeps.
ScalarField fp_step(const ScalarField& q, const VectorField& u, double delta1, double dt,
                    const FpOptions& opt = {});

}  // namespace qns
