#pragma once

#include <array>
#include <random>
#include <string>

#include "qns/config.hpp"

namespace qns {

// rho_m(x - m) / rho_m(x) = exp(x.m/sigma^2 - |m|^2/(2 sigma^2)), expanded through degree N.
// The coefficient of phi_alpha is prod_j t_j^{alpha_j} / sqrt(alpha_j!) with t = m / sigma.
ScalarField shifted_gaussian(const FramePtr& f, const std::array<double, 2>& m);
// exp(alpha x_axis - alpha^2 sigma^2 / 2), the equality case of the log-Sobolev inequality.
ScalarField tilted_density(const FramePtr& f, double alpha, int axis = 0);

// Hermite coefficients drawn as N(0, 2^{-|alpha|}) for |alpha| <= max_degree (default N).
ScalarField random_scalar(const FramePtr& f, std::mt19937_64& rng, int max_degree = -1);
// q = (p^2 / int p^2 + c) / (1 + c) with p random of degree <= p_degree (default N/2);
// q >= c/(1+c) everywhere.
ScalarField random_density(const FramePtr& f, std::mt19937_64& rng, double c = 0.1, int p_degree = -1);
VectorField random_velocity(const FramePtr& f, std::mt19937_64& rng, double amplitude, int max_degree = -1);

// Whitespace-separated coefficients in the frame's ordering; missing trailing entries are zero.
ScalarField read_coefficients(const FramePtr& f, const std::string& path);

ScalarField initial_density(const FramePtr& f, const InitialSpec& spec, std::mt19937_64& rng);
VectorField initial_velocity(const FramePtr& f, const InitialSpec& spec, std::mt19937_64& rng);

}  // namespace qns
