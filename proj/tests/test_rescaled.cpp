#include "doctest.h"

#include <cmath>
#include <random>

#include "qns/fields.hpp"
#include "qns/rescaled.hpp"

using namespace qns;

TEST_CASE("tau ODE at t = 0 and its invariant")
{
  TauParams p{1.0, 1.0, 0.5};
  CHECK(tau_acceleration(p, 1.0, 0.0) == p.a + p.kappa * p.kappa);
  TauParams p0{1.3, 0.7, 0.0};
  std::vector<TauState> traj = tau_solve(p0, 10.0, 1e-3);
  CHECK(traj.size() == 10001);
  double drift = 0.0;
  for (const auto& s : traj)
    drift = std::max(drift, std::abs(tau_invariant(p0, s) - tau_invariant(p0, traj.front())));
  CHECK(drift < 1e-10);
  for (const auto& s : tau_solve(p, 20.0, 1e-2))
    CHECK(s.tau_dot >= 0.0);
}

TEST_CASE("tau integrator is fourth order")
{
  TauParams p{1.0, 1.0, 0.5};
  auto at = [&](double h) { return tau_solve(p, 2.0, h).back().tau; };
  const double a = at(0.1), b = at(0.05), c = at(0.025);
  CHECK(std::log2(std::abs(a - b) / std::abs(b - c)) > 3.7);
}

TEST_CASE("rescale map and its inverse compose to the identity")
{
  std::mt19937_64 rng(20);
  FramePtr f = Frame::with_sigma(1.0, 2, 8);
  ScalarField Q = random_density(f, rng);
  VectorField U = random_velocity(f, rng, 0.5);
  for (double tau : {1.0, 2.5, 4.0}) {
    TauState s{0.0, tau, 0.3};
    PhysicalState ph = rescale_map_inverse(Q, U, s);
    CHECK(ph.q.frame->sigma() == doctest::Approx(tau));
    PhysicalState back = rescale_map(ph.q, ph.u, s);
    CHECK(back.q.frame->sigma() == doctest::Approx(1.0));
    CHECK((back.q.c - Q.c).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((back.u.c - U.c).cwiseAbs().maxCoeff() < 1e-9);
    // u(x) = U(x/tau)/tau + (tau'/tau) x and rho(x) = tau^{-d} R(x/tau).
    double x[2] = {0.7, -0.4}, y[2] = {0.7 / tau, -0.4 / tau};
    const double u0 = ph.u.component(0).at(x);
    CHECK(u0 == doctest::Approx(U.component(0).at(y) / tau + 0.3 / tau * x[0]).epsilon(1e-12));
    const double rho = ph.q.at(x) * ph.q.frame->gaussian_density(x);
    const double R = Q.at(y) * f->gaussian_density(y);
    CHECK(rho == doctest::Approx(R / (tau * tau)).epsilon(1e-12));
  }
}

TEST_CASE("resampling into another frame is exact for Gaussian ratios")
{
  FramePtr a = Frame::with_sigma(1.0, 1, 16), b = Frame::with_sigma(1.0, 1, 20);
  ScalarField q = shifted_gaussian(a, {0.2, 0.0});
  ScalarField r = resample_density(q, b);
  double x[2] = {0.5, 0.0};
  CHECK(r.at(x) == doctest::Approx(q.at(x)).epsilon(1e-10));
}

TEST_CASE("frozen tau = 1 reduces to the unrescaled step")
{
  TauParams tp{1.0, 1.0, 0.5};
  ModelParams p;
  p.lambda = tp.a + tp.kappa * tp.kappa;  // makes sigma = 1
  FramePtr f = Frame::build(p.a, p.kappa, p.lambda, 1, 10);
  REQUIRE(f->sigma() == doctest::Approx(1.0).epsilon(1e-14));
  ScalarField q = shifted_gaussian(f, {0.2, 0.0});
  q.c /= q.c[0];
  VectorField u = VectorField::zero(f);
  u.c.col(0) = 0.1 * ScalarField::coordinate(f, 0).c;
  SimState s = make_state(q, u);
  SimState a = coupled_step(s, rescaled_coefficients(tp, 1.0, 0.0), 1.0, 0.0, 1e-2);
  SimState b = coupled_step(s, p, 1e-2);
  CHECK((a.q.c - b.q.c).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((a.u.c - b.u.c).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("rescaled step converges at second order")
{
  TauParams tp{1.0, 1.0, 0.5};
  FramePtr f = Frame::with_sigma(1.0, 1, 16);
  ScalarField q = ScalarField::constant(f, 1.0);
  q.c[f->index_of({2, 0})] = 0.2;
  VectorField u = VectorField::zero(f);
  u.c.col(0) = 0.1 * ScalarField::coordinate(f, 0).c;
  auto run = [&](int n) {
    SimState s = make_state(q, u);
    TauState t;
    const double dt = 0.2 / n;
    for (int k = 0; k < n; ++k) {
      s = rescaled_step(s, t, tp, dt);
      t = tau_rk4(t, tp, dt);
    }
    return s;
  };
  SimState a = run(10), b = run(20), c = run(40);
  const double order = std::log2((a.u.c - b.u.c).norm() / (b.u.c - c.u.c).norm());
  CHECK(order >= 1.8);
}

TEST_CASE("rescaled energies at equilibrium and their balance")
{
  TauParams tp{1.0, 1.0, 0.5};
  FramePtr f = Frame::with_sigma(1.0, 1, 24);
  TauState t{0.0, 1.5, 0.4};
  RescaledEnergy e0 = rescaled_energy(ScalarField::constant(f, 1.0), VectorField::zero(f), t, tp);
  CHECK(std::abs(e0.E) < 1e-14);
  CHECK(std::abs(e0.E_BD) < 1e-14);
  CHECK(std::abs(e0.D + e0.D_BD - e0.R_BD) < 1e-14);

  ScalarField q = ScalarField::constant(f, 1.0);
  q.c[f->index_of({2, 0})] = 0.2;
  VectorField u = VectorField::zero(f);
  u.c.col(0) = 0.1 * ScalarField::coordinate(f, 0).c;
  RescaledRun a = rescaled_integrate(make_state(q, u), tp, 8e-3, 0.4);
  RescaledRun b = rescaled_integrate(make_state(q, u), tp, 4e-3, 0.4);
  REQUIRE(a.ok);
  REQUIRE(b.ok);
  CHECK(std::log2(a.max_residual / b.max_residual) >= 1.0);
  CHECK_THROWS_AS(rescaled_integrate(make_state(ScalarField::constant(Frame::with_sigma(2.0, 1, 4), 1.0),
                                                VectorField::zero(Frame::with_sigma(2.0, 1, 4))),
                                     tp, 1e-3, 0.1),
                  Error);
}
