#include "doctest.h"

#include <cmath>
#include <random>

#include "qns/driver.hpp"
#include "qns/fields.hpp"

using namespace qns;

namespace {

Eigen::VectorXd stack(const VectorField& u)
{
  return Eigen::Map<const Eigen::VectorXd>(u.c.data(), u.c.size());
}

}  // namespace

TEST_CASE("momentum coefficients carry the frame pressure")
{
  ModelParams p;
  FramePtr f = Frame::build(p.a, p.kappa, p.lambda, 1, 4);
  MomentumCoefficients m = momentum_coefficients(p, *f);
  const double s2 = f->sigma() * f->sigma();
  CHECK(m.pressure == doctest::Approx(p.lambda * s2));
  CHECK(m.pressure == doctest::Approx(p.a + p.kappa * p.kappa / s2));
}

TEST_CASE("mass operator of q = 1 is the identity up to the window")
{
  Frame::Options all;
  all.window_weight = 0.0;
  FramePtr f = Frame::build(1.0, 1.0, 2.0, 2, 6, all);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(f->size(), f->size());
  CHECK((assemble_mass(ScalarField::constant(f, 1.0)).block - I).cwiseAbs().maxCoeff() < 1e-12);
  FramePtr g = Frame::build(1.0, 1.0, 2.0, 2, 6);
  CHECK((assemble_mass(ScalarField::constant(g, 1.0)).block - I).cwiseAbs().maxCoeff() < 1e-4);
}

TEST_CASE("the equilibrium is a fixed point")
{
  FramePtr f = Frame::build(1.0, 1.0, 2.0, 2, 6);
  ModelParams p;
  p.r0 = p.r1 = p.r4 = 0.0;
  Eigen::MatrixXd rhs = momentum_rhs(ScalarField::constant(f, 1.0), VectorField::zero(f), p);
  CHECK(rhs.cwiseAbs().maxCoeff() < 1e-13);
  SimState s = coupled_step(make_state(ScalarField::constant(f, 1.0), VectorField::zero(f)), p, 1e-2);
  CHECK((s.q.c - ScalarField::constant(f, 1.0).c).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(s.u.c.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("weighted projection reproduces polynomial velocities")
{
  std::mt19937_64 rng(9);
  FramePtr f = Frame::build(1.0, 1.0, 2.0, 1, 10);
  ScalarField q = random_density(f, rng, 0.5, 2);
  VectorField u = random_velocity(f, rng, 1.0, 4);
  const Grid& g = f->fine();
  VectorField p = project_initial_velocity(q, g.V * u.c);
  CHECK((p.c - u.c).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("linearization matches the affine part of the momentum balance")
{
  std::mt19937_64 rng(10);
  for (int d : {1, 2}) {
    FramePtr f = Frame::build(1.0, 1.0, 2.0, d, 6);
    ScalarField q = random_density(f, rng, 0.5, 2);
    VectorField u = random_velocity(f, rng, 0.5, 3);
    MomentumCoefficients m;
    m.transport = 0.0;
    m.nu = 0.4;
    m.kappa2 = 0.7;
    m.pressure = 1.3;
    m.delta1 = 0.2;
    m.r0 = 0.3;
    Eigen::MatrixXd A = momentum_linearization(q, u, m);
    Eigen::MatrixXd r1 = momentum_rhs(q, u, m), r0 = momentum_rhs(q, VectorField::zero(f), m);
    Eigen::MatrixXd diff = r1 - r0;
    Eigen::VectorXd lin = A * stack(u);
    CHECK((Eigen::Map<Eigen::VectorXd>(diff.data(), diff.size()) - lin).cwiseAbs().maxCoeff() < 1e-11);
  }
}

TEST_CASE("coupled step conserves mass and converges at second order")
{
  ModelParams p;
  p.lambda = 4.0;
  FramePtr f = Frame::build(p.a, p.kappa, p.lambda, 1, 12);
  ScalarField q0 = shifted_gaussian(f, {0.3, 0.0});
  q0.c /= q0.c[0];
  VectorField u0 = VectorField::zero(f);
  auto run = [&](int n) {
    SimState s = make_state(q0, u0);
    for (int k = 0; k < n; ++k)
      s = coupled_step(s, p, 0.2 / n);
    return s;
  };
  SimState a = run(10), b = run(20), c = run(40);
  CHECK(std::abs(c.q.c[0] - 1.0) < 1e-12);
  const double order = std::log2((a.u.c - b.u.c).norm() / (b.u.c - c.u.c).norm());
  CHECK(order > 1.8);
}

TEST_CASE("recentering removes the mean")
{
  FramePtr f = Frame::build(1.0, 1.0, 2.0, 1, 16);
  ScalarField q = shifted_gaussian(f, {0.2, 0.0});
  VectorField u = VectorField::zero(f);
  u.c(0, 0) = 0.1;
  SimState s = recenter(make_state(q, u));
  Moments m = moments(s.q, s.u);
  CHECK(std::abs(m.Mx[0]) < 1e-8);
  CHECK(std::abs(m.Mu[0]) < 1e-8);
  CHECK(m.mass == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("integrate records at the requested cadence")
{
  FramePtr f = Frame::build(1.0, 1.0, 2.0, 1, 6);
  RunOptions ro;
  ro.dt = 0.01;
  ro.t_final = 0.1;
  ro.record_every = 3;
  RunResult r = integrate(make_state(ScalarField::constant(f, 1.0), VectorField::zero(f)), ModelParams{}, ro);
  REQUIRE(r.ok);
  REQUIRE(r.records.size() == 5);
  CHECK(r.records[1].t == doctest::Approx(0.03));
  CHECK(r.records.back().t == doctest::Approx(0.1));
  CHECK(step_count(1.0, 1e-3) == 1000);
}
