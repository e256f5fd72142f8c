#include "doctest.h"

#include <cmath>
#include <random>

#include "qns/fields.hpp"

using namespace qns;

TEST_CASE("OU semigroup decays each mode exactly")
{
  std::mt19937_64 rng(4);
  FramePtr f = Frame::build(1.0, 1.0, 2.0, 2, 10);
  ScalarField q = random_scalar(f, rng);
  const double s2 = f->sigma() * f->sigma();
  ScalarField r = ou_semigroup(q, 0.7, 0.3);
  for (int k = 0; k < f->size(); ++k)
    CHECK(r.c[k] == doctest::Approx(q.c[k] * std::exp(-0.3 * f->total_degree(k) * 0.7 / s2)).epsilon(1e-13));
  ScalarField rr = ou_semigroup(ou_semigroup(q, 0.3, 0.3), 0.4, 0.3);
  CHECK((rr.c - r.c).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("advection conserves mass and vanishes for u = 0")
{
  std::mt19937_64 rng(5);
  FramePtr f = Frame::build(1.0, 1.0, 2.0, 1, 12);
  ScalarField q = random_density(f, rng);
  CHECK(advection(q, VectorField::zero(f)).cwiseAbs().maxCoeff() == 0.0);
  VectorField u = random_velocity(f, rng, 0.3, 3);
  CHECK(std::abs(advection(q, u)[0]) < 1e-14);
}

TEST_CASE("advection of q = 1 is the divergence")
{
  std::mt19937_64 rng(6);
  Frame::Options all;
  all.window_weight = 0.0;
  FramePtr f = Frame::build(1.0, 1.0, 2.0, 2, 8, all);
  VectorField u = random_velocity(f, rng, 1.0, 3);
  Eigen::VectorXd a = advection(ScalarField::constant(f, 1.0), u);
  CHECK((a + div_m(u).c).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("fp_step without velocity is the semigroup")
{
  std::mt19937_64 rng(7);
  FramePtr f = Frame::build(1.0, 1.0, 2.0, 1, 12);
  ScalarField q = random_density(f, rng);
  ScalarField r = fp_step(q, VectorField::zero(f), 0.2, 0.01);
  CHECK((r.c - ou_semigroup(q, 0.01, 0.2).c).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("fp_step is second order in dt")
{
  std::mt19937_64 rng(8);
  FramePtr f = Frame::build(1.0, 1.0, 2.0, 1, 12);
  ScalarField q = random_density(f, rng, 0.5, 3);
  VectorField u = random_velocity(f, rng, 0.2, 2);
  auto run = [&](int n) {
    ScalarField s = q;
    for (int k = 0; k < n; ++k)
      s = fp_step(s, u, 0.1, 0.1 / n);
    return s;
  };
  ScalarField a = run(4), b = run(8), c = run(16);
  const double order = std::log2((a.c - b.c).norm() / (b.c - c.c).norm());
  CHECK(order > 1.8);
  CHECK(std::abs(c.c[0] - q.c[0]) < 1e-14);
}

TEST_CASE("positivity envelope")
{
  FramePtr f = Frame::build(1.0, 1.0, 2.0, 1, 8);
  ScalarField q = ScalarField::constant(f, 1.0);
  PositivityEnvelope env = envelope_init(q);
  CHECK(env.c0 == doctest::Approx(1.0));
  VectorField u = VectorField::zero(f);
  u.c.col(0) = ScalarField::coordinate(f, 0).c;
  PositivityEnvelope e1 = envelope_update(env, u, 0.1);
  CHECK(e1.accumulated == doctest::Approx(0.1 * div_m_sup(u)));
  CHECK(e1.lower() < 1.0);
  CHECK(e1.upper() > 1.0);
  CHECK(envelope_check(q, e1));
}
