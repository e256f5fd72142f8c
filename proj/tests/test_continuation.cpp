#include "doctest.h"

#include <cmath>

#include "qns/continuation.hpp"
#include "qns/fields.hpp"

using namespace qns;

TEST_CASE("cutoff profile")
{
  CHECK(cutoff_chi(0.0) == 1.0);
  CHECK(cutoff_chi(0.5) == 1.0);
  CHECK(cutoff_chi(1.0) == 0.0);
  CHECK(cutoff_chi(0.75) == doctest::Approx(0.5));
  const double h = 1e-6;
  CHECK(std::abs(cutoff_chi(0.5 + h) - 1.0) < 1e-12);
  CHECK(std::abs(cutoff_chi(1.0 - h)) < 1e-12);
}

TEST_CASE("mollifier has unit mass")
{
  const int n = 4000;
  double m1 = 0.0, m2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = (i + 0.5) / n;
    m1 += 2.0 * mollifier_zeta(r, 1) / n;
    m2 += 2.0 * M_PI * r * mollifier_zeta(r, 2) / n;
  }
  CHECK(m1 == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(m2 == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(mollifier_zeta(1.2, 1) == 0.0);
}

TEST_CASE("renormalization cutoff")
{
  CHECK(renormalization_cutoff(1.0, 3.0) == 1.0);
  CHECK(renormalization_cutoff(3.0, 3.0) == 1.0);
  CHECK(renormalization_cutoff(0.1, 3.0) == 0.0);
  CHECK(renormalization_cutoff(7.0, 3.0) == 0.0);
  CHECK(renormalization_cutoff(0.25, 3.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(renormalization_cutoff(1.0, 0.5), Error);
}

TEST_CASE("mollified data is positive with unit mass")
{
  ModelParams p;
  FramePtr f = Frame::build(p.a, p.kappa, p.lambda, 1, 12);
  ScalarField q0 = ScalarField::constant(f, 1.0);
  q0.c[f->index_of({2, 0})] = 0.2;
  VectorField u0 = VectorField::zero(f);
  u0.c.col(0) = 0.2 * ScalarField::coordinate(f, 0).c;
  for (int n : {4, 8, 16}) {
    MollifiedData m = mollify_initial_data(q0, u0, n);
    CHECK(integrate(m.q) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.min_q > 0.0);
  }
  MollifiedData a = mollify_initial_data(q0, u0, 16), b = mollify_initial_data(q0, u0, 32);
  CHECK(sqrt_h1_distance(a.q, b.q) < sqrt_h1_distance(mollify_initial_data(q0, u0, 4).q, b.q));
  CHECK(sqrt_h1_distance(a.q, a.q) == 0.0);
}

TEST_CASE("drag schedule")
{
  FramePtr f = Frame::build(1.0, 1.0, 2.0, 1, 8);
  ScalarField q = ScalarField::constant(f, 1.0);
  DragSchedule s = drag_schedule(4, q, 0.5);
  CHECK(s.r1n == doctest::Approx(0.25));
  CHECK(s.delta1n == doctest::Approx(0.125));
  // For q = 1: int (q - ln q) = 1 and I4 = d(d+2) = 3.
  CHECK(s.r0n == doctest::Approx(1.0 / 5.0));
  CHECK(s.r4n == doctest::Approx(1.0 / 13.0));
  CHECK_THROWS_AS(drag_schedule(0, q), Error);
}
