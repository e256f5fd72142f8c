#include "doctest.h"

#include <cmath>
#include <numeric>
#include <random>

#include "qns/fields.hpp"

using namespace qns;

TEST_CASE("Gauss-Hermite rule integrates standard normal moments")
{
  std::vector<double> x, w;
  gauss_hermite(10, x, w);
  CHECK(std::accumulate(w.begin(), w.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  double m2 = 0.0, m4 = 0.0, m6 = 0.0;
  for (size_t k = 0; k < x.size(); ++k) {
    m2 += w[k] * std::pow(x[k], 2);
    m4 += w[k] * std::pow(x[k], 4);
    m6 += w[k] * std::pow(x[k], 6);
  }
  CHECK(m2 == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(m4 == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(m6 == doctest::Approx(15.0).epsilon(1e-13));
}

TEST_CASE("Hermite basis is orthonormal under the quadrature")
{
  const int n = 12;
  std::vector<double> x, w;
  gauss_hermite(n + 2, x, w);
  std::vector<double> v(n + 1);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (size_t k = 0; k < x.size(); ++k) {
    hermite_values(n, x[k], v.data());
    Eigen::Map<Eigen::VectorXd> p(v.data(), n + 1);
    gram += w[k] * p * p.transpose();
  }
  CHECK((gram - Eigen::MatrixXd::Identity(n + 1, n + 1)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("sigma solves the frame equation")
{
  for (double a : {0.1, 1.0, 3.0})
    for (double kappa : {0.2, 1.0})
      for (double lambda : {0.5, 2.0, 8.0}) {
        const double s2 = std::pow(sigma_from_params(a, kappa, lambda), 2);
        CHECK(std::abs(a / s2 + kappa * kappa / (s2 * s2) - lambda) < 1e-12);
      }
  CHECK_THROWS_AS(sigma_from_params(1.0, 1.0, 0.0), Error);
}

TEST_CASE("frame sizes and index lookup")
{
  FramePtr f1 = Frame::build(1.0, 1.0, 2.0, 1, 8);
  FramePtr f2 = Frame::build(1.0, 1.0, 2.0, 2, 8);
  CHECK(f1->size() == 9);
  CHECK(f2->size() == 45);
  CHECK(f2->base().points_per_axis == 20);
  CHECK(f2->fine().points_per_axis >= f2->base().points_per_axis);
  for (int k = 0; k < f2->size(); ++k)
    CHECK(f2->index_of(f2->indices()[k]) == k);
  CHECK(f2->index_of({5, 4}) == -1);
  CHECK(f1->index_of({0, 1}) == -1);
  CHECK_THROWS_AS(Frame::build(1.0, 1.0, 2.0, 3, 4), Error);
  CHECK_THROWS_AS(Frame::build(1.0, 1.0, 2.0, 1, 4, 6), Error);
}

TEST_CASE("transforms, products and derivatives are exact on polynomials")
{
  std::mt19937_64 rng(1);
  for (int d : {1, 2}) {
    FramePtr f = Frame::build(1.0, 1.0, 2.0, d, 10);
    ScalarField a = random_scalar(f, rng, 4), b = random_scalar(f, rng, 5);
    ScalarField back = transform(f, inverse_transform(a));
    CHECK((back.c - a.c).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(quadrature_integral(a) == doctest::Approx(integrate(a)).epsilon(1e-12));

    ScalarField ab = multiply(a, b);
    double x[2] = {0.3, -0.7};
    CHECK(ab.at(x) == doctest::Approx(a.at(x) * b.at(x)).epsilon(1e-11));

    const double h = 1e-5;
    double xp[2] = {x[0] + h, x[1]}, xm[2] = {x[0] - h, x[1]};
    const double fd = (a.at(xp) - a.at(xm)) / (2 * h);
    CHECK(derivative(a, 0).at(x) == doctest::Approx(fd).epsilon(1e-7));

    ScalarField xa = multiply_coordinate(a, 0);
    CHECK(xa.at(x) == doctest::Approx(x[0] * a.at(x)).epsilon(1e-11));
  }
}

TEST_CASE("OU generator is diagonal with eigenvalue -k/sigma^2")
{
  FramePtr f = Frame::build(1.0, 1.0, 2.0, 2, 6);
  const double s2 = f->sigma() * f->sigma();
  ScalarField e = ScalarField::basis(f, {2, 1});
  ScalarField r = ou_apply(e);
  CHECK(r.c[f->index_of({2, 1})] == doctest::Approx(-3.0 / s2));
  CHECK(r.c.cwiseAbs().sum() == doctest::Approx(3.0 / s2));
}

TEST_CASE("coordinate field and Gaussian density")
{
  FramePtr f = Frame::build(1.0, 1.0, 2.0, 1, 4);
  double x[2] = {0.8, 0.0};
  CHECK(ScalarField::coordinate(f, 0).at(x) == doctest::Approx(0.8));
  const double s = f->sigma();
  CHECK(f->gaussian_density(x) == doctest::Approx(std::exp(-0.32 / (s * s)) / std::sqrt(2 * M_PI * s * s)));
}

TEST_CASE("windowed weights are a restriction of the full weights")
{
  FramePtr f = Frame::build(1.0, 1.0, 2.0, 1, 12);
  const Grid& g = f->fine();
  for (int k = 0; k < g.size(); ++k)
    CHECK(g.ww[k] == (g.window[k] ? g.w[k] : 0.0));
}
