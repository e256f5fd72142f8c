#include "doctest.h"

#include <cmath>
#include <random>

#include "qns/fields.hpp"

using namespace qns;

TEST_CASE("energy and BD entropy vanish at equilibrium")
{
  FramePtr f = Frame::build(1.0, 1.0, 2.0, 2, 6);
  ModelParams p;
  EnergyTriple e = energy(ScalarField::constant(f, 1.0), VectorField::zero(f), p);
  EnergyTriple b = bd_entropy(ScalarField::constant(f, 1.0), VectorField::zero(f), p);
  CHECK(std::abs(e.E) < 1e-14);
  CHECK(std::abs(e.D) < 1e-14);
  CHECK(std::abs(b.E) < 1e-14);
}

TEST_CASE("kinetic energy of a uniform velocity")
{
  FramePtr f = Frame::build(1.0, 1.0, 2.0, 1, 6);
  VectorField u = VectorField::zero(f);
  u.c(0, 0) = 0.5;
  ModelParams p;
  EnergyTriple e = energy(ScalarField::constant(f, 1.0), u, p);
  CHECK(e.E == doctest::Approx(0.125));
  CHECK(std::abs(e.D) < 1e-14);
}

TEST_CASE("moments of a shifted Gaussian ratio")
{
  FramePtr f = Frame::build(1.0, 1.0, 2.0, 2, 12);
  ScalarField q = shifted_gaussian(f, {0.3, -0.2});
  Moments m = moments(q, VectorField::zero(f));
  const double s2 = f->sigma() * f->sigma();
  CHECK(m.mass == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(m.Mx[0] == doctest::Approx(0.3).epsilon(1e-10));
  CHECK(m.Mx[1] == doctest::Approx(-0.2).epsilon(1e-10));
  CHECK(m.I2 == doctest::Approx(2.0 + 0.13 / s2).epsilon(1e-8));
}

TEST_CASE("log-Sobolev equality for the tilt")
{
  FramePtr f = Frame::build(1.0, 1.0, 2.0, 1, 20);
  ScalarField q = tilted_density(f, 0.5);
  q.c /= q.c[0];
  CHECK(std::abs(check_log_sobolev(q).margin) < 1e-6);
}

TEST_CASE("inequality margins are non-negative on random densities")
{
  std::mt19937_64 rng(11);
  for (int d : {1, 2}) {
    FramePtr f = Frame::build(1.0, 1.0, 2.0, d, 10);
    for (int k = 0; k < 5; ++k) {
      ScalarField q = random_density(f, rng);
      CHECK(check_log_sobolev(q).margin >= -1e-8);
      HessianLemma h = check_hessian_lemma(q);
      CHECK(h.margin_intermediate >= -1e-8);
      CHECK(h.margin_final >= -1e-8);
    }
  }
}

TEST_CASE("Poincare and Korn reports")
{
  FramePtr f = Frame::build(1.0, 1.0, 2.0, 2, 8);
  VectorField rot = VectorField::zero(f);
  rot.c.col(0) = -ScalarField::coordinate(f, 1).c;
  rot.c.col(1) = ScalarField::coordinate(f, 0).c;
  VectorField pr = rotation_projection(rot);
  CHECK((pr.c - rot.c).cwiseAbs().maxCoeff() < 1e-12);
  std::mt19937_64 rng(12);
  PoincareReport p = check_poincare(random_scalar(f, rng));
  CHECK(std::isfinite(p.strong_poincare));
  CHECK(p.strong_poincare > 0.0);
  KornReport k = check_korn(random_velocity(f, rng, 1.0));
  CHECK(std::isfinite(k.strong_korn));
}

TEST_CASE("second-moment residual of an exact oscillation")
{
  ModelParams p;
  const double sigma = sigma_from_params(p.a, p.kappa, p.lambda), s2 = sigma * sigma;
  const double b = 2.0 * p.nu / s2, w2 = 2.0 * (p.lambda + p.kappa * p.kappa / (s2 * s2));
  std::vector<DiagnosticsRecord> traj;
  for (int k = 0; k < 400; ++k) {
    DiagnosticsRecord r;
    r.t = k * 5e-3;
    r.I2_tilde = std::sin(r.t);
    r.i2_forcing = -std::sin(r.t) + b * std::cos(r.t) + w2 * std::sin(r.t);
    traj.push_back(r);
  }
  CHECK(i2_ode_residual(traj, p, sigma) < 1e-8);
  traj[3].t += 1e-4;
  CHECK_THROWS_AS(i2_ode_residual(traj, p, sigma), Error);
}

TEST_CASE("energy audit flags growth and accepts dissipation")
{
  ModelParams p;
  std::vector<DiagnosticsRecord> traj(3);
  for (int k = 0; k < 3; ++k) {
    traj[k].t = 0.1 * k;
    traj[k].mass = 1.0;
    traj[k].E_reg = 1.0 - 0.1 * k;
    traj[k].D_reg = 1.0;
    traj[k].E_BD = 1.0;
  }
  AuditReport a = energy_inequality_audit(traj, p, 1.0);
  CHECK(a.energy_violation <= 1e-15);
  traj[2].E_reg = 2.0;
  a = energy_inequality_audit(traj, p, 1.0);
  CHECK(a.energy_violation > 0.5);
  CHECK(a.min_E_BD == 1.0);
}

TEST_CASE("minimal energy")
{
  ModelParams p;
  CHECK(minimal_energy(p, 1.0, 1) == doctest::Approx(1.0 - 0.5 * std::log(2 * M_PI)));
}
