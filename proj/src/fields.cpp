#include "qns/fields.hpp"

#include <cmath>
#include <fstream>

namespace qns {

ScalarField shifted_gaussian(const FramePtr& f, const std::array<double, 2>& m)
{
  ScalarField q = ScalarField::zero(f);
  const double s = f->sigma();
  for (int k = 0; k < f->size(); ++k) {
    const MultiIndex& a = f->indices()[k];
    double v = 1.0;
    for (int j = 0; j < f->dim(); ++j)
      v *= std::pow(m[j] / s, a[j]) / std::sqrt(std::tgamma(a[j] + 1.0));
    q.c[k] = v;
  }
  return q;
}

ScalarField tilted_density(const FramePtr& f, double alpha, int axis)
{
  std::array<double, 2> m{0.0, 0.0};
  m[axis] = alpha * f->sigma() * f->sigma();
  return shifted_gaussian(f, m);
}

ScalarField random_scalar(const FramePtr& f, std::mt19937_64& rng, int max_degree)
{
  if (max_degree < 0)
    max_degree = f->degree();
  std::normal_distribution<double> normal(0.0, 1.0);
  ScalarField p = ScalarField::zero(f);
  for (int k = 0; k < f->size(); ++k) {
    const int deg = f->total_degree(k);
    if (deg <= max_degree)
      p.c[k] = normal(rng) * std::pow(2.0, -0.5 * deg);
  }
  return p;
}

ScalarField random_density(const FramePtr& f, std::mt19937_64& rng, double c, int p_degree)
{
  if (p_degree < 0 || 2 * p_degree > f->degree())
    p_degree = f->degree() / 2;
  ScalarField p = random_scalar(f, rng, p_degree);
  ScalarField p2 = multiply(p, p);
  const double norm = p2.c[0];
  ScalarField q = p2;
  q.c /= norm;
  q.c[0] += c;
  q.c /= 1.0 + c;
  return q;
}

VectorField random_velocity(const FramePtr& f, std::mt19937_64& rng, double amplitude, int max_degree)
{
  VectorField u = VectorField::zero(f);
  for (int j = 0; j < f->dim(); ++j)
    u.c.col(j) = amplitude * random_scalar(f, rng, max_degree).c;
  return u;
}

ScalarField read_coefficients(const FramePtr& f, const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorKind::Config, path + ": cannot open coefficient file");
  ScalarField q = ScalarField::zero(f);
  int k = 0;
  std::string tok;
  while (in >> tok) {
    if (tok[0] == '#') {
      std::getline(in, tok);
      continue;
    }
    if (k >= f->size())
      throw Error(ErrorKind::Config, path + ": more coefficients than basis functions");
    try {
      size_t used = 0;
      q.c[k] = std::stod(tok, &used);
      if (used != tok.size())
        throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw Error(ErrorKind::Config, path + ": entry " + std::to_string(k + 1) + " is not a number");
    }
    ++k;
  }
  if (k == 0)
    throw Error(ErrorKind::Config, path + ": no coefficients");
  return q;
}

ScalarField initial_density(const FramePtr& f, const InitialSpec& spec, std::mt19937_64& rng)
{
  ScalarField q;
  if (spec.family == "uniform")
    q = ScalarField::constant(f, 1.0);
  else if (spec.family == "shifted")
    q = shifted_gaussian(f, spec.shift);
  else if (spec.family == "tilted")
    q = tilted_density(f, spec.tilt);
  else if (spec.family == "perturbed") {
    q = ScalarField::constant(f, 1.0);
    MultiIndex e{2, 0};
    const int k = f->index_of(e);
    if (k < 0)
      throw Error(ErrorKind::Config, "initial.family: perturbed data needs degree at least 2");
    q.c[k] += spec.perturbation;
  } else if (spec.family == "random") {
    q = random_density(f, rng, 0.1, spec.random_degree);
    q.c *= spec.perturbation;
    q.c[0] += 1.0 - spec.perturbation;
  }
  else if (spec.family == "coefficients")
    q = read_coefficients(f, spec.coefficient_file);
  else
    throw Error(ErrorKind::Config, "initial.family: unknown family '" + spec.family + "'");
  if (!(q.c[0] > 0.0))
    throw Error(ErrorKind::Config, "initial density has non-positive mass");
  q.c /= q.c[0];
  return q;
}

VectorField initial_velocity(const FramePtr& f, const InitialSpec& spec, std::mt19937_64& rng)
{
  const double A = spec.velocity_amplitude;
  const int d = f->dim();
  VectorField u = VectorField::zero(f);
  auto coord = [&](int j) { return ScalarField::coordinate(f, j).c; };
  if (spec.velocity == "zero")
    return u;
  if (spec.velocity == "uniform") {
    u.c(0, 0) = A;
  } else if (spec.velocity == "linear") {
    for (int j = 0; j < d; ++j)
      u.c.col(j) = A * coord(j);
  } else if (spec.velocity == "rotation") {
    if (d != 2)
      throw Error(ErrorKind::Config, "initial.velocity: rotation requires dim = 2");
    u.c.col(0) = -A * coord(1);
    u.c.col(1) = A * coord(0);
  } else if (spec.velocity == "random") {
    u = random_velocity(f, rng, A, spec.random_degree);
  } else {
    throw Error(ErrorKind::Config, "initial.velocity: unknown family '" + spec.velocity + "'");
  }
  return u;
}

}  // namespace qns
