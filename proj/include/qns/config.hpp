#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qns/driver.hpp"

namespace qns {

struct InitialSpec
{
  std::string family = "uniform";  // uniform | shifted | perturbed | random | tilted | coefficients
  std::array<double, 2> shift{0.0, 0.0};
  double perturbation = 0.05;
  double tilt = 0.5;
  int random_degree = 2;  // degree of the random factor p in q = p^2 + c, and of random velocities
  std::string velocity = "zero";  // zero | uniform | linear | rotation | random
  double velocity_amplitude = 0.0;
  std::string coefficient_file;
};

struct RunConfig
{
  std::string source;  // path the configuration was read from
  std::uint64_t seed = 0;
  std::string output_dir = ".";
  bool snapshots = false;

  ModelParams params;
  int dim = 1;
  int degree = 12;
  int quad_order = 0;
  double window_weight = 1e-12;

  InitialSpec initial;

  double dt = 1e-3;
  double t_final = 1.0;
  int record_every = 1;

  SolverOptions solver;
  bool recenter = false;

  double audit_tol_per_dt = 1e-2;  // tolerance of the cumulative audits, multiplied by dt

  int n_samples = 200;
  std::vector<int> verify_dims{1, 2};

  std::vector<int> n_list{4, 8, 16, 32};
  int burn_in = 1;
};

// Parses the INI-style text. Unknown sections or keys, malformed values and
// inconsistent parameters raise Error(ErrorKind::Config) naming the offending field.
RunConfig parse_config(const std::string& text, const std::string& source = "<string>");
RunConfig load_config(const std::string& path);
// Canonical key/value listing, used to echo the configuration in summaries.
std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& c);

}  // namespace qns
