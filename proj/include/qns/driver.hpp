#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qns/diagnostics.hpp"

namespace qns {

struct RunOptions
{
  double dt = 1e-3;
  double t_final = 1.0;
  int record_every = 1;
  bool recenter = false;
  bool keep_snapshots = false;
  SolverOptions solver;
};

struct RunResult
{
  std::vector<DiagnosticsRecord> records;
  std::vector<SimState> snapshots;  // states at the recorded times, when requested
  SimState final;
  bool ok = true;
  ErrorKind failure_kind = ErrorKind::StepFailure;
  std::string failure;
  std::vector<std::string> warnings;
};

int step_count(double t_final, double dt);

// Advances with coupled_step, recording diagnostics at step 0, every record_every steps
// and at the final time. Solver exceptions end the run and are reported in the result.
RunResult integrate(const SimState& init, const ModelParams& p, const RunOptions& opt);

}  // namespace qns
