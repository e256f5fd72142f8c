#pragma once

#include <string>

#include "qns/config.hpp"

namespace qns {

enum ExitCode : int { kExitOk = 0, kExitAudit = 1, kExitSolver = 2, kExitConfig = 3 };

struct AppOutcome
{
  int exit_code = kExitOk;
  std::string message;
};

// Runs one of simulate | verify | sweep | rescaled and writes its artifacts to
// config.output_dir. Never throws; failures are mapped to exit codes.
AppOutcome run_mode(const RunConfig& config, const std::string& mode);

}  // namespace qns
