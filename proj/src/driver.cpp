#include "qns/driver.hpp"

#include <cmath>

namespace qns {

int step_count(double t_final, double dt)
{
  if (!(dt > 0.0) || !(t_final >= 0.0))
    throw Error(ErrorKind::InvalidParameter, "time step and final time must be positive");
  return static_cast<int>(std::llround(t_final / dt));
}

RunResult integrate(const SimState& init, const ModelParams& p, const RunOptions& opt)
{
  RunResult res;
  const int steps = step_count(opt.t_final, opt.dt);
  const int every = std::max(1, opt.record_every);
  SimState s = init;
  auto record = [&](const SimState& st) {
    res.records.push_back(diagnose(st, p, opt.solver.floor));
    if (opt.keep_snapshots)
      res.snapshots.push_back(st);
  };
  try {
    record(s);
    for (int k = 1; k <= steps; ++k) {
      s = coupled_step(s, p, opt.dt, opt.solver);
      s.t = k * opt.dt;
      if (opt.recenter) {
        std::string warning;
        s = recenter(s, &warning);
        if (!warning.empty())
          res.warnings.push_back(warning);
      }
      if (k % every == 0 || k == steps)
        record(s);
    }
  } catch (const Error& e) {
    res.ok = false;
    res.failure_kind = e.kind();
    res.failure = e.what();
  }
  res.final = s;
  return res;
}

}  // namespace qns
