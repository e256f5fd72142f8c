#include "qns/app.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "qns/continuation.hpp"
#include "qns/fields.hpp"
#include "qns/rescaled.hpp"

namespace qns {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string g17(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// JSON cannot hold inf/nan; those are written as strings.
json num(double v)
{
  if (std::isfinite(v))
    return v;
  return g17(v);
}

class CsvWriter
{
 public:
  explicit CsvWriter(const fs::path& path)
      : out_(path)
  {
    if (!out_)
      throw Error(ErrorKind::Config, "cannot write " + path.string());
  }

  void header(const std::vector<std::string>& cols)
  {
    for (size_t i = 0; i < cols.size(); ++i)
      out_ << (i ? "," : "") << cols[i];
    out_ << '\n';
  }

  void row(const std::vector<double>& v)
  {
    for (size_t i = 0; i < v.size(); ++i)
      out_ << (i ? "," : "") << g17(v[i]);
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

void write_json(const fs::path& path, const json& j)
{
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorKind::Config, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

json config_json(const RunConfig& c)
{
  json j = json::object();
  for (const auto& [k, v] : config_entries(c))
    j[k] = v;
  return j;
}

FramePtr model_frame(const RunConfig& c, int dim)
{
  Frame::Options o;
  o.quad_order = c.quad_order;
  o.window_weight = c.window_weight;
  return Frame::build(c.params.a, c.params.kappa, c.params.lambda, dim, c.degree, o);
}

std::vector<std::string> trajectory_columns(int d)
{
  std::vector<std::string> cols{"t", "mass", "E_reg", "D_reg", "E_BD", "D_BD", "I2", "I2_tilde", "I4"};
  for (int j = 0; j < d; ++j)
    cols.push_back("Mx" + std::to_string(j + 1));
  for (int j = 0; j < d; ++j)
    cols.push_back("Mu" + std::to_string(j + 1));
  for (const char* s : {"min_q", "max_q", "lsi_margin", "lsi_margin_inverse", "hessian_margin_intermediate",
                        "hessian_margin_final", "R_reg", "R_BD", "i2_forcing"})
    cols.push_back(s);
  return cols;
}

std::vector<double> trajectory_row(const DiagnosticsRecord& r)
{
  std::vector<double> v{r.t, r.mass, r.E_reg, r.D_reg, r.E_BD, r.D_BD, r.I2, r.I2_tilde, r.I4};
  for (int j = 0; j < r.dim; ++j)
    v.push_back(r.Mx[j]);
  for (int j = 0; j < r.dim; ++j)
    v.push_back(r.Mu[j]);
  for (double x : {r.min_q, r.max_q, r.lsi_margin, r.lsi_margin_inverse, r.hessian_intermediate, r.hessian_final,
                   r.R_reg, r.R_BD, r.i2_forcing})
    v.push_back(x);
  return v;
}

json coefficients_json(const SimState& s)
{
  json j;
  j["t"] = s.t;
  j["sigma"] = s.q.frame->sigma();
  j["q"] = std::vector<double>(s.q.c.data(), s.q.c.data() + s.q.c.size());
  json u = json::array();
  for (int i = 0; i < s.u.c.cols(); ++i) {
    Eigen::VectorXd col = s.u.c.col(i);
    u.push_back(std::vector<double>(col.data(), col.data() + col.size()));
  }
  j["u"] = u;
  return j;
}

int solver_exit(ErrorKind k)
{
  return k == ErrorKind::Config || k == ErrorKind::InvalidParameter ? kExitConfig : kExitSolver;
}

AppOutcome simulate(const RunConfig& c, const fs::path& out)
{
  std::mt19937_64 rng(c.seed);
  FramePtr f = model_frame(c, c.dim);
  ScalarField q0 = initial_density(f, c.initial, rng);
  VectorField u0 = initial_velocity(f, c.initial, rng);
  try {
    require_positive(f->fine(), f->fine().V * q0.c, c.solver.floor);
  } catch (const PositivityError& e) {
    throw Error(ErrorKind::Config, std::string("initial density: ") + e.what());
  }

  RunOptions ro;
  ro.dt = c.dt;
  ro.t_final = c.t_final;
  ro.record_every = c.record_every;
  ro.recenter = c.recenter;
  ro.solver = c.solver;
  RunResult run = integrate(make_state(q0, u0), c.params, ro);

  CsvWriter csv(out / "trajectory.csv");
  csv.header(trajectory_columns(c.dim));
  for (const auto& r : run.records)
    csv.row(trajectory_row(r));

  const double sigma = f->sigma();
  AuditReport audit = energy_inequality_audit(run.records, c.params, sigma);
  const double tol = c.audit_tol_per_dt * c.dt;
  double worst_lsi = INFINITY, worst_hi = INFINITY, worst_hf = INFINITY;
  bool mass_ok = true;
  for (const auto& r : run.records) {
    worst_lsi = std::min(worst_lsi, r.lsi_margin);
    worst_hi = std::min(worst_hi, r.hessian_intermediate);
    worst_hf = std::min(worst_hf, r.hessian_final);
    mass_ok = mass_ok && std::abs(r.mass - 1.0) < 1e-10;
  }
  json i2 = nullptr;
  try {
    i2 = i2_ode_residual(run.records, c.params, sigma);
  } catch (const Error&) {
  }
  const bool energy_ok = audit.energy_violation <= tol;
  const bool bd_ok = audit.bd_violation <= tol;
  const bool ebd_ok = audit.min_E_BD >= -1e-12;
  const bool passed = energy_ok && bd_ok && ebd_ok && mass_ok;

  json s;
  s["mode"] = "simulate";
  s["status"] = run.ok ? "completed" : "solver_failure";
  if (!run.ok)
    s["failure"] = run.failure;
  s["warnings"] = run.warnings;
  s["sigma"] = sigma;
  s["steps"] = step_count(c.t_final, c.dt);
  s["records"] = run.records.size();
  if (!run.records.empty()) {
    const auto& r = run.records.back();
    s["final"] = {{"t", r.t},         {"mass", r.mass},       {"E_reg", r.E_reg}, {"E_BD", r.E_BD},
                  {"I2_tilde", r.I2_tilde}, {"min_q", r.min_q}, {"max_q", r.max_q},
                  {"Mx", std::vector<double>(r.Mx.begin(), r.Mx.begin() + r.dim)},
                  {"Mu", std::vector<double>(r.Mu.begin(), r.Mu.begin() + r.dim)}};
  }
  s["audit"] = {{"tolerance", tol},
                {"energy_violation", num(audit.energy_violation)},
                {"bd_violation", num(audit.bd_violation)},
                {"min_E_BD", num(audit.min_E_BD)},
                {"max_mass_drift", num(audit.max_mass_drift)},
                {"positivity_envelope_ok", audit.envelope_ok},
                {"energy_ok", energy_ok},
                {"bd_ok", bd_ok},
                {"E_BD_nonnegative", ebd_ok},
                {"mass_ok", mass_ok},
                {"passed", passed}};
  s["worst_margins"] = {{"log_sobolev", num(worst_lsi)},
                        {"hessian_intermediate", num(worst_hi)},
                        {"hessian_final", num(worst_hf)}};
  s["i2_ode_residual"] = i2;
  s["minimal_energy"] = minimal_energy(c.params, sigma, c.dim);
  s["config"] = config_json(c);
  AppOutcome o;
  if (!run.ok) {
    o.exit_code = solver_exit(run.failure_kind);
    o.message = run.failure;
  } else if (!passed) {
    o.exit_code = kExitAudit;
    o.message = "audit violation";
  }
  s["exit_code"] = o.exit_code;
  write_json(out / "summary.json", s);
  if (c.snapshots)
    write_json(out / "final_state.json", coefficients_json(run.final));
  return o;
}

AppOutcome verify(const RunConfig& c, const fs::path& out)
{
  std::mt19937_64 rng(c.seed);
  CsvWriter csv(out / "margins.csv");
  csv.header({"dim", "sample", "kind", "lsi_margin", "lsi_margin_inverse", "hessian_A", "hessian_B", "hessian_D",
              "hessian_margin_intermediate", "hessian_margin_final", "strong_poincare", "poincare_weighted",
              "strong_korn", "korn_transport", "bohm_residual", "korteweg_consistency"});
  constexpr double kMarginTol = -1e-8;
  double worst_lsi = INFINITY, worst_hi = INFINITY, worst_hf = INFINITY, worst_bohm = 0.0, worst_kort = 0.0;
  double max_sp = 0.0, max_spk = 0.0, tilt_margin = NAN;
  int samples = 0;
  for (int d : c.verify_dims) {
    FramePtr f = model_frame(c, d);
    for (int k = -2; k < c.n_samples; ++k) {
      // kind 0: q = 1, kind 1: log-Sobolev extremizer, kind 2: random sample
      ScalarField q;
      ScalarField fs;
      VectorField u;
      double kind = 2.0;
      if (k == -2) {
        kind = 0.0;
        q = ScalarField::constant(f, 1.0);
        fs = ScalarField::coordinate(f, 0);
        u = VectorField::zero(f);
        if (d == 2) {
          u.c.col(0) = -ScalarField::coordinate(f, 1).c;
          u.c.col(1) = ScalarField::coordinate(f, 0).c;
        }
      } else if (k == -1) {
        kind = 1.0;
        q = tilted_density(f, c.initial.tilt);
        q.c /= q.c[0];
        fs = q;
        u = VectorField::zero(f);
        u.c.col(0) = ScalarField::coordinate(f, 0).c;
      } else {
        q = random_density(f, rng);
        fs = random_scalar(f, rng);
        u = random_velocity(f, rng, 1.0);
      }
      LsiMargins l = check_log_sobolev(q, c.solver.floor);
      HessianLemma h = check_hessian_lemma(q, c.solver.floor);
      PoincareReport p = check_poincare(fs);
      KornReport kr = check_korn(u);
      const double bohm = bohm_residual(q, c.params.kappa, c.solver.floor);
      const double kort = korteweg_consistency(q, c.solver.floor);
      csv.row({double(d), double(k), kind, l.margin, l.margin_inverse, h.A, h.B, h.D, h.margin_intermediate,
               h.margin_final, p.strong_poincare, p.weighted_bound, kr.strong_korn, kr.transport_bound, bohm, kort});
      worst_lsi = std::min(worst_lsi, l.margin);
      worst_hi = std::min(worst_hi, h.margin_intermediate);
      worst_hf = std::min(worst_hf, h.margin_final);
      worst_bohm = std::max(worst_bohm, bohm);
      worst_kort = std::max(worst_kort, kort);
      if (std::isfinite(p.strong_poincare))
        max_sp = std::max(max_sp, p.strong_poincare);
      if (std::isfinite(kr.strong_korn))
        max_spk = std::max(max_spk, kr.strong_korn);
      if (k == -1 && d == c.verify_dims.front())
        tilt_margin = l.margin;
      ++samples;
    }
  }
  const bool passed = worst_lsi >= kMarginTol && worst_hi >= kMarginTol && worst_hf >= kMarginTol
                      && worst_bohm < 1e-8 && worst_kort < 1e-10;
  json s;
  s["mode"] = "verify";
  s["samples"] = samples;
  s["worst"] = {{"log_sobolev", num(worst_lsi)},
                {"hessian_intermediate", num(worst_hi)},
                {"hessian_final", num(worst_hf)},
                {"bohm_residual", num(worst_bohm)},
                {"korteweg_consistency", num(worst_kort)}};
  s["tilt_log_sobolev_margin"] = num(tilt_margin);
  s["empirical_constants"] = {{"strong_poincare", num(max_sp)}, {"strong_poincare_korn", num(max_spk)}};
  s["passed"] = passed;
  s["config"] = config_json(c);
  AppOutcome o;
  if (!passed) {
    o.exit_code = kExitAudit;
    o.message = "inequality margin below tolerance";
  }
  s["exit_code"] = o.exit_code;
  write_json(out / "summary.json", s);
  return o;
}

AppOutcome sweep(const RunConfig& c, const fs::path& out)
{
  std::mt19937_64 rng(c.seed);
  FramePtr f = model_frame(c, c.dim);
  SweepSpec spec;
  spec.base = c.params;
  spec.q0 = initial_density(f, c.initial, rng);
  spec.u0 = initial_velocity(f, c.initial, rng);
  spec.n_list = c.n_list;
  spec.dt = c.dt;
  spec.t_final = c.t_final;
  spec.record_every = c.record_every;
  spec.burn_in = c.burn_in;
  spec.audit_tol = c.audit_tol_per_dt * c.dt;
  spec.solver = c.solver;
  SweepReport rep = vanishing_drag_sweep(spec);

  CsvWriter csv(out / "sweep.csv");
  csv.header({"n", "r0n", "r1n", "r4n", "delta1n", "r0_product", "r4_product", "energy_violation", "bd_violation",
              "min_E_BD", "h1_increment", "l2_increment"});
  for (size_t k = 0; k < rep.members.size(); ++k) {
    const SweepMember& m = rep.members[k];
    const double h1 = k + 1 < rep.members.size() ? rep.h1_increments[k] : NAN;
    const double l2 = k + 1 < rep.members.size() ? rep.l2_increments[k] : NAN;
    csv.row({double(m.n), m.drag.r0n, m.drag.r1n, m.drag.r4n, m.drag.delta1n, m.drag.r0_product, m.drag.r4_product,
             m.audit.energy_violation, m.audit.bd_violation, m.audit.min_E_BD, h1, l2});
  }
  json members = json::array();
  for (const SweepMember& m : rep.members) {
    members.push_back({{"n", m.n},
                       {"ok", m.ok},
                       {"failure", m.failure},
                       {"energy_violation", num(m.audit.energy_violation)},
                       {"bd_violation", num(m.audit.bd_violation)},
                       {"min_E_BD", num(m.audit.min_E_BD)}});
  }
  json s;
  s["mode"] = "sweep";
  s["members"] = members;
  s["h1_increments"] = rep.h1_increments;
  s["l2_increments"] = rep.l2_increments;
  s["failed_index"] = rep.failed_index;
  s["monotone"] = rep.monotone;
  s["audits_ok"] = rep.audits_ok;
  s["config"] = config_json(c);
  AppOutcome o;
  if (rep.failed_index >= 0) {
    o.exit_code = kExitSolver;
    o.message = "sweep member n = " + std::to_string(c.n_list[rep.failed_index])
                + " failed: " + rep.members.back().failure;
  } else if (!rep.monotone || !rep.audits_ok) {
    o.exit_code = kExitAudit;
    o.message = "sweep increments or audits out of bounds";
  }
  s["exit_code"] = o.exit_code;
  write_json(out / "summary.json", s);
  return o;
}

AppOutcome rescaled(const RunConfig& c, const fs::path& out)
{
  std::mt19937_64 rng(c.seed);
  Frame::Options fo;
  fo.quad_order = c.quad_order;
  fo.window_weight = c.window_weight;
  FramePtr f = Frame::with_sigma(1.0, c.dim, c.degree, fo);
  ScalarField q0 = initial_density(f, c.initial, rng);
  VectorField u0 = initial_velocity(f, c.initial, rng);
  TauParams tp{c.params.a, c.params.kappa, c.params.nu};
  RescaledRun run = rescaled_integrate(make_state(q0, u0), tp, c.dt, c.t_final, c.solver);

  CsvWriter csv(out / "rescaled.csv");
  csv.header({"t", "tau", "tau_dot", "mass", "E_tau", "D_tau", "E_BD_tau", "D_BD_tau", "cross", "R_BD_tau", "residual"});
  for (size_t k = 0; k < run.records.size(); ++k) {
    const RescaledRecord& r = run.records[k];
    if (k % c.record_every != 0 && k + 1 != run.records.size())
      continue;
    csv.row({r.tau.t, r.tau.tau, r.tau.tau_dot, r.mass, r.e.E, r.e.D, r.e.E_BD, r.e.D_BD, r.e.cross, r.e.R_BD, r.residual});
  }
  const double tol = c.audit_tol_per_dt * c.dt;
  double drift = 0.0;
  for (const auto& r : run.records)
    drift = std::max(drift, std::abs(r.mass - 1.0));
  const bool passed = run.max_residual <= tol && drift < 1e-10;
  json s;
  s["mode"] = "rescaled";
  s["status"] = run.ok ? "completed" : "solver_failure";
  if (!run.ok)
    s["failure"] = run.failure;
  s["final_tau"] = {{"t", run.final_tau.t}, {"tau", run.final_tau.tau}, {"tau_dot", run.final_tau.tau_dot}};
  s["max_combined_residual"] = num(run.max_residual);
  s["max_mass_drift"] = num(drift);
  s["tolerance"] = tol;
  s["passed"] = passed;
  s["config"] = config_json(c);
  AppOutcome o;
  if (!run.ok) {
    o.exit_code = solver_exit(run.failure_kind);
    o.message = run.failure;
  } else if (!passed) {
    o.exit_code = kExitAudit;
    o.message = "combined energy residual above tolerance";
  }
  s["exit_code"] = o.exit_code;
  write_json(out / "summary.json", s);
  return o;
}

}  // namespace

AppOutcome run_mode(const RunConfig& config, const std::string& mode)
{
  try {
    fs::path out(config.output_dir);
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec)
      throw Error(ErrorKind::Config, "run.output_dir: cannot create '" + out.string() + "': " + ec.message());
    if (mode == "simulate")
      return simulate(config, out);
    if (mode == "verify")
      return verify(config, out);
    if (mode == "sweep")
      return sweep(config, out);
    if (mode == "rescaled")
      return rescaled(config, out);
    throw Error(ErrorKind::Config, "unknown mode '" + mode + "'");
  } catch (const Error& e) {
    return {e.kind() == ErrorKind::Config || e.kind() == ErrorKind::InvalidParameter ? kExitConfig : kExitSolver,
            e.what()};
  } catch (const std::exception& e) {
    return {kExitSolver, e.what()};
  }
}

}  // namespace qns
