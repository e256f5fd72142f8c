#include "qns/config.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace qns {

namespace {

namespace pt = boost::property_tree;

[[noreturn]] void fail(const std::string& field, const std::string& msg)
{
  throw Error(ErrorKind::Config, field + ": " + msg);
}

std::string trim(const std::string& s)
{
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& field, const std::string& raw)
{
  const std::string v = trim(raw);
  double out = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || p != v.data() + v.size())
    fail(field, "expected a number, got '" + v + "'");
  return out;
}

long long to_int(const std::string& field, const std::string& raw)
{
  const std::string v = trim(raw);
  long long out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || p != v.data() + v.size())
    fail(field, "expected an integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& field, const std::string& raw)
{
  const std::string v = trim(raw);
  if (v == "true" || v == "1" || v == "yes" || v == "on")
    return true;
  if (v == "false" || v == "0" || v == "no" || v == "off")
    return false;
  fail(field, "expected true or false, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& raw)
{
  std::string v = raw;
  for (char& c : v)
    if (c == ',')
      c = ' ';
  std::istringstream is(v);
  std::vector<std::string> out;
  for (std::string tok; is >> tok;)
    out.push_back(tok);
  return out;
}

std::vector<int> to_int_list(const std::string& field, const std::string& raw)
{
  std::vector<int> out;
  for (const std::string& tok : split_list(raw))
    out.push_back(static_cast<int>(to_int(field, tok)));
  if (out.empty())
    fail(field, "expected a non-empty list of integers");
  return out;
}

std::array<double, 2> to_pair(const std::string& field, const std::string& raw)
{
  std::vector<std::string> toks = split_list(raw);
  if (toks.empty() || toks.size() > 2)
    fail(field, "expected one or two numbers");
  std::array<double, 2> out{0.0, 0.0};
  for (size_t i = 0; i < toks.size(); ++i)
    out[i] = to_double(field, toks[i]);
  return out;
}

std::string one_of(const std::string& field, const std::string& raw, std::initializer_list<const char*> options)
{
  const std::string v = trim(raw);
  for (const char* o : options)
    if (v == o)
      return v;
  std::string list;
  for (const char* o : options)
    list += std::string(list.empty() ? "" : ", ") + o;
  fail(field, "unknown value '" + v + "' (expected one of: " + list + ")");
}

using Setter = std::function<void(RunConfig&, const std::string& field, const std::string& value)>;

const std::map<std::string, std::map<std::string, Setter>>& schema()
{
  static const std::map<std::string, std::map<std::string, Setter>> s = {
      {"run",
       {
           {"seed", [](RunConfig& c, const std::string& f, const std::string& v) {
              long long s = to_int(f, v);
              if (s < 0)
                fail(f, "seed must be non-negative");
              c.seed = static_cast<std::uint64_t>(s);
            }},
           {"output_dir", [](RunConfig& c, const std::string&, const std::string& v) { c.output_dir = trim(v); }},
           {"snapshots", [](RunConfig& c, const std::string& f, const std::string& v) { c.snapshots = to_bool(f, v); }},
       }},
      {"model",
       {
           {"a", [](RunConfig& c, const std::string& f, const std::string& v) { c.params.a = to_double(f, v); }},
           {"kappa", [](RunConfig& c, const std::string& f, const std::string& v) { c.params.kappa = to_double(f, v); }},
           {"nu", [](RunConfig& c, const std::string& f, const std::string& v) { c.params.nu = to_double(f, v); }},
           {"lambda", [](RunConfig& c, const std::string& f, const std::string& v) { c.params.lambda = to_double(f, v); }},
           {"r0", [](RunConfig& c, const std::string& f, const std::string& v) { c.params.r0 = to_double(f, v); }},
           {"r1", [](RunConfig& c, const std::string& f, const std::string& v) { c.params.r1 = to_double(f, v); }},
           {"r4", [](RunConfig& c, const std::string& f, const std::string& v) { c.params.r4 = to_double(f, v); }},
           {"delta1", [](RunConfig& c, const std::string& f, const std::string& v) { c.params.delta1 = to_double(f, v); }},
       }},
      {"frame",
       {
           {"dim", [](RunConfig& c, const std::string& f, const std::string& v) { c.dim = static_cast<int>(to_int(f, v)); }},
           {"degree", [](RunConfig& c, const std::string& f, const std::string& v) { c.degree = static_cast<int>(to_int(f, v)); }},
           {"quad_order",
            [](RunConfig& c, const std::string& f, const std::string& v) { c.quad_order = static_cast<int>(to_int(f, v)); }},
           {"window_weight",
            [](RunConfig& c, const std::string& f, const std::string& v) { c.window_weight = to_double(f, v); }},
       }},
      {"initial",
       {
           {"family",
            [](RunConfig& c, const std::string& f, const std::string& v) {
              c.initial.family = one_of(f, v, {"uniform", "shifted", "perturbed", "random", "tilted", "coefficients"});
            }},
           {"shift", [](RunConfig& c, const std::string& f, const std::string& v) { c.initial.shift = to_pair(f, v); }},
           {"perturbation",
            [](RunConfig& c, const std::string& f, const std::string& v) { c.initial.perturbation = to_double(f, v); }},
           {"tilt", [](RunConfig& c, const std::string& f, const std::string& v) { c.initial.tilt = to_double(f, v); }},
           {"random_degree",
            [](RunConfig& c, const std::string& f, const std::string& v) {
              c.initial.random_degree = static_cast<int>(to_int(f, v));
            }},
           {"velocity",
            [](RunConfig& c, const std::string& f, const std::string& v) {
              c.initial.velocity = one_of(f, v, {"zero", "uniform", "linear", "rotation", "random"});
            }},
           {"velocity_amplitude",
            [](RunConfig& c, const std::string& f, const std::string& v) { c.initial.velocity_amplitude = to_double(f, v); }},
           {"coefficient_file",
            [](RunConfig& c, const std::string&, const std::string& v) { c.initial.coefficient_file = trim(v); }},
       }},
      {"time",
       {
           {"dt", [](RunConfig& c, const std::string& f, const std::string& v) { c.dt = to_double(f, v); }},
           {"t_final", [](RunConfig& c, const std::string& f, const std::string& v) { c.t_final = to_double(f, v); }},
           {"record_every",
            [](RunConfig& c, const std::string& f, const std::string& v) { c.record_every = static_cast<int>(to_int(f, v)); }},
       }},
      {"solver",
       {
           {"picard_tol", [](RunConfig& c, const std::string& f, const std::string& v) { c.solver.picard_tol = to_double(f, v); }},
           {"picard_max",
            [](RunConfig& c, const std::string& f, const std::string& v) { c.solver.picard_max = static_cast<int>(to_int(f, v)); }},
           {"fp_sweeps",
            [](RunConfig& c, const std::string& f, const std::string& v) { c.solver.fp_sweeps = static_cast<int>(to_int(f, v)); }},
           {"floor", [](RunConfig& c, const std::string& f, const std::string& v) { c.solver.floor = to_double(f, v); }},
           {"mass_tol", [](RunConfig& c, const std::string& f, const std::string& v) { c.solver.mass_tol = to_double(f, v); }},
           {"recenter", [](RunConfig& c, const std::string& f, const std::string& v) { c.recenter = to_bool(f, v); }},
       }},
      {"audit",
       {
           {"tol_per_dt",
            [](RunConfig& c, const std::string& f, const std::string& v) { c.audit_tol_per_dt = to_double(f, v); }},
       }},
      {"verify",
       {
           {"n_samples",
            [](RunConfig& c, const std::string& f, const std::string& v) { c.n_samples = static_cast<int>(to_int(f, v)); }},
           {"dims", [](RunConfig& c, const std::string& f, const std::string& v) { c.verify_dims = to_int_list(f, v); }},
       }},
      {"sweep",
       {
           {"n_list", [](RunConfig& c, const std::string& f, const std::string& v) { c.n_list = to_int_list(f, v); }},
           {"burn_in",
            [](RunConfig& c, const std::string& f, const std::string& v) { c.burn_in = static_cast<int>(to_int(f, v)); }},
       }},
  };
  return s;
}

void validate(const RunConfig& c)
{
  try {
    c.params.validate();
  } catch (const Error& e) {
    fail("model", e.what());
  }
  if (c.dim != 1 && c.dim != 2)
    fail("frame.dim", "must be 1 or 2");
  if (c.degree < 1 || c.degree > 64)
    fail("frame.degree", "must lie in [1, 64]");
  if (c.quad_order != 0 && c.quad_order < 2 * c.degree + 4)
    fail("frame.quad_order", "must be 0 (automatic) or at least 2*degree+4");
  if (!(c.window_weight > 0.0 && c.window_weight < 1.0))
    fail("frame.window_weight", "must lie in (0, 1)");
  if (!(c.dt > 0.0))
    fail("time.dt", "must be positive");
  if (!(c.t_final > 0.0))
    fail("time.t_final", "must be positive");
  if (c.record_every < 1)
    fail("time.record_every", "must be at least 1");
  if (!(c.solver.picard_tol > 0.0))
    fail("solver.picard_tol", "must be positive");
  if (c.solver.picard_max < 1)
    fail("solver.picard_max", "must be at least 1");
  if (c.solver.fp_sweeps < 1)
    fail("solver.fp_sweeps", "must be at least 1");
  if (!(c.solver.floor > 0.0))
    fail("solver.floor", "must be positive");
  if (!(c.solver.mass_tol > 0.0))
    fail("solver.mass_tol", "must be positive");
  if (!(c.audit_tol_per_dt >= 0.0))
    fail("audit.tol_per_dt", "must be non-negative");
  if (c.n_samples < 1)
    fail("verify.n_samples", "must be at least 1");
  for (int d : c.verify_dims)
    if (d != 1 && d != 2)
      fail("verify.dims", "dimensions must be 1 or 2");
  for (size_t k = 0; k < c.n_list.size(); ++k)
    if (c.n_list[k] < 1 || (k > 0 && c.n_list[k] <= c.n_list[k - 1]))
      fail("sweep.n_list", "must be an increasing list of positive integers");
  if (c.burn_in < 0)
    fail("sweep.burn_in", "must be non-negative");
  if (c.initial.family == "coefficients") {
    if (c.initial.coefficient_file.empty())
      fail("initial.coefficient_file", "required by the coefficients family");
    if (!std::filesystem::exists(c.initial.coefficient_file))
      fail("initial.coefficient_file", "file '" + c.initial.coefficient_file + "' does not exist");
  }
  if (c.initial.random_degree < 1 || 2 * c.initial.random_degree > c.degree)
    fail("initial.random_degree", "must lie in [1, degree/2]");
  if (c.initial.velocity == "rotation" && c.dim != 2)
    fail("initial.velocity", "rotation requires dim = 2");
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source)
{
  pt::ptree tree;
  std::istringstream is(text);
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorKind::Config, source + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  RunConfig c;
  c.source = source;
  const auto& sch = schema();
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      fail(section, "key outside of any section");
    auto sit = sch.find(section);
    if (sit == sch.end())
      fail("[" + section + "]", "unknown section");
    for (const auto& [key, val] : body) {
      const std::string field = section + "." + key;
      auto kit = sit->second.find(key);
      if (kit == sit->second.end())
        fail(field, "unknown key");
      if (!val.empty())
        fail(field, "nested values are not supported");
      kit->second(c, field, val.data());
    }
  }
  if (!c.initial.coefficient_file.empty() && source != "<string>") {
    std::filesystem::path p(c.initial.coefficient_file);
    if (p.is_relative())
      c.initial.coefficient_file = (std::filesystem::path(source).parent_path() / p).string();
  }
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorKind::Config, path + ": cannot open configuration file");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str(), path);
}

std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& c)
{
  auto num = [](double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
  };
  auto list = [](const std::vector<int>& v) {
    std::string s;
    for (int x : v)
      s += (s.empty() ? "" : ", ") + std::to_string(x);
    return s;
  };
  return {
      {"run.seed", std::to_string(c.seed)},
      {"run.output_dir", c.output_dir},
      {"run.snapshots", c.snapshots ? "true" : "false"},
      {"model.a", num(c.params.a)},
      {"model.kappa", num(c.params.kappa)},
      {"model.nu", num(c.params.nu)},
      {"model.lambda", num(c.params.lambda)},
      {"model.r0", num(c.params.r0)},
      {"model.r1", num(c.params.r1)},
      {"model.r4", num(c.params.r4)},
      {"model.delta1", num(c.params.delta1)},
      {"frame.dim", std::to_string(c.dim)},
      {"frame.degree", std::to_string(c.degree)},
      {"frame.quad_order", std::to_string(c.quad_order)},
      {"frame.window_weight", num(c.window_weight)},
      {"initial.family", c.initial.family},
      {"initial.shift", num(c.initial.shift[0]) + ", " + num(c.initial.shift[1])},
      {"initial.perturbation", num(c.initial.perturbation)},
      {"initial.tilt", num(c.initial.tilt)},
      {"initial.random_degree", std::to_string(c.initial.random_degree)},
      {"initial.velocity", c.initial.velocity},
      {"initial.velocity_amplitude", num(c.initial.velocity_amplitude)},
      {"initial.coefficient_file", c.initial.coefficient_file},
      {"time.dt", num(c.dt)},
      {"time.t_final", num(c.t_final)},
      {"time.record_every", std::to_string(c.record_every)},
      {"solver.picard_tol", num(c.solver.picard_tol)},
      {"solver.picard_max", std::to_string(c.solver.picard_max)},
      {"solver.fp_sweeps", std::to_string(c.solver.fp_sweeps)},
      {"solver.floor", num(c.solver.floor)},
      {"solver.mass_tol", num(c.solver.mass_tol)},
      {"solver.recenter", c.recenter ? "true" : "false"},
      {"audit.tol_per_dt", num(c.audit_tol_per_dt)},
      {"verify.n_samples", std::to_string(c.n_samples)},
      {"verify.dims", list(c.verify_dims)},
      {"sweep.n_list", list(c.n_list)},
      {"sweep.burn_in", std::to_string(c.burn_in)},
  };
}

}  // namespace qns
