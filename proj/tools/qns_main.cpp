#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "qns/qns.h"

namespace {

int run(const std::string& mode, const std::string& path, const std::optional<std::string>& output_dir,
        const std::optional<std::uint64_t>& seed)
{
  qns_config* cfg = nullptr;
  int rc = qns_config_load(path.c_str(), &cfg);
  if (rc != QNS_OK) {
    std::fprintf(stderr, "qns: %s\n", qns_last_error());
    return rc == QNS_INVALID_ARGUMENT ? QNS_CONFIG_ERROR : rc;
  }
  if (output_dir)
    qns_config_set_output_dir(cfg, output_dir->c_str());
  if (seed)
    qns_config_set_seed(cfg, *seed);
  rc = qns_run(cfg, mode.c_str());
  if (rc != QNS_OK)
    std::fprintf(stderr, "qns %s: %s\n", mode.c_str(), qns_last_error());
  qns_config_free(cfg);
  return rc;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Spectral solver for the quantum Navier-Stokes system in Gaussian-weighted spaces"};
  app.require_subcommand(1);
  app.set_version_flag("--version", qns_version());

  std::string config;
  std::optional<std::string> output_dir;
  std::optional<std::uint64_t> seed;
  const std::pair<const char*, const char*> modes[] = {
      {"simulate", "Integrate the coupled system and audit the energy and BD entropy inequalities"},
      {"verify", "Evaluate the functional-inequality suite on seeded random fields"},
      {"sweep", "Run the vanishing-drag continuation study"},
      {"rescaled", "Integrate the self-similar rescaled system without potential force"},
  };
  for (const auto& [name, help] : modes) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("config", config, "Configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--output-dir", output_dir, "Directory for trajectory.csv and summary.json");
    sub->add_option("--seed", seed, "Seed of the random generator");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : QNS_CONFIG_ERROR;
  }
  for (const auto& [name, help] : modes)
    if (app.got_subcommand(name))
      return run(name, config, output_dir, seed);
  return QNS_CONFIG_ERROR;
}
