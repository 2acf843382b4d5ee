// pcqkd: state construction, key-rate sweeps, optimisation and oracle checks.

#include "pcqkd/commands.hpp"
#include "pcqkd/errors.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

int main(int argc, char** argv) {
  CLI::App app{"Photon-catalysed two-mode states for CV-MDI-QKD"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  app.add_option("--config", config_path, "key = value config file with [sections]");

  // One flag per config key; flags win over the file.
  std::map<std::string, std::string> flags;
  for (const auto& key : pcqkd::config_keys()) {
    app.add_option("--" + key.name, flags[key.name], key.help)->group("Config keys");
  }

  const std::vector<std::pair<const char*, const char*>> commands = {
      {"state", "mean, covariance and success probability of the catalysed state"},
      {"keyrate", "key-rate sweep over L as CSV"},
      {"optimize", "optimal (V, d, T_C) per length and family"},
      {"maxdist", "maximum distance reaching maxdist.target"},
      {"verify", "Fock and quadrature oracle checks"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? pcqkd::kExitOk : pcqkd::kExitValidation;
  }

  pcqkd::RunConfig cfg;
  try {
    pcqkd::ConfigEntries entries;
    if (!config_path.empty()) entries = pcqkd::load_config_file(config_path);
    for (const auto& [name, value] : flags) {
      if (app.count("--" + name) > 0) entries[name] = value;
    }
    cfg = pcqkd::build_config(entries);
  } catch (const pcqkd::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return pcqkd::kExitValidation;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  return pcqkd::run_command(command, cfg, std::cout, std::cerr);
}
