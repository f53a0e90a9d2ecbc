#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"mbdiff: fixed-domain FEM solver for moving-boundary diffusant uptake"};

  std::string config_path;
  std::string mode_name;
  std::string out_dir;
  bool quiet = false;
  app.add_option("--config", config_path, "configuration file (key = value lines)")
      ->required();
  app.add_option("--mode", mode_name,
                 "simulate | convergence-space | convergence-time | check-invariants "
                 "(overrides the config)");
  app.add_option("--out", out_dir, "output directory (overrides the config)");
  app.add_flag("--quiet", quiet, "suppress informational output");

  CLI11_PARSE(app, argc, argv);

  std::optional<mbdiff_cli::Mode> mode_override;
  if (!mode_name.empty()) {
    mode_override = mbdiff_cli::mode_from_string(mode_name);
    if (!mode_override) {
      std::cerr << "config error: unknown mode '" << mode_name << "'\n";
      return mbdiff_cli::kExitConfigError;
    }
  }

  mbdiff_cli::RunConfig cfg;
  try {
    cfg = mbdiff_cli::load_config_file(config_path, mode_override);
  } catch (const mbdiff_cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return mbdiff_cli::kExitConfigError;
  }
  if (!out_dir.empty()) cfg.output_dir = out_dir;

  return mbdiff_cli::run_command(cfg, quiet);
}
