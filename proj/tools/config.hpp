#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mbdiff.h"

namespace mbdiff_cli {

enum class Mode { Simulate, ConvergenceSpace, ConvergenceTime, CheckInvariants };

std::optional<Mode> mode_from_string(const std::string& name);
std::string mode_to_string(Mode mode);

/// Owned counterpart of mbdiff_coeff_spec; breakpoint storage lives here.
struct CoeffValue {
  mbdiff_coeff_kind kind = MBDIFF_COEFF_CONSTANT;
  double value = 0.0;
  std::vector<double> xs;
  std::vector<double> ys;

  mbdiff_coeff_spec spec() const;
};

/// Parsed and validated run configuration. Exactly one parameter route is
/// populated: physical bench values or direct dimensionless groups.
struct RunConfig {
  Mode mode = Mode::Simulate;
  bool physical_route = true;

  // physical route
  double diffusivity = 0.0, surface_rate = 0.0, henry = 0.0, kinetic_coefficient = 0.0;
  double initial_position = 0.0, concentration_scale = 0.0, max_position = 0.0,
         final_time = 0.0;
  CoeffValue boundary, resistance, initial;
  std::optional<double> resistance_plateau;

  // dimensionless route
  double biot = 0.0, interface_kinetics = 0.0, h_max = 0.0, final_time_tau = 0.0;

  // discretization and outputs; dt is in minutes on the physical route and
  // in units of tau on the dimensionless route
  std::size_t n_nodes = 0;
  double dt = 0.0;
  std::size_t record_every = 1;
  std::string output_dir = ".";
  std::vector<std::size_t> node_counts = {20, 40, 80, 160, 320, 640};
  std::size_t ref_nodes = 1280;
  std::size_t halvings = 5;
  std::size_t ref_divisor = 64;
  bool gnuplot = false;

  mbdiff_physical_spec physical_spec() const;
  mbdiff_dimensionless_spec dimensionless_spec() const;
};

/// Config-file problem: syntax, unknown key, missing key, or bad value.
/// The message carries the line number where that applies.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Parses the flat key = value grammar (one pair per line, '#' comments,
/// closed key set) and validates the result. mode_override, when set,
/// replaces any mode given in the document.
RunConfig parse_config(const std::string& text,
                       const std::optional<Mode>& mode_override = std::nullopt);

RunConfig load_config_file(const std::string& path,
                           const std::optional<Mode>& mode_override = std::nullopt);

}  // namespace mbdiff_cli
