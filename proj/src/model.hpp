#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coefficient.hpp"

namespace mbdiff {

/// Physical inputs of the diffusant-uptake model. Units follow the usual
/// bench conventions: lengths in mm, times in min, concentrations in
/// gram/mm^3.
struct PhysicalParameters {
  double diffusivity = 0.0;          ///< D [mm^2/min]
  double surface_rate = 0.0;         ///< beta [mm/min], uptake capacity at x = 0
  double henry = 0.0;                ///< H [-]
  double kinetic_coefficient = 0.0;  ///< a0 [mm^4/(min*gram)]
  double initial_position = 0.0;     ///< s0 [mm]
  double concentration_scale = 0.0;  ///< m0 [gram/mm^3]
  double max_position = 0.0;         ///< L [mm], cap on the interface excursion
  double final_time = 0.0;           ///< Tf [min]
  Coefficient boundary_concentration = Coefficient::constant(0.0);  ///< b(t)
  Coefficient interface_resistance = Coefficient::constant(0.0);    ///< sigma(s)
  /// Optional saturation clamp: sigma is capped at this value when set.
  std::optional<double> resistance_plateau;
};

/// Coefficients of the fixed-domain formulation. Everything here is
/// dimensionless; the spatial variable lives on [0, 1] and the interface
/// position h starts at 1.
struct DimensionlessParameters {
  double biot = 0.0;                ///< Bi = beta * s0 / D
  double interface_kinetics = 0.0;  ///< A0 = a0 * m0 * s0 / D
  double henry = 0.0;               ///< H
  double final_time = 0.0;          ///< T = D * Tf / s0^2
  double h_max = 0.0;               ///< L / s0, blow-up guard for h
  Coefficient boundary_value = Coefficient::constant(0.0);        ///< tau -> b/m0
  Coefficient interface_resistance = Coefficient::constant(0.0);  ///< h -> sigma/m0
  std::optional<double> resistance_plateau;  ///< scaled saturation clamp
  Coefficient initial_profile = Coefficient::constant(1.0);       ///< u0(y)
};

struct ValidationReport {
  bool passed = true;
  /// (assumption id, message) for each hard failure.
  std::vector<std::pair<std::string, std::string>> violations;
  std::vector<std::string> warnings;
};

/// Maps physical parameters onto the fixed-domain coefficient set via
/// tau = D t / s0^2, y = x / s(t), u = m / m0, h = s / s0. Rejects
/// non-positive scales and non-finite groups.
DimensionlessParameters nondimensionalize(const PhysicalParameters& p,
                                          const Coefficient& initial_concentration);

/// Checks the admissibility assumptions on the dimensionless data. Never
/// throws for finite inputs; all findings land in the report. An unbounded
/// resistance without a configured plateau is reported as a warning, not a
/// violation.
ValidationReport validate_assumptions(const DimensionlessParameters& d);

double eval_b(const DimensionlessParameters& d, double tau);

/// Scaled interface resistance; identically 0 for h < 0 and clamped at the
/// plateau when one is configured.
double eval_sigma(const DimensionlessParameters& d, double h);

/// Exact bounds of the scaled boundary value over [0, T].
std::pair<double, double> boundary_value_range(const DimensionlessParameters& d);

std::string format_report(const ValidationReport& report);

}  // namespace mbdiff
