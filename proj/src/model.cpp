#include "model.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mbdiff {

namespace {

void require_positive_finite(double v, const char* name) {
  if (!std::isfinite(v) || !(v > 0.0))
    throw std::invalid_argument(std::string(name) + " must be positive and finite");
}

}  // namespace

DimensionlessParameters nondimensionalize(const PhysicalParameters& p,
                                          const Coefficient& initial_concentration) {
  require_positive_finite(p.diffusivity, "D");
  require_positive_finite(p.surface_rate, "beta");
  require_positive_finite(p.henry, "H");
  require_positive_finite(p.kinetic_coefficient, "a0");
  require_positive_finite(p.initial_position, "s0");
  require_positive_finite(p.concentration_scale, "m0");
  require_positive_finite(p.final_time, "Tf");
  if (!(p.max_position > p.initial_position))
    throw std::invalid_argument("L must exceed s0");

  DimensionlessParameters d;
  d.biot = p.surface_rate * p.initial_position / p.diffusivity;
  d.interface_kinetics = p.kinetic_coefficient * p.concentration_scale *
                         p.initial_position / p.diffusivity;
  d.henry = p.henry;
  d.final_time = p.diffusivity * p.final_time /
                 (p.initial_position * p.initial_position);
  d.h_max = p.max_position / p.initial_position;

  const double time_scale = p.initial_position * p.initial_position / p.diffusivity;
  d.boundary_value = p.boundary_concentration.rescaled(time_scale, p.concentration_scale);
  d.interface_resistance =
      p.interface_resistance.rescaled(p.initial_position, p.concentration_scale);
  d.initial_profile =
      initial_concentration.rescaled(p.initial_position, p.concentration_scale);
  if (p.resistance_plateau)
    d.resistance_plateau = *p.resistance_plateau / p.concentration_scale;

  if (!std::isfinite(d.biot) || !std::isfinite(d.interface_kinetics) ||
      !std::isfinite(d.final_time) || !std::isfinite(d.h_max))
    throw std::invalid_argument("nondimensionalization produced non-finite groups");
  return d;
}

double eval_b(const DimensionlessParameters& d, double tau) {
  const double v = d.boundary_value(tau);
  if (!std::isfinite(v))
    throw std::domain_error("boundary value is non-finite at tau = " + std::to_string(tau));
  return v;
}

double eval_sigma(const DimensionlessParameters& d, double h) {
  if (h < 0.0) return 0.0;
  double v = d.interface_resistance(h);
  if (d.resistance_plateau) v = std::min(v, *d.resistance_plateau);
  if (!std::isfinite(v))
    throw std::domain_error("interface resistance is non-finite at h = " + std::to_string(h));
  return v;
}

std::pair<double, double> boundary_value_range(const DimensionlessParameters& d) {
  return d.boundary_value.range(0.0, d.final_time);
}

ValidationReport validate_assumptions(const DimensionlessParameters& d) {
  ValidationReport report;
  auto violate = [&report](const std::string& id, const std::string& msg) {
    report.violations.emplace_back(id, msg);
  };

  // A1: positive groups, admissible interface cap.
  if (!(d.biot > 0.0) || !std::isfinite(d.biot))
    violate("A1", "Bi must be positive, got " + std::to_string(d.biot));
  if (!(d.interface_kinetics > 0.0) || !std::isfinite(d.interface_kinetics))
    violate("A1", "A0 must be positive, got " + std::to_string(d.interface_kinetics));
  if (!(d.henry > 0.0) || !std::isfinite(d.henry))
    violate("A1", "H must be positive, got " + std::to_string(d.henry));
  if (!(d.final_time > 0.0) || !std::isfinite(d.final_time))
    violate("A1", "T must be positive, got " + std::to_string(d.final_time));
  if (!(d.h_max > 1.0))
    violate("A1", "h_max must exceed 1 (L > s0), got " + std::to_string(d.h_max));

  // A2: scaled boundary value bounded away from zero on [0, T].
  double b_upper = 0.0;
  bool b_ok = false;
  if (d.final_time > 0.0 && std::isfinite(d.final_time)) {
    const auto [b_lo, b_hi] = boundary_value_range(d);
    b_upper = b_hi;
    if (!std::isfinite(b_lo) || !std::isfinite(b_hi) || !(b_lo > 0.0)) {
      violate("A2", "boundary value must satisfy 0 < b_* <= b on [0, T]; min is " +
                        std::to_string(b_lo));
    } else {
      b_ok = true;
    }
  }

  // A3/A4: resistance nonnegative and nondecreasing on the admissible range,
  // with saturation beyond a finite threshold. A missing plateau is only a
  // warning; the linear-resistance setup is used unsaturated in practice.
  const double h_hi = (std::isfinite(d.h_max) && d.h_max > 1.0) ? d.h_max : 2.0;
  constexpr int kSamples = 257;
  double prev = eval_sigma(d, 0.0);
  bool nonneg = prev >= 0.0;
  bool nondecreasing = true;
  for (int i = 1; i < kSamples; ++i) {
    const double h = h_hi * static_cast<double>(i) / (kSamples - 1);
    const double v = eval_sigma(d, h);
    if (v < 0.0) nonneg = false;
    if (v < prev - 1e-12 * std::max(1.0, std::abs(prev))) nondecreasing = false;
    prev = v;
  }
  if (!nonneg) violate("A4", "interface resistance must be nonnegative on [0, h_max]");
  if (!nondecreasing) violate("A4", "interface resistance must be nondecreasing on [0, h_max]");
  if (!d.resistance_plateau && d.interface_resistance.unbounded_above())
    report.warnings.push_back(
        "interface resistance grows without bound and no saturation plateau is "
        "configured; the admissibility theory assumes a constant tail");

  // A5: initial profile pinched between sigma(0) and b_upper / H.
  if (b_ok && d.henry > 0.0) {
    const auto [u_lo, u_hi] = d.initial_profile.range(0.0, 1.0);
    const double floor_value = eval_sigma(d, 0.0);
    const double ceil_value = b_upper / d.henry;
    if (!std::isfinite(u_lo) || !std::isfinite(u_hi))
      violate("A5", "initial profile must be finite on [0, 1]");
    else if (u_lo < floor_value || u_hi > ceil_value)
      violate("A5", "initial profile must satisfy sigma(0) <= u0 <= b*/H; range is [" +
                        std::to_string(u_lo) + ", " + std::to_string(u_hi) +
                        "], admissible is [" + std::to_string(floor_value) + ", " +
                        std::to_string(ceil_value) + "]");
  }

  // With a configured plateau the start position must sit below saturation;
  // the raw coefficient is piecewise linear, so its maximum on [0, 1] is
  // exact and saturation at or before h = 1 is decidable without sampling.
  if (d.resistance_plateau) {
    const double reached = d.interface_resistance.range(0.0, 1.0).second;
    if (reached >= *d.resistance_plateau)
      violate("A5", "initial interface position h(0) = 1 must lie below the "
                    "saturation threshold (resistance already reaches " +
                        std::to_string(reached) + " vs plateau " +
                        std::to_string(*d.resistance_plateau) + ")");
  }

  report.passed = report.violations.empty();
  return report;
}

std::string format_report(const ValidationReport& report) {
  std::ostringstream os;
  os << (report.passed ? "assumptions: passed" : "assumptions: FAILED") << '\n';
  for (const auto& [id, msg] : report.violations)
    os << "  violation (" << id << "): " << msg << '\n';
  for (const auto& msg : report.warnings) os << "  warning: " << msg << '\n';
  return os.str();
}

}  // namespace mbdiff
