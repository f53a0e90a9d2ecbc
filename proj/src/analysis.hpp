#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "model.hpp"
#include "stepper.hpp"

namespace mbdiff {

/// Worst-case deviations of a run from a reference run, maximized over all
/// compared time levels: err_u in the L2 norm, err_w for the interface.
struct ErrorRecord {
  double resolution = 0.0;  ///< node count or time step, protocol dependent
  double err_u = 0.0;
  double err_w = 0.0;
};

struct ConvergenceRow {
  double resolution = 0.0;
  double err_u = 0.0;
  std::optional<double> order_u;
  double err_w = 0.0;
  std::optional<double> order_w;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  std::string protocol;        ///< "space" or "time"
  std::string reference_spec;  ///< description of the reference run
};

/// log(err_coarse / err_fine) / log(ratio). Requires positive errors and a
/// ratio above 1.
double observed_order(double err_coarse, double err_fine, double ratio);

/// Compares a run against a reference whose time grid contains the run's
/// grid (integer dt ratio, same final time). err_u is the max over all of
/// the coarse run's steps of the cross-mesh L2 difference; err_w the max
/// interface deviation at the same steps.
ErrorRecord error_against_reference(const Trajectory& traj, const Trajectory& ref);

/// A refinement study hit a stability breakdown at one of its resolutions;
/// the rows finished so far are attached.
class StudyBreakdownError : public StabilityBreakdownError {
public:
  StudyBreakdownError(const StabilityBreakdownError& cause, double resolution,
                      ConvergenceTable partial);
  double resolution() const { return resolution_; }
  const ConvergenceTable& partial_table() const { return partial_; }

private:
  double resolution_;
  ConvergenceTable partial_;
};

struct SpaceStudyConfig {
  DimensionlessParameters params;
  double dt = 0.0;
  std::vector<std::size_t> node_counts = {20, 40, 80, 160, 320, 640};
  std::size_t reference_nodes = 1280;
};

struct TimeStudyConfig {
  DimensionlessParameters params;
  std::size_t n_nodes = 320;
  double dt = 0.0;               ///< base step; rows use dt / 2^j
  std::size_t halvings = 5;      ///< rows j = 0..halvings
  std::size_t reference_divisor = 64;
};

/// Fixed time step, refine the mesh against a fine-mesh reference. Coarse
/// resolutions run concurrently against the shared reference.
ConvergenceTable space_study(const SpaceStudyConfig& cfg);

/// Fixed mesh, halve the time step against a fine-step reference.
ConvergenceTable time_study(const TimeStudyConfig& cfg);

/// Discrete energy of a run: max_n ||U^n||^2 over n >= 1 plus
/// dt * sum ||dU^j/dy||^2 over j >= 1. A single-state trajectory reports
/// ||U^0||^2. Requires profiles at every step.
double energy_report(const Trajectory& traj);

struct InvariantCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct InvariantReport {
  bool passed = true;
  std::vector<InvariantCheck> checks;
};

/// Runs the scheme's invariant suite on a configuration: constant fixed
/// point with decoupled boundaries, a-posteriori interface monotonicity,
/// nodal bounds against the boundary ceiling, energy stability across a
/// mesh ladder, and bitwise run-to-run determinism.
InvariantReport run_invariant_checks(const DimensionlessParameters& params,
                                     std::size_t n_nodes, double dt);

std::string format_report(const InvariantReport& report);

}  // namespace mbdiff
