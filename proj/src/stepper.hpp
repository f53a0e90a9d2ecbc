#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "assembly.hpp"
#include "mesh.hpp"
#include "model.hpp"

namespace mbdiff {

/// One time level of the fully discrete scheme: the nodal profile U^n and
/// the interface position W^n at tau^n = n * dt.
struct DiscreteState {
  std::size_t step_index = 0;
  double tau = 0.0;
  P1Function u;
  double w = 1.0;
};

class Trajectory;

/// A step produced a nonpositive or runaway interface position, a singular
/// linear system, or non-finite nodal values. Carries the failing step and,
/// when thrown from run(), the partial trajectory up to the last good state.
class StabilityBreakdownError : public std::runtime_error {
public:
  StabilityBreakdownError(std::size_t step, const std::string& reason,
                          std::shared_ptr<Trajectory> partial = nullptr);
  std::size_t step() const { return step_; }
  const std::string& reason() const { return reason_; }
  const std::shared_ptr<Trajectory>& partial() const { return partial_; }

private:
  std::size_t step_;
  std::string reason_;
  std::shared_ptr<Trajectory> partial_;
};

/// Explicit interface update: dw = A0 (U^n(1) - sigma(W^n)) and
/// w_next = w + dt * dw. Returns (w_next, dw).
std::pair<double, double> step_boundary(const DiscreteState& state,
                                        const DimensionlessParameters& d, double dt);

/// One full implicit step: advances the interface, then solves
///   [M/dt - (dw/w_next) C + (1/w_next^2) S] U^{n+1} = M U^n / dt + load.
DiscreteState step(const DiscreteState& state, const ElementMatrices& mats,
                   const DimensionlessParameters& d, double dt);

/// Drives the scheme one step at a time with preallocated workspace.
class Simulator {
public:
  Simulator(DimensionlessParameters params, MeshPtr mesh, double dt);

  std::size_t total_steps() const { return total_steps_; }
  double dt() const { return dt_; }
  const DimensionlessParameters& params() const { return params_; }
  const MeshPtr& mesh() const { return mesh_; }
  const ElementMatrices& matrices() const { return matrices_; }

  std::size_t step_index() const { return step_index_; }
  double tau() const { return static_cast<double>(step_index_) * dt_; }
  double w() const { return w_; }
  std::span<const double> u() const { return u_; }
  bool done() const { return step_index_ >= total_steps_; }

  /// Advances one step; throws StabilityBreakdownError (without a partial
  /// trajectory) on guard failure.
  void advance();

  double last_residual() const { return last_residual_; }
  double max_residual() const { return max_residual_; }

private:
  DimensionlessParameters params_;
  MeshPtr mesh_;
  double dt_;
  std::size_t total_steps_;
  ElementMatrices matrices_;
  std::size_t step_index_ = 0;
  double w_ = 1.0;
  std::vector<double> u_, u_next_, rhs_, scratch_;
  TridiagonalMatrix op_;
  double last_residual_ = 0.0;
  double max_residual_ = 0.0;
};

/// Recorded run: interface value and time at every step, nodal profiles at
/// multiples of the record stride (the final step is always retained).
class Trajectory {
public:
  Trajectory(DimensionlessParameters params, MeshPtr mesh, double dt,
             std::size_t record_stride);

  const DimensionlessParameters& params() const { return params_; }
  const MeshPtr& mesh_ptr() const { return mesh_; }
  const Mesh1D& mesh() const { return *mesh_; }
  double dt() const { return dt_; }
  std::size_t record_stride() const { return record_stride_; }

  /// Index of the last recorded step (states run 0..step_count()).
  std::size_t step_count() const { return ws_.size() - 1; }
  double tau_at(std::size_t n) const { return static_cast<double>(n) * dt_; }
  double w_at(std::size_t n) const { return ws_.at(n); }
  std::span<const double> interface_values() const { return ws_; }

  bool has_profile(std::size_t n) const;
  std::span<const double> profile(std::size_t n) const;
  DiscreteState state_at(std::size_t n) const;

  double max_solver_residual() const { return max_residual_; }
  bool interface_monotone() const;

  // recording (used by run and the streaming drivers)
  void append(std::size_t step, double w, std::span<const double> u, bool force_profile);
  void set_max_residual(double r) { max_residual_ = r; }

private:
  DimensionlessParameters params_;
  MeshPtr mesh_;
  double dt_;
  std::size_t record_stride_;
  std::vector<double> ws_;
  std::vector<double> profiles_;          // flat, node_count per retained step
  std::vector<std::size_t> profile_steps_;  // ascending step indices
  double max_residual_ = 0.0;
};

/// Runs the scheme for all of [0, T]. dt must tile the final time: with
/// M = round(T / dt), |M dt - T| <= 1e-12 max(1, T). On breakdown the thrown
/// error carries the partial trajectory.
Trajectory run(const DimensionlessParameters& params, MeshPtr mesh, double dt,
               std::size_t record_every = 1);

/// One recorded state mapped back to bench quantities.
struct PhysicalSnapshot {
  double t = 0.0;                 ///< physical time [min]
  double s = 0.0;                 ///< interface position [mm]
  std::vector<double> x_nodes;    ///< node positions s * y [mm]
  std::vector<double> m_values;   ///< concentrations m0 * u [gram/mm^3]
};

/// Back-transforms every retained profile of a trajectory produced with
/// parameters derived from p.
std::vector<PhysicalSnapshot> to_physical(const Trajectory& traj,
                                          const PhysicalParameters& p);

}  // namespace mbdiff
