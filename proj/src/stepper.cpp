#include "stepper.hpp"

#include <algorithm>
#include <cmath>

#include "linalg.hpp"

namespace mbdiff {

namespace {

constexpr double kBlowupGuard = 1e6;

std::size_t resolve_step_count(double final_time, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
  if (!(final_time > 0.0)) throw std::invalid_argument("final time must be positive");
  const double ratio = final_time / dt;
  const auto m = static_cast<std::size_t>(std::llround(ratio));
  if (m == 0 || std::abs(static_cast<double>(m) * dt - final_time) >
                    1e-12 * std::max(1.0, final_time))
    throw std::invalid_argument("dt must divide the final time (got T/dt = " +
                                std::to_string(ratio) + ")");
  return m;
}

struct StepOutcome {
  double w_next;
  double dw;
  double residual;
};

// Shared step kernel. Writes U^{n+1} into u_next; op and scratch are
// caller-provided workspace sized to the node count.
StepOutcome step_once(const ElementMatrices& mats, const DimensionlessParameters& d,
                      double dt, double tau, std::span<const double> u, double w,
                      std::size_t step_index, TridiagonalMatrix& op,
                      std::span<double> rhs, std::span<double> u_next,
                      std::span<double> scratch) {
  const std::size_t n = u.size();
  const double u_end = u[n - 1];
  const double dw = d.interface_kinetics * (u_end - eval_sigma(d, w));
  const double w_next = w + dt * dw;
  if (!(w_next > 0.0))
    throw StabilityBreakdownError(step_index,
                                  "interface position became nonpositive (w = " +
                                      std::to_string(w_next) + ")");
  if (w_next > d.h_max)
    throw StabilityBreakdownError(step_index,
                                  "interface position exceeded h_max (w = " +
                                      std::to_string(w_next) + ")");

  const double inv_dt = 1.0 / dt;
  const double conv_scale = dw / w_next;
  const double stiff_scale = 1.0 / (w_next * w_next);
  for (std::size_t i = 0; i < n; ++i)
    op.diag[i] = mats.mass.diag[i] * inv_dt - conv_scale * mats.convection.diag[i] +
                 stiff_scale * mats.stiffness.diag[i];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    op.lower[i] = mats.mass.lower[i] * inv_dt - conv_scale * mats.convection.lower[i] +
                  stiff_scale * mats.stiffness.lower[i];
    op.upper[i] = mats.mass.upper[i] * inv_dt - conv_scale * mats.convection.upper[i] +
                  stiff_scale * mats.stiffness.upper[i];
  }

  // The boundary terms are linear in U, so backward Euler takes them at the
  // new level: the uptake relaxation Bi H / W and the moving-end dilution
  // dw / W sit in the operator, only the supply (Bi / W) b stays on the
  // right-hand side. Evaluating them at the old level instead is unstable
  // once dt exceeds a small multiple of the end-node mass.
  op.diag[0] += d.biot / w_next * d.henry;
  op.diag[n - 1] += conv_scale;

  matvec(mats.mass, u, rhs);
  for (std::size_t i = 0; i < n; ++i) rhs[i] *= inv_dt;
  rhs[0] += d.biot / w_next * eval_b(d, tau);

  try {
    thomas_solve(op, rhs, u_next, scratch);
  } catch (const ZeroPivotError& e) {
    throw StabilityBreakdownError(step_index, e.what());
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(u_next[i]) || std::abs(u_next[i]) > kBlowupGuard)
      throw StabilityBreakdownError(step_index,
                                    "nodal value blew up at node " + std::to_string(i));
  }
  return {w_next, dw, residual_inf(op, rhs, u_next)};
}

}  // namespace

StabilityBreakdownError::StabilityBreakdownError(std::size_t step, const std::string& reason,
                                                 std::shared_ptr<Trajectory> partial)
    : std::runtime_error("stability breakdown at step " + std::to_string(step) + ": " + reason),
      step_(step),
      reason_(reason),
      partial_(std::move(partial)) {}

std::pair<double, double> step_boundary(const DiscreteState& state,
                                        const DimensionlessParameters& d, double dt) {
  const double u_end = state.u.coeffs().back();
  const double dw = d.interface_kinetics * (u_end - eval_sigma(d, state.w));
  const double w_next = state.w + dt * dw;
  if (!(w_next > 0.0))
    throw StabilityBreakdownError(state.step_index + 1,
                                  "interface position became nonpositive (w = " +
                                      std::to_string(w_next) + ")");
  return {w_next, dw};
}

DiscreteState step(const DiscreteState& state, const ElementMatrices& mats,
                   const DimensionlessParameters& d, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const std::size_t n = state.u.coeffs().size();
  TridiagonalMatrix op{std::vector<double>(n - 1), std::vector<double>(n),
                       std::vector<double>(n - 1)};
  std::vector<double> rhs(n), u_next(n), scratch(n);
  const StepOutcome out = step_once(mats, d, dt, state.tau, state.u.coeffs(), state.w,
                                    state.step_index + 1, op, rhs, u_next, scratch);
  return DiscreteState{state.step_index + 1, state.tau + dt,
                       P1Function(state.u.mesh_ptr(), std::move(u_next)), out.w_next};
}

Simulator::Simulator(DimensionlessParameters params, MeshPtr mesh, double dt)
    : params_(std::move(params)),
      mesh_(std::move(mesh)),
      dt_(dt),
      total_steps_(resolve_step_count(params_.final_time, dt)),
      matrices_(assemble(*mesh_)) {
  const std::size_t n = mesh_->node_count();
  u_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    u_[i] = params_.initial_profile(mesh_->node(i));
    if (!std::isfinite(u_[i]))
      throw std::invalid_argument("initial profile is non-finite at y = " +
                                  std::to_string(mesh_->node(i)));
  }
  u_next_.resize(n);
  rhs_.resize(n);
  scratch_.resize(n);
  op_ = TridiagonalMatrix{std::vector<double>(n - 1), std::vector<double>(n),
                          std::vector<double>(n - 1)};
}

void Simulator::advance() {
  if (done()) throw std::logic_error("simulation already at the final time");
  const StepOutcome out = step_once(matrices_, params_, dt_, tau(), u_, w_,
                                    step_index_ + 1, op_, rhs_, u_next_, scratch_);
  u_.swap(u_next_);
  w_ = out.w_next;
  ++step_index_;
  last_residual_ = out.residual;
  max_residual_ = std::max(max_residual_, out.residual);
}

Trajectory::Trajectory(DimensionlessParameters params, MeshPtr mesh, double dt,
                       std::size_t record_stride)
    : params_(std::move(params)),
      mesh_(std::move(mesh)),
      dt_(dt),
      record_stride_(record_stride == 0 ? 1 : record_stride) {}

void Trajectory::append(std::size_t step, double w, std::span<const double> u,
                        bool force_profile) {
  if (step != ws_.size()) throw std::logic_error("trajectory steps must be appended in order");
  ws_.push_back(w);
  if (step % record_stride_ == 0 || force_profile) {
    profile_steps_.push_back(step);
    profiles_.insert(profiles_.end(), u.begin(), u.end());
  }
}

bool Trajectory::has_profile(std::size_t n) const {
  return std::binary_search(profile_steps_.begin(), profile_steps_.end(), n);
}

std::span<const double> Trajectory::profile(std::size_t n) const {
  auto it = std::lower_bound(profile_steps_.begin(), profile_steps_.end(), n);
  if (it == profile_steps_.end() || *it != n)
    throw std::out_of_range("no profile recorded at step " + std::to_string(n));
  const std::size_t slot = static_cast<std::size_t>(it - profile_steps_.begin());
  const std::size_t width = mesh_->node_count();
  return {profiles_.data() + slot * width, width};
}

DiscreteState Trajectory::state_at(std::size_t n) const {
  const auto p = profile(n);
  return DiscreteState{n, tau_at(n), P1Function(mesh_, {p.begin(), p.end()}), w_at(n)};
}

bool Trajectory::interface_monotone() const {
  for (std::size_t i = 0; i + 1 < ws_.size(); ++i)
    if (ws_[i + 1] < ws_[i]) return false;
  return true;
}

Trajectory run(const DimensionlessParameters& params, MeshPtr mesh, double dt,
               std::size_t record_every) {
  if (record_every == 0) throw std::invalid_argument("record_every must be >= 1");
  Simulator sim(params, mesh, dt);
  Trajectory traj(sim.params(), sim.mesh(), dt, record_every);
  traj.append(0, sim.w(), sim.u(), false);
  while (!sim.done()) {
    try {
      sim.advance();
    } catch (const StabilityBreakdownError& e) {
      traj.set_max_residual(sim.max_residual());
      throw StabilityBreakdownError(e.step(), e.reason(),
                                    std::make_shared<Trajectory>(std::move(traj)));
    }
    traj.append(sim.step_index(), sim.w(), sim.u(), sim.done());
  }
  traj.set_max_residual(sim.max_residual());
  return traj;
}

std::vector<PhysicalSnapshot> to_physical(const Trajectory& traj,
                                          const PhysicalParameters& p) {
  const double time_scale = p.initial_position * p.initial_position / p.diffusivity;
  std::vector<PhysicalSnapshot> snaps;
  for (std::size_t n = 0; n <= traj.step_count(); ++n) {
    if (!traj.has_profile(n)) continue;
    PhysicalSnapshot snap;
    snap.t = time_scale * traj.tau_at(n);
    snap.s = p.initial_position * traj.w_at(n);
    const auto u = traj.profile(n);
    snap.x_nodes.resize(u.size());
    snap.m_values.resize(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      snap.x_nodes[i] = snap.s * traj.mesh().node(i);
      snap.m_values[i] = p.concentration_scale * u[i];
    }
    snaps.push_back(std::move(snap));
  }
  return snaps;
}

}  // namespace mbdiff
