#include "analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <future>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mbdiff {

namespace {

std::string describe(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Attaches order columns to rows whose consecutive resolutions differ by an
// exact factor of two (ascending or descending). Errors at or below the
// solver-noise floor carry no meaningful rate and leave the order undefined.
void attach_orders(ConvergenceTable& table) {
  constexpr double kNoiseFloor = 1e-12;
  for (std::size_t i = 0; i + 1 < table.rows.size(); ++i) {
    auto& row = table.rows[i];
    const auto& next = table.rows[i + 1];
    const double ratio = std::max(row.resolution, next.resolution) /
                         std::min(row.resolution, next.resolution);
    if (std::abs(ratio - 2.0) > 1e-9) continue;
    if (row.err_u > kNoiseFloor && next.err_u > kNoiseFloor)
      row.order_u = observed_order(row.err_u, next.err_u, 2.0);
    if (row.err_w > kNoiseFloor && next.err_w > kNoiseFloor)
      row.order_w = observed_order(row.err_w, next.err_w, 2.0);
  }
}

// Runs one coarse simulation and accumulates its deviation from the stored
// reference at every coarse step. ref_stride maps coarse step n to reference
// step n * ref_stride.
ErrorRecord compare_run(const DimensionlessParameters& params, MeshPtr mesh, double dt,
                        const Trajectory& ref, std::size_t ref_stride, double resolution) {
  Simulator sim(params, std::move(mesh), dt);
  ErrorRecord record;
  record.resolution = resolution;
  const Mesh1D& ref_mesh = ref.mesh();
  auto account = [&](std::size_t coarse_step) {
    const std::size_t ref_step = coarse_step * ref_stride;
    record.err_u = std::max(record.err_u, l2_diff(*sim.mesh(), sim.u(), ref_mesh,
                                                  ref.profile(ref_step)));
    record.err_w = std::max(record.err_w, std::abs(sim.w() - ref.w_at(ref_step)));
  };
  account(0);
  while (!sim.done()) {
    sim.advance();
    account(sim.step_index());
  }
  return record;
}

// Reference runs keep nodal profiles in memory; refuse protocols whose
// retention would not fit instead of dying in the allocator.
void check_retention_budget(std::size_t retained_states, std::size_t n_nodes,
                            const char* protocol) {
  constexpr std::size_t kBudgetBytes = std::size_t{2} << 30;
  const std::size_t bytes = retained_states * n_nodes * sizeof(double);
  if (bytes > kBudgetBytes)
    throw std::invalid_argument(
        std::string(protocol) + " study reference would retain " +
        std::to_string(bytes >> 20) + " MiB of profiles (" +
        std::to_string(retained_states) + " states of " + std::to_string(n_nodes) +
        " nodes); use a coarser dt or a smaller protocol");
}

ConvergenceTable rows_to_table(std::vector<ErrorRecord> records, std::string protocol,
                               std::string reference_spec) {
  ConvergenceTable table;
  table.protocol = std::move(protocol);
  table.reference_spec = std::move(reference_spec);
  for (const auto& r : records)
    table.rows.push_back(ConvergenceRow{r.resolution, r.err_u, std::nullopt,
                                        r.err_w, std::nullopt});
  attach_orders(table);
  return table;
}

// Streaming energy of one run: max ||U^n||^2 for n >= 1 plus
// dt * sum ||U^j'||^2 for j >= 1.
double streaming_energy(const DimensionlessParameters& params, MeshPtr mesh, double dt) {
  Simulator sim(params, std::move(mesh), dt);
  double max_l2_sq = 0.0;
  double grad_sum = 0.0;
  while (!sim.done()) {
    sim.advance();
    const double l2 = l2_norm(*sim.mesh(), sim.u());
    const double h1 = h1_seminorm(*sim.mesh(), sim.u());
    max_l2_sq = std::max(max_l2_sq, l2 * l2);
    grad_sum += h1 * h1;
  }
  return max_l2_sq + dt * grad_sum;
}

// FNV-1a over the raw bytes of every nodal value; order sensitive, so two
// runs hash equal iff they agree bitwise step by step.
struct StateHash {
  std::uint64_t h = 1469598103934665603ull;
  void mix(std::span<const double> values) {
    for (const double v : values) {
      std::uint64_t bits;
      std::memcpy(&bits, &v, sizeof(bits));
      for (int i = 0; i < 8; ++i) {
        h ^= (bits >> (8 * i)) & 0xffu;
        h *= 1099511628211ull;
      }
    }
  }
};

}  // namespace

double observed_order(double err_coarse, double err_fine, double ratio) {
  if (!(err_coarse > 0.0) || !(err_fine > 0.0))
    throw std::invalid_argument("observed_order requires positive errors");
  if (!(ratio > 1.0)) throw std::invalid_argument("observed_order requires ratio > 1");
  return std::log(err_coarse / err_fine) / std::log(ratio);
}

ErrorRecord error_against_reference(const Trajectory& traj, const Trajectory& ref) {
  const double ratio = traj.dt() / ref.dt();
  const auto stride = static_cast<std::size_t>(std::llround(ratio));
  if (stride == 0 || std::abs(ratio - static_cast<double>(stride)) > 1e-12 * ratio)
    throw std::invalid_argument("reference dt must divide the run dt");
  if (traj.step_count() * stride != ref.step_count())
    throw std::invalid_argument("runs must span the same final time");
  if (traj.record_stride() != 1)
    throw std::invalid_argument("run must retain profiles at every step");
  if (stride % ref.record_stride() != 0)
    throw std::invalid_argument("reference retention must cover the run's time grid");

  ErrorRecord record;
  const bool same_mesh = traj.mesh().nodes().size() == ref.mesh().nodes().size() &&
                         std::equal(traj.mesh().nodes().begin(), traj.mesh().nodes().end(),
                                    ref.mesh().nodes().begin());
  record.resolution = same_mesh ? traj.dt() : static_cast<double>(traj.mesh().node_count());
  for (std::size_t n = 0; n <= traj.step_count(); ++n) {
    record.err_u = std::max(record.err_u, l2_diff(traj.mesh(), traj.profile(n),
                                                  ref.mesh(), ref.profile(n * stride)));
    record.err_w = std::max(record.err_w, std::abs(traj.w_at(n) - ref.w_at(n * stride)));
  }
  return record;
}

StudyBreakdownError::StudyBreakdownError(const StabilityBreakdownError& cause,
                                         double resolution, ConvergenceTable partial)
    : StabilityBreakdownError(cause.step(), cause.reason() + " (at resolution " +
                                                describe(resolution) + ")"),
      resolution_(resolution),
      partial_(std::move(partial)) {}

ConvergenceTable space_study(const SpaceStudyConfig& cfg) {
  if (cfg.node_counts.empty())
    throw std::invalid_argument("space study needs at least one node count");
  for (std::size_t i = 0; i + 1 < cfg.node_counts.size(); ++i)
    if (cfg.node_counts[i] >= cfg.node_counts[i + 1])
      throw std::invalid_argument("space study node counts must be increasing");
  if (cfg.node_counts.back() >= cfg.reference_nodes)
    throw std::invalid_argument("reference mesh must be finer than every study mesh");

  const std::string ref_spec = "uniform mesh, N = " + std::to_string(cfg.reference_nodes) +
                               ", dt = " + describe(cfg.dt);
  if (cfg.dt > 0.0)
    check_retention_budget(
        static_cast<std::size_t>(std::llround(cfg.params.final_time / cfg.dt)) + 1,
        cfg.reference_nodes, "space");
  Trajectory ref = [&] {
    try {
      return run(cfg.params, std::make_shared<Mesh1D>(Mesh1D::uniform(cfg.reference_nodes)),
                 cfg.dt, 1);
    } catch (const StabilityBreakdownError& e) {
      throw StudyBreakdownError(e, static_cast<double>(cfg.reference_nodes),
                                ConvergenceTable{{}, "space", ref_spec});
    }
  }();

  std::vector<std::future<ErrorRecord>> futures;
  futures.reserve(cfg.node_counts.size());
  for (const std::size_t n : cfg.node_counts) {
    futures.push_back(std::async(std::launch::async, [&, n] {
      return compare_run(cfg.params, std::make_shared<Mesh1D>(Mesh1D::uniform(n)),
                         cfg.dt, ref, 1, static_cast<double>(n));
    }));
  }

  std::vector<ErrorRecord> records;
  for (std::size_t i = 0; i < futures.size(); ++i) {
    try {
      records.push_back(futures[i].get());
    } catch (const StabilityBreakdownError& e) {
      for (auto& f : futures)
        if (f.valid()) f.wait();
      throw StudyBreakdownError(e, static_cast<double>(cfg.node_counts[i]),
                                rows_to_table(std::move(records), "space", ref_spec));
    }
  }
  return rows_to_table(std::move(records), "space", ref_spec);
}

ConvergenceTable time_study(const TimeStudyConfig& cfg) {
  if (cfg.reference_divisor < (1u << cfg.halvings) ||
      cfg.reference_divisor % (1u << cfg.halvings) != 0)
    throw std::invalid_argument(
        "reference divisor must be a multiple of the finest row divisor");
  const double dt_ref = cfg.dt / static_cast<double>(cfg.reference_divisor);
  const std::string ref_spec = "N = " + std::to_string(cfg.n_nodes) +
                               ", dt = " + describe(dt_ref);
  auto mesh = std::make_shared<Mesh1D>(Mesh1D::uniform(cfg.n_nodes));

  // Retain reference profiles only where some row will sample them.
  const std::size_t retention = cfg.reference_divisor >> cfg.halvings;
  if (dt_ref > 0.0)
    check_retention_budget(
        static_cast<std::size_t>(std::llround(cfg.params.final_time / dt_ref)) /
                std::max<std::size_t>(retention, 1) +
            2,
        cfg.n_nodes, "time");
  Trajectory ref = [&] {
    try {
      return run(cfg.params, mesh, dt_ref, retention);
    } catch (const StabilityBreakdownError& e) {
      throw StudyBreakdownError(e, dt_ref, ConvergenceTable{{}, "time", ref_spec});
    }
  }();

  std::vector<std::future<ErrorRecord>> futures;
  std::vector<double> dts;
  for (std::size_t j = 0; j <= cfg.halvings; ++j) {
    const double dt_j = cfg.dt / static_cast<double>(1u << j);
    const std::size_t stride = cfg.reference_divisor >> j;
    dts.push_back(dt_j);
    futures.push_back(std::async(std::launch::async, [&, dt_j, stride] {
      return compare_run(cfg.params, mesh, dt_j, ref, stride, dt_j);
    }));
  }

  std::vector<ErrorRecord> records;
  for (std::size_t i = 0; i < futures.size(); ++i) {
    try {
      records.push_back(futures[i].get());
    } catch (const StabilityBreakdownError& e) {
      for (auto& f : futures)
        if (f.valid()) f.wait();
      throw StudyBreakdownError(e, dts[i],
                                rows_to_table(std::move(records), "time", ref_spec));
    }
  }
  return rows_to_table(std::move(records), "time", ref_spec);
}

double energy_report(const Trajectory& traj) {
  if (traj.step_count() == 0) {
    const double l2 = l2_norm(traj.mesh(), traj.profile(0));
    return l2 * l2;
  }
  if (traj.record_stride() != 1)
    throw std::invalid_argument("energy_report needs profiles at every step");
  double max_l2_sq = 0.0;
  double grad_sum = 0.0;
  for (std::size_t n = 1; n <= traj.step_count(); ++n) {
    const auto u = traj.profile(n);
    const double l2 = l2_norm(traj.mesh(), u);
    const double h1 = h1_seminorm(traj.mesh(), u);
    max_l2_sq = std::max(max_l2_sq, l2 * l2);
    grad_sum += h1 * h1;
  }
  return max_l2_sq + traj.dt() * grad_sum;
}

InvariantReport run_invariant_checks(const DimensionlessParameters& params,
                                     std::size_t n_nodes, double dt) {
  InvariantReport report;
  auto add = [&report](const std::string& name, bool ok, const std::string& detail) {
    report.checks.push_back({name, ok, detail});
    report.passed = report.passed && ok;
  };

  // Constant data with decoupled boundaries must be a fixed point of the
  // step map to solver accuracy, whatever the mesh and step size.
  {
    DimensionlessParameters decoupled = params;
    decoupled.biot = 0.0;
    decoupled.interface_kinetics = 0.0;
    decoupled.initial_profile = Coefficient::constant(1.0);
    const auto probe = [&decoupled](MeshPtr mesh, double dt_probe) {
      const ElementMatrices mats = assemble(*mesh);
      DiscreteState state{0, 0.0, interpolate([](double) { return 1.0; }, mesh), 1.0};
      const DiscreteState next = step(state, mats, decoupled, dt_probe);
      double dev = std::abs(next.w - 1.0);
      for (const double v : next.u.coeffs()) dev = std::max(dev, std::abs(v - 1.0));
      return dev;
    };
    const auto uniform = std::make_shared<Mesh1D>(Mesh1D::uniform(n_nodes));
    const auto graded = std::make_shared<Mesh1D>(
        Mesh1D(std::vector<double>{0.0, 0.03, 0.11, 0.35, 0.71, 1.0}));
    double dev = 0.0;
    for (const double dt_probe : {dt, 4.0 * dt, 0.25 * dt}) {
      dev = std::max(dev, probe(uniform, dt_probe));
      dev = std::max(dev, probe(graded, dt_probe));
    }
    add("constant fixed point", dev <= 1e-12,
        "max single-step deviation " + describe(dev) +
            " across step sizes and meshes (tolerance 1e-12)");
  }

  const auto mesh = std::make_shared<Mesh1D>(Mesh1D::uniform(n_nodes));
  const double ceiling = 1.05 * boundary_value_range(params).second / params.henry;

  // Main run, instrumented: nodal bounds, a-posteriori interface
  // monotonicity, and a bitwise state hash for the determinism check.
  bool monotone_ok = true;
  std::size_t monotone_violations = 0;
  double u_min = std::numeric_limits<double>::infinity();
  double u_max = -std::numeric_limits<double>::infinity();
  double w_final = 0.0;
  StateHash first_hash;
  {
    Simulator sim(params, mesh, dt);
    for (const double v : sim.u()) {
      u_min = std::min(u_min, v);
      u_max = std::max(u_max, v);
    }
    first_hash.mix(sim.u());
    while (!sim.done()) {
      const double w_before = sim.w();
      const double u_end = sim.u().back();
      const double supersaturation = u_end - eval_sigma(params, w_before);
      sim.advance();
      if (supersaturation >= 0.0 && sim.w() < w_before) {
        monotone_ok = false;
        ++monotone_violations;
      }
      for (const double v : sim.u()) {
        u_min = std::min(u_min, v);
        u_max = std::max(u_max, v);
      }
      first_hash.mix(sim.u());
      const double w_value = sim.w();
      first_hash.mix(std::span<const double>(&w_value, 1));
    }
    w_final = sim.w();
  }
  add("interface monotone under supersaturation", monotone_ok,
      monotone_ok ? "no retreating steps; final W = " + describe(w_final)
                  : std::to_string(monotone_violations) + " retreating steps");
  add("nodal values within bounds",
      u_min >= 0.0 && u_max <= ceiling,
      "range [" + describe(u_min) + ", " + describe(u_max) + "], admissible [0, " +
          describe(ceiling) + "]");

  // Energy of the displayed estimate must be stable under mesh refinement.
  {
    const std::vector<std::size_t> ladder = {40, 80, 160, 320};
    std::vector<double> energies;
    for (const std::size_t n : ladder)
      energies.push_back(streaming_energy(params, std::make_shared<Mesh1D>(Mesh1D::uniform(n)), dt));
    const double lo = *std::min_element(energies.begin(), energies.end());
    const double hi = *std::max_element(energies.begin(), energies.end());
    const double band = (hi - lo) / (0.5 * (hi + lo));
    std::ostringstream os;
    os << "energies";
    for (const double e : energies) os << ' ' << describe(e);
    os << "; spread " << describe(band) << " (tolerance 0.05)";
    add("energy bounded under refinement", band < 0.05, os.str());
  }

  // Bitwise determinism: an identical rerun must reproduce every state.
  {
    Simulator sim(params, mesh, dt);
    StateHash second_hash;
    second_hash.mix(sim.u());
    while (!sim.done()) {
      sim.advance();
      second_hash.mix(sim.u());
      const double w_value = sim.w();
      second_hash.mix(std::span<const double>(&w_value, 1));
    }
    const bool same = second_hash.h == first_hash.h && sim.w() == w_final;
    add("bitwise determinism", same,
        same ? "rerun reproduced every state" : "rerun diverged from first run");
  }

  return report;
}

std::string format_report(const InvariantReport& report) {
  std::ostringstream os;
  for (const auto& check : report.checks)
    os << (check.passed ? "pass" : "FAIL") << "  " << check.name << ": " << check.detail
       << '\n';
  os << (report.passed ? "all invariants hold" : "invariant violation detected") << '\n';
  return os.str();
}

}  // namespace mbdiff
