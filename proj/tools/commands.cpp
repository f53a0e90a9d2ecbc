#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <vector>

#include "csv.hpp"

namespace mbdiff_cli {

namespace {

struct ParamsHandle {
  mbdiff_params* ptr = nullptr;
  ~ParamsHandle() { mbdiff_params_destroy(ptr); }
};

struct TrajectoryHandle {
  mbdiff_trajectory* ptr = nullptr;
  ~TrajectoryHandle() { mbdiff_trajectory_destroy(ptr); }
};

struct TableHandle {
  mbdiff_table* ptr = nullptr;
  ~TableHandle() { mbdiff_table_destroy(ptr); }
};

struct OwnedString {
  char* ptr = nullptr;
  ~OwnedString() { mbdiff_string_free(ptr); }
};

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure("cannot open output file: " + path.string());
  return out;
}

void write_trajectory_files(const mbdiff_trajectory* traj, double time_scale,
                            double length_scale, const std::filesystem::path& dir,
                            const std::string& suffix) {
  const std::size_t steps = mbdiff_trajectory_step_count(traj);
  const std::size_t n = mbdiff_trajectory_node_count(traj);
  std::vector<double> profile(n);

  auto traj_csv = open_output(dir / ("trajectory.csv" + suffix));
  std::vector<std::string> header = {"step", "tau", "t_phys", "W", "s_phys"};
  for (std::size_t i = 0; i < n; ++i) header.push_back("U_" + std::to_string(i));
  traj_csv << join_row(header);
  for (std::size_t s = 0; s <= steps; ++s) {
    if (!mbdiff_trajectory_has_profile(traj, s)) continue;
    if (mbdiff_trajectory_profile(traj, s, profile.data(), profile.size()) != MBDIFF_OK)
      throw std::ios_base::failure(mbdiff_last_error());
    const double tau = mbdiff_trajectory_time(traj, s);
    const double w = mbdiff_trajectory_interface(traj, s);
    std::vector<std::string> row = {std::to_string(s), format_double(tau),
                                    format_double(tau * time_scale), format_double(w),
                                    format_double(w * length_scale)};
    for (const double v : profile) row.push_back(format_double(v));
    traj_csv << join_row(row);
  }

  auto iface_csv = open_output(dir / ("interface.csv" + suffix));
  iface_csv << join_row({"step", "tau", "W"});
  for (std::size_t s = 0; s <= steps; ++s) {
    iface_csv << join_row({std::to_string(s),
                           format_double(mbdiff_trajectory_time(traj, s)),
                           format_double(mbdiff_trajectory_interface(traj, s))});
  }
}

void write_table_file(const mbdiff_table* table, bool space_protocol, double time_scale,
                      const std::filesystem::path& dir, const std::string& suffix) {
  const std::string name = space_protocol ? "table_space.csv" : "table_time.csv";
  auto csv = open_output(dir / (name + suffix));
  csv << join_row({"resolution", "err_u", "order_u", "err_w", "order_w"});
  const std::size_t rows = mbdiff_table_rows(table);
  for (std::size_t i = 0; i < rows; ++i) {
    double resolution = 0.0, err_u = 0.0, order_u = 0.0, err_w = 0.0, order_w = 0.0;
    int has_u = 0, has_w = 0;
    mbdiff_table_row(table, i, &resolution, &err_u, &has_u, &order_u, &err_w, &has_w,
                     &order_w);
    if (!space_protocol) resolution *= time_scale;
    csv << join_row({format_double(resolution), format_double(err_u),
                     has_u ? format_double(order_u) : "",
                     format_double(err_w), has_w ? format_double(order_w) : ""});
  }
}

void write_gnuplot_script(bool space_protocol, const std::filesystem::path& dir) {
  const std::string table = space_protocol ? "table_space.csv" : "table_time.csv";
  auto gp = open_output(dir / (space_protocol ? "plot_space.gp" : "plot_time.gp"));
  gp << "set datafile separator ','\n"
     << "set logscale xy\n"
     << "set key left top\n"
     << "set xlabel '" << (space_protocol ? "N" : "dt") << "'\n"
     << "set ylabel 'error'\n"
     << "plot '" << table << "' skip 1 using 1:2 with linespoints title 'err_u', \\\n"
     << "     '" << table << "' skip 1 using 1:4 with linespoints title 'err_w'\n";
}

int cmd_simulate(const RunConfig& cfg, const ParamsHandle& params, double dt_tau,
                 bool quiet, const std::filesystem::path& out_dir) {
  double time_scale = 1.0, length_scale = 1.0, concentration_scale = 1.0;
  mbdiff_params_scales(params.ptr, &time_scale, &length_scale, &concentration_scale);

  TrajectoryHandle traj;
  const mbdiff_status status =
      mbdiff_simulate(params.ptr, cfg.n_nodes, dt_tau, cfg.record_every, &traj.ptr);
  if (status != MBDIFF_OK && status != MBDIFF_ERR_STABILITY_BREAKDOWN) {
    std::cerr << "error: " << mbdiff_last_error() << '\n';
    return kExitConfigError;
  }

  const bool broke = status == MBDIFF_ERR_STABILITY_BREAKDOWN;
  const std::string breakdown_detail = broke ? mbdiff_last_error() : "";
  const std::string suffix = broke ? ".partial" : "";
  if (traj.ptr != nullptr)
    write_trajectory_files(traj.ptr, time_scale, length_scale, out_dir, suffix);
  if (broke) {
    std::cerr << "stability breakdown: " << breakdown_detail << '\n';
    return kExitStabilityBreakdown;
  }
  if (!quiet) {
    const std::size_t steps = mbdiff_trajectory_step_count(traj.ptr);
    std::cout << "simulate: " << steps << " steps, final W = "
              << format_double(mbdiff_trajectory_interface(traj.ptr, steps))
              << ", max solver residual = "
              << format_double(mbdiff_trajectory_max_residual(traj.ptr)) << '\n';
  }
  return kExitOk;
}

int cmd_convergence(const RunConfig& cfg, const ParamsHandle& params, double dt_tau,
                    bool quiet, const std::filesystem::path& out_dir) {
  double time_scale = 1.0;
  mbdiff_params_scales(params.ptr, &time_scale, nullptr, nullptr);
  const bool space_protocol = cfg.mode == Mode::ConvergenceSpace;

  TableHandle table;
  mbdiff_status status;
  if (space_protocol) {
    status = mbdiff_space_study(params.ptr, dt_tau, cfg.node_counts.data(),
                                cfg.node_counts.size(), cfg.ref_nodes, &table.ptr);
  } else {
    status = mbdiff_time_study(params.ptr, cfg.n_nodes, dt_tau, cfg.halvings,
                               cfg.ref_divisor, &table.ptr);
  }
  if (status != MBDIFF_OK && status != MBDIFF_ERR_STABILITY_BREAKDOWN) {
    std::cerr << "error: " << mbdiff_last_error() << '\n';
    return kExitConfigError;
  }

  const bool broke = status == MBDIFF_ERR_STABILITY_BREAKDOWN;
  const std::string breakdown_detail = broke ? mbdiff_last_error() : "";
  const std::string suffix = broke ? ".partial" : "";
  if (table.ptr != nullptr)
    write_table_file(table.ptr, space_protocol, time_scale, out_dir, suffix);
  if (cfg.gnuplot && !broke) write_gnuplot_script(space_protocol, out_dir);
  if (broke) {
    std::cerr << "stability breakdown: " << breakdown_detail << '\n';
    return kExitStabilityBreakdown;
  }
  if (!quiet)
    std::cout << (space_protocol ? "table_space.csv" : "table_time.csv") << ": "
              << mbdiff_table_rows(table.ptr) << " rows\n";
  return kExitOk;
}

int cmd_check(const RunConfig& cfg, const ParamsHandle& params, double dt_tau,
              bool quiet) {
  int passed = 0;
  OwnedString text;
  const mbdiff_status status =
      mbdiff_check_invariants(params.ptr, cfg.n_nodes, dt_tau, &passed, &text.ptr);
  if (status != MBDIFF_OK) {
    std::cerr << "error: " << mbdiff_last_error() << '\n';
    return status == MBDIFF_ERR_STABILITY_BREAKDOWN ? kExitStabilityBreakdown
                                                    : kExitConfigError;
  }
  if (!quiet || !passed) std::cout << text.ptr;
  return passed ? kExitOk : kExitInvariantViolation;
}

}  // namespace

int run_command(const RunConfig& cfg, bool quiet) {
  ParamsHandle params;
  mbdiff_status status;
  if (cfg.physical_route) {
    const mbdiff_physical_spec spec = cfg.physical_spec();
    status = mbdiff_params_from_physical(&spec, &params.ptr);
  } else {
    const mbdiff_dimensionless_spec spec = cfg.dimensionless_spec();
    status = mbdiff_params_from_dimensionless(&spec, &params.ptr);
  }
  if (status != MBDIFF_OK) {
    std::cerr << "invalid parameters: " << mbdiff_last_error() << '\n';
    return kExitConfigError;
  }

  int assumptions_ok = 0;
  OwnedString report;
  if (mbdiff_params_validate(params.ptr, &assumptions_ok, &report.ptr) != MBDIFF_OK) {
    std::cerr << "invalid parameters: " << mbdiff_last_error() << '\n';
    return kExitConfigError;
  }
  if (!assumptions_ok) {
    std::cerr << report.ptr;
    return kExitConfigError;
  }
  if (!quiet) std::cout << report.ptr;

  double time_scale = 1.0;
  mbdiff_params_scales(params.ptr, &time_scale, nullptr, nullptr);
  const double dt_tau = cfg.dt / time_scale;

  try {
    const std::filesystem::path out_dir(cfg.output_dir);
    std::filesystem::create_directories(out_dir);
    switch (cfg.mode) {
      case Mode::Simulate:
        return cmd_simulate(cfg, params, dt_tau, quiet, out_dir);
      case Mode::ConvergenceSpace:
      case Mode::ConvergenceTime:
        return cmd_convergence(cfg, params, dt_tau, quiet, out_dir);
      case Mode::CheckInvariants:
        return cmd_check(cfg, params, dt_tau, quiet);
    }
  } catch (const std::exception& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIoError;
  }
  return kExitIoError;
}

}  // namespace mbdiff_cli
