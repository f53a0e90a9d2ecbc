#include "mbdiff.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <utility>

#include "analysis.hpp"
#include "model.hpp"
#include "stepper.hpp"

namespace {

thread_local std::string g_last_error;

void set_last_error(std::string msg) { g_last_error = std::move(msg); }

template <typename F>
mbdiff_status guarded(F&& body) noexcept {
  try {
    return body();
  } catch (const mbdiff::StabilityBreakdownError& e) {
    set_last_error(e.what());
    return MBDIFF_ERR_STABILITY_BREAKDOWN;
  } catch (const std::invalid_argument& e) {
    set_last_error(e.what());
    return MBDIFF_ERR_INVALID_ARGUMENT;
  } catch (const std::domain_error& e) {
    set_last_error(e.what());
    return MBDIFF_ERR_INVALID_ARGUMENT;
  } catch (const std::out_of_range& e) {
    set_last_error(e.what());
    return MBDIFF_ERR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    set_last_error(e.what());
    return MBDIFF_ERR_INTERNAL;
  } catch (...) {
    set_last_error("unknown error");
    return MBDIFF_ERR_INTERNAL;
  }
}

mbdiff::Coefficient to_coefficient(const mbdiff_coeff_spec& spec) {
  switch (spec.kind) {
    case MBDIFF_COEFF_CONSTANT:
      return mbdiff::Coefficient::constant(spec.value);
    case MBDIFF_COEFF_LINEAR:
      return mbdiff::Coefficient::linear(spec.value);
    case MBDIFF_COEFF_TABLE: {
      if (spec.n_points == 0 || spec.xs == nullptr || spec.ys == nullptr)
        throw std::invalid_argument("table coefficient needs breakpoint arrays");
      std::vector<std::pair<double, double>> pts(spec.n_points);
      for (size_t i = 0; i < spec.n_points; ++i) pts[i] = {spec.xs[i], spec.ys[i]};
      return mbdiff::Coefficient::tabulated(std::move(pts));
    }
  }
  throw std::invalid_argument("unknown coefficient kind");
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

struct mbdiff_params {
  mbdiff::DimensionlessParameters d;
  double time_scale = 1.0;
  double length_scale = 1.0;
  double concentration_scale = 1.0;
};

struct mbdiff_trajectory {
  mbdiff::Trajectory traj;
};

struct mbdiff_table {
  mbdiff::ConvergenceTable table;
};

extern "C" {

const char* mbdiff_version(void) { return "1.0.0"; }

const char* mbdiff_last_error(void) { return g_last_error.c_str(); }

mbdiff_status mbdiff_params_from_physical(const mbdiff_physical_spec* spec,
                                          mbdiff_params** out) {
  return guarded([&]() -> mbdiff_status {
    if (spec == nullptr || out == nullptr)
      throw std::invalid_argument("null argument");
    mbdiff::PhysicalParameters p;
    p.diffusivity = spec->diffusivity;
    p.surface_rate = spec->surface_rate;
    p.henry = spec->henry;
    p.kinetic_coefficient = spec->kinetic_coefficient;
    p.initial_position = spec->initial_position;
    p.concentration_scale = spec->concentration_scale;
    p.max_position = spec->max_position;
    p.final_time = spec->final_time;
    p.boundary_concentration = to_coefficient(spec->boundary_concentration);
    p.interface_resistance = to_coefficient(spec->interface_resistance);
    if (spec->has_resistance_plateau) p.resistance_plateau = spec->resistance_plateau;
    auto handle = std::make_unique<mbdiff_params>();
    handle->d = mbdiff::nondimensionalize(p, to_coefficient(spec->initial_concentration));
    handle->time_scale = p.initial_position * p.initial_position / p.diffusivity;
    handle->length_scale = p.initial_position;
    handle->concentration_scale = p.concentration_scale;
    *out = handle.release();
    return MBDIFF_OK;
  });
}

mbdiff_status mbdiff_params_from_dimensionless(const mbdiff_dimensionless_spec* spec,
                                               mbdiff_params** out) {
  return guarded([&]() -> mbdiff_status {
    if (spec == nullptr || out == nullptr)
      throw std::invalid_argument("null argument");
    auto handle = std::make_unique<mbdiff_params>();
    handle->d.biot = spec->biot;
    handle->d.interface_kinetics = spec->interface_kinetics;
    handle->d.henry = spec->henry;
    handle->d.final_time = spec->final_time;
    handle->d.h_max = spec->h_max;
    handle->d.boundary_value = to_coefficient(spec->boundary_value);
    handle->d.interface_resistance = to_coefficient(spec->interface_resistance);
    handle->d.initial_profile = to_coefficient(spec->initial_profile);
    if (spec->has_resistance_plateau)
      handle->d.resistance_plateau = spec->resistance_plateau;
    *out = handle.release();
    return MBDIFF_OK;
  });
}

void mbdiff_params_destroy(mbdiff_params* params) { delete params; }

mbdiff_status mbdiff_params_groups(const mbdiff_params* params, double* biot,
                                   double* interface_kinetics, double* henry,
                                   double* final_time, double* h_max) {
  return guarded([&]() -> mbdiff_status {
    if (params == nullptr) throw std::invalid_argument("null params");
    if (biot) *biot = params->d.biot;
    if (interface_kinetics) *interface_kinetics = params->d.interface_kinetics;
    if (henry) *henry = params->d.henry;
    if (final_time) *final_time = params->d.final_time;
    if (h_max) *h_max = params->d.h_max;
    return MBDIFF_OK;
  });
}

mbdiff_status mbdiff_params_scales(const mbdiff_params* params, double* time_scale,
                                   double* length_scale, double* concentration_scale) {
  return guarded([&]() -> mbdiff_status {
    if (params == nullptr) throw std::invalid_argument("null params");
    if (time_scale) *time_scale = params->time_scale;
    if (length_scale) *length_scale = params->length_scale;
    if (concentration_scale) *concentration_scale = params->concentration_scale;
    return MBDIFF_OK;
  });
}

mbdiff_status mbdiff_params_eval_boundary(const mbdiff_params* params, double tau,
                                          double* out) {
  return guarded([&]() -> mbdiff_status {
    if (params == nullptr || out == nullptr) throw std::invalid_argument("null argument");
    *out = mbdiff::eval_b(params->d, tau);
    return MBDIFF_OK;
  });
}

mbdiff_status mbdiff_params_eval_resistance(const mbdiff_params* params, double h,
                                            double* out) {
  return guarded([&]() -> mbdiff_status {
    if (params == nullptr || out == nullptr) throw std::invalid_argument("null argument");
    *out = mbdiff::eval_sigma(params->d, h);
    return MBDIFF_OK;
  });
}

mbdiff_status mbdiff_params_validate(const mbdiff_params* params, int* passed,
                                     char** text) {
  return guarded([&]() -> mbdiff_status {
    if (params == nullptr || passed == nullptr)
      throw std::invalid_argument("null argument");
    const mbdiff::ValidationReport report = mbdiff::validate_assumptions(params->d);
    *passed = report.passed ? 1 : 0;
    if (text) *text = copy_string(mbdiff::format_report(report));
    return MBDIFF_OK;
  });
}

void mbdiff_string_free(char* text) { delete[] text; }

mbdiff_status mbdiff_simulate(const mbdiff_params* params, size_t n_nodes, double dt,
                              size_t record_every, mbdiff_trajectory** out) {
  return guarded([&]() -> mbdiff_status {
    if (params == nullptr || out == nullptr) throw std::invalid_argument("null argument");
    *out = nullptr;
    auto mesh = std::make_shared<mbdiff::Mesh1D>(mbdiff::Mesh1D::uniform(n_nodes));
    try {
      auto traj = mbdiff::run(params->d, std::move(mesh), dt, record_every);
      *out = new mbdiff_trajectory{std::move(traj)};
      return MBDIFF_OK;
    } catch (const mbdiff::StabilityBreakdownError& e) {
      if (e.partial()) *out = new mbdiff_trajectory{std::move(*e.partial())};
      set_last_error(e.what());
      return MBDIFF_ERR_STABILITY_BREAKDOWN;
    }
  });
}

size_t mbdiff_trajectory_step_count(const mbdiff_trajectory* traj) {
  return traj ? traj->traj.step_count() : 0;
}

size_t mbdiff_trajectory_node_count(const mbdiff_trajectory* traj) {
  return traj ? traj->traj.mesh().node_count() : 0;
}

size_t mbdiff_trajectory_record_stride(const mbdiff_trajectory* traj) {
  return traj ? traj->traj.record_stride() : 0;
}

double mbdiff_trajectory_dt(const mbdiff_trajectory* traj) {
  return traj ? traj->traj.dt() : 0.0;
}

double mbdiff_trajectory_time(const mbdiff_trajectory* traj, size_t step) {
  return traj ? traj->traj.tau_at(step) : 0.0;
}

double mbdiff_trajectory_interface(const mbdiff_trajectory* traj, size_t step) {
  if (traj == nullptr || step > traj->traj.step_count()) return 0.0;
  return traj->traj.w_at(step);
}

int mbdiff_trajectory_has_profile(const mbdiff_trajectory* traj, size_t step) {
  return (traj != nullptr && traj->traj.has_profile(step)) ? 1 : 0;
}

mbdiff_status mbdiff_trajectory_profile(const mbdiff_trajectory* traj, size_t step,
                                        double* buf, size_t len) {
  return guarded([&]() -> mbdiff_status {
    if (traj == nullptr || buf == nullptr) throw std::invalid_argument("null argument");
    const auto profile = traj->traj.profile(step);
    if (len < profile.size()) throw std::invalid_argument("profile buffer too small");
    std::memcpy(buf, profile.data(), profile.size() * sizeof(double));
    return MBDIFF_OK;
  });
}

mbdiff_status mbdiff_trajectory_mesh_nodes(const mbdiff_trajectory* traj, double* buf,
                                           size_t len) {
  return guarded([&]() -> mbdiff_status {
    if (traj == nullptr || buf == nullptr) throw std::invalid_argument("null argument");
    const auto nodes = traj->traj.mesh().nodes();
    if (len < nodes.size()) throw std::invalid_argument("node buffer too small");
    std::memcpy(buf, nodes.data(), nodes.size() * sizeof(double));
    return MBDIFF_OK;
  });
}

double mbdiff_trajectory_max_residual(const mbdiff_trajectory* traj) {
  return traj ? traj->traj.max_solver_residual() : 0.0;
}

int mbdiff_trajectory_interface_monotone(const mbdiff_trajectory* traj) {
  return (traj != nullptr && traj->traj.interface_monotone()) ? 1 : 0;
}

mbdiff_status mbdiff_trajectory_energy(const mbdiff_trajectory* traj, double* out) {
  return guarded([&]() -> mbdiff_status {
    if (traj == nullptr || out == nullptr) throw std::invalid_argument("null argument");
    *out = mbdiff::energy_report(traj->traj);
    return MBDIFF_OK;
  });
}

void mbdiff_trajectory_destroy(mbdiff_trajectory* traj) { delete traj; }

mbdiff_status mbdiff_space_study(const mbdiff_params* params, double dt,
                                 const size_t* node_counts, size_t n_counts,
                                 size_t reference_nodes, mbdiff_table** out) {
  return guarded([&]() -> mbdiff_status {
    if (params == nullptr || out == nullptr || node_counts == nullptr || n_counts == 0)
      throw std::invalid_argument("null argument");
    *out = nullptr;
    mbdiff::SpaceStudyConfig cfg;
    cfg.params = params->d;
    cfg.dt = dt;
    cfg.node_counts.assign(node_counts, node_counts + n_counts);
    cfg.reference_nodes = reference_nodes;
    try {
      *out = new mbdiff_table{mbdiff::space_study(cfg)};
      return MBDIFF_OK;
    } catch (const mbdiff::StudyBreakdownError& e) {
      *out = new mbdiff_table{e.partial_table()};
      set_last_error(e.what());
      return MBDIFF_ERR_STABILITY_BREAKDOWN;
    }
  });
}

mbdiff_status mbdiff_time_study(const mbdiff_params* params, size_t n_nodes, double dt,
                                size_t halvings, size_t reference_divisor,
                                mbdiff_table** out) {
  return guarded([&]() -> mbdiff_status {
    if (params == nullptr || out == nullptr) throw std::invalid_argument("null argument");
    *out = nullptr;
    mbdiff::TimeStudyConfig cfg;
    cfg.params = params->d;
    cfg.n_nodes = n_nodes;
    cfg.dt = dt;
    cfg.halvings = halvings;
    cfg.reference_divisor = reference_divisor;
    try {
      *out = new mbdiff_table{mbdiff::time_study(cfg)};
      return MBDIFF_OK;
    } catch (const mbdiff::StudyBreakdownError& e) {
      *out = new mbdiff_table{e.partial_table()};
      set_last_error(e.what());
      return MBDIFF_ERR_STABILITY_BREAKDOWN;
    }
  });
}

size_t mbdiff_table_rows(const mbdiff_table* table) {
  return table ? table->table.rows.size() : 0;
}

mbdiff_status mbdiff_table_row(const mbdiff_table* table, size_t row, double* resolution,
                               double* err_u, int* has_order_u, double* order_u,
                               double* err_w, int* has_order_w, double* order_w) {
  return guarded([&]() -> mbdiff_status {
    if (table == nullptr) throw std::invalid_argument("null table");
    if (row >= table->table.rows.size()) throw std::out_of_range("row out of range");
    const mbdiff::ConvergenceRow& r = table->table.rows[row];
    if (resolution) *resolution = r.resolution;
    if (err_u) *err_u = r.err_u;
    if (has_order_u) *has_order_u = r.order_u.has_value() ? 1 : 0;
    if (order_u) *order_u = r.order_u.value_or(0.0);
    if (err_w) *err_w = r.err_w;
    if (has_order_w) *has_order_w = r.order_w.has_value() ? 1 : 0;
    if (order_w) *order_w = r.order_w.value_or(0.0);
    return MBDIFF_OK;
  });
}

void mbdiff_table_destroy(mbdiff_table* table) { delete table; }

mbdiff_status mbdiff_observed_order(double err_coarse, double err_fine, double ratio,
                                    double* out) {
  return guarded([&]() -> mbdiff_status {
    if (out == nullptr) throw std::invalid_argument("null argument");
    *out = mbdiff::observed_order(err_coarse, err_fine, ratio);
    return MBDIFF_OK;
  });
}

mbdiff_status mbdiff_check_invariants(const mbdiff_params* params, size_t n_nodes,
                                      double dt, int* passed, char** text) {
  return guarded([&]() -> mbdiff_status {
    if (params == nullptr || passed == nullptr)
      throw std::invalid_argument("null argument");
    const mbdiff::InvariantReport report =
        mbdiff::run_invariant_checks(params->d, n_nodes, dt);
    *passed = report.passed ? 1 : 0;
    if (text) *text = copy_string(mbdiff::format_report(report));
    return MBDIFF_OK;
  });
}

}  // extern "C"
