#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "mbdiff.h"

#include "analysis.hpp"
#include "oracles.hpp"
#include "stepper.hpp"

namespace {

mbdiff_physical_spec bench_spec() {
  mbdiff_physical_spec spec{};
  spec.diffusivity = 3.66e-4;
  spec.surface_rate = 0.564;
  spec.henry = 2.5;
  spec.kinetic_coefficient = 50.0;
  spec.initial_position = 0.01;
  spec.concentration_scale = 0.1;
  spec.max_position = 10.0;
  spec.final_time = 10.0;
  spec.boundary_concentration = {MBDIFF_COEFF_CONSTANT, 1.0, nullptr, nullptr, 0};
  spec.interface_resistance = {MBDIFF_COEFF_LINEAR, 0.1, nullptr, nullptr, 0};
  spec.initial_concentration = {MBDIFF_COEFF_CONSTANT, 0.1, nullptr, nullptr, 0};
  return spec;
}

struct Params {
  mbdiff_params* ptr = nullptr;
  ~Params() { mbdiff_params_destroy(ptr); }
};

}  // namespace

TEST_CASE("parameter handles expose the dimensionless groups and scales") {
  const auto spec = bench_spec();
  Params params;
  REQUIRE(mbdiff_params_from_physical(&spec, &params.ptr) == MBDIFF_OK);

  double biot, kinetics, henry, final_time, h_max;
  REQUIRE(mbdiff_params_groups(params.ptr, &biot, &kinetics, &henry, &final_time,
                               &h_max) == MBDIFF_OK);
  const auto expected = oracles::bench_dimensionless();
  CHECK(biot == expected.biot);
  CHECK(kinetics == expected.interface_kinetics);
  CHECK(henry == 2.5);
  CHECK(final_time == expected.final_time);
  CHECK(h_max == expected.h_max);

  double time_scale, length_scale, conc_scale;
  REQUIRE(mbdiff_params_scales(params.ptr, &time_scale, &length_scale, &conc_scale) ==
          MBDIFF_OK);
  CHECK(time_scale == doctest::Approx(0.01 * 0.01 / 3.66e-4).epsilon(1e-15));
  CHECK(length_scale == 0.01);
  CHECK(conc_scale == 0.1);

  double value;
  REQUIRE(mbdiff_params_eval_boundary(params.ptr, 0.0, &value) == MBDIFF_OK);
  CHECK(value == doctest::Approx(10.0).epsilon(1e-15));
  REQUIRE(mbdiff_params_eval_resistance(params.ptr, 1.0, &value) == MBDIFF_OK);
  CHECK(value == doctest::Approx(0.01).epsilon(1e-14));
  REQUIRE(mbdiff_params_eval_resistance(params.ptr, -2.0, &value) == MBDIFF_OK);
  CHECK(value == 0.0);
}

TEST_CASE("dimensionless construction with a tabulated profile") {
  const std::vector<double> xs{0.0, 1.0};
  const std::vector<double> ys{4.0, 0.01};
  mbdiff_dimensionless_spec spec{};
  spec.biot = 2.0;
  spec.interface_kinetics = 1.0;
  spec.henry = 1.0;
  spec.final_time = 1.0;
  spec.h_max = 100.0;
  spec.boundary_value = {MBDIFF_COEFF_CONSTANT, 4.0, nullptr, nullptr, 0};
  spec.interface_resistance = {MBDIFF_COEFF_LINEAR, 0.01, nullptr, nullptr, 0};
  spec.initial_profile = {MBDIFF_COEFF_TABLE, 0.0, xs.data(), ys.data(), xs.size()};
  Params params;
  REQUIRE(mbdiff_params_from_dimensionless(&spec, &params.ptr) == MBDIFF_OK);

  double time_scale;
  REQUIRE(mbdiff_params_scales(params.ptr, &time_scale, nullptr, nullptr) == MBDIFF_OK);
  CHECK(time_scale == 1.0);

  int passed = 0;
  char* text = nullptr;
  REQUIRE(mbdiff_params_validate(params.ptr, &passed, &text) == MBDIFF_OK);
  CHECK(passed == 1);
  REQUIRE(text != nullptr);
  CHECK(std::strlen(text) > 0);
  mbdiff_string_free(text);
}

TEST_CASE("validation reports violations through the C surface") {
  auto spec = bench_spec();
  spec.boundary_concentration = {MBDIFF_COEFF_CONSTANT, 0.0, nullptr, nullptr, 0};
  Params params;
  REQUIRE(mbdiff_params_from_physical(&spec, &params.ptr) == MBDIFF_OK);
  int passed = 1;
  char* text = nullptr;
  REQUIRE(mbdiff_params_validate(params.ptr, &passed, &text) == MBDIFF_OK);
  CHECK(passed == 0);
  CHECK(std::string(text).find("A2") != std::string::npos);
  mbdiff_string_free(text);
}

TEST_CASE("simulation handles mirror the native run") {
  auto spec = bench_spec();
  const std::vector<double> xs{0.0, 0.01};
  const std::vector<double> ys{0.4, 0.001};
  spec.initial_concentration = {MBDIFF_COEFF_TABLE, 0.0, xs.data(), ys.data(), 2};
  spec.final_time = 1.0;
  Params params;
  REQUIRE(mbdiff_params_from_physical(&spec, &params.ptr) == MBDIFF_OK);

  double time_scale;
  mbdiff_params_scales(params.ptr, &time_scale, nullptr, nullptr);
  const double dt_tau = 0.001 / time_scale;

  mbdiff_trajectory* traj = nullptr;
  REQUIRE(mbdiff_simulate(params.ptr, 12, dt_tau, 1, &traj) == MBDIFF_OK);
  CHECK(mbdiff_trajectory_step_count(traj) == 1000);
  CHECK(mbdiff_trajectory_node_count(traj) == 12);
  CHECK(mbdiff_trajectory_record_stride(traj) == 1);
  CHECK(mbdiff_trajectory_dt(traj) == dt_tau);
  CHECK(mbdiff_trajectory_time(traj, 10) == doctest::Approx(10 * dt_tau).epsilon(1e-15));
  CHECK(mbdiff_trajectory_has_profile(traj, 57) == 1);
  CHECK(mbdiff_trajectory_interface_monotone(traj) == 1);
  CHECK(mbdiff_trajectory_max_residual(traj) < 1e-9);

  // values agree with the core library run bit for bit
  auto p = oracles::bench_physical();
  p.final_time = 1.0;
  const auto d = mbdiff::nondimensionalize(
      p, mbdiff::Coefficient::tabulated({{0.0, 0.4}, {0.01, 0.001}}));
  const auto native =
      mbdiff::run(d, std::make_shared<mbdiff::Mesh1D>(mbdiff::Mesh1D::uniform(12)), dt_tau);
  std::vector<double> profile(12);
  REQUIRE(mbdiff_trajectory_profile(traj, 1000, profile.data(), profile.size()) ==
          MBDIFF_OK);
  const auto expected = native.profile(1000);
  for (std::size_t i = 0; i < profile.size(); ++i) CHECK(profile[i] == expected[i]);
  CHECK(mbdiff_trajectory_interface(traj, 1000) == native.w_at(1000));

  std::vector<double> nodes(12);
  REQUIRE(mbdiff_trajectory_mesh_nodes(traj, nodes.data(), nodes.size()) == MBDIFF_OK);
  CHECK(nodes.front() == 0.0);
  CHECK(nodes.back() == 1.0);

  double energy;
  REQUIRE(mbdiff_trajectory_energy(traj, &energy) == MBDIFF_OK);
  CHECK(energy == doctest::Approx(mbdiff::energy_report(native)).epsilon(1e-15));

  mbdiff_trajectory_destroy(traj);
}

TEST_CASE("stability breakdown surfaces the partial trajectory") {
  auto spec = bench_spec();
  const std::vector<double> xs{0.0, 0.01};
  const std::vector<double> ys{0.4, 0.001};
  spec.initial_concentration = {MBDIFF_COEFF_TABLE, 0.0, xs.data(), ys.data(), 2};
  Params params;
  REQUIRE(mbdiff_params_from_physical(&spec, &params.ptr) == MBDIFF_OK);
  double time_scale;
  mbdiff_params_scales(params.ptr, &time_scale, nullptr, nullptr);

  mbdiff_trajectory* traj = nullptr;
  const mbdiff_status status =
      mbdiff_simulate(params.ptr, 64, (10.0 / 250.0) / time_scale, 1, &traj);
  CHECK(status == MBDIFF_ERR_STABILITY_BREAKDOWN);
  REQUIRE(traj != nullptr);
  CHECK(mbdiff_trajectory_step_count(traj) >= 1);
  CHECK(std::string(mbdiff_last_error()).find("stability") != std::string::npos);
  mbdiff_trajectory_destroy(traj);
}

TEST_CASE("study tables through the C surface") {
  auto spec = bench_spec();
  const std::vector<double> xs{0.0, 0.01};
  const std::vector<double> ys{0.4, 0.001};
  spec.initial_concentration = {MBDIFF_COEFF_TABLE, 0.0, xs.data(), ys.data(), 2};
  spec.final_time = 1.0;
  Params params;
  REQUIRE(mbdiff_params_from_physical(&spec, &params.ptr) == MBDIFF_OK);
  double time_scale;
  mbdiff_params_scales(params.ptr, &time_scale, nullptr, nullptr);
  const double dt_tau = 0.005 / time_scale;

  const std::vector<size_t> counts{8, 16};
  mbdiff_table* table = nullptr;
  REQUIRE(mbdiff_space_study(params.ptr, dt_tau, counts.data(), counts.size(), 32,
                             &table) == MBDIFF_OK);
  REQUIRE(mbdiff_table_rows(table) == 2);
  double resolution, err_u, order_u, err_w, order_w;
  int has_u, has_w;
  REQUIRE(mbdiff_table_row(table, 0, &resolution, &err_u, &has_u, &order_u, &err_w,
                           &has_w, &order_w) == MBDIFF_OK);
  CHECK(resolution == 8.0);
  CHECK(err_u > 0.0);
  CHECK(has_u == 1);
  REQUIRE(mbdiff_table_row(table, 1, &resolution, &err_u, &has_u, &order_u, &err_w,
                           &has_w, &order_w) == MBDIFF_OK);
  CHECK(has_u == 0);
  CHECK(has_w == 0);
  CHECK(mbdiff_table_row(table, 7, &resolution, &err_u, &has_u, &order_u, &err_w, &has_w,
                         &order_w) == MBDIFF_ERR_INVALID_ARGUMENT);
  mbdiff_table_destroy(table);

  mbdiff_table* ttable = nullptr;
  REQUIRE(mbdiff_time_study(params.ptr, 12, dt_tau, 1, 4, &ttable) == MBDIFF_OK);
  CHECK(mbdiff_table_rows(ttable) == 2);
  mbdiff_table_destroy(ttable);
}

TEST_CASE("observed order and invariant checks through the C surface") {
  double order;
  REQUIRE(mbdiff_observed_order(0.4, 0.1, 2.0, &order) == MBDIFF_OK);
  CHECK(order == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(mbdiff_observed_order(0.0, 0.1, 2.0, &order) == MBDIFF_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(mbdiff_last_error()) > 0);

  auto spec = bench_spec();
  const std::vector<double> xs{0.0, 0.01};
  const std::vector<double> ys{0.4, 0.001};
  spec.initial_concentration = {MBDIFF_COEFF_TABLE, 0.0, xs.data(), ys.data(), 2};
  spec.final_time = 1.0;
  Params params;
  REQUIRE(mbdiff_params_from_physical(&spec, &params.ptr) == MBDIFF_OK);
  double time_scale;
  mbdiff_params_scales(params.ptr, &time_scale, nullptr, nullptr);

  int passed = 0;
  char* text = nullptr;
  REQUIRE(mbdiff_check_invariants(params.ptr, 24, 0.001 / time_scale, &passed, &text) ==
          MBDIFF_OK);
  CHECK(passed == 1);
  CHECK(std::string(text).find("pass") != std::string::npos);
  mbdiff_string_free(text);
}

TEST_CASE("null arguments are rejected with a message") {
  CHECK(mbdiff_params_from_physical(nullptr, nullptr) == MBDIFF_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(mbdiff_last_error()) > 0);
  Params params;
  const auto spec = bench_spec();
  REQUIRE(mbdiff_params_from_physical(&spec, &params.ptr) == MBDIFF_OK);
  CHECK(mbdiff_simulate(params.ptr, 8, 0.1, 1, nullptr) == MBDIFF_ERR_INVALID_ARGUMENT);
  CHECK(std::string(mbdiff_version()) == "1.0.0");
}
