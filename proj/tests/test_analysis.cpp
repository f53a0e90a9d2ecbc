#include <doctest.h>

#include <cmath>
#include <memory>

#include "analysis.hpp"
#include "oracles.hpp"

using namespace mbdiff;

namespace {

MeshPtr uniform(std::size_t n) { return std::make_shared<Mesh1D>(Mesh1D::uniform(n)); }

// Bench coefficients on a shortened horizon so unit tests stay quick.
DimensionlessParameters quick_bench() {
  auto d = oracles::bench_dimensionless_compatible();
  d.final_time = 3.66;
  return d;
}

}  // namespace

TEST_CASE("observed order") {
  CHECK(observed_order(0.4, 0.1, 2.0) == doctest::Approx(2.0).epsilon(1e-15));

  // published convergence tables round to three decimals
  CHECK(observed_order(0.5941833, 0.2934375, 2.0) == doctest::Approx(1.018).epsilon(5e-4));
  CHECK(std::abs(observed_order(0.5941833, 0.2934375, 2.0) - 1.017) <= 0.01);
  CHECK(observed_order(0.0000541, 0.0000268, 2.0) == doctest::Approx(1.013).epsilon(5e-4));
  CHECK(std::abs(observed_order(0.0000541, 0.0000268, 2.0) - 1.009) <= 0.01);

  for (const double p : {0.5, 1.0, 2.0})
    CHECK(observed_order(1.7, 1.7 / std::pow(2.0, p), 2.0) ==
          doctest::Approx(p).epsilon(1e-12));

  CHECK_THROWS_AS(observed_order(0.0, 0.1, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(observed_order(0.1, -0.1, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(observed_order(0.1, 0.05, 1.0), std::invalid_argument);
}

TEST_CASE("error against reference") {
  const auto d = quick_bench();

  SUBCASE("a run compared with itself is exact") {
    const auto traj = run(d, uniform(12), d.final_time / 40.0);
    const auto rec = error_against_reference(traj, traj);
    CHECK(rec.err_u == 0.0);
    CHECK(rec.err_w == 0.0);
  }

  SUBCASE("decoupled constant runs agree across meshes") {
    DimensionlessParameters dz = d;
    dz.biot = 0.0;
    dz.interface_kinetics = 0.0;
    dz.initial_profile = Coefficient::constant(1.0);
    const auto coarse = run(dz, uniform(7), dz.final_time / 20.0);
    const auto fine = run(dz, uniform(23), dz.final_time / 40.0);
    const auto rec = error_against_reference(coarse, fine);
    CHECK(rec.err_u <= 1e-11);
    CHECK(rec.err_w == 0.0);
  }

  SUBCASE("non-coincident grids are rejected") {
    const auto a = run(d, uniform(8), d.final_time / 30.0);
    const auto b = run(d, uniform(8), d.final_time / 40.0);
    CHECK_THROWS_AS(error_against_reference(b, a), std::invalid_argument);
  }
}

TEST_CASE("space study") {
  SUBCASE("decoupled constants give zero errors and undefined orders") {
    DimensionlessParameters dz = quick_bench();
    dz.biot = 0.0;
    dz.interface_kinetics = 0.0;
    dz.initial_profile = Coefficient::constant(1.0);
    SpaceStudyConfig cfg{dz, dz.final_time / 20.0, {4, 8, 16}, 32};
    const auto table = space_study(cfg);
    REQUIRE(table.rows.size() == 3);
    for (const auto& row : table.rows) {
      CHECK(row.err_u <= 1e-11);
      CHECK(row.err_w == 0.0);
      CHECK_FALSE(row.order_u.has_value());
      CHECK_FALSE(row.order_w.has_value());
    }
    CHECK(table.protocol == "space");
  }

  SUBCASE("a linear initial profile is represented exactly on every mesh") {
    // every mesh reproduces linear data, so the t = 0 cross-mesh error
    // vanishes; the subsequent decoupled relaxation is mesh dependent
    const auto f = [](double y) { return 2.0 - y; };
    const auto coarse = interpolate(f, uniform(4));
    const auto fine = interpolate(f, uniform(16));
    CHECK(l2_diff(coarse, fine) <= 1e-14);
    CHECK(h1_semi_diff(coarse, fine) <= 1e-12);
  }

  SUBCASE("bench coefficients produce decreasing errors and order columns") {
    SpaceStudyConfig cfg{quick_bench(), 3.66e-3, {10, 20, 40}, 80};
    const auto table = space_study(cfg);
    REQUIRE(table.rows.size() == 3);
    CHECK(table.rows[0].err_u > table.rows[1].err_u);
    CHECK(table.rows[1].err_u > table.rows[2].err_u);
    CHECK(table.rows[0].order_u.has_value());
    CHECK(table.rows[1].order_w.has_value());
    CHECK_FALSE(table.rows[2].order_u.has_value());
    CHECK_FALSE(table.rows[2].order_w.has_value());
    CHECK(table.rows[0].resolution == 10.0);
  }

  SUBCASE("study tables are deterministic") {
    SpaceStudyConfig cfg{quick_bench(), 3.66e-2, {6, 12}, 24};
    const auto a = space_study(cfg);
    const auto b = space_study(cfg);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
      CHECK(a.rows[i].err_u == b.rows[i].err_u);
      CHECK(a.rows[i].err_w == b.rows[i].err_w);
    }
  }

  SUBCASE("invalid ladders are rejected") {
    SpaceStudyConfig cfg{quick_bench(), 3.66e-2, {16, 8}, 32};
    CHECK_THROWS_AS(space_study(cfg), std::invalid_argument);
    cfg.node_counts = {8, 16};
    cfg.reference_nodes = 16;
    CHECK_THROWS_AS(space_study(cfg), std::invalid_argument);
  }

  SUBCASE("a breakdown inside the study carries the offending resolution") {
    // a quarter of the horizon per step kicks the interface far past h_max
    DimensionlessParameters d = oracles::bench_dimensionless();
    SpaceStudyConfig cfg{d, d.final_time / 4.0, {8, 16}, 32};
    try {
      space_study(cfg);
      FAIL("expected a breakdown");
    } catch (const StudyBreakdownError& e) {
      CHECK(e.resolution() > 0.0);
      CHECK(e.partial_table().protocol == "space");
    }
  }
}

TEST_CASE("time study") {
  SUBCASE("decoupled constants give zero errors") {
    DimensionlessParameters dz = quick_bench();
    dz.biot = 0.0;
    dz.interface_kinetics = 0.0;
    dz.initial_profile = Coefficient::constant(1.0);
    TimeStudyConfig cfg{dz, 9, dz.final_time / 10.0, 2, 8};
    const auto table = time_study(cfg);
    REQUIRE(table.rows.size() == 3);
    for (const auto& row : table.rows) {
      CHECK(row.err_u <= 1e-11);
      CHECK(row.err_w == 0.0);
    }
    CHECK(table.protocol == "time");
  }

  SUBCASE("bench coefficients: errors halve with the step, first pair in band") {
    TimeStudyConfig cfg{quick_bench(), 40, 3.66e-3, 2, 16};
    const auto table = time_study(cfg);
    REQUIRE(table.rows.size() == 3);
    CHECK(table.rows[0].err_w > table.rows[1].err_w);
    CHECK(table.rows[1].err_w > table.rows[2].err_w);
    const double ratio = table.rows[0].err_w / table.rows[1].err_w;
    CHECK(ratio > 1.8);
    CHECK(ratio < 2.6);
    CHECK(table.rows[0].resolution == doctest::Approx(3.66e-3).epsilon(1e-15));
    CHECK(table.rows[1].resolution == doctest::Approx(1.83e-3).epsilon(1e-15));
  }

  SUBCASE("reference divisor must cover the halving ladder") {
    TimeStudyConfig cfg{quick_bench(), 9, 3.66e-2, 3, 4};
    CHECK_THROWS_AS(time_study(cfg), std::invalid_argument);
  }

  SUBCASE("protocols that cannot retain their reference are refused") {
    auto d = oracles::bench_dimensionless_compatible();
    TimeStudyConfig cfg{d, 320, 3.66e-4, 5, 64};
    CHECK_THROWS_WITH_AS(time_study(cfg), doctest::Contains("retain"),
                         std::invalid_argument);
  }
}

TEST_CASE("discrete energy") {
  SUBCASE("constant run evaluates to the squared constant") {
    DimensionlessParameters dz = quick_bench();
    dz.biot = 0.0;
    dz.interface_kinetics = 0.0;
    dz.initial_profile = Coefficient::constant(3.0);
    const auto traj = run(dz, uniform(9), dz.final_time / 10.0);
    CHECK(energy_report(traj) == doctest::Approx(9.0).epsilon(1e-11));
  }

  SUBCASE("single recorded state uses the initial profile") {
    const auto mesh = uniform(17);
    Trajectory traj(quick_bench(), mesh, 0.1, 1);
    const auto g = interpolate([](double y) { return y; }, mesh);
    traj.append(0, 1.0, g.coeffs(), false);
    CHECK(energy_report(traj) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  }

  SUBCASE("subsampled trajectories are rejected") {
    const auto traj = run(quick_bench(), uniform(9), quick_bench().final_time / 10.0, 4);
    CHECK_THROWS_AS(energy_report(traj), std::invalid_argument);
  }
}

TEST_CASE("invariant suite passes on the bench configuration") {
  const auto report = run_invariant_checks(quick_bench(), 40, 3.66e-3);
  CHECK(report.passed);
  REQUIRE(report.checks.size() == 5);
  for (const auto& check : report.checks) CHECK(check.passed);
}

TEST_CASE("invariant suite flags an under-resolved spike profile") {
  // with the boundaries decoupled, a spike narrower than the coarse ladder
  // meshes makes the energy mesh-dependent; the suite must report that
  DimensionlessParameters d;
  d.biot = 0.0;
  d.interface_kinetics = 0.0;
  d.henry = 1.0;
  d.final_time = 0.0366;
  d.h_max = 50.0;
  d.boundary_value = Coefficient::constant(4.0);
  d.interface_resistance = Coefficient::linear(0.01);
  d.initial_profile = Coefficient::tabulated(
      {{0.0, 0.01}, {0.49, 0.01}, {0.5, 4.0}, {0.51, 0.01}, {1.0, 0.01}});
  const auto report = run_invariant_checks(d, 40, 0.00366);
  CHECK_FALSE(report.passed);
  bool energy_flagged = false;
  for (const auto& check : report.checks)
    if (!check.passed && check.name.find("energy") != std::string::npos)
      energy_flagged = true;
  CHECK(energy_flagged);
}
