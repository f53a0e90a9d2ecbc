#include <doctest.h>

#include <cmath>
#include <memory>

#include "assembly.hpp"
#include "oracles.hpp"

using namespace mbdiff;

TEST_CASE("element matrices on the uniform 3-node mesh") {
  const auto mats = assemble(Mesh1D::uniform(3));

  CHECK(mats.mass.diag[0] == doctest::Approx(1.0 / 6).epsilon(1e-14));
  CHECK(mats.mass.diag[1] == doctest::Approx(1.0 / 3).epsilon(1e-14));
  CHECK(mats.mass.diag[2] == doctest::Approx(1.0 / 6).epsilon(1e-14));
  CHECK(mats.mass.upper[0] == doctest::Approx(1.0 / 12).epsilon(1e-14));
  CHECK(mats.mass.lower[1] == doctest::Approx(1.0 / 12).epsilon(1e-14));

  CHECK(mats.stiffness.diag[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(mats.stiffness.diag[1] == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(mats.stiffness.diag[2] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(mats.stiffness.upper[0] == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(mats.stiffness.lower[0] == doctest::Approx(-2.0).epsilon(1e-14));
}

TEST_CASE("convection matrix on the single-element mesh") {
  const auto mats = assemble(Mesh1D::uniform(2));
  CHECK(mats.convection.diag[0] == doctest::Approx(-1.0 / 6).epsilon(1e-13));
  CHECK(mats.convection.upper[0] == doctest::Approx(1.0 / 6).epsilon(1e-13));
  CHECK(mats.convection.lower[0] == doctest::Approx(-1.0 / 3).epsilon(1e-13));
  CHECK(mats.convection.diag[1] == doctest::Approx(1.0 / 3).epsilon(1e-13));
}

TEST_CASE("row sums: stiffness and convection annihilate constants, mass sums to one") {
  oracles::Rng rng(77);
  for (int trial = 0; trial < 8; ++trial) {
    const auto mesh = oracles::random_mesh(rng, 3 + rng.index(9));
    const auto mats = assemble(mesh);
    const std::size_t n = mesh.node_count();
    double mass_total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s_row = mats.stiffness.diag[i];
      double c_row = mats.convection.diag[i];
      double m_row = mats.mass.diag[i];
      if (i > 0) {
        s_row += mats.stiffness.lower[i - 1];
        c_row += mats.convection.lower[i - 1];
        m_row += mats.mass.lower[i - 1];
      }
      if (i + 1 < n) {
        s_row += mats.stiffness.upper[i];
        c_row += mats.convection.upper[i];
        m_row += mats.mass.upper[i];
      }
      CHECK(std::abs(s_row) <= 1e-13 * (std::abs(mats.stiffness.diag[i]) + 1.0));
      CHECK(std::abs(c_row) <= 1e-13);
      mass_total += m_row;
    }
    CHECK(mass_total == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("assembled entries match brute-force quadrature on random meshes") {
  oracles::Rng rng(123);
  for (int trial = 0; trial < 4; ++trial) {
    const auto mesh = oracles::random_mesh(rng, 3 + rng.index(6));
    const auto mats = assemble(mesh);
    const std::size_t n = mesh.node_count();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = (i == 0 ? 0 : i - 1); j <= std::min(i + 1, n - 1); ++j) {
        const double mass_ref = oracles::elementwise_midpoint(
            mesh,
            [&](double y) { return oracles::hat(mesh, j, y) * oracles::hat(mesh, i, y); },
            10000);
        const double stiff_ref = oracles::elementwise_midpoint(
            mesh,
            [&](double y) {
              return oracles::hat_deriv(mesh, j, y) * oracles::hat_deriv(mesh, i, y);
            },
            10000);
        const double conv_ref = oracles::elementwise_midpoint(
            mesh,
            [&](double y) {
              return y * oracles::hat_deriv(mesh, j, y) * oracles::hat(mesh, i, y);
            },
            10000);
        double mass_val, stiff_val, conv_val;
        if (j == i) {
          mass_val = mats.mass.diag[i];
          stiff_val = mats.stiffness.diag[i];
          conv_val = mats.convection.diag[i];
        } else if (j + 1 == i) {
          mass_val = mats.mass.lower[j];
          stiff_val = mats.stiffness.lower[j];
          conv_val = mats.convection.lower[j];
        } else {
          mass_val = mats.mass.upper[i];
          stiff_val = mats.stiffness.upper[i];
          conv_val = mats.convection.upper[i];
        }
        CHECK(mass_val == doctest::Approx(mass_ref).epsilon(1e-6).scale(1.0));
        CHECK(stiff_val == doctest::Approx(stiff_ref).epsilon(1e-6).scale(1.0));
        CHECK(conv_val == doctest::Approx(conv_ref).epsilon(1e-6).scale(1.0));
      }
    }
  }
}

TEST_CASE("boundary load vector") {
  SUBCASE("decoupled boundaries give the zero vector") {
    const auto load = boundary_load(0.0, 5.0, 2.0, 1.0, 1.0, 0.0, 1.0, 4);
    for (const double v : load) CHECK(v == 0.0);
  }
  SUBCASE("influx vanishes at the uptake equilibrium") {
    const auto load = boundary_load(1.0, 10.0, 2.5, 4.0, 1.0, 0.0, 1.0, 3);
    CHECK(load[0] == 0.0);
    CHECK(load[1] == 0.0);
    CHECK(load[2] == 0.0);
  }
  SUBCASE("both entries from direct substitution") {
    const auto load = boundary_load(2.0, 3.0, 1.0, 1.0, 2.0, 0.5, 1.0, 4);
    CHECK(load[0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(load[1] == 0.0);
    CHECK(load[2] == 0.0);
    CHECK(load[3] == doctest::Approx(-0.25).epsilon(1e-15));
  }
  SUBCASE("nonpositive interface position is rejected") {
    CHECK_THROWS_AS(boundary_load(1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 1.0, 4),
                    std::invalid_argument);
    CHECK_THROWS_AS(boundary_load(1.0, 1.0, 1.0, 1.0, -0.5, 0.0, 1.0, 4),
                    std::invalid_argument);
  }
}
