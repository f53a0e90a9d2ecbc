#include <doctest.h>

#include <cmath>

#include "linalg.hpp"
#include "oracles.hpp"

using namespace mbdiff;

namespace {

TridiagonalSystem random_dd_system(oracles::Rng& rng, std::size_t n) {
  TridiagonalSystem sys;
  sys.matrix.lower.resize(n - 1);
  sys.matrix.upper.resize(n - 1);
  sys.matrix.diag.resize(n);
  sys.rhs.resize(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    sys.matrix.lower[i] = rng.uniform(-1.0, 1.0);
    sys.matrix.upper[i] = rng.uniform(-1.0, 1.0);
  }
  for (std::size_t i = 0; i < n; ++i) {
    double off = (i > 0 ? std::abs(sys.matrix.lower[i - 1]) : 0.0) +
                 (i + 1 < n ? std::abs(sys.matrix.upper[i]) : 0.0);
    const double sign = rng.uniform(-1.0, 1.0) > 0.0 ? 1.0 : -1.0;
    sys.matrix.diag[i] = sign * (off + rng.uniform(0.1, 2.0));
    sys.rhs[i] = rng.uniform(-10.0, 10.0);
  }
  return sys;
}

}  // namespace

TEST_CASE("thomas solve: identity returns the right-hand side") {
  TridiagonalSystem sys{{{0.0, 0.0}, {1.0, 1.0, 1.0}, {0.0, 0.0}}, {3.0, -2.5, 7.0}};
  const auto x = thomas_solve(sys);
  CHECK(x == std::vector<double>{3.0, -2.5, 7.0});
  CHECK(sys.rhs == std::vector<double>{3.0, -2.5, 7.0});  // input untouched
}

TEST_CASE("thomas solve: 2x2 against direct inversion") {
  TridiagonalSystem sys{{{-1.0}, {2.0, 2.0}, {-1.0}}, {1.0, 1.0}};
  const auto x = thomas_solve(sys);
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("thomas solve matches dense elimination on diagonally dominant systems") {
  oracles::Rng rng(2024);
  for (const std::size_t n : {2ul, 5ul, 50ul, 137ul, 200ul}) {
    auto sys = random_dd_system(rng, n);
    const auto x = thomas_solve(sys);
    const auto ref = oracles::dense_solve(oracles::to_dense(sys.matrix), sys.rhs);
    double scale = 0.0;
    for (const double v : ref) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < n; ++i)
      CHECK(std::abs(x[i] - ref[i]) <= 1e-10 * std::max(1.0, scale));
  }
}

TEST_CASE("solve-then-multiply residual stays at solver tolerance") {
  oracles::Rng rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 2 + rng.index(199);
    auto sys = random_dd_system(rng, n);
    const auto x = thomas_solve(sys);
    double rhs_inf = 0.0;
    for (const double v : sys.rhs) rhs_inf = std::max(rhs_inf, std::abs(v));
    CHECK(residual_inf(sys, x) <= 1e-10 * std::max(1.0, rhs_inf));
  }
}

TEST_CASE("thomas solve is linear in the right-hand side") {
  oracles::Rng rng(99);
  auto sys = random_dd_system(rng, 40);
  TridiagonalSystem sys2 = sys;
  for (auto& v : sys2.rhs) v = rng.uniform(-5.0, 5.0);
  const double alpha = 0.7, beta = -1.9;
  TridiagonalSystem combined = sys;
  for (std::size_t i = 0; i < sys.rhs.size(); ++i)
    combined.rhs[i] = alpha * sys.rhs[i] + beta * sys2.rhs[i];
  const auto xa = thomas_solve(sys);
  const auto xb = thomas_solve(sys2);
  const auto xc = thomas_solve(combined);
  for (std::size_t i = 0; i < xc.size(); ++i)
    CHECK(xc[i] == doctest::Approx(alpha * xa[i] + beta * xb[i]).epsilon(1e-10));
}

TEST_CASE("zero pivot reports the failing row") {
  // elimination hits a zero pivot in the second row
  TridiagonalSystem sys{{{1.0}, {1.0, 1.0}, {1.0}}, {1.0, 1.0}};
  CHECK_THROWS_AS(thomas_solve(sys), ZeroPivotError);
  try {
    thomas_solve(sys);
  } catch (const ZeroPivotError& e) {
    CHECK(e.index() == 1);
  }

  TridiagonalSystem zero{{{0.0}, {0.0, 1.0}, {0.0}}, {1.0, 1.0}};
  try {
    thomas_solve(zero);
  } catch (const ZeroPivotError& e) {
    CHECK(e.index() == 0);
  }
}

TEST_CASE("matvec: identity and banded product") {
  TridiagonalMatrix id{{0.0, 0.0}, {1.0, 1.0, 1.0}, {0.0, 0.0}};
  const std::vector<double> x{4.0, 5.0, 6.0};
  CHECK(matvec(id, x) == x);

  // uniform 3-node stiffness annihilates constants
  TridiagonalMatrix stiffness{{-2.0, -2.0}, {2.0, 4.0, 2.0}, {-2.0, -2.0}};
  const auto y = matvec(stiffness, std::vector<double>{1.0, 1.0, 1.0});
  CHECK(y == std::vector<double>{0.0, 0.0, 0.0});
}

TEST_CASE("dimension mismatches are rejected") {
  TridiagonalMatrix m{{1.0}, {1.0, 1.0}, {1.0}};
  CHECK_THROWS_AS(matvec(m, std::vector<double>{1.0, 2.0, 3.0}), std::invalid_argument);
  TridiagonalSystem bad{{{1.0}, {1.0, 1.0}, {1.0}}, {1.0, 2.0, 3.0}};
  CHECK_THROWS_AS(thomas_solve(bad), std::invalid_argument);
}
