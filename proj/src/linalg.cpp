#include "linalg.hpp"

#include <cmath>
#include <string>

namespace mbdiff {

namespace {

constexpr double kPivotRelTol = 1e-14;

void check_shape(const TridiagonalMatrix& m) {
  const std::size_t n = m.diag.size();
  if (n == 0) throw std::invalid_argument("tridiagonal matrix must be nonempty");
  if (m.lower.size() + 1 != n || m.upper.size() + 1 != n)
    throw std::invalid_argument("tridiagonal band lengths inconsistent with diagonal");
}

double row_scale(const TridiagonalMatrix& m, std::size_t i) {
  double s = std::abs(m.diag[i]);
  if (i > 0) s += std::abs(m.lower[i - 1]);
  if (i + 1 < m.diag.size()) s += std::abs(m.upper[i]);
  return s;
}

}  // namespace

ZeroPivotError::ZeroPivotError(std::size_t index, double pivot)
    : std::runtime_error("zero pivot in tridiagonal elimination at row " +
                         std::to_string(index) + " (pivot " + std::to_string(pivot) + ")"),
      index_(index) {}

void thomas_solve(const TridiagonalMatrix& m, std::span<const double> rhs,
                  std::span<double> x, std::span<double> scratch) {
  check_shape(m);
  const std::size_t n = m.size();
  if (rhs.size() != n || x.size() != n || scratch.size() < n)
    throw std::invalid_argument("thomas_solve: dimension mismatch");

  double pivot = m.diag[0];
  if (std::abs(pivot) <= kPivotRelTol * row_scale(m, 0)) throw ZeroPivotError(0, pivot);
  if (n > 1) scratch[0] = m.upper[0] / pivot;
  x[0] = rhs[0] / pivot;

  for (std::size_t i = 1; i < n; ++i) {
    pivot = m.diag[i] - m.lower[i - 1] * scratch[i - 1];
    if (std::abs(pivot) <= kPivotRelTol * row_scale(m, i)) throw ZeroPivotError(i, pivot);
    if (i + 1 < n) scratch[i] = m.upper[i] / pivot;
    x[i] = (rhs[i] - m.lower[i - 1] * x[i - 1]) / pivot;
  }

  for (std::size_t i = n - 1; i-- > 0;) x[i] -= scratch[i] * x[i + 1];
}

std::vector<double> thomas_solve(const TridiagonalSystem& sys) {
  std::vector<double> x(sys.matrix.size());
  std::vector<double> scratch(sys.matrix.size());
  thomas_solve(sys.matrix, sys.rhs, x, scratch);
  return x;
}

void matvec(const TridiagonalMatrix& m, std::span<const double> x, std::span<double> out) {
  check_shape(m);
  const std::size_t n = m.size();
  if (x.size() != n || out.size() != n)
    throw std::invalid_argument("matvec: dimension mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    double v = m.diag[i] * x[i];
    if (i > 0) v += m.lower[i - 1] * x[i - 1];
    if (i + 1 < n) v += m.upper[i] * x[i + 1];
    out[i] = v;
  }
}

std::vector<double> matvec(const TridiagonalMatrix& m, std::span<const double> x) {
  std::vector<double> out(m.size());
  matvec(m, x, out);
  return out;
}

double residual_inf(const TridiagonalMatrix& m, std::span<const double> rhs,
                    std::span<const double> x) {
  check_shape(m);
  const std::size_t n = m.size();
  if (x.size() != n || rhs.size() != n)
    throw std::invalid_argument("residual_inf: dimension mismatch");
  double r = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double v = m.diag[i] * x[i];
    if (i > 0) v += m.lower[i - 1] * x[i - 1];
    if (i + 1 < n) v += m.upper[i] * x[i + 1];
    r = std::max(r, std::abs(v - rhs[i]));
  }
  return r;
}

double residual_inf(const TridiagonalSystem& sys, std::span<const double> x) {
  return residual_inf(sys.matrix, sys.rhs, x);
}

}  // namespace mbdiff
