#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace mbdiff {

// Tridiagonal matrix stored as three bands: lower (n-1), diag (n), upper (n-1).
struct TridiagonalMatrix {
  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;

  std::size_t size() const { return diag.size(); }
};

struct TridiagonalSystem {
  TridiagonalMatrix matrix;
  std::vector<double> rhs;
};

// Forward elimination met a pivot at or below the breakdown threshold.
// Carries the row index where elimination stopped.
class ZeroPivotError : public std::runtime_error {
public:
  ZeroPivotError(std::size_t index, double pivot);
  std::size_t index() const { return index_; }

private:
  std::size_t index_;
};

/// Solves the system with the Thomas algorithm (no pivoting). The input is
/// left unmodified. Throws ZeroPivotError when an eliminated pivot falls
/// below 1e-14 times the original row scale.
std::vector<double> thomas_solve(const TridiagonalSystem& sys);

// Allocation-free variant for hot loops. scratch must hold n entries;
// x receives the solution and may not alias rhs or scratch.
void thomas_solve(const TridiagonalMatrix& m, std::span<const double> rhs,
                  std::span<double> x, std::span<double> scratch);

std::vector<double> matvec(const TridiagonalMatrix& m, std::span<const double> x);
void matvec(const TridiagonalMatrix& m, std::span<const double> x, std::span<double> out);

/// Max-norm residual of a candidate solution: max_i |(A x - rhs)_i|.
double residual_inf(const TridiagonalSystem& sys, std::span<const double> x);
double residual_inf(const TridiagonalMatrix& m, std::span<const double> rhs,
                    std::span<const double> x);

}  // namespace mbdiff
