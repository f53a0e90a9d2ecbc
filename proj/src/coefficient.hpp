#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace mbdiff {

/// Scalar coefficient function drawn from a closed, serializable family:
/// a constant, a linear function through the origin, or a piecewise-linear
/// table (clamped to its end values outside the breakpoint range). The
/// family is closed under the argument/value rescaling used by the
/// nondimensionalization map.
class Coefficient {
public:
  enum class Kind { Constant, Linear, Tabulated };

  static Coefficient constant(double value);
  static Coefficient linear(double slope);
  static Coefficient tabulated(std::vector<std::pair<double, double>> points);

  double operator()(double x) const;

  Kind kind() const { return kind_; }
  /// Constant value or linear slope (meaningless for tabulated).
  double value() const { return value_; }
  const std::vector<std::pair<double, double>>& points() const { return points_; }

  /// Exact min/max over [lo, hi]; the family is piecewise linear, so the
  /// extremes sit at interval endpoints or interior breakpoints.
  std::pair<double, double> range(double lo, double hi) const;

  /// Returns g with g(x) = f(x_scale * x) / y_scale, staying in the family.
  Coefficient rescaled(double x_scale, double y_scale) const;

  /// True when the function grows without bound as x -> +inf.
  bool unbounded_above() const;

private:
  Coefficient(Kind kind, double value, std::vector<std::pair<double, double>> points);

  Kind kind_;
  double value_;
  std::vector<std::pair<double, double>> points_;
};

}  // namespace mbdiff
