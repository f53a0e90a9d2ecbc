#include "coefficient.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mbdiff {

Coefficient::Coefficient(Kind kind, double value,
                         std::vector<std::pair<double, double>> points)
    : kind_(kind), value_(value), points_(std::move(points)) {}

Coefficient Coefficient::constant(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("constant coefficient must be finite");
  return Coefficient(Kind::Constant, value, {});
}

Coefficient Coefficient::linear(double slope) {
  if (!std::isfinite(slope)) throw std::invalid_argument("linear slope must be finite");
  return Coefficient(Kind::Linear, slope, {});
}

Coefficient Coefficient::tabulated(std::vector<std::pair<double, double>> points) {
  if (points.empty()) throw std::invalid_argument("tabulated coefficient needs at least one point");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i].first) || !std::isfinite(points[i].second))
      throw std::invalid_argument("tabulated coefficient entries must be finite");
    if (i > 0 && !(points[i].first > points[i - 1].first))
      throw std::invalid_argument("tabulated breakpoints must be strictly increasing");
  }
  return Coefficient(Kind::Tabulated, 0.0, std::move(points));
}

double Coefficient::operator()(double x) const {
  switch (kind_) {
    case Kind::Constant:
      return value_;
    case Kind::Linear:
      return value_ * x;
    case Kind::Tabulated: {
      if (x <= points_.front().first) return points_.front().second;
      if (x >= points_.back().first) return points_.back().second;
      auto it = std::upper_bound(points_.begin(), points_.end(), x,
                                 [](double v, const auto& p) { return v < p.first; });
      const auto& [xr, yr] = *it;
      const auto& [xl, yl] = *(it - 1);
      const double t = (x - xl) / (xr - xl);
      return yl + t * (yr - yl);
    }
  }
  return 0.0;
}

std::pair<double, double> Coefficient::range(double lo, double hi) const {
  if (!(lo <= hi)) throw std::invalid_argument("range requires lo <= hi");
  double mn = std::min((*this)(lo), (*this)(hi));
  double mx = std::max((*this)(lo), (*this)(hi));
  if (kind_ == Kind::Tabulated) {
    for (const auto& [x, y] : points_) {
      if (x <= lo || x >= hi) continue;
      mn = std::min(mn, y);
      mx = std::max(mx, y);
    }
  }
  return {mn, mx};
}

Coefficient Coefficient::rescaled(double x_scale, double y_scale) const {
  if (!(x_scale > 0.0) || !(y_scale > 0.0) || !std::isfinite(x_scale) || !std::isfinite(y_scale))
    throw std::invalid_argument("rescaled requires positive finite scales");
  switch (kind_) {
    case Kind::Constant:
      return constant(value_ / y_scale);
    case Kind::Linear:
      return linear(value_ * x_scale / y_scale);
    case Kind::Tabulated: {
      auto pts = points_;
      for (auto& [x, y] : pts) {
        x /= x_scale;
        y /= y_scale;
      }
      return tabulated(std::move(pts));
    }
  }
  return *this;
}

bool Coefficient::unbounded_above() const {
  return kind_ == Kind::Linear && value_ > 0.0;
}

}  // namespace mbdiff
