#include "assembly.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace mbdiff {

namespace {

TridiagonalMatrix zeros(std::size_t n) {
  return {std::vector<double>(n - 1, 0.0), std::vector<double>(n, 0.0),
          std::vector<double>(n - 1, 0.0)};
}

// Adds a 2x2 element block for the element between nodes e and e+1.
void scatter(TridiagonalMatrix& m, std::size_t e, const std::array<double, 4>& block) {
  m.diag[e] += block[0];
  m.upper[e] += block[1];
  m.lower[e] += block[2];
  m.diag[e + 1] += block[3];
}

}  // namespace

ElementMatrices assemble(const Mesh1D& mesh) {
  const std::size_t n = mesh.node_count();
  ElementMatrices out{zeros(n), zeros(n), zeros(n)};

  const double g = 1.0 / std::sqrt(3.0);
  for (std::size_t e = 0; e < mesh.element_count(); ++e) {
    const double yl = mesh.node(e);
    const double k = mesh.element_size(e);
    const double mid = yl + 0.5 * k;
    const double dphi_l = -1.0 / k;
    const double dphi_r = 1.0 / k;

    std::array<double, 4> mass{};
    std::array<double, 4> stiffness{};
    std::array<double, 4> convection{};
    for (const double xi : {-g, g}) {
      const double y = mid + 0.5 * k * xi;
      const double w = 0.5 * k;
      const double phi_l = (yl + k - y) / k;
      const double phi_r = (y - yl) / k;
      const std::array<double, 2> phi{phi_l, phi_r};
      const std::array<double, 2> dphi{dphi_l, dphi_r};
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          mass[2 * a + b] += w * phi[a] * phi[b];
          stiffness[2 * a + b] += w * dphi[a] * dphi[b];
          convection[2 * a + b] += w * y * dphi[b] * phi[a];
        }
      }
    }
    scatter(out.mass, e, mass);
    scatter(out.stiffness, e, stiffness);
    scatter(out.convection, e, convection);
  }
  return out;
}

std::vector<double> boundary_load(double biot, double boundary_value, double henry,
                                  double u_at_0, double w_next, double dw,
                                  double u_at_1, std::size_t n_nodes) {
  if (!(w_next > 0.0))
    throw std::invalid_argument("boundary_load requires w_next > 0, got " +
                                std::to_string(w_next));
  if (n_nodes < 2) throw std::invalid_argument("boundary_load needs n_nodes >= 2");
  std::vector<double> load(n_nodes, 0.0);
  load.front() = biot / w_next * (boundary_value - henry * u_at_0);
  load.back() = -(dw / w_next) * u_at_1;
  return load;
}

}  // namespace mbdiff
