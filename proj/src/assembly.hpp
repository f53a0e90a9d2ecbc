#pragma once

#include <cstddef>
#include <vector>

#include "linalg.hpp"
#include "mesh.hpp"

namespace mbdiff {

/// Global P1 matrices of the fixed-domain weak form:
///   mass        M_ij = int phi_j phi_i dy
///   stiffness   S_ij = int phi_j' phi_i' dy
///   convection  C_ij = int y phi_j' phi_i dy   (row i tests, column j trials)
/// Mass and stiffness are symmetric; stiffness and convection rows sum to
/// zero because the hat functions partition unity.
struct ElementMatrices {
  TridiagonalMatrix mass;
  TridiagonalMatrix stiffness;
  TridiagonalMatrix convection;
};

/// Assembles all three matrices with 2-point Gauss quadrature per element,
/// which is exact for the cubic integrands involved.
ElementMatrices assemble(const Mesh1D& mesh);

/// Right-hand-side boundary contributions of one implicit step. Entry 0
/// carries the influx term (Bi / w_next) * (b - H u(0)); entry n-1 carries
/// the moving-end drag -(dw / w_next) * u(1); everything else is zero. The
/// signs are such that the vector adds to the right-hand side.
std::vector<double> boundary_load(double biot, double boundary_value, double henry,
                                  double u_at_0, double w_next, double dw,
                                  double u_at_1, std::size_t n_nodes);

}  // namespace mbdiff
