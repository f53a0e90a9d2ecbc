#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace mbdiff {

/// Partition of the unit interval: strictly increasing nodes with the
/// endpoints exactly 0 and 1.
class Mesh1D {
public:
  explicit Mesh1D(std::vector<double> nodes);

  /// Uniform mesh with nodes i/(n_nodes-1). Requires n_nodes >= 2.
  static Mesh1D uniform(std::size_t n_nodes);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t element_count() const { return nodes_.size() - 1; }
  std::span<const double> nodes() const { return nodes_; }
  double node(std::size_t i) const { return nodes_[i]; }
  std::span<const double> element_sizes() const { return element_sizes_; }
  double element_size(std::size_t e) const { return element_sizes_[e]; }

  /// Largest element size k.
  double max_element_size() const { return k_max_; }

  /// Index of the element whose closed interval contains y. A y equal to an
  /// interior node resolves to the element on its right, so the node value
  /// itself is the left endpoint; y = 1 resolves to the last element.
  std::size_t element_containing(double y) const;

private:
  std::vector<double> nodes_;
  std::vector<double> element_sizes_;
  double k_max_ = 0.0;
};

using MeshPtr = std::shared_ptr<const Mesh1D>;

/// Continuous piecewise-linear function, one coefficient per mesh node.
class P1Function {
public:
  P1Function(MeshPtr mesh, std::vector<double> coeffs);

  const Mesh1D& mesh() const { return *mesh_; }
  const MeshPtr& mesh_ptr() const { return mesh_; }
  std::span<const double> coeffs() const { return coeffs_; }

  /// Point evaluation on [0, 1]; exact nodal values at nodes.
  double operator()(double y) const;

private:
  MeshPtr mesh_;
  std::vector<double> coeffs_;
};

/// Lagrange interpolant: nodal values of f on the mesh. Rejects non-finite
/// nodal values.
P1Function interpolate(const std::function<double(double)>& f, MeshPtr mesh);

double l2_norm(const P1Function& g);
double h1_seminorm(const P1Function& g);

/// Exact L2 norm of g1 - g2, computed by merging both node sets and
/// integrating the piecewise-linear difference per merged element. The two
/// meshes need not be nested.
double l2_diff(const P1Function& g1, const P1Function& g2);
double h1_semi_diff(const P1Function& g1, const P1Function& g2);

// Span-level variants used by the streaming comparison loops.
double l2_diff(const Mesh1D& ma, std::span<const double> ca,
               const Mesh1D& mb, std::span<const double> cb);
double h1_semi_diff(const Mesh1D& ma, std::span<const double> ca,
                    const Mesh1D& mb, std::span<const double> cb);
double l2_norm(const Mesh1D& m, std::span<const double> coeffs);
double h1_seminorm(const Mesh1D& m, std::span<const double> coeffs);

}  // namespace mbdiff
