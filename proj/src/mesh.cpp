#include "mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace mbdiff {

Mesh1D::Mesh1D(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) throw std::invalid_argument("mesh needs at least 2 nodes");
  if (nodes_.front() != 0.0 || nodes_.back() != 1.0)
    throw std::invalid_argument("mesh endpoints must be exactly 0 and 1");
  element_sizes_.resize(nodes_.size() - 1);
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
    const double k = nodes_[i + 1] - nodes_[i];
    if (!(k > 0.0)) throw std::invalid_argument("mesh nodes must be strictly increasing");
    element_sizes_[i] = k;
    k_max_ = std::max(k_max_, k);
  }
}

Mesh1D Mesh1D::uniform(std::size_t n_nodes) {
  if (n_nodes < 2)
    throw std::invalid_argument("uniform mesh needs n_nodes >= 2, got " +
                                std::to_string(n_nodes));
  std::vector<double> nodes(n_nodes);
  const double denom = static_cast<double>(n_nodes - 1);
  for (std::size_t i = 0; i < n_nodes; ++i)
    nodes[i] = static_cast<double>(i) / denom;
  nodes.back() = 1.0;
  return Mesh1D(std::move(nodes));
}

std::size_t Mesh1D::element_containing(double y) const {
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), y);
  std::size_t e = static_cast<std::size_t>(it - nodes_.begin());
  if (e == 0) return 0;
  e -= 1;
  return std::min(e, element_count() - 1);
}

P1Function::P1Function(MeshPtr mesh, std::vector<double> coeffs)
    : mesh_(std::move(mesh)), coeffs_(std::move(coeffs)) {
  if (!mesh_) throw std::invalid_argument("P1Function requires a mesh");
  if (coeffs_.size() != mesh_->node_count())
    throw std::invalid_argument("coefficient count must equal node count");
}

double P1Function::operator()(double y) const {
  if (!(y >= 0.0 && y <= 1.0))
    throw std::domain_error("P1 evaluation outside [0, 1]: " + std::to_string(y));
  const std::size_t e = mesh_->element_containing(y);
  const double yl = mesh_->node(e);
  const double yr = mesh_->node(e + 1);
  if (y == yl) return coeffs_[e];
  if (y == yr) return coeffs_[e + 1];
  const double t = (y - yl) / (yr - yl);
  return coeffs_[e] + t * (coeffs_[e + 1] - coeffs_[e]);
}

P1Function interpolate(const std::function<double(double)>& f, MeshPtr mesh) {
  if (!mesh) throw std::invalid_argument("interpolate requires a mesh");
  std::vector<double> coeffs(mesh->node_count());
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    coeffs[i] = f(mesh->node(i));
    if (!std::isfinite(coeffs[i]))
      throw std::domain_error("non-finite nodal value at y = " +
                              std::to_string(mesh->node(i)));
  }
  return P1Function(std::move(mesh), std::move(coeffs));
}

namespace {

// Exact integral of the square of a linear function with endpoint values
// (vl, vr) over an interval of length len.
double linear_sq_integral(double vl, double vr, double len) {
  return len * (vl * vl + vl * vr + vr * vr) / 3.0;
}

struct ElementCursor {
  const Mesh1D& mesh;
  std::span<const double> coeffs;
  std::size_t e = 0;

  double right_node() const { return mesh.node(e + 1); }
  // Linear-extension evaluation from within the current element.
  double value_at(double y) const {
    const double yl = mesh.node(e);
    const double k = mesh.element_size(e);
    const double t = (y - yl) / k;
    return coeffs[e] + t * (coeffs[e + 1] - coeffs[e]);
  }
  double slope() const {
    return (coeffs[e + 1] - coeffs[e]) / mesh.element_size(e);
  }
  void advance_past(double y) {
    while (e + 1 < mesh.element_count() && mesh.node(e + 1) <= y) ++e;
  }
};

// Walks the merged node set of two meshes and accumulates a per-interval
// quantity supplied by `term(a, b, ca, cb)`.
template <typename Term>
double merged_accumulate(const Mesh1D& ma, std::span<const double> coeffs_a,
                         const Mesh1D& mb, std::span<const double> coeffs_b,
                         Term&& term) {
  if (coeffs_a.size() != ma.node_count() || coeffs_b.size() != mb.node_count())
    throw std::invalid_argument("coefficient count must equal node count");
  ElementCursor ca{ma, coeffs_a};
  ElementCursor cb{mb, coeffs_b};
  double acc = 0.0;
  double y = 0.0;
  while (y < 1.0) {
    const double next = std::min(ca.right_node(), cb.right_node());
    acc += term(y, next, ca, cb);
    y = next;
    ca.advance_past(y);
    cb.advance_past(y);
  }
  return acc;
}

}  // namespace

double l2_diff(const Mesh1D& ma, std::span<const double> coeffs_a,
               const Mesh1D& mb, std::span<const double> coeffs_b) {
  const double acc = merged_accumulate(
      ma, coeffs_a, mb, coeffs_b,
      [](double a, double b, const ElementCursor& ca, const ElementCursor& cb) {
        const double dl = ca.value_at(a) - cb.value_at(a);
        const double dr = ca.value_at(b) - cb.value_at(b);
        return linear_sq_integral(dl, dr, b - a);
      });
  return std::sqrt(acc);
}

double h1_semi_diff(const Mesh1D& ma, std::span<const double> coeffs_a,
                    const Mesh1D& mb, std::span<const double> coeffs_b) {
  const double acc = merged_accumulate(
      ma, coeffs_a, mb, coeffs_b,
      [](double a, double b, const ElementCursor& ca, const ElementCursor& cb) {
        const double ds = ca.slope() - cb.slope();
        return (b - a) * ds * ds;
      });
  return std::sqrt(acc);
}

double l2_diff(const P1Function& g1, const P1Function& g2) {
  return l2_diff(g1.mesh(), g1.coeffs(), g2.mesh(), g2.coeffs());
}

double h1_semi_diff(const P1Function& g1, const P1Function& g2) {
  return h1_semi_diff(g1.mesh(), g1.coeffs(), g2.mesh(), g2.coeffs());
}

double l2_norm(const Mesh1D& m, std::span<const double> coeffs) {
  if (coeffs.size() != m.node_count())
    throw std::invalid_argument("coefficient count must equal node count");
  double acc = 0.0;
  for (std::size_t e = 0; e < m.element_count(); ++e)
    acc += linear_sq_integral(coeffs[e], coeffs[e + 1], m.element_size(e));
  return std::sqrt(acc);
}

double h1_seminorm(const Mesh1D& m, std::span<const double> coeffs) {
  if (coeffs.size() != m.node_count())
    throw std::invalid_argument("coefficient count must equal node count");
  double acc = 0.0;
  for (std::size_t e = 0; e < m.element_count(); ++e) {
    const double s = (coeffs[e + 1] - coeffs[e]) / m.element_size(e);
    acc += m.element_size(e) * s * s;
  }
  return std::sqrt(acc);
}

double l2_norm(const P1Function& g) { return l2_norm(g.mesh(), g.coeffs()); }
double h1_seminorm(const P1Function& g) { return h1_seminorm(g.mesh(), g.coeffs()); }

}  // namespace mbdiff
