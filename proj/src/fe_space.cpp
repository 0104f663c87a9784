#include "cardio/fe_space.hpp"

#include <stdexcept>

namespace cardio {

ElementGeometry::ElementGeometry(const std::array<Point, 3>& c) : corners(c) {
  const Point e1 = c[1] - c[0];
  const Point e2 = c[2] - c[0];
  const double j = cross(e1, e2);
  area = 0.5 * j;
  // grad(lambda_1) = (e2.y, -e2.x)/J, grad(lambda_2) = (-e1.y, e1.x)/J.
  grad_bary[1] = {e2.y / j, -e2.x / j};
  grad_bary[2] = {-e1.y / j, e1.x / j};
  grad_bary[0] = {-grad_bary[1].x - grad_bary[2].x, -grad_bary[1].y - grad_bary[2].y};
}

Point ElementGeometry::map(const std::array<double, 3>& b) const {
  return {b[0] * corners[0].x + b[1] * corners[1].x + b[2] * corners[2].x,
          b[0] * corners[0].y + b[1] * corners[1].y + b[2] * corners[2].y};
}

namespace basis {

int nodes(int degree) { return degree == 1 ? 3 : 6; }

void values(int degree, const std::array<double, 3>& l, std::span<double> out) {
  if (degree == 1) {
    out[0] = l[0];
    out[1] = l[1];
    out[2] = l[2];
    return;
  }
  for (int i = 0; i < 3; ++i) out[i] = l[i] * (2.0 * l[i] - 1.0);
  out[3] = 4.0 * l[0] * l[1];
  out[4] = 4.0 * l[1] * l[2];
  out[5] = 4.0 * l[2] * l[0];
}

void gradients(int degree, const std::array<double, 3>& l, const ElementGeometry& geo, std::span<Point> out) {
  const auto& g = geo.grad_bary;
  if (degree == 1) {
    out[0] = g[0];
    out[1] = g[1];
    out[2] = g[2];
    return;
  }
  for (int i = 0; i < 3; ++i) out[i] = (4.0 * l[i] - 1.0) * g[i];
  auto edge = [&](int i, int j) { return 4.0 * (l[i] * g[j] + l[j] * g[i]); };
  out[3] = edge(0, 1);
  out[4] = edge(1, 2);
  out[5] = edge(2, 0);
}

}  // namespace basis

FeSpace::FeSpace(MeshPtr mesh, int degree, ValueRank rank) : mesh_(std::move(mesh)), degree_(degree), rank_(rank) {
  if (!mesh_) throw std::invalid_argument("FeSpace needs a mesh");
  if (degree != 1 && degree != 2) throw std::invalid_argument("FeSpace degree must be 1 or 2");
  scalar_dofs_ = mesh_->num_vertices() + (degree == 2 ? mesh_->num_edges() : 0);
}

std::array<Index, 6> FeSpace::element_nodes(Index t) const {
  const auto& tri = mesh_->triangles()[t];
  std::array<Index, 6> out{tri[0], tri[1], tri[2], -1, -1, -1};
  if (degree_ == 2) {
    const auto nv = static_cast<Index>(mesh_->num_vertices());
    const auto& te = mesh_->triangle_edges(t);
    for (int k = 0; k < 3; ++k) out[3 + k] = nv + te[k];
  }
  return out;
}

Point FeSpace::node_coordinate(Index node) const {
  const auto nv = static_cast<Index>(mesh_->num_vertices());
  if (node < nv) return mesh_->vertex(node);
  const auto& e = mesh_->edges()[node - nv];
  return 0.5 * (mesh_->vertex(e[0]) + mesh_->vertex(e[1]));
}

bool FeSpace::node_on_boundary(Index node) const {
  const auto nv = static_cast<Index>(mesh_->num_vertices());
  if (node < nv) return mesh_->boundary_vertex_flags()[node];
  return mesh_->edge_on_boundary(node - nv);
}

double evaluate(const FeSpace& space, std::span<const double> coeffs, Index t, const std::array<double, 3>& bary,
                int component) {
  std::array<double, 6> phi{};
  basis::values(space.degree(), bary, phi);
  const auto nodes = space.element_nodes(t);
  const std::size_t off = static_cast<std::size_t>(component) * space.scalar_dof_count();
  double s = 0.0;
  for (int a = 0; a < space.nodes_per_element(); ++a) s += phi[a] * coeffs[off + nodes[a]];
  return s;
}

Point evaluate_gradient(const FeSpace& space, std::span<const double> coeffs, Index t,
                        const std::array<double, 3>& bary, int component) {
  const ElementGeometry geo(space.mesh().corners(t));
  std::array<Point, 6> grad{};
  basis::gradients(space.degree(), bary, geo, grad);
  const auto nodes = space.element_nodes(t);
  const std::size_t off = static_cast<std::size_t>(component) * space.scalar_dof_count();
  Point s{};
  for (int a = 0; a < space.nodes_per_element(); ++a) s = s + coeffs[off + nodes[a]] * grad[a];
  return s;
}

}  // namespace cardio
