#pragma once

#include <array>
#include <span>

#include "cardio/mesh.hpp"
#include "cardio/tensor2.hpp"

namespace cardio {

enum class ValueRank { scalar, vector };

/// Affine map data of one triangle: area and constant barycentric gradients.
struct ElementGeometry {
  std::array<Point, 3> corners;
  double area;
  std::array<Point, 3> grad_bary;

  explicit ElementGeometry(const std::array<Point, 3>& c);
  Point map(const std::array<double, 3>& bary) const;
};

/// Lagrange P1/P2 basis on a triangle in barycentric coordinates.
/// P2 node order: vertices 0,1,2 then midpoints of edges (0,1), (1,2), (2,0).
namespace basis {
int nodes(int degree);
void values(int degree, const std::array<double, 3>& bary, std::span<double> out);
void gradients(int degree, const std::array<double, 3>& bary, const ElementGeometry& geo, std::span<Point> out);
}  // namespace basis

/// Continuous Lagrange space of degree 1 or 2, scalar or 2-vector valued.
/// Vector dofs are component-blocked: dof = component * scalar_dofs + node.
class FeSpace {
 public:
  FeSpace(MeshPtr mesh, int degree, ValueRank rank);

  const TriMesh& mesh() const { return *mesh_; }
  const MeshPtr& mesh_ptr() const { return mesh_; }
  int degree() const { return degree_; }
  ValueRank rank() const { return rank_; }
  int components() const { return rank_ == ValueRank::vector ? 2 : 1; }
  int nodes_per_element() const { return basis::nodes(degree_); }

  std::size_t scalar_dof_count() const { return scalar_dofs_; }
  std::size_t dof_count() const { return scalar_dofs_ * static_cast<std::size_t>(components()); }

  /// Scalar node indices of element t (first nodes_per_element() entries used).
  std::array<Index, 6> element_nodes(Index t) const;
  Point node_coordinate(Index node) const;
  bool node_on_boundary(Index node) const;

  /// Nodal interpolant of a scalar function (scalar spaces) or of each
  /// component (vector spaces, f returns the component value).
  Vector interpolate(const auto& f) const {
    Vector out(dof_count());
    for (int c = 0; c < components(); ++c) {
      for (std::size_t n = 0; n < scalar_dofs_; ++n) {
        const Point p = node_coordinate(static_cast<Index>(n));
        if constexpr (requires { f(p); }) {
          out[c * scalar_dofs_ + n] = f(p);
        } else {
          out[c * scalar_dofs_ + n] = f(p, c);
        }
      }
    }
    return out;
  }

 private:
  MeshPtr mesh_;
  int degree_;
  ValueRank rank_;
  std::size_t scalar_dofs_;
};

/// Evaluates a scalar finite-element function at barycentric point `bary`
/// of element t (component c for vector spaces).
double evaluate(const FeSpace& space, std::span<const double> coeffs, Index t, const std::array<double, 3>& bary,
                int component = 0);
Point evaluate_gradient(const FeSpace& space, std::span<const double> coeffs, Index t,
                        const std::array<double, 3>& bary, int component = 0);

}  // namespace cardio
