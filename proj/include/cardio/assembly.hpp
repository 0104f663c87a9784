#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "cardio/fe_space.hpp"
#include "cardio/quadrature.hpp"
#include "cardio/sparse.hpp"

namespace cardio {

/// Values sampled at the points of the default (degree-4) quadrature rule,
/// element-major: entry t * rule.size() + q.
using TensorField = std::vector<Sym2>;
using GradientField = std::vector<Mat2>;
using ScalarField = std::vector<double>;

/// Thrown when a diffusion coefficient is not symmetric positive definite.
class CoefficientError : public std::domain_error {
 public:
  CoefficientError(Index element, const std::string& what)
      : std::domain_error("element " + std::to_string(element) + ": " + what), element_(element) {}
  Index element() const { return element_; }

 private:
  Index element_;
};

std::size_t quadrature_size(const TriMesh& mesh);
std::vector<Point> quadrature_points(const TriMesh& mesh);
TensorField constant_tensor_field(const TriMesh& mesh, const Sym2& value);

/// Consistent mass matrix; block diagonal over components for vector spaces.
SparseMatrix assemble_mass(const FeSpace& space);

/// a(u, v) = sum_c int grad(u_c) . K grad(v_c).
SparseMatrix assemble_stiffness(const FeSpace& space, const TensorField& coeff);
SparseMatrix assemble_stiffness(const FeSpace& space, const Sym2& coeff);

/// alpha * int_{boundary} u . v dS
SparseMatrix assemble_boundary_mass(const FeSpace& space, double alpha);

/// Rows: pressure dofs, columns: velocity dofs; entry int q d(phi_c)/dx_c.
SparseMatrix assemble_divergence(const FeSpace& velocity, const FeSpace& pressure);

/// int f phi for a scalar space, f given at the default quadrature points.
Vector assemble_load(const FeSpace& space, std::span<const double> integrand);
Vector assemble_load(const FeSpace& space, const std::function<double(Point)>& f);
/// int f . phi for a vector space.
Vector assemble_vector_load(const FeSpace& space, std::span<const Point> integrand);
Vector assemble_vector_load(const FeSpace& space, const std::function<Point(Point)>& f);

/// int_{boundary} h(x, n) . phi dS for a vector space (n is the outward unit normal).
Vector assemble_boundary_vector_load(const FeSpace& space, const std::function<Point(Point, Point)>& h);
/// Same, with h(edge, s, n) given the boundary edge and the edge parameter s
/// in [0, 1] from edge.vertices[0] to edge.vertices[1].
Vector assemble_boundary_vector_load(const FeSpace& space,
                                     const std::function<Point(const BoundaryEdge&, double, Point)>& h);

/// Gradient of a vector field at every default quadrature point; row c of
/// each matrix is grad(u_c).
GradientField field_gradients(const FeSpace& space, std::span<const double> coeffs);
/// Scalar field values at every default quadrature point.
ScalarField field_values(const FeSpace& space, std::span<const double> coeffs);

}  // namespace cardio
