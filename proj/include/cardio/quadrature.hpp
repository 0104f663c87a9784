#pragma once

#include <array>
#include <vector>

namespace cardio {

/// Barycentric points and weights on the reference triangle; the weights
/// sum to the reference area 1/2.
struct TriangleQuadrature {
  int degree;
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
};

/// Points in [0,1] and weights summing to 1 on the reference edge.
struct EdgeQuadrature {
  int degree;
  std::vector<double> points;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
};

/// Rules of degree 1, 2 and 4 are available; any other degree up to 4
/// returns the cheapest rule that is at least that exact.
const TriangleQuadrature& triangle_rule(int degree);

/// The 6-point symmetric degree-4 rule used for all assembly.
inline const TriangleQuadrature& default_triangle_rule() { return triangle_rule(4); }

/// 3-point Gauss-Legendre, exact to degree 5.
const EdgeQuadrature& edge_rule();

}  // namespace cardio
