#include "cardio/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace cardio {

namespace {

TriangleQuadrature make_degree1() { return {1, {{1.0 / 3, 1.0 / 3, 1.0 / 3}}, {0.5}}; }

TriangleQuadrature make_degree2() {
  const double a = 2.0 / 3, b = 1.0 / 6, w = 1.0 / 6;
  return {2, {{a, b, b}, {b, a, b}, {b, b, a}}, {w, w, w}};
}

// Dunavant degree-4, two orbits of three points.
TriangleQuadrature make_degree4() {
  const double a1 = 0.445948490915964886, b1 = 1.0 - 2.0 * a1, w1 = 0.223381589678011466 / 2.0;
  const double a2 = 0.091576213509770743, b2 = 1.0 - 2.0 * a2, w2 = 0.109951743655321868 / 2.0;
  return {4,
          {{b1, a1, a1}, {a1, b1, a1}, {a1, a1, b1}, {b2, a2, a2}, {a2, b2, a2}, {a2, a2, b2}},
          {w1, w1, w1, w2, w2, w2}};
}

}  // namespace

const TriangleQuadrature& triangle_rule(int degree) {
  static const TriangleQuadrature d1 = make_degree1();
  static const TriangleQuadrature d2 = make_degree2();
  static const TriangleQuadrature d4 = make_degree4();
  if (degree <= 1) return d1;
  if (degree == 2) return d2;
  if (degree <= 4) return d4;
  throw std::invalid_argument("no triangle rule of degree " + std::to_string(degree));
}

const EdgeQuadrature& edge_rule() {
  static const EdgeQuadrature rule = [] {
    const double s = std::sqrt(3.0 / 5.0);
    return EdgeQuadrature{5, {0.5 * (1.0 - s), 0.5, 0.5 * (1.0 + s)}, {5.0 / 18, 8.0 / 18, 5.0 / 18}};
  }();
  return rule;
}

}  // namespace cardio
