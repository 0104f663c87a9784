#pragma once

// Small fixed-size 2D vector and tensor types used by the pointwise
// constitutive laws and the element kernels.

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace cardio {

using Index = std::int32_t;
using Vector = std::vector<double>;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend bool operator==(const Point&, const Point&) = default;
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }

/// General 2x2 matrix, row major: [[xx, xy], [yx, yy]].
struct Mat2 {
  double xx = 0.0, xy = 0.0, yx = 0.0, yy = 0.0;

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static Mat2 diag(double a, double b) { return {a, 0.0, 0.0, b}; }

  double det() const { return xx * yy - xy * yx; }
  double trace() const { return xx + yy; }
  double frobenius() const { return std::sqrt(xx * xx + xy * xy + yx * yx + yy * yy); }
  Mat2 transpose() const { return {xx, yx, xy, yy}; }
  Mat2 inverse() const {
    const double d = det();
    return {yy / d, -xy / d, -yx / d, xx / d};
  }
  Point apply(Point p) const { return {xx * p.x + xy * p.y, yx * p.x + yy * p.y}; }

  friend Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {a.xx * b.xx + a.xy * b.yx, a.xx * b.xy + a.xy * b.yy,
            a.yx * b.xx + a.yy * b.yx, a.yx * b.xy + a.yy * b.yy};
  }
  friend Mat2 operator+(const Mat2& a, const Mat2& b) {
    return {a.xx + b.xx, a.xy + b.xy, a.yx + b.yx, a.yy + b.yy};
  }
  friend Mat2 operator*(double s, const Mat2& a) { return {s * a.xx, s * a.xy, s * a.yx, s * a.yy}; }
  friend bool operator==(const Mat2&, const Mat2&) = default;
};

/// Symmetric 2x2 tensor [[xx, xy], [xy, yy]].
struct Sym2 {
  double xx = 0.0, xy = 0.0, yy = 0.0;

  static Sym2 identity() { return {1.0, 0.0, 1.0}; }
  static Sym2 diag(double a, double b) { return {a, 0.0, b}; }
  /// Symmetric part of a general matrix.
  static Sym2 from(const Mat2& m) { return {m.xx, 0.5 * (m.xy + m.yx), m.yy}; }

  Mat2 full() const { return {xx, xy, xy, yy}; }
  double det() const { return xx * yy - xy * xy; }
  double trace() const { return xx + yy; }
  Point apply(Point p) const { return {xx * p.x + xy * p.y, xy * p.x + yy * p.y}; }

  /// Eigenvalues in ascending order.
  std::array<double, 2> eigenvalues() const {
    const double m = 0.5 * (xx + yy);
    const double r = std::hypot(0.5 * (xx - yy), xy);
    return {m - r, m + r};
  }
  bool is_spd() const { return xx > 0.0 && det() > 0.0 && std::isfinite(xx + xy + yy); }

  friend Sym2 operator*(double s, const Sym2& a) { return {s * a.xx, s * a.xy, s * a.yy}; }
  friend Sym2 operator+(const Sym2& a, const Sym2& b) { return {a.xx + b.xx, a.xy + b.xy, a.yy + b.yy}; }
  friend bool operator==(const Sym2&, const Sym2&) = default;
};

/// Q S Q^T for symmetric S.
inline Sym2 congruence(const Mat2& q, const Sym2& s) {
  const Mat2 r = q * s.full() * q.transpose();
  return Sym2::from(r);
}

/// Double contraction A:B.
inline double contract(const Mat2& a, const Mat2& b) {
  return a.xx * b.xx + a.xy * b.xy + a.yx * b.yx + a.yy * b.yy;
}

}  // namespace cardio
