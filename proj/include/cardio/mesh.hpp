#pragma once

#include <array>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cardio/tensor2.hpp"

namespace cardio {

/// Raised for malformed mesh text (with 1-based line number) or for
/// triangulations that violate the topology invariants.
class MeshError : public std::runtime_error {
 public:
  explicit MeshError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

using Triangle = std::array<Index, 3>;
using Edge = std::array<Index, 2>;

/// Boundary edge oriented counterclockwise with respect to its owning
/// triangle, so the outward normal is (dy, -dx) / length.
struct BoundaryEdge {
  Edge vertices;
  Index triangle;
};

/// Result of point location: owning triangle and barycentric weights.
struct Location {
  Index triangle;
  std::array<double, 3> bary;
};

/// Immutable 2D triangulation. Local edge k of a triangle joins its local
/// vertices k and (k+1) mod 3.
class TriMesh {
 public:
  /// Validates positive orientation, index ranges and edge manifoldness.
  TriMesh(std::vector<Point> vertices, std::vector<Triangle> triangles);

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_triangles() const { return triangles_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::array<Index, 3>& triangle_edges(Index t) const { return triangle_edges_[t]; }
  const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_edges_; }
  const std::vector<bool>& boundary_vertex_flags() const { return on_boundary_; }
  bool edge_on_boundary(Index e) const { return edge_on_boundary_[e]; }

  Point vertex(Index i) const { return vertices_[i]; }
  std::array<Point, 3> corners(Index t) const;
  double area(Index t) const;
  double total_area() const;
  double boundary_length() const;
  Point centroid(Index t) const;

  /// Finds a triangle containing p (within tol in barycentric terms).
  std::optional<Location> locate(Point p, double tol = 1e-10) const;

 private:
  std::vector<Point> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<Edge> edges_;
  std::vector<std::array<Index, 3>> triangle_edges_;
  std::vector<BoundaryEdge> boundary_edges_;
  std::vector<bool> on_boundary_;
  std::vector<bool> edge_on_boundary_;
};

using MeshPtr = std::shared_ptr<const TriMesh>;

/// (nx+1)(ny+1) vertices on [0,1]^2, each cell split along its
/// lower-left to upper-right diagonal.
TriMesh structured_unit_square(int nx, int ny);

/// Parses the plain-text format: `NV NT`, NV lines `x y`, NT lines `i j k`.
/// Blank lines and `#` comments are ignored.
TriMesh load_mesh(std::string_view text);
TriMesh load_mesh_file(const std::string& path);
std::string serialize_mesh(const TriMesh& mesh);

std::vector<BoundaryEdge> boundary_edges(const TriMesh& mesh);

/// Fiber direction d_l and cross-fiber direction d_t of one element.
struct FiberFrame {
  Point d_l{1.0, 0.0};
  Point d_t{0.0, 1.0};

  /// Rotation matrix whose columns are d_l and d_t.
  Mat2 rotation() const { return {d_l.x, d_t.x, d_l.y, d_t.y}; }
};

class FiberField {
 public:
  static FiberField axis_aligned(std::size_t n_elements);
  /// Every element gets d_l = (cos a, sin a), d_t = (-sin a, cos a).
  static FiberField rotated(std::size_t n_elements, double angle);
  explicit FiberField(std::vector<FiberFrame> frames) : frames_(std::move(frames)) {}

  std::size_t size() const { return frames_.size(); }
  const FiberFrame& operator[](std::size_t t) const { return frames_[t]; }

 private:
  std::vector<FiberFrame> frames_;
};

}  // namespace cardio
