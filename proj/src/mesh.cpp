#include "cardio/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace cardio {

namespace {

std::uint64_t edge_key(Index a, Index b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32) | hi;
}

double signed_area(Point a, Point b, Point c) { return 0.5 * cross(b - a, c - a); }

}  // namespace

TriMesh::TriMesh(std::vector<Point> vertices, std::vector<Triangle> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  const auto nv = static_cast<Index>(vertices_.size());
  if (vertices_.empty() || triangles_.empty()) throw MeshError("mesh has no vertices or no triangles");

  double xmin = std::numeric_limits<double>::max(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (const auto& p : vertices_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw MeshError("non-finite vertex coordinate");
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const double scale = std::max({xmax - xmin, ymax - ymin, 1e-300});
  const double area_floor = 1e-14 * scale * scale;

  std::unordered_map<std::uint64_t, Index> edge_ids;
  std::vector<int> edge_use;
  std::vector<Index> edge_owner;
  std::vector<int> edge_local;
  triangle_edges_.resize(triangles_.size());

  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto& tri = triangles_[t];
    for (Index v : tri) {
      if (v < 0 || v >= nv) throw MeshError("triangle " + std::to_string(t) + " has vertex index out of range");
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
      throw MeshError("triangle " + std::to_string(t) + " repeats a vertex");
    }
    const double a = signed_area(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
    if (!(a > area_floor)) {
      throw MeshError("triangle " + std::to_string(t) + " has non-positive signed area " + std::to_string(a));
    }
    for (int k = 0; k < 3; ++k) {
      const Index a0 = tri[k], a1 = tri[(k + 1) % 3];
      auto [it, inserted] = edge_ids.try_emplace(edge_key(a0, a1), static_cast<Index>(edges_.size()));
      if (inserted) {
        edges_.push_back({std::min(a0, a1), std::max(a0, a1)});
        edge_use.push_back(0);
        edge_owner.push_back(static_cast<Index>(t));
        edge_local.push_back(k);
      }
      const Index e = it->second;
      if (++edge_use[e] > 2) {
        throw MeshError("edge (" + std::to_string(a0) + "," + std::to_string(a1) + ") is shared by more than two triangles");
      }
      triangle_edges_[t][k] = e;
    }
  }

  on_boundary_.assign(vertices_.size(), false);
  edge_on_boundary_.assign(edges_.size(), false);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (edge_use[e] != 1) continue;
    edge_on_boundary_[e] = true;
    const auto& tri = triangles_[edge_owner[e]];
    const int k = edge_local[e];
    boundary_edges_.push_back({{tri[k], tri[(k + 1) % 3]}, edge_owner[e]});
    on_boundary_[tri[k]] = true;
    on_boundary_[tri[(k + 1) % 3]] = true;
  }
}

std::array<Point, 3> TriMesh::corners(Index t) const {
  const auto& tri = triangles_[t];
  return {vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]};
}

double TriMesh::area(Index t) const {
  const auto c = corners(t);
  return signed_area(c[0], c[1], c[2]);
}

double TriMesh::total_area() const {
  double s = 0.0;
  for (std::size_t t = 0; t < triangles_.size(); ++t) s += area(static_cast<Index>(t));
  return s;
}

double TriMesh::boundary_length() const {
  double s = 0.0;
  for (const auto& be : boundary_edges_) s += norm(vertices_[be.vertices[1]] - vertices_[be.vertices[0]]);
  return s;
}

Point TriMesh::centroid(Index t) const {
  const auto c = corners(t);
  return {(c[0].x + c[1].x + c[2].x) / 3.0, (c[0].y + c[1].y + c[2].y) / 3.0};
}

std::optional<Location> TriMesh::locate(Point p, double tol) const {
  std::optional<Location> best;
  double best_min = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto c = corners(static_cast<Index>(t));
    const double a = signed_area(c[0], c[1], c[2]);
    const std::array<double, 3> bary = {signed_area(p, c[1], c[2]) / a, signed_area(c[0], p, c[2]) / a,
                                        signed_area(c[0], c[1], p) / a};
    const double m = std::min({bary[0], bary[1], bary[2]});
    if (m > best_min) {
      best_min = m;
      best = Location{static_cast<Index>(t), bary};
    }
    if (m >= 0.0) break;
  }
  if (!best || best_min < -tol) return std::nullopt;
  return best;
}

TriMesh structured_unit_square(int nx, int ny) {
  if (nx < 1 || ny < 1) throw MeshError("structured mesh needs nx, ny >= 1");
  std::vector<Point> verts;
  verts.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      verts.push_back({static_cast<double>(i) / nx, static_cast<double>(j) / ny});
    }
  }
  auto id = [nx](int i, int j) { return static_cast<Index>(j * (nx + 1) + i); };
  std::vector<Triangle> tris;
  tris.reserve(static_cast<std::size_t>(2 * nx * ny));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      tris.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      tris.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return TriMesh(std::move(verts), std::move(tris));
}

namespace {

// Splits the text into meaningful lines, remembering original line numbers.
std::vector<std::pair<int, std::string>> content_lines(std::string_view text) {
  std::vector<std::pair<int, std::string>> out;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    ++line_no;
    std::string line(text.substr(pos, end - pos));
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") != std::string::npos) out.emplace_back(line_no, std::move(line));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return out;
}

template <typename T>
std::vector<T> parse_fields(const std::string& line, int line_no, std::size_t expected) {
  std::istringstream in(line);
  std::vector<T> vals;
  std::string tok;
  while (in >> tok) {
    T v{};
    const char* b = tok.data();
    const char* e = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || ptr != e) throw MeshError("cannot parse '" + tok + "'", line_no);
    vals.push_back(v);
  }
  if (vals.size() != expected) {
    throw MeshError("expected " + std::to_string(expected) + " fields, found " + std::to_string(vals.size()), line_no);
  }
  return vals;
}

}  // namespace

TriMesh load_mesh(std::string_view text) {
  const auto lines = content_lines(text);
  if (lines.empty()) throw MeshError("empty mesh description", 1);
  const auto header = parse_fields<long>(lines[0].second, lines[0].first, 2);
  if (header[0] <= 0 || header[1] <= 0) throw MeshError("vertex and triangle counts must be positive", lines[0].first);
  const auto nv = static_cast<std::size_t>(header[0]);
  const auto nt = static_cast<std::size_t>(header[1]);
  if (lines.size() != 1 + nv + nt) {
    const int where = lines.back().first;
    throw MeshError("expected " + std::to_string(nv + nt) + " data lines after header, found " +
                        std::to_string(lines.size() - 1),
                    where);
  }
  std::vector<Point> verts(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    const auto& [no, l] = lines[1 + i];
    const auto xy = parse_fields<double>(l, no, 2);
    verts[i] = {xy[0], xy[1]};
  }
  std::vector<Triangle> tris(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    const auto& [no, l] = lines[1 + nv + t];
    const auto ijk = parse_fields<long>(l, no, 3);
    for (long v : ijk) {
      if (v < 0 || v >= static_cast<long>(nv)) throw MeshError("vertex index " + std::to_string(v) + " out of range", no);
    }
    tris[t] = {static_cast<Index>(ijk[0]), static_cast<Index>(ijk[1]), static_cast<Index>(ijk[2])};
  }
  return TriMesh(std::move(verts), std::move(tris));
}

TriMesh load_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return load_mesh(buf.str());
}

std::string serialize_mesh(const TriMesh& mesh) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << mesh.num_vertices() << ' ' << mesh.num_triangles() << '\n';
  for (const auto& p : mesh.vertices()) out << p.x << ' ' << p.y << '\n';
  for (const auto& t : mesh.triangles()) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  return out.str();
}

std::vector<BoundaryEdge> boundary_edges(const TriMesh& mesh) { return mesh.boundary_edges(); }

FiberField FiberField::axis_aligned(std::size_t n_elements) {
  return FiberField(std::vector<FiberFrame>(n_elements));
}

FiberField FiberField::rotated(std::size_t n_elements, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return FiberField(std::vector<FiberFrame>(n_elements, FiberFrame{{c, s}, {-s, c}}));
}

}  // namespace cardio
