#include "cardio/assembly.hpp"

#include <array>

namespace cardio {

namespace {

struct ElementKernel {
  int degree;
  int n;  // local nodes
  const TriangleQuadrature& rule;
  explicit ElementKernel(int deg) : degree(deg), n(basis::nodes(deg)), rule(default_triangle_rule()) {}
};

// Scatter a scalar local matrix into every component block.
void scatter_blocks(const FeSpace& space, const std::array<Index, 6>& nodes, int n, const double (&local)[6][6],
                    std::vector<Triplet>& out) {
  const auto ns = static_cast<Index>(space.scalar_dof_count());
  for (int c = 0; c < space.components(); ++c) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) out.push_back({c * ns + nodes[i], c * ns + nodes[j], local[i][j]});
    }
  }
}

}  // namespace

std::size_t quadrature_size(const TriMesh& mesh) { return mesh.num_triangles() * default_triangle_rule().size(); }

std::vector<Point> quadrature_points(const TriMesh& mesh) {
  const auto& rule = default_triangle_rule();
  std::vector<Point> pts;
  pts.reserve(quadrature_size(mesh));
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry geo(mesh.corners(static_cast<Index>(t)));
    for (const auto& b : rule.points) pts.push_back(geo.map(b));
  }
  return pts;
}

TensorField constant_tensor_field(const TriMesh& mesh, const Sym2& value) {
  return TensorField(quadrature_size(mesh), value);
}

SparseMatrix assemble_mass(const FeSpace& space) {
  const ElementKernel k(space.degree());
  const auto& mesh = space.mesh();
  std::vector<Triplet> trip;
  trip.reserve(mesh.num_triangles() * k.n * k.n * space.components());
  std::array<double, 6> phi{};
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto ti = static_cast<Index>(t);
    const ElementGeometry geo(mesh.corners(ti));
    double local[6][6] = {};
    for (std::size_t q = 0; q < k.rule.size(); ++q) {
      basis::values(k.degree, k.rule.points[q], phi);
      const double w = 2.0 * geo.area * k.rule.weights[q];
      for (int i = 0; i < k.n; ++i) {
        for (int j = 0; j < k.n; ++j) local[i][j] += w * phi[i] * phi[j];
      }
    }
    scatter_blocks(space, space.element_nodes(ti), k.n, local, trip);
  }
  return SparseMatrix::from_triplets(space.dof_count(), space.dof_count(), std::move(trip));
}

SparseMatrix assemble_stiffness(const FeSpace& space, const TensorField& coeff) {
  const ElementKernel k(space.degree());
  const auto& mesh = space.mesh();
  if (coeff.size() != quadrature_size(mesh)) throw std::invalid_argument("coefficient field has wrong size");
  std::vector<Triplet> trip;
  trip.reserve(mesh.num_triangles() * k.n * k.n * space.components());
  std::array<Point, 6> grad{};
  const std::size_t nq = k.rule.size();
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto ti = static_cast<Index>(t);
    const ElementGeometry geo(mesh.corners(ti));
    double local[6][6] = {};
    for (std::size_t q = 0; q < nq; ++q) {
      const Sym2& K = coeff[t * nq + q];
      if (!K.is_spd()) throw CoefficientError(ti, "diffusion coefficient is not symmetric positive definite");
      basis::gradients(k.degree, k.rule.points[q], geo, grad);
      const double w = 2.0 * geo.area * k.rule.weights[q];
      for (int i = 0; i < k.n; ++i) {
        const Point kg = K.apply(grad[i]);
        for (int j = 0; j < k.n; ++j) local[i][j] += w * dot(kg, grad[j]);
      }
    }
    scatter_blocks(space, space.element_nodes(ti), k.n, local, trip);
  }
  return SparseMatrix::from_triplets(space.dof_count(), space.dof_count(), std::move(trip));
}

SparseMatrix assemble_stiffness(const FeSpace& space, const Sym2& coeff) {
  return assemble_stiffness(space, constant_tensor_field(space.mesh(), coeff));
}

namespace {

// Trace of the element basis on local edge k: node indices along the edge
// (two vertices and, for P2, the midpoint) and their 1D shape values at s.
struct EdgeTrace {
  int count;
  std::array<int, 3> local;
};

EdgeTrace edge_trace(int degree, int k) {
  if (degree == 1) return {2, {k, (k + 1) % 3, -1}};
  return {3, {k, (k + 1) % 3, 3 + k}};
}

void edge_values(int degree, double s, std::span<double> out) {
  if (degree == 1) {
    out[0] = 1.0 - s;
    out[1] = s;
    return;
  }
  out[0] = (1.0 - s) * (1.0 - 2.0 * s);
  out[1] = s * (2.0 * s - 1.0);
  out[2] = 4.0 * s * (1.0 - s);
}

int local_edge_of(const Triangle& tri, const Edge& oriented) {
  for (int k = 0; k < 3; ++k) {
    if (tri[k] == oriented[0] && tri[(k + 1) % 3] == oriented[1]) return k;
  }
  throw std::logic_error("boundary edge not found in owning triangle");
}

}  // namespace

SparseMatrix assemble_boundary_mass(const FeSpace& space, double alpha) {
  const auto& mesh = space.mesh();
  std::vector<Triplet> trip;
  if (alpha != 0.0) {
    const auto& rule = edge_rule();
    std::array<double, 3> phi{};
    for (const auto& be : mesh.boundary_edges()) {
      const int k = local_edge_of(mesh.triangles()[be.triangle], be.vertices);
      const auto tr = edge_trace(space.degree(), k);
      const double len = norm(mesh.vertex(be.vertices[1]) - mesh.vertex(be.vertices[0]));
      double local[6][6] = {};
      for (std::size_t q = 0; q < rule.size(); ++q) {
        edge_values(space.degree(), rule.points[q], phi);
        const double w = alpha * len * rule.weights[q];
        for (int i = 0; i < tr.count; ++i) {
          for (int j = 0; j < tr.count; ++j) local[tr.local[i]][tr.local[j]] += w * phi[i] * phi[j];
        }
      }
      scatter_blocks(space, space.element_nodes(be.triangle), space.nodes_per_element(), local, trip);
    }
  }
  return SparseMatrix::from_triplets(space.dof_count(), space.dof_count(), std::move(trip));
}

SparseMatrix assemble_divergence(const FeSpace& velocity, const FeSpace& pressure) {
  if (velocity.mesh_ptr() != pressure.mesh_ptr()) throw std::invalid_argument("spaces must share the mesh");
  if (velocity.rank() != ValueRank::vector || pressure.rank() != ValueRank::scalar) {
    throw std::invalid_argument("divergence needs a vector velocity space and a scalar pressure space");
  }
  const auto& mesh = velocity.mesh();
  const auto& rule = default_triangle_rule();
  const int nu = velocity.nodes_per_element();
  const int np = pressure.nodes_per_element();
  const auto ns = static_cast<Index>(velocity.scalar_dof_count());
  std::vector<Triplet> trip;
  trip.reserve(mesh.num_triangles() * static_cast<std::size_t>(nu * np * 2));
  std::array<double, 6> psi{};
  std::array<Point, 6> grad{};
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto ti = static_cast<Index>(t);
    const ElementGeometry geo(mesh.corners(ti));
    double bx[6][6] = {}, by[6][6] = {};
    for (std::size_t q = 0; q < rule.size(); ++q) {
      basis::values(pressure.degree(), rule.points[q], psi);
      basis::gradients(velocity.degree(), rule.points[q], geo, grad);
      const double w = 2.0 * geo.area * rule.weights[q];
      for (int i = 0; i < np; ++i) {
        for (int j = 0; j < nu; ++j) {
          bx[i][j] += w * psi[i] * grad[j].x;
          by[i][j] += w * psi[i] * grad[j].y;
        }
      }
    }
    const auto pn = pressure.element_nodes(ti);
    const auto un = velocity.element_nodes(ti);
    for (int i = 0; i < np; ++i) {
      for (int j = 0; j < nu; ++j) {
        trip.push_back({pn[i], un[j], bx[i][j]});
        trip.push_back({pn[i], ns + un[j], by[i][j]});
      }
    }
  }
  return SparseMatrix::from_triplets(pressure.dof_count(), velocity.dof_count(), std::move(trip));
}

Vector assemble_load(const FeSpace& space, std::span<const double> integrand) {
  if (space.rank() != ValueRank::scalar) throw std::invalid_argument("assemble_load needs a scalar space");
  const auto& mesh = space.mesh();
  const auto& rule = default_triangle_rule();
  if (integrand.size() != quadrature_size(mesh)) throw std::invalid_argument("integrand has wrong size");
  Vector b(space.dof_count(), 0.0);
  std::array<double, 6> phi{};
  const int n = space.nodes_per_element();
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto ti = static_cast<Index>(t);
    const double area = mesh.area(ti);
    const auto nodes = space.element_nodes(ti);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      basis::values(space.degree(), rule.points[q], phi);
      const double w = 2.0 * area * rule.weights[q] * integrand[t * rule.size() + q];
      for (int i = 0; i < n; ++i) b[nodes[i]] += w * phi[i];
    }
  }
  return b;
}

Vector assemble_load(const FeSpace& space, const std::function<double(Point)>& f) {
  const auto pts = quadrature_points(space.mesh());
  ScalarField vals(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = f(pts[i]);
  return assemble_load(space, vals);
}

Vector assemble_vector_load(const FeSpace& space, std::span<const Point> integrand) {
  if (space.rank() != ValueRank::vector) throw std::invalid_argument("assemble_vector_load needs a vector space");
  const auto& mesh = space.mesh();
  const auto& rule = default_triangle_rule();
  if (integrand.size() != quadrature_size(mesh)) throw std::invalid_argument("integrand has wrong size");
  const std::size_t ns = space.scalar_dof_count();
  Vector b(space.dof_count(), 0.0);
  std::array<double, 6> phi{};
  const int n = space.nodes_per_element();
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto ti = static_cast<Index>(t);
    const double area = mesh.area(ti);
    const auto nodes = space.element_nodes(ti);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      basis::values(space.degree(), rule.points[q], phi);
      const double w = 2.0 * area * rule.weights[q];
      const Point f = integrand[t * rule.size() + q];
      for (int i = 0; i < n; ++i) {
        b[nodes[i]] += w * phi[i] * f.x;
        b[ns + nodes[i]] += w * phi[i] * f.y;
      }
    }
  }
  return b;
}

Vector assemble_vector_load(const FeSpace& space, const std::function<Point(Point)>& f) {
  const auto pts = quadrature_points(space.mesh());
  std::vector<Point> vals(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = f(pts[i]);
  return assemble_vector_load(space, vals);
}

Vector assemble_boundary_vector_load(const FeSpace& space, const std::function<Point(Point, Point)>& h) {
  const auto& mesh = space.mesh();
  return assemble_boundary_vector_load(space, [&](const BoundaryEdge& be, double s, Point n) {
    const Point a = mesh.vertex(be.vertices[0]);
    return h(a + s * (mesh.vertex(be.vertices[1]) - a), n);
  });
}

Vector assemble_boundary_vector_load(const FeSpace& space,
                                     const std::function<Point(const BoundaryEdge&, double, Point)>& h) {
  if (space.rank() != ValueRank::vector) throw std::invalid_argument("boundary vector load needs a vector space");
  const auto& mesh = space.mesh();
  const auto& rule = edge_rule();
  const std::size_t ns = space.scalar_dof_count();
  Vector b(space.dof_count(), 0.0);
  std::array<double, 3> phi{};
  for (const auto& be : mesh.boundary_edges()) {
    const int k = local_edge_of(mesh.triangles()[be.triangle], be.vertices);
    const auto tr = edge_trace(space.degree(), k);
    const auto nodes = space.element_nodes(be.triangle);
    const Point a = mesh.vertex(be.vertices[0]);
    const Point d = mesh.vertex(be.vertices[1]) - a;
    const double len = norm(d);
    const Point n{d.y / len, -d.x / len};
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double s = rule.points[q];
      edge_values(space.degree(), s, phi);
      const Point val = h(be, s, n);
      const double w = len * rule.weights[q];
      for (int i = 0; i < tr.count; ++i) {
        const Index node = nodes[tr.local[i]];
        b[node] += w * phi[i] * val.x;
        b[ns + node] += w * phi[i] * val.y;
      }
    }
  }
  return b;
}

GradientField field_gradients(const FeSpace& space, std::span<const double> coeffs) {
  const auto& mesh = space.mesh();
  const auto& rule = default_triangle_rule();
  GradientField out;
  out.reserve(quadrature_size(mesh));
  std::array<Point, 6> grad{};
  const std::size_t ns = space.scalar_dof_count();
  const int n = space.nodes_per_element();
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto ti = static_cast<Index>(t);
    const ElementGeometry geo(mesh.corners(ti));
    const auto nodes = space.element_nodes(ti);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      basis::gradients(space.degree(), rule.points[q], geo, grad);
      Point gx{}, gy{};
      for (int i = 0; i < n; ++i) {
        gx = gx + coeffs[nodes[i]] * grad[i];
        if (space.components() == 2) gy = gy + coeffs[ns + nodes[i]] * grad[i];
      }
      out.push_back({gx.x, gx.y, gy.x, gy.y});
    }
  }
  return out;
}

ScalarField field_values(const FeSpace& space, std::span<const double> coeffs) {
  const auto& mesh = space.mesh();
  const auto& rule = default_triangle_rule();
  ScalarField out;
  out.reserve(quadrature_size(mesh));
  std::array<double, 6> phi{};
  const int n = space.nodes_per_element();
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto nodes = space.element_nodes(static_cast<Index>(t));
    for (std::size_t q = 0; q < rule.size(); ++q) {
      basis::values(space.degree(), rule.points[q], phi);
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += phi[i] * coeffs[nodes[i]];
      out.push_back(s);
    }
  }
  return out;
}

}  // namespace cardio
