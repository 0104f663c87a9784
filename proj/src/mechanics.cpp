#include "cardio/mechanics.hpp"

#include <cmath>
#include <stdexcept>


namespace cardio {

void MechParams::validate() const {
  if (!(alpha > 0.0)) throw ParameterError("mechanics.alpha must be positive");
  if (!(epsilon >= 0.0)) throw ParameterError("mechanics.epsilon must be non-negative");
  if (!std::isfinite(g.x) || !std::isfinite(g.y)) throw ParameterError("mechanics body force must be finite");
}

namespace {

Vector lumped(const SparseMatrix& m) { return m * Vector(m.cols(), 1.0); }

bool all_finite(const Vector& x) {
  for (double v : x) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace

MechSpaces::MechSpaces(MeshPtr mesh)
    : velocity(mesh, 2, ValueRank::vector),
      pressure(mesh, 1, ValueRank::scalar),
      velocity_mass(assemble_mass(velocity)),
      velocity_laplace(assemble_stiffness(velocity, Sym2::identity())),
      pressure_mass(assemble_mass(pressure)),
      pressure_lumped(lumped(pressure_mass)),
      divergence(assemble_divergence(velocity, pressure)) {}

MechState MechSpaces::zero_state() const { return {Vector(velocity.dof_count(), 0.0), Vector(pressure.dof_count(), 0.0)}; }

MechanicsSystem assemble_mechanics(const MechSpaces& spaces, std::span<const double> gamma, const FiberField& fibers,
                                   const ActivationParams& act, const MechParams& params) {
  const auto& mesh = spaces.velocity.mesh();
  const std::size_t nt = mesh.num_triangles();
  if (gamma.size() != spaces.pressure.dof_count()) throw std::invalid_argument("activation field has wrong size");
  if (fibers.size() != nt) throw std::invalid_argument("fiber field has wrong size");
  for (double g : gamma) {
    if (!std::isfinite(g)) throw std::invalid_argument("activation field is not finite");
  }

  const auto& rule = default_triangle_rule();
  const ScalarField gq = field_values(spaces.pressure, gamma);
  TensorField sigma(gq.size());
  for (std::size_t t = 0; t < nt; ++t) {
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const std::size_t k = t * rule.size() + q;
      sigma[k] = sigma_tensor(gq[k], fibers[t], act);
    }
  }

  MechanicsSystem sys;
  sys.mu = act.mu;
  sys.stiffness = assemble_stiffness(spaces.velocity, sigma);
  sys.boundary = assemble_boundary_mass(spaces.velocity, params.alpha);
  sys.A = combine(1.0, sys.stiffness, 1.0, sys.boundary);

  // -int sigma : grad(phi e_a) = -int sum_b sigma_ab d_b phi
  const std::size_t ns = spaces.velocity.scalar_dof_count();
  Vector rhs(spaces.velocity.dof_count(), 0.0);
  std::array<Point, 6> grad{};
  for (std::size_t t = 0; t < nt; ++t) {
    const auto ti = static_cast<Index>(t);
    const ElementGeometry geo(mesh.corners(ti));
    const auto nodes = spaces.velocity.element_nodes(ti);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      basis::gradients(2, rule.points[q], geo, grad);
      const Sym2& s = sigma[t * rule.size() + q];
      const double w = 2.0 * geo.area * rule.weights[q];
      for (int i = 0; i < 6; ++i) {
        const Point sg = s.apply(grad[i]);
        rhs[nodes[i]] -= w * sg.x;
        rhs[ns + nodes[i]] -= w * sg.y;
      }
    }
  }
  const Vector edge_term = assemble_boundary_vector_load(spaces.velocity, [&](const BoundaryEdge& be, double s, Point n) {
    const double g = (1.0 - s) * gamma[be.vertices[0]] + s * gamma[be.vertices[1]];
    return sigma_tensor(g, fibers[be.triangle], act).apply(n);
  });
  vec::axpy(1.0, edge_term, rhs);
  if (params.g.x != 0.0 || params.g.y != 0.0) {
    const Point g = params.g;
    vec::axpy(1.0, assemble_vector_load(spaces.velocity, [g](Point) { return g; }), rhs);
  }
  sys.rhs = std::move(rhs);
  return sys;
}

MechSolveResult solve_mechanics(const MechanicsSystem& sys, const MechSpaces& spaces, double tol,
                                const MechState* previous) {
  // The Schur complement D A^{-1} D^T behaves like the pressure mass over mu.
  Vector schur_diag = spaces.pressure_lumped;
  for (double& d : schur_diag) d /= sys.mu;
  const SparseMatrix b = spaces.divergence.scaled(-1.0);
  const Vector zero(b.rows(), 0.0);

  SaddleOptions opts;
  opts.tol = tol;
  opts.schur_diagonal = schur_diag;
  if (previous != nullptr && previous->p.size() == zero.size() && previous->u.size() == sys.A.rows()) {
    opts.initial_u = previous->u;
    opts.initial_p = previous->p;
  }

  SaddleResult s = solve_saddle(sys.A, b, sys.rhs, zero, opts);
  MechSolveResult res;
  res.iterations = s.outer_iterations;
  res.momentum_residual = s.momentum_residual;
  res.divergence_residual = s.constraint_residual;
  res.converged = s.converged && all_finite(s.u) && all_finite(s.p);
  res.state = {std::move(s.u), std::move(s.p)};
  return res;
}

MechSolveResult step_mechanics_regularized(const MechState& state, double dt, double epsilon,
                                           const MechanicsSystem& sys, const MechSpaces& spaces) {
  if (!(dt > 0.0) || !(epsilon > 0.0)) throw std::invalid_argument("regularized step needs dt > 0 and epsilon > 0");
  const SparseMatrix& d = spaces.divergence;
  const SparseMatrix& m = spaces.velocity_mass;
  const std::size_t nu = sys.A.rows(), np = d.rows();
  const double c = dt / epsilon;
  Vector inv_l(np);
  for (std::size_t i = 0; i < np; ++i) inv_l[i] = 1.0 / spaces.pressure_lumped[i];

  // Pressure eliminated: p = p_n - c L^{-1} D u, leaving
  // (eps/dt M + A + c D^T L^{-1} D) u = F + eps/dt M u_n + D^T p_n.
  Vector du(np), mu(nu), au(nu), dtp(nu);
  const LinearOperator op = [&](std::span<const double> x, std::span<double> y) {
    d.multiply(x, du);
    for (std::size_t i = 0; i < np; ++i) du[i] *= inv_l[i];
    d.multiply_transpose(du, dtp);
    m.multiply(x, mu);
    sys.A.multiply(x, au);
    for (std::size_t i = 0; i < nu; ++i) y[i] = mu[i] / c + au[i] + c * dtp[i];
  };
  Vector diag = sys.A.diagonal();
  const Vector mdiag = m.diagonal();
  for (std::size_t i = 0; i < nu; ++i) diag[i] += mdiag[i] / c;
  {
    const auto rows = d.row_offsets();
    const auto cols = d.col_indices();
    const auto vals = d.values();
    for (std::size_t r = 0; r < np; ++r) {
      for (std::size_t k = rows[r]; k < rows[r + 1]; ++k) diag[cols[k]] += c * vals[k] * vals[k] * inv_l[r];
    }
  }

  Vector rhs = sys.rhs;
  const Vector mun = m * state.u;
  d.multiply_transpose(state.p, dtp);
  for (std::size_t i = 0; i < nu; ++i) rhs[i] += mun[i] / c + dtp[i];

  CgOptions opts;
  opts.tol = 1e-12;
  opts.initial_guess = state.u;
  CgResult sol = solve_cg(op, diag, rhs, opts);

  MechSolveResult res;
  res.iterations = sol.iterations;
  res.momentum_residual = sol.relative_residual;
  d.multiply(sol.x, du);
  Vector p = state.p;
  for (std::size_t i = 0; i < np; ++i) p[i] -= c * inv_l[i] * du[i];
  const double un = vec::norm2(sol.x);
  res.divergence_residual = un > 0.0 ? vec::norm2(du) / un : vec::norm2(du);
  res.converged = sol.converged && all_finite(sol.x) && all_finite(p);
  res.state = {std::move(sol.x), std::move(p)};
  return res;
}

double pressure_offset(const MechState& state, const MechanicsSystem& sys, const MechSpaces& spaces) {
  const Vector x = spaces.velocity.interpolate([](Point p, int c) { return c == 0 ? p.x : 0.0; });
  const Vector au = sys.A * state.u;
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * (au[i] - sys.rhs[i]);
  return s;
}

double pressure_integral(const MechState& state, const MechSpaces& spaces) {
  return vec::dot(spaces.pressure_lumped, state.p);
}

double displacement_h1_sq(const MechState& state, const MechSpaces& spaces) {
  return vec::dot(state.u, spaces.velocity_mass * state.u) + vec::dot(state.u, spaces.velocity_laplace * state.u);
}

double pressure_l2_sq(const MechState& state, const MechSpaces& spaces) {
  return vec::dot(state.p, spaces.pressure_mass * state.p);
}

}  // namespace cardio
