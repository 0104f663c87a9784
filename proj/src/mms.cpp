#include "cardio/mms.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cardio/mechanics.hpp"

namespace cardio {

namespace {

constexpr double pi = std::numbers::pi;

/// sqrt(int (u_h - u)^2) for a scalar field given at the default quadrature points.
double l2_error(const TriMesh& mesh, const ScalarField& uh, const std::function<double(Point)>& u) {
  const auto& rule = default_triangle_rule();
  const auto pts = quadrature_points(mesh);
  double s = 0.0;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const double a2 = 2.0 * mesh.area(static_cast<Index>(t));
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const std::size_t k = t * rule.size() + q;
      const double d = uh[k] - u(pts[k]);
      s += a2 * rule.weights[q] * d * d;
    }
  }
  return std::sqrt(s);
}

template <class Row>
void fill_orders(std::vector<Row>& rows, ConvergenceRow Row::*member) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    auto& cur = rows[i].*member;
    const auto& prev = rows[i - 1].*member;
    cur.order = std::log(prev.error / cur.error) / std::log(prev.h / cur.h);
  }
}

}  // namespace

std::vector<ConvergenceRow> poisson_mms(const std::vector<int>& ns) {
  auto exact = [](Point x) { return std::cos(pi * x.x) * std::cos(pi * x.y); };
  std::vector<ConvergenceRow> rows;
  for (int n : ns) {
    const auto mesh = std::make_shared<const TriMesh>(structured_unit_square(n, n));
    const FeSpace p1(mesh, 1, ValueRank::scalar);
    const SparseMatrix k = assemble_stiffness(p1, Sym2::identity());
    const Vector b = assemble_load(p1, [&](Point x) { return 2.0 * pi * pi * exact(x); });
    const ConstraintProjector mean_zero(assemble_mass(p1) * Vector(p1.dof_count(), 1.0));
    CgOptions opts;
    opts.tol = 1e-12;
    opts.constraint = &mean_zero;
    const CgResult sol = solve_cg(k, b, opts);
    if (!sol.converged) throw std::runtime_error("poisson_mms: CG did not converge");
    // The discrete solution has zero mass-weighted mean, like the exact one.
    ConvergenceRow r;
    r.n = n;
    r.h = 1.0 / n;
    r.error = l2_error(*mesh, field_values(p1, sol.x), exact);
    rows.push_back(r);
  }
  for (std::size_t i = 1; i < rows.size(); ++i) {
    rows[i].order = std::log(rows[i - 1].error / rows[i].error) / std::log(rows[i - 1].h / rows[i].h);
  }
  return rows;
}

std::vector<StokesRow> taylor_hood_mms(const std::vector<int>& ns) {
  const Sym2 S{1.5, 0.3, 0.8};
  const double alpha = 1.0;
  auto trig = [](Point x) {
    return std::array<double, 4>{std::sin(pi * x.x), std::cos(pi * x.x), std::sin(pi * x.y), std::cos(pi * x.y)};
  };
  auto u_exact = [&](Point x) {
    const auto [sx, cx, sy, cy] = trig(x);
    return Point{pi * sx * cy, -pi * cx * sy};
  };
  auto p_exact = [&](Point x) {
    const auto [sx, cx, sy, cy] = trig(x);
    return cx * cy + x.x;
  };
  auto grad_u = [&](Point x) {
    const auto [sx, cx, sy, cy] = trig(x);
    return Mat2{pi * pi * cx * cy, -pi * pi * sx * sy, pi * pi * sx * sy, -pi * pi * cx * cy};
  };
  auto body = [&](Point x) {
    const auto [sx, cx, sy, cy] = trig(x);
    const double p3 = pi * pi * pi;
    // Hessians (xx, xy, yy) of both components.
    const double h1xx = -p3 * sx * cy, h1xy = -p3 * cx * sy, h1yy = -p3 * sx * cy;
    const double h2xx = p3 * cx * sy, h2xy = p3 * sx * cy, h2yy = p3 * cx * sy;
    const double d1 = S.xx * h1xx + 2.0 * S.xy * h1xy + S.yy * h1yy;
    const double d2 = S.xx * h2xx + 2.0 * S.xy * h2xy + S.yy * h2yy;
    return Point{-d1 - pi * sx * cy + 1.0, -d2 - pi * cx * sy};
  };
  auto traction = [&](Point x, Point n) {
    const Mat2 g = grad_u(x);
    const Point sn = S.apply(n);
    const Point u = u_exact(x);
    const double p = p_exact(x);
    return Point{g.xx * sn.x + g.xy * sn.y - p * n.x + alpha * u.x, g.yx * sn.x + g.yy * sn.y - p * n.y + alpha * u.y};
  };

  std::vector<StokesRow> rows;
  for (int n : ns) {
    const auto mesh = std::make_shared<const TriMesh>(structured_unit_square(n, n));
    const MechSpaces spaces(mesh);
    MechanicsSystem sys;
    sys.mu = S.eigenvalues()[1];
    sys.stiffness = assemble_stiffness(spaces.velocity, S);
    sys.boundary = assemble_boundary_mass(spaces.velocity, alpha);
    sys.A = combine(1.0, sys.stiffness, 1.0, sys.boundary);
    sys.rhs = assemble_vector_load(spaces.velocity, body);
    vec::axpy(1.0, assemble_boundary_vector_load(spaces.velocity, traction), sys.rhs);
    const MechSolveResult sol = solve_mechanics(sys, spaces, 1e-12);
    if (!sol.converged) throw std::runtime_error("taylor_hood_mms: saddle solve did not converge");

    const std::size_t nsd = spaces.velocity.scalar_dof_count();
    const std::span<const double> u(sol.state.u);
    const double ex = l2_error(*mesh, field_values(spaces.velocity, u.subspan(0, nsd)), [&](Point x) { return u_exact(x).x; });
    const double ey = l2_error(*mesh, field_values(spaces.velocity, u.subspan(nsd)), [&](Point x) { return u_exact(x).y; });
    StokesRow r;
    r.n = n;
    r.h = 1.0 / n;
    r.velocity = {n, r.h, std::hypot(ex, ey), 0.0};
    r.pressure = {n, r.h, l2_error(*mesh, field_values(spaces.pressure, sol.state.p), p_exact), 0.0};
    rows.push_back(r);
  }
  fill_orders(rows, &StokesRow::velocity);
  fill_orders(rows, &StokesRow::pressure);
  return rows;
}

}  // namespace cardio
