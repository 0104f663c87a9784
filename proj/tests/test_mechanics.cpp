#include <doctest.h>

#include <cmath>

#include "cardio/diagnostics.hpp"
#include "cardio/mechanics.hpp"
#include "oracles.hpp"

using namespace cardio;

namespace {

Vector bump(const FeSpace& p1, Point c = {0.5, 0.5}) {
  return p1.interpolate([c](Point p) {
    const double r2 = (p.x - c.x) * (p.x - c.x) + (p.y - c.y) * (p.y - c.y);
    return 0.5 * std::exp(-r2 / 0.05);
  });
}

FiberField fibers_for(const MechSpaces& s, double angle = 0.0) {
  return FiberField::rotated(s.velocity.mesh().num_triangles(), angle);
}

// Dense saddle matrix [[A, -D^T], [-D, 0]].
Eigen::MatrixXd saddle_matrix(const MechanicsSystem& sys, const MechSpaces& s) {
  const Eigen::MatrixXd a = oracle::dense(sys.A);
  const Eigen::MatrixXd d = oracle::dense(s.divergence);
  const Eigen::Index nu = a.rows(), np = d.rows();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(nu + np, nu + np);
  k.topLeftCorner(nu, nu) = a;
  k.topRightCorner(nu, np) = -d.transpose();
  k.bottomLeftCorner(np, nu) = -d;
  return k;
}

// Smallest generalized eigenvalue of D H^{-1} D^T against the pressure mass,
// H the velocity H^1 Gram matrix; its square root is the discrete inf-sup constant.
double inf_sup(const MechSpaces& s) {
  const Eigen::MatrixXd h = oracle::dense(combine(1.0, s.velocity_mass, 1.0, s.velocity_laplace));
  const Eigen::MatrixXd d = oracle::dense(s.divergence);
  const Eigen::MatrixXd schur = d * h.llt().solve(d.transpose());
  const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(schur, oracle::dense(s.pressure_mass));
  return std::sqrt(es.eigenvalues()[0]);
}

}  // namespace

TEST_SUITE("mechanics") {
  TEST_CASE("load vanishes for spatially constant activation") {
    const MechSpaces s(oracle::square(3, 3));
    const ActivationParams act;
    for (double g : {0.0, -0.4, 0.2, 1.5}) {
      const auto sys = assemble_mechanics(s, Vector(s.pressure.dof_count(), g), fibers_for(s, 0.7), act, {});
      CHECK(vec::norm_inf(sys.rhs) < 1e-12);
      const MechSolveResult r = solve_mechanics(sys, s);
      CHECK(r.converged);
      CHECK(vec::norm_inf(r.state.u) < 1e-8);
      CHECK(vec::norm_inf(r.state.p) < 1e-8);
      CHECK(std::abs(pressure_offset(r.state, sys, s)) < 1e-10);
    }
  }

  TEST_CASE("elastic block is SPD and linear in the Robin coefficient") {
    const MechSpaces s(oracle::square(2, 2));
    const ActivationParams act;
    const Vector gamma = bump(s.pressure);
    MechParams p;
    const auto sys1 = assemble_mechanics(s, gamma, fibers_for(s), act, p);
    const Eigen::MatrixXd a = oracle::dense(sys1.A);
    CHECK((a - a.transpose()).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a).eigenvalues()[0] > 1e-6);
    p.alpha = 2.0;
    const auto sys2 = assemble_mechanics(s, gamma, fibers_for(s), act, p);
    CHECK((oracle::dense(sys2.boundary) - 2.0 * oracle::dense(sys1.boundary)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((oracle::dense(sys2.stiffness) - oracle::dense(sys1.stiffness)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(oracle::max_abs_diff(sys1.rhs, sys2.rhs) == 0.0);
    p.alpha = 0.0;
    CHECK_THROWS_AS(p.validate(), ParameterError);
  }

  TEST_CASE("Robin problem has only the trivial homogeneous solution") {
    const MechSpaces s(oracle::square(2, 2));
    const auto sys = assemble_mechanics(s, bump(s.pressure), fibers_for(s), ActivationParams{}, {});
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(saddle_matrix(sys, s)).singularValues();
    CHECK(sv.minCoeff() > 1e-6 * sv.maxCoeff());
  }

  TEST_CASE("bump activation matches a dense direct solve") {
    const MechSpaces s(oracle::square(4, 4));
    const auto sys = assemble_mechanics(s, bump(s.pressure), fibers_for(s, 0.3), ActivationParams{}, {});
    CHECK(vec::norm_inf(sys.rhs) > 1e-3);
    const MechSolveResult r = solve_mechanics(sys, s, 1e-12);
    CHECK(r.converged);
    CHECK(r.divergence_residual < 1e-10);

    const Eigen::Index nu = static_cast<Eigen::Index>(sys.rhs.size());
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nu + static_cast<Eigen::Index>(s.pressure.dof_count()));
    rhs.head(nu) = oracle::vec(sys.rhs);
    const Eigen::VectorXd x = saddle_matrix(sys, s).fullPivLu().solve(rhs);
    CHECK((x.head(nu) - oracle::vec(r.state.u)).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((x.tail(x.size() - nu) - oracle::vec(r.state.p)).cwiseAbs().maxCoeff() < 1e-8);

    // Momentum equation tested with (x, 0) recovers int p.
    CHECK(std::abs(pressure_offset(r.state, sys, s) - pressure_integral(r.state, s)) < 1e-6);
    const auto flat = assemble_mechanics(s, Vector(s.pressure.dof_count(), 0.0), fibers_for(s), ActivationParams{}, {});
    CHECK(std::abs(pressure_offset(s.zero_state(), flat, s)) < 1e-14);
  }

  TEST_CASE("regularized pseudo-time mode") {
    const MechSpaces s(oracle::square(4, 4));
    const auto sys = assemble_mechanics(s, bump(s.pressure), fibers_for(s), ActivationParams{}, {});
    const MechSolveResult saddle = solve_mechanics(sys, s, 1e-13);
    REQUIRE(saddle.converged);

    SUBCASE("saddle solution is stationary") {
      const MechSolveResult r = step_mechanics_regularized(saddle.state, 0.01, 0.1, sys, s);
      CHECK(r.converged);
      CHECK(oracle::max_abs_diff(r.state.u, saddle.state.u) < 1e-9);
      CHECK(oracle::max_abs_diff(r.state.p, saddle.state.p) < 1e-9);
    }
    SUBCASE("large epsilon barely moves the state") {
      const double dt = 0.01, eps = 1e6;
      const MechSolveResult r = step_mechanics_regularized(s.zero_state(), dt, eps, sys, s);
      CHECK(r.converged);
      // (eps/dt) ||u||_M^2 <= F.u  gives  ||u||_M <= (dt/eps) ||F||_{M^-1}.
      const Eigen::MatrixXd m = oracle::dense(s.velocity_mass);
      const Eigen::VectorXd f = oracle::vec(sys.rhs);
      const double f_dual = std::sqrt(f.dot(m.llt().solve(f)));
      const double u_m = std::sqrt(vec::dot(r.state.u, s.velocity_mass * r.state.u));
      CHECK(u_m <= dt / eps * f_dual * (1.0 + 1e-8));
      CHECK(u_m > 0.0);
    }
    SUBCASE("pseudo-time iteration converges to the saddle solution") {
      MechState st = s.zero_state();
      for (int k = 0; k < 300; ++k) {
        const MechSolveResult r = step_mechanics_regularized(st, 1.0, 0.01, sys, s);
        REQUIRE(r.converged);
        st = r.state;
      }
      CHECK(oracle::max_abs_diff(st.u, saddle.state.u) < 1e-6);
      CHECK(oracle::max_abs_diff(st.p, saddle.state.p) < 1e-6);
    }
    CHECK_THROWS(step_mechanics_regularized(s.zero_state(), 0.0, 1.0, sys, s));
  }

  TEST_CASE("coercivity is bounded below under refinement") {
    const ActivationParams act;
    std::vector<double> c;
    for (int n : {2, 4, 8}) {
      const auto mesh = oracle::square(n, n);
      const FeSpace p1(mesh, 1, ValueRank::scalar);
      c.push_back(coercivity_estimate(mesh, bump(p1), 1.0, act, FiberField::axis_aligned(mesh->num_triangles())));
    }
    for (double x : c) CHECK(x > 0.1);
    CHECK(c[2] > 0.8 * c[0]);
    const auto big = oracle::square(30, 30);
    const FeSpace p1(big, 1, ValueRank::scalar);
    CHECK_THROWS(coercivity_estimate(big, Vector(p1.dof_count(), 0.0), 1.0, act,
                                     FiberField::axis_aligned(big->num_triangles())));
  }

  TEST_CASE("Taylor-Hood inf-sup constant does not degrade") {
    const double b4 = inf_sup(MechSpaces(oracle::square(4, 4)));
    const double b8 = inf_sup(MechSpaces(oracle::square(8, 8)));
    CHECK(b4 > 0.0);
    CHECK(b8 / b4 >= 0.8);
  }

  TEST_CASE("rotating mesh and fibers together leaves the norms unchanged") {
    const double theta = 0.6;
    const Point c{0.5, 0.5};
    const auto base = oracle::square(5, 5);
    std::vector<Point> v = base->vertices();
    for (Point& p : v) {
      const Point d = p - c;
      p = c + Point{std::cos(theta) * d.x - std::sin(theta) * d.y, std::sin(theta) * d.x + std::cos(theta) * d.y};
    }
    const auto rotated = std::make_shared<const TriMesh>(std::move(v), base->triangles());

    const MechSpaces s0(base), s1(rotated);
    const ActivationParams act;
    const auto sys0 = assemble_mechanics(s0, bump(s0.pressure, c), fibers_for(s0, 0.2), act, {});
    const auto sys1 = assemble_mechanics(s1, bump(s1.pressure, c), fibers_for(s1, 0.2 + theta), act, {});
    const auto r0 = solve_mechanics(sys0, s0, 1e-12);
    const auto r1 = solve_mechanics(sys1, s1, 1e-12);
    REQUIRE(r0.converged);
    REQUIRE(r1.converged);
    CHECK(displacement_h1_sq(r0.state, s0) > 1e-10);
    CHECK(std::abs(std::sqrt(displacement_h1_sq(r0.state, s0)) - std::sqrt(displacement_h1_sq(r1.state, s1))) < 1e-8);
    CHECK(std::abs(std::sqrt(pressure_l2_sq(r0.state, s0)) - std::sqrt(pressure_l2_sq(r1.state, s1))) < 1e-8);
  }
}
