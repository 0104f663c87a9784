#include "cardio/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cardio {

ConstraintProjector::ConstraintProjector(Vector normal) : normal_(std::move(normal)), norm_sq_(vec::dot(normal_, normal_)) {
  if (!(norm_sq_ > 0.0)) throw std::invalid_argument("constraint normal must be nonzero");
}

void ConstraintProjector::apply(std::span<double> x) const {
  const double c = vec::dot(normal_, x) / norm_sq_;
  vec::axpy(-c, normal_, x);
}

double ConstraintProjector::violation(std::span<const double> x) const {
  return std::abs(vec::dot(normal_, x)) / std::sqrt(norm_sq_);
}

CgResult solve_cg(const LinearOperator& A, std::span<const double> diagonal, std::span<const double> b,
                  const CgOptions& opts) {
  const std::size_t n = b.size();
  const int maxit = opts.max_iterations > 0 ? opts.max_iterations : static_cast<int>(10 * std::max<std::size_t>(n, 1));
  const auto* proj = opts.constraint;

  CgResult res;
  res.x.assign(n, 0.0);
  if (!opts.initial_guess.empty()) std::copy(opts.initial_guess.begin(), opts.initial_guess.end(), res.x.begin());
  if (proj) proj->apply(res.x);

  Vector bp(b.begin(), b.end());
  if (proj) proj->apply(bp);
  const double bnorm = vec::norm2(bp);
  if (bnorm == 0.0) {
    std::fill(res.x.begin(), res.x.end(), 0.0);
    res.converged = true;
    return res;
  }

  Vector inv_diag(n, 1.0);
  if (opts.jacobi && !diagonal.empty()) {
    for (std::size_t i = 0; i < n; ++i) inv_diag[i] = diagonal[i] > 0.0 ? 1.0 / diagonal[i] : 1.0;
  }
  auto precondition = [&](std::span<const double> r, std::span<double> z) {
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    if (proj) proj->apply(z);
  };

  Vector r(n), z(n), p(n), ap(n);
  auto true_residual = [&] {
    A(res.x, ap);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - ap[i];
    if (proj) proj->apply(r);
    return vec::norm2(r);
  };
  double rnorm = true_residual();
  Vector best = res.x;
  double best_norm = rnorm;
  int it = 0;

  // Restarts from the true residual when the recursive one has drifted.
  for (int restart = 0; restart < 4 && rnorm > opts.tol * bnorm && it < maxit && !res.indefinite; ++restart) {
    precondition(r, z);
    p = z;
    double rz = vec::dot(r, z);
    while (rnorm > opts.tol * bnorm && it < maxit) {
      A(p, ap);
      if (proj) proj->apply(ap);
      const double pap = vec::dot(p, ap);
      if (!(pap > 0.0)) {
        res.indefinite = pap < 0.0 || rz != 0.0;
        break;
      }
      const double alpha = rz / pap;
      vec::axpy(alpha, p, res.x);
      vec::axpy(-alpha, ap, r);
      ++it;
      rnorm = vec::norm2(r);
      if (opts.observer) opts.observer(it, res.x);
      if (rnorm < best_norm) {
        best_norm = rnorm;
        best = res.x;
      }
      precondition(r, z);
      const double rz_new = vec::dot(r, z);
      const double beta = rz_new / rz;
      rz = rz_new;
      for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    if (rnorm > best_norm) res.x = best;
    rnorm = true_residual();
  }

  res.iterations = it;
  res.relative_residual = rnorm / bnorm;
  res.converged = !res.indefinite && res.relative_residual <= opts.tol;
  return res;
}

CgResult solve_cg(const SparseMatrix& A, std::span<const double> b, const CgOptions& opts) {
  if (A.rows() != A.cols() || A.rows() != b.size()) throw std::invalid_argument("solve_cg: dimension mismatch");
  const Vector d = A.diagonal();
  return solve_cg([&A](std::span<const double> x, std::span<double> y) { A.multiply(x, y); }, d, b, opts);
}

SaddleResult solve_saddle(const SparseMatrix& A, const SparseMatrix& B, std::span<const double> f,
                          std::span<const double> g, const SaddleOptions& opts) {
  const std::size_t nu = A.rows();
  const std::size_t np = B.rows();
  if (A.cols() != nu || B.cols() != nu || f.size() != nu || g.size() != np) {
    throw std::invalid_argument("solve_saddle: dimension mismatch");
  }
  const double inner_tol = opts.inner_tol > 0.0 ? opts.inner_tol : std::max(std::min(1e-3 * opts.tol, 1e-13), 1e-15);
  const int max_outer = opts.max_outer > 0 ? opts.max_outer : static_cast<int>(10 * std::max<std::size_t>(np, 1));

  SaddleResult res;
  CgOptions inner;
  inner.tol = inner_tol;

  auto solve_a = [&](std::span<const double> rhs, std::span<const double> guess, bool& ok) {
    if (opts.inner_solver) return opts.inner_solver(rhs);
    CgOptions o = inner;
    o.initial_guess = guess;
    auto r = solve_cg(A, rhs, o);
    res.inner_iterations += r.iterations;
    if (r.indefinite) res.indefinite = true;
    ok = ok && r.converged;
    return std::move(r.x);
  };

  res.p.assign(np, 0.0);
  if (!opts.initial_p.empty()) std::copy(opts.initial_p.begin(), opts.initial_p.end(), res.p.begin());
  Vector btp(nu), rhs(nu), bu(np);
  bool inner_ok = true;

  auto velocity_for = [&](std::span<const double> guess) {
    B.multiply_transpose(res.p, btp);
    for (std::size_t i = 0; i < nu; ++i) rhs[i] = f[i] - btp[i];
    return solve_a(rhs, guess, inner_ok);
  };

  res.u = velocity_for(opts.initial_u);
  const double gnorm = vec::norm2(g);
  auto constraint_target = [&] { return opts.tol * std::max({gnorm, vec::norm2(res.u), 1e-300}); };

  // Schur residual r = B u - g; restarted if the recursion drifts from the true residual.
  for (int restart = 0; restart < 4 && !res.indefinite; ++restart) {
    Vector r(np), d(np), sd(np), bt(nu), z_r(np);
    auto precondition = [&] {
      for (std::size_t i = 0; i < np; ++i) z_r[i] = opts.schur_diagonal.empty() ? r[i] : r[i] / opts.schur_diagonal[i];
    };
    B.multiply(res.u, bu);
    for (std::size_t i = 0; i < np; ++i) r[i] = bu[i] - g[i];
    if (vec::norm2(r) <= constraint_target()) break;
    precondition();
    double rz = vec::dot(r, z_r);
    d = z_r;
    while (res.outer_iterations < max_outer) {
      B.multiply_transpose(d, bt);
      const Vector z = solve_a(bt, {}, inner_ok);
      B.multiply(z, sd);
      const double dsd = vec::dot(d, sd);
      if (!(dsd > 0.0)) {
        if (dsd < 0.0) res.indefinite = true;
        break;
      }
      const double alpha = rz / dsd;
      vec::axpy(alpha, d, res.p);
      vec::axpy(-alpha, z, res.u);
      vec::axpy(-alpha, sd, r);
      ++res.outer_iterations;
      if (vec::norm2(r) <= constraint_target()) break;
      precondition();
      const double rz_new = vec::dot(r, z_r);
      const double beta = rz_new / rz;
      rz = rz_new;
      for (std::size_t i = 0; i < np; ++i) d[i] = z_r[i] + beta * d[i];
    }
    // Recompute the velocity from the pressure to remove recursion drift.
    const Vector guess = res.u;
    res.u = velocity_for(guess);
    B.multiply(res.u, bu);
    for (std::size_t i = 0; i < np; ++i) bu[i] -= g[i];
    if (vec::norm2(bu) <= constraint_target() || res.outer_iterations >= max_outer) break;
  }

  Vector au = A * res.u;
  B.multiply_transpose(res.p, btp);
  for (std::size_t i = 0; i < nu; ++i) au[i] += btp[i] - f[i];
  const double fnorm = vec::norm2(f);
  res.momentum_residual = fnorm > 0.0 ? vec::norm2(au) / fnorm : vec::norm2(au);
  B.multiply(res.u, bu);
  for (std::size_t i = 0; i < np; ++i) bu[i] -= g[i];
  const double scale = std::max(gnorm, vec::norm2(res.u));
  res.constraint_residual = scale > 0.0 ? vec::norm2(bu) / scale : vec::norm2(bu);
  // Inner solves only need to be accurate enough for the final residuals.
  res.converged = !res.indefinite && res.momentum_residual <= opts.tol && res.constraint_residual <= opts.tol;
  return res;
}

}  // namespace cardio
