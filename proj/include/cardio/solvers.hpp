#pragma once

#include <functional>
#include <span>

#include "cardio/sparse.hpp"

namespace cardio {

/// Euclidean-orthogonal projector onto the hyperplane {x : n . x = 0}.
/// With n = M 1 (restricted to a block) this is the "mass-weighted
/// mean zero" constraint.
class ConstraintProjector {
 public:
  explicit ConstraintProjector(Vector normal);

  void apply(std::span<double> x) const;
  /// |n . x| / |n|
  double violation(std::span<const double> x) const;
  const Vector& normal() const { return normal_; }

 private:
  Vector normal_;
  double norm_sq_;
};

/// y = A x for a matrix-free symmetric operator.
using LinearOperator = std::function<void(std::span<const double>, std::span<double>)>;

struct CgOptions {
  double tol = 1e-10;              ///< relative residual target ||Ax - b|| <= tol ||b||
  int max_iterations = 0;          ///< 0 means 10 * size
  bool jacobi = true;              ///< diagonal scaling
  const ConstraintProjector* constraint = nullptr;
  std::span<const double> initial_guess{};
  /// Called after every iteration with the current iterate.
  std::function<void(int, std::span<const double>)> observer{};
};

struct CgResult {
  Vector x;
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
  bool indefinite = false;  ///< a search direction with p.Ap <= 0 was met
};

/// Preconditioned conjugate gradients. With a constraint, the iteration is
/// confined to the constraint hyperplane (every iterate satisfies it).
/// On non-convergence the best iterate is returned with converged = false.
CgResult solve_cg(const SparseMatrix& A, std::span<const double> b, const CgOptions& opts = {});
CgResult solve_cg(const LinearOperator& A, std::span<const double> diagonal, std::span<const double> b,
                  const CgOptions& opts = {});

struct SaddleOptions {
  double tol = 1e-10;
  int max_outer = 0;       ///< 0 means 10 * pressure size
  double inner_tol = 0.0;  ///< 0 means min(1e-3 tol, 1e-13) floored at 1e-15
  std::span<const double> initial_u{};
  std::span<const double> initial_p{};
  /// Exact solver for A (e.g. a factorization); inner CG when empty.
  std::function<Vector(std::span<const double>)> inner_solver{};
  /// Diagonal approximation of the Schur complement used as preconditioner
  /// (e.g. lumped pressure mass scaled by 1/mu); none when empty.
  std::span<const double> schur_diagonal{};
};

struct SaddleResult {
  Vector u;
  Vector p;
  int outer_iterations = 0;
  int inner_iterations = 0;
  double momentum_residual = 0.0;    ///< ||A u + B^T p - f|| / ||f||
  double constraint_residual = 0.0;  ///< ||B u - g|| / max(||g||, ||u||)
  bool converged = false;
  bool indefinite = false;
};

/// Solves [[A, B^T], [B, 0]] (u, p) = (f, g) for SPD A by conjugate
/// gradients on the pressure Schur complement B A^{-1} B^T, with inner CG
/// solves on A.
SaddleResult solve_saddle(const SparseMatrix& A, const SparseMatrix& B, std::span<const double> f,
                          std::span<const double> g, const SaddleOptions& opts = {});

}  // namespace cardio
