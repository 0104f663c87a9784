#pragma once

#include <optional>
#include <span>

#include "cardio/assembly.hpp"
#include "cardio/noise.hpp"
#include "cardio/physics.hpp"
#include "cardio/solvers.hpp"

namespace cardio {

/// Initial transmembrane potential: a smoothed half disc of radius 0.18
/// centered at (0, 0.5).
double initial_stimulus(double x, double y);

/// Applied current: initial_stimulus(x, y) for 0 <= t < 0.01, zero afterwards.
double applied_current(double t, double x, double y);

/// Nodal P1 coefficients of the electrical unknowns.
struct ElectricState {
  Vector v_i;
  Vector v_e;
  Vector v;
  Vector w;
};

/// Linear algebra of one semi-implicit bidomain step for the unknown pair
/// (v_i, v_e):
///
///   [ M/dt + A_i    -M/dt     ] [v_i]
///   [ -M/dt       M/dt + A_e  ] [v_e]
///
/// The operator is symmetric positive semidefinite with kernel (1, 1); the
/// extracellular block is constrained to mass-weighted mean zero, which
/// removes the kernel.
class BidomainSystem {
 public:
  BidomainSystem(SparseMatrix mass, SparseMatrix a_i, SparseMatrix a_e, double dt);

  const SparseMatrix& mass() const { return mass_; }
  const SparseMatrix& a_i() const { return a_i_; }
  const SparseMatrix& a_e() const { return a_e_; }
  const SparseMatrix& block() const { return block_; }
  const ConstraintProjector& constraint() const { return constraint_; }
  /// M 1: integrals of the nodal basis functions.
  const Vector& mass_ones() const { return mass_ones_; }
  double area() const { return area_; }
  double dt() const { return dt_; }
  std::size_t size() const { return mass_.rows(); }

 private:
  SparseMatrix mass_, a_i_, a_e_, block_;
  Vector mass_ones_;
  double area_;
  double dt_;
  ConstraintProjector constraint_;
};

/// Builds A_i, A_e with conductivities F^{-1} K F^{-T} evaluated from the
/// displacement gradient at every quadrature point (grad_u empty means zero).
BidomainSystem assemble_bidomain(const FeSpace& p1, const GradientField& grad_u, const ConductivityParams& params,
                                 double dt);
BidomainSystem assemble_bidomain(const FeSpace& p1, const SparseMatrix& mass, const GradientField& grad_u,
                                 const ConductivityParams& params, double dt);

/// Explicit data of one step.
struct StepForcing {
  std::span<const double> applied_load;  ///< assembled int I_app phi (empty = none)
  double dW_v = 0.0;
  double dW_w = 0.0;
  NoiseCoeff beta_v{};
  NoiseCoeff beta_w{};
};

struct StepReport {
  bool converged = false;
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Right-hand sides of the symmetric block system for the given forcing.
Vector bidomain_rhs(const BidomainSystem& sys, const ElectricState& s, const StepForcing& f, const IonicParams& ionic);

/// Advances (v_i, v_e, v, w) by one step: diffusion implicit, ionic current,
/// gating kinetics and noise explicit. The state is left untouched when the
/// linear solve does not converge.
StepReport step_bidomain(const BidomainSystem& sys, ElectricState& s, const StepForcing& f, const IonicParams& ionic,
                         double tol = 1e-10);

/// Removes the mass-weighted mean: returns v_e - (1^T M v_e / 1^T M 1) 1.
Vector enforce_zero_mean(std::span<const double> v_e, const SparseMatrix& mass);

/// |1^T M v_e| / |O|
double mass_weighted_mean(std::span<const double> v_e, const Vector& mass_ones);

/// Splits v into (v_i, v_e) = (v/2 + c, -v/2 + c) with c chosen so that v_e
/// has mass-weighted mean zero.
ElectricState split_potential(std::span<const double> v, std::span<const double> w, const SparseMatrix& mass);

}  // namespace cardio
