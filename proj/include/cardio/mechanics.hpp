#pragma once

#include <span>

#include "cardio/assembly.hpp"
#include "cardio/physics.hpp"
#include "cardio/solvers.hpp"

namespace cardio {

struct MechParams {
  double alpha = 1.0;  ///< Robin coefficient
  Point g{};           ///< constant body force
  double epsilon = 0.0;

  void validate() const;
  friend bool operator==(const MechParams&, const MechParams&) = default;
};

/// Displacement (P2 vector) and pressure (P1) coefficients.
struct MechState {
  Vector u;
  Vector p;
};

/// Taylor-Hood spaces on one mesh plus the mass-type matrices that do not
/// depend on the activation.
struct MechSpaces {
  explicit MechSpaces(MeshPtr mesh);

  FeSpace velocity;
  FeSpace pressure;
  SparseMatrix velocity_mass;
  SparseMatrix velocity_laplace;  ///< unit-coefficient stiffness
  SparseMatrix pressure_mass;
  Vector pressure_lumped;
  SparseMatrix divergence;  ///< D: rows pressure, entry int q div(phi)

  MechState zero_state() const;
};

/// Discrete problem  A u - D^T p = F,  D u = 0  with
/// A = stiffness(sigma) + alpha boundary mass and
/// F = -int sigma : grad v + int_{boundary} (sigma n) . v + int g . v.
struct MechanicsSystem {
  SparseMatrix stiffness;
  SparseMatrix boundary;
  SparseMatrix A;
  Vector rhs;
  double mu = 1.0;
};

/// gamma holds nodal P1 values; fibers one frame per triangle.
MechanicsSystem assemble_mechanics(const MechSpaces& spaces, std::span<const double> gamma, const FiberField& fibers,
                                   const ActivationParams& act, const MechParams& params);

struct MechSolveResult {
  MechState state;
  bool converged = false;
  int iterations = 0;
  double momentum_residual = 0.0;
  double divergence_residual = 0.0;  ///< ||D u|| / max(||u||, tiny)
};

/// Saddle-point solve. A previous state, when given, warm-starts the pressure.
MechSolveResult solve_mechanics(const MechanicsSystem& sys, const MechSpaces& spaces, double tol = 1e-10,
                                const MechState* previous = nullptr);

/// One implicit Euler step of
///   eps M (u - u_n)/dt + A u - D^T p = F,   eps L (p - p_n)/dt + D u = 0
/// with L the lumped pressure mass.
MechSolveResult step_mechanics_regularized(const MechState& state, double dt, double epsilon,
                                           const MechanicsSystem& sys, const MechSpaces& spaces);

/// int p recovered from the momentum equation tested with v = (x, 0):
/// x^T (A u - F).
double pressure_offset(const MechState& state, const MechanicsSystem& sys, const MechSpaces& spaces);
/// 1^T M_p p
double pressure_integral(const MechState& state, const MechSpaces& spaces);

/// ||u||_{H^1}^2 and ||p||_{L^2}^2
double displacement_h1_sq(const MechState& state, const MechSpaces& spaces);
double pressure_l2_sq(const MechState& state, const MechSpaces& spaces);

}  // namespace cardio
