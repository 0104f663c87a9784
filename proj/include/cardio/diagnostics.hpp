#pragma once

#include <span>
#include <string>
#include <vector>

#include "cardio/driver.hpp"

namespace cardio {

/// Instantaneous energies of one state. In the returned entry,
/// grad_cumulative holds ||grad v_i||^2 + ||grad v_e||^2 and l4_cumulative
/// holds ||v||_{L^4}^4 (the integrands that the driver accumulates in time);
/// the mechanical entries are zero.
EnergyEntry discrete_energy(const ElectricState& s, std::span<const double> gamma, const SparseMatrix& mass,
                            const SparseMatrix& stiffness, const FeSpace& p1);
void add_mechanics_energy(EnergyEntry& e, const MechState& m, const MechSpaces& spaces);
/// Time accumulation of the integrands: cumulative = previous + dt * instant.
EnergyEntry accumulate(const EnergyEntry& previous, const EnergyEntry& instant, double dt);

/// int v^4 with the assembly quadrature (exact for P1).
double l4_power4(const FeSpace& p1, std::span<const double> v);

struct BoundednessReport {
  EnergyEntry deterministic_sup;
  EnergyEntry ensemble_sup;  ///< max over paths of sup over time
  bool all_finite = true;
  double factor = 10.0;
  bool within_factor = true;
  int worst_component = -1;  ///< component with the largest ratio to the deterministic sup
  double worst_ratio = 0.0;
  /// Slope of the cumulative gradient energy over the second half of a path
  /// divided by the mean rate of the deterministic run, worst path.
  double grad_slope_ratio = 0.0;
  bool grad_linear = true;
};

/// Checks that every energy stays finite and below `factor` times its
/// deterministic supremum (quantities whose deterministic sup is zero are
/// only checked for finiteness), and that the cumulative dissipation grows at
/// most linearly: its second-half slope stays within `slope_tolerance` times
/// the deterministic mean rate.
BoundednessReport energy_boundedness_report(const std::vector<SimResult>& paths, const SimResult& deterministic,
                                            double factor = 10.0, double slope_tolerance = 10.0);

EnergyEntry sup_over_time(const SimResult& r);

/// Smallest generalized eigenvalue of the elastic form a(u, u) (stiffness with
/// sigma(gamma) plus alpha boundary mass) against the H^1 Gram matrix on the
/// P2 vector space. Dense; refuses meshes with more than max_dofs unknowns.
double coercivity_estimate(const MeshPtr& mesh, std::span<const double> gamma, double alpha,
                           const ActivationParams& act, const FiberField& fibers, std::size_t max_dofs = 2500);

struct WeakResidual {
  double intra = 0.0;   ///< ||K_i x - b_i|| / ||b_i||
  double extra = 0.0;   ///< same for the extracellular rows, on the constrained space
  double gating = 0.0;  ///< ||M (w+ - w - dt H - beta_w dW)|| / ||M w+||
  double activation = 0.0;
};

/// Residual of the discrete weak identities over one step (before -> after).
WeakResidual weak_residual(const BidomainSystem& sys, const ElectricState& before, const ElectricState& after,
                           const StepForcing& forcing, const IonicParams& ionic, std::span<const double> gamma_before,
                           std::span<const double> gamma_after, const ActivationParams& act);

struct EpsPressureRow {
  double epsilon = 0.0;
  double discrepancy = 0.0;  ///< (sum_n dt ||p_eps^n - p_saddle||_{L^2}^2)^{1/2}
};

/// Pseudo-time runs of the regularized mechanics from u = p = 0 with frozen
/// activation, compared to the saddle solution of the same data.
std::vector<EpsPressureRow> eps_pressure_study(const MechSpaces& spaces, const MechanicsSystem& sys,
                                               std::span<const double> eps_list, double dt, int steps);
/// Same on the configured mesh with the initial activation profile.
std::vector<EpsPressureRow> eps_pressure_study(const SimConfig& config, std::span<const double> eps_list,
                                               int steps = 40);

}  // namespace cardio
