#include "cardio/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "eigen_bridge.hpp"

namespace cardio {

double l4_power4(const FeSpace& p1, std::span<const double> v) {
  const auto& mesh = p1.mesh();
  const auto& rule = default_triangle_rule();
  const ScalarField vq = field_values(p1, v);
  double s = 0.0;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const double a2 = 2.0 * mesh.area(static_cast<Index>(t));
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double x = vq[t * rule.size() + q];
      s += a2 * rule.weights[q] * x * x * x * x;
    }
  }
  return s;
}

EnergyEntry discrete_energy(const ElectricState& s, std::span<const double> gamma, const SparseMatrix& mass,
                            const SparseMatrix& stiffness, const FeSpace& p1) {
  auto quad = [](const SparseMatrix& m, std::span<const double> x) { return vec::dot(x, m * x); };
  EnergyEntry e;
  e.v_l2sq = quad(mass, s.v);
  e.w_l2sq = quad(mass, s.w);
  e.gamma_l2sq = quad(mass, gamma);
  e.grad_cumulative = quad(stiffness, s.v_i) + quad(stiffness, s.v_e);
  e.l4_cumulative = l4_power4(p1, s.v);
  return e;
}

void add_mechanics_energy(EnergyEntry& e, const MechState& m, const MechSpaces& spaces) {
  e.u_h1sq = displacement_h1_sq(m, spaces);
  e.p_l2sq = pressure_l2_sq(m, spaces);
}

EnergyEntry accumulate(const EnergyEntry& previous, const EnergyEntry& instant, double dt) {
  EnergyEntry e = instant;
  e.grad_cumulative = previous.grad_cumulative + dt * instant.grad_cumulative;
  e.l4_cumulative = previous.l4_cumulative + dt * instant.l4_cumulative;
  return e;
}

EnergyEntry sup_over_time(const SimResult& r) {
  double s[EnergyEntry::count] = {};
  for (const auto& e : r.energies) {
    for (int k = 0; k < EnergyEntry::count; ++k) {
      // NaN propagates so that non-finite runs are detected downstream.
      s[k] = std::isnan(e[k]) || std::isnan(s[k]) ? std::numeric_limits<double>::quiet_NaN() : std::max(s[k], e[k]);
    }
  }
  return {s[0], s[1], s[2], s[3], s[4], s[5], s[6]};
}

namespace {

// Slope of the cumulative gradient energy over the second half of the run.
double second_half_slope(const SimResult& r) {
  const std::size_t n = r.energies.size();
  if (n < 3) return 0.0;
  const std::size_t a = n / 2, b = n - 1;
  return (r.energies[b].grad_cumulative - r.energies[a].grad_cumulative) / (r.times[b] - r.times[a]);
}

}  // namespace

BoundednessReport energy_boundedness_report(const std::vector<SimResult>& paths, const SimResult& deterministic,
                                            double factor, double slope_tolerance) {
  BoundednessReport rep;
  rep.factor = factor;
  rep.deterministic_sup = sup_over_time(deterministic);
  double ens[EnergyEntry::count] = {};
  std::vector<const SimResult*> all{&deterministic};
  for (const auto& p : paths) all.push_back(&p);
  for (const auto& p : paths) {
    const EnergyEntry s = sup_over_time(p);
    for (int k = 0; k < EnergyEntry::count; ++k) {
      if (!std::isfinite(s[k])) rep.all_finite = false;
      ens[k] = std::max(ens[k], s[k]);
    }
  }
  rep.ensemble_sup = {ens[0], ens[1], ens[2], ens[3], ens[4], ens[5], ens[6]};
  for (int k = 0; k < EnergyEntry::count; ++k) {
    if (!std::isfinite(rep.deterministic_sup[k])) rep.all_finite = false;
    const double d = rep.deterministic_sup[k];
    if (d <= 0.0) continue;
    const double ratio = ens[k] / d;
    if (ratio > rep.worst_ratio) {
      rep.worst_ratio = ratio;
      rep.worst_component = k;
    }
  }
  rep.within_factor = rep.all_finite && rep.worst_ratio <= factor;
  // Reference rate: mean dissipation rate of the deterministic run.
  const std::size_t nd = deterministic.energies.size();
  const double span = nd > 1 ? deterministic.times.back() - deterministic.times.front() : 0.0;
  const double rate = span > 0.0 ? deterministic.energies.back().grad_cumulative / span : 0.0;
  for (const SimResult* p : all) {
    const double slope = second_half_slope(*p);
    const double ratio = rate > 0.0 ? slope / rate : (slope > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    rep.grad_slope_ratio = std::max(rep.grad_slope_ratio, ratio);
  }
  rep.grad_linear = std::isfinite(rep.grad_slope_ratio) && rep.grad_slope_ratio <= slope_tolerance;
  return rep;
}

double coercivity_estimate(const MeshPtr& mesh, std::span<const double> gamma, double alpha,
                           const ActivationParams& act, const FiberField& fibers, std::size_t max_dofs) {
  const FeSpace vel(mesh, 2, ValueRank::vector);
  if (vel.dof_count() > max_dofs) {
    throw std::invalid_argument("coercivity_estimate: " + std::to_string(vel.dof_count()) +
                                " unknowns exceed the dense limit of " + std::to_string(max_dofs));
  }
  const FeSpace p1(mesh, 1, ValueRank::scalar);
  if (gamma.size() != p1.dof_count()) throw std::invalid_argument("coercivity_estimate: activation field has wrong size");
  const auto& rule = default_triangle_rule();
  const ScalarField gq = field_values(p1, gamma);
  TensorField sigma(gq.size());
  for (std::size_t t = 0; t < mesh->num_triangles(); ++t) {
    for (std::size_t q = 0; q < rule.size(); ++q) {
      sigma[t * rule.size() + q] = sigma_tensor(gq[t * rule.size() + q], fibers[t], act);
    }
  }
  const SparseMatrix a = combine(1.0, assemble_stiffness(vel, sigma), 1.0, assemble_boundary_mass(vel, alpha));
  const SparseMatrix g = combine(1.0, assemble_mass(vel), 1.0, assemble_stiffness(vel, Sym2::identity()));
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(detail::to_dense(a), detail::to_dense(g),
                                                               Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("coercivity_estimate: eigensolver failed");
  return es.eigenvalues().minCoeff();
}

WeakResidual weak_residual(const BidomainSystem& sys, const ElectricState& before, const ElectricState& after,
                           const StepForcing& forcing, const IonicParams& ionic, std::span<const double> gamma_before,
                           std::span<const double> gamma_after, const ActivationParams& act) {
  const std::size_t n = sys.size();
  const Vector b = bidomain_rhs(sys, before, forcing, ionic);
  Vector x(2 * n);
  std::copy(after.v_i.begin(), after.v_i.end(), x.begin());
  std::copy(after.v_e.begin(), after.v_e.end(), x.begin() + static_cast<std::ptrdiff_t>(n));
  Vector r = sys.block() * x;
  for (std::size_t j = 0; j < 2 * n; ++j) r[j] -= b[j];

  const std::span<double> ri(r.data(), n), re(r.data() + n, n);
  const std::span<const double> bi(b.data(), n), be(b.data() + n, n);
  // The extracellular identity is tested only with mean-zero functions.
  const Vector& m1 = sys.mass_ones();
  const double c = vec::dot(m1, re) / vec::dot(m1, m1);
  for (std::size_t j = 0; j < n; ++j) re[j] -= c * m1[j];

  auto rel = [](std::span<const double> num, std::span<const double> den) {
    const double d = vec::norm2(den);
    return d > 0.0 ? vec::norm2(num) / d : vec::norm2(num);
  };
  WeakResidual out;
  out.intra = rel(ri, bi);
  out.extra = rel(re, be);

  const double dt = sys.dt();
  Vector gw(n), gg(n);
  for (std::size_t j = 0; j < n; ++j) {
    gw[j] = after.w[j] - before.w[j] - dt * h_kin(before.v[j], before.w[j], ionic) -
            eval_coeff(forcing.beta_w, before.v[j]) * forcing.dW_w;
    gg[j] = gamma_after[j] - gamma_before[j] - dt * g_act(gamma_before[j], before.w[j], act);
  }
  out.gating = rel(sys.mass() * gw, sys.mass() * after.w);
  out.activation = rel(sys.mass() * gg, sys.mass() * Vector(gamma_after.begin(), gamma_after.end()));
  return out;
}

std::vector<EpsPressureRow> eps_pressure_study(const MechSpaces& spaces, const MechanicsSystem& sys,
                                               std::span<const double> eps_list, double dt, int steps) {
  const MechSolveResult saddle = solve_mechanics(sys, spaces, 1e-12);
  if (!saddle.converged) throw std::runtime_error("eps_pressure_study: saddle solve did not converge");
  std::vector<EpsPressureRow> rows;
  for (double eps : eps_list) {
    MechState s = spaces.zero_state();
    double acc = 0.0;
    for (int n = 0; n < steps; ++n) {
      MechSolveResult r = step_mechanics_regularized(s, dt, eps, sys, spaces);
      if (!r.converged) throw std::runtime_error("eps_pressure_study: regularized step failed");
      s = std::move(r.state);
      Vector dp = s.p;
      vec::axpy(-1.0, saddle.state.p, dp);
      acc += dt * vec::dot(dp, spaces.pressure_mass * dp);
    }
    rows.push_back({eps, std::sqrt(acc)});
  }
  return rows;
}

std::vector<EpsPressureRow> eps_pressure_study(const SimConfig& config, std::span<const double> eps_list, int steps) {
  const MeshPtr mesh = config.mesh.build();
  const MechSpaces spaces(mesh);
  // Contracting bump centred in the domain.
  const Vector gamma = spaces.pressure.interpolate(
      [](Point x) { return 0.5 * std::exp(-((x.x - 0.5) * (x.x - 0.5) + (x.y - 0.5) * (x.y - 0.5)) / 0.05); });
  const FiberField fibers = FiberField::rotated(mesh->num_triangles(), config.fiber_angle);
  const MechanicsSystem sys = assemble_mechanics(spaces, gamma, fibers, config.activation, config.mechanics);
  return eps_pressure_study(spaces, sys, eps_list, config.dt, steps);
}

}  // namespace cardio
