#include "cardio/driver.hpp"

#include <algorithm>
#include <cmath>

#include "cardio/diagnostics.hpp"

namespace cardio {

double EnergyEntry::operator[](int k) const {
  switch (k) {
    case 0: return v_l2sq;
    case 1: return w_l2sq;
    case 2: return gamma_l2sq;
    case 3: return grad_cumulative;
    case 4: return l4_cumulative;
    case 5: return u_h1sq;
    default: return p_l2sq;
  }
}

const char* EnergyEntry::name(int k) {
  static const char* names[] = {"v_l2sq", "w_l2sq", "gamma_l2sq", "grad_cumulative", "l4_cumulative", "u_h1sq", "p_l2sq"};
  return names[std::clamp(k, 0, count - 1)];
}

SimulationError::SimulationError(std::size_t step, const std::string& what, ElectricState checkpoint)
    : std::runtime_error("step " + std::to_string(step) + ": " + what), step_(step), checkpoint_(std::move(checkpoint)) {}

double initial_activation(double v) { return -0.3 * v / (2.0 - v); }

namespace {

double sample(const TriMesh& mesh, const Location& loc, const Vector& v) {
  const auto& tri = mesh.triangles()[loc.triangle];
  return loc.bary[0] * v[tri[0]] + loc.bary[1] * v[tri[1]] + loc.bary[2] * v[tri[2]];
}

Location locate_or_throw(const TriMesh& mesh, Point p) {
  const auto loc = mesh.locate(p);
  if (!loc) throw std::invalid_argument("probe point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                                        ") lies outside the mesh");
  return *loc;
}

}  // namespace

SimResult run_simulation(const SimConfig& config, const RunOptions& options) {
  config.validate();
  SimResult res;
  res.mesh = config.mesh.build();
  res.seed = config.seed;
  res.config_hash = config_hash(config);
  res.steps = config.steps();
  res.probe_points = config.probes;

  const TriMesh& mesh = *res.mesh;
  const FeSpace p1(res.mesh, 1, ValueRank::scalar);
  const SparseMatrix mass = assemble_mass(p1);
  const SparseMatrix unit_stiffness = assemble_stiffness(p1, Sym2::identity());
  const MechSpaces mspaces(res.mesh);
  const FiberField fibers = FiberField::rotated(mesh.num_triangles(), config.fiber_angle);
  const double dt = config.dt;

  std::vector<Location> probe_loc;
  for (const Point& p : config.probes) probe_loc.push_back(locate_or_throw(mesh, p));
  res.probes.assign(config.probes.size(), {});

  // Initial state.
  const double amp = config.stimulus_amplitude;
  const Vector v0 = p1.interpolate([amp](Point x) { return amp * initial_stimulus(x.x, x.y); });
  ElectricState state = split_potential(v0, Vector(v0.size(), 0.0), mass);
  Vector gamma(v0.size());
  for (std::size_t j = 0; j < v0.size(); ++j) gamma[j] = initial_activation(v0[j]);
  const Vector stimulus_load = assemble_load(p1, [amp](Point x) { return amp * initial_stimulus(x.x, x.y); });

  MechState mech = mspaces.zero_state();
  auto solve_mech = [&](std::size_t step) {
    const MechanicsSystem sys = assemble_mechanics(mspaces, gamma, fibers, config.activation, config.mechanics);
    // epsilon > 0: one artificial-compressibility step per refresh interval.
    const double eps = config.mechanics.epsilon;
    MechSolveResult sol = eps > 0.0 && step > 0
                              ? step_mechanics_regularized(mech, dt * config.refresh, eps, sys, mspaces)
                              : solve_mechanics(sys, mspaces, config.mechanics_tol, &mech);
    if (!sol.converged) throw SimulationError(step, "mechanics solve did not converge", state);
    mech = std::move(sol.state);
    res.divergence_residuals.push_back(sol.divergence_residual);
    res.mechanics_steps.push_back(step);
  };
  auto electric_system = [&] {
    return assemble_bidomain(p1, mass, field_gradients(mspaces.velocity, mech.u), config.conductivity, dt);
  };

  solve_mech(0);
  BidomainSystem bidomain = electric_system();

  EnergyEntry cumulative{};
  auto record = [&](std::size_t step, bool first) {
    res.times.push_back(static_cast<double>(step) * dt);
    for (std::size_t k = 0; k < probe_loc.size(); ++k) res.probes[k].push_back(sample(mesh, probe_loc[k], state.v));
    if (options.keep_history) res.v_history.push_back(state.v);
    EnergyEntry e = discrete_energy(state, gamma, mass, unit_stiffness, p1);
    add_mechanics_energy(e, mech, mspaces);
    cumulative = first ? accumulate(EnergyEntry{}, e, 0.0) : accumulate(cumulative, e, dt);
    res.energies.push_back(cumulative);
    const double ve_norm = std::sqrt(std::max(vec::dot(state.v_e, mass * state.v_e), 0.0));
    res.ve_mean_residual.push_back(std::abs(mass_weighted_mean(state.v_e, bidomain.mass_ones())) / (1.0 + ve_norm));
    if (std::find(config.snapshots.begin(), config.snapshots.end(), static_cast<int>(step)) != config.snapshots.end()) {
      res.snapshots.push_back({static_cast<int>(step), static_cast<double>(step) * dt, state.v, state.v_e, state.w, gamma,
                               mech.u, mech.p});
    }
  };
  record(0, true);

  const NoisePath noise(config.seed, dt, config.noise_modes);
  const bool draw_noise = options.force_noise_path || !config.deterministic();
  const Vector no_load;

  for (std::size_t n = 0; n < res.steps; ++n) {
    const double t = static_cast<double>(n) * dt;
    StepForcing f;
    f.applied_load = t < 0.01 ? std::span<const double>(stimulus_load) : std::span<const double>(no_load);
    f.beta_v = config.noise_v;
    f.beta_w = config.noise_w;
    if (draw_noise) {
      f.dW_v = noise.forcing(NoiseChannel::v, n);
      f.dW_w = noise.forcing(NoiseChannel::w, n);
    }
    const Vector w_old = state.w;
    const StepReport rep = step_bidomain(bidomain, state, f, config.ionic, config.electrics_tol);
    if (!rep.converged) throw SimulationError(n, "bidomain solve did not converge", state);
    for (double x : state.v) {
      if (!std::isfinite(x)) throw SimulationError(n, "transmembrane potential is not finite", state);
    }
    for (std::size_t j = 0; j < gamma.size(); ++j) gamma[j] += dt * g_act(gamma[j], w_old[j], config.activation);

    if ((n + 1) % static_cast<std::size_t>(config.refresh) == 0) {
      solve_mech(n + 1);
      bidomain = electric_system();
    }
    record(n + 1, false);
  }

  res.final_electric = std::move(state);
  res.final_gamma = std::move(gamma);
  res.final_mech = std::move(mech);
  return res;
}

EnsembleResult run_ensemble(const SimConfig& config, int n_paths, const RunOptions& options) {
  if (n_paths < 1) throw std::invalid_argument("ensemble needs at least one path");
  EnsembleResult out;
  for (int k = 0; k < n_paths; ++k) {
    SimConfig c = config;
    c.seed = derive_seed(config.seed, static_cast<std::uint64_t>(k));
    out.path_seeds.push_back(c.seed);
    try {
      out.paths.push_back(run_simulation(c, options));
    } catch (const std::exception& e) {
      out.failures.push_back("path " + std::to_string(k) + ": " + e.what());
    }
  }
  if (out.paths.empty()) return out;

  const std::size_t np = out.paths.front().probes.size();
  const std::size_t ns = out.paths.front().times.size();
  const double m = static_cast<double>(out.paths.size());
  out.stats.mean.assign(np, std::vector<double>(ns, 0.0));
  out.stats.variance.assign(np, std::vector<double>(ns, 0.0));
  for (std::size_t k = 0; k < np; ++k) {
    for (std::size_t s = 0; s < ns; ++s) {
      double mean = 0.0;
      for (const auto& r : out.paths) mean += r.probes[k][s];
      mean /= m;
      double var = 0.0;
      for (const auto& r : out.paths) var += (r.probes[k][s] - mean) * (r.probes[k][s] - mean);
      out.stats.mean[k][s] = mean;
      out.stats.variance[k][s] = out.paths.size() > 1 ? var / (m - 1.0) : 0.0;
    }
  }
  for (const auto& r : out.paths) out.stats.energy_sup.push_back(sup_over_time(r));
  return out;
}

std::vector<double> probe_trace(const SimResult& result, Point point) {
  const Location loc = locate_or_throw(*result.mesh, point);
  std::vector<double> out;
  out.reserve(result.v_history.size());
  for (const auto& v : result.v_history) out.push_back(sample(*result.mesh, loc, v));
  return out;
}

}  // namespace cardio
