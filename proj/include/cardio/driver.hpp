#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cardio/config.hpp"
#include "cardio/electrics.hpp"
#include "cardio/mechanics.hpp"

namespace cardio {

/// Energy quantities after one step. The gradient and L^4 entries are
/// accumulated in time (sum of dt * value).
struct EnergyEntry {
  double v_l2sq = 0.0;
  double w_l2sq = 0.0;
  double gamma_l2sq = 0.0;
  double grad_cumulative = 0.0;
  double l4_cumulative = 0.0;
  double u_h1sq = 0.0;
  double p_l2sq = 0.0;

  static constexpr int count = 7;
  double operator[](int k) const;
  static const char* name(int k);
};

struct Snapshot {
  int iteration = 0;
  double time = 0.0;
  Vector v, v_e, w, gamma;  ///< P1 nodal
  Vector u;                 ///< P2 vector, component-blocked
  Vector p;                 ///< P1 nodal
};

struct SimResult {
  MeshPtr mesh;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  std::size_t steps = 0;
  std::vector<double> times;               ///< steps + 1 entries
  std::vector<Point> probe_points;
  std::vector<std::vector<double>> probes;  ///< [probe][step]
  std::vector<Vector> v_history;           ///< nodal v per step
  std::vector<EnergyEntry> energies;       ///< per step
  std::vector<double> ve_mean_residual;    ///< |mean v_e| / (1 + ||v_e||_{L^2}) per step
  std::vector<double> divergence_residuals;  ///< ||D u|| / ||u|| per mechanics solve
  std::vector<std::size_t> mechanics_steps;  ///< step index of each mechanics solve
  std::vector<Snapshot> snapshots;
  ElectricState final_electric;
  Vector final_gamma;
  MechState final_mech;
};

/// Raised when a solve fails inside the time loop; carries the last good
/// state as a diagnostic checkpoint.
class SimulationError : public std::runtime_error {
 public:
  SimulationError(std::size_t step, const std::string& what, ElectricState checkpoint);
  std::size_t step() const { return step_; }
  const ElectricState& checkpoint() const { return checkpoint_; }

 private:
  std::size_t step_;
  ElectricState checkpoint_;
};

struct RunOptions {
  /// Draw and apply noise increments even when both amplitudes are zero.
  bool force_noise_path = false;
  /// Keep the nodal v of every step (needed by probe_trace).
  bool keep_history = true;
};

SimResult run_simulation(const SimConfig& config, const RunOptions& options = {});

struct EnsembleStats {
  std::vector<std::vector<double>> mean;      ///< [probe][step]
  std::vector<std::vector<double>> variance;  ///< unbiased; zero for a single path
  std::vector<EnergyEntry> energy_sup;        ///< per path, sup over time
};

struct EnsembleResult {
  EnsembleStats stats;
  std::vector<SimResult> paths;
  std::vector<std::uint64_t> path_seeds;
  std::vector<std::string> failures;  ///< one message per failed path
};

/// Path k runs with seed derive_seed(config.seed, k).
EnsembleResult run_ensemble(const SimConfig& config, int n_paths, const RunOptions& options = {});

/// P1 interpolation of v at `point` for every stored step.
std::vector<double> probe_trace(const SimResult& result, Point point);

/// -0.3 v / (2 - v)
double initial_activation(double v);

}  // namespace cardio
