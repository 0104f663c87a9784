#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cardio/mechanics.hpp"
#include "cardio/noise.hpp"
#include "cardio/physics.hpp"

namespace cardio {

/// Structured unit square (nx, ny) unless a mesh file is given.
struct MeshSource {
  std::string file;
  int nx = 22;
  int ny = 22;

  MeshPtr build() const;
  friend bool operator==(const MeshSource&, const MeshSource&) = default;
};

struct SimConfig {
  MeshSource mesh;
  double dt = 0.0125;
  double T = 3.2;
  IonicParams ionic;
  ActivationParams activation;
  ConductivityParams conductivity;
  MechParams mechanics;
  NoiseCoeff noise_v;
  NoiseCoeff noise_w;
  int noise_modes = 1;
  std::uint64_t seed = 0;
  int refresh = 10;  ///< mechanics re-solve interval in steps
  double stimulus_amplitude = 1.0;
  double fiber_angle = 0.0;
  std::vector<Point> probes{{0.0, 0.5}, {0.5, 0.5}, {1.0, 0.5}};
  std::vector<int> snapshots;
  double electrics_tol = 1e-10;
  double mechanics_tol = 1e-10;

  /// Throws ParameterError.
  void validate() const;
  std::size_t steps() const;
  bool deterministic() const { return noise_v.beta0 == 0.0 && noise_w.beta0 == 0.0; }
  /// Sets the amplitude of both noise channels.
  void set_beta(double beta);

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& key, const std::string& what);
  int line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  int line_;
  std::string key_;
};

/// Flat `key = value` document; `#` starts a comment. Unknown keys, bad
/// values and invalid parameter combinations raise ConfigError.
SimConfig parse_config(std::string_view text);
SimConfig load_config_file(const std::string& path);
/// Canonical text: every key, fixed order, round-trip precision.
std::string serialize_config(const SimConfig& config);
/// FNV-1a 64 of the canonical text.
std::uint64_t config_hash(const SimConfig& config);
std::string hash_hex(std::uint64_t hash);

}  // namespace cardio
