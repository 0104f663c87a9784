#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cardio {

enum class NoiseKind { constant, linear_clipped };

/// Noise amplitude beta(z). Constant: beta0. Linear-clipped: beta0 * z
/// clipped to |.| <= beta0 * z_cap.
struct NoiseCoeff {
  NoiseKind kind = NoiseKind::constant;
  double beta0 = 0.0;
  double z_cap = 1.0;

  /// C_beta with |beta(z)|^2 <= C (1 + z^2) and |beta(z1) - beta(z2)| <= sqrt(C) |z1 - z2|.
  double growth_constant() const;
  friend bool operator==(const NoiseCoeff&, const NoiseCoeff&) = default;
};

double eval_coeff(const NoiseCoeff& c, double z);

std::string to_string(NoiseKind kind);
NoiseKind noise_kind_from_string(const std::string& s);

enum class NoiseChannel : std::uint64_t { v = 1, w = 2 };

/// Mixes (seed, k) into an independent 64-bit sub-seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t k);

/// Single Wiener increment ~ N(0, dt), a pure function of its arguments.
double wiener_increment(std::uint64_t seed, NoiseChannel channel, std::uint64_t step, int mode, double dt);

/// Increments 0..n_steps-1 of one channel (mode 1).
std::vector<double> wiener_increments(std::uint64_t seed, std::size_t n_steps, double dt, NoiseChannel channel);

/// Seeded Brownian forcing for both channels. With more than one mode, the
/// forcing of a channel is sum_k k^{-1} dW_k with spatially constant modes.
class NoisePath {
 public:
  NoisePath(std::uint64_t seed, double dt, int modes = 1);

  std::uint64_t seed() const { return seed_; }
  double dt() const { return dt_; }
  int modes() const { return modes_; }

  double increment(NoiseChannel channel, std::uint64_t step, int mode = 1) const;
  /// Mode-weighted forcing entering the equations at this step.
  double forcing(NoiseChannel channel, std::uint64_t step) const;

 private:
  std::uint64_t seed_;
  double dt_;
  int modes_;
};

}  // namespace cardio
