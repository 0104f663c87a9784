#include "cardio/noise.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace cardio {

double NoiseCoeff::growth_constant() const {
  if (kind == NoiseKind::constant) return beta0 * beta0;
  return beta0 * beta0 * std::max(1.0, z_cap * z_cap);
}

double eval_coeff(const NoiseCoeff& c, double z) {
  if (c.kind == NoiseKind::constant) return c.beta0;
  const double cap = std::abs(c.beta0) * c.z_cap;
  return std::clamp(c.beta0 * z, -cap, cap);
}

std::string to_string(NoiseKind kind) { return kind == NoiseKind::constant ? "constant" : "linear_clipped"; }

NoiseKind noise_kind_from_string(const std::string& s) {
  if (s == "constant") return NoiseKind::constant;
  if (s == "linear_clipped" || s == "linear-clipped") return NoiseKind::linear_clipped;
  throw std::invalid_argument("unknown noise kind '" + s + "'");
}

namespace {

// splitmix64 finalizer
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t k) { return mix(mix(seed) ^ mix(k + 0x632be59bd9b4e019ULL)); }

double wiener_increment(std::uint64_t seed, NoiseChannel channel, std::uint64_t step, int mode, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("wiener_increment: dt must be positive");
  const std::uint64_t stream = derive_seed(derive_seed(seed, static_cast<std::uint64_t>(channel)),
                                           static_cast<std::uint64_t>(mode));
  std::mt19937_64 engine(derive_seed(stream, step));
  std::normal_distribution<double> normal(0.0, 1.0);
  return std::sqrt(dt) * normal(engine);
}

std::vector<double> wiener_increments(std::uint64_t seed, std::size_t n_steps, double dt, NoiseChannel channel) {
  std::vector<double> out(n_steps);
  for (std::size_t n = 0; n < n_steps; ++n) out[n] = wiener_increment(seed, channel, n, 1, dt);
  return out;
}

NoisePath::NoisePath(std::uint64_t seed, double dt, int modes) : seed_(seed), dt_(dt), modes_(modes) {
  if (!(dt > 0.0)) throw std::invalid_argument("NoisePath: dt must be positive");
  if (modes < 1) throw std::invalid_argument("NoisePath: at least one mode required");
}

double NoisePath::increment(NoiseChannel channel, std::uint64_t step, int mode) const {
  return wiener_increment(seed_, channel, step, mode, dt_);
}

double NoisePath::forcing(NoiseChannel channel, std::uint64_t step) const {
  double s = 0.0;
  for (int k = 1; k <= modes_; ++k) s += increment(channel, step, k) / k;
  return s;
}

}  // namespace cardio
