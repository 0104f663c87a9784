#include <doctest.h>

#include <cmath>

#include "cardio/config.hpp"
#include "cardio/driver.hpp"
#include "oracles.hpp"

using namespace cardio;

namespace {

SimConfig small(double T = 0.25) {
  SimConfig c;
  c.mesh = {"", 8, 8};
  c.T = T;
  c.refresh = 5;
  return c;
}

bool identical(const SimResult& a, const SimResult& b) {
  if (a.probes != b.probes || a.v_history != b.v_history || a.times != b.times) return false;
  if (a.final_electric.v_e != b.final_electric.v_e || a.final_electric.w != b.final_electric.w) return false;
  if (a.final_gamma != b.final_gamma || a.final_mech.u != b.final_mech.u || a.final_mech.p != b.final_mech.p) return false;
  for (std::size_t i = 0; i < a.energies.size(); ++i) {
    for (int k = 0; k < EnergyEntry::count; ++k) {
      if (a.energies[i][k] != b.energies[i][k]) return false;
    }
  }
  return true;
}

double rel_l2(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_SUITE("driver") {
  TEST_CASE("initial activation profile") {
    CHECK(initial_activation(0.0) == 0.0);
    CHECK(std::abs(initial_activation(1.0) + 0.3) < 1e-15);
    CHECK(initial_activation(0.5) < 0.0);
  }

  TEST_CASE("T = 0 keeps only the initial state") {
    const SimResult r = run_simulation(small(0.0));
    CHECK(r.steps == 0);
    CHECK(r.times.size() == 1);
    REQUIRE(r.probes.size() == 3);
    for (const auto& p : r.probes) CHECK(p.size() == 1);
    CHECK(r.v_history.size() == 1);
    CHECK(r.energies.size() == 1);
    // Initial state: stimulus at the nodes, split into mean-free v_e
    // (v is rebuilt as v_i - v_e, hence the rounding tolerance).
    const auto& v0 = r.v_history[0];
    for (std::size_t j = 0; j < v0.size(); ++j) {
      const Point p = r.mesh->vertex(static_cast<Index>(j));
      CHECK(std::abs(v0[j] - initial_stimulus(p.x, p.y)) < 1e-12);
      CHECK(std::abs(r.final_gamma[j] - initial_activation(initial_stimulus(p.x, p.y))) < 1e-15);
      CHECK(std::abs(r.final_electric.v_i[j] - r.final_electric.v_e[j] - v0[j]) < 1e-12);
    }
    CHECK(r.probes[0][0] > 0.99);
  }

  TEST_CASE("series lengths and invariants") {
    const SimConfig c = small();
    const SimResult r = run_simulation(c);
    CHECK(r.steps == 20);
    CHECK(r.times.size() == 21);
    CHECK(std::abs(r.times.back() - 0.25) < 1e-12);
    for (const auto& p : r.probes) CHECK(p.size() == 21);
    CHECK(r.ve_mean_residual.size() == 21);
    for (double x : r.ve_mean_residual) CHECK(x <= 1e-10);
    // Initial solve plus one every `refresh` steps.
    CHECK(r.mechanics_steps.size() == 1 + 20 / 5);
    for (double d : r.divergence_residuals) CHECK(d <= 1e-8);
    CHECK(r.config_hash == config_hash(c));
  }

  TEST_CASE("deterministic runs are reproducible bit for bit") {
    const SimConfig c = small();
    const SimResult a = run_simulation(c);
    const SimResult b = run_simulation(c);
    CHECK(identical(a, b));
    RunOptions forced;
    forced.force_noise_path = true;
    CHECK(identical(a, run_simulation(c, forced)));
  }

  TEST_CASE("noisy runs are reproducible per seed") {
    SimConfig c = small();
    c.set_beta(0.5);
    c.seed = 17;
    const SimResult a = run_simulation(c);
    CHECK(identical(a, run_simulation(c)));
    c.seed = 18;
    CHECK_FALSE(identical(a, run_simulation(c)));
  }

  TEST_CASE("probe traces") {
    const SimResult r = run_simulation(small(0.05));
    // At a vertex: the nodal values.
    const Index vtx = 13;
    const auto at_vertex = probe_trace(r, r.mesh->vertex(vtx));
    for (std::size_t i = 0; i < at_vertex.size(); ++i) CHECK(std::abs(at_vertex[i] - r.v_history[i][vtx]) < 1e-14);
    // At a barycenter: the mean of the three corners.
    const Index t = 40;
    const auto tri = r.mesh->triangles()[t];
    const auto at_center = probe_trace(r, r.mesh->centroid(t));
    for (std::size_t i = 0; i < at_center.size(); ++i) {
      const double mean = (r.v_history[i][tri[0]] + r.v_history[i][tri[1]] + r.v_history[i][tri[2]]) / 3.0;
      CHECK(std::abs(at_center[i] - mean) < 1e-14);
    }
    CHECK_THROWS(probe_trace(r, {2.0, 0.5}));

    SimResult zero = r;
    for (auto& v : zero.v_history) std::fill(v.begin(), v.end(), 0.0);
    for (double x : probe_trace(zero, {0.31, 0.77})) CHECK(x == 0.0);
  }

  TEST_CASE("ensembles") {
    SimConfig c = small(0.1);
    const EnsembleResult one = run_ensemble(c, 1);
    for (const auto& v : one.stats.variance) {
      for (double x : v) CHECK(x == 0.0);
    }
    const EnsembleResult det = run_ensemble(c, 4);
    CHECK(det.paths.size() == 4);
    CHECK(det.failures.empty());
    for (const auto& v : det.stats.variance) {
      for (double x : v) CHECK(x == 0.0);
    }
    CHECK(identical(det.paths[0], det.paths[3]));

    c.set_beta(0.5);
    c.seed = 3;
    const EnsembleResult noisy = run_ensemble(c, 3);
    CHECK(noisy.path_seeds[1] == derive_seed(3, 1));
    CHECK(noisy.paths[1].seed == derive_seed(3, 1));
    CHECK(noisy.stats.variance[1].back() > 0.0);
    for (const auto& v : noisy.stats.variance) {
      for (double x : v) CHECK(x >= 0.0);
    }
    CHECK(noisy.stats.energy_sup.size() == 3);
    CHECK_THROWS(run_ensemble(c, 0));
  }

  TEST_CASE("artificial-compressibility mechanics approaches the saddle run as epsilon shrinks") {
    const SimConfig c = small();
    const SimResult saddle = run_simulation(c);
    auto run_eps = [&](double eps) {
      SimConfig e = c;
      e.mechanics.epsilon = eps;
      return run_simulation(e);
    };
    const SimResult coarse = run_eps(1e-1), fine = run_eps(1e-3);
    const double d_coarse = oracle::max_abs_diff(coarse.final_mech.u, saddle.final_mech.u);
    const double d_fine = oracle::max_abs_diff(fine.final_mech.u, saddle.final_mech.u);
    CHECK(d_coarse > 0.0);
    CHECK(d_fine < 0.1 * d_coarse);
    MESSAGE("u gap " << d_coarse << " -> " << d_fine << ", probe change " << rel_l2(fine.probes[1], saddle.probes[1]));
    CHECK(rel_l2(fine.probes[1], saddle.probes[1]) < 1e-3);
  }

  TEST_CASE("doubling the mechanics refresh interval barely changes the probes") {
    // Full default configuration (22x22 mesh, 256 steps).
    SimConfig c;
    RunOptions o;
    o.keep_history = false;
    const SimResult a = run_simulation(c, o);
    c.refresh *= 2;
    const SimResult b = run_simulation(c, o);
    for (std::size_t k = 0; k < a.probes.size(); ++k) {
      const double d = rel_l2(b.probes[k], a.probes[k]);
      MESSAGE("probe " << k << " relative L2 change " << d);
      CHECK(d < 0.05);
    }
  }
}
