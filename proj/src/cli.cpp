#include "cardio/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "cardio/diagnostics.hpp"
#include "cardio/io.hpp"
#include "cardio/mms.hpp"

namespace cardio {

namespace {

struct Common {
  std::string config = "default";
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<double> beta;
  std::vector<int> snapshots;
};

void add_common(CLI::App* cmd, Common& c, bool with_snapshots) {
  cmd->add_option("--config", c.config, "config file, or 'default'");
  cmd->add_option("--seed", c.seed, "random seed");
  cmd->add_option("--out", c.out, "output directory (default: $CARDIO_OUT_DIR or .)");
  cmd->add_option("--beta", c.beta, "noise amplitude for both channels");
  if (with_snapshots) cmd->add_option("--snapshots", c.snapshots, "snapshot iterations")->delimiter(',');
}

SimConfig load(const Common& c) {
  SimConfig cfg = c.config == "default" ? SimConfig{} : load_config_file(c.config);
  if (c.seed) cfg.seed = *c.seed;
  if (c.beta) cfg.set_beta(*c.beta);
  if (!c.snapshots.empty()) cfg.snapshots = c.snapshots;
  cfg.validate();
  return cfg;
}

std::filesystem::path out_dir(const Common& c) {
  std::string dir = c.out;
  if (dir.empty()) {
    const char* env = std::getenv("CARDIO_OUT_DIR");
    dir = env != nullptr && *env != '\0' ? env : ".";
  }
  std::filesystem::create_directories(dir);
  return dir;
}

void write_run(const std::filesystem::path& dir, const std::string& prefix, const SimResult& r, std::ostream& out) {
  write_probes((dir / (prefix + "probes.csv")).string(), r);
  write_text_file((dir / (prefix + "energies.csv")).string(), energies_csv(r));
  for (const auto& s : r.snapshots) {
    const auto path = dir / (prefix + "snapshot_" + std::to_string(s.iteration) + ".vtk");
    write_vtk(path.string(), make_field_snapshot(r, s));
  }
  out << "wrote " << (dir / (prefix + "probes.csv")).string() << " and " << r.snapshots.size() << " snapshot(s)\n";
}

int cmd_run(const Common& c, std::ostream& out) {
  const SimConfig cfg = load(c);
  const SimResult r = run_simulation(cfg);
  const auto dir = out_dir(c);
  write_text_file((dir / "config.txt").string(), serialize_config(cfg));
  write_run(dir, "", r, out);
  out << "steps " << r.steps << ", seed " << r.seed << ", config_hash " << hash_hex(r.config_hash) << "\n";
  return 0;
}

int cmd_ensemble(const Common& c, int paths, std::ostream& out, std::ostream& err) {
  const SimConfig cfg = load(c);
  const EnsembleResult e = run_ensemble(cfg, paths);
  for (const auto& f : e.failures) err << "warning: " << f << "\n";
  if (e.paths.empty()) throw std::runtime_error("every ensemble path failed");
  const auto dir = out_dir(c);
  write_text_file((dir / "config.txt").string(), serialize_config(cfg));
  for (std::size_t k = 0; k < e.paths.size(); ++k) write_run(dir, "path" + std::to_string(k) + "_", e.paths[k], out);

  std::ostringstream s;
  s << "# seed=" << cfg.seed << " config_hash=" << hash_hex(config_hash(cfg)) << " paths=" << e.paths.size() << "\n";
  s << "t";
  for (std::size_t k = 0; k < e.stats.mean.size(); ++k) s << ",mean_" << k << ",var_" << k;
  s << "\n";
  s.precision(17);
  const auto& times = e.paths.front().times;
  for (std::size_t i = 0; i < times.size(); ++i) {
    s << times[i];
    for (std::size_t k = 0; k < e.stats.mean.size(); ++k) s << "," << e.stats.mean[k][i] << "," << e.stats.variance[k][i];
    s << "\n";
  }
  write_text_file((dir / "ensemble.csv").string(), s.str());
  out << "ensemble of " << e.paths.size() << " path(s) written to " << dir.string() << "\n";
  return 0;
}

int cmd_mms(std::ostream& out) {
  out << "P1 Poisson (pure Neumann)\n  n        L2 error   order\n";
  for (const auto& r : poisson_mms({8, 16, 32, 64})) {
    out << "  " << std::setw(3) << r.n << "  " << std::scientific << std::setprecision(4) << r.error << "  "
        << std::fixed << std::setprecision(3) << r.order << "\n";
  }
  out << "Taylor-Hood (Robin)\n  n        u error    order   p error    order\n";
  for (const auto& r : taylor_hood_mms({4, 8, 16, 32})) {
    out << "  " << std::setw(3) << r.n << "  " << std::scientific << std::setprecision(4) << r.velocity.error << "  "
        << std::fixed << std::setprecision(3) << r.velocity.order << "   " << std::scientific << std::setprecision(4)
        << r.pressure.error << "  " << std::fixed << std::setprecision(3) << r.pressure.order << "\n";
  }
  out.unsetf(std::ios::floatfield);
  return 0;
}

int cmd_diagnose(const Common& c, std::ostream& out) {
  const SimConfig cfg = load(c);
  const SimResult r = run_simulation(cfg);
  const EnergyEntry sup = sup_over_time(r);
  out << "energy suprema over " << r.steps << " steps:\n";
  for (int k = 0; k < EnergyEntry::count; ++k) out << "  " << EnergyEntry::name(k) << " = " << sup[k] << "\n";
  double ve = 0.0, div = 0.0;
  for (double x : r.ve_mean_residual) ve = std::max(ve, x);
  for (double x : r.divergence_residuals) div = std::max(div, x);
  out << "max extracellular mean residual " << ve << "\nmax divergence residual " << div << "\n";

  const auto small = std::make_shared<const TriMesh>(structured_unit_square(4, 4));
  const FeSpace p1(small, 1, ValueRank::scalar);
  const Vector gamma0(p1.dof_count(), 0.0);
  const double coerc = coercivity_estimate(small, gamma0, cfg.mechanics.alpha, cfg.activation,
                                           FiberField::rotated(small->num_triangles(), cfg.fiber_angle));
  out << "coercivity estimate (4x4 mesh, gamma = 0): " << coerc << "\n";

  SimConfig coarse = cfg;
  coarse.mesh = MeshSource{"", 8, 8};
  const double eps[] = {1e-1, 1e-2, 1e-3};
  out << "epsilon-pressure study (8x8 mesh, frozen activation):\n";
  for (const auto& row : eps_pressure_study(coarse, eps)) out << "  eps " << row.epsilon << "  " << row.discrepancy << "\n";
  if (!c.out.empty()) {
    const auto dir = out_dir(c);
    write_text_file((dir / "energies.csv").string(), energies_csv(r));
  }
  return 0;
}

int cmd_mesh_info(const Common& c, std::ostream& out) {
  const SimConfig cfg = load(c);
  const MeshPtr mesh = cfg.mesh.build();
  const FeSpace p2(mesh, 2, ValueRank::vector);
  out << "vertices " << mesh->num_vertices() << "\n"
      << "triangles " << mesh->num_triangles() << "\n"
      << "edges " << mesh->num_edges() << "\n"
      << "boundary_edges " << mesh->boundary_edges().size() << "\n"
      << "area " << mesh->total_area() << "\n"
      << "p1_dofs " << mesh->num_vertices() << "\n"
      << "p2_vector_dofs " << p2.dof_count() << "\n";
  return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stochastic electromechanical bidomain simulator", "cardio"};
  app.require_subcommand(1);
  Common run_opts, ens_opts, diag_opts, info_opts;
  int paths = 8;
  auto* run = app.add_subcommand("run", "single path");
  add_common(run, run_opts, true);
  auto* ens = app.add_subcommand("ensemble", "Monte Carlo ensemble");
  add_common(ens, ens_opts, true);
  ens->add_option("--paths", paths, "number of paths")->check(CLI::PositiveNumber);
  auto* mms = app.add_subcommand("mms", "manufactured-solution convergence studies");
  auto* diag = app.add_subcommand("diagnose", "energy, coercivity and epsilon-pressure reports");
  add_common(diag, diag_opts, false);
  auto* info = app.add_subcommand("mesh-info", "mesh and space sizes");
  add_common(info, info_opts, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 1;
  }

  try {
    if (*run) return cmd_run(run_opts, out);
    if (*ens) return cmd_ensemble(ens_opts, paths, out, err);
    if (*mms) return cmd_mms(out);
    if (*diag) return cmd_diagnose(diag_opts, out);
    if (*info) return cmd_mesh_info(info_opts, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

int cli_main(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace cardio
