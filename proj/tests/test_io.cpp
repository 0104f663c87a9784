#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "cardio/cli.hpp"
#include "cardio/config.hpp"
#include "cardio/io.hpp"
#include "oracles.hpp"

using namespace cardio;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path d = fs::temp_directory_path() / ("cardio_test_" + tag + "_" + std::to_string(::getpid()));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

struct Cli {
  int code = 0;
  std::string out, err;
};

Cli cli(std::vector<std::string> args) {
  std::ostringstream o, e;
  Cli r;
  r.code = cli_main(args, o, e);
  r.out = o.str();
  r.err = e.str();
  return r;
}

// Independent grammar check of a legacy ASCII unstructured-grid file:
// header lines, then POINTS / CELLS / CELL_TYPES / POINT_DATA blocks with
// consistent counts. Returns an empty string when valid.
std::string check_legacy_vtk(const std::string& text, std::size_t& n_points, std::size_t& n_cells) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (line.rfind("# vtk DataFile Version", 0) != 0) return "bad magic line";
  std::getline(in, line);  // title
  std::getline(in, line);
  if (line != "ASCII") return "not ASCII";
  std::getline(in, line);
  if (line != "DATASET UNSTRUCTURED_GRID") return "not an unstructured grid";
  std::string word;
  in >> word >> n_points >> line;
  if (word != "POINTS") return "POINTS missing";
  for (std::size_t i = 0; i < 3 * n_points; ++i) {
    double x;
    if (!(in >> x)) return "short POINTS block";
  }
  std::size_t total = 0;
  in >> word >> n_cells >> total;
  if (word != "CELLS" || total != 4 * n_cells) return "CELLS header";
  for (std::size_t c = 0; c < n_cells; ++c) {
    std::size_t k, a, b, d;
    if (!(in >> k >> a >> b >> d) || k != 3 || a >= n_points || b >= n_points || d >= n_points) return "bad cell";
  }
  std::size_t nt = 0;
  in >> word >> nt;
  if (word != "CELL_TYPES" || nt != n_cells) return "CELL_TYPES header";
  for (std::size_t c = 0; c < n_cells; ++c) {
    int t;
    if (!(in >> t) || t != 5) return "cell type is not a triangle";
  }
  std::size_t np = 0;
  in >> word >> np;
  if (word != "POINT_DATA" || np != n_points) return "POINT_DATA header";
  while (in >> word) {
    std::string name, type;
    if (word == "SCALARS") {
      int comps;
      in >> name >> type >> comps >> word >> line;
      if (comps != 1 || word != "LOOKUP_TABLE") return "SCALARS header";
      for (std::size_t i = 0; i < n_points; ++i) {
        double x;
        if (!(in >> x)) return "short SCALARS block " + name;
      }
    } else if (word == "VECTORS") {
      in >> name >> type;
      for (std::size_t i = 0; i < n_points; ++i) {
        double x, y, z;
        if (!(in >> x >> y >> z)) return "short VECTORS block " + name;
        if (z != 0.0) return "nonzero z component";
      }
    } else {
      return "unexpected token " + word;
    }
  }
  return {};
}

}  // namespace

TEST_SUITE("io_cli") {
  TEST_CASE("empty configuration gives the default profile") {
    const SimConfig c = parse_config("");
    CHECK(c == SimConfig{});
    CHECK(c.dt == 0.0125);
    CHECK(c.ionic.k == 80.0);  // sign convention: see README
    CHECK(c.ionic.a == 0.25);
    CHECK(c.ionic.d1 == 0.17);
    CHECK(c.ionic.d2 == 1.0);
    CHECK(c.activation.mu == 4.0);
    CHECK(c.conductivity.K_i == Sym2::diag(0.02, 0.01));
    CHECK(c.conductivity.K_e == Sym2::diag(0.04, 0.02));
    CHECK(c.noise_v.beta0 == 0.0);
    CHECK(c.noise_w.beta0 == 0.0);
    CHECK(c.deterministic());
    CHECK(c.steps() == 256);
  }

  TEST_CASE("parse errors") {
    CHECK_THROWS_AS(parse_config("dt = -1\n"), ConfigError);
    try {
      parse_config("# comment\nionic.k = -80\nionic.bogus = 1\n");
      FAIL("expected an unknown-key error");
    } catch (const ConfigError& e) {
      CHECK(e.line() == 3);
      CHECK(e.key() == "ionic.bogus");
    }
    try {
      parse_config("mesh.nx = many\n");
      FAIL("expected a type error");
    } catch (const ConfigError& e) {
      CHECK(e.line() == 1);
      CHECK(e.key() == "mesh.nx");
    }
    CHECK_THROWS_AS(parse_config("just words\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("noise.v.kind = cubic\n"), ConfigError);
    CHECK_THROWS_AS(load_config_file("/nonexistent/config.txt"), ConfigError);
  }

  TEST_CASE("configuration round trip and hashing") {
    const std::string text =
        "ionic.k = -80   # published sign\n"
        "dt = 0.01\nT = 0.5\nseed = 123456789012\n"
        "noise.v.kind = linear_clipped\nnoise.v.beta0 = 0.5\nnoise.v.z_cap = 1.5\n"
        "probes = 0.1,0.2; 0.9,0.5\noutput.snapshots = 1,5,9\n"
        "conductivity.Ki_xy = 0.001\nfibers.angle = 0.3333333333333333\n";
    const SimConfig c = parse_config(text);
    CHECK(c.ionic.k == -80.0);
    CHECK(c.seed == 123456789012ull);
    CHECK(c.probes.size() == 2);
    CHECK(c.snapshots == std::vector<int>{1, 5, 9});
    const SimConfig back = parse_config(serialize_config(c));
    CHECK(back == c);
    CHECK(serialize_config(back) == serialize_config(c));
    CHECK(config_hash(back) == config_hash(c));
    SimConfig d = c;
    d.activation.gamma_R = 0.31;
    CHECK(config_hash(d) != config_hash(c));
    CHECK(hash_hex(0x1234) == "0000000000001234");
  }

  TEST_CASE("VTK output") {
    const auto mesh = oracle::square(1, 1);
    FieldSnapshot snap;
    snap.mesh = mesh;
    snap.iteration = 3;
    snap.scalars.push_back({"v", Vector(4, 0.0)});
    snap.vectors.push_back({"u", std::vector<Point>(4)});
    std::size_t np = 0, nc = 0;
    CHECK(check_legacy_vtk(vtk_text(snap), np, nc) == "");
    CHECK(np == 4);
    CHECK(nc == 2);

    snap.scalars[0].second = {0.123456789123, -1e-7, 3.0, 2.0 / 3.0};
    snap.vectors[0].second = {{1.0, 2.0}, {0.5, -0.25}, {1e-9, 0.0}, {7.0, 1.0 / 7.0}};
    const VtkData d = parse_vtk(vtk_text(snap));
    REQUIRE(d.points.size() == 4);
    CHECK(d.cells.size() == 2);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(d.points[i] == mesh->vertices()[i]);
      const double x = snap.scalars[0].second[i];
      CHECK(std::abs(d.scalars.at("v")[i] - x) <= 1e-9 * std::abs(x));
      const auto& u = d.vectors.at("u")[i];
      CHECK(std::abs(u[0] - snap.vectors[0].second[i].x) <= 1e-9 * std::abs(snap.vectors[0].second[i].x));
      CHECK(std::abs(u[1] - snap.vectors[0].second[i].y) <= 1e-9 * std::abs(snap.vectors[0].second[i].y));
      CHECK(u[2] == 0.0);
    }
  }

  TEST_CASE("probe CSV") {
    SimConfig c;
    c.mesh = {"", 6, 6};
    c.T = 0.0;
    const SimResult r0 = run_simulation(c);
    const std::string s0 = probes_csv(r0);
    std::istringstream in(s0);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) lines.push_back(line);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "# seed=0 config_hash=" + hash_hex(config_hash(c)));
    CHECK(lines[1] == "t,probe_0,probe_1,probe_2");

    c.T = 0.1;
    c.snapshots = {2, 4};
    const SimResult r = run_simulation(c);
    const std::string s = probes_csv(r);
    CHECK(static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')) == 2 + r.steps + 1);
    CHECK(probes_csv(run_simulation(c)) == s);
    CHECK(energies_csv(run_simulation(c)) == energies_csv(r));
    REQUIRE(r.snapshots.size() == 2);
    const FieldSnapshot f = make_field_snapshot(r, r.snapshots[1]);
    CHECK(f.header.find("config_hash " + hash_hex(r.config_hash)) != std::string::npos);
    std::size_t np = 0, nc = 0;
    CHECK(check_legacy_vtk(vtk_text(f), np, nc) == "");
    CHECK(np == r.mesh->num_vertices());
  }

  TEST_CASE("command line: usage and errors") {
    CHECK(cli({}).code == 1);
    const Cli bad = cli({"frobnicate"});
    CHECK(bad.code == 1);
    CHECK_FALSE(bad.err.empty());
    CHECK(cli({"run", "--seed", "notanumber"}).code == 1);
    CHECK(cli({"--help"}).code == 0);
    const Cli missing = cli({"mesh-info", "--config", "/nonexistent/cfg.txt"});
    CHECK(missing.code == 2);
    CHECK(missing.err.find("cannot open") != std::string::npos);
  }

  TEST_CASE("command line: mesh-info") {
    const Cli r = cli({"mesh-info"});
    CHECK(r.code == 0);
    // 22 x 22 cells: 23^2 vertices, 2 * 22^2 triangles, 3*22^2 + 2*22 edges.
    CHECK(r.out.find("vertices 529\n") != std::string::npos);
    CHECK(r.out.find("triangles 968\n") != std::string::npos);
    CHECK(r.out.find("edges 1496\n") != std::string::npos);
    CHECK(r.out.find("boundary_edges 88\n") != std::string::npos);
    CHECK(r.out.find("p2_vector_dofs " + std::to_string(2 * (529 + 1496)) + "\n") != std::string::npos);
  }

  TEST_CASE("command line: run writes snapshots and probes") {
    const fs::path dir = fresh_dir("run");
    const Cli r = cli({"run", "--config", "default", "--beta", "0", "--snapshots", "7,70,230,250", "--out",
                       dir.string()});
    CHECK(r.code == 0);
    for (int it : {7, 70, 230, 250}) {
      const fs::path p = dir / ("snapshot_" + std::to_string(it) + ".vtk");
      REQUIRE(fs::exists(p));
      std::size_t np = 0, nc = 0;
      CHECK(check_legacy_vtk(slurp(p), np, nc) == "");
      CHECK(np == 529);
      CHECK(nc == 968);
    }
    const std::string probes = slurp(dir / "probes.csv");
    CHECK(std::count(probes.begin(), probes.end(), '\n') == 2 + 256 + 1);
    const SimConfig written = load_config_file((dir / "config.txt").string());
    CHECK(probes.rfind("# seed=0 config_hash=" + hash_hex(config_hash(written)), 0) == 0);
    // Only the output directory is touched.
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(dir)) files += e.is_regular_file();
    CHECK(files == 4 + 3);

    // Same configuration through a file and CARDIO_OUT_DIR gives byte-identical probes.
    const fs::path dir2 = fresh_dir("env");
    ::setenv("CARDIO_OUT_DIR", dir2.string().c_str(), 1);
    SimConfig small;
    small.mesh = {"", 6, 6};
    small.T = 0.1;
    write_text_file((dir2 / "in.cfg").string(), serialize_config(small));
    CHECK(cli({"run", "--config", (dir2 / "in.cfg").string()}).code == 0);
    const std::string first = slurp(dir2 / "probes.csv");
    CHECK(cli({"run", "--config", (dir2 / "in.cfg").string()}).code == 0);
    CHECK(slurp(dir2 / "probes.csv") == first);
    ::unsetenv("CARDIO_OUT_DIR");
    fs::remove_all(dir);
    fs::remove_all(dir2);
  }

  TEST_CASE("command line: ensemble and diagnose") {
    const fs::path dir = fresh_dir("ens");
    SimConfig small;
    small.mesh = {"", 6, 6};
    small.T = 0.05;
    write_text_file((dir / "in.cfg").string(), serialize_config(small));
    const Cli e = cli({"ensemble", "--config", (dir / "in.cfg").string(), "--paths", "2", "--beta", "0.5", "--seed",
                       "4", "--out", dir.string()});
    CHECK(e.code == 0);
    CHECK(fs::exists(dir / "ensemble.csv"));
    CHECK(fs::exists(dir / "path1_probes.csv"));
    CHECK(slurp(dir / "path1_probes.csv").rfind("# seed=" + std::to_string(derive_seed(4, 1)), 0) == 0);
    CHECK(cli({"ensemble", "--paths", "0"}).code == 1);

    const Cli d = cli({"diagnose", "--config", (dir / "in.cfg").string()});
    CHECK(d.code == 0);
    CHECK(d.out.find("coercivity estimate") != std::string::npos);
    CHECK(d.out.find("epsilon-pressure") != std::string::npos);
    fs::remove_all(dir);
  }
}
