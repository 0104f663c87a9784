#include "cardio/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cardio {

FieldSnapshot make_field_snapshot(const SimResult& result, const Snapshot& snap) {
  FieldSnapshot f;
  f.mesh = result.mesh;
  f.iteration = snap.iteration;
  f.header = "iteration " + std::to_string(snap.iteration) + " seed " + std::to_string(result.seed) + " config_hash " +
             hash_hex(result.config_hash);
  f.scalars = {{"v", snap.v}, {"v_e", snap.v_e}, {"w", snap.w}, {"gamma", snap.gamma}, {"p", snap.p}};
  // P2 coefficients start with the vertex nodes.
  const std::size_t nv = result.mesh->num_vertices();
  const std::size_t ns = snap.u.size() / 2;
  std::vector<Point> u(nv);
  for (std::size_t i = 0; i < nv && ns > 0; ++i) u[i] = {snap.u[i], snap.u[ns + i]};
  f.vectors = {{"u", std::move(u)}};
  return f;
}

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

}  // namespace

std::string vtk_text(const FieldSnapshot& snap) {
  const TriMesh& mesh = *snap.mesh;
  const std::size_t nv = mesh.num_vertices(), nt = mesh.num_triangles();
  std::string s;
  s += "# vtk DataFile Version 3.0\n";
  s += (snap.header.empty() ? "cardio snapshot" : snap.header) + "\n";
  s += "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  s += "POINTS " + std::to_string(nv) + " double\n";
  for (const Point& p : mesh.vertices()) s += num(p.x) + " " + num(p.y) + " 0\n";
  s += "CELLS " + std::to_string(nt) + " " + std::to_string(4 * nt) + "\n";
  for (const auto& t : mesh.triangles()) {
    s += "3 " + std::to_string(t[0]) + " " + std::to_string(t[1]) + " " + std::to_string(t[2]) + "\n";
  }
  s += "CELL_TYPES " + std::to_string(nt) + "\n";
  for (std::size_t t = 0; t < nt; ++t) s += "5\n";
  s += "POINT_DATA " + std::to_string(nv) + "\n";
  for (const auto& [name, values] : snap.scalars) {
    if (values.size() < nv) throw std::invalid_argument("snapshot field '" + name + "' is shorter than the vertex count");
    s += "SCALARS " + name + " double 1\nLOOKUP_TABLE default\n";
    for (std::size_t i = 0; i < nv; ++i) s += num(values[i]) + "\n";
  }
  for (const auto& [name, values] : snap.vectors) {
    if (values.size() < nv) throw std::invalid_argument("snapshot field '" + name + "' is shorter than the vertex count");
    s += "VECTORS " + name + " double\n";
    for (std::size_t i = 0; i < nv; ++i) s += num(values[i].x) + " " + num(values[i].y) + " 0\n";
  }
  return s;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

void write_vtk(const std::string& path, const FieldSnapshot& snap) { write_text_file(path, vtk_text(snap)); }

VtkData parse_vtk(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  for (int i = 0; i < 4 && std::getline(in, line); ++i) {
    if (i == 0 && line.rfind("# vtk DataFile", 0) != 0) throw std::runtime_error("not a legacy VTK file");
    if (i == 2 && line != "ASCII") throw std::runtime_error("only ASCII VTK is supported");
  }
  VtkData d;
  std::string word;
  std::size_t npoint_data = 0;
  auto need = [&](bool ok, const std::string& what) {
    if (!ok) throw std::runtime_error("malformed VTK: " + what);
  };
  while (in >> word) {
    if (word == "POINTS") {
      std::size_t n;
      std::string type;
      need(static_cast<bool>(in >> n >> type), "POINTS header");
      d.points.resize(n);
      for (auto& p : d.points) {
        double z;
        need(static_cast<bool>(in >> p.x >> p.y >> z), "point coordinates");
      }
    } else if (word == "CELLS") {
      std::size_t n, total;
      need(static_cast<bool>(in >> n >> total), "CELLS header");
      d.cells.resize(n);
      for (auto& c : d.cells) {
        int k;
        need(static_cast<bool>(in >> k >> c[0] >> c[1] >> c[2]) && k == 3, "triangle cell");
      }
    } else if (word == "CELL_TYPES") {
      std::size_t n;
      need(static_cast<bool>(in >> n), "CELL_TYPES header");
      for (std::size_t i = 0; i < n; ++i) {
        int t;
        need(static_cast<bool>(in >> t) && t == 5, "cell type");
      }
    } else if (word == "POINT_DATA") {
      need(static_cast<bool>(in >> npoint_data), "POINT_DATA header");
    } else if (word == "SCALARS") {
      std::string name, type, lut, table;
      int comps;
      need(static_cast<bool>(in >> name >> type >> comps >> lut >> table) && comps == 1, "SCALARS header");
      Vector v(npoint_data);
      for (double& x : v) need(static_cast<bool>(in >> x), "scalar value");
      d.scalars[name] = std::move(v);
    } else if (word == "VECTORS") {
      std::string name, type;
      need(static_cast<bool>(in >> name >> type), "VECTORS header");
      std::vector<std::array<double, 3>> v(npoint_data);
      for (auto& x : v) need(static_cast<bool>(in >> x[0] >> x[1] >> x[2]), "vector value");
      d.vectors[name] = std::move(v);
    } else {
      throw std::runtime_error("malformed VTK: unexpected token '" + word + "'");
    }
  }
  return d;
}

namespace {

std::string comment_header(const SimResult& r) {
  return "# seed=" + std::to_string(r.seed) + " config_hash=" + hash_hex(r.config_hash) + "\n";
}

std::string full(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string probes_csv(const SimResult& result) {
  std::string s = comment_header(result) + "t";
  for (std::size_t k = 0; k < result.probes.size(); ++k) s += ",probe_" + std::to_string(k);
  s += "\n";
  for (std::size_t i = 0; i < result.times.size(); ++i) {
    s += full(result.times[i]);
    for (const auto& p : result.probes) s += "," + full(p[i]);
    s += "\n";
  }
  return s;
}

void write_probes(const std::string& path, const SimResult& result) { write_text_file(path, probes_csv(result)); }

std::string energies_csv(const SimResult& result) {
  std::string s = comment_header(result) + "t";
  for (int k = 0; k < EnergyEntry::count; ++k) s += std::string(",") + EnergyEntry::name(k);
  s += "\n";
  for (std::size_t i = 0; i < result.energies.size(); ++i) {
    s += full(result.times[i]);
    for (int k = 0; k < EnergyEntry::count; ++k) s += "," + full(result.energies[i][k]);
    s += "\n";
  }
  return s;
}

}  // namespace cardio
