#pragma once

#include <map>
#include <string>
#include <vector>

#include "cardio/driver.hpp"

namespace cardio {

/// Nodal arrays on the mesh vertices at one labeled iteration.
struct FieldSnapshot {
  MeshPtr mesh;
  int iteration = 0;
  std::vector<std::pair<std::string, Vector>> scalars;
  std::vector<std::pair<std::string, std::vector<Point>>> vectors;
  std::string header;  ///< one-line title, e.g. seed and config hash
};

/// Vertex values of v, v_e, w, gamma, p and u from a stored snapshot.
FieldSnapshot make_field_snapshot(const SimResult& result, const Snapshot& snap);

/// Legacy VTK ASCII unstructured grid, 9 significant digits, z = 0.
std::string vtk_text(const FieldSnapshot& snap);
void write_vtk(const std::string& path, const FieldSnapshot& snap);

/// Minimal reader for files produced by vtk_text.
struct VtkData {
  std::vector<Point> points;
  std::vector<std::array<Index, 3>> cells;
  std::map<std::string, Vector> scalars;
  std::map<std::string, std::vector<std::array<double, 3>>> vectors;
};
VtkData parse_vtk(const std::string& text);

/// `# seed=<seed> config_hash=<hex>` line, then `t,probe_0,...` and one row per step.
std::string probes_csv(const SimResult& result);
void write_probes(const std::string& path, const SimResult& result);

/// Per-step energy history with the same comment header.
std::string energies_csv(const SimResult& result);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace cardio
