#include "cardio/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace cardio {

MeshPtr MeshSource::build() const {
  if (!file.empty()) return std::make_shared<const TriMesh>(load_mesh_file(file));
  return std::make_shared<const TriMesh>(structured_unit_square(nx, ny));
}

void SimConfig::validate() const {
  if (mesh.file.empty() && (mesh.nx < 1 || mesh.ny < 1)) throw ParameterError("mesh.nx and mesh.ny must be >= 1");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("dt must be positive");
  if (!(T >= 0.0) || !std::isfinite(T)) throw ParameterError("T must be non-negative");
  ionic.validate();
  activation.validate();
  conductivity.validate();
  mechanics.validate();
  for (const auto* c : {&noise_v, &noise_w}) {
    if (!(c->beta0 >= 0.0) || !std::isfinite(c->beta0)) throw ParameterError("noise beta0 must be non-negative");
    if (!(c->z_cap > 0.0)) throw ParameterError("noise z_cap must be positive");
  }
  if (noise_modes < 1) throw ParameterError("noise.modes must be >= 1");
  if (refresh < 1) throw ParameterError("mechanics.refresh must be >= 1");
  if (!std::isfinite(stimulus_amplitude)) throw ParameterError("stimulus.amplitude must be finite");
  for (int s : snapshots) {
    if (s < 0) throw ParameterError("snapshot iterations must be non-negative");
  }
  if (!(electrics_tol > 0.0) || !(mechanics_tol > 0.0)) throw ParameterError("solver tolerances must be positive");
}

std::size_t SimConfig::steps() const { return static_cast<std::size_t>(std::llround(T / dt)); }

void SimConfig::set_beta(double beta) {
  noise_v.beta0 = beta;
  noise_w.beta0 = beta;
}

ConfigError::ConfigError(int line, const std::string& key, const std::string& what)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
                         (key.empty() ? what : "'" + key + "': " + what)),
      line_(line),
      key_(key) {}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <class T>
T parse_number(std::string_view s) {
  s = trim(s);
  T value{};
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("expected a number, got '" + std::string(s) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto k = s.find(sep);
    out.push_back(trim(s.substr(0, k)));
    if (k == std::string_view::npos) break;
    s.remove_prefix(k + 1);
  }
  return out;
}

std::vector<Point> parse_points(std::string_view s) {
  std::vector<Point> out;
  if (trim(s).empty()) return out;
  for (auto item : split(s, ';')) {
    const auto xy = split(item, ',');
    if (xy.size() != 2) throw std::invalid_argument("expected 'x,y; x,y; ...'");
    out.push_back({parse_number<double>(xy[0]), parse_number<double>(xy[1])});
  }
  return out;
}

std::string points_text(const std::vector<Point>& pts) {
  std::string s;
  for (std::size_t i = 0; i < pts.size(); ++i) s += (i ? "; " : "") + fmt(pts[i].x) + "," + fmt(pts[i].y);
  return s;
}

std::vector<int> parse_ints(std::string_view s) {
  std::vector<int> out;
  if (trim(s).empty()) return out;
  for (auto item : split(s, ',')) out.push_back(parse_number<int>(item));
  return out;
}

std::string ints_text(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

struct Key {
  const char* name;
  std::function<void(SimConfig&, std::string_view)> set;
  std::function<std::string(const SimConfig&)> get;
};

template <class M>
Key real(const char* name, M m) {
  return {name, [m](SimConfig& c, std::string_view v) { m(c) = parse_number<double>(v); },
          [m](const SimConfig& c) { return fmt(m(c)); }};
}

template <class M>
Key integer(const char* name, M m) {
  return {name, [m](SimConfig& c, std::string_view v) { m(c) = parse_number<int>(v); },
          [m](const SimConfig& c) { return std::to_string(m(c)); }};
}

Key kind(const char* name, NoiseCoeff SimConfig::*member) {
  return {name, [member](SimConfig& c, std::string_view v) { (c.*member).kind = noise_kind_from_string(std::string(v)); },
          [member](const SimConfig& c) { return to_string((c.*member).kind); }};
}

#define FIELD(expr) [](auto& c) -> auto& { return expr; }

const std::vector<Key>& keys() {
  static const std::vector<Key> k = {
      {"mesh.file", [](SimConfig& c, std::string_view v) { c.mesh.file = std::string(v); },
       [](const SimConfig& c) { return c.mesh.file; }},
      integer("mesh.nx", FIELD(c.mesh.nx)),
      integer("mesh.ny", FIELD(c.mesh.ny)),
      real("dt", FIELD(c.dt)),
      real("T", FIELD(c.T)),
      {"seed", [](SimConfig& c, std::string_view v) { c.seed = parse_number<std::uint64_t>(v); },
       [](const SimConfig& c) { return std::to_string(c.seed); }},
      real("ionic.k", FIELD(c.ionic.k)),
      real("ionic.a", FIELD(c.ionic.a)),
      real("ionic.d1", FIELD(c.ionic.d1)),
      real("ionic.d2", FIELD(c.ionic.d2)),
      real("activation.eta1", FIELD(c.activation.eta1)),
      real("activation.eta2", FIELD(c.activation.eta2)),
      real("activation.beta", FIELD(c.activation.beta_act)),
      real("activation.Gamma_l", FIELD(c.activation.Gamma_l)),
      real("activation.Gamma_t", FIELD(c.activation.Gamma_t)),
      real("activation.gamma_R", FIELD(c.activation.gamma_R)),
      real("activation.mu", FIELD(c.activation.mu)),
      real("conductivity.Ki_xx", FIELD(c.conductivity.K_i.xx)),
      real("conductivity.Ki_xy", FIELD(c.conductivity.K_i.xy)),
      real("conductivity.Ki_yy", FIELD(c.conductivity.K_i.yy)),
      real("conductivity.Ke_xx", FIELD(c.conductivity.K_e.xx)),
      real("conductivity.Ke_xy", FIELD(c.conductivity.K_e.xy)),
      real("conductivity.Ke_yy", FIELD(c.conductivity.K_e.yy)),
      real("conductivity.clamp_delta", FIELD(c.conductivity.clamp_delta)),
      real("conductivity.clamp_tau", FIELD(c.conductivity.clamp_tau)),
      real("mechanics.alpha", FIELD(c.mechanics.alpha)),
      real("mechanics.g_x", FIELD(c.mechanics.g.x)),
      real("mechanics.g_y", FIELD(c.mechanics.g.y)),
      real("mechanics.epsilon", FIELD(c.mechanics.epsilon)),
      integer("mechanics.refresh", FIELD(c.refresh)),
      kind("noise.v.kind", &SimConfig::noise_v),
      real("noise.v.beta0", FIELD(c.noise_v.beta0)),
      real("noise.v.z_cap", FIELD(c.noise_v.z_cap)),
      kind("noise.w.kind", &SimConfig::noise_w),
      real("noise.w.beta0", FIELD(c.noise_w.beta0)),
      real("noise.w.z_cap", FIELD(c.noise_w.z_cap)),
      integer("noise.modes", FIELD(c.noise_modes)),
      real("stimulus.amplitude", FIELD(c.stimulus_amplitude)),
      real("fibers.angle", FIELD(c.fiber_angle)),
      {"probes", [](SimConfig& c, std::string_view v) { c.probes = parse_points(v); },
       [](const SimConfig& c) { return points_text(c.probes); }},
      {"output.snapshots", [](SimConfig& c, std::string_view v) { c.snapshots = parse_ints(v); },
       [](const SimConfig& c) { return ints_text(c.snapshots); }},
      real("solver.electrics_tol", FIELD(c.electrics_tol)),
      real("solver.mechanics_tol", FIELD(c.mechanics_tol)),
  };
  return k;
}

#undef FIELD

}  // namespace

SimConfig parse_config(std::string_view text) {
  SimConfig cfg;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, "", "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const auto value = trim(line.substr(eq + 1));
    const auto& table = keys();
    const auto it = std::find_if(table.begin(), table.end(), [&](const Key& k) { return key == k.name; });
    if (it == table.end()) throw ConfigError(line_no, key, "unknown key");
    try {
      it->set(cfg, value);
    } catch (const std::exception& e) {
      throw ConfigError(line_no, key, e.what());
    }
  }
  try {
    cfg.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(0, "", e.what());
  }
  return cfg;
}

SimConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "", "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const SimConfig& config) {
  std::string out;
  for (const auto& k : keys()) out += std::string(k.name) + " = " + k.get(config) + "\n";
  return out;
}

std::uint64_t config_hash(const SimConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : serialize_config(config)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t hash) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace cardio
