#include "mswe/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "mswe/error.hpp"

namespace mswe {

const char* case_name(CaseKind c) {
  switch (c) {
    case CaseKind::convergence: return "convergence";
    case CaseKind::balance: return "balance";
    case CaseKind::vortex_pair: return "vortex_pair";
    case CaseKind::orography: return "orography";
    case CaseKind::custom: return "custom";
  }
  return "?";
}

CaseKind parse_case(const std::string& s) {
  for (CaseKind c : {CaseKind::convergence, CaseKind::balance, CaseKind::vortex_pair, CaseKind::orography,
                     CaseKind::custom})
    if (s == case_name(c)) return c;
  throw UsageError("unknown case '" + s + "'");
}

RunConfig RunConfig::defaults(CaseKind kind) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  RunConfig c;
  c.kind = kind;
  c.lx = c.ly = two_pi;
  switch (kind) {
    case CaseKind::convergence:
      c.nx = 4;
      c.nx_list = {4, 8, 16, 32};
      c.p_list = {3, 4};
      c.spectral_p_list = {3, 4, 5, 6, 7, 8};
      break;
    case CaseKind::balance:
      c.nx_list = {4, 8, 16};
      c.t_final = 1.0;
      c.record_interval = 1;
      break;
    case CaseKind::vortex_pair:
      c.nx = 20;
      c.f = c.g = c.H = 8.0;
      c.dt = 0.0052;
      c.t_final = 2.0;
      c.snapshot_times = {0.0, 0.5, 1.0, 2.0};
      c.record_interval = 10;
      break;
    case CaseKind::orography:
      c.nx = 24;
      c.f = c.g = c.H = 1.0;
      c.lx = c.ly = 10.0;
      c.x0 = c.y0 = -5.0;
      // 0.02 exceeds the RK2 stability limit on this mesh
      c.dt = 0.005;
      c.t_final = 44.0;
      c.apv_tau = 0.02;
      c.snapshot_times = {0.0, 44.0};
      c.record_interval = 25;
      break;
    case CaseKind::custom:
      c.dt = 0.01;
      c.t_final = 0.1;
      break;
  }
  return c;
}

const std::vector<std::string>& RunConfig::keys() {
  static const std::vector<std::string> k = {
      "case",        "p",          "nx",          "ny",          "lx",           "ly",
      "x0",          "y0",         "f",           "g",           "H",            "dt",
      "tf",          "quadrature", "apv_tau",     "depth_floor", "out",          "record_interval",
      "snapshot_interval", "snapshot_times", "sample_resolution", "nx_list", "p_list", "spectral_p_list",
      "dt_sweep",    "seed"};
  return k;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& v) {
  T out{};
  const std::string t = trim(v);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw UsageError("bad value '" + v + "' for key '" + key + "'");
  if constexpr (std::is_floating_point_v<T>)
    if (!std::isfinite(out)) throw UsageError("non-finite value for key '" + key + "'");
  return out;
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& v) {
  std::vector<T> out;
  if (trim(v).empty()) return out;  // an empty value clears the list
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) throw UsageError("empty entry in list for key '" + key + "'");
    out.push_back(parse_number<T>(key, item));
  }
  return out;
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (key == "case") kind = parse_case(v);
  else if (key == "p") p = parse_number<int>(key, v);
  else if (key == "nx") nx = parse_number<int>(key, v);
  else if (key == "ny") ny = parse_number<int>(key, v);
  else if (key == "lx") lx = parse_number<double>(key, v);
  else if (key == "ly") ly = parse_number<double>(key, v);
  else if (key == "x0") x0 = parse_number<double>(key, v);
  else if (key == "y0") y0 = parse_number<double>(key, v);
  else if (key == "f") f = parse_number<double>(key, v);
  else if (key == "g") g = parse_number<double>(key, v);
  else if (key == "H") H = parse_number<double>(key, v);
  else if (key == "dt") dt = parse_number<double>(key, v);
  else if (key == "tf" || key == "t_final") t_final = parse_number<double>(key, v);
  else if (key == "quadrature") {
    if (v == "exact") quadrature = QuadMode::exact;
    else if (v == "inexact") quadrature = QuadMode::inexact;
    else throw UsageError("quadrature must be 'exact' or 'inexact', got '" + v + "'");
  } else if (key == "apv_tau") apv_tau = parse_number<double>(key, v);
  else if (key == "depth_floor") depth_floor = parse_number<double>(key, v);
  else if (key == "out" || key == "output_dir") output_dir = v;
  else if (key == "record_interval") record_interval = parse_number<int>(key, v);
  else if (key == "snapshot_interval") snapshot_interval = parse_number<double>(key, v);
  else if (key == "snapshot_times") snapshot_times = parse_list<double>(key, v);
  else if (key == "sample_resolution") sample_resolution = parse_number<int>(key, v);
  else if (key == "nx_list") nx_list = parse_list<int>(key, v);
  else if (key == "p_list") p_list = parse_list<int>(key, v);
  else if (key == "spectral_p_list") spectral_p_list = parse_list<int>(key, v);
  else if (key == "dt_sweep") dt_sweep = parse_list<double>(key, v);
  else if (key == "seed") seed = parse_number<std::uint64_t>(key, v);
  else throw UsageError("unknown configuration key '" + key + "'");
}

void RunConfig::validate() const {
  auto fail = [](const std::string& m) { throw UsageError("invalid configuration: " + m); };
  if (p < 1) fail("p must be >= 1");
  if (nx < 1 || ny < 0) fail("nx must be >= 1 and ny >= 0");
  if (!(lx > 0.0) || !(ly > 0.0)) fail("domain lengths must be positive");
  if (!(g > 0.0)) fail("g must be positive");
  if (!(H > 0.0)) fail("H must be positive");
  if (!(apv_tau >= 0.0)) fail("apv_tau must be non-negative");
  if (dt < 0.0 || t_final < 0.0) fail("dt and tf must be non-negative");
  if (kind != CaseKind::convergence && kind != CaseKind::balance) {
    if (!(dt > 0.0)) fail("dt must be positive");
    if (t_final < dt) fail("tf must be at least dt");
  }
  if (record_interval < 1) fail("record_interval must be >= 1");
  if (snapshot_interval < 0.0) fail("snapshot_interval must be non-negative");
  if (sample_resolution < 2) fail("sample_resolution must be >= 2");
  for (int n : nx_list)
    if (n < 1) fail("nx_list entries must be >= 1");
  for (int q : p_list)
    if (q < 1) fail("p_list entries must be >= 1");
  for (int q : spectral_p_list)
    if (q < 1) fail("spectral_p_list entries must be >= 1");
  for (double d : dt_sweep)
    if (!(d > 0.0)) fail("dt_sweep entries must be positive");
}

Mesh RunConfig::mesh() const {
  Mesh m{nx, ny > 0 ? ny : nx, lx, ly, x0, y0, p};
  m.validate();
  return m;
}

int RunConfig::steps() const {
  if (!(dt > 0.0)) throw UsageError("steps: dt is not set");
  return static_cast<int>(std::llround(t_final / dt));
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> out;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw UsageError("config line " + std::to_string(lineno) + ": empty key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

RunConfig build_config(CaseKind kind, const std::map<std::string, std::string>& file,
                       const std::map<std::string, std::string>& overrides) {
  // A case named in the file or on the command line selects the defaults.
  if (auto it = file.find("case"); it != file.end()) kind = parse_case(trim(it->second));
  if (auto it = overrides.find("case"); it != overrides.end()) kind = parse_case(trim(it->second));
  RunConfig c = RunConfig::defaults(kind);
  for (const auto& [k, v] : file) c.set(k, v);
  for (const auto& [k, v] : overrides) c.set(k, v);
  c.validate();
  return c;
}

}  // namespace mswe
