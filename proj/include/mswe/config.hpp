#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "mswe/assembly.hpp"

namespace mswe {

enum class CaseKind { convergence, balance, vortex_pair, orography, custom };

const char* case_name(CaseKind c);
CaseKind parse_case(const std::string& s);

/// Every run parameter. A value of 0 for dt or t_final means "the case default".
struct RunConfig {
  CaseKind kind = CaseKind::custom;
  int p = 3;
  int nx = 4;
  int ny = 0;  // 0 -> nx
  double lx = 0.0;  // 0 -> case domain
  double ly = 0.0;
  double x0 = 0.0;
  double y0 = 0.0;
  double f = 8.0;
  double g = 8.0;
  double H = 0.2;
  double dt = 0.0;
  double t_final = 0.0;
  QuadMode quadrature = QuadMode::exact;
  double apv_tau = 0.0;
  double depth_floor = 0.0;
  std::filesystem::path output_dir = "out";
  int record_interval = 1;
  double snapshot_interval = 0.0;  // 0 -> only snapshot_times
  std::vector<double> snapshot_times;
  int sample_resolution = 64;
  std::vector<int> nx_list;
  std::vector<int> p_list;
  std::vector<int> spectral_p_list;
  std::vector<double> dt_sweep;
  std::uint64_t seed = 1;

  /// Default parameters for a case; the starting point before file and flag overrides.
  static RunConfig defaults(CaseKind kind);

  /// Sets one key from its textual value. Throws UsageError on unknown keys or bad values.
  void set(const std::string& key, const std::string& value);
  /// Resolves case-dependent zeros and checks the invariants.
  void validate() const;
  Mesh mesh() const;
  int steps() const;  // round(t_final / dt)

  static const std::vector<std::string>& keys();
};

/// `key = value` lines; `#` starts a comment. Later entries win.
std::map<std::string, std::string> parse_config_text(const std::string& text);
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

/// Case defaults, then file entries, then overrides (e.g. CLI flags).
RunConfig build_config(CaseKind kind, const std::map<std::string, std::string>& file,
                       const std::map<std::string, std::string>& overrides);

}  // namespace mswe
