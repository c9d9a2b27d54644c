#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mswe/config.hpp"
#include "mswe/diagnostics.hpp"
#include "mswe/swe.hpp"

namespace mswe {

/// Stream function with its first and second derivatives.
struct StreamFunction {
  ScalarFunction psi;
  ScalarFunction psi_x;
  ScalarFunction psi_y;
  ScalarFunction laplacian;
};

/// 0.1 cos(x - pi) cos(y - pi) on (0, 2pi]^2.
StreamFunction cosine_stream_function();
/// Two Gaussian vortices centred at (pi, 2pi/3) and (pi, 4pi/3).
StreamFunction vortex_pair_stream_function();
/// 0.1 tanh((1 - y^2) / 2); the orography shear flow is rot of this.
StreamFunction shear_stream_function();
/// Cosine bump of height 0.05 on |x|, |y| <= L/4.
ScalarFunction seamount(double length);

/// u = E10 (W samples of psi), so E21 u = 0 exactly.
Field rotational_velocity(const StreamFunction& s, const AssemblyContext& ctx);
/// h = H + (f/g) psi, as Q cell integrals.
Field geostrophic_depth(const StreamFunction& s, double f, double g, double H, const AssemblyContext& ctx);

Physics make_physics(const RunConfig& c, const AssemblyContext& ctx);
/// Initial state of a time-dependent case (vortex_pair, orography, custom, balance).
SimState initial_state(const RunConfig& c, const AssemblyContext& ctx);

struct ConvergenceRow {
  int p = 0;
  int nx = 0;
  double h_mesh = 0.0;
  double err_q = 0.0;
  double err_F = 0.0;
  double err_K = 0.0;
};

/// Diagnostic errors for the cosine stream function state with f, g, H and
/// the quadrature mode taken from `c`, on an nx x nx mesh of degree p.
ConvergenceRow diagnostic_errors(const RunConfig& c, int p, int nx, Exec exec = Exec::parallel);

struct BalanceRecord {
  long step = 0;
  double time = 0.0;
  double err_u = 0.0;
  double err_h = 0.0;
};

/// Linearized run from the geostrophic cosine state with dt = 0.02 / nx
/// unless c.dt is set.
std::vector<BalanceRecord> run_balance(const RunConfig& c, int nx, Exec exec = Exec::parallel);

struct SnapshotRequest {
  std::string field;  // h, vorticity, q or K
  double time;
};

struct TimeSeries {
  std::vector<ConservationRecord> records;
  double vort_scale = 0.0;
  DriftSummary drift;
  long steps_done = 0;
  std::optional<std::string> failure;  // set when the run stopped early
};

/// Steps the nonlinear model from initial_state(c). Records conservation every
/// c.record_interval steps and at the end; writes snapshots into out_dir when
/// it is given.
TimeSeries simulate(const RunConfig& c, const std::filesystem::path* out_dir = nullptr,
                    Exec exec = Exec::parallel);

/// FIELD_tTTTT.csv with TTTT the time in hundredths.
std::string snapshot_name(const std::string& field, double time);

void write_timeseries_csv(const std::filesystem::path& path, const std::vector<ConservationRecord>& records);
void write_samples_csv(const std::filesystem::path& path, const std::vector<Sample>& samples);
void write_convergence_csv(const std::filesystem::path& path, const std::vector<ConvergenceRow>& rows);

/// Runs one configured case, writing CSVs and summary.json under c.output_dir.
/// Returns the process exit code: 0 on success, 2 on numerical failure.
int run_case(const RunConfig& c, std::ostream& log);

}  // namespace mswe
