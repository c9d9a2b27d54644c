#pragma once

#include <span>
#include <vector>

#include "mswe/assembly.hpp"
#include "mswe/swe.hpp"

namespace mswe {

struct ConservationRecord {
  long step = 0;
  double time = 0.0;
  double mass = 0.0;
  double vorticity = 0.0;
  double energy = 0.0;
  double enstrophy = 0.0;
};

/// mass 1^T h; vorticity 1^T W w = -1^T E10^T U u; energy h^T Q K + g/2 h^T Q h
/// (+ g b^T Q h); enstrophy q^T W^h q. Uses the solver's quadrature mode.
ConservationRecord measure_conservation(const SimState& s, const ShallowWaterSolver& solver, long step = 0);

/// Magnitude used to scale the total-vorticity drift, whose exact value is 0:
/// |Omega| times the rms relative vorticity.
double vorticity_scale(const SimState& s, const ShallowWaterSolver& solver);

/// Largest |A(t) - A(0)| / |A(0)| over a series (vorticity: divided by `vort_scale`).
struct DriftSummary {
  double mass = 0.0;
  double vorticity = 0.0;
  double energy = 0.0;
  double enstrophy = 0.0;
};
DriftSummary max_drift(std::span<const ConservationRecord> series, double vort_scale);
/// Signed normalized drift (A(t) - A(0)) / A(0) of one record.
ConservationRecord normalized_drift(const ConservationRecord& r, const ConservationRecord& r0, double vort_scale);

/// L2 norm of field_h - analytic with exact-mode quadrature.
double l2_error(const Field& f, const ScalarFunction& exact, const AssemblyContext& ctx);
double l2_error(const Field& f, const VectorFunction& exact, const AssemblyContext& ctx);

struct Sample {
  double x;
  double y;
  double value;
};
/// resolution x resolution uniform samples over the closed domain, rows
/// ordered by y then x. The far edges wrap periodically.
std::vector<Sample> sample_field(const Field& f, const AssemblyContext& ctx, int resolution);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace mswe
