#pragma once

// Deterministic parameter exploration on top of the rate model: grid
// sweeps (OpenMP-parallel with a serial reference), exhaustive-grid
// optimization over (alpha, m), and bisection root finders for protocol
// crossovers and cost targets.

#include <functional>
#include <string>
#include <vector>

#include "catrep/rate.hpp"

namespace catrep::explorer {

using rate::ProtocolConfig;
using rate::RateReport;

// Amplitudes in [lo, hi] at which the damped even-class readout becomes
// fully unambiguous (span overlap zero): eta alpha^2 = (q + 1/2) pi for
// the one-loss code, sqrt(2) (q + 1/2) pi for the three-loss code.  Empty
// for other loss orders.
std::vector<double> readout_peak_alphas(const cat::CatCode &code, double eta, double lo,
                                        double hi);

// Assign a named scalar parameter; throws std::invalid_argument for
// unknown names (callers surface that as a config error).
void set_param(ProtocolConfig &config, const std::string &name, double value);

struct SweepSpec {
  ProtocolConfig base;
  std::string param = "alpha";
  std::vector<double> values;
};

std::vector<double> linspace(double from, double to, int points);

// One report per grid value, in order; the parallel kernel and the serial
// reference produce identical tables.
std::vector<RateReport> sweep(const SweepSpec &spec);
std::vector<RateReport> sweep_serial(const SweepSpec &spec);

enum class Objective { per_channel_use, rate_bits };

struct OptimizeOptions {
  double alpha_min = 0.4;
  double alpha_max = 2.2;
  int alpha_points = 61;
  int m_min = 1;
  int m_max = 64;
  Objective objective = Objective::per_channel_use;
};

struct OptimizeResult {
  ProtocolConfig config;
  RateReport report;
  double objective_value = 0.0;
};

// Exhaustive grid over (alpha, m) followed by one local alpha refinement.
// The alpha grid is seeded with the damped even-class readout stationary
// points (success-probability peaks are too narrow for uniform grids).
// Ties resolve toward smaller m, then smaller alpha.
OptimizeResult optimize(const ProtocolConfig &config, const OptimizeOptions &options);

struct ThresholdResult {
  double value = 0.0;
  double objective_a = 0.0;
  double objective_b = 0.0;
  int iterations = 0;
};

// Bisect `param` in [lo, hi] for the crossing of the two configurations'
// objectives (each optimized when options are supplied).  Requires a sign
// change over the bracket; relative parameter tolerance 1e-3, then polished
// until the objectives agree to 1e-6 relative.
ThresholdResult find_threshold(const ProtocolConfig &config_a,
                               const ProtocolConfig &config_b,
                               const std::string &param, double lo, double hi,
                               const OptimizeOptions *optimize_each = nullptr);

struct CostSolveResult {
  double l0_km = 0.0;
  double cprime = 0.0;
  RateReport report;
  int iterations = 0;
};

// Bisect L0 in [lo, hi] for cost coefficient C' = target, treating the
// chain length as continuous; relative tolerance 1e-3.  `adjust_each`,
// when set, rewrites the candidate config after L0 is assigned (e.g. to
// re-pin alpha to the readout peak of the new attenuation).
using ConfigAdjust = std::function<void(ProtocolConfig &)>;
CostSolveResult solve_cost_target(const ProtocolConfig &config, double target_cprime,
                                  double l0_lo, double l0_hi,
                                  const ConfigAdjust &adjust_each = nullptr);

} // namespace catrep::explorer
