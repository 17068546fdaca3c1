#include "catrep/explorer.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace catrep::explorer {

namespace {

constexpr double kPi = std::numbers::pi;

double evaluate(const ProtocolConfig &config, Objective objective) {
  RateReport r = rate::skr(config);
  return objective == Objective::per_channel_use ? r.per_channel_use : r.r_qkd;
}

} // namespace

std::vector<double> readout_peak_alphas(const cat::CatCode &code, double eta, double lo,
                                        double hi) {
  std::vector<double> out;
  int l = code.loss_order;
  if (l != 1 && l != 3) return out;
  double scale = (l == 3) ? std::sqrt(2.0) : 1.0;
  for (int q = 0;; ++q) {
    double a = std::sqrt(scale * (q + 0.5) * kPi / eta);
    if (a > hi) break;
    if (a >= lo) out.push_back(a);
  }
  return out;
}

void set_param(ProtocolConfig &config, const std::string &name, double value) {
  if (name == "alpha") {
    config.code.alpha = value;
  } else if (name == "m") {
    config.m_multiplex = static_cast<int>(std::lround(value));
  } else if (name == "l0_km") {
    config.l0_km = value;
  } else if (name == "l_total_km") {
    config.l_total_km = value;
  } else if (name == "p_m") {
    config.p_m = value;
  } else if (name == "t_coh_s") {
    config.t_coh_s = value;
  } else if (name == "t0_s") {
    config.t0_s = value;
  } else if (name == "n_sources") {
    config.n_sources = value;
  } else {
    throw std::invalid_argument("unknown sweep parameter '" + name + "'");
  }
}

std::vector<double> linspace(double from, double to, int points) {
  if (points < 1) throw std::invalid_argument("grid needs at least one point");
  std::vector<double> v(points);
  if (points == 1) {
    v[0] = from;
    return v;
  }
  double step = (to - from) / (points - 1);
  for (int i = 0; i < points; ++i) v[i] = from + step * i;
  v.back() = to;
  return v;
}

std::vector<RateReport> sweep_serial(const SweepSpec &spec) {
  std::vector<RateReport> out(spec.values.size());
  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    ProtocolConfig c = spec.base;
    set_param(c, spec.param, spec.values[i]);
    out[i] = rate::skr(c);
  }
  return out;
}

std::vector<RateReport> sweep(const SweepSpec &spec) {
  std::vector<RateReport> out(spec.values.size());
  // Exceptions must not escape the parallel region; carry the first one out.
  std::exception_ptr error;
#ifdef CATREP_HAVE_OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(spec.values.size()); ++i) {
    try {
      ProtocolConfig c = spec.base;
      set_param(c, spec.param, spec.values[i]);
      out[i] = rate::skr(c);
    } catch (...) {
#ifdef CATREP_HAVE_OPENMP
#pragma omp critical
#endif
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

OptimizeResult optimize(const ProtocolConfig &config, const OptimizeOptions &options) {
  if (options.m_min < 1 || options.m_max < options.m_min)
    throw std::invalid_argument("invalid multiplexing range");
  if (!(options.alpha_min > 0.0) || options.alpha_max < options.alpha_min)
    throw std::invalid_argument("invalid amplitude range");

  auto grid_for = [&](double lo, double hi, int points) {
    std::vector<double> alphas = linspace(lo, hi, points);
    for (double a : readout_peak_alphas(config.code, config.eta_half(), lo, hi))
      alphas.push_back(a);
    std::sort(alphas.begin(), alphas.end());
    return alphas;
  };

  OptimizeResult best;
  best.objective_value = -1.0;
  auto consider = [&](int m, double alpha) {
    ProtocolConfig c = config;
    c.m_multiplex = m;
    c.code.alpha = alpha;
    double value = evaluate(c, options.objective);
    if (value > best.objective_value * (1.0 + 1e-12) + 1e-300) {
      best.objective_value = value;
      best.config = c;
    }
  };
  // Ascending m then alpha keeps the first (smallest) candidate on ties.
  std::vector<double> coarse =
      grid_for(options.alpha_min, options.alpha_max, options.alpha_points);
  for (int m = options.m_min; m <= options.m_max; ++m)
    for (double a : coarse) consider(m, a);

  // One refinement pass around the winner, one grid step each way.
  double step = (options.alpha_points > 1)
                    ? (options.alpha_max - options.alpha_min) / (options.alpha_points - 1)
                    : 0.0;
  if (step > 0.0) {
    double lo = std::max(options.alpha_min, best.config.code.alpha - step);
    double hi = std::min(options.alpha_max, best.config.code.alpha + step);
    int m = best.config.m_multiplex;
    for (double a : grid_for(lo, hi, 21)) consider(m, a);
  }
  best.report = rate::skr(best.config);
  return best;
}

ThresholdResult find_threshold(const ProtocolConfig &config_a,
                               const ProtocolConfig &config_b,
                               const std::string &param, double lo, double hi,
                               const OptimizeOptions *optimize_each) {
  auto objective = [&](const ProtocolConfig &base, double x) {
    ProtocolConfig c = base;
    set_param(c, param, x);
    if (optimize_each) return optimize(c, *optimize_each).objective_value;
    return rate::skr(c).r_qkd;
  };
  auto pair_at = [&](double x) {
    return std::pair<double, double>{objective(config_a, x), objective(config_b, x)};
  };

  auto [oa_lo, ob_lo] = pair_at(lo);
  auto [oa_hi, ob_hi] = pair_at(hi);
  double f_lo = oa_lo - ob_lo, f_hi = oa_hi - ob_hi;
  double scale_ends = std::max({std::abs(oa_lo), std::abs(ob_lo), std::abs(oa_hi),
                                std::abs(ob_hi)});
  if (std::abs(f_lo) <= 1e-15 * scale_ends && std::abs(f_hi) <= 1e-15 * scale_ends)
    throw std::invalid_argument("objectives coincide over the whole bracket");
  if ((f_lo > 0.0) == (f_hi > 0.0))
    throw std::domain_error("no crossing inside the bracket");

  ThresholdResult res;
  double a = lo, b = hi;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (a + b);
    auto [oa, ob] = pair_at(mid);
    double f_mid = oa - ob;
    res.value = mid;
    res.objective_a = oa;
    res.objective_b = ob;
    res.iterations = it + 1;
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      a = mid;
      f_lo = f_mid;
    } else {
      b = mid;
    }
    bool param_ok = (b - a) <= 1e-3 * std::max(std::abs(a), std::abs(b));
    bool obj_ok = std::abs(oa - ob) <= 1e-6 * std::max(std::abs(oa), std::abs(ob));
    if (param_ok && obj_ok) break;
    if (b - a <= 1e-15 * std::max(std::abs(a), 1.0)) break;
  }
  return res;
}

CostSolveResult solve_cost_target(const ProtocolConfig &config, double target_cprime,
                                  double l0_lo, double l0_hi,
                                  const ConfigAdjust &adjust_each) {
  if (!(target_cprime > 0.0)) throw std::invalid_argument("cost target must be positive");
  auto config_at = [&](double l0) {
    ProtocolConfig c = config;
    c.l0_km = l0;
    c.allow_fractional_chain = true;
    if (adjust_each) adjust_each(c);
    return c;
  };
  auto cprime_at = [&](double l0) {
    ProtocolConfig c = config_at(l0);
    RateReport r = rate::skr(c);
    if (!(r.r_qkd > 0.0)) return std::numeric_limits<double>::infinity();
    return rate::cost_coefficient(c, r.r_qkd, c.n_sources).second;
  };
  double f_lo = cprime_at(l0_lo) - target_cprime;
  double f_hi = cprime_at(l0_hi) - target_cprime;
  if ((f_lo > 0.0) == (f_hi > 0.0))
    throw std::domain_error("cost target not bracketed by the link-length interval");

  CostSolveResult res;
  double a = l0_lo, b = l0_hi;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (a + b);
    double f_mid = cprime_at(mid) - target_cprime;
    res.l0_km = mid;
    res.iterations = it + 1;
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      a = mid;
      f_lo = f_mid;
    } else {
      b = mid;
    }
    if ((b - a) <= 1e-3 * std::max(std::abs(a), std::abs(b))) break;
  }
  res.l0_km = 0.5 * (a + b);
  ProtocolConfig solved = config_at(res.l0_km);
  res.report = rate::skr(solved);
  res.cprime = rate::cost_coefficient(solved, res.report.r_qkd, solved.n_sources).second;
  return res;
}

} // namespace catrep::explorer
