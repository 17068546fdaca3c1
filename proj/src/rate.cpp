#include "catrep/rate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace catrep::rate {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Closed-form sums can overshoot probability bounds by an ulp; pin them
// so the downstream domain checks stay strict for genuine user input.
double as_probability(double v) { return std::clamp(v, 0.0, 1.0); }

void check_config(const ProtocolConfig &c) {
  if (!(c.code.alpha > 0.0)) throw std::invalid_argument("cat code amplitude must be positive");
  if (c.code.loss_order < 1) throw std::invalid_argument("loss order must be >= 1");
  if (!(c.l_total_km > 0.0) || !(c.l0_km > 0.0))
    throw std::invalid_argument("distances must be positive");
  if (c.l0_km > c.l_total_km)
    throw std::invalid_argument("link length exceeds total distance");
  if (c.p_m < 0.0 || c.p_m > 1.0)
    throw std::invalid_argument("measurement success must be in [0, 1]");
  if (c.m_multiplex < 1) throw std::invalid_argument("multiplexing must be >= 1");
  if (!(c.t0_s > 0.0)) throw std::invalid_argument("repetition floor must be positive");
  if (c.desired_residues.empty())
    throw std::invalid_argument("accepted residue set is empty");
  for (int j : c.desired_residues)
    if (j < 0 || j >= c.code.components())
      throw std::invalid_argument("accepted residue out of range");
  if (!c.allow_fractional_chain) {
    double n = c.n_links();
    if (std::abs(n - std::round(n)) > 1e-9 * n)
      throw std::invalid_argument("total distance must be a whole number of links");
  }
}

} // namespace

double ProtocolConfig::eta_half() const {
  return std::pow(10.0, -attenuation_db_km * (l0_km / 2.0) / 10.0);
}

double binary_entropy(double p) {
  if (p < 0.0 || p > 1.0) throw std::domain_error("entropy argument outside [0, 1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double p_tdsm(double p_dsm_single, int m, double n) {
  if (p_dsm_single < 0.0 || p_dsm_single > 1.0)
    throw std::domain_error("acceptance probability outside [0, 1]");
  if (m < 1) throw std::invalid_argument("multiplexing must be >= 1");
  return std::pow(1.0 - std::pow(1.0 - p_dsm_single, m), n);
}

double p_tz(double p_usd, double p_m, double k_m) {
  if (p_usd < 0.0 || p_usd > 1.0 || p_m < 0.0 || p_m > 1.0)
    throw std::domain_error("success probability outside [0, 1]");
  double per = p_usd * p_m;
  if (per == 0.0) return (k_m == 0.0) ? 1.0 : 0.0;
  return std::exp(k_m * std::log(per));
}

double repetition_time(Variant variant, double t0_s, double l0_km, double speed_km_s) {
  double herald = 2.0 * l0_km / speed_km_s;
  return (variant == Variant::graph) ? t0_s : std::max(t0_s, herald);
}

double memory_error_prob(double t_w_s, double t_coh_s) {
  if (t_coh_s <= 0.0) return 0.0;  // ideal memory
  return 1.0 - std::exp(-t_w_s / t_coh_s);
}

double swapped_fidelity(double f0, double n) {
  return 0.5 * (1.0 + std::pow(2.0 * f0 - 1.0, n));
}

Qber qber_depolarizing(double f0, double n, double mem_error) {
  double keep = std::pow(1.0 - mem_error, n);
  Qber q;
  q.e_x = 0.5 * ((1.0 - std::pow(2.0 * f0 - 1.0, n)) * keep + (1.0 - keep));
  q.e_z = 0.5 * (1.0 - keep);
  return q;
}

Qber qber_dephasing(double f0, double n, double mem_error) {
  Qber q;
  q.e_x = 0.5 * (1.0 - std::pow(1.0 - 2.0 * mem_error, n) * std::pow(2.0 * f0 - 1.0, n));
  q.e_z = 0.0;
  return q;
}

LinkSummary link_summary(const ProtocolConfig &config) {
  check_config(config);
  link::LinkParams lp;
  lp.code = config.code;
  lp.eta_half = config.eta_half();
  LinkSummary out;
  if (config.variant == Variant::single_avg) {
    auto [p, coh] = link::averaged_link_channel(lp);
    out.p_dsm = as_probability(p);
    out.coherence = coh;
    out.f0 = as_probability(0.5 * (1.0 + coh));
    out.p_usd = as_probability((config.usd == UsdConvention::damped)
                                   ? cat::usd_probability_damped_avg(config.code, lp.eta_half)
                                   : cat::usd_probability(config.code));
    return out;
  }
  out.p_dsm = as_probability(link::p_dsm(lp, config.desired_residues, config.dsm_single_side));
  // Acceptance-weighted link fidelity over the desired residue pairs.
  double wsum = 0.0, fsum = 0.0;
  std::vector<cat::LossClassStats> stats;
  for (int j = 0; j < config.code.components(); ++j)
    stats.push_back(cat::loss_class_stats(config.code, lp.eta_half, j));
  for (int jl : config.desired_residues)
    for (int jr : config.desired_residues) {
      double w = stats[jl].probability * stats[jr].probability;
      wsum += w;
      fsum += w * 0.5 * (1.0 + stats[jl].coherence * stats[jr].coherence);
    }
  out.f0 = as_probability((wsum > 0.0) ? fsum / wsum : 0.0);
  out.coherence = 2.0 * out.f0 - 1.0;
  if (config.usd == UsdConvention::damped) {
    double pw = 0.0, usd = 0.0;
    for (int j : config.desired_residues) {
      pw += stats[j].probability;
      usd += stats[j].probability * (1.0 - std::abs(stats[j].overlap));
    }
    out.p_usd = (pw > 0.0) ? usd / pw : 0.0;
  } else {
    out.p_usd = cat::usd_probability(config.code);
  }
  out.p_usd = as_probability(out.p_usd);
  return out;
}

RateReport skr(const ProtocolConfig &config) { return skr(config, link_summary(config)); }

RateReport skr(const ProtocolConfig &config, const LinkSummary &link) {
  check_config(config);
  double n = config.n_links();
  bool avg = config.variant == Variant::single_avg;
  int m = avg ? 1 : config.m_multiplex;

  RateReport r;
  r.alpha = config.code.alpha;
  r.m_multiplex = m;
  r.n_links = n;
  r.eta_half = config.eta_half();
  r.f0 = link.f0;
  r.p_dsm = avg ? 1.0 : link.p_dsm;
  r.p_tdsm = p_tdsm(r.p_dsm, m, n);
  r.p_usd = link.p_usd;

  switch (config.variant) {
    case Variant::qm: r.k_m = n; break;
    case Variant::graph: r.k_m = n * m; break;
    case Variant::single_avg: r.k_m = 2.0 * n; break;
  }
  double per = link.p_usd * config.p_m;
  r.p_tz = p_tz(link.p_usd, config.p_m, r.k_m);
  r.log10_p_tz = (per > 0.0) ? r.k_m * std::log10(per) : -kInf;
  r.p_tot = r.p_tdsm * r.p_tz;
  r.log10_p_tot =
      (r.p_tdsm > 0.0) ? std::log10(r.p_tdsm) + r.log10_p_tz : -kInf;

  // Memory decay applies to the heralded-memory variant only.
  if (config.variant == Variant::qm && config.memory != MemoryModel::none) {
    double t_w = 2.0 * config.l0_km / config.speed_km_s;
    r.memory_error = memory_error_prob(t_w, config.t_coh_s);
  }
  Qber q;
  switch (config.variant == Variant::qm ? config.memory : MemoryModel::none) {
    case MemoryModel::depolarizing:
      q = qber_depolarizing(link.f0, n, r.memory_error);
      break;
    case MemoryModel::dephasing:
      q = qber_dephasing(link.f0, n, r.memory_error);
      break;
    case MemoryModel::none:
      q.e_x = 1.0 - swapped_fidelity(link.f0, n);
      q.e_z = 0.0;
      break;
  }
  r.e_x = q.e_x;
  r.e_z = q.e_z;
  r.r_inf_raw = 1.0 - binary_entropy(q.e_x) - binary_entropy(q.e_z);
  r.r_inf = std::max(0.0, r.r_inf_raw);

  r.t_r = repetition_time(config.variant, config.t0_s, config.l0_km, config.speed_km_s);
  r.r_qkd = r.p_tot * r.r_inf / r.t_r;
  r.log10_r_qkd =
      (r.r_inf > 0.0) ? r.log10_p_tot + std::log10(r.r_inf / r.t_r) : -kInf;
  r.r_nqkd = r.r_qkd / m;
  r.per_channel_use = r.p_tot * r.r_inf / m;
  return r;
}

std::pair<double, double> cost_coefficient(const ProtocolConfig &config, double r_qkd,
                                           double n_sources) {
  if (!(r_qkd > 0.0)) throw std::domain_error("cost undefined at zero key rate");
  double per_length = n_sources / (r_qkd * config.l0_km);
  return {per_length * config.l_total_km, per_length};
}

} // namespace catrep::rate
