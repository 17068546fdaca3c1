#pragma once

// Secret-key-rate model for multiplexed repeater chains: total transmission
// and readout success, swap-accumulated QBERs with optional memory decay,
// asymptotic key fraction, repetition timing, and the cost coefficients.

#include <string>
#include <vector>

#include "catrep/cat.hpp"
#include "catrep/link.hpp"

namespace catrep::rate {

enum class Variant { qm, graph, single_avg };
enum class MemoryModel { none, depolarizing, dephasing };
enum class UsdConvention { original, damped };

struct ProtocolConfig {
  cat::CatCode code{1.268, 1};
  Variant variant = Variant::qm;
  MemoryModel memory = MemoryModel::none;
  UsdConvention usd = UsdConvention::original;

  double l_total_km = 1000.0;
  double l0_km = 1.0;
  double attenuation_db_km = 0.2;
  double speed_km_s = 2.0e5;  // signal velocity in fiber
  double t0_s = 1.0e-6;       // source repetition floor
  double t_coh_s = 0.0;       // memory coherence time; <= 0 means ideal
  double p_m = 1.0;           // per-readout measurement success
  int m_multiplex = 1;
  std::vector<int> desired_residues{0};
  bool dsm_single_side = false;
  double n_sources = 1000.0;  // multiplexed sources per station, for costs

  // Root finders scan L0 continuously; skr() then accepts fractional chains.
  bool allow_fractional_chain = false;

  double n_links() const { return l_total_km / l0_km; }
  double eta_half() const;
};

// Closed-form per-link inputs consumed by skr(); produce them with
// link_summary() or substitute oracle-derived numbers in tests.
struct LinkSummary {
  double f0 = 1.0;         // post-swap Bell fidelity of one link
  double coherence = 1.0;  // effective Bell-diagonal bias 2 f0 - 1
  double p_dsm = 1.0;      // desired-syndrome acceptance per link
  double p_usd = 1.0;      // unambiguous readout success per station
};

struct RateReport {
  double alpha = 0.0;
  int m_multiplex = 1;
  double n_links = 0.0;
  double eta_half = 1.0;
  double f0 = 1.0;
  double p_dsm = 1.0;
  double p_tdsm = 1.0;
  double p_usd = 1.0;
  double k_m = 0.0;
  double p_tz = 1.0;
  double log10_p_tz = 0.0;
  double p_tot = 1.0;
  double log10_p_tot = 0.0;
  double memory_error = 0.0;
  double e_x = 0.0;
  double e_z = 0.0;
  double r_inf_raw = 1.0;  // may be negative
  double r_inf = 1.0;      // clamped at zero
  double t_r = 0.0;
  double r_qkd = 0.0;          // secret bits per second
  double log10_r_qkd = 0.0;
  double r_nqkd = 0.0;         // per multiplexed channel
  double per_channel_use = 0.0;  // t_r * r_nqkd
};

// Shannon binary entropy; throws std::domain_error outside [0, 1].
double binary_entropy(double p);

// Total desired-syndrome success over n links with m parallel attempts.
double p_tdsm(double p_dsm_single, int m, double n);

// Total readout success (p_usd * p_m)^k_m.
double p_tz(double p_usd, double p_m, double k_m);

// Chain repetition period: quantum memories wait for the heralds
// (max(t0, 2 L0 / c)); the graph variant streams at the source rate t0.
double repetition_time(Variant variant, double t0_s, double l0_km, double speed_km_s);

// Memory decay error over waiting time t_w: 1 - exp(-t_w / t_c).
double memory_error_prob(double t_w_s, double t_coh_s);

// Bell-diagonal bias accumulation over n swaps.
double swapped_fidelity(double f0, double n);

struct Qber {
  double e_x = 0.0;
  double e_z = 0.0;
};
Qber qber_depolarizing(double f0, double n, double mem_error);
Qber qber_dephasing(double f0, double n, double mem_error);

// Closed-form link inputs for the configured code, geometry, and USD
// convention.
LinkSummary link_summary(const ProtocolConfig &config);

RateReport skr(const ProtocolConfig &config);
RateReport skr(const ProtocolConfig &config, const LinkSummary &link);

// Cost of the deployment: (C, C') = (N_s L_tot, N_s) / (R_QKD * L0).
std::pair<double, double> cost_coefficient(const ProtocolConfig &config, double r_qkd,
                                           double n_sources);

} // namespace catrep::rate
