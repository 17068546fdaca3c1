#include "doctest.h"

#include <array>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "catrep/rate.hpp"

using namespace catrep;
using rate::MemoryModel;
using rate::ProtocolConfig;
using rate::UsdConvention;
using rate::Variant;

namespace {

ProtocolConfig chain_config(Variant variant, double n_links) {
  ProtocolConfig c;
  c.code = {1.0, 1};
  c.variant = variant;
  c.l0_km = 1.0;
  c.l_total_km = n_links;
  c.usd = UsdConvention::damped;
  c.desired_residues = {0};
  return c;
}

} // namespace

TEST_SUITE("rate") {

TEST_CASE("binary entropy values and domain") {
  CHECK(rate::binary_entropy(0.0) == 0.0);
  CHECK(rate::binary_entropy(1.0) == 0.0);
  CHECK(rate::binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rate::binary_entropy(0.11) == doctest::Approx(0.499915958164528).epsilon(1e-12));
  CHECK_THROWS_AS((void)rate::binary_entropy(-0.1), std::domain_error);
  CHECK_THROWS_AS((void)rate::binary_entropy(1.1), std::domain_error);
}

TEST_CASE("multiplexed acceptance probability") {
  // One link, one attempt: the bare acceptance.
  CHECK(rate::p_tdsm(0.3, 1, 1.0) == doctest::Approx(0.3).epsilon(1e-14));
  // Parallel attempts help; more links hurt.
  CHECK(rate::p_tdsm(0.5, 4, 10.0) > rate::p_tdsm(0.5, 1, 10.0));
  CHECK(rate::p_tdsm(0.5, 4, 10.0) < rate::p_tdsm(0.5, 4, 2.0));
  CHECK(rate::p_tdsm(0.5, 2, 3.0) == doctest::Approx(0.75 * 0.75 * 0.75).epsilon(1e-14));
  CHECK(rate::p_tdsm(1.0, 1, 25.0) == 1.0);
  CHECK_THROWS_AS((void)rate::p_tdsm(1.2, 1, 1.0), std::domain_error);
  CHECK_THROWS_AS((void)rate::p_tdsm(0.5, 0, 1.0), std::invalid_argument);
}

TEST_CASE("total readout success handles edge cases") {
  CHECK(rate::p_tz(0.9, 0.9, 2.0) == doctest::Approx(0.6561).epsilon(1e-14));
  CHECK(rate::p_tz(0.0, 1.0, 3.0) == 0.0);
  CHECK(rate::p_tz(0.0, 1.0, 0.0) == 1.0);
  // Fractional chains produce fractional exponents.
  CHECK(rate::p_tz(0.5, 1.0, 0.5) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  CHECK_THROWS_AS((void)rate::p_tz(1.5, 1.0, 1.0), std::domain_error);
}

TEST_CASE("repetition time waits for heralds only with memories") {
  CHECK(rate::repetition_time(Variant::qm, 1e-6, 1.0, 2.0e5) ==
        doctest::Approx(1e-5).epsilon(1e-14));
  CHECK(rate::repetition_time(Variant::qm, 1e-4, 1.0, 2.0e5) ==
        doctest::Approx(1e-4).epsilon(1e-14));
  CHECK(rate::repetition_time(Variant::graph, 1e-6, 1.0, 2.0e5) ==
        doctest::Approx(1e-6).epsilon(1e-14));
  CHECK(rate::repetition_time(Variant::single_avg, 1e-6, 1.0, 2.0e5) ==
        doctest::Approx(1e-5).epsilon(1e-14));
}

TEST_CASE("memory decay probability") {
  CHECK(rate::memory_error_prob(1.0, 0.0) == 0.0);
  CHECK(rate::memory_error_prob(1.0, -3.0) == 0.0);
  CHECK(rate::memory_error_prob(0.5, 0.5) ==
        doctest::Approx(0.6321205588285577).epsilon(1e-13));
  CHECK(rate::memory_error_prob(0.0, 0.5) == doctest::Approx(0.0));
}

TEST_CASE("swap-accumulated fidelity and error rates") {
  CHECK(rate::swapped_fidelity(0.9, 2.0) == doctest::Approx(0.82).epsilon(1e-14));
  CHECK(rate::swapped_fidelity(1.0, 64.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rate::swapped_fidelity(0.5, 3.0) == doctest::Approx(0.5).epsilon(1e-14));

  const auto depol = rate::qber_depolarizing(0.9, 2.0, 0.1);
  CHECK(depol.e_x == doctest::Approx(0.24079999999999993).epsilon(1e-12));
  CHECK(depol.e_z == doctest::Approx(0.09499999999999997).epsilon(1e-12));
  const auto deph = rate::qber_dephasing(0.9, 2.0, 0.1);
  CHECK(deph.e_x == doctest::Approx(0.2951999999999999).epsilon(1e-12));
  CHECK(deph.e_z == 0.0);
  const auto deep = rate::qber_depolarizing(0.95, 10.0, 0.01);
  CHECK(deep.e_x == doctest::Approx(0.3423307344157646).epsilon(1e-12));
  CHECK(deep.e_z == doctest::Approx(0.047808962495597795).epsilon(1e-12));
}

TEST_CASE("error rates collapse to the swap-only value without decay") {
  for (double f0 : {0.8, 0.93, 0.999}) {
    for (double n : {1.0, 2.0, 7.0}) {
      const double plain = 1.0 - rate::swapped_fidelity(f0, n);
      const auto depol = rate::qber_depolarizing(f0, n, 0.0);
      CHECK(std::abs(depol.e_x - plain) <= 1e-15);
      CHECK(depol.e_z == 0.0);
      const auto deph = rate::qber_dephasing(f0, n, 0.0);
      CHECK(std::abs(deph.e_x - plain) <= 1e-15);
      CHECK(deph.e_z == 0.0);
    }
  }
}

TEST_CASE("rate report wires the graph-variant pieces together") {
  auto config = chain_config(Variant::graph, 4.0);
  config.m_multiplex = 2;
  config.p_m = 0.99;
  rate::LinkSummary link;
  link.f0 = 0.95;
  link.coherence = 2.0 * link.f0 - 1.0;
  link.p_dsm = 0.8;
  link.p_usd = 0.9;

  const auto r = rate::skr(config, link);
  CHECK(r.n_links == doctest::Approx(4.0));
  CHECK(r.p_tdsm == doctest::Approx(std::pow(1.0 - 0.04, 4.0)).epsilon(1e-14));
  // Graph stations read every multiplexed copy: k_m = n m.
  CHECK(r.k_m == doctest::Approx(8.0));
  CHECK(r.p_tz == doctest::Approx(std::pow(0.9 * 0.99, 8.0)).epsilon(1e-13));
  CHECK(r.p_tot == doctest::Approx(r.p_tdsm * r.p_tz).epsilon(1e-14));
  // No memories in the streamed variant: swap errors only, source-limited clock.
  CHECK(r.memory_error == 0.0);
  CHECK(r.e_x == doctest::Approx(0.5 * (1.0 - std::pow(0.9, 4.0))).epsilon(1e-14));
  CHECK(r.e_z == 0.0);
  CHECK(r.t_r == doctest::Approx(1e-6).epsilon(1e-14));
  const double r_inf = 1.0 - rate::binary_entropy(r.e_x);
  CHECK(r.r_inf == doctest::Approx(r_inf).epsilon(1e-13));
  CHECK(r.r_qkd == doctest::Approx(r.p_tot * r_inf * 1e6).epsilon(1e-13));
  CHECK(r.r_nqkd == doctest::Approx(r.r_qkd / 2.0).epsilon(1e-14));
  CHECK(r.per_channel_use == doctest::Approx(r.p_tot * r_inf / 2.0).epsilon(1e-13));
}

TEST_CASE("rate report wires the memory-variant pieces together") {
  auto config = chain_config(Variant::qm, 4.0);
  config.m_multiplex = 3;
  config.memory = MemoryModel::dephasing;
  config.t_coh_s = 1e-4;
  rate::LinkSummary link;
  link.f0 = 0.95;
  link.coherence = 0.9;
  link.p_dsm = 0.8;
  link.p_usd = 0.9;

  const auto r = rate::skr(config, link);
  // Memories wait for the herald: t_w = 2 L0 / c = 1e-5 s.
  const double mem = 1.0 - std::exp(-0.1);
  CHECK(r.memory_error == doctest::Approx(mem).epsilon(1e-13));
  CHECK(r.k_m == doctest::Approx(4.0));
  CHECK(r.e_x ==
        doctest::Approx(0.5 * (1.0 - std::pow(1.0 - 2.0 * mem, 4.0) * std::pow(0.9, 4.0)))
            .epsilon(1e-13));
  CHECK(r.e_z == 0.0);
  CHECK(r.t_r == doctest::Approx(1e-5).epsilon(1e-14));

  // The same configuration without memories keeps the swap errors only.
  config.memory = MemoryModel::none;
  const auto ideal = rate::skr(config, link);
  CHECK(ideal.memory_error == 0.0);
  CHECK(ideal.e_x == doctest::Approx(0.5 * (1.0 - std::pow(0.9, 4.0))).epsilon(1e-14));
}

TEST_CASE("memory decay is ignored outside the memory variant") {
  auto config = chain_config(Variant::graph, 4.0);
  config.memory = MemoryModel::depolarizing;
  config.t_coh_s = 1e-4;
  rate::LinkSummary link;
  link.f0 = 0.95;
  const auto r = rate::skr(config, link);
  CHECK(r.memory_error == 0.0);
  CHECK(r.e_z == 0.0);
}

TEST_CASE("single-channel average forces one deterministic attempt") {
  auto config = chain_config(Variant::single_avg, 5.0);
  config.m_multiplex = 7;  // ignored: nothing is filtered or multiplexed
  const auto r = rate::skr(config);
  CHECK(r.m_multiplex == 1);
  CHECK(r.p_dsm == 1.0);
  CHECK(r.p_tdsm == 1.0);
  // Both half-link readouts count: k_m = 2 n.
  CHECK(r.k_m == doctest::Approx(10.0));
  CHECK(r.r_nqkd == doctest::Approx(r.r_qkd).epsilon(1e-14));
}

TEST_CASE("memory and graph chains coincide without multiplexing") {
  auto config = chain_config(Variant::qm, 8.0);
  config.code = {1.1, 1};
  config.p_m = 0.97;
  config.t0_s = 1e-4;  // above the herald time, so both clocks agree
  const auto with_memories = rate::skr(config);
  config.variant = Variant::graph;
  const auto streamed = rate::skr(config);
  CHECK(streamed.r_qkd == doctest::Approx(with_memories.r_qkd).epsilon(1e-12));
  CHECK(streamed.p_tot == doctest::Approx(with_memories.p_tot).epsilon(1e-12));
  CHECK(streamed.e_x == doctest::Approx(with_memories.e_x).epsilon(1e-12));
}

TEST_CASE("full-path report at the one-link readout peak") {
  ProtocolConfig config;
  config.code = {1.2678268310418292, 1};
  config.variant = Variant::qm;
  config.usd = UsdConvention::damped;
  config.desired_residues = {0};
  config.l_total_km = 1000.0;
  config.l0_km = 1.0;
  config.m_multiplex = 3;
  const auto r = rate::skr(config);
  CHECK(r.eta_half == doctest::Approx(0.9772372209558107).epsilon(1e-14));
  // eta alpha^2 = pi/2 makes the even-class readout exactly unambiguous.
  CHECK(r.p_usd == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.per_channel_use == doctest::Approx(8.763579707824633e-4).epsilon(1e-11));
}

TEST_CASE("report probabilities stay in range for random configurations") {
  std::mt19937 rng(20260823);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    ProtocolConfig c;
    c.code.alpha = 0.3 + 1.8 * uni(rng);
    c.code.loss_order = 1 + static_cast<int>(uni(rng) * 3.0);
    c.variant = std::array{Variant::qm, Variant::graph, Variant::single_avg}[
        static_cast<std::size_t>(uni(rng) * 3.0)];
    // The single-channel average is defined for the one-loss code only.
    if (c.variant == Variant::single_avg) c.code.loss_order = 1;
    c.memory = std::array{MemoryModel::none, MemoryModel::depolarizing,
                          MemoryModel::dephasing}[static_cast<std::size_t>(uni(rng) * 3.0)];
    c.usd = (uni(rng) < 0.5) ? UsdConvention::original : UsdConvention::damped;
    c.l0_km = 0.5 + 3.5 * uni(rng);
    c.l_total_km = c.l0_km * (1.0 + std::floor(uni(rng) * 8.0));
    c.t_coh_s = (uni(rng) < 0.5) ? 0.0 : 0.01 * uni(rng);
    c.p_m = uni(rng);
    c.m_multiplex = 1 + static_cast<int>(uni(rng) * 5.0);
    if (uni(rng) < 0.5) {
      c.desired_residues = {0};
    } else {
      c.desired_residues.clear();
      for (int j = 0; j < c.code.components(); ++j) c.desired_residues.push_back(j);
    }
    c.dsm_single_side = uni(rng) < 0.25;

    const auto r = rate::skr(c);
    for (double p : {r.p_dsm, r.p_tdsm, r.p_usd, r.p_tz, r.p_tot, r.e_x, r.e_z, r.f0}) {
      CHECK(p >= -1e-12);
      CHECK(p <= 1.0 + 1e-12);
    }
    CHECK(r.r_inf >= 0.0);
    CHECK(r.r_inf <= 1.0 + 1e-12);
    CHECK(r.r_qkd >= 0.0);
    CHECK(r.per_channel_use >= 0.0);
    CHECK(r.t_r > 0.0);
  }
}

TEST_CASE("configuration validation rejects inconsistent chains") {
  auto config = chain_config(Variant::qm, 4.0);
  config.l_total_km = 0.5;  // shorter than one link
  CHECK_THROWS_AS((void)rate::skr(config), std::invalid_argument);

  config = chain_config(Variant::qm, 4.0);
  config.l_total_km = 4.5;  // fractional number of links
  CHECK_THROWS_AS((void)rate::skr(config), std::invalid_argument);
  config.allow_fractional_chain = true;
  CHECK_NOTHROW((void)rate::skr(config));

  config = chain_config(Variant::qm, 4.0);
  config.desired_residues = {2};  // out of range for the one-loss code
  CHECK_THROWS_AS((void)rate::skr(config), std::invalid_argument);

  config = chain_config(Variant::qm, 4.0);
  config.m_multiplex = 0;
  CHECK_THROWS_AS((void)rate::skr(config), std::invalid_argument);

  config = chain_config(Variant::qm, 4.0);
  config.p_m = 1.5;
  CHECK_THROWS_AS((void)rate::skr(config), std::invalid_argument);
}

TEST_CASE("cost coefficients scale as sources per key bit per length") {
  auto config = chain_config(Variant::graph, 5.0);
  config.l_total_km = 10.0;
  config.l0_km = 2.0;
  const auto [c_total, c_prime] = rate::cost_coefficient(config, 50.0, 100.0);
  CHECK(c_prime == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(c_total == doctest::Approx(10.0).epsilon(1e-14));
  CHECK_THROWS_AS((void)rate::cost_coefficient(config, 0.0, 100.0), std::domain_error);
}

} // TEST_SUITE
