#include "doctest.h"

#include <cmath>
#include <cstring>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "catrep/csv.hpp"
#include "catrep/explorer.hpp"

using namespace catrep;
using explorer::Objective;
using explorer::OptimizeOptions;
using rate::MemoryModel;
using rate::ProtocolConfig;
using rate::UsdConvention;
using rate::Variant;

namespace {

ProtocolConfig memory_chain() {
  ProtocolConfig c;
  c.code = {1.0, 1};
  c.variant = Variant::qm;
  c.usd = UsdConvention::damped;
  c.desired_residues = {0};
  c.l_total_km = 1000.0;
  c.l0_km = 1.0;
  return c;
}

double first_peak(const ProtocolConfig &c) {
  return explorer::readout_peak_alphas(c.code, c.eta_half(), 0.1, 10.0).front();
}

} // namespace

TEST_SUITE("explorer") {

TEST_CASE("named parameters are assigned or rejected") {
  ProtocolConfig c = memory_chain();
  explorer::set_param(c, "alpha", 1.7);
  CHECK(c.code.alpha == 1.7);
  explorer::set_param(c, "m", 2.6);  // rounds to the nearest channel count
  CHECK(c.m_multiplex == 3);
  explorer::set_param(c, "t_coh_s", 0.25);
  CHECK(c.t_coh_s == 0.25);
  CHECK_THROWS_AS(explorer::set_param(c, "bogus", 1.0), std::invalid_argument);
}

TEST_CASE("linspace hits both endpoints exactly") {
  const auto v = explorer::linspace(0.2, 2.0, 181);
  CHECK(v.size() == 181);
  CHECK(v.front() == 0.2);
  CHECK(v.back() == 2.0);
  CHECK(explorer::linspace(1.3, 9.9, 1) == std::vector<double>{1.3});
  CHECK_THROWS_AS((void)explorer::linspace(0.0, 1.0, 0), std::invalid_argument);
}

TEST_CASE("readout success peaks at the span-overlap zeros") {
  const double eta = 0.9;
  const auto one_loss = explorer::readout_peak_alphas({1.0, 1}, eta, 0.1, 10.0);
  CHECK(one_loss.size() == 29);
  CHECK(one_loss.front() ==
        doctest::Approx(std::sqrt(std::numbers::pi / (2.0 * eta))).epsilon(1e-14));
  for (std::size_t q = 0; q < one_loss.size(); ++q) {
    const double x = eta * one_loss[q] * one_loss[q] / std::numbers::pi;
    CHECK(x == doctest::Approx(q + 0.5).epsilon(1e-12));
  }
  const auto three_loss = explorer::readout_peak_alphas({1.0, 3}, eta, 0.1, 10.0);
  CHECK(three_loss.front() ==
        doctest::Approx(std::sqrt(std::sqrt(2.0) * std::numbers::pi / (2.0 * eta)))
            .epsilon(1e-14));
  CHECK(explorer::readout_peak_alphas({1.0, 2}, eta, 0.1, 10.0).empty());
}

TEST_CASE("parallel sweep is bitwise identical to the serial reference") {
  explorer::SweepSpec spec;
  spec.base = memory_chain();
  spec.base.m_multiplex = 2;
  spec.param = "alpha";
  spec.values = explorer::linspace(0.5, 2.0, 101);

  const auto parallel = explorer::sweep(spec);
  const auto serial = explorer::sweep_serial(spec);
  REQUIRE(parallel.size() == serial.size());
  for (std::size_t i = 0; i < parallel.size(); ++i) {
    const auto a = csv::report_row(parallel[i]);
    const auto b = csv::report_row(serial[i]);
    REQUIRE(a.size() == b.size());
    CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
  }
}

TEST_CASE("optimizer finds the narrow readout peak off the uniform grid") {
  ProtocolConfig config = memory_chain();
  OptimizeOptions options;
  options.objective = Objective::per_channel_use;
  const auto best = explorer::optimize(config, options);
  // The winning amplitude is the first seeded span-overlap zero, which no
  // 61-point uniform grid contains.
  CHECK(best.config.code.alpha == doctest::Approx(1.2678268310418292).epsilon(1e-15));
  CHECK(best.config.m_multiplex == 3);
  CHECK(best.objective_value == doctest::Approx(8.763579707824633e-4).epsilon(1e-12));
  CHECK(best.report.per_channel_use == doctest::Approx(best.objective_value).epsilon(1e-14));
}

TEST_CASE("optimizer dominates every point of its own grid") {
  ProtocolConfig config = memory_chain();
  config.l_total_km = 100.0;
  OptimizeOptions options;
  options.alpha_min = 0.8;
  options.alpha_max = 1.6;
  options.alpha_points = 9;
  options.m_min = 1;
  options.m_max = 4;
  const auto best = explorer::optimize(config, options);
  for (int m = 1; m <= 4; ++m) {
    for (double a : explorer::linspace(0.8, 1.6, 9)) {
      ProtocolConfig c = config;
      c.m_multiplex = m;
      c.code.alpha = a;
      CHECK(best.objective_value >= rate::skr(c).per_channel_use * (1.0 - 1e-12));
    }
  }
}

TEST_CASE("ties resolve toward the smallest channel count") {
  // The single-channel average ignores multiplexing entirely, so every m
  // scores the same and the first candidate must win.
  ProtocolConfig config = memory_chain();
  config.variant = Variant::single_avg;
  OptimizeOptions options;
  options.alpha_min = 0.9;
  options.alpha_max = 0.9;
  options.alpha_points = 1;
  options.m_min = 2;
  options.m_max = 6;
  const auto best = explorer::optimize(config, options);
  CHECK(best.config.m_multiplex == 2);
  CHECK(best.report.m_multiplex == 1);
}

TEST_CASE("a lossless chain has no use for extra channels") {
  ProtocolConfig config = memory_chain();
  config.attenuation_db_km = 0.0;  // every attempt is accepted
  config.l_total_km = 100.0;
  OptimizeOptions options;
  options.alpha_min = 1.0;
  options.alpha_max = 1.0;
  options.alpha_points = 1;
  options.m_min = 1;
  options.m_max = 6;
  options.objective = Objective::per_channel_use;
  const auto best = explorer::optimize(config, options);
  CHECK(best.config.m_multiplex == 1);
  CHECK(best.report.p_tdsm == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("optimized rates improve with memory coherence time") {
  ProtocolConfig config = memory_chain();
  config.memory = MemoryModel::dephasing;
  config.p_m = 0.999;
  OptimizeOptions options;
  options.alpha_min = 1.0;
  options.alpha_max = 1.6;
  options.alpha_points = 21;
  options.m_max = 8;
  options.objective = Objective::rate_bits;
  double previous = -1.0;
  for (double t_coh : {0.01, 0.1, 1.0}) {
    config.t_coh_s = t_coh;
    const double value = explorer::optimize(config, options).objective_value;
    CHECK(value > previous);
    previous = value;
  }
}

TEST_CASE("threshold finder needs distinct objectives and a sign change") {
  const ProtocolConfig a = memory_chain();
  CHECK_THROWS_AS((void)explorer::find_threshold(a, a, "p_m", 0.9, 1.0, nullptr),
                  std::invalid_argument);

  ProtocolConfig slower = a;
  slower.p_m = 0.8;  // strictly worse readout at every amplitude
  CHECK_THROWS_AS((void)explorer::find_threshold(a, slower, "alpha", 1.0, 1.5, nullptr),
                  std::domain_error);
}

TEST_CASE("threshold finder recovers an analytic crossing") {
  // Memory chains idle at the herald time while streamed chains repeat at
  // the source period but pay the readout exponent twice.  Sweeping the
  // source period t0 crosses the two rates at t0 = (p_usd p_m)^n * 2 L0 / c.
  ProtocolConfig memory = memory_chain();
  memory.l_total_km = 10.0;
  memory.m_multiplex = 2;
  memory.p_m = 0.95;
  ProtocolConfig streamed = memory;
  streamed.variant = Variant::graph;

  const auto res =
      explorer::find_threshold(memory, streamed, "t0_s", 1e-8, 1e-5, nullptr);
  const double p_usd = cat::usd_probability_damped(memory.code, memory.eta_half(), 0);
  const double expected = std::pow(p_usd * 0.95, 10.0) * 1e-5;
  CHECK(res.value == doctest::Approx(expected).epsilon(1e-4));
  CHECK(res.objective_a ==
        doctest::Approx(res.objective_b).epsilon(2e-6));
  CHECK(res.iterations > 0);
}

TEST_CASE("cost solver rejects targets outside the bracket") {
  ProtocolConfig config = memory_chain();
  config.code.alpha = first_peak(config);
  config.memory = MemoryModel::dephasing;
  config.t_coh_s = 0.5;
  config.m_multiplex = 3;
  config.l_total_km = 200.0;
  config.n_sources = 100.0;
  CHECK_THROWS_AS(
      (void)explorer::solve_cost_target(config, 1e-12, 0.25, 8.0, nullptr),
      std::domain_error);
}

TEST_CASE("doubling the sources per station lengthens the affordable link") {
  ProtocolConfig config = memory_chain();
  config.memory = MemoryModel::dephasing;
  config.t_coh_s = 0.5;
  config.m_multiplex = 3;
  config.p_m = 0.99;
  config.l_total_km = 200.0;
  const auto repin = [](ProtocolConfig &c) { c.code.alpha = first_peak(c); };

  config.n_sources = 100.0;
  const auto base = explorer::solve_cost_target(config, 100.0, 0.13, 0.4, repin);
  config.n_sources = 200.0;
  const auto doubled = explorer::solve_cost_target(config, 100.0, 0.13, 0.4, repin);

  CHECK(base.l0_km == doctest::Approx(0.1798).epsilon(0.05));
  CHECK(doubled.l0_km == doctest::Approx(0.1920).epsilon(0.05));
  CHECK(doubled.l0_km > base.l0_km);
  for (const auto *res : {&base, &doubled}) {
    CHECK(res->cprime == doctest::Approx(100.0).epsilon(0.05));
    CHECK(res->l0_km > 0.13);
    CHECK(res->l0_km < 0.4);
    CHECK(res->report.r_qkd > 0.0);
  }
}

} // TEST_SUITE
