#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <vector>

#include "catrep/cat.hpp"
#include "catrep/fock.hpp"
#include "catrep/link.hpp"

using namespace catrep;
using fock::cx;

TEST_SUITE("link") {

TEST_CASE("residue frames pack and recover both indices") {
  CHECK(link::encode_frame(0, 0) == 0);
  const std::uint8_t f = link::encode_frame(2, 3);
  CHECK((f & 0x0f) == 2);
  CHECK((f >> 4) == 3);
}

TEST_CASE("post-swap fidelity of the no-loss branch") {
  CHECK(link::f0_closed_form(1.0, 0.5, 0, 0) ==
        doctest::Approx(0.8028418141330473).epsilon(1e-12));
}

TEST_CASE("post-swap fidelity factorizes over the half-link coherences") {
  // F = (1 + E_jl * E_jr) / 2 with the per-class dephasing biases.
  const cat::CatCode code{1.0, 1};
  const double eta = 0.5;
  const double e_even = cat::loss_class_stats(code, eta, 0).coherence;
  const double e_odd = cat::loss_class_stats(code, eta, 1).coherence;
  CHECK(link::f0_closed_form(1.0, eta, 0, 1) ==
        doctest::Approx(0.5 * (1.0 + e_even * e_odd)).epsilon(1e-12));
  CHECK(link::f0_closed_form(1.0, eta, 1, 1) ==
        doctest::Approx(0.5 * (1.0 + e_odd * e_odd)).epsilon(1e-12));
}

TEST_CASE("closed-form link outcome is consistent with the class statistics") {
  const link::LinkParams params{{1.2, 1}, 0.8, -1};
  const auto outcome = link::link_closed_form(params);
  CHECK(outcome.branches.size() == 4);

  double total = 0.0;
  for (const auto &branch : outcome.branches) {
    const double pl =
        cat::syndrome_class_probability(params.code, params.eta_half, branch.j_left);
    const double pr =
        cat::syndrome_class_probability(params.code, params.eta_half, branch.j_right);
    CHECK(branch.probability == doctest::Approx(pl * pr).epsilon(1e-12));
    const double ul = cat::usd_probability_damped(params.code, params.eta_half, branch.j_left);
    const double ur = cat::usd_probability_damped(params.code, params.eta_half, branch.j_right);
    CHECK(branch.usd_success == doctest::Approx(ul * ur).epsilon(1e-12));
    CHECK(branch.frame == link::encode_frame(branch.j_left, branch.j_right));
    total += branch.probability;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(outcome.at(1, 0).j_left == 1);
  CHECK(outcome.at(1, 0).j_right == 0);
}

TEST_CASE("exact oracle reproduces the closed forms for the one-loss code") {
  const link::LinkParams params{{0.9, 1}, 0.6, -1};
  const auto closed = link::link_closed_form(params);
  const auto oracle = link::link_oracle(params);
  for (const auto &ref : closed.branches) {
    const auto &got = oracle.at(ref.j_left, ref.j_right);
    CHECK(got.probability == doctest::Approx(ref.probability).epsilon(1e-9));
    CHECK(got.usd_success == doctest::Approx(ref.usd_success).epsilon(1e-8));
    CHECK(got.fidelity == doctest::Approx(ref.fidelity).epsilon(1e-8));
  }
}

TEST_CASE("exact oracle reproduces the closed forms for a two-loss code") {
  const link::LinkParams params{{0.8, 2}, 0.7, -1};
  const auto closed = link::link_closed_form(params);
  const auto oracle = link::link_oracle(params);
  const auto &ref = closed.at(0, 0);
  const auto &got = oracle.at(0, 0);
  CHECK(got.probability == doctest::Approx(ref.probability).epsilon(1e-9));
  CHECK(got.usd_success == doctest::Approx(ref.usd_success).epsilon(1e-8));
  CHECK(got.fidelity == doctest::Approx(ref.fidelity).epsilon(1e-8));
}

TEST_CASE("syndrome acceptance probability over both halves") {
  const link::LinkParams params{{1.0, 1}, 0.5, -1};
  CHECK(link::p_dsm(params, {0}) == doctest::Approx(0.6790207222354488).epsilon(1e-12));
  // Single-sided filtering accepts on the left half alone.
  CHECK(link::p_dsm(params, {0}, true) ==
        doctest::Approx(0.8240271368319425).epsilon(1e-12));
  // Accepting every class is no filter at all.
  CHECK(link::p_dsm(params, {0, 1}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("averaged link channel replaces acceptance by deterministic bias") {
  const link::LinkParams params{{1.1, 1}, 0.75, -1};
  const auto [p, coherence] = link::averaged_link_channel(params);
  CHECK(p == 1.0);
  double mean = 0.0;
  for (int j : {0, 1}) {
    const auto stats = cat::loss_class_stats(params.code, params.eta_half, j);
    mean += stats.probability * stats.coherence;
  }
  CHECK(coherence == doctest::Approx(mean * mean).epsilon(1e-12));
}

TEST_CASE("logical readout branches split the span USD success") {
  const cat::CatCode code{1.0, 1};
  const double eta = 0.5;
  const int j = 0;
  const int cutoff = cat::default_cutoff(code);

  // Source qubit entangled with the damped zero-loss codeword span.
  const auto w0 = cat::damped_codeword_span(code, 0, eta, j, cutoff);
  const auto w1 = cat::damped_codeword_span(code, 1, eta, j, cutoff);
  auto entangled = fock::tensor_product(fock::basis_state({1}, {0}), w0);
  const auto other = fock::tensor_product(fock::basis_state({1}, {1}), w1);
  for (std::size_t i = 0; i < entangled.amp.size(); ++i)
    entangled.amp[i] = (entangled.amp[i] + other.amp[i]) / std::sqrt(2.0);

  const auto branches = link::usd_readout(entangled, 1, code, eta, j);
  const double success = cat::usd_probability_damped(code, eta, j);
  CHECK(branches[0].weight + branches[1].weight == doctest::Approx(success).epsilon(1e-10));
  for (const auto &branch : branches) {
    CHECK(branch.state.modes() == 2);
    CHECK(fock::norm(branch.state) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("half-link readout weights and fidelity") {
  const link::LinkParams params{{1.0, 1}, 0.5, -1};
  const auto half = link::half_link_readout(params, 0);
  CHECK(half.class_probability == doctest::Approx(0.8240271368319425).epsilon(1e-9));
  CHECK(half.usd_success ==
        doctest::Approx(cat::usd_probability_damped(params.code, params.eta_half, 0))
            .epsilon(1e-9));

  double total = 0.0;
  for (const auto &branch : half.branches) total += branch.weight;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));

  // Readout leaves (|00> + (-1)^t |11>)/sqrt(2); averaging the Bell fidelity
  // over trajectories gives (1 + E_j) / 2.
  auto bell = fock::basis_state({1, 1}, {0, 0});
  const auto upper = fock::basis_state({1, 1}, {1, 1});
  for (std::size_t i = 0; i < bell.amp.size(); ++i)
    bell.amp[i] = (bell.amp[i] + upper.amp[i]) / std::sqrt(2.0);
  double fidelity = 0.0;
  for (const auto &branch : half.branches)
    fidelity += branch.weight * std::norm(fock::inner_product(bell, branch.state));
  CHECK(fidelity == doctest::Approx(0.8891283940636094).epsilon(1e-9));
}

} // TEST_SUITE
