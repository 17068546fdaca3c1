#pragma once

// Single repeater link: two half-links (source atom entangled with a cat
// codeword, codeword damped in the fiber, logical readout at the midpoint
// station) joined by a Bell measurement on the source atoms.  Computed two
// ways: an exact Fock-space oracle and closed forms; tests pin them against
// each other.

#include <array>
#include <cstdint>
#include <vector>

#include "catrep/cat.hpp"
#include "catrep/fock.hpp"

namespace catrep::link {

using cat::CatCode;
using fock::cx;
using fock::FockState;

struct LinkParams {
  CatCode code;
  double eta_half = 1.0;  // transmittance of one half-link
  int k_max = -1;         // loss unraveling order for the oracle (-1 = adaptive)
};

// Outcome restricted to one loss-residue pair (left half, right half).
struct ResidueBranch {
  int j_left = 0;
  int j_right = 0;
  double probability = 0.0;  // P(j_left) * P(j_right), unconditional
  double usd_success = 0.0;  // both logical readouts unambiguous
  double fidelity = 0.0;     // to the Bell target, conditioned on readout success
  std::uint8_t frame = 0;    // residue pair driving the applied phase frames
};

struct LinkOutcome {
  std::vector<ResidueBranch> branches;

  const ResidueBranch &at(int j_left, int j_right) const;
};

std::uint8_t encode_frame(int j_left, int j_right);

// Closed-form link outcome for any loss order.
LinkOutcome link_closed_form(const LinkParams &params);

// Exact truncated-Fock-space pipeline producing the same quantities.
LinkOutcome link_oracle(const LinkParams &params);

// Post-swap fidelity for the one-loss code from the parity-resolved series
// coefficients (sum of squared C's / D's with alternating signs).
double f0_closed_form(double alpha, double eta, int j_left, int j_right);

// Probability that the residue syndromes land in the accepted set; by
// default both halves must, `single_side` accepts on one half only.
double p_dsm(const LinkParams &params, const std::vector<int> &desired,
             bool single_side = false);

// Single-channel average link: deterministic acceptance (probability 1) and
// the squared class-averaged coherence as the effective Bell diagonal bias.
std::pair<double, double> averaged_link_channel(const LinkParams &params);

// One logical readout branch: USD outcome, success-weighted branch weight,
// and the state with the photonic mode replaced by the receiving qubit
// (discrimination and phase frames already applied).
struct ReadoutBranch {
  int outcome = 0;
  double weight = 0.0;
  FockState state;
};

// Unambiguous logical readout of `mode` (known loss residue j): receiving
// qubit prepared in |+>, controlled logical rotation, then the span USD.
// The two returned branch weights sum to the USD success probability.
std::array<ReadoutBranch, 2> usd_readout(const FockState &state, int mode,
                                         const CatCode &code, double eta, int j);

// Full half-link conditioned on loss residue j: branch weights are
// normalized given readout success.
struct HalfLinkReadout {
  int j = 0;
  double class_probability = 0.0;
  double usd_success = 0.0;
  std::vector<ReadoutBranch> branches;  // two-qubit (source atom, receiver)
};

HalfLinkReadout half_link_readout(const LinkParams &params, int j);

} // namespace catrep::link
