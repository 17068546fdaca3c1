#pragma once

// Hybrid light-matter chains: matter qubits entangled by CZ gates (a cycle
// for three or more nodes), each holding one cat-encoded photonic mode.
// Covers building the chain, measuring out the matter register, pruning
// undesired photonic nodes by span USD, and the end-to-end check that a
// pruned four-node chain matches direct two-mode transmission.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "catrep/cat.hpp"
#include "catrep/fock.hpp"

namespace catrep::graph {

using cat::CatCode;
using fock::FockState;

// Matter modes occupy positions 0..n-1, photonic modes n..2n-1; photonic
// node i hangs off matter qubit i.
struct HybridChain {
  int n = 0;
  CatCode code;
  FockState state;
};

// Photonic-only remainder with the accumulated logical-Z frame.
struct PhotonicState {
  int n = 0;
  CatCode code;
  FockState state;
  std::vector<std::uint8_t> z_frame;
  double probability = 0.0;
};

// CZ edges between matter qubits: single edge at n=2, cycle for n>=3.
std::vector<std::pair<int, int>> chain_edges(int n);

// Build the n-node hybrid chain (n <= 4): matter register in |+>^n, CZ
// entangling, then a controlled logical rotation writes each matter qubit
// into its photonic codeword.
HybridChain build_hybrid_chain(int n, const CatCode &code, int cutoff);

// Project every matter qubit onto (|0> + (-1)^outcome |1>)/sqrt(2).  Minus
// outcomes are not corrected physically; they flip the logical-Z frame of
// the same-numbered photonic node.
PhotonicState measure_matter_x(const HybridChain &chain,
                               const std::vector<int> &outcomes);

// The photonic state left by all-plus matter measurement, built directly.
FockState photonic_graph_state(int n, const CatCode &code, int cutoff);

// Node dispositions for pruning: every node is assigned its observed loss
// residue; pruned nodes additionally carry the span-USD outcome.
struct PruneSpec {
  std::vector<int> residues;
  std::vector<std::optional<int>> z_outcomes;  // engaged => prune this node
};

struct PruneResult {
  fock::WeightedEnsemble survivors;
  std::vector<int> surviving_nodes;
  std::vector<std::uint8_t> z_frame;      // per surviving node
  double residue_probability = 0.0;       // the observed residue pattern
  double outcome_probability = 0.0;       // Z outcomes given readout success
};

// Project loss residues on all nodes of a transmitted photonic ensemble,
// then measure the pruned nodes out in the logical-Z basis via span USD.
// Frames: outcome 1 on a pruned node flips Z on its surviving neighbors.
PruneResult prune_undesired_nodes(const fock::WeightedEnsemble &after_loss,
                                  const CatCode &code, double eta,
                                  const PruneSpec &spec);

struct EquivalenceParams {
  CatCode code{1.0, 1};
  double eta_half = 0.8;
  std::array<int, 2> pruned_residues{1, 1};  // nodes 2 and 3
  double tolerance = 1e-8;
};

struct EquivalenceReport {
  double max_probability_dev = 0.0;
  double max_fidelity_dev = 0.0;
  double tolerance = 1e-8;
  int branches_checked = 0;
  bool pass = false;
};

// Transmit a four-node chain, prune nodes 2 and 3 at their residues for all
// four Z outcomes, read out the survivors, and compare success-weighted
// probabilities and conditional fidelities against direct transmission of
// the two-node state.
EquivalenceReport equivalence_check(const EquivalenceParams &params);

} // namespace catrep::graph
