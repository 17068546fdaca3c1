#include "catrep/graph.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "catrep/link.hpp"

namespace catrep::graph {

namespace {

using fock::cx;

void check_n(int n) {
  if (n < 1 || n > 4) throw std::invalid_argument("chain size must be in 1..4");
}

// Parity of the CZ sign for logical configuration mask x.
int edge_parity(const std::vector<std::pair<int, int>> &edges, unsigned x) {
  int p = 0;
  for (auto [a, b] : edges) p ^= static_cast<int>(((x >> a) & 1u) & ((x >> b) & 1u));
  return p;
}

// Accumulate sign * |cw[x_0]> x ... x |cw[x_{n-1}]> into amp (photonic
// block only, row-major, node 0 slowest).
void add_logical_term(std::vector<cx> &amp, const std::vector<const FockState *> &cw,
                      double sign, int n) {
  std::vector<std::size_t> dims(n), strides(n);
  std::size_t total = 1;
  for (int i = n - 1; i >= 0; --i) {
    dims[i] = cw[i]->amp.size();
    strides[i] = total;
    total *= dims[i];
  }
  for (std::size_t idx = 0; idx < total; ++idx) {
    cx v{sign, 0.0};
    std::size_t rest = idx;
    for (int i = 0; i < n; ++i) {
      std::size_t ni = rest / strides[i];
      rest %= strides[i];
      v *= cw[i]->amp[ni];
    }
    amp[idx] += v;
  }
}

} // namespace

std::vector<std::pair<int, int>> chain_edges(int n) {
  check_n(n);
  std::vector<std::pair<int, int>> edges;
  if (n == 2) edges.push_back({0, 1});
  if (n >= 3)
    for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
  return edges;
}

HybridChain build_hybrid_chain(int n, const CatCode &code, int cutoff) {
  check_n(n);
  FockState cw0 = cat::codeword(code, 0, cutoff);
  FockState cw1 = cat::codeword(code, 1, cutoff);
  auto edges = chain_edges(n);

  HybridChain chain;
  chain.n = n;
  chain.code = code;
  std::vector<int> cutoffs(n, 1);
  cutoffs.insert(cutoffs.end(), n, cutoff);
  chain.state.cutoffs = cutoffs;
  std::size_t ph_dim = 1;
  for (int i = 0; i < n; ++i) ph_dim *= cw0.amp.size();
  chain.state.amp.assign((std::size_t{1} << n) * ph_dim, cx{0.0, 0.0});

  std::vector<cx> term(ph_dim);
  for (unsigned x = 0; x < (1u << n); ++x) {
    std::fill(term.begin(), term.end(), cx{0.0, 0.0});
    std::vector<const FockState *> sel(n);
    for (int i = 0; i < n; ++i) sel[i] = ((x >> i) & 1u) ? &cw1 : &cw0;
    double sign = edge_parity(edges, x) ? -1.0 : 1.0;
    add_logical_term(term, sel, sign, n);
    // Matter block index: qubit i slowest for i=0, value = bit i of x.
    std::size_t matter = 0;
    for (int i = 0; i < n; ++i) matter = matter * 2 + ((x >> i) & 1u);
    for (std::size_t p = 0; p < ph_dim; ++p) chain.state.amp[matter * ph_dim + p] += term[p];
  }
  double inv = 1.0 / std::sqrt(static_cast<double>(std::size_t{1} << n));
  for (cx &v : chain.state.amp) v *= inv;
  fock::normalize(chain.state);
  return chain;
}

PhotonicState measure_matter_x(const HybridChain &chain, const std::vector<int> &outcomes) {
  if (static_cast<int>(outcomes.size()) != chain.n)
    throw std::invalid_argument("one X outcome required per matter qubit");
  FockState bra_plus;
  bra_plus.cutoffs = {1};
  const double r = 1.0 / std::sqrt(2.0);
  FockState cur = chain.state;
  for (int i = 0; i < chain.n; ++i) {
    if (outcomes[i] != 0 && outcomes[i] != 1)
      throw std::invalid_argument("X outcomes must be 0 (plus) or 1 (minus)");
    bra_plus.amp = {cx{r, 0.0}, cx{outcomes[i] ? -r : r, 0.0}};
    cur = fock::contract_mode(cur, 0, bra_plus);  // matter block shrinks in front
  }
  PhotonicState out;
  out.n = chain.n;
  out.code = chain.code;
  double nrm = fock::norm(cur);
  out.probability = nrm * nrm;
  for (cx &v : cur.amp) v /= nrm;
  out.state = std::move(cur);
  out.z_frame.assign(chain.n, 0);
  for (int i = 0; i < chain.n; ++i) out.z_frame[i] = static_cast<std::uint8_t>(outcomes[i]);
  return out;
}

FockState photonic_graph_state(int n, const CatCode &code, int cutoff) {
  check_n(n);
  FockState cw0 = cat::codeword(code, 0, cutoff);
  FockState cw1 = cat::codeword(code, 1, cutoff);
  auto edges = chain_edges(n);
  FockState st;
  st.cutoffs.assign(n, cutoff);
  st.amp.assign(fock::state_dim(st.cutoffs), cx{0.0, 0.0});
  for (unsigned x = 0; x < (1u << n); ++x) {
    std::vector<const FockState *> sel(n);
    for (int i = 0; i < n; ++i) sel[i] = ((x >> i) & 1u) ? &cw1 : &cw0;
    add_logical_term(st.amp, sel, edge_parity(edges, x) ? -1.0 : 1.0, n);
  }
  fock::normalize(st);
  return st;
}

PruneResult prune_undesired_nodes(const fock::WeightedEnsemble &after_loss,
                                  const CatCode &code, double eta,
                                  const PruneSpec &spec) {
  int n = static_cast<int>(after_loss.cutoffs.size());
  if (static_cast<int>(spec.residues.size()) != n ||
      static_cast<int>(spec.z_outcomes.size()) != n)
    throw std::invalid_argument("prune spec must cover every node");
  int s = code.components();

  fock::WeightedEnsemble ens = after_loss;
  PruneResult out;
  out.residue_probability = 1.0;
  for (int i = 0; i < n; ++i) {
    auto [kept, p] = fock::project_loss_residue(ens, i, s, spec.residues[i]);
    out.residue_probability *= p;
    ens = std::move(kept);
    if (ens.items.empty()) return out;
  }

  auto edges = chain_edges(n);
  std::vector<std::uint8_t> frame(n, 0);
  out.outcome_probability = 1.0;
  // Contract pruned nodes from the highest index down so that lower mode
  // indices stay valid.
  for (int i = n - 1; i >= 0; --i) {
    if (!spec.z_outcomes[i]) continue;
    int z = *spec.z_outcomes[i];
    if (z != 0 && z != 1) throw std::invalid_argument("Z outcomes must be 0 or 1");
    int cutoff = ens.cutoffs[i];
    FockState span0 = cat::damped_codeword_span(code, 0, eta, spec.residues[i], cutoff);
    FockState span1 = cat::damped_codeword_span(code, 1, eta, spec.residues[i], cutoff);
    fock::UsdPovm povm = fock::usd_povm(span0, span1);
    const FockState &bra = z ? povm.recip_b : povm.recip_a;
    double g = std::abs(povm.overlap);
    fock::WeightedEnsemble next;
    next.cutoffs = ens.cutoffs;
    next.cutoffs.erase(next.cutoffs.begin() + i);
    double chosen = 0.0, success = 0.0;
    for (const auto &t : ens.items) {
      FockState c0 = fock::contract_mode(t.state, i, povm.recip_a);
      FockState c1 = fock::contract_mode(t.state, i, povm.recip_b);
      double w0 = 0.0, w1 = 0.0;
      for (const cx &v : c0.amp) w0 += std::norm(v);
      for (const cx &v : c1.amp) w1 += std::norm(v);
      success += t.weight * (w0 + w1) / (1.0 + g);
      FockState picked = z ? std::move(c1) : std::move(c0);
      double wp = z ? w1 : w0;
      if (wp <= 0.0) continue;
      fock::Trajectory nt;
      nt.weight = t.weight * wp / (1.0 + g);
      chosen += nt.weight;
      double inv = 1.0 / std::sqrt(wp);
      for (cx &v : picked.amp) v *= inv;
      nt.state = std::move(picked);
      nt.losses = t.losses;
      nt.losses.erase(nt.losses.begin() + i);
      next.items.push_back(std::move(nt));
    }
    out.outcome_probability *= (success > 0.0) ? chosen / success : 0.0;
    for (auto &t : next.items) t.weight /= chosen;
    ens = std::move(next);
    if (z)
      for (auto [a, b] : edges) {
        if (a == i && !spec.z_outcomes[b]) frame[b] ^= 1;
        if (b == i && !spec.z_outcomes[a]) frame[a] ^= 1;
      }
  }

  for (int i = 0; i < n; ++i)
    if (!spec.z_outcomes[i]) {
      out.surviving_nodes.push_back(i);
      out.z_frame.push_back(frame[i]);
    }
  out.survivors = std::move(ens);
  return out;
}

namespace {

// Success-weighted residue-pair statistics of reading out a two-mode
// photonic ensemble (possibly unnormalized trajectory weights).
struct PairStats {
  double weight = 0.0;
  double fid_sum = 0.0;  // weight-multiplied fidelity accumulator
};

using PairTable = std::map<std::pair<int, int>, PairStats>;

// Logical-Z framed two-qubit graph target sum_x (-1)^(x1 x2 + f1 x1 + f2 x2).
FockState framed_pair_target(int f1, int f2) {
  FockState t;
  t.cutoffs = {1, 1};
  t.amp.resize(4);
  for (int x1 = 0; x1 < 2; ++x1)
    for (int x2 = 0; x2 < 2; ++x2)
      t.amp[static_cast<std::size_t>(x1) * 2 + x2] =
          0.5 * (((x1 & x2) ^ (f1 & x1) ^ (f2 & x2)) ? -1.0 : 1.0);
  return t;
}

// Stream loss unraveling + double logical readout of a two-mode state and
// fold the branches into the per-(j1, j2) table.  `base_weight` multiplies
// every branch; the state may be unnormalized.
void accumulate_readout(PairTable &table, const FockState &two_mode, double base_weight,
                        const CatCode &code, double eta, int f1, int f2) {
  int s = code.components();
  FockState target = framed_pair_target(f1, f2);
  double total0 = 0.0;
  for (int k1 = 0; k1 <= two_mode.cutoffs[0] && total0 < 1.0 - 1e-13; ++k1) {
    FockState s1 = fock::apply_loss_band(two_mode, 0, k1, eta);
    double w1 = 0.0;
    for (const cx &v : s1.amp) w1 += std::norm(v);
    total0 += w1;
    if (w1 == 0.0) continue;
    double total1 = 0.0;
    for (int k2 = 0; k2 <= two_mode.cutoffs[1] && total1 < w1 * (1.0 - 1e-13); ++k2) {
      FockState s2 = fock::apply_loss_band(s1, 1, k2, eta);
      double w2 = 0.0;
      for (const cx &v : s2.amp) w2 += std::norm(v);
      total1 += w2;
      if (w2 == 0.0) continue;
      int j1 = k1 % s, j2 = k2 % s;
      auto first = link::usd_readout(s2, 0, code, eta, j1);
      for (const auto &b1 : first) {
        if (b1.weight <= 0.0) continue;
        auto second = link::usd_readout(b1.state, 1, code, eta, j2);
        for (const auto &b2 : second) {
          if (b2.weight <= 0.0) continue;
          double w = base_weight * b1.weight * b2.weight;
          double f = std::norm(fock::inner_product(target, b2.state));
          PairStats &st = table[{j1, j2}];
          st.weight += w;
          st.fid_sum += w * f;
        }
      }
    }
  }
}

} // namespace

EquivalenceReport equivalence_check(const EquivalenceParams &params) {
  const CatCode &code = params.code;
  double eta = params.eta_half;
  int s = code.components();
  int cutoff = cat::default_cutoff(code);
  int j2 = params.pruned_residues[0], j3 = params.pruned_residues[1];

  // Direct reference: transmit the two-node state and read out both modes.
  PairTable direct;
  accumulate_readout(direct, photonic_graph_state(2, code, cutoff), 1.0, code, eta, 0, 0);
  double direct_norm = 0.0;
  for (const auto &[jj, st] : direct) direct_norm += st.weight;

  // Four-node path: lose and prune nodes 2 and 3 first (contracting early
  // keeps the working states small), then stream the survivor readouts.
  FockState g4 = photonic_graph_state(4, code, cutoff);
  fock::WeightedEnsemble ens2 = fock::apply_loss_unraveled(g4, 1, eta);
  auto [kept2, p2] = fock::project_loss_residue(ens2, 1, s, j2);
  FockState span0_2 = cat::damped_codeword_span(code, 0, eta, j2, cutoff);
  FockState span1_2 = cat::damped_codeword_span(code, 1, eta, j2, cutoff);
  fock::UsdPovm povm2 = fock::usd_povm(span0_2, span1_2);
  FockState span0_3 = cat::damped_codeword_span(code, 0, eta, j3, cutoff);
  FockState span1_3 = cat::damped_codeword_span(code, 1, eta, j3, cutoff);
  fock::UsdPovm povm3 = fock::usd_povm(span0_3, span1_3);

  EquivalenceReport report;
  report.tolerance = params.tolerance;
  for (int z2 = 0; z2 < 2; ++z2) {
    fock::WeightedEnsemble cut2;
    cut2.cutoffs = {cutoff, cutoff, cutoff};
    for (const auto &t : kept2.items) {
      FockState c = fock::contract_mode(t.state, 1, z2 ? povm2.recip_b : povm2.recip_a);
      double w = 0.0;
      for (const cx &v : c.amp) w += std::norm(v);
      if (w == 0.0) continue;
      fock::Trajectory nt;
      nt.weight = t.weight * w / (1.0 + std::abs(povm2.overlap));
      double inv = 1.0 / std::sqrt(w);
      for (cx &v : c.amp) v *= inv;
      nt.state = std::move(c);
      nt.losses = {0, 0, 0};
      cut2.items.push_back(std::move(nt));
    }
    fock::WeightedEnsemble ens3 = fock::apply_loss_unraveled(cut2, 1, eta);
    auto [kept3, p3] = fock::project_loss_residue(ens3, 1, s, j3);
    for (int z3 = 0; z3 < 2; ++z3) {
      PairTable pruned;
      for (const auto &t : kept3.items) {
        FockState c = fock::contract_mode(t.state, 1, z3 ? povm3.recip_b : povm3.recip_a);
        double w = 0.0;
        for (const cx &v : c.amp) w += std::norm(v);
        if (w == 0.0) continue;
        double inv = 1.0 / std::sqrt(w);
        for (cx &v : c.amp) v *= inv;
        // Pruning frames: node 2 neighbors survivor 1, node 3 survivor 4.
        accumulate_readout(pruned, c, t.weight * w / (1.0 + std::abs(povm3.overlap)),
                           code, eta, z2, z3);
      }
      double pruned_norm = 0.0;
      for (const auto &[jj, st] : pruned) pruned_norm += st.weight;
      for (const auto &[jj, st] : direct) {
        auto it = pruned.find(jj);
        double w_direct = st.weight / direct_norm;
        double w_pruned = (it == pruned.end() || pruned_norm == 0.0)
                              ? 0.0
                              : it->second.weight / pruned_norm;
        report.max_probability_dev =
            std::max(report.max_probability_dev, std::abs(w_direct - w_pruned));
        double f_direct = (st.weight > 0.0) ? st.fid_sum / st.weight : 0.0;
        double f_pruned = (it != pruned.end() && it->second.weight > 0.0)
                              ? it->second.fid_sum / it->second.weight
                              : 0.0;
        report.max_fidelity_dev =
            std::max(report.max_fidelity_dev, std::abs(f_direct - f_pruned));
        ++report.branches_checked;
      }
    }
  }
  report.pass = report.max_probability_dev <= report.tolerance &&
                report.max_fidelity_dev <= report.tolerance;
  return report;
}

} // namespace catrep::graph
