#include "catrep/link.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace catrep::link {

namespace {

constexpr double kPi = std::numbers::pi;

// Insert a fresh qubit at position `pos`, with per-level components taken
// from two same-layout states (level 0 from `up`, level 1 from `down`).
FockState insert_qubit(const FockState &up, const FockState &down, int pos) {
  if (up.cutoffs != down.cutoffs)
    throw std::invalid_argument("insert_qubit: component layouts differ");
  FockState out;
  out.cutoffs = up.cutoffs;
  out.cutoffs.insert(out.cutoffs.begin() + pos, 1);
  out.amp.resize(up.amp.size() * 2);
  std::size_t tail = 1;
  for (std::size_t i = pos; i < up.cutoffs.size(); ++i)
    tail *= static_cast<std::size_t>(up.cutoffs[i] + 1);
  for (std::size_t i = 0; i < up.amp.size(); ++i) {
    std::size_t before = i / tail, after = i % tail;
    out.amp[(before * 2 + 0) * tail + after] = up.amp[i];
    out.amp[(before * 2 + 1) * tail + after] = down.amp[i];
  }
  return out;
}

// 2x2 qubit gates used for frame corrections.
fock::FockOperator qubit_x() {
  fock::FockOperator op = fock::identity_operator(1);
  op.at(0, 0) = 0.0;
  op.at(1, 1) = 0.0;
  op.at(0, 1) = 1.0;
  op.at(1, 0) = 1.0;
  return op;
}

fock::FockOperator qubit_z() {
  fock::FockOperator op = fock::identity_operator(1);
  op.at(1, 1) = -1.0;
  return op;
}

// Bell-state amplitudes over two qubits, indexed 0..3 as
// Phi+, Phi-, Psi+, Psi-.
std::array<std::array<cx, 4>, 4> bell_table() {
  const double r = 1.0 / std::sqrt(2.0);
  return {{{r, 0.0, 0.0, r},
           {r, 0.0, 0.0, -r},
           {0.0, r, r, 0.0},
           {0.0, r, -r, 0.0}}};
}

void check_params(const LinkParams &params) {
  if (!(params.code.alpha > 0.0))
    throw std::invalid_argument("cat code amplitude must be positive");
  if (params.code.loss_order < 1)
    throw std::invalid_argument("loss order must be >= 1");
  if (params.eta_half < 0.0 || params.eta_half > 1.0)
    throw std::invalid_argument("transmittance must be in [0, 1]");
}

} // namespace

const ResidueBranch &LinkOutcome::at(int j_left, int j_right) const {
  for (const auto &b : branches)
    if (b.j_left == j_left && b.j_right == j_right) return b;
  throw std::out_of_range("no branch for the requested residue pair");
}

std::uint8_t encode_frame(int j_left, int j_right) {
  return static_cast<std::uint8_t>((j_left & 0x0f) | ((j_right & 0x0f) << 4));
}

LinkOutcome link_closed_form(const LinkParams &params) {
  check_params(params);
  int s = params.code.components();
  std::vector<cat::LossClassStats> stats;
  stats.reserve(s);
  for (int j = 0; j < s; ++j)
    stats.push_back(cat::loss_class_stats(params.code, params.eta_half, j));
  LinkOutcome out;
  for (int jl = 0; jl < s; ++jl)
    for (int jr = 0; jr < s; ++jr) {
      ResidueBranch b;
      b.j_left = jl;
      b.j_right = jr;
      b.probability = stats[jl].probability * stats[jr].probability;
      b.usd_success =
          (1.0 - std::abs(stats[jl].overlap)) * (1.0 - std::abs(stats[jr].overlap));
      b.fidelity = 0.5 * (1.0 + stats[jl].coherence * stats[jr].coherence);
      b.frame = encode_frame(jl, jr);
      out.branches.push_back(b);
    }
  return out;
}

std::array<ReadoutBranch, 2> usd_readout(const FockState &state, int mode,
                                         const CatCode &code, double eta, int j) {
  int s = code.components();
  int cutoff = state.cutoffs[mode];
  FockState span0 = cat::damped_codeword_span(code, 0, eta, j, cutoff);
  FockState span1 = cat::damped_codeword_span(code, 1, eta, j, cutoff);
  fock::UsdPovm povm = fock::usd_povm(span0, span1);

  // Controlled logical rotation diag(e^{i pi n / s}) on the photonic mode.
  std::vector<cx> rot(static_cast<std::size_t>(cutoff) + 1);
  for (int n = 0; n <= cutoff; ++n) rot[n] = std::exp(cx{0.0, kPi * n / s});
  FockState rotated = fock::apply_mode_diagonal(state, mode, rot);

  double scale = 1.0 / std::sqrt(2.0 * (1.0 + std::abs(povm.overlap)));
  std::array<ReadoutBranch, 2> out;
  for (int x = 0; x < 2; ++x) {
    const FockState &bra = (x == 0) ? povm.recip_a : povm.recip_b;
    FockState up = fock::contract_mode(state, mode, bra);
    FockState down = fock::contract_mode(rotated, mode, bra);
    for (cx &v : up.amp) v *= scale;
    for (cx &v : down.amp) v *= scale;
    FockState merged = insert_qubit(up, down, mode);
    double w = 0.0;
    for (const cx &v : merged.amp) w += std::norm(v);
    ReadoutBranch &br = out[x];
    br.outcome = x;
    br.weight = w;
    if (w > 0.0) {
      double inv = 1.0 / std::sqrt(w);
      for (cx &v : merged.amp) v *= inv;
    }
    // Frame corrections: outcome 1 flips the logical bit; the residue-class
    // phase on the rotated branch is undone on the receiving qubit.
    if (x == 1) merged = fock::apply_mode_operator(merged, mode, qubit_x());
    double phase = (x == 0) ? j * kPi / s : -j * kPi / s;
    if (j != 0)
      merged = fock::apply_mode_diagonal(merged, mode, {cx{1.0, 0.0}, std::exp(cx{0.0, phase})});
    br.state = std::move(merged);
  }
  return out;
}

HalfLinkReadout half_link_readout(const LinkParams &params, int j) {
  check_params(params);
  int s = params.code.components();
  if (j < 0 || j >= s) throw std::invalid_argument("residue class out of range");
  int cutoff = cat::default_cutoff(params.code);
  FockState cw0 = cat::codeword(params.code, 0, cutoff);
  FockState cw1 = cat::codeword(params.code, 1, cutoff);
  // (|up>|0bar> + |down>|1bar>) / sqrt(2) over modes [atom, light].
  FockState psi = insert_qubit(cw0, cw1, 0);
  const double r = 1.0 / std::sqrt(2.0);
  for (cx &v : psi.amp) v *= r;

  fock::WeightedEnsemble ens = fock::apply_loss_unraveled(psi, 1, params.eta_half,
                                                          params.k_max);
  auto [kept, prob] = fock::project_loss_residue(ens, 1, s, j);

  HalfLinkReadout out;
  out.j = j;
  out.class_probability = prob;
  if (kept.items.empty()) return out;
  for (const auto &traj : kept.items) {
    auto branches = usd_readout(traj.state, 1, params.code, params.eta_half, j);
    for (auto &br : branches) {
      if (br.weight <= 0.0) continue;
      ReadoutBranch b;
      b.outcome = br.outcome;
      b.weight = traj.weight * br.weight;
      b.state = std::move(br.state);
      out.usd_success += b.weight;
      out.branches.push_back(std::move(b));
    }
  }
  for (auto &b : out.branches) b.weight /= out.usd_success;
  return out;
}

LinkOutcome link_oracle(const LinkParams &params) {
  check_params(params);
  int s = params.code.components();
  std::vector<HalfLinkReadout> halves;
  halves.reserve(s);
  for (int j = 0; j < s; ++j) halves.push_back(half_link_readout(params, j));

  const auto bells = bell_table();
  FockState bell_target;
  bell_target.cutoffs = {1, 1};
  bell_target.amp = {bells[0][0], bells[0][1], bells[0][2], bells[0][3]};
  fock::FockOperator x_op = qubit_x();
  fock::FockOperator z_op = qubit_z();

  LinkOutcome out;
  for (int jl = 0; jl < s; ++jl)
    for (int jr = 0; jr < s; ++jr) {
      ResidueBranch b;
      b.j_left = jl;
      b.j_right = jr;
      b.probability = halves[jl].class_probability * halves[jr].class_probability;
      b.usd_success = halves[jl].usd_success * halves[jr].usd_success;
      b.frame = encode_frame(jl, jr);
      double fid = 0.0, wsum = 0.0;
      for (const auto &bl : halves[jl].branches)
        for (const auto &br : halves[jr].branches) {
          // Modes: [source L, receiver L, source R, receiver R]; the Bell
          // measurement joins the two source atoms.
          FockState full = fock::tensor_product(bl.state, br.state);
          for (int outcome = 0; outcome < 4; ++outcome) {
            FockState post;
            post.cutoffs = {1, 1};
            post.amp.assign(4, cx{0.0, 0.0});
            for (int q = 0; q < 2; ++q)
              for (int a = 0; a < 2; ++a)
                for (int p = 0; p < 2; ++p)
                  for (int bb = 0; bb < 2; ++bb)
                    post.amp[static_cast<std::size_t>(a) * 2 + bb] +=
                        std::conj(bells[outcome][q * 2 + p]) *
                        full.amp[static_cast<std::size_t>(q) * 8 + a * 4 + p * 2 + bb];
            double w = 0.0;
            for (const cx &v : post.amp) w += std::norm(v);
            if (w == 0.0) continue;
            // Standard teleportation corrections on the right receiver.
            if (outcome == 2 || outcome == 3)
              post = fock::apply_mode_operator(post, 1, x_op);
            if (outcome == 1 || outcome == 3)
              post = fock::apply_mode_operator(post, 1, z_op);
            double overlap = std::norm(fock::inner_product(bell_target, post));
            fid += bl.weight * br.weight * overlap;  // overlap already carries w
            wsum += bl.weight * br.weight * w;
          }
        }
      b.fidelity = (wsum > 0.0) ? fid / wsum : 0.0;
      out.branches.push_back(b);
    }
  return out;
}

double f0_closed_form(double alpha, double eta, int j_left, int j_right) {
  if (j_left < 0 || j_left > 1 || j_right < 0 || j_right > 1)
    throw std::invalid_argument("residue class out of range for the one-loss code");
  double beta = (1.0 - eta) * alpha * alpha;
  int m_max = 24 + static_cast<int>(beta);
  cat::SeriesCoefficients sc = cat::series_coefficients(alpha, eta, m_max);
  auto parity_ratio = [](const std::vector<double> &v) {
    double alt = 0.0, plain = 0.0, sign = 1.0;
    for (double c : v) {
      alt += sign * c * c;
      plain += c * c;
      sign = -sign;
    }
    return (plain == 0.0) ? 1.0 : alt / plain;
  };
  double e_left = (j_left == 0) ? parity_ratio(sc.c) : parity_ratio(sc.d);
  double e_right = (j_right == 0) ? parity_ratio(sc.c) : parity_ratio(sc.d);
  return 0.5 * (1.0 + e_left * e_right);
}

double p_dsm(const LinkParams &params, const std::vector<int> &desired, bool single_side) {
  check_params(params);
  if (desired.empty()) throw std::invalid_argument("accepted residue set is empty");
  double p = 0.0;
  for (int j : desired)
    p += cat::syndrome_class_probability(params.code, params.eta_half, j);
  return single_side ? p : p * p;
}

std::pair<double, double> averaged_link_channel(const LinkParams &params) {
  check_params(params);
  if (params.code.loss_order != 1)
    throw std::invalid_argument("averaged link channel requires the one-loss code");
  double mean = 0.0;
  for (int j = 0; j < params.code.components(); ++j) {
    cat::LossClassStats st = cat::loss_class_stats(params.code, params.eta_half, j);
    mean += st.probability * st.coherence;
  }
  return {1.0, mean * mean};
}

} // namespace catrep::link
