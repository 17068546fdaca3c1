#include "catrep/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace catrep::fock {

namespace {

// Stride of `mode` in the row-major amplitude layout (mode 0 slowest).
std::size_t mode_stride(const std::vector<int> &cutoffs, int mode) {
  std::size_t stride = 1;
  for (int i = static_cast<int>(cutoffs.size()) - 1; i > mode; --i)
    stride *= static_cast<std::size_t>(cutoffs[i] + 1);
  return stride;
}

void check_mode(const std::vector<int> &cutoffs, int mode) {
  if (mode < 0 || mode >= static_cast<int>(cutoffs.size()))
    throw std::invalid_argument("mode index out of range");
}

// Kraus amplitude of losing exactly k photons out of n:
//   sqrt((1-eta)^k / k!) * eta^((n-k)/2) * sqrt(n!/(n-k)!)
double kraus_amplitude(int k, double eta, int n) {
  if (n < k) return 0.0;
  // Limits: eta=0 maps |n> to |0> deterministically; eta=1 is lossless.
  if (eta == 0.0) return (n == k) ? 1.0 : 0.0;
  if (eta == 1.0) return (k == 0) ? 1.0 : 0.0;
  double log_amp = 0.5 * (k * std::log1p(-eta) - std::lgamma(k + 1.0) +
                          (n - k) * std::log(eta) + std::lgamma(n + 1.0) -
                          std::lgamma(n - k + 1.0));
  return std::exp(log_amp);
}

} // namespace

double WeightedEnsemble::total_weight() const {
  double w = 0.0;
  for (const auto &t : items) w += t.weight;
  return w;
}

std::size_t state_dim(const std::vector<int> &cutoffs) {
  std::size_t d = 1;
  for (int c : cutoffs) {
    if (c < 1) throw std::invalid_argument("cutoff must be >= 1");
    d *= static_cast<std::size_t>(c + 1);
  }
  return d;
}

int required_cutoff(double alpha_abs, int extra) {
  double mean = alpha_abs * alpha_abs;
  if (mean == 0.0) return std::max(1, extra);
  // Poisson tail: walk the cumulative distribution until the remainder
  // drops below the guaranteed tolerance.
  double term = std::exp(-mean);
  double cum = term;
  int n = 0;
  while (1.0 - cum > kCoherentTailTol && n < 100000) {
    ++n;
    term *= mean / n;
    cum += term;
  }
  return std::max(1, n + std::max(0, extra));
}

FockState coherent_state(cx alpha, int cutoff) {
  if (cutoff < 1) throw std::invalid_argument("cutoff must be >= 1");
  FockState s;
  s.cutoffs = {cutoff};
  s.amp.resize(static_cast<std::size_t>(cutoff) + 1);
  // amp[n] = e^{-|a|^2/2} a^n / sqrt(n!), built by recurrence.
  cx a = std::exp(-0.5 * std::norm(alpha));
  double kept = 0.0;
  for (int n = 0; n <= cutoff; ++n) {
    if (n > 0) a *= alpha / std::sqrt(static_cast<double>(n));
    s.amp[n] = a;
    kept += std::norm(a);
  }
  if (1.0 - kept > kNormDefectTol)
    throw truncation_error("coherent state tail exceeds norm tolerance at this cutoff");
  normalize(s);
  return s;
}

FockState vacuum_state(int cutoff) {
  FockState s;
  s.cutoffs = {cutoff};
  s.amp.assign(static_cast<std::size_t>(cutoff) + 1, cx{0.0, 0.0});
  s.amp[0] = 1.0;
  return s;
}

FockState basis_state(const std::vector<int> &cutoffs, const std::vector<int> &ns) {
  if (cutoffs.size() != ns.size())
    throw std::invalid_argument("basis_state: occupation list length mismatch");
  FockState s;
  s.cutoffs = cutoffs;
  s.amp.assign(state_dim(cutoffs), cx{0.0, 0.0});
  std::size_t idx = 0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (ns[i] < 0 || ns[i] > cutoffs[i])
      throw std::invalid_argument("basis_state: occupation exceeds cutoff");
    idx = idx * static_cast<std::size_t>(cutoffs[i] + 1) + static_cast<std::size_t>(ns[i]);
  }
  s.amp[idx] = 1.0;
  return s;
}

FockOperator identity_operator(int cutoff) {
  FockOperator op;
  op.cutoff = cutoff;
  op.m.assign(static_cast<std::size_t>(op.dim()) * op.dim(), cx{0.0, 0.0});
  for (int n = 0; n <= cutoff; ++n) op.at(n, n) = 1.0;
  return op;
}

FockOperator annihilation(int cutoff) {
  FockOperator op;
  op.cutoff = cutoff;
  op.m.assign(static_cast<std::size_t>(op.dim()) * op.dim(), cx{0.0, 0.0});
  for (int n = 1; n <= cutoff; ++n) op.at(n - 1, n) = std::sqrt(static_cast<double>(n));
  return op;
}

FockOperator number_operator(int cutoff) {
  FockOperator op;
  op.cutoff = cutoff;
  op.m.assign(static_cast<std::size_t>(op.dim()) * op.dim(), cx{0.0, 0.0});
  for (int n = 0; n <= cutoff; ++n) op.at(n, n) = static_cast<double>(n);
  return op;
}

FockOperator phase_rotation(double phase, int cutoff) {
  FockOperator op;
  op.cutoff = cutoff;
  op.m.assign(static_cast<std::size_t>(op.dim()) * op.dim(), cx{0.0, 0.0});
  for (int n = 0; n <= cutoff; ++n)
    op.at(n, n) = std::exp(cx{0.0, phase * n});
  return op;
}

FockOperator kraus_loss(int k, double eta, int cutoff) {
  if (k < 0) throw std::invalid_argument("loss order must be >= 0");
  if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("transmittance must be in [0, 1]");
  FockOperator op;
  op.cutoff = cutoff;
  op.m.assign(static_cast<std::size_t>(op.dim()) * op.dim(), cx{0.0, 0.0});
  for (int n = k; n <= cutoff; ++n) op.at(n - k, n) = kraus_amplitude(k, eta, n);
  return op;
}

double norm(const FockState &a) {
  double s = 0.0;
  for (const cx &v : a.amp) s += std::norm(v);
  return std::sqrt(s);
}

void normalize(FockState &a) {
  double n = norm(a);
  if (n == 0.0) throw std::invalid_argument("cannot normalize a zero state");
  for (cx &v : a.amp) v /= n;
}

cx inner_product(const FockState &a, const FockState &b) {
  if (a.cutoffs != b.cutoffs)
    throw std::invalid_argument("inner_product: mode layouts differ");
  cx s{0.0, 0.0};
  for (std::size_t i = 0; i < a.amp.size(); ++i) s += std::conj(a.amp[i]) * b.amp[i];
  return s;
}

FockState tensor_product(const FockState &a, const FockState &b) {
  FockState out;
  out.cutoffs = a.cutoffs;
  out.cutoffs.insert(out.cutoffs.end(), b.cutoffs.begin(), b.cutoffs.end());
  out.amp.resize(a.amp.size() * b.amp.size());
  std::size_t nb = b.amp.size();
  for (std::size_t i = 0; i < a.amp.size(); ++i)
    for (std::size_t j = 0; j < nb; ++j)
      out.amp[i * nb + j] = a.amp[i] * b.amp[j];
  return out;
}

FockState apply_mode_operator(const FockState &state, int mode, const FockOperator &op) {
  check_mode(state.cutoffs, mode);
  if (op.cutoff != state.cutoffs[mode])
    throw std::invalid_argument("apply_mode_operator: operator cutoff mismatch");
  int d = op.dim();
  std::size_t stride = mode_stride(state.cutoffs, mode);
  std::size_t block = stride * static_cast<std::size_t>(d);
  FockState out;
  out.cutoffs = state.cutoffs;
  out.amp.assign(state.amp.size(), cx{0.0, 0.0});
  for (std::size_t base = 0; base < state.amp.size(); base += block)
    for (std::size_t off = 0; off < stride; ++off)
      for (int r = 0; r < d; ++r) {
        cx acc{0.0, 0.0};
        for (int c = 0; c < d; ++c)
          acc += op.at(r, c) * state.amp[base + off + stride * c];
        out.amp[base + off + stride * r] = acc;
      }
  return out;
}

FockState apply_loss_band(const FockState &state, int mode, int k, double eta) {
  check_mode(state.cutoffs, mode);
  int d = state.dim(mode);
  std::size_t stride = mode_stride(state.cutoffs, mode);
  std::size_t block = stride * static_cast<std::size_t>(d);
  // Precompute the single band <n-k| A_k |n>.
  std::vector<double> band(d, 0.0);
  for (int n = k; n < d; ++n) band[n] = kraus_amplitude(k, eta, n);
  FockState out;
  out.cutoffs = state.cutoffs;
  out.amp.assign(state.amp.size(), cx{0.0, 0.0});
  for (std::size_t base = 0; base < state.amp.size(); base += block)
    for (std::size_t off = 0; off < stride; ++off)
      for (int n = k; n < d; ++n)
        out.amp[base + off + stride * static_cast<std::size_t>(n - k)] =
            band[n] * state.amp[base + off + stride * static_cast<std::size_t>(n)];
  return out;
}

FockState apply_mode_diagonal(const FockState &state, int mode, const std::vector<cx> &diag) {
  check_mode(state.cutoffs, mode);
  int d = state.dim(mode);
  if (static_cast<int>(diag.size()) != d)
    throw std::invalid_argument("apply_mode_diagonal: diagonal length mismatch");
  std::size_t stride = mode_stride(state.cutoffs, mode);
  std::size_t block = stride * static_cast<std::size_t>(d);
  FockState out = state;
  for (std::size_t base = 0; base < out.amp.size(); base += block)
    for (std::size_t off = 0; off < stride; ++off)
      for (int n = 0; n < d; ++n)
        out.amp[base + off + stride * static_cast<std::size_t>(n)] *= diag[n];
  return out;
}

FockState contract_mode(const FockState &state, int mode, const FockState &bra) {
  check_mode(state.cutoffs, mode);
  if (bra.modes() != 1 || bra.cutoffs[0] != state.cutoffs[mode])
    throw std::invalid_argument("contract_mode: bra layout mismatch");
  int d = state.dim(mode);
  std::size_t stride = mode_stride(state.cutoffs, mode);
  std::size_t block = stride * static_cast<std::size_t>(d);
  FockState out;
  out.cutoffs = state.cutoffs;
  out.cutoffs.erase(out.cutoffs.begin() + mode);
  out.amp.assign(state.amp.size() / static_cast<std::size_t>(d), cx{0.0, 0.0});
  std::size_t w = 0;
  for (std::size_t base = 0; base < state.amp.size(); base += block)
    for (std::size_t off = 0; off < stride; ++off, ++w) {
      cx acc{0.0, 0.0};
      for (int n = 0; n < d; ++n)
        acc += std::conj(bra.amp[n]) * state.amp[base + off + stride * static_cast<std::size_t>(n)];
      out.amp[w] = acc;
    }
  return out;
}

std::vector<cx> partial_trace(const FockState &state, int keep_mode) {
  check_mode(state.cutoffs, keep_mode);
  int d = state.dim(keep_mode);
  std::size_t stride = mode_stride(state.cutoffs, keep_mode);
  std::size_t block = stride * static_cast<std::size_t>(d);
  std::vector<cx> rho(static_cast<std::size_t>(d) * d, cx{0.0, 0.0});
  for (std::size_t base = 0; base < state.amp.size(); base += block)
    for (std::size_t off = 0; off < stride; ++off)
      for (int r = 0; r < d; ++r) {
        cx ar = state.amp[base + off + stride * static_cast<std::size_t>(r)];
        if (ar == cx{0.0, 0.0}) continue;
        for (int c = 0; c < d; ++c)
          rho[static_cast<std::size_t>(r) * d + c] +=
              ar * std::conj(state.amp[base + off + stride * static_cast<std::size_t>(c)]);
      }
  return rho;
}

WeightedEnsemble apply_loss_unraveled(const FockState &state, int mode, double eta, int k_max) {
  WeightedEnsemble seed;
  seed.cutoffs = state.cutoffs;
  Trajectory t;
  t.weight = 1.0;
  t.state = state;
  t.losses.assign(state.cutoffs.size(), 0);
  seed.items.push_back(std::move(t));
  return apply_loss_unraveled(seed, mode, eta, k_max);
}

WeightedEnsemble apply_loss_unraveled(const WeightedEnsemble &ens, int mode, double eta,
                                      int k_max) {
  check_mode(ens.cutoffs, mode);
  if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("transmittance must be in [0, 1]");
  bool adaptive = k_max < 0;
  int limit = adaptive ? kDefaultLossOrder : k_max;
  int hard_limit = ens.cutoffs[mode];
  WeightedEnsemble out;
  out.cutoffs = ens.cutoffs;
  for (const auto &traj : ens.items) {
    double kept = 0.0;
    int k = 0;
    std::vector<Trajectory> branches;
    while (true) {
      FockState branch = apply_loss_band(traj.state, mode, k, eta);
      double w = 0.0;
      for (const cx &v : branch.amp) w += std::norm(v);
      if (w > 0.0) {
        Trajectory nt;
        nt.weight = traj.weight * w;
        double inv = 1.0 / std::sqrt(w);
        for (cx &v : branch.amp) v *= inv;
        nt.state = std::move(branch);
        nt.losses = traj.losses;
        nt.losses[mode] += k;
        branches.push_back(std::move(nt));
        kept += w;
      }
      ++k;
      if (k > limit) {
        if (1.0 - kept <= kNormDefectTol) break;
        if (!adaptive || limit >= hard_limit)
          throw truncation_error("loss unraveling tail exceeds norm tolerance");
        limit = std::min(hard_limit, limit + kDefaultLossOrder);
      }
    }
    for (auto &b : branches) out.items.push_back(std::move(b));
  }
  return out;
}

std::pair<WeightedEnsemble, double> project_loss_residue(const WeightedEnsemble &ens,
                                                         int mode, int s, int j) {
  check_mode(ens.cutoffs, mode);
  if (s < 1 || j < 0 || j >= s) throw std::invalid_argument("invalid residue class");
  WeightedEnsemble kept;
  kept.cutoffs = ens.cutoffs;
  double total = 0.0, sel = 0.0;
  for (const auto &t : ens.items) {
    total += t.weight;
    if (t.losses[mode] % s == j) {
      sel += t.weight;
      kept.items.push_back(t);
    }
  }
  if (kept.items.empty() || total == 0.0) return {std::move(kept), 0.0};
  double prob = sel / total;
  for (auto &t : kept.items) t.weight /= sel;
  return {std::move(kept), prob};
}

double fidelity_to_pure(const WeightedEnsemble &ens, const FockState &target) {
  double f = 0.0;
  for (const auto &t : ens.items)
    f += t.weight * std::norm(inner_product(target, t.state));
  return f;
}

UsdPovm usd_povm(const FockState &span_a, const FockState &span_b) {
  if (span_a.modes() != 1 || span_b.modes() != 1 || span_a.cutoffs != span_b.cutoffs)
    throw std::invalid_argument("usd_povm expects two single-mode states on one cutoff");
  UsdPovm povm;
  povm.overlap = inner_product(span_a, span_b);
  double g = std::abs(povm.overlap);
  if (g >= 1.0 - 1e-12)
    throw std::invalid_argument("usd_povm: states are not linearly independent");
  povm.success = 1.0 - g;

  auto reciprocal = [](const FockState &keep, const FockState &kill, cx ov_kill_keep) {
    // |recip> = (|keep> - <kill|keep>|kill>) / sqrt(1 - |<kill|keep>|^2)
    FockState r = keep;
    for (std::size_t i = 0; i < r.amp.size(); ++i) r.amp[i] -= ov_kill_keep * kill.amp[i];
    normalize(r);
    return r;
  };
  povm.recip_a = reciprocal(span_a, span_b, std::conj(povm.overlap));
  povm.recip_b = reciprocal(span_b, span_a, povm.overlap);

  int d = span_a.dim(0);
  double scale = 1.0 / (1.0 + g);
  auto rank_one = [&](const FockState &v) {
    FockOperator op;
    op.cutoff = span_a.cutoffs[0];
    op.m.assign(static_cast<std::size_t>(d) * d, cx{0.0, 0.0});
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c)
        op.at(r, c) = scale * v.amp[r] * std::conj(v.amp[c]);
    return op;
  };
  povm.e_a = rank_one(povm.recip_a);
  povm.e_b = rank_one(povm.recip_b);

  // Span projector from an orthonormalized pair (Gram-Schmidt).
  FockState u1 = span_a;
  FockState u2 = span_b;
  cx proj = inner_product(u1, u2);
  for (std::size_t i = 0; i < u2.amp.size(); ++i) u2.amp[i] -= proj * u1.amp[i];
  normalize(u2);
  povm.e_fail.cutoff = span_a.cutoffs[0];
  povm.e_fail.m.assign(static_cast<std::size_t>(d) * d, cx{0.0, 0.0});
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c)
      povm.e_fail.at(r, c) = u1.amp[r] * std::conj(u1.amp[c]) + u2.amp[r] * std::conj(u2.amp[c]) -
                             povm.e_a.at(r, c) - povm.e_b.at(r, c);
  return povm;
}

} // namespace catrep::fock
