#pragma once

// Truncated-Fock-space state vectors, loss channels as Kraus unravelings,
// and unambiguous-discrimination POVMs.  Everything here is an exact
// (up to truncation) reference path; the closed forms elsewhere in the
// library are validated against it.

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace catrep::fock {

using cx = std::complex<double>;

// Thrown when a requested cutoff cannot hold the state to the guaranteed
// precision (norm defect above tolerance).
class truncation_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Photon-number tail mass guaranteed below this by required_cutoff().
inline constexpr double kCoherentTailTol = 1e-14;
// Norm defect tolerated when truncating states / unraveling losses.
inline constexpr double kNormDefectTol = 1e-12;
// Default maximum loss order retained by apply_loss_unraveled; extended
// adaptively until the dropped weight is below kNormDefectTol.
inline constexpr int kDefaultLossOrder = 12;

// Dense multimode pure state.  amp is row-major with mode 0 slowest;
// mode i holds photon numbers 0..cutoffs[i] (dimension cutoffs[i]+1).
// Qubit registers are modes with cutoff 1.
struct FockState {
  std::vector<int> cutoffs;
  std::vector<cx> amp;

  int modes() const { return static_cast<int>(cutoffs.size()); }
  int dim(int mode) const { return cutoffs[mode] + 1; }
  std::size_t size() const { return amp.size(); }
};

// Dense single-mode operator on photon numbers 0..cutoff (row-major).
struct FockOperator {
  int cutoff = 0;
  std::vector<cx> m;

  int dim() const { return cutoff + 1; }
  cx &at(int r, int c) { return m[static_cast<std::size_t>(r) * dim() + c]; }
  cx at(int r, int c) const { return m[static_cast<std::size_t>(r) * dim() + c]; }
};

// One pure branch of a Kraus unraveling: probability weight, normalized
// state, and the photon-loss count recorded per mode.
struct Trajectory {
  double weight = 0.0;
  FockState state;
  std::vector<int> losses;
};

// Probability-weighted ensemble of pure trajectories over a fixed mode layout.
struct WeightedEnsemble {
  std::vector<int> cutoffs;
  std::vector<Trajectory> items;

  double total_weight() const;
};

// Unambiguous discrimination of two linearly independent pure states.
// Success operators are rank one: E_x = |recip_x><recip_x| / (1 + |overlap|),
// built from the reciprocal (dual) vectors of the input pair.
struct UsdPovm {
  cx overlap;              // <a|b>
  double success = 0.0;    // per-state success probability 1 - |<a|b>|
  FockState recip_a;       // normalized dual vector orthogonal to b
  FockState recip_b;       // normalized dual vector orthogonal to a
  FockOperator e_a;        // "state was a" outcome
  FockOperator e_b;        // "state was b" outcome
  FockOperator e_fail;     // inconclusive outcome (span minus successes)
};

std::size_t state_dim(const std::vector<int> &cutoffs);

// Smallest cutoff holding a coherent state of modulus |alpha| with photon
// tail below kCoherentTailTol, plus `extra` levels of loss headroom.
int required_cutoff(double alpha_abs, int extra = kDefaultLossOrder);

// Normalized coherent state |alpha> truncated at `cutoff`; throws
// truncation_error if the dropped tail exceeds kNormDefectTol.
FockState coherent_state(cx alpha, int cutoff);
FockState vacuum_state(int cutoff);
FockState basis_state(const std::vector<int> &cutoffs, const std::vector<int> &ns);

FockOperator identity_operator(int cutoff);
FockOperator annihilation(int cutoff);
FockOperator number_operator(int cutoff);
// diag(exp(i*phase*n)) -- logical rotations on cat codes.
FockOperator phase_rotation(double phase, int cutoff);
// Loss Kraus operator A_k for transmittance eta (k photons lost).
FockOperator kraus_loss(int k, double eta, int cutoff);

double norm(const FockState &a);
void normalize(FockState &a);
cx inner_product(const FockState &a, const FockState &b);
FockState tensor_product(const FockState &a, const FockState &b);

// Apply a single-mode operator to `mode` of a multimode state.
FockState apply_mode_operator(const FockState &state, int mode, const FockOperator &op);
// Fast path for the k-photon loss Kraus operator (single shifted band).
FockState apply_loss_band(const FockState &state, int mode, int k, double eta);
// Multiply mode amplitudes by diag(d).
FockState apply_mode_diagonal(const FockState &state, int mode, const std::vector<cx> &diag);
// Remove `mode` by contracting with <bra| (single-mode, same cutoff).
FockState contract_mode(const FockState &state, int mode, const FockState &bra);

// Reduced density matrix of one mode, row-major dim x dim.
std::vector<cx> partial_trace(const FockState &state, int keep_mode);

// Unravel a loss channel on one mode into pure trajectories with squared
// Kraus-amplitude weights.  k_max < 0 selects kDefaultLossOrder with
// adaptive extension; throws truncation_error if the dropped trajectory
// weight cannot be brought below kNormDefectTol.
WeightedEnsemble apply_loss_unraveled(const FockState &state, int mode, double eta,
                                      int k_max = -1);
WeightedEnsemble apply_loss_unraveled(const WeightedEnsemble &ens, int mode, double eta,
                                      int k_max = -1);

// Keep trajectories whose loss count on `mode` is congruent to j (mod s).
// Returns the renormalized ensemble and the branch probability; an empty
// branch comes back with probability 0 and no items.
std::pair<WeightedEnsemble, double> project_loss_residue(const WeightedEnsemble &ens,
                                                         int mode, int s, int j);

// Ensemble-average fidelity to a normalized pure target: sum_i w_i |<t|psi_i>|^2.
double fidelity_to_pure(const WeightedEnsemble &ens, const FockState &target);

// Unambiguous discrimination POVM for two normalized single-mode states.
// Throws std::invalid_argument if the states are (anti)parallel.
UsdPovm usd_povm(const FockState &span_a, const FockState &span_b);

} // namespace catrep::fock
