#pragma once

// Loss-resilient cat codes: codeword construction, photon-loss residue
// classes, and the closed-form class statistics used by the link and rate
// models.  A code correcting up to `loss_order` photon losses superposes
// s = loss_order + 1 coherent components per codeword.

#include <complex>

#include "catrep/fock.hpp"

namespace catrep::cat {

using fock::cx;
using fock::FockState;

struct CatCode {
  double alpha = 1.0;  // coherent amplitude (real, positive)
  int loss_order = 1;  // maximum correctable photon loss l

  int components() const { return loss_order + 1; }  // s = l + 1
};

// Per-residue-class statistics of a codeword sent through transmittance eta.
struct LossClassStats {
  double probability = 0.0;  // P_j, identical for both codewords
  double coherence = 0.0;    // E_j: mean (-1)^t over extra s-loss bursts
  cx overlap{0.0, 0.0};      // <w_j0|w_j1> of the damped class-j spans
};

// Normalized logical codeword |bit> at the given cutoff; components sit at
// angles (2*pi*r + bit*pi)/s.  Throws fock::truncation_error when the cutoff
// cannot hold the state.
FockState codeword(const CatCode &code, int bit, int cutoff);

// Cutoff that safely holds both codewords plus loss headroom.
int default_cutoff(const CatCode &code);

// <0bar|1bar> computed in Fock space at a self-chosen safe cutoff.
cx codeword_overlap(const CatCode &code);

// Unambiguous-discrimination success for the undamped codeword pair,
// 1 - |<0bar|1bar>|.
double usd_probability(const CatCode &code);

// Closed-form class statistics after loss at transmittance eta.
LossClassStats loss_class_stats(const CatCode &code, double eta, int j);

// P_j alone; the codeword average and the per-codeword value coincide
// exactly, so the `bit` overload simply ignores which codeword was sent.
double syndrome_class_probability(const CatCode &code, double eta, int j);
double syndrome_class_probability(const CatCode &code, double eta, int j, int bit);

// USD success for the damped class-j spans: 1 - |<w_j0|w_j1>|.
double usd_probability_damped(const CatCode &code, double eta, int j);
// Class-probability-weighted average of the damped USD success.
double usd_probability_damped_avg(const CatCode &code, double eta);

// Even/odd loss expansion coefficients of the damped one-loss code
// (loss_order must be 1): C_m scales the 2m-loss branch of codeword parity,
// D_m the (2m+1)-loss branch.  Index m runs 0..m_max.
struct SeriesCoefficients {
  std::vector<double> c;  // ||A_{2m} codeword||
  std::vector<double> d;  // ||A_{2m+1} codeword||
};
SeriesCoefficients series_coefficients(double alpha, double eta, int m_max);

// Damped class-j span vector of codeword `bit` (normalized direction of
// A_k codeword for any k congruent to j), via the exact Fock path.
FockState damped_codeword_span(const CatCode &code, int bit, double eta, int j, int cutoff);

namespace detail {

// sum_t x^(j + s t) / (j + s t)!  for t >= 0 (term recursion, overflow-safe).
double mod_series(double x, int s, int j);
// Same sum with alternating signs (-1)^t.
double mod_series_alternating(double x, int s, int j);
// M_j(x) = sum_{r,r'} e^{2 pi i j (r - r')/s} exp(-x (1 - e^{2 pi i (r'-r)/s}))
// (real by symmetry); j < 0 drops the phase factor (plain component norm).
double component_norm_sum(double x, int s, int j);
// Cross-codeword component sum at damped amplitude; carries the e^{i j pi/s}
// phase of the class-j span overlap.
cx component_cross_sum(double x, int s, int j);

} // namespace detail

} // namespace catrep::cat
