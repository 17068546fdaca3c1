#include "catrep/cat.hpp"

#include <cmath>
#include <numbers>

namespace catrep::cat {

namespace {

constexpr double kPi = std::numbers::pi;

void check_code(const CatCode &code) {
  if (!(code.alpha > 0.0)) throw std::invalid_argument("cat code amplitude must be positive");
  if (code.loss_order < 1) throw std::invalid_argument("loss order must be >= 1");
}

void check_eta(double eta) {
  if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("transmittance must be in [0, 1]");
}

void check_class(const CatCode &code, int j) {
  if (j < 0 || j >= code.components())
    throw std::invalid_argument("residue class out of range");
}

} // namespace

namespace detail {

double mod_series(double x, int s, int j) {
  if (x == 0.0) return (j == 0) ? 1.0 : 0.0;
  // First term x^j / j!, then step k -> k+s by multiplying s factors of x/k.
  double term = std::exp(j * std::log(x) - std::lgamma(j + 1.0));
  double acc = 0.0;
  int k = j;
  while (true) {
    acc += term;
    for (int i = 1; i <= s; ++i) term *= x / (k + i);
    k += s;
    if (k > x && (term < acc * 1e-18 || term == 0.0)) break;
  }
  return acc;
}

double mod_series_alternating(double x, int s, int j) {
  if (x == 0.0) return (j == 0) ? 1.0 : 0.0;
  double term = std::exp(j * std::log(x) - std::lgamma(j + 1.0));
  double acc = 0.0;
  double sign = 1.0;
  int k = j;
  while (true) {
    acc += sign * term;
    for (int i = 1; i <= s; ++i) term *= x / (k + i);
    k += s;
    sign = -sign;
    if (k > x && (term < std::abs(acc) * 1e-18 + 1e-300 || term == 0.0)) break;
  }
  return acc;
}

double component_norm_sum(double x, int s, int j) {
  cx acc{0.0, 0.0};
  for (int r = 0; r < s; ++r)
    for (int rp = 0; rp < s; ++rp) {
      double d = 2.0 * kPi * (rp - r) / s;
      cx w = std::exp(-x * (1.0 - std::exp(cx{0.0, d})));
      if (j >= 0) w *= std::exp(cx{0.0, j * d});
      acc += w;
    }
  return acc.real();
}

cx component_cross_sum(double x, int s, int j) {
  cx acc{0.0, 0.0};
  for (int r = 0; r < s; ++r)
    for (int rp = 0; rp < s; ++rp) {
      double d = 2.0 * kPi * (rp - r) / s;
      // Cross-codeword component angles differ by an extra pi/s.
      cx w = std::exp(-x * (1.0 - std::exp(cx{0.0, d + kPi / s})));
      acc += std::exp(cx{0.0, j * d}) * w;
    }
  return acc;
}

} // namespace detail

FockState codeword(const CatCode &code, int bit, int cutoff) {
  check_code(code);
  if (bit != 0 && bit != 1) throw std::invalid_argument("codeword bit must be 0 or 1");
  int s = code.components();
  FockState st;
  st.cutoffs = {cutoff};
  st.amp.assign(static_cast<std::size_t>(cutoff) + 1, cx{0.0, 0.0});
  // Both codewords live on n = 0 (mod s); the component sum collapses to
  // s * (-1)^(q*bit) * alpha^n e^{-alpha^2/2} / sqrt(n!) at n = q s.
  double c = std::exp(-0.5 * code.alpha * code.alpha);
  double kept = 0.0;
  for (int n = 0; n <= cutoff; ++n) {
    if (n > 0) c *= code.alpha / std::sqrt(static_cast<double>(n));
    if (n % s != 0) continue;
    double sign = ((n / s) % 2 != 0 && bit == 1) ? -1.0 : 1.0;
    st.amp[n] = sign * s * c;
    kept += st.amp[n].real() * st.amp[n].real();
  }
  double expected = detail::component_norm_sum(code.alpha * code.alpha, s, -1);
  if (1.0 - kept / expected > fock::kNormDefectTol)
    throw fock::truncation_error("codeword tail exceeds norm tolerance at this cutoff");
  fock::normalize(st);
  return st;
}

int default_cutoff(const CatCode &code) {
  check_code(code);
  return fock::required_cutoff(code.alpha);
}

cx codeword_overlap(const CatCode &code) {
  check_code(code);
  int cutoff = fock::required_cutoff(code.alpha, 4);
  return fock::inner_product(codeword(code, 0, cutoff), codeword(code, 1, cutoff));
}

double usd_probability(const CatCode &code) {
  return 1.0 - std::abs(codeword_overlap(code));
}

LossClassStats loss_class_stats(const CatCode &code, double eta, int j) {
  check_code(code);
  check_eta(eta);
  check_class(code, j);
  int s = code.components();
  double a2 = code.alpha * code.alpha;
  double damped = eta * a2;        // damped mean photon number
  double beta = (1.0 - eta) * a2;  // mean lost photon number

  LossClassStats out;
  double m_j = detail::component_norm_sum(damped, s, j);
  double n_full = detail::component_norm_sum(a2, s, -1);
  out.probability = m_j / n_full * std::exp(-beta) * detail::mod_series(beta, s, j);

  double plain = detail::mod_series(beta, s, j);
  out.coherence = (plain == 0.0) ? 1.0 : detail::mod_series_alternating(beta, s, j) / plain;

  // Span overlap: deterministic class phase e^{i j pi / s} times the damped
  // cross-component sum; the product is real because both span vectors have
  // real Fock amplitudes.
  cx full = std::exp(cx{0.0, j * kPi / s}) * detail::component_cross_sum(damped, s, j) / m_j;
  out.overlap = cx{full.real(), 0.0};
  return out;
}

double syndrome_class_probability(const CatCode &code, double eta, int j) {
  return loss_class_stats(code, eta, j).probability;
}

double syndrome_class_probability(const CatCode &code, double eta, int j, int bit) {
  if (bit != 0 && bit != 1) throw std::invalid_argument("codeword bit must be 0 or 1");
  // The class probability is exactly codeword-independent.
  return syndrome_class_probability(code, eta, j);
}

double usd_probability_damped(const CatCode &code, double eta, int j) {
  return 1.0 - std::abs(loss_class_stats(code, eta, j).overlap);
}

double usd_probability_damped_avg(const CatCode &code, double eta) {
  double acc = 0.0;
  for (int j = 0; j < code.components(); ++j) {
    LossClassStats st = loss_class_stats(code, eta, j);
    acc += st.probability * (1.0 - std::abs(st.overlap));
  }
  return acc;
}

SeriesCoefficients series_coefficients(double alpha, double eta, int m_max) {
  if (!(alpha > 0.0)) throw std::invalid_argument("cat code amplitude must be positive");
  check_eta(eta);
  if (m_max < 0) throw std::invalid_argument("m_max must be >= 0");
  double a2 = alpha * alpha;
  double damped = eta * a2;
  double beta = (1.0 - eta) * a2;
  SeriesCoefficients out;
  out.c.resize(m_max + 1);
  out.d.resize(m_max + 1);
  double even_pref = std::sqrt(std::cosh(damped) / std::cosh(a2));
  double odd_pref = std::sqrt(std::sinh(damped) / std::cosh(a2));
  for (int m = 0; m <= m_max; ++m) {
    if (beta == 0.0) {
      out.c[m] = (m == 0) ? even_pref : 0.0;
      out.d[m] = 0.0;
      continue;
    }
    out.c[m] = even_pref * std::exp(m * std::log(beta) - 0.5 * std::lgamma(2.0 * m + 1.0));
    out.d[m] = odd_pref *
               std::exp((m + 0.5) * std::log(beta) - 0.5 * std::lgamma(2.0 * m + 2.0));
  }
  return out;
}

FockState damped_codeword_span(const CatCode &code, int bit, double eta, int j, int cutoff) {
  check_eta(eta);
  check_class(code, j);
  FockState cw = codeword(code, bit, cutoff);
  FockState damped = fock::apply_loss_band(cw, 0, j, eta);
  double n = fock::norm(damped);
  if (n < 1e-300)
    throw std::invalid_argument("residue class unreachable at this transmittance");
  for (cx &v : damped.amp) v /= n;
  return damped;
}

} // namespace catrep::cat
