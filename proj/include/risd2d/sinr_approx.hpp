#pragma once

#include <cmath>

#include "risd2d/geometry.hpp"
#include "risd2d/stats.hpp"

namespace risd2d {

enum class MomentMode { ExactSum, Gumbel };

inline const char* to_string(MomentMode m) { return m == MomentMode::ExactSum ? "exact" : "gumbel"; }

// ExactSum up to this many antennas, Gumbel above.
inline constexpr int kExactSumMaxAntennas = 16;

inline MomentMode default_moment_mode(int M) {
  return M <= kExactSumMaxAntennas ? MomentMode::ExactSum : MomentMode::Gumbel;
}

struct SinrSurrogate {
  double value = 0.0;
  double mean_srd = 0.0;
  double mean_v = 1.0;
  double var_v = 0.0;
  MomentMode moment_mode = MomentMode::ExactSum;
};

// E[gamma_srd] = gamma_bar_s E[(|h_sd| + X)^2] with the exact first and second
// moments of the cascaded amplitude (E[X] = mu, V[X] = sigma^2).
inline double mean_gamma_srd(const LinkStats& ls) {
  const double ex2 = ls.mu * ls.mu + ls.sigma2;
  if (ls.mode == LinkMode::NoDirect) return ls.gamma_bar_s * ex2;
  return ls.gamma_bar_s * (ls.beta_sd + std::sqrt(kPi * ls.beta_sd) * ls.mu + ex2);
}

// Variant with N^2 alpha^2 beta_sr beta_rd in place of E[X^2]; kept for audit.
inline double mean_gamma_srd_uncorrected(const LinkStats& ls, const SystemParams& p) {
  const double n = p.n_elements, a = p.element_amplitude;
  const double g = ls.beta_sr * ls.beta_rd;
  return ls.gamma_bar_s * ls.beta_sd *
         (1.0 + n * a * kPi * std::sqrt(kPi * g) / (4.0 * std::sqrt(ls.beta_sd)) + n * n * a * a * g / ls.beta_sd);
}

// Mean and variance of gamma_v. ExactSum uses the alternating binomial sums
// (equal to 1 + alpha H_M and alpha^2 sum 1/k^2); Gumbel the large-M limit.
inline MomentPair mean_var_gamma_v(double alpha_bd, int M, MomentMode mode) {
  if (M < 1) throw DomainError("M must be >= 1");
  if (mode == MomentMode::Gumbel) return gumbel_moments(M, alpha_bd);
  const auto s = alternating_sums(M);
  const double mean_max = alpha_bd * s.s1;
  return {1.0 + mean_max, 2.0 * alpha_bd * alpha_bd * s.s2 - mean_max * mean_max};
}

inline MomentPair mean_var_gamma_v(const LinkStats& ls, int M, MomentMode mode) {
  return mean_var_gamma_v(ls.alpha_bd, M, mode);
}

// E[gamma_v] as an alternating sum weighted by e^{m/alpha_bd}; uncorrected
// variant kept for audit (overflows once alpha_bd is small).
inline double mean_gamma_v_uncorrected(double alpha_bd, int M) {
  const auto c = antenna_coefficients(M);
  double s = 0.0;
  for (int m = 1; m <= M; ++m) s += c[m] / m * std::exp(m / alpha_bd);
  return alpha_bd * s;
}

// Second-order Taylor estimate of E[gamma_srd / gamma_v]; the covariance term
// vanishes because numerator and denominator are independent.
inline SinrSurrogate sinr_hat(const LinkStats& ls, const SystemParams& p, MomentMode mode) {
  SinrSurrogate s;
  s.moment_mode = mode;
  s.mean_srd = mean_gamma_srd(ls);
  const auto mv = mean_var_gamma_v(ls.alpha_bd, p.n_antennas, mode);
  s.mean_v = mv.mean;
  s.var_v = mv.variance;
  s.value = s.mean_srd / s.mean_v + s.var_v * s.mean_srd / (s.mean_v * s.mean_v * s.mean_v);
  return s;
}

inline SinrSurrogate sinr_hat(const LinkStats& ls, const SystemParams& p) {
  return sinr_hat(ls, p, default_moment_mode(p.n_antennas));
}

inline SinrSurrogate sinr_hat(double d, double p_s, const Topology& topo, const SystemParams& p, MomentMode mode) {
  return sinr_hat(make_link_stats(p, topo, d, p_s), p, mode);
}

inline SinrSurrogate sinr_hat(double d, double p_s, const Topology& topo, const SystemParams& p) {
  return sinr_hat(d, p_s, topo, p, default_moment_mode(p.n_antennas));
}

// The same surrogate written as a function of the placement objective Z:
// beta_sr beta_rd = C^2 d0^(2 eta) Z^(-eta/2), and E[gamma_srd] E[gamma_v^2] / E[gamma_v]^3.
inline double sinr_hat_expanded(double d, double p_s, const Topology& topo, const SystemParams& p, MomentMode mode) {
  topo.check_feasible(d);
  const double eta = p.path_loss_exponent;
  const double c_loc = p.ref_loss_for(LinkClass::Local);
  const double z = z_objective(d, topo);
  const double g = c_loc * c_loc * std::pow(p.ref_distance, 2.0 * eta) * std::pow(z, -eta / 2.0);
  const double n = p.n_elements, a = p.element_amplitude;
  const double ex2 = n * a * a * g * (1.0 - kPi * kPi / 16.0) + n * n * a * a * g * kPi * kPi / 16.0;
  const double gs = p_s / p.noise_power;
  double srd;
  if (p.direct_link) {
    const double bsd = c_loc * std::pow(p.ref_distance / topo.d_sd, eta);
    srd = gs * bsd * (1.0 + n * a * kPi * std::sqrt(kPi * g) / (4.0 * std::sqrt(bsd)) + ex2 / bsd);
  } else {
    srd = gs * ex2;
  }
  const double alpha = p.p_b / p.noise_power * path_loss(p.d_bd, p, LinkClass::Long);
  double ev, ev2;
  if (mode == MomentMode::ExactSum) {
    const auto s = alternating_sums(p.n_antennas);
    ev = 1.0 + alpha * s.s1;
    ev2 = 1.0 + 2.0 * alpha * s.s1 + 2.0 * alpha * alpha * s.s2;
  } else {
    const double lm = std::log(static_cast<double>(p.n_antennas)) + kEulerGamma;
    ev = 1.0 + alpha * lm;
    ev2 = ev * ev + alpha * alpha * kPi * kPi / 6.0;
  }
  return srd * ev2 / (ev * ev * ev);
}

}  // namespace risd2d
