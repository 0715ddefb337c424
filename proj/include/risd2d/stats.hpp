#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <numeric>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "risd2d/geometry.hpp"

namespace risd2d {

inline constexpr int kMaxAntennas = 64;

// Derived statistics of one link configuration.
struct LinkStats {
  double beta_sd = 0.0;
  double beta_sr = 0.0;
  double beta_rd = 0.0;
  double beta_sc = 0.0;
  double beta_bd = 0.0;
  double mu = 0.0;
  double sigma2 = 0.0;
  double omega = 1.0;
  double a_t = 0.0;
  double alpha_bd = 0.0;
  double gamma_bar_s = 0.0;
  double gamma_bar_b = 0.0;
  LinkMode mode = LinkMode::WithDirect;

  double sigma() const { return std::sqrt(sigma2); }
};

// ---------------------------------------------------------------- Q function

inline double q_exact(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

// Four-term exponential fit of Q on x >= 0, mirrored for x < 0.
inline constexpr std::array<double, 4> kQSeriesC = {1.0 / 16.0, 1.0 / 8.0, 1.0 / 8.0, 1.0 / 8.0};
inline constexpr std::array<double, 4> kQSeriesP = {0.5, 1.0, 10.0 / 3.0, 10.0 / 17.0};

inline double q_approx(double x) {
  const double ax = std::abs(x);
  double s = 0.0;
  for (int k = 0; k < 4; ++k) s += kQSeriesC[k] * std::exp(-kQSeriesP[k] * ax * ax);
  return x >= 0.0 ? s : 1.0 - s;
}

// Q(z) * exp(z^2/2) for z >= 0, finite for arbitrarily large z.
inline double q_scaled(double z) {
  if (z < 30.0) return q_exact(z) * std::exp(0.5 * z * z);
  const double r = 1.0 / (z * z);
  const double series = 1.0 - r * (1.0 - 3.0 * r * (1.0 - 5.0 * r * (1.0 - 7.0 * r * (1.0 - 9.0 * r))));
  return series / (z * std::sqrt(2.0 * kPi));
}

// log Q(z), accurate in the far upper tail.
inline double log_q(double z) {
  if (z < 30.0) return std::log(q_exact(z));
  return std::log(q_scaled(z)) - 0.5 * z * z;
}

// ---------------------------------------------------------------- CLT model

struct CltMoments {
  double mu;
  double sigma2;
};

inline CltMoments clt_moments(const SystemParams& p, double beta_sr, double beta_rd) {
  if (p.n_elements < 1) throw DomainError("clt_moments: N must be >= 1");
  const double n = p.n_elements;
  const double a = p.element_amplitude;
  const double g = beta_sr * beta_rd;
  return {n * a * kPi / 4.0 * std::sqrt(g), n * a * a * g * (1.0 - kPi * kPi / 16.0)};
}

// Builds LinkStats from explicit RIS gains. beta_sd comes from params.d_sd
// (zero in no-direct-link mode).
inline LinkStats make_link_stats(const SystemParams& p, double beta_sr, double beta_rd, double p_s) {
  p.validate();
  if (!(p_s >= 0.0)) throw DomainError("transmit power must be >= 0");
  LinkStats ls;
  ls.mode = p.mode();
  ls.beta_sd = ls.mode == LinkMode::WithDirect ? path_loss(p.d_sd, p, LinkClass::Local) : 0.0;
  ls.beta_sr = beta_sr;
  ls.beta_rd = beta_rd;
  ls.beta_sc = path_loss(p.d_sc, p, LinkClass::Long);
  ls.beta_bd = path_loss(p.d_bd, p, LinkClass::Long);
  const auto m = clt_moments(p, beta_sr, beta_rd);
  ls.mu = m.mu;
  ls.sigma2 = m.sigma2;
  ls.omega = m.sigma2 > 0.0 ? 1.0 / q_exact(-m.mu / std::sqrt(m.sigma2)) : 1.0;
  ls.a_t = ls.beta_sd > 0.0 ? 1.0 / ls.beta_sd + 1.0 / (2.0 * m.sigma2)
                            : std::numeric_limits<double>::infinity();
  ls.gamma_bar_s = p_s / p.noise_power;
  ls.gamma_bar_b = p.p_b / p.noise_power;
  ls.alpha_bd = ls.gamma_bar_b * ls.beta_bd;
  return ls;
}

// Builds LinkStats for RIS coordinate d on a topology. The direct-link gain
// uses topo.d_sd so geometry and direct path stay consistent.
inline LinkStats make_link_stats(const SystemParams& p, const Topology& topo, double d, double p_s) {
  SystemParams q = p;
  q.d_sd = topo.d_sd;
  const auto [bsr, brd] = ris_betas(d, topo, q);
  return make_link_stats(q, bsr, brd, p_s);
}

namespace detail {
inline void require_variance(const LinkStats& ls) {
  if (!(ls.sigma2 > 0.0)) throw DomainError("cascaded channel variance is zero (N*alpha = 0)");
}
inline double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }
}  // namespace detail

// Truncated-Gaussian CDF of the cascaded amplitude X.
inline double cdf_X_raw(double x, const LinkStats& ls) {
  detail::require_variance(ls);
  if (x <= 0.0) return 0.0;
  return 1.0 - ls.omega * q_exact((x - ls.mu) / ls.sigma());
}
inline double cdf_X(double x, const LinkStats& ls) { return detail::clamp01(cdf_X_raw(x, ls)); }

// CDF of Y = |h_sd| + X.
inline double cdf_Y_raw(double y, const LinkStats& ls) {
  detail::require_variance(ls);
  if (!(ls.beta_sd > 0.0)) throw InvalidModeError("cdf_Y requires a direct link; use cdf_X");
  if (y <= 0.0) return 0.0;
  const double s2 = ls.sigma2;
  const double b = ls.beta_sd;
  const double at = ls.a_t;
  const double k = std::sqrt(2.0 / at);
  const double bracket = 1.0 - q_exact(k * (y / b + ls.mu / (2.0 * s2))) - q_exact(k * (y - ls.mu) / (2.0 * s2));
  const double pref = ls.omega / std::sqrt(2.0 * at * s2);
  const double dy = y - ls.mu;
  return 1.0 - ls.omega * q_exact(dy / ls.sigma()) - pref * std::exp(-dy * dy / (b + 2.0 * s2)) * bracket;
}
inline double cdf_Y(double y, const LinkStats& ls) { return detail::clamp01(cdf_Y_raw(y, ls)); }

inline double cdf_gamma_srd_raw(double x, const LinkStats& ls) {
  if (!(ls.gamma_bar_s > 0.0)) throw DomainError("cdf_gamma_srd: gamma_bar_s must be > 0");
  if (x <= 0.0) return 0.0;
  const double y = std::sqrt(x / ls.gamma_bar_s);
  return ls.mode == LinkMode::WithDirect ? cdf_Y_raw(y, ls) : cdf_X_raw(y, ls);
}
inline double cdf_gamma_srd(double x, const LinkStats& ls) {
  return detail::clamp01(cdf_gamma_srd_raw(x, ls));
}

// ---------------------------------------------------------------- gamma_v

// c_m = (-1)^(m+1) * binom(M, m), exact for M <= 64.
inline std::vector<double> antenna_coefficients(int M) {
  if (M < 1) throw DomainError("M must be >= 1");
  if (M > kMaxAntennas) throw NumericError("M > 64: alternating binomial sums are ill-conditioned");
  std::vector<double> c(M + 1, 0.0);
  unsigned __int128 binom = 1;
  for (int m = 1; m <= M; ++m) {
    binom = binom * static_cast<unsigned>(M - m + 1) / static_cast<unsigned>(m);
    const double v = static_cast<double>(binom);
    c[m] = (m % 2 == 1) ? v : -v;
  }
  return c;
}

// Density of gamma_v = 1 + max of M exponentials with mean alpha_bd, evaluated
// as the alternating series, summed in descending magnitude.
inline double pdf_gamma_v(double x, double alpha_bd, int M) {
  if (!(alpha_bd > 0.0)) throw DomainError("alpha_bd must be > 0");
  if (x < 1.0) return 0.0;
  const auto c = antenna_coefficients(M);
  const double t = (x - 1.0) / alpha_bd;
  std::vector<double> terms;
  terms.reserve(M);
  for (int m = 1; m <= M; ++m) terms.push_back(m * c[m] / alpha_bd * std::exp(-m * t));
  std::sort(terms.begin(), terms.end(), [](double a, double b) { return std::abs(a) > std::abs(b); });
  return std::accumulate(terms.begin(), terms.end(), 0.0);
}
inline double pdf_gamma_v(double x, const LinkStats& ls, int M) { return pdf_gamma_v(x, ls.alpha_bd, M); }

// Same density in product form M (1-e^-t)^(M-1) e^-t / alpha; no cancellation.
inline double pdf_gamma_v_product(double x, double alpha_bd, int M) {
  if (!(alpha_bd > 0.0)) throw DomainError("alpha_bd must be > 0");
  if (M < 1) throw DomainError("M must be >= 1");
  if (x < 1.0) return 0.0;
  const double t = (x - 1.0) / alpha_bd;
  const double base = -std::expm1(-t);
  return M * std::pow(base, M - 1) * std::exp(-t) / alpha_bd;
}

inline double cdf_gamma_v(double x, double alpha_bd, int M) {
  if (M < 1) throw DomainError("M must be >= 1");
  if (x <= 1.0) return 0.0;
  if (!(alpha_bd > 0.0)) return 1.0;
  return std::pow(-std::expm1(-(x - 1.0) / alpha_bd), M);
}

// Alternating sums S1 = sum c_m/m and S2 = sum c_m/m^2, evaluated in exact
// rational arithmetic. E[max] = alpha*S1 and E[max^2] = 2*alpha^2*S2.
struct AlternatingSums {
  double s1;
  double s2;
};

inline AlternatingSums alternating_sums(int M) {
  if (M < 1) throw DomainError("M must be >= 1");
  if (M > kMaxAntennas) throw NumericError("M > 64: alternating binomial sums are ill-conditioned");
  static std::once_flag once;
  static std::array<AlternatingSums, kMaxAntennas + 1> table;
  std::call_once(once, [] {
    using boost::multiprecision::cpp_int;
    using boost::multiprecision::cpp_rational;
    for (int mm = 1; mm <= kMaxAntennas; ++mm) {
      cpp_rational s1 = 0, s2 = 0;
      cpp_int binom = 1;
      for (int m = 1; m <= mm; ++m) {
        binom = binom * (mm - m + 1) / m;
        const cpp_rational term1(binom, cpp_int(m));
        const cpp_rational term2(binom, cpp_int(m) * m);
        if (m % 2 == 1) {
          s1 += term1;
          s2 += term2;
        } else {
          s1 -= term1;
          s2 -= term2;
        }
      }
      table[mm] = {s1.convert_to<double>(), s2.convert_to<double>()};
    }
  });
  return table[M];
}

struct MomentPair {
  double mean;
  double variance;
};

// Large-M extreme-value moments of gamma_v.
inline MomentPair gumbel_moments(int M, double alpha_bd) {
  if (M < 1) throw DomainError("M must be >= 1");
  return {1.0 + alpha_bd * (std::log(static_cast<double>(M)) + kEulerGamma),
          alpha_bd * alpha_bd * kPi * kPi / 6.0};
}

}  // namespace risd2d
