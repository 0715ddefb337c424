#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "risd2d/quadrature.hpp"
#include "risd2d/stats.hpp"

namespace risd2d {

struct OutageBreakdown {
  double p_out = 0.0;  // clamped to [0, 1]
  double raw = 0.0;    // before clamping
  double a1 = 0.0;
  double a2 = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  double a_total = 0.0;
  double b_total = 0.0;
  LinkMode mode = LinkMode::WithDirect;
};

// Coefficient in front of B in p_out = A - coef * B.
inline double outage_b_coefficient(const LinkStats& ls) {
  return ls.omega * std::sqrt(ls.beta_sd) / std::sqrt(ls.beta_sd + 2.0 * ls.sigma2);
}

namespace detail {

// Exponent a u^2 + 2 b u + c of a Gaussian-type factor.
struct Quadratic {
  double a = 0.0, b = 0.0, c = 0.0;
  Quadratic operator+(const Quadratic& o) const { return {a + o.a, b + o.b, c + o.c}; }
  double at(double u) const { return (a * u + 2.0 * b) * u + c; }
};

// q (u - mu)^2
inline Quadratic centered(double q, double mu) { return {q, -q * mu, q * mu * mu}; }
// q (u + h)^2
inline Quadratic shifted(double q, double h) { return {q, q * h, q * h * h}; }

// 1 - sqrt(2 pi) z Q(z) e^{z^2/2} for z >= 0.
inline double mills_complement(double z) {
  if (z < 30.0) return 1.0 - std::sqrt(2.0 * kPi) * z * q_scaled(z);
  const double r = 1.0 / (z * z);
  return r * (1.0 - 3.0 * r * (1.0 - 5.0 * r * (1.0 - 7.0 * r * (1.0 - 9.0 * r * (1.0 - 11.0 * r)))));
}

// Integral of u * exp(-(a u^2 + 2 b u + c)) over [lo, inf), a > 0. Both
// branches are sums of nonnegative terms, so no cancellation occurs.
inline double gauss_moment_tail(const Quadratic& q, double lo) {
  if (std::isinf(lo)) return 0.0;
  const double a = q.a;
  const double e = std::exp(-q.at(lo));
  const double z = std::sqrt(2.0 * a) * (lo + q.b / a);
  if (z >= 0.0) {
    const double m = q_scaled(z);
    return e * (mills_complement(z) / (2.0 * a) + lo * std::sqrt(kPi / a) * m);
  }
  const double i0 = std::sqrt(kPi / a) * std::exp(q.b * q.b / a - q.c) * q_exact(z);
  return e / (2.0 * a) - q.b / a * i0;
}

inline double gauss_moment(const Quadratic& q, double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  return gauss_moment_tail(q, lo) - gauss_moment_tail(q, hi);
}

// Quantities shared by all constituents after the change of variable
// x = kappa u^2, which maps the support x >= 1 of gamma_v to u >= u_lo.
struct OutageFrame {
  double kappa;   // gamma_bar_s / gamma_th
  double u_lo;    // sqrt(gamma_th / gamma_bar_s)
  double u_t;     // max(u_lo, mu): sign change of the Q argument
  int M;
  std::vector<double> cm;
  double alpha;

  // exp(-(m kappa u^2/alpha - m/alpha)) restricted density kernel of component m
  Quadratic density(int m) const { return {m * kappa / alpha, 0.0, -m / alpha}; }
  // weight 2 kappa m c_m / alpha, including the Jacobian 2 kappa u
  double weight(int m) const { return 2.0 * kappa * m * cm[m] / alpha; }
};

inline OutageFrame make_frame(const LinkStats& ls, const SystemParams& p) {
  if (!(p.sinr_threshold > 0.0)) throw DomainError("sinr_threshold must be > 0");
  if (!(ls.gamma_bar_s > 0.0)) throw DomainError("gamma_bar_s must be > 0");
  require_variance(ls);
  if (!(ls.alpha_bd > 0.0)) throw DomainError("closed form requires alpha_bd > 0");
  OutageFrame f;
  f.kappa = ls.gamma_bar_s / p.sinr_threshold;
  f.u_lo = std::sqrt(1.0 / f.kappa);
  f.u_t = std::max(f.u_lo, ls.mu);
  f.M = p.n_antennas;
  f.cm = antenna_coefficients(p.n_antennas);
  f.alpha = ls.alpha_bd;
  return f;
}

// sum_m w_m sum_k c_k J(dens_m + extra_k, lo, hi)
template <class Extra>
double sum_mk(const OutageFrame& f, Extra&& extra, double lo, double hi) {
  double total = 0.0;
  for (int m = 1; m <= f.M; ++m) {
    double inner = 0.0;
    for (int k = 0; k < 4; ++k) inner += kQSeriesC[k] * gauss_moment(f.density(m) + extra(k), lo, hi);
    total += f.weight(m) * inner;
  }
  return total;
}

template <class Extra>
double sum_m(const OutageFrame& f, Extra&& extra, double lo, double hi) {
  double total = 0.0;
  for (int m = 1; m <= f.M; ++m) total += f.weight(m) * gauss_moment(f.density(m) + extra, lo, hi);
  return total;
}

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace detail

// Region of the Q integral where its argument is nonnegative.
inline double compute_a1(const LinkStats& ls, const SystemParams& p) {
  const auto f = detail::make_frame(ls, p);
  const double s2 = ls.sigma2;
  return detail::sum_mk(f, [&](int k) { return detail::centered(kQSeriesP[k] / s2, ls.mu); }, f.u_t,
                        detail::kInf);
}

// Region where the argument is negative, rewritten through a1 and the CDF of
// gamma_v at max(1, mu^2 gamma_bar_s / gamma_th).
inline double compute_a2(const LinkStats& ls, const SystemParams& p, double a1) {
  const auto f = detail::make_frame(ls, p);
  const double s2 = ls.sigma2;
  const double s = detail::sum_mk(f, [&](int k) { return detail::centered(kQSeriesP[k] / s2, ls.mu); },
                                  f.u_lo, detail::kInf);
  const double t = std::max(1.0, f.kappa * ls.mu * ls.mu);
  return a1 + cdf_gamma_v(t, ls.alpha_bd, p.n_antennas) - s;
}

inline double compute_b1(const LinkStats& ls, const SystemParams& p) {
  if (ls.mode != LinkMode::WithDirect || !(ls.beta_sd > 0.0))
    throw InvalidModeError("B terms exist only with a direct link");
  const auto f = detail::make_frame(ls, p);
  const double b = ls.beta_sd;
  const double s2 = ls.sigma2;
  const auto base = detail::centered(1.0 / (b + 2.0 * s2), ls.mu);
  const double h = b * ls.mu / (2.0 * s2);
  const double first = detail::sum_m(f, base, f.u_lo, detail::kInf);
  const double second = detail::sum_mk(
      f, [&](int k) { return base + detail::shifted(2.0 * kQSeriesP[k] / (ls.a_t * b * b), h); }, f.u_lo,
      detail::kInf);
  return first - second;
}

inline double compute_b2(const LinkStats& ls, const SystemParams& p) {
  if (ls.mode != LinkMode::WithDirect || !(ls.beta_sd > 0.0))
    throw InvalidModeError("B terms exist only with a direct link");
  const auto f = detail::make_frame(ls, p);
  const double b = ls.beta_sd;
  const double s2 = ls.sigma2;
  const auto base = detail::centered(1.0 / (b + 2.0 * s2), ls.mu);
  auto tail_k = [&](int k) {
    return detail::centered(1.0 / (b + 2.0 * s2) + kQSeriesP[k] / (2.0 * ls.a_t * s2 * s2), ls.mu);
  };
  const double upper = detail::sum_mk(f, tail_k, f.u_t, detail::kInf);
  const double lower = detail::sum_m(f, base, f.u_lo, f.u_t) - detail::sum_mk(f, tail_k, f.u_lo, f.u_t);
  return upper + lower;
}

inline OutageBreakdown outage_probability(const LinkStats& ls, const SystemParams& p) {
  OutageBreakdown r;
  r.mode = ls.mode;
  r.a1 = compute_a1(ls, p);
  r.a2 = compute_a2(ls, p, r.a1);
  r.a_total = 1.0 - ls.omega * (r.a1 + r.a2);
  if (ls.mode == LinkMode::WithDirect) {
    r.b1 = compute_b1(ls, p);
    r.b2 = compute_b2(ls, p);
    r.b_total = r.b1 - r.b2;
    r.raw = r.a_total - outage_b_coefficient(ls) * r.b_total;
  } else {
    r.raw = r.a_total;
  }
  r.p_out = std::clamp(r.raw, 0.0, 1.0);
  return r;
}

// Explicit-mode entry point; rejects a mode that disagrees with the stats.
inline OutageBreakdown outage_probability(const LinkStats& ls, const SystemParams& p, LinkMode mode) {
  if (mode != ls.mode) throw InvalidModeError("requested link mode differs from LinkStats mode");
  return outage_probability(ls, p);
}

// Defining integral of p_out over the support of gamma_v, with the exact Q
// function. Serves as the analytical reference for the closed form.
inline QuadratureResult outage_by_quadrature_result(const LinkStats& ls, const SystemParams& p,
                                                    const QuadratureOptions& opt = {}) {
  if (!(p.sinr_threshold > 0.0)) throw DomainError("sinr_threshold must be > 0");
  const double gth = p.sinr_threshold;
  if (!(ls.alpha_bd > 0.0)) {
    QuadratureResult r;
    r.value = cdf_gamma_srd(gth, ls);
    r.converged = true;
    return r;
  }
  const int M = p.n_antennas;
  auto integrand = [&](double x) {
    const double w = pdf_gamma_v_product(x, ls.alpha_bd, M);
    return w == 0.0 ? 0.0 : cdf_gamma_srd(gth * x, ls) * w;
  };
  return integrate_half_line(integrand, 1.0, opt, ls.alpha_bd);
}

inline double outage_by_quadrature(const LinkStats& ls, const SystemParams& p,
                                   const QuadratureOptions& opt = {}) {
  const auto r = outage_by_quadrature_result(ls, p, opt);
  if (!r.converged)
    throw NumericError("outage quadrature did not converge: value=" + std::to_string(r.value) +
                       " err=" + std::to_string(r.abs_error_estimate) +
                       " evals=" + std::to_string(r.evaluations));
  return std::clamp(r.value, 0.0, 1.0);
}

inline double outage_by_quadrature(const LinkStats& ls, const SystemParams& p, LinkMode mode,
                                   const QuadratureOptions& opt = {}) {
  if (mode != ls.mode) throw InvalidModeError("requested link mode differs from LinkStats mode");
  return outage_by_quadrature(ls, p, opt);
}

// The constituents as direct integrals over x >= 1 with the series Q. They
// check the closed-form algebra independently of the series error.
inline OutageBreakdown outage_constituents_by_quadrature(const LinkStats& ls, const SystemParams& p,
                                                         const QuadratureOptions& opt = {1e-14, 1e-11}) {
  detail::require_variance(ls);
  const double gth = p.sinr_threshold;
  const double gs = ls.gamma_bar_s;
  const double s = ls.sigma();
  const int M = p.n_antennas;
  const double alpha = ls.alpha_bd;
  auto u_of = [&](double x) { return std::sqrt(gth * x / gs); };
  auto pdf = [&](double x) { return pdf_gamma_v_product(x, alpha, M); };
  auto qsum = [&](double z) {  // series sum for z >= 0 argument magnitude
    double v = 0.0;
    for (int k = 0; k < 4; ++k) v += kQSeriesC[k] * std::exp(-kQSeriesP[k] * z * z);
    return v;
  };
  auto check = [](const QuadratureResult& r, const char* what) {
    if (!r.converged) throw NumericError(std::string("constituent quadrature did not converge: ") + what);
    return r.value;
  };
  const double t = std::max(1.0, ls.mu * ls.mu * gs / gth);
  OutageBreakdown r;
  r.mode = ls.mode;
  r.a1 = check(integrate_half_line([&](double x) { return qsum((u_of(x) - ls.mu) / s) * pdf(x); }, t, opt, alpha),
               "a1");
  r.a2 = t > 1.0 ? check(integrate([&](double x) { return (1.0 - qsum((u_of(x) - ls.mu) / s)) * pdf(x); }, 1.0, t,
                                   opt),
                         "a2")
                 : 0.0;
  r.a_total = 1.0 - ls.omega * (r.a1 + r.a2);
  if (ls.mode == LinkMode::WithDirect) {
    const double b = ls.beta_sd;
    const double k = std::sqrt(2.0 / ls.a_t);
    auto env = [&](double u) { return std::exp(-(u - ls.mu) * (u - ls.mu) / (b + 2.0 * s * s)); };
    r.b1 = check(integrate_half_line(
                     [&](double x) {
                       const double u = u_of(x);
                       return env(u) * (1.0 - qsum(k * (u / b + ls.mu / (2.0 * s * s)))) * pdf(x);
                     },
                     1.0, opt, alpha),
                 "b1");
    r.b2 = check(integrate_half_line(
                     [&](double x) {
                       const double u = u_of(x);
                       const double z = k * (u - ls.mu) / (2.0 * s * s);
                       const double q = z >= 0.0 ? qsum(z) : 1.0 - qsum(-z);
                       return env(u) * q * pdf(x);
                     },
                     1.0, opt, alpha),
                 "b2");
    r.b_total = r.b1 - r.b2;
    r.raw = r.a_total - outage_b_coefficient(ls) * r.b_total;
  } else {
    r.raw = r.a_total;
  }
  r.p_out = std::clamp(r.raw, 0.0, 1.0);
  return r;
}

// Uncorrected variant of the closed forms, kept for audit only. It omits the
// m/alpha_bd density factor, integrates gamma_v from 0 instead of 1 and
// carries a factor 4 (instead of 2) in b_t2.
namespace verbatim {

namespace detail {
inline double bracket(double a, double b, double q_arg) {
  return 2.0 * b * std::sqrt(kPi / a) * std::exp(b * b / a) * q_exact(q_arg);
}
}  // namespace detail

inline double compute_a1(const LinkStats& ls, const SystemParams& p) {
  const double kappa = ls.gamma_bar_s / p.sinr_threshold;
  const auto cm = antenna_coefficients(p.n_antennas);
  const double mu = ls.mu, s2 = ls.sigma2, al = ls.alpha_bd;
  double sum = 0.0;
  for (int m = 1; m <= p.n_antennas; ++m)
    for (int k = 0; k < 4; ++k) {
      const double pk = kQSeriesP[k];
      const double a0 = pk / s2 + m * kappa / al;
      const double b0 = -mu * pk / s2;
      const double c0 = mu * mu * pk / s2 - m / al;
      sum += cm[m] * kQSeriesC[k] * std::exp(-c0) / a0 *
             (std::exp(-(a0 * mu * mu + 2.0 * b0 * mu)) -
              detail::bracket(a0, b0, (mu * a0 + b0) * std::sqrt(2.0 / a0)));
    }
  return kappa * sum;
}

inline double compute_a2(const LinkStats& ls, const SystemParams& p, double a1) {
  const double kappa = ls.gamma_bar_s / p.sinr_threshold;
  const auto cm = antenna_coefficients(p.n_antennas);
  const double mu = ls.mu, s2 = ls.sigma2, al = ls.alpha_bd, gth = p.sinr_threshold;
  double sum = 0.0;
  for (int m = 1; m <= p.n_antennas; ++m)
    for (int k = 0; k < 4; ++k) {
      const double pk = kQSeriesP[k];
      const double a0 = pk / s2 + m * kappa / al;
      const double b0 = -mu * pk / s2;
      const double c0 = mu * mu * pk / s2 - m / al;
      sum += cm[m] * kQSeriesC[k] / a0 * std::exp(-c0) * (1.0 - detail::bracket(a0, b0, b0 * std::sqrt(2.0 / a0)));
    }
  const double cdf = std::pow(1.0 - std::exp((gth - mu * mu * ls.gamma_bar_s) / (al * gth)), p.n_antennas);
  return a1 + cdf - kappa * sum;
}

inline double compute_b1(const LinkStats& ls, const SystemParams& p) {
  const double kappa = ls.gamma_bar_s / p.sinr_threshold;
  const auto cm = antenna_coefficients(p.n_antennas);
  const double mu = ls.mu, s2 = ls.sigma2, al = ls.alpha_bd, b = ls.beta_sd, at = ls.a_t;
  double sum = 0.0;
  for (int m = 1; m <= p.n_antennas; ++m) {
    const double at1 = 1.0 / (2.0 * s2 + b) + m * kappa / al;
    const double bt1 = -mu / (2.0 * s2 + b);
    const double ct1 = mu * mu / (2.0 * s2 + b) - m / al;
    double inner = std::exp(-ct1) / at1 * (1.0 - detail::bracket(at1, bt1, bt1 * std::sqrt(2.0 / at1)));
    for (int k = 0; k < 4; ++k) {
      const double pk = kQSeriesP[k];
      const double at2 = at1 + 2.0 * pk / (at * b * b);
      const double bt2 = bt1 + 4.0 * mu * pk / (2.0 * s2 + b);
      const double ct2 = ct1 + mu * mu * pk / (2.0 * at * s2 * s2);
      inner -= kQSeriesC[k] * std::exp(-ct2) / at2 * (1.0 - detail::bracket(at2, bt2, bt2 * std::sqrt(2.0 / at2)));
    }
    sum += cm[m] * inner;
  }
  return kappa * sum;
}

inline double compute_b2(const LinkStats& ls, const SystemParams& p) {
  const double kappa = ls.gamma_bar_s / p.sinr_threshold;
  const auto cm = antenna_coefficients(p.n_antennas);
  const double mu = ls.mu, s2 = ls.sigma2, al = ls.alpha_bd, b = ls.beta_sd, at = ls.a_t;
  double sum = 0.0;
  for (int m = 1; m <= p.n_antennas; ++m) {
    const double at1 = 1.0 / (2.0 * s2 + b) + m * kappa / al;
    const double bt1 = -mu / (2.0 * s2 + b);
    const double ct1 = mu * mu / (2.0 * s2 + b) - m / al;
    double inner = std::exp(-ct1) / at1 *
                   (1.0 - std::exp(-(at1 * mu * mu + 2.0 * bt1 * mu)) -
                    detail::bracket(at1, bt1, bt1 * std::sqrt(2.0 / at1)));
    for (int k = 0; k < 4; ++k) {
      const double pk = kQSeriesP[k];
      const double ct2 = ct1 + mu * mu * pk / (2.0 * at * s2 * s2);
      const double at3 = (b * pk + s2) / (s2 * (2.0 * s2 + b)) + m * kappa / al;
      const double bt3 = -mu * (b * pk + s2) / (s2 * (2.0 * s2 + b));
      const double scale = 2.0 * bt3 * std::sqrt(kPi / at3) * std::exp(bt3 * bt3 / at3);
      const double qdiff = 2.0 * q_exact((mu * at3 + bt3) * std::sqrt(2.0 / at3)) - q_exact(bt3 * std::sqrt(2.0 / at3));
      inner += kQSeriesC[k] * std::exp(-ct2) / at3 *
               (2.0 * std::exp(-(at3 * mu * mu + 2.0 * bt3 * mu)) - 1.0 - scale * qdiff);
    }
    sum += cm[m] * inner;
  }
  return kappa * sum;
}

inline OutageBreakdown outage_probability(const LinkStats& ls, const SystemParams& p) {
  OutageBreakdown r;
  r.mode = ls.mode;
  r.a1 = verbatim::compute_a1(ls, p);
  r.a2 = verbatim::compute_a2(ls, p, r.a1);
  r.a_total = 1.0 - ls.omega * (r.a1 + r.a2);
  if (ls.mode == LinkMode::WithDirect) {
    r.b1 = verbatim::compute_b1(ls, p);
    r.b2 = verbatim::compute_b2(ls, p);
    r.b_total = r.b1 - r.b2;
    r.raw = r.a_total - outage_b_coefficient(ls) * r.b_total;
  } else {
    r.raw = r.a_total;
  }
  r.p_out = std::isfinite(r.raw) ? std::clamp(r.raw, 0.0, 1.0) : r.raw;
  return r;
}

}  // namespace verbatim

}  // namespace risd2d
