#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "risd2d/rng.hpp"
#include "risd2d/stats.hpp"

namespace risd2d {

using cplx = std::complex<double>;

struct ChannelRealization {
  cplx h_sd;
  std::vector<cplx> h_sr;
  std::vector<cplx> h_rd;
  cplx h_sc;
  std::vector<cplx> h_bd;
};

namespace detail {

// CN(0, beta) in polar form: |h| = sqrt(beta * Exp(1)), phase uniform.
inline cplx draw_cn(SplitMix64& g, double beta) {
  const double u = g.uniform_open0();
  const double v = g.uniform();
  if (beta == 0.0) return {0.0, 0.0};
  return std::polar(std::sqrt(-beta * std::log(u)), 2.0 * kPi * v);
}

// Magnitude only; consumes the phase draw so streams stay aligned with draw_cn.
inline double draw_cn_abs(SplitMix64& g, double beta) {
  const double u = g.uniform_open0();
  (void)g();
  return std::sqrt(-beta * std::log(u));
}

}  // namespace detail

// One independent realization of every channel coefficient for trial `trial`
// of the stream rooted at `seed`.
inline ChannelRealization sample_realization(const LinkStats& ls, const SystemParams& p,
                                             std::uint64_t seed, std::uint64_t trial) {
  ChannelRealization r;
  auto g_sd = derive_stream(seed, trial, StreamLink::sd);
  auto g_sc = derive_stream(seed, trial, StreamLink::sc);
  auto g_sr = derive_stream(seed, trial, StreamLink::sr);
  auto g_rd = derive_stream(seed, trial, StreamLink::rd);
  auto g_bd = derive_stream(seed, trial, StreamLink::bd);
  r.h_sd = detail::draw_cn(g_sd, ls.beta_sd);
  r.h_sc = detail::draw_cn(g_sc, ls.beta_sc);
  r.h_sr.resize(p.n_elements);
  r.h_rd.resize(p.n_elements);
  for (int n = 0; n < p.n_elements; ++n) {
    r.h_sr[n] = detail::draw_cn(g_sr, ls.beta_sr);
    r.h_rd[n] = detail::draw_cn(g_rd, ls.beta_rd);
  }
  r.h_bd.resize(p.n_antennas);
  for (int m = 0; m < p.n_antennas; ++m) r.h_bd[m] = detail::draw_cn(g_bd, ls.beta_bd);
  return r;
}

// Phases that co-phase every reflected path with the direct path. Without a
// direct link the reference phase is zero. Result lies in [0, 2*pi).
inline std::vector<double> aligned_phases(const ChannelRealization& r, LinkMode mode = LinkMode::WithDirect) {
  const double ref = (mode == LinkMode::WithDirect) ? std::arg(r.h_sd) : 0.0;
  std::vector<double> th(r.h_sr.size());
  for (std::size_t n = 0; n < th.size(); ++n) {
    double v = std::remainder(ref - (std::arg(r.h_sr[n]) + std::arg(r.h_rd[n])), 2.0 * kPi);
    if (v < 0.0) v += 2.0 * kPi;
    th[n] = v;
  }
  return th;
}

// Y = h_sd + sum alpha h_rd,n e^{j theta_n} h_sr,n for arbitrary phases.
inline cplx composite_channel(const ChannelRealization& r, double alpha, const std::vector<double>& theta,
                              LinkMode mode = LinkMode::WithDirect) {
  cplx y = mode == LinkMode::WithDirect ? r.h_sd : cplx{};
  for (std::size_t n = 0; n < r.h_sr.size(); ++n)
    y += alpha * r.h_rd[n] * std::polar(1.0, theta[n]) * r.h_sr[n];
  return y;
}

// Gamma_d = (P_s/N0)|Y|^2 / (1 + (P_b/N0) max_m |h_bd,m|^2) with co-phased Y.
inline double instantaneous_sinr(const ChannelRealization& r, const SystemParams& p, double p_s) {
  const auto mode = p.mode();
  double amp = mode == LinkMode::WithDirect ? std::abs(r.h_sd) : 0.0;
  for (std::size_t n = 0; n < r.h_sr.size(); ++n)
    amp += p.element_amplitude * std::abs(r.h_sr[n]) * std::abs(r.h_rd[n]);
  double gmax = 0.0;
  for (const auto& h : r.h_bd) gmax = std::max(gmax, std::norm(h));
  return (p_s / p.noise_power) * amp * amp / (1.0 + (p.p_b / p.noise_power) * gmax);
}

// Fast path used by the estimators: the same draws as sample_realization,
// without materializing phases. Returns (gamma_srd, gamma_v, |h_sc|^2).
struct TrialDraw {
  double gamma_srd;
  double gamma_v;
  double h_sc_pow;
};

inline TrialDraw draw_trial(const LinkStats& ls, const SystemParams& p, std::uint64_t seed,
                            std::uint64_t trial) {
  auto g_sd = derive_stream(seed, trial, StreamLink::sd);
  auto g_sc = derive_stream(seed, trial, StreamLink::sc);
  auto g_sr = derive_stream(seed, trial, StreamLink::sr);
  auto g_rd = derive_stream(seed, trial, StreamLink::rd);
  auto g_bd = derive_stream(seed, trial, StreamLink::bd);
  double amp = 0.0;
  const double a_sd = detail::draw_cn_abs(g_sd, ls.beta_sd);
  if (ls.mode == LinkMode::WithDirect) amp = a_sd;
  const double a_sc = detail::draw_cn_abs(g_sc, ls.beta_sc);
  double cascade = 0.0;
  for (int n = 0; n < p.n_elements; ++n) {
    const double s = detail::draw_cn_abs(g_sr, ls.beta_sr);
    const double d = detail::draw_cn_abs(g_rd, ls.beta_rd);
    cascade += s * d;
  }
  amp += p.element_amplitude * cascade;
  double gmax = 0.0;
  for (int m = 0; m < p.n_antennas; ++m) {
    const double a = detail::draw_cn_abs(g_bd, ls.beta_bd);
    gmax = std::max(gmax, a * a);
  }
  return {ls.gamma_bar_s * amp * amp, 1.0 + ls.gamma_bar_b * gmax, a_sc * a_sc};
}

}  // namespace risd2d
