#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "risd2d/montecarlo.hpp"
#include "risd2d/rng.hpp"

namespace risd2d::experiment {

// One randomly perturbed operating point around a base profile.
struct SampledCase {
  SystemParams params;
  Topology topology;
  double d = 0.0;
  double p_s = 0.0;
};

// Ranges are chosen inside the interference-limited regime, where the
// closed form is meaningful at the 0.02 level (see README).
struct SamplerRanges {
  double d_bd_lo = 2.0, d_bd_hi = 3.5;
  int n_lo = 40, n_hi = 60;
  double p_s_db_lo = 0.0, p_s_db_hi = 10.0;
  double gamma_th_db_lo = -2.0, gamma_th_db_hi = 4.0;
  std::vector<int> antennas = {1, 2, 4};
};

inline std::vector<SampledCase> sample_cases(const SystemParams& base, const Topology& topo, int count,
                                             std::uint64_t seed, const SamplerRanges& r = {}) {
  SplitMix64 g(splitmix64_mix(seed ^ 0x7661'6c69'6461'7465ULL));
  auto uni = [&](double lo, double hi) { return lo + (hi - lo) * g.uniform(); };
  const auto iv = topo.feasible_interval();
  std::vector<SampledCase> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    SampledCase c;
    c.params = base;
    c.topology = topo;
    c.params.d_bd = uni(r.d_bd_lo, r.d_bd_hi);
    c.params.n_elements = r.n_lo + static_cast<int>(g() % static_cast<std::uint64_t>(r.n_hi - r.n_lo + 1));
    c.params.n_antennas = r.antennas[g() % r.antennas.size()];
    c.params.sinr_threshold = db_to_linear(uni(r.gamma_th_db_lo, r.gamma_th_db_hi));
    c.p_s = db_to_linear(uni(r.p_s_db_lo, r.p_s_db_hi));
    c.d = std::clamp(uni(iv.lower, iv.upper), iv.lower, iv.upper);
    out.push_back(c);
  }
  return out;
}

struct TriangleRow {
  SampledCase config;
  double closed_form = 0.0;
  double quadrature = 0.0;
  McEstimate mc;
  double se_used = 0.0;  // MC standard error, floored when the estimate is 0
  bool closed_ok = false;
  bool mc_ok = false;
  bool pass() const { return closed_ok && mc_ok; }
};

inline constexpr double kClosedFormTolerance = 0.02;
inline constexpr double kMcSigmaTolerance = 3.0;

// |closed form - quadrature| <= 0.02 and |quadrature - MC| <= 3 se.
inline TriangleRow check_triangle(const SampledCase& c, std::uint64_t trials, std::uint64_t seed,
                                  const McOptions& opt = {}) {
  TriangleRow r;
  r.config = c;
  const auto ls = make_link_stats(c.params, c.topology, c.d, c.p_s);
  r.closed_form = outage_probability(ls, c.params).p_out;
  r.quadrature = outage_by_quadrature(ls, c.params);
  r.mc = estimate_outage(ls, c.params, trials, seed, opt);
  // A zero count has a zero plug-in se; use the binomial se at the quadrature value.
  const double null_se = std::sqrt(r.quadrature * (1.0 - r.quadrature) / static_cast<double>(trials));
  r.se_used = std::max(r.mc.std_error, null_se);
  r.closed_ok = std::abs(r.closed_form - r.quadrature) <= kClosedFormTolerance;
  r.mc_ok = std::abs(r.quadrature - r.mc.value) <= kMcSigmaTolerance * r.se_used;
  return r;
}

}  // namespace risd2d::experiment
