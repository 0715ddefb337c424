#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <thread>
#include <vector>

#include "risd2d/channel.hpp"
#include "risd2d/optimizer.hpp"

namespace risd2d {

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n_trials = 0;
  std::uint64_t seed = 0;
  double ci95_low = 0.0;
  double ci95_high = 0.0;
};

struct McOptions {
  unsigned workers = 0;           // 0: hardware concurrency
  std::uint64_t block_size = 8192;  // trials per work unit; fixes the reduction order
};

inline constexpr std::uint64_t kDefaultTrials = 100'000;
inline constexpr std::uint64_t kFigureTrials = 1'000'000;
inline constexpr std::uint64_t kMinTrials = 1'000;

// Runs fn(i) for i in [0, n) on a small thread pool; results land in slot i,
// so the caller's reduction order never depends on scheduling.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, Fn&& fn, unsigned workers = 0) {
  std::vector<T> out(n);
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (std::size_t i = next++; i < n && !failed; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        if (!failed.exchange(true)) err = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
  return out;
}

namespace detail {

struct Moments {
  double n = 0.0, mean = 0.0, m2 = 0.0;
  void add(double x) {
    n += 1.0;
    const double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }
  void merge(const Moments& o) {
    if (o.n == 0.0) return;
    const double tot = n + o.n;
    const double d = o.mean - mean;
    mean += d * o.n / tot;
    m2 += o.m2 + d * d * n * o.n / tot;
    n = tot;
  }
};

inline void require_trials(std::uint64_t trials) {
  if (trials < kMinTrials) throw DomainError("Monte Carlo needs at least 1000 trials");
}

template <class Stat>
Moments run_blocks(std::uint64_t trials, const McOptions& opt, Stat&& stat) {
  const std::uint64_t bs = std::max<std::uint64_t>(1, opt.block_size);
  const std::size_t nblocks = static_cast<std::size_t>((trials + bs - 1) / bs);
  auto parts = parallel_map<Moments>(
      nblocks,
      [&](std::size_t b) {
        Moments m;
        const std::uint64_t lo = b * bs;
        const std::uint64_t hi = std::min(trials, lo + bs);
        for (std::uint64_t t = lo; t < hi; ++t) m.add(stat(t));
        return m;
      },
      opt.workers);
  Moments total;
  for (const auto& m : parts) total.merge(m);
  return total;
}

inline McEstimate proportion(const Moments& m, std::uint64_t seed) {
  McEstimate e;
  e.value = m.mean;
  e.n_trials = static_cast<std::uint64_t>(m.n);
  e.seed = seed;
  e.std_error = std::sqrt(e.value * (1.0 - e.value) / m.n);
  e.ci95_low = std::max(0.0, e.value - 1.96 * e.std_error);
  e.ci95_high = std::min(1.0, e.value + 1.96 * e.std_error);
  return e;
}

inline McEstimate sample_mean(const Moments& m, std::uint64_t seed) {
  McEstimate e;
  e.value = m.mean;
  e.n_trials = static_cast<std::uint64_t>(m.n);
  e.seed = seed;
  e.std_error = m.n > 1.0 ? std::sqrt(m.m2 / (m.n - 1.0) / m.n) : 0.0;
  e.ci95_low = e.value - 1.96 * e.std_error;
  e.ci95_high = e.value + 1.96 * e.std_error;
  return e;
}

}  // namespace detail

// Fraction of trials with Gamma_d <= gamma_th under co-phased RIS reflection.
inline McEstimate estimate_outage(const LinkStats& ls, const SystemParams& p, std::uint64_t trials,
                                  std::uint64_t seed, const McOptions& opt = {}) {
  detail::require_trials(trials);
  const double gth = p.sinr_threshold;
  auto m = detail::run_blocks(trials, opt, [&](std::uint64_t t) {
    const auto d = draw_trial(ls, p, seed, t);
    return d.gamma_srd <= gth * d.gamma_v ? 1.0 : 0.0;
  });
  return detail::proportion(m, seed);
}

inline McEstimate estimate_outage(double d, double p_s, const Topology& topo, const SystemParams& p,
                                  std::uint64_t trials, std::uint64_t seed, const McOptions& opt = {}) {
  return estimate_outage(make_link_stats(p, topo, d, p_s), p, trials, seed, opt);
}

inline McEstimate estimate_mean_sinr(const LinkStats& ls, const SystemParams& p, std::uint64_t trials,
                                     std::uint64_t seed, const McOptions& opt = {}) {
  detail::require_trials(trials);
  auto m = detail::run_blocks(trials, opt, [&](std::uint64_t t) {
    const auto d = draw_trial(ls, p, seed, t);
    return d.gamma_srd / d.gamma_v;
  });
  return detail::sample_mean(m, seed);
}

inline McEstimate estimate_mean_sinr(double d, double p_s, const Topology& topo, const SystemParams& p,
                                     std::uint64_t trials, std::uint64_t seed, const McOptions& opt = {}) {
  return estimate_mean_sinr(make_link_stats(p, topo, d, p_s), p, trials, seed, opt);
}

// Sample mean of the interference power P_s |h_sc|^2 at the cellular user.
inline McEstimate estimate_interference(double p_s, const SystemParams& p, std::uint64_t trials,
                                        std::uint64_t seed, const McOptions& opt = {}) {
  detail::require_trials(trials);
  if (!(p_s >= 0.0)) throw DomainError("transmit power must be >= 0");
  const double beta_sc = path_loss(p.d_sc, p, LinkClass::Long);
  auto m = detail::run_blocks(trials, opt, [&](std::uint64_t t) {
    auto g = derive_stream(seed, t, StreamLink::sc);
    const double a = detail::draw_cn_abs(g, beta_sc);
    return p_s * a * a;
  });
  return detail::sample_mean(m, seed);
}

struct GammaVEstimate {
  McEstimate mean;
  double variance = 0.0;            // unbiased sample variance
  double variance_std_error = 0.0;  // spread of per-block variances
};

// gamma_v = 1 + alpha_bd max_m |g_m|^2 with unit-mean exponential |g_m|^2.
inline GammaVEstimate estimate_gamma_v(double alpha_bd, int M, std::uint64_t trials, std::uint64_t seed,
                                       const McOptions& opt = {}) {
  detail::require_trials(trials);
  if (M < 1) throw DomainError("M must be >= 1");
  if (!(alpha_bd >= 0.0)) throw DomainError("alpha_bd must be >= 0");
  const std::uint64_t bs = std::max<std::uint64_t>(1, opt.block_size);
  const std::size_t nblocks = static_cast<std::size_t>((trials + bs - 1) / bs);
  auto parts = parallel_map<detail::Moments>(
      nblocks,
      [&](std::size_t b) {
        detail::Moments m;
        const std::uint64_t hi = std::min(trials, (b + 1) * bs);
        for (std::uint64_t t = b * bs; t < hi; ++t) {
          auto g = derive_stream(seed, t, StreamLink::bd);
          double gmax = 0.0;
          for (int k = 0; k < M; ++k) {
            const double a = detail::draw_cn_abs(g, 1.0);
            gmax = std::max(gmax, a * a);
          }
          m.add(1.0 + alpha_bd * gmax);
        }
        return m;
      },
      opt.workers);
  detail::Moments total, spread;
  for (const auto& m : parts) {
    total.merge(m);
    if (m.n > 1.0) spread.add(m.m2 / (m.n - 1.0));
  }
  GammaVEstimate e;
  e.mean = detail::sample_mean(total, seed);
  e.variance = total.n > 1.0 ? total.m2 / (total.n - 1.0) : 0.0;
  // Block variances are roughly equally weighted; their mean error scales by 1/sqrt(blocks).
  e.variance_std_error = spread.n > 1.0 ? std::sqrt(spread.m2 / (spread.n - 1.0) / spread.n) : 0.0;
  return e;
}

// ---------------------------------------------------------------- grid search

enum class GridObjective { ClosedFormOP, McOP, SinrHat };

inline const char* to_string(GridObjective o) {
  switch (o) {
    case GridObjective::ClosedFormOP: return "closed_form_op";
    case GridObjective::McOP: return "mc_op";
    case GridObjective::SinrHat: return "sinr_hat";
  }
  return "?";
}

struct GridSpec {
  int d_points = 100;
  int p_points = 100;
  double p_min = 1.0;   // W
  double p_max = 10.0;  // W
  bool log_power = true;  // equal spacing in dB
  std::uint64_t trials = kDefaultTrials;  // McOP only
  std::uint64_t seed = 1;
};

// values[i * p_points + j] at (d_values[i], p_values[j]); cells above the
// interference cap are masked (feasible = 0, value NaN).
struct GridSurface {
  GridObjective objective = GridObjective::ClosedFormOP;
  std::vector<double> d_values;
  std::vector<double> p_values;
  std::vector<double> values;
  std::vector<char> feasible;
  int best_i = -1;
  int best_j = -1;
  double best_value = std::numeric_limits<double>::quiet_NaN();

  double at(int i, int j) const { return values[static_cast<std::size_t>(i) * p_values.size() + j]; }
};

// Full surface over the feasible placement interval and the power range. The
// best cell minimizes OP objectives and maximizes SinrHat.
inline GridSurface grid_search(const Topology& topo, const SystemParams& p, const GridSpec& spec, GridObjective obj,
                               const McOptions& opt = {}) {
  if (spec.d_points < 8 || spec.p_points < 8) throw DomainError("grid needs at least 8 points per axis");
  if (!(spec.p_min > 0.0 && spec.p_max > spec.p_min)) throw DomainError("invalid power range");
  const auto iv = topo.feasible_interval();
  GridSurface s;
  s.objective = obj;
  for (int i = 0; i < spec.d_points; ++i)
    s.d_values.push_back(i == spec.d_points - 1 ? iv.upper
                                                : iv.lower + (iv.upper - iv.lower) * i / (spec.d_points - 1));
  const double l0 = std::log10(spec.p_min), l1 = std::log10(spec.p_max);
  for (int j = 0; j < spec.p_points; ++j) {
    const double f = static_cast<double>(j) / (spec.p_points - 1);
    double v = spec.log_power ? std::pow(10.0, l0 + (l1 - l0) * f) : spec.p_min + (spec.p_max - spec.p_min) * f;
    if (j == spec.p_points - 1) v = spec.p_max;
    s.p_values.push_back(v);
  }
  const double p_ub = optimal_power(p).p_ub;
  McOptions inner = opt;
  inner.workers = 1;  // rows already run in parallel
  auto rows = parallel_map<std::vector<double>>(
      s.d_values.size(),
      [&](std::size_t i) {
        std::vector<double> row(s.p_values.size());
        for (std::size_t j = 0; j < row.size(); ++j) {
          const double ps = s.p_values[j];
          if (ps > p_ub) {
            row[j] = std::numeric_limits<double>::quiet_NaN();
            continue;
          }
          const double d = s.d_values[i];
          switch (obj) {
            case GridObjective::ClosedFormOP: row[j] = outage_at(d, ps, topo, p); break;
            case GridObjective::McOP: row[j] = estimate_outage(d, ps, topo, p, spec.trials, spec.seed, inner).value; break;
            case GridObjective::SinrHat: row[j] = sinr_hat_at(d, ps, topo, p); break;
          }
        }
        return row;
      },
      opt.workers);
  const bool maximize = obj == GridObjective::SinrHat;
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      const double v = rows[i][j];
      s.values.push_back(v);
      s.feasible.push_back(std::isnan(v) ? 0 : 1);
      if (std::isnan(v)) continue;
      const bool better = s.best_i < 0 || (maximize ? v > s.best_value : v < s.best_value);
      if (better) {
        s.best_i = static_cast<int>(i);
        s.best_j = static_cast<int>(j);
        s.best_value = v;
      }
    }
  return s;
}

}  // namespace risd2d
