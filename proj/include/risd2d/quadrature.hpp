#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

#include "risd2d/core.hpp"

namespace risd2d {

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

struct QuadratureOptions {
  double abs_tol = 1e-9;
  double rel_tol = 0.0;
  std::size_t max_evaluations = 1'000'000;
};

namespace detail {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gk15(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kKronrodNodes[i];
    const double s = f(c - dx) + f(c + dx);
    kron += kKronrodWeights[i] * s;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * s;
  }
  return {a, b, kron * h, std::abs((kron - gauss) * h)};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod 7/15 on a finite interval [a, b]. The
// segment with the largest error estimate is bisected until the summed
// estimate meets the tolerance or the evaluation budget runs out.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, const QuadratureOptions& opt = {}) {
  if (!(opt.abs_tol > 0.0) && !(opt.rel_tol > 0.0))
    throw DomainError("quadrature tolerance must be > 0");
  if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("finite interval required");
  QuadratureResult res;
  if (a == b) {
    res.converged = true;
    return res;
  }
  std::priority_queue<detail::Segment> heap;
  auto first = detail::gk15(f, a, b);
  res.evaluations = 15;
  double total = first.value;
  double error = first.error;
  heap.push(first);
  auto target = [&] { return std::max(opt.abs_tol, opt.rel_tol * std::abs(total)); };
  while (error > target() && res.evaluations + 30 <= opt.max_evaluations) {
    auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      heap.push(worst);
      break;  // interval no longer divisible in floating point
    }
    auto left = detail::gk15(f, worst.a, mid);
    auto right = detail::gk15(f, mid, worst.b);
    res.evaluations += 30;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to remove the drift of the running updates.
  total = 0.0;
  error = 0.0;
  std::vector<detail::Segment> segs;
  segs.reserve(heap.size());
  while (!heap.empty()) {
    segs.push_back(heap.top());
    heap.pop();
  }
  for (auto it = segs.rbegin(); it != segs.rend(); ++it) {
    total += it->value;
    error += it->error;
  }
  res.value = total;
  res.abs_error_estimate = error;
  res.converged = std::isfinite(total) && error <= target();
  return res;
}

// Integral over [a, inf) by the substitution x = a - scale*log(t), t in (0, 1].
// `scale` should be of the order of the integrand's decay length.
template <class F>
QuadratureResult integrate_half_line(F&& f, double a, const QuadratureOptions& opt = {},
                                     double scale = 1.0) {
  if (!(scale > 0.0)) throw DomainError("half-line scale must be > 0");
  auto g = [&](double t) {
    const double x = a - scale * std::log(t);
    const double fx = f(x);
    if (fx == 0.0) return 0.0;
    return fx * scale / t;
  };
  return integrate(g, 0.0, 1.0, opt);
}

}  // namespace risd2d
