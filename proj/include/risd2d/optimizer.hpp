#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "risd2d/geometry.hpp"
#include "risd2d/outage.hpp"
#include "risd2d/sinr_approx.hpp"

namespace risd2d {

enum class CandidateOrigin { Stationary, BoundaryLower, BoundaryUpper };

inline const char* to_string(CandidateOrigin o) {
  switch (o) {
    case CandidateOrigin::Stationary: return "stationary";
    case CandidateOrigin::BoundaryLower: return "boundary_lower";
    case CandidateOrigin::BoundaryUpper: return "boundary_upper";
  }
  return "?";
}

struct PlacementCandidate {
  std::string label;  // d1..d5 (parallel) or e0, e1, e2, e_lo, e_hi (elliptical)
  double d = 0.0;
  CandidateOrigin origin = CandidateOrigin::Stationary;
  double second_derivative = 0.0;
  double objective_z = 0.0;
  bool feasible = false;
  bool local_maximum = false;
};

enum class TieBreak { NearerSource, NearerDestination };

struct PlacementResult {
  std::vector<double> d_star;  // every feasible candidate with minimal Z, ascending
  double selected = 0.0;
  double z = 0.0;
  std::vector<PlacementCandidate> candidates;
};

enum class BindingConstraint { InterferenceCap, PowerBudget };

inline const char* to_string(BindingConstraint b) {
  return b == BindingConstraint::InterferenceCap ? "interference_cap" : "power_budget";
}

struct PowerSolution {
  double p_s_star = 0.0;
  double p_ub = 0.0;
  BindingConstraint binding = BindingConstraint::PowerBudget;
};

struct JointSolution {
  std::vector<double> d_star;
  double d_selected = 0.0;
  double p_s_star = 0.0;
  double p_ub = 0.0;
  double achieved_outage = 1.0;
  double achieved_sinr_hat = 0.0;
  std::vector<PlacementCandidate> candidates;
  BindingConstraint binding_constraint = BindingConstraint::PowerBudget;
};

inline double z_second_derivative(double d, const Topology& topo) {
  if (topo.kind == TopologyKind::Parallel)
    return 2.0 * (6.0 * d * d - 6.0 * d * topo.d_sd + 2.0 * topo.y * topo.y + topo.d_sd * topo.d_sd);
  const double len = topo.path_length();
  return 2.0 * (6.0 * d * d - 6.0 * d * len + len * len);
}

// Stationary points of Z together with the two boundary points of the
// feasible interval. Complex stationary points (d_sd < 2y) are dropped.
inline std::vector<PlacementCandidate> enumerate_candidates(const Topology& topo) {
  const auto iv = topo.feasible_interval();
  const double tol = 1e-12 * std::max(1.0, topo.d_sd);
  std::vector<PlacementCandidate> out;
  auto add = [&](std::string label, double d, CandidateOrigin o) {
    PlacementCandidate c;
    c.label = std::move(label);
    c.d = d;
    c.origin = o;
    c.second_derivative = z_second_derivative(d, topo);
    c.objective_z = z_objective(d, topo);
    c.feasible = iv.contains(d, tol);
    c.local_maximum = o == CandidateOrigin::Stationary && c.second_derivative < 0.0;
    out.push_back(c);
  };
  if (topo.kind == TopologyKind::Parallel) {
    const double dsd = topo.d_sd;
    add("d1", dsd / 2.0, CandidateOrigin::Stationary);
    const double disc = dsd * dsd - 4.0 * topo.y * topo.y;
    if (disc >= 0.0) {
      add("d2", (dsd - std::sqrt(disc)) / 2.0, CandidateOrigin::Stationary);
      add("d3", (dsd + std::sqrt(disc)) / 2.0, CandidateOrigin::Stationary);
    }
    add("d4", iv.lower, CandidateOrigin::BoundaryLower);
    add("d5", iv.upper, CandidateOrigin::BoundaryUpper);
  } else {
    const double len = topo.path_length();
    add("e0", 0.0, CandidateOrigin::Stationary);
    add("e1", len / 2.0, CandidateOrigin::Stationary);
    add("e2", len, CandidateOrigin::Stationary);
    add("e_lo", iv.lower, CandidateOrigin::BoundaryLower);
    add("e_hi", iv.upper, CandidateOrigin::BoundaryUpper);
  }
  return out;
}

// Minimizes Z over the feasible candidates. All minimizers are reported; the
// tie-break only picks `selected`.
inline PlacementResult optimal_placement(const Topology& topo, TieBreak tie = TieBreak::NearerSource) {
  PlacementResult r;
  r.candidates = enumerate_candidates(topo);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : r.candidates)
    if (c.feasible) best = std::min(best, c.objective_z);
  if (!std::isfinite(best)) throw ConstraintViolation("C4-C7", "no feasible placement candidate");
  const double ztol = 1e-12 * std::max(best, 1e-300) + 1e-300;
  const double dtol = 1e-12 * std::max(1.0, topo.d_sd);
  for (const auto& c : r.candidates) {
    if (!c.feasible || c.objective_z > best + ztol) continue;
    const bool dup = std::any_of(r.d_star.begin(), r.d_star.end(), [&](double v) { return std::abs(v - c.d) <= dtol; });
    if (!dup) r.d_star.push_back(c.d);
  }
  std::sort(r.d_star.begin(), r.d_star.end());
  r.z = best;
  r.selected = tie == TieBreak::NearerSource ? r.d_star.front() : r.d_star.back();
  return r;
}

// P* = min(P_max, I_th / beta_sc).
inline PowerSolution optimal_power(const SystemParams& p, double beta_sc) {
  if (!(beta_sc > 0.0)) throw DomainError("beta_sc must be > 0");
  PowerSolution s;
  s.p_ub = p.interference_threshold / beta_sc;
  if (s.p_ub < p.p_s_max) {
    s.p_s_star = s.p_ub;
    s.binding = BindingConstraint::InterferenceCap;
  } else {
    s.p_s_star = p.p_s_max;
    s.binding = BindingConstraint::PowerBudget;
  }
  return s;
}

inline PowerSolution optimal_power(const SystemParams& p) {
  return optimal_power(p, path_loss(p.d_sc, p, LinkClass::Long));
}

// Closed-form outage at placement d and power p_s; zero power is a certain outage.
inline double outage_at(double d, double p_s, const Topology& topo, const SystemParams& p) {
  if (p_s <= 0.0) return 1.0;
  return outage_probability(make_link_stats(p, topo, d, p_s), p).p_out;
}

inline double sinr_hat_at(double d, double p_s, const Topology& topo, const SystemParams& p) {
  if (p_s <= 0.0) return 0.0;
  return sinr_hat(d, p_s, topo, p).value;
}

// Placement from Z, then the largest admissible power.
inline JointSolution joint_optimize(const Topology& topo, const SystemParams& p, TieBreak tie = TieBreak::NearerSource) {
  const auto place = optimal_placement(topo, tie);
  const auto power = optimal_power(p);
  JointSolution s;
  s.d_star = place.d_star;
  s.d_selected = place.selected;
  s.candidates = place.candidates;
  s.p_s_star = power.p_s_star;
  s.p_ub = power.p_ub;
  s.binding_constraint = power.binding;
  s.achieved_outage = outage_at(s.d_selected, s.p_s_star, topo, p);
  s.achieved_sinr_hat = sinr_hat_at(s.d_selected, s.p_s_star, topo, p);
  return s;
}

struct SchemeResult {
  std::string name;
  double d = 0.0;
  double p_s = 0.0;
  double outage = 1.0;
  double sinr_hat = 0.0;
};

struct BenchmarkOptions {
  double fixed_d_offset = 1.5;      // fixed d = d_sd - offset
  double fixed_power_backoff_db = 5.0;  // fixed P_s = P_max[dB] - backoff
};

struct BenchmarkResult {
  SchemeResult joint;
  SchemeResult optimal_power_fixed_d;
  SchemeResult optimal_d_fixed_power;
  SchemeResult fixed_fixed;

  // Relative OP reduction 1 - OP_joint / OP_other.
  static double reduction(const SchemeResult& j, const SchemeResult& o) { return 1.0 - j.outage / o.outage; }
  // Relative OP increase OP_other / OP_joint - 1.
  static double increase(const SchemeResult& j, const SchemeResult& o) { return o.outage / j.outage - 1.0; }
};

inline BenchmarkResult benchmark_schemes(const Topology& topo, const SystemParams& p, const BenchmarkOptions& opt = {},
                                         TieBreak tie = TieBreak::NearerSource) {
  const auto js = joint_optimize(topo, p, tie);
  const double fixed_d = topo.d_sd - opt.fixed_d_offset;
  topo.check_feasible(fixed_d);
  const double fixed_p = p.p_s_max > 0.0
                             ? std::min(db_to_linear(linear_to_db(p.p_s_max) - opt.fixed_power_backoff_db), js.p_ub)
                             : 0.0;
  auto make = [&](std::string name, double d, double ps) {
    return SchemeResult{std::move(name), d, ps, outage_at(d, ps, topo, p), sinr_hat_at(d, ps, topo, p)};
  };
  BenchmarkResult r;
  r.joint = {"joint", js.d_selected, js.p_s_star, js.achieved_outage, js.achieved_sinr_hat};
  r.optimal_power_fixed_d = make("optimal_power_fixed_d", fixed_d, js.p_s_star);
  r.optimal_d_fixed_power = make("optimal_d_fixed_power", js.d_selected, fixed_p);
  r.fixed_fixed = make("fixed_fixed", fixed_d, fixed_p);
  return r;
}

}  // namespace risd2d
