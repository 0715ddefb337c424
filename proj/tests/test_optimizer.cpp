#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"

using namespace risd2d;

namespace {

const PlacementCandidate& find(const std::vector<PlacementCandidate>& v, const std::string& label) {
  for (const auto& c : v)
    if (c.label == label) return c;
  throw std::runtime_error("missing " + label);
}

SystemParams contour_params() {
  auto p = testing_support::profile();
  p.d_bd = 3.5;
  return p;
}

}  // namespace

TEST(Candidates, ParallelDefault) {
  Topology t;
  const auto c = enumerate_candidates(t);
  ASSERT_EQ(c.size(), 5u);
  EXPECT_DOUBLE_EQ(find(c, "d1").d, 2.5);
  EXPECT_NEAR(find(c, "d2").d, (5.0 - std::sqrt(24.0)) / 2.0, 1e-15);
  EXPECT_NEAR(find(c, "d3").d, (5.0 + std::sqrt(24.0)) / 2.0, 1e-15);
  EXPECT_NEAR(find(c, "d4").d, 0.5590169943749474, 1e-15);
  EXPECT_NEAR(find(c, "d5").d, 4.440983005625053, 1e-14);
  EXPECT_TRUE(find(c, "d1").local_maximum);
  EXPECT_DOUBLE_EQ(find(c, "d1").second_derivative, -24.0);
  EXPECT_FALSE(find(c, "d2").feasible);
  EXPECT_FALSE(find(c, "d3").feasible);
  EXPECT_TRUE(find(c, "d4").feasible);
}

TEST(Candidates, ComplexRootsDropped) {
  Topology t;
  t.d_sd = 0.9;
  t.y = 0.5;
  t.min_separation = 0.55;
  const auto c = enumerate_candidates(t);
  EXPECT_EQ(c.size(), 3u);
}

TEST(Placement, CornerPointsWhenInteriorMinimaInfeasible) {
  Topology t;
  const auto r = optimal_placement(t);
  ASSERT_EQ(r.d_star.size(), 2u);
  EXPECT_NEAR(r.d_star[0], 0.5590169943749474, 1e-15);
  EXPECT_NEAR(r.d_star[1], 4.440983005625053, 1e-14);
  EXPECT_DOUBLE_EQ(r.selected, r.d_star[0]);
  EXPECT_DOUBLE_EQ(optimal_placement(t, TieBreak::NearerDestination).selected, r.d_star[1]);
  EXPECT_NEAR(r.z, z_parallel(r.d_star[0], t), 1e-12);
}

// With a small exclusion radius the stationary points d2, d3 become feasible
// and are the global minimizers of Z.
TEST(Placement, InteriorMinimaWhenFeasible) {
  Topology t;
  t.min_separation = 0.5001;
  const auto r = optimal_placement(t);
  ASSERT_EQ(r.d_star.size(), 2u);
  EXPECT_NEAR(r.d_star[0], (5.0 - std::sqrt(24.0)) / 2.0, 1e-12);
  EXPECT_NEAR(r.z, 0.25 * 25.0, 1e-9);  // y^2 d_sd^2
}

TEST(Placement, Elliptical) {
  Topology t;
  t.kind = TopologyKind::Elliptical;
  t.eccentricity = 0.9;
  const auto r = optimal_placement(t);
  ASSERT_EQ(r.d_star.size(), 2u);
  EXPECT_DOUBLE_EQ(r.d_star[0], 0.75);
  EXPECT_NEAR(r.d_star[1], 5.0 / 0.9 - 0.75, 1e-12);
  const auto c = enumerate_candidates(t);
  EXPECT_TRUE(find(c, "e1").local_maximum);
  EXPECT_FALSE(find(c, "e0").feasible);
}

TEST(Power, BudgetOrCap) {
  auto p = testing_support::profile();
  auto s = optimal_power(p);
  EXPECT_EQ(s.binding, BindingConstraint::PowerBudget);
  EXPECT_DOUBLE_EQ(s.p_s_star, 10.0);
  EXPECT_NEAR(s.p_ub, p.interference_threshold / std::pow(1.05 / 250.0, 2.5), 1e-6 * s.p_ub);
  p.d_sc = 0.8;
  s = optimal_power(p);
  EXPECT_EQ(s.binding, BindingConstraint::InterferenceCap);
  EXPECT_NEAR(s.p_s_star, p.interference_threshold / std::pow(1.05 / 0.8, 2.5), 1e-12);
  EXPECT_LT(s.p_s_star, p.p_s_max);
  EXPECT_THROW(optimal_power(p, 0.0), DomainError);
}

TEST(Power, ZeroPowerIsCertainOutage) {
  Topology t;
  EXPECT_EQ(outage_at(1.0, 0.0, t, contour_params()), 1.0);
  EXPECT_EQ(sinr_hat_at(1.0, 0.0, t, contour_params()), 0.0);
}

TEST(Joint, DenseGridAgrees) {
  Topology t;
  const auto p = contour_params();
  const auto js = joint_optimize(t, p);
  const auto iv = t.feasible_interval();
  const int n = 10'000;
  const double step = (iv.upper - iv.lower) / (n - 1);
  double best = 2.0, arg = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = iv.lower + step * i;
    const double v = outage_at(d, js.p_s_star, t, p);
    if (v < best) best = v, arg = d;
  }
  bool hit = false;
  for (double d : js.d_star) hit = hit || std::abs(d - arg) <= step * 1.000001;
  EXPECT_TRUE(hit) << "grid argmin " << arg;
  EXPECT_LE(js.achieved_outage, best + 1e-12);
}

TEST(Joint, TwoDimensionalGridAgrees) {
  Topology t;
  const auto p = contour_params();
  const auto js = joint_optimize(t, p);
  GridSpec g;
  const auto s = grid_search(t, p, g, GridObjective::ClosedFormOP, {1, 8192});
  EXPECT_EQ(s.best_j, g.p_points - 1);
  const double dstep = s.d_values[1] - s.d_values[0];
  bool hit = false;
  for (double d : js.d_star) hit = hit || std::abs(s.d_values[s.best_i] - d) <= dstep * 1.000001;
  EXPECT_TRUE(hit);
}

TEST(Benchmarks, JointNeverWorse) {
  Topology t;
  for (double dbd : {1.0, 2.0, 3.5}) {
    for (int n : {20, 40, 60}) {
      auto p = testing_support::profile();
      p.d_bd = dbd;
      p.n_elements = n;
      const auto r = benchmark_schemes(t, p);
      EXPECT_LE(r.joint.outage, r.optimal_power_fixed_d.outage + 1e-15);
      EXPECT_LE(r.joint.outage, r.optimal_d_fixed_power.outage + 1e-15);
      EXPECT_LE(r.optimal_d_fixed_power.outage, r.fixed_fixed.outage + 1e-15);
      EXPECT_DOUBLE_EQ(r.optimal_power_fixed_d.d, 3.5);
      EXPECT_NEAR(r.optimal_d_fixed_power.p_s, db_to_linear(5.0), 1e-12);
    }
  }
}

TEST(Benchmarks, RatiosAreConsistent) {
  SchemeResult j{"j", 0, 0, 0.2, 0}, o{"o", 0, 0, 0.25, 0};
  EXPECT_DOUBLE_EQ(BenchmarkResult::reduction(j, o), 0.2);
  EXPECT_DOUBLE_EQ(BenchmarkResult::increase(j, o), 0.25);
}
