#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"

using namespace risd2d;

namespace {

SystemParams mc_params() {
  auto p = testing_support::profile();
  p.n_elements = 20;
  p.d_bd = 2.5;
  return p;
}

}  // namespace

TEST(McOutage, ThresholdNearZeroGivesZero) {
  auto p = mc_params();
  p.sinr_threshold = 1e-300;
  const auto e = estimate_outage(testing_support::fixed_link(p, 1.0), p, 10'000, 1);
  EXPECT_EQ(e.value, 0.0);
  EXPECT_EQ(e.std_error, 0.0);
}

TEST(McOutage, LargePowerDrivesToZero) {
  auto p = mc_params();
  const auto e = estimate_outage(testing_support::fixed_link(p, 1e9), p, 10'000, 1);
  EXPECT_EQ(e.value, 0.0);
}

TEST(McOutage, RejectsTooFewTrials) {
  auto p = mc_params();
  EXPECT_THROW(estimate_outage(testing_support::fixed_link(p, 1.0), p, 999, 1), DomainError);
}

TEST(McOutage, AgreesWithQuadrature) {
  auto p = mc_params();
  p.n_antennas = 2;
  const auto ls = testing_support::fixed_link(p, 3.0);
  const auto e = estimate_outage(ls, p, 400'000, 9);
  const double q = outage_by_quadrature(ls, p);
  EXPECT_LE(std::abs(e.value - q), 3.0 * e.std_error) << e.value << " vs " << q;
  EXPECT_LE(e.ci95_low, e.value);
  EXPECT_GE(e.ci95_high, e.value);
  EXPECT_NEAR(e.std_error, std::sqrt(e.value * (1.0 - e.value) / 400'000.0), 1e-15);
}

TEST(McDeterminism, IndependentOfWorkersAndBlocking) {
  auto p = mc_params();
  const auto ls = testing_support::fixed_link(p, 3.0);
  const auto a = estimate_outage(ls, p, 50'000, 77, {1, 8192});
  const auto b = estimate_outage(ls, p, 50'000, 77, {4, 8192});
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.std_error, b.std_error);
  const auto c = estimate_mean_sinr(ls, p, 50'000, 77, {1, 8192});
  const auto d = estimate_mean_sinr(ls, p, 50'000, 77, {3, 8192});
  EXPECT_EQ(c.value, d.value);
  // A different block size changes only the summation order, not the count.
  const auto e = estimate_outage(ls, p, 50'000, 77, {2, 1000});
  EXPECT_EQ(std::llround(a.value * 50'000), std::llround(e.value * 50'000));
}

TEST(McMeanSinr, StdErrorFollowsRootN) {
  auto p = mc_params();
  const auto ls = testing_support::fixed_link(p, 3.0);
  const auto a = estimate_mean_sinr(ls, p, 100'000, 3);
  const auto b = estimate_mean_sinr(ls, p, 200'000, 3);
  EXPECT_NEAR(a.std_error / b.std_error, std::sqrt(2.0), 0.2 * std::sqrt(2.0));
}

// Without RIS contribution and direct link only: E[Gamma] = gamma_s beta_sd E[1/gamma_v].
TEST(McMeanSinr, DirectOnlyMatchesQuadrature) {
  auto p = mc_params();
  p.element_amplitude = 0.0;
  p.n_antennas = 2;
  const auto ls = testing_support::fixed_link(p, 3.0);
  const auto inv = integrate_half_line([&](double x) { return pdf_gamma_v_product(x, ls.alpha_bd, 2) / x; }, 1.0, {},
                                       ls.alpha_bd);
  const double expect = ls.gamma_bar_s * ls.beta_sd * inv.value;
  const auto e = estimate_mean_sinr(ls, p, 200'000, 4);
  EXPECT_LE(std::abs(e.value - expect), 3.0 * e.std_error);
}

TEST(McInterference, CapAudit) {
  auto p = mc_params();
  p.d_sc = 0.9;
  EXPECT_EQ(estimate_interference(0.0, p, 10'000, 1).value, 0.0);
  const double p_ub = optimal_power(p).p_ub;
  const auto e = estimate_interference(p_ub, p, 1'000'000, 2);
  EXPECT_LE(e.value, p.interference_threshold + 3.0 * e.std_error);
  const auto u = estimate_interference(1.0, p, 1'000'000, 3);
  EXPECT_NEAR(u.value / path_loss(p.d_sc, p), 1.0, 0.01);
}

TEST(McGammaV, MomentsMatchExactSums) {
  for (int m : {1, 4}) {
    const auto e = estimate_gamma_v(3.0, m, 400'000, 6);
    const auto ex = mean_var_gamma_v(3.0, m, MomentMode::ExactSum);
    EXPECT_LE(std::abs(e.mean.value - ex.mean), 4.0 * e.mean.std_error);
    EXPECT_LE(std::abs(e.variance - ex.variance), 4.0 * e.variance_std_error);
  }
}

TEST(Grid, SurfaceShapeAndMask) {
  Topology t;
  auto p = mc_params();
  p.d_sc = 0.8;  // cap binds inside the power range
  GridSpec g;
  g.d_points = 12;
  g.p_points = 10;
  const auto s = grid_search(t, p, g, GridObjective::ClosedFormOP);
  EXPECT_EQ(s.values.size(), 120u);
  const double p_ub = optimal_power(p).p_ub;
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 10; ++j) {
      const bool masked = std::isnan(s.at(i, j));
      EXPECT_EQ(masked, s.p_values[j] > p_ub);
      if (j > 0 && !masked) {
        EXPECT_LE(s.at(i, j), s.at(i, j - 1) + 1e-12);
      }
    }
  EXPECT_THROW(grid_search(t, p, {4, 10}, GridObjective::ClosedFormOP), DomainError);
  const auto h = grid_search(t, p, g, GridObjective::SinrHat);
  EXPECT_GE(h.best_value, h.at(5, 0));
}

TEST(Grid, TwoSymmetricMinimaAlongD) {
  Topology t;
  auto p = mc_params();
  GridSpec g;
  g.d_points = 41;
  g.p_points = 8;
  const auto s = grid_search(t, p, g, GridObjective::ClosedFormOP);
  for (int j = 0; j < g.p_points; ++j) {
    EXPECT_NEAR(s.at(0, j), s.at(g.d_points - 1, j), 1e-12);
    for (int i = 1; i < g.d_points - 1; ++i) EXPECT_GT(s.at(i, j), s.at(0, j));
  }
}

TEST(Grid, McObjectiveIsDeterministic) {
  Topology t;
  auto p = mc_params();
  GridSpec g;
  g.d_points = 8;
  g.p_points = 8;
  g.trials = 2000;
  const auto a = grid_search(t, p, g, GridObjective::McOP, {1, 8192});
  const auto b = grid_search(t, p, g, GridObjective::McOP, {3, 8192});
  EXPECT_EQ(a.values, b.values);
}
