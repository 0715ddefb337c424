#include <gtest/gtest.h>

#include <cmath>

#include "oracle_values.hpp"
#include "test_support.hpp"

using namespace risd2d;

namespace {

struct Case {
  SystemParams p;
  LinkStats ls;
};

Case case_a() {
  auto p = testing_support::profile();
  p.d_bd = 3.5;
  return {p, testing_support::fixed_link(p, 10.0)};
}

Case case_b() {
  auto p = testing_support::profile();
  p.d_bd = 2.0;
  p.n_antennas = 2;
  p.sinr_threshold = db_to_linear(2.0);
  Topology t;
  return {p, make_link_stats(p, t, t.feasible_interval().lower, 10.0)};
}

Case case_c() {
  auto p = testing_support::profile();
  p.n_elements = 40;
  p.n_antennas = 4;
  p.d_bd = 3.0;
  p.direct_link = false;
  return {p, testing_support::fixed_link(p, 3.0)};
}

Case case_d() {
  auto p = testing_support::profile();
  p.n_elements = 60;
  p.element_amplitude = 0.8;
  p.d_bd = 1.0;
  p.sinr_threshold = db_to_linear(3.6);
  return {p, testing_support::fixed_link(p, 10.0)};
}

}  // namespace

TEST(OutageQuadrature, MatchesIndependentOracle) {
  const std::pair<Case, double> cases[] = {{case_a(), oracle::kCaseAPout},
                                           {case_b(), oracle::kCaseBPout},
                                           {case_c(), oracle::kCaseCPout},
                                           {case_d(), oracle::kCaseDPout}};
  for (const auto& [c, ref] : cases) EXPECT_NEAR(outage_by_quadrature(c.ls, c.p), ref, 1e-8 + 1e-7 * ref);
}

TEST(OutageClosedForm, WithinSeriesErrorOfOracle) {
  const std::pair<Case, double> cases[] = {{case_a(), oracle::kCaseAPout},
                                           {case_b(), oracle::kCaseBPout},
                                           {case_c(), oracle::kCaseCPout},
                                           {case_d(), oracle::kCaseDPout}};
  for (const auto& [c, ref] : cases) {
    const auto b = outage_probability(c.ls, c.p);
    EXPECT_NEAR(b.p_out, ref, 2e-3);
    EXPECT_GE(b.p_out, 0.0);
    EXPECT_LE(b.p_out, 1.0);
  }
}

// The assembled constituents agree with direct integration of their defining
// integrals, which isolates the algebra from the Q-series error.
TEST(OutageClosedForm, ConstituentsMatchTheirIntegrals) {
  for (const auto& c : {case_a(), case_b(), case_d()}) {
    const auto cf = outage_probability(c.ls, c.p);
    const auto qd = outage_constituents_by_quadrature(c.ls, c.p);
    EXPECT_NEAR(cf.a1, qd.a1, 1e-9 + 1e-7 * std::abs(qd.a1));
    EXPECT_NEAR(cf.a2, qd.a2, 1e-9 + 1e-7 * std::abs(qd.a2));
    EXPECT_NEAR(cf.b1, qd.b1, 1e-9 + 1e-7 * std::abs(qd.b1));
    EXPECT_NEAR(cf.b2, qd.b2, 1e-9 + 1e-7 * std::abs(qd.b2));
    EXPECT_NEAR(cf.raw, qd.raw, 1e-8);
  }
}

TEST(OutageClosedForm, NoDirectModeDropsBTerms) {
  const auto c = case_c();
  const auto b = outage_probability(c.ls, c.p);
  EXPECT_EQ(b.mode, LinkMode::NoDirect);
  EXPECT_EQ(b.b1, 0.0);
  EXPECT_EQ(b.b2, 0.0);
  EXPECT_THROW(compute_b1(c.ls, c.p), InvalidModeError);
  EXPECT_THROW(outage_probability(c.ls, c.p, LinkMode::WithDirect), InvalidModeError);
}

TEST(OutageClosedForm, VerbatimVariantDiffers) {
  const auto c = case_d();
  const double fixed = outage_probability(c.ls, c.p).p_out;
  const double verb = verbatim::outage_probability(c.ls, c.p).p_out;
  EXPECT_GT(std::abs(fixed - verb), 0.05);
}

TEST(OutageClosedForm, MonotoneInThreshold) {
  auto c = case_d();
  double prev = 0.0;
  for (double th = -10.0; th <= 10.0; th += 1.0) {
    c.p.sinr_threshold = db_to_linear(th);
    const double v = outage_probability(c.ls, c.p).p_out;
    EXPECT_GE(v, prev - 1e-12) << th;
    prev = v;
  }
}

TEST(OutageClosedForm, MonotoneInPowerAndN) {
  auto p = case_d().p;
  double prev = 1.0;
  for (double ps_db = 0.0; ps_db <= 20.0; ps_db += 2.0) {
    const double v = outage_probability(testing_support::fixed_link(p, db_to_linear(ps_db)), p).p_out;
    EXPECT_LE(v, prev + 1e-12);
    prev = v;
  }
  prev = 1.0;
  for (int n = 10; n <= 100; n += 10) {
    p.n_elements = n;
    const double v = outage_probability(testing_support::fixed_link(p, 10.0), p).p_out;
    EXPECT_LE(v, prev + 1e-12) << n;
    prev = v;
  }
}

TEST(OutageClosedForm, SmallAlphaFallsBackToCdf) {
  auto c = case_a();
  c.p.d_bd = 1e5;
  c.ls = testing_support::fixed_link(c.p, 10.0);
  EXPECT_NEAR(outage_by_quadrature(c.ls, c.p), cdf_gamma_srd(c.p.sinr_threshold, c.ls), 1e-9);
}

TEST(OutageB, PrefactorMatchesConvolutionFactor) {
  for (const auto& c : {case_a(), case_b(), case_d()}) {
    const double conv = c.ls.omega / std::sqrt(2.0 * c.ls.a_t * c.ls.sigma2);
    EXPECT_NEAR(outage_b_coefficient(c.ls), conv, 1e-14 * conv);
  }
}
