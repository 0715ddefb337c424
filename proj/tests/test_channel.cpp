#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"

using namespace risd2d;

namespace {

SystemParams small_params() {
  auto p = testing_support::profile();
  p.n_elements = 8;
  p.n_antennas = 3;
  p.d_bd = 3.5;
  return p;
}

}  // namespace

TEST(Channel, AlignedPhasesCoPhaseEveryPath) {
  const auto p = small_params();
  const auto ls = testing_support::fixed_link(p, 10.0);
  for (std::uint64_t t = 0; t < 50; ++t) {
    const auto r = sample_realization(ls, p, 11, t);
    const auto th = aligned_phases(r);
    for (double v : th) {
      EXPECT_GE(v, 0.0);
      EXPECT_LT(v, 2.0 * kPi);
    }
    double expect = std::abs(r.h_sd);
    for (int n = 0; n < p.n_elements; ++n) expect += p.element_amplitude * std::abs(r.h_sr[n]) * std::abs(r.h_rd[n]);
    EXPECT_NEAR(std::abs(composite_channel(r, p.element_amplitude, th)), expect, 1e-12 * expect);
  }
}

TEST(Channel, NoDirectReferencePhase) {
  auto p = small_params();
  p.direct_link = false;
  const auto ls = testing_support::fixed_link(p, 10.0);
  const auto r = sample_realization(ls, p, 5, 0);
  const auto th = aligned_phases(r, LinkMode::NoDirect);
  const auto y = composite_channel(r, p.element_amplitude, th, LinkMode::NoDirect);
  EXPECT_NEAR(std::arg(y), 0.0, 1e-9);
}

TEST(Channel, RandomPhasesNeverBeatAlignment) {
  const auto p = small_params();
  const auto ls = testing_support::fixed_link(p, 10.0);
  SplitMix64 g(99);
  for (std::uint64_t t = 0; t < 200; ++t) {
    const auto r = sample_realization(ls, p, 3, t);
    std::vector<double> th(p.n_elements);
    for (auto& v : th) v = 2.0 * kPi * g.uniform();
    EXPECT_LE(std::abs(composite_channel(r, p.element_amplitude, th)),
              std::abs(composite_channel(r, p.element_amplitude, aligned_phases(r))) + 1e-12);
  }
}

TEST(Channel, FastPathMatchesFullRealization) {
  const auto p = small_params();
  const auto ls = testing_support::fixed_link(p, 4.0);
  for (std::uint64_t t = 0; t < 100; ++t) {
    const auto r = sample_realization(ls, p, 21, t);
    const auto d = draw_trial(ls, p, 21, t);
    EXPECT_NEAR(d.gamma_srd / d.gamma_v, instantaneous_sinr(r, p, 4.0), 1e-12 * d.gamma_srd / d.gamma_v);
    EXPECT_NEAR(d.h_sc_pow, std::norm(r.h_sc), 1e-15 + 1e-12 * d.h_sc_pow);
  }
}

TEST(Channel, LinkPowersMatchPathLoss) {
  const auto p = small_params();
  const auto ls = testing_support::fixed_link(p, 1.0);
  double sd = 0.0, sr = 0.0, bd = 0.0;
  const int n = 40000;
  for (int t = 0; t < n; ++t) {
    const auto r = sample_realization(ls, p, 8, t);
    sd += std::norm(r.h_sd);
    sr += std::norm(r.h_sr[0]);
    bd += std::norm(r.h_bd[1]);
  }
  EXPECT_NEAR(sd / n / ls.beta_sd, 1.0, 0.03);
  EXPECT_NEAR(sr / n / ls.beta_sr, 1.0, 0.03);
  EXPECT_NEAR(bd / n / ls.beta_bd, 1.0, 0.03);
}

TEST(Channel, SameSeedSameDraws) {
  const auto p = small_params();
  const auto ls = testing_support::fixed_link(p, 1.0);
  const auto a = sample_realization(ls, p, 1234, 77);
  const auto b = sample_realization(ls, p, 1234, 77);
  EXPECT_EQ(a.h_sd, b.h_sd);
  EXPECT_EQ(a.h_sr, b.h_sr);
  const auto c = sample_realization(ls, p, 1235, 77);
  EXPECT_NE(a.h_sd, c.h_sd);
}
