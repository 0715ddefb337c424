#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "test_support.hpp"

using namespace risd2d;

TEST(Units, DbRoundTrip) {
  EXPECT_DOUBLE_EQ(db_to_linear(0.0), 1.0);
  EXPECT_DOUBLE_EQ(db_to_linear(10.0), 10.0);
  EXPECT_NEAR(db_to_linear(-30.0), 1e-3, 1e-18);
  EXPECT_NEAR(db_to_linear(28.0), 630.957344480193, 1e-9);
  for (double x : {-40.0, -3.0, 0.5, 11.0, 28.0}) EXPECT_NEAR(linear_to_db(db_to_linear(x)), x, 1e-12);
}

TEST(Units, RateThreshold) {
  EXPECT_DOUBLE_EQ(sinr_threshold_from_rate(1.0), 1.0);
  EXPECT_DOUBLE_EQ(sinr_threshold_from_rate(2.0), 3.0);
  EXPECT_DOUBLE_EQ(sinr_threshold_from_rate(0.0), 0.0);
}

TEST(Params, DefaultsValidate) {
  SystemParams p;
  EXPECT_NO_THROW(p.validate());
  EXPECT_EQ(p.mode(), LinkMode::WithDirect);
  p.direct_link = false;
  EXPECT_EQ(p.mode(), LinkMode::NoDirect);
}

TEST(Params, RejectsBadValues) {
  auto bad = [](auto mutate) {
    SystemParams p;
    mutate(p);
    EXPECT_THROW(p.validate(), DomainError);
  };
  bad([](SystemParams& p) { p.n_elements = 0; });
  bad([](SystemParams& p) { p.n_antennas = 0; });
  bad([](SystemParams& p) { p.element_amplitude = 1.2; });
  bad([](SystemParams& p) { p.noise_power = 0.0; });
  bad([](SystemParams& p) { p.sinr_threshold = 0.0; });
  bad([](SystemParams& p) { p.d_bd = -1.0; });
  bad([](SystemParams& p) { p.p_s_max = std::nan(""); });
}

TEST(Params, RefLossFlags) {
  SystemParams p;
  EXPECT_DOUBLE_EQ(p.ref_loss_for(LinkClass::Local), 1e-3);
  p.apply_ref_loss_local = false;
  EXPECT_DOUBLE_EQ(p.ref_loss_for(LinkClass::Local), 1.0);
  EXPECT_DOUBLE_EQ(p.ref_loss_for(LinkClass::Long), 1e-3);
}

TEST(Geometry, PathLossValues) {
  SystemParams p;  // C applied
  EXPECT_NEAR(path_loss(1.05, p), 1e-3, 1e-15);
  EXPECT_NEAR(path_loss(2.1, p), 1e-3 * std::pow(0.5, 2.5), 1e-15);
  p.apply_ref_loss_long = false;
  EXPECT_NEAR(path_loss(300.0, p), 7.247197734297e-7, 1e-17);
  EXPECT_THROW(path_loss(0.0, p), DomainError);
  EXPECT_THROW(path_loss(-2.0, p), DomainError);
}

TEST(Geometry, PathLossDecreasesWithDistance) {
  const auto p = testing_support::profile();
  double prev = path_loss(0.5, p);
  for (double d = 0.75; d < 400.0; d *= 1.5) {
    const double b = path_loss(d, p);
    EXPECT_LT(b, prev);
    prev = b;
  }
}

TEST(Geometry, ZObjective) {
  Topology t;
  EXPECT_DOUBLE_EQ(z_parallel(1.0, t), 20.3125);
  EXPECT_DOUBLE_EQ(z_parallel(2.5, t), (0.25 + 6.25) * (0.25 + 6.25));
  Topology e;
  e.kind = TopologyKind::Elliptical;
  EXPECT_DOUBLE_EQ(z_elliptical(1.0, e), 16.0);
  // Symmetric about the midpoint.
  for (double d : {0.6, 1.3, 2.2}) EXPECT_NEAR(z_parallel(d, t), z_parallel(5.0 - d, t), 1e-12);
}

TEST(Topology, ParallelInterval) {
  Topology t;
  const auto iv = t.feasible_interval();
  EXPECT_NEAR(iv.lower, std::sqrt(0.75 * 0.75 - 0.25), 1e-15);
  EXPECT_NEAR(iv.upper, 5.0 - std::sqrt(0.3125), 1e-15);
  EXPECT_NEAR(iv.lower, 0.5590169943749474, 1e-15);
}

TEST(Topology, EllipticalInterval) {
  Topology t;
  t.kind = TopologyKind::Elliptical;
  t.eccentricity = 0.8;
  EXPECT_DOUBLE_EQ(t.path_length(), 6.25);
  const auto iv = t.feasible_interval();
  EXPECT_DOUBLE_EQ(iv.lower, 0.75);
  EXPECT_DOUBLE_EQ(iv.upper, 5.5);
  const auto [a, b] = t.ris_distances(2.0);
  EXPECT_DOUBLE_EQ(a + b, 6.25);
}

TEST(Topology, ConstraintNames) {
  Topology t;
  try {
    t.check_feasible(0.3);
    FAIL();
  } catch (const ConstraintViolation& e) {
    EXPECT_EQ(e.constraint(), "C4");
    EXPECT_EQ(e.category(), "constraint");
  }
  try {
    t.check_feasible(4.9);
    FAIL();
  } catch (const ConstraintViolation& e) {
    EXPECT_EQ(e.constraint(), "C5");
  }
  t.kind = TopologyKind::Elliptical;
  try {
    t.check_feasible(0.1);
    FAIL();
  } catch (const ConstraintViolation& e) {
    EXPECT_EQ(e.constraint(), "C6");
  }
  Topology narrow;
  narrow.y = 0.9;  // delta < y
  EXPECT_THROW(narrow.feasible_interval(), ConstraintViolation);
}

TEST(Topology, RisBetasParallelDistances) {
  const auto p = testing_support::profile();
  Topology t;
  const auto [bsr, brd] = ris_betas(2.5, t, p);
  const double dd = std::hypot(2.5, 0.5);
  EXPECT_NEAR(bsr, std::pow(1.05 / dd, 2.5), 1e-15);
  EXPECT_NEAR(brd, bsr, 1e-15);
  EXPECT_THROW(ris_betas(0.2, t, p), ConstraintViolation);
}

TEST(Topology, Fraunhofer) {
  // 2 f L^2 / c at 28 GHz, 0.1 m aperture.
  EXPECT_NEAR(fraunhofer_distance(28e9, 0.1), 2.0 * 28e9 * 0.01 / 299792458.0, 1e-12);
}

TEST(Rng, StreamsAreDeterministicAndDistinct) {
  auto a = derive_stream(42, 7, StreamLink::sr);
  auto b = derive_stream(42, 7, StreamLink::sr);
  for (int i = 0; i < 16; ++i) EXPECT_EQ(a(), b());
  std::set<std::uint64_t> firsts;
  for (std::uint64_t t = 0; t < 64; ++t)
    for (auto l : {StreamLink::sd, StreamLink::sc, StreamLink::sr, StreamLink::rd, StreamLink::bd})
      firsts.insert(derive_stream(1, t, l)());
  EXPECT_EQ(firsts.size(), 64u * 5u);
}

TEST(Rng, UniformRanges) {
  SplitMix64 g(3);
  double mean = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = g.uniform_open0();
    ASSERT_GT(u, 0.0);
    ASSERT_LE(u, 1.0);
    const double v = g.uniform();
    ASSERT_GE(v, 0.0);
    ASSERT_LT(v, 1.0);
    mean += v;
  }
  EXPECT_NEAR(mean / 100000.0, 0.5, 0.005);
}
