#include "ergodic_mlmc/increments.hpp"
#include "ergodic_mlmc/philox.hpp"

#include <boost/math/distributions/normal.hpp>
#include <gtest/gtest.h>

#include <set>

using namespace ergodic_mlmc;

TEST(Philox, KnownAnswerVectors) {
  using P = Philox4x32;
  EXPECT_EQ(P::generate({0, 0, 0, 0}, {0, 0}), (P::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
  EXPECT_EQ(P::generate({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}),
            (P::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
  EXPECT_EQ(P::generate({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}),
            (P::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(Philox, SplitMixFirstOutput) { EXPECT_EQ(splitmix64(0), 0xE220A8397B1DCDAFull); }

TEST(InverseNormal, MatchesBoostQuantile) {
  const boost::math::normal_distribution<double> n;
  for (double p : {1e-300, 1e-20, 1e-9, 1e-4, 0.01, 0.02425, 0.1, 0.3, 0.5, 0.7, 0.9, 0.97575, 0.999, 1.0 - 1e-9}) {
    const double want = boost::math::quantile(n, p);
    EXPECT_NEAR(inverse_normal_cdf(p), want, 1e-14 * std::max(1.0, std::abs(want))) << "p=" << p;
  }
  EXPECT_EQ(inverse_normal_cdf(0.5), 0.0);
  EXPECT_THROW(inverse_normal_cdf(0.0), PreconditionError);
  EXPECT_THROW(inverse_normal_cdf(1.0), PreconditionError);
  EXPECT_THROW(inverse_normal_cdf(NAN), PreconditionError);
}

TEST(MakeIncrement, ExactLinearMap) {
  const auto zero = make_increment<2>(Vec<2>::Zero(), Vec<2>::Zero(), 0.5);
  EXPECT_EQ(zero.dW, Vec<2>::Zero());
  EXPECT_EQ(zero.dZ, Vec<2>::Zero());
  const double h = 0.25;
  const auto e1 = make_increment<2>(Vec<2>(std::sqrt(h), 0.0), Vec<2>::Zero(), h);
  EXPECT_DOUBLE_EQ(e1.dZ[0], 0.0625);
  EXPECT_EQ(e1.dZ[1], 0.0);
  EXPECT_EQ(e1.dW, e1.dV1);
  const auto e2 = make_increment<1>(Vec<1>(0.0), Vec<1>(std::sqrt(3.0)), h);
  EXPECT_DOUBLE_EQ(e2.dZ[0], h / 2);
}

TEST(NoiseStream, ReplaysAndSeparatesStreams) {
  const double h = 0.125;
  NoiseStream a(42, 3, 17), b(42, 3, 17), other_sample(42, 3, 18), other_level(42, 4, 17), other_seed(43, 3, 17);
  std::set<double> first;
  for (int n = 0; n < 50; ++n) {
    const auto x = next_increment<3>(a, h);
    const auto y = next_increment<3>(b, h);
    EXPECT_EQ(x.dV1, y.dV1);
    EXPECT_EQ(x.dV2, y.dV2);
    EXPECT_EQ(x.dW, x.dV1);
    const Vec<3> dz = (0.5 * h) * (x.dV1 + x.dV2 / std::sqrt(3.0));
    EXPECT_NEAR((x.dZ - dz).norm(), 0.0, 1e-16);
    first.insert(x.dV1[0]);
  }
  EXPECT_EQ(first.size(), 50u);
  NoiseStream c(42, 3, 17);
  const auto r = next_increment<3>(c, h);
  EXPECT_NE(r.dV1, next_increment<3>(other_sample, h).dV1);
  EXPECT_NE(r.dV1, next_increment<3>(other_level, h).dV1);
  EXPECT_NE(r.dV1, next_increment<3>(other_seed, h).dV1);
  // Random access: seeking reproduces a later step.
  NoiseStream d(42, 3, 17);
  d.seek(49);
  NoiseStream e(42, 3, 17);
  IncrementPair<3> last;
  for (int n = 0; n < 50; ++n) last = next_increment<3>(e, h);
  EXPECT_EQ(next_increment<3>(d, h).dV2, last.dV2);
}

TEST(NoiseStream, RejectsNonPositiveStep) {
  NoiseStream s(1, 0, 0);
  EXPECT_THROW(next_increment<1>(s, 0.0), PreconditionError);
  EXPECT_THROW(moment_audit(0.0, 1, 10, 1), PreconditionError);
}

TEST(MomentAudit, UnitStepOneDimension) {
  const auto r = moment_audit(1.0, 1, 1000000, 5);
  EXPECT_NEAR(r.checks[0].target, 1.0, 0.0);
  for (const auto& c : r.checks) EXPECT_LT(std::abs(c.z), 5.0) << c.quantity;
}

TEST(MomentAudit, ThreeDimensionsSmallStep) {
  const double h = 1.0 / 16;
  const auto r = moment_audit(h, 3, 1000000, 6);
  EXPECT_DOUBLE_EQ(r.checks[1].target, std::ldexp(1.0, -12));
  for (const auto& c : r.checks) EXPECT_LT(std::abs(c.z), 5.0) << c.quantity;
}

TEST(MomentAudit, CrossMomentTwoDimensions) {
  const double h = 1.0 / 32;
  const auto r = moment_audit(h, 2, 1000000, 7);
  EXPECT_DOUBLE_EQ(r.checks[2].target, std::ldexp(1.0, -10));
  for (const auto& c : r.checks) EXPECT_LT(std::abs(c.z), 5.0) << c.quantity;
}
