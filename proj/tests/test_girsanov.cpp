#include "ergodic_mlmc/audit.hpp"
#include "ergodic_mlmc/girsanov.hpp"
#include "ergodic_mlmc/presets.hpp"

#include <gtest/gtest.h>

using namespace ergodic_mlmc;

TEST(Springs, PullTowardTheOtherPath) {
  const Vec<2> yf(1.0, 2.0), yc(0.5, 3.0);
  EXPECT_EQ(fine_spring<2>(2.0, yf, yc).value, Vec<2>(-1.0, 2.0));
  EXPECT_EQ(coarse_spring<2>(2.0, yf, yc).value, Vec<2>(1.0, -2.0));
  EXPECT_EQ(fine_spring<2>(3.0, yf, yf).value, Vec<2>::Zero());
}

TEST(LogWeights, FineHandValues) {
  const SpringTerm<1> zero{Vec<1>(0.0), SpringSide::fine};
  EXPECT_EQ(log_rn_fine_step<1>(zero, Vec<1>(0.4), Vec<1>(-0.2), 0.5), 0.0);
  const SpringTerm<1> one{Vec<1>(1.0), SpringSide::fine};
  EXPECT_DOUBLE_EQ(log_rn_fine_step<1>(one, Vec<1>(0.2), Vec<1>(0.0), 0.25), -0.7);
  EXPECT_DOUBLE_EQ(log_rn_fine_step<1>(one, Vec<1>(0.0), Vec<1>(0.0), 0.25), -0.5);
  EXPECT_DOUBLE_EQ(log_rn_fine_step<1>(one, Vec<1>(0.0), Vec<1>(0.1), 0.0), std::sqrt(3.0) * 0.1);
  EXPECT_DOUBLE_EQ(log_rn_fine_step<1>(one, Vec<1>(0.2), Vec<1>(0.3), 0.25, Scheme::euler_maruyama), -0.2 - 0.125);
  const SpringTerm<1> wrong{Vec<1>(1.0), SpringSide::coarse};
  EXPECT_THROW(log_rn_fine_step<1>(wrong, Vec<1>(0.0), Vec<1>(0.0), 0.25), PreconditionError);
}

TEST(LogWeights, CoarseHandValues) {
  const SpringTerm<1> zero{Vec<1>(0.0), SpringSide::coarse};
  EXPECT_EQ(log_rn_coarse_step<1>(zero, Vec<1>(1.0), Vec<1>(1.0), Vec<1>(1.0), Vec<1>(1.0), 0.1), 0.0);
  const SpringTerm<1> one{Vec<1>(1.0), SpringSide::coarse};
  const Vec<1> z(0.0);
  EXPECT_DOUBLE_EQ(log_rn_coarse_step<1>(one, z, z, z, z, 0.1), -1.3);
  const SpringTerm<2> e1{Vec<2>(1.0, 0.0), SpringSide::coarse};
  const Vec<2> z2 = Vec<2>::Zero();
  EXPECT_DOUBLE_EQ(log_rn_coarse_step<2>(e1, Vec<2>(0.1, 5.0), Vec<2>(0.2, -1.0), z2, z2, 0.0), -0.3);
  EXPECT_DOUBLE_EQ(log_rn_coarse_step<2>(e1, z2, z2, Vec<2>(0.1, 0.0), Vec<2>(0.05, 0.0), 0.0),
                   2.0 * std::sqrt(3.0) * 0.15);
  EXPECT_DOUBLE_EQ(log_rn_coarse_step<1>(one, z, z, z, z, 0.1, Scheme::euler_maruyama), -0.1);
  const SpringTerm<1> wrong{Vec<1>(1.0), SpringSide::fine};
  EXPECT_THROW(log_rn_coarse_step<1>(wrong, z, z, z, z, 0.1), PreconditionError);
}

TEST(LogWeights, QuadraticTermMatchesGaussianShift) {
  // E exp(-<s,V1> + sqrt3 <s,V2>) = exp(h |s|^2 (1/2 + 3/2)) for V ~ N(0, h): the fine
  // penalty 2 h |s|^2 is exactly the log-normalizer of the linear terms.
  const double h = 0.3, s = 0.7;
  EXPECT_DOUBLE_EQ(0.5 * h * s * s * (1.0 + 3.0), 2.0 * h * s * s);
  // Coarse: both sub-steps with V1 coefficient 1 and V2 coefficient 2 sqrt3: 2 * (1 + 12) / 2 = 13.
  EXPECT_DOUBLE_EQ(2.0 * 0.5 * h * s * s * (1.0 + 12.0), 13.0 * h * s * s);
}

TEST(MartingaleAudit, ZeroSpringGivesUnitWeights) {
  const auto a = martingale_audit<1>(triple_well_1d(), 0.0, 1.0 / 32, 2.0, 500, 3);
  EXPECT_EQ(a.mean_rf, 1.0);
  EXPECT_EQ(a.mean_rc, 1.0);
  EXPECT_EQ(a.stderr_rf, 0.0);
  EXPECT_EQ(a.z_rf(), 0.0);
}

TEST(MartingaleAudit, WeightsHaveUnitMean) {
  const auto a = martingale_audit<1>(triple_well_1d(), 1.0, 1.0 / 32, 5.0, 20000, 4);
  EXPECT_TRUE(a.within(5.0)) << a.z_rf() << " " << a.z_rc();
  const auto b = martingale_audit<2>(double_well_2d(), 1.0, 1.0 / 16, 2.0, 20000, 4);
  EXPECT_TRUE(b.within(5.0)) << b.z_rf() << " " << b.z_rc();
  const auto c = martingale_audit<1>(triple_well_1d(), 1.0, 1.0 / 32, 5.0, 20000, 4, 0, Scheme::euler_maruyama);
  EXPECT_TRUE(c.within(5.0)) << c.z_rf() << " " << c.z_rc();
}
