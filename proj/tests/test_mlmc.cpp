#include "ergodic_mlmc/mlmc.hpp"
#include "ergodic_mlmc/presets.hpp"
#include "ergodic_mlmc/stats.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace ergodic_mlmc;
using namespace test_support;

TEST(TerminalTime, Oracles) {
  EXPECT_EQ(choose_terminal_time(std::exp(-3.0), 1.0 / std::sqrt(6.0), 1.0), 3.0);
  // 2 ln 100 + 2 ln sqrt 6 = 11.0021
  EXPECT_EQ(choose_terminal_time(0.01, 1.0, 0.5), 12.0);
  EXPECT_EQ(choose_terminal_time(0.01, 0.360, 0.259), 18.0);
  // Clamped at 1 when the bound is tiny.
  EXPECT_EQ(choose_terminal_time(0.9, 0.01, 5.0), 1.0);
  EXPECT_THROW(choose_terminal_time(0.0, 1.0, 1.0), PreconditionError);
}

TEST(StepSize, Oracles) {
  EXPECT_EQ(h_max(1.0, 1.0), 1.0);
  EXPECT_NEAR(h_max(16.0, 1.0), 1.0 / std::sqrt(16.0 * std::log(16.0)), 1e-15);
  EXPECT_EQ(choose_h0(1.0, 1.0, PayoffClass::lipschitz, 0.1), 0.5);
  EXPECT_EQ(choose_h0(16.0, 1.0, PayoffClass::lipschitz, 0.1), 0.125);
  EXPECT_EQ(choose_h0(16.0, 1.0, PayoffClass::discontinuous, 0.1), 0.125);
  // Discontinuous bound 3^(-1/1.4) = 0.456 is below h_max = 0.549 and floors to 1/4.
  EXPECT_EQ(choose_h0(3.0, 1.0, PayoffClass::discontinuous, 0.1), 0.25);
  for (double T : {1.0, 2.0, 3.0, 7.0, 12.0, 18.0, 25.0}) {
    const double h0 = choose_h0(T, 1.0, PayoffClass::lipschitz, 0.1);
    const double r = T / h0;
    EXPECT_EQ(r, std::floor(r));
    EXPECT_EQ(std::fmod(r, 2.0), 0.0);
    EXPECT_EQ(std::exp2(std::round(std::log2(h0))), h0);
    EXPECT_LE(h0, h_max(T, 1.0));
  }
  EXPECT_THROW(choose_h0(0.5, 1.0, PayoffClass::lipschitz, 0.1), PreconditionError);
}

TEST(NumLevels, Oracles) {
  const double ln2 = std::numbers::ln2;
  // Lipschitz: (2/3) log2(eps^-1 T^-1/4 (ln T)^-3/4) + (2/3) log2(sqrt6 c_bias), written with natural logs.
  const double lip = (2.0 / 3.0) * (std::log(100.0) - 0.25 * std::log(12.0) - 0.75 * std::log(std::log(12.0)) +
                                    0.5 * std::log(6.0)) / ln2;
  EXPECT_NEAR(lip, 4.0368, 1e-4);
  EXPECT_EQ(choose_num_levels(0.01, 12.0, 0.125, PayoffClass::lipschitz, 0.1, 1.0), static_cast<int>(std::ceil(lip)));
  const double disc = (1.0 / 1.4) * (std::log(100.0) - 0.5 * std::log(12.0) + 0.5 * std::log(6.0)) / ln2;
  EXPECT_NEAR(disc, 4.3885, 1e-4);
  EXPECT_EQ(choose_num_levels(0.01, 12.0, 0.125, PayoffClass::discontinuous, 0.1, 1.0),
            static_cast<int>(std::ceil(disc)));
  // Argument of the log equal to 1 with c_bias = 6^-1/2 gives 0, clamped to 1.
  const double T = 12.0;
  const double eps = std::pow(T, -0.25) * std::pow(std::log(T), -0.75);
  EXPECT_EQ(choose_num_levels(eps, T, 0.125, PayoffClass::lipschitz, 0.1, 1.0 / std::sqrt(6.0)), 1);
}

TEST(AllocateSamples, Oracles) {
  const std::vector<double> v1{1.0}, c1{1.0};
  EXPECT_EQ(allocate_samples(v1, c1, 1.0), (std::vector<std::int64_t>{3}));
  const std::vector<double> v{1.0, 0.25}, c{1.0, 4.0};
  EXPECT_EQ(allocate_samples(v, c, 0.1), (std::vector<std::int64_t>{600, 150}));
  const std::vector<double> vz{1.0, 0.0}, cz{1.0, 4.0};
  EXPECT_EQ(allocate_samples(vz, cz, 0.1, 777)[1], 777);
  // N_l proportional to sqrt(V_l / C_l).
  const std::vector<double> vp{4.0, 1.0, 0.25}, cp{1.0, 2.0, 4.0};
  const auto n = allocate_samples(vp, cp, 0.01);
  EXPECT_NEAR(static_cast<double>(n[0]) / n[2], std::sqrt(4.0 / 1.0) / std::sqrt(0.25 / 4.0), 1e-3);
  EXPECT_THROW(allocate_samples(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}, 0.1), PreconditionError);
}

TEST(Validate, RejectsBadConfigsNamingTheKey) {
  auto expect_key = [](MlmcConfig cfg, const std::string& key) {
    try {
      validate(cfg);
      ADD_FAILURE() << "expected ConfigError for " << key;
    } catch (const ConfigError& e) {
      EXPECT_EQ(std::string(e.what()).rfind(key + ":", 0), 0u) << e.what();
    }
  };
  MlmcConfig base;
  EXPECT_NO_THROW(validate(base));
  auto c = base;
  c.epsilon = 1.0;
  expect_key(c, "epsilon");
  c = base;
  c.payoff_class = PayoffClass::discontinuous;
  c.xi = 1.5;
  expect_key(c, "xi");
  c = base;
  c.spring = -1.0;
  expect_key(c, "spring");
  c = base;
  c.lambda_star = 0.0;
  expect_key(c, "lambda_star");
  c = base;
  c.overrides.N = std::vector<std::int64_t>{10, 0};
  expect_key(c, "N");
}

namespace {

Preset<1> constant_triple_well() {
  auto p = triple_well_1d();
  p.payoff = constant_payoff<1>(1.0);
  return p;
}

MlmcConfig fixed_plan(double T, double h0, int L, std::vector<std::int64_t> N) {
  MlmcConfig cfg;
  cfg.seed = 17;
  cfg.overrides.T = T;
  cfg.overrides.h0 = h0;
  cfg.overrides.L = L;
  cfg.overrides.N = std::move(N);
  return cfg;
}

}  // namespace

TEST(RunLevel, ConstantPayoff) {
  const auto p = constant_triple_well();
  MlmcConfig cfg = fixed_plan(4.0, 0.25, 2, {10, 10, 10});
  MlmcPlan plan{4.0, 0.25, 2, {}};
  const auto l0 = run_level<1>(0, plan, p, cfg, 2000);
  EXPECT_EQ(l0.mean, 1.0);
  EXPECT_EQ(l0.variance, 0.0);
  EXPECT_EQ(l0.cost_per_sample, 16.0);
  const auto l2 = run_level<1>(2, plan, p, cfg, 20000);
  EXPECT_EQ(l2.cost_per_sample, 64.0);
  EXPECT_LT(std::abs(l2.mean), 5.0 * std::sqrt(l2.variance / l2.n_samples));
  EXPECT_GE(l2.kurtosis, 1.0);
}

TEST(RunMlmc, EstimateIsTheSumOfLevelMeans) {
  const auto p = triple_well_1d();
  const auto r = run_mlmc<1>(p, fixed_plan(4.0, 0.25, 3, {4000, 2000, 1000, 500}));
  double sum = 0.0;
  double cost = 0.0;
  for (const auto& l : r.levels) {
    sum += l.mean;
    cost += static_cast<double>(l.n_samples + l.n_divergent) * l.cost_per_sample;
  }
  EXPECT_EQ(r.estimate, sum);
  EXPECT_EQ(r.total_cost, cost);
  ASSERT_EQ(r.levels.size(), 4u);
  EXPECT_EQ(r.levels[3].h, 0.25 / 8);
  EXPECT_TRUE(r.pilot.empty());
  EXPECT_GT(r.mse_budget_split.variance, 0.0);
  EXPECT_GE(r.mse_budget_split.bias_sq, 0.0);
}

TEST(RunMlmc, IndependentOfThreadCount) {
  const auto p = triple_well_1d();
  auto cfg = fixed_plan(4.0, 0.25, 2, {3000, 1000, 500});
  cfg.threads = 1;
  const auto a = run_mlmc<1>(p, cfg);
  cfg.threads = 4;
  const auto b = run_mlmc<1>(p, cfg);
  EXPECT_EQ(a.estimate, b.estimate);
  for (std::size_t l = 0; l < a.levels.size(); ++l) EXPECT_EQ(a.levels[l].variance, b.levels[l].variance);
}

TEST(RunMlmc, PilotThenAllocate) {
  const auto p = linear_preset<1>(1.0);
  MlmcConfig cfg;
  cfg.epsilon = 0.05;
  cfg.mu_star = 1.0;
  cfg.lambda_star = 1.0;
  cfg.seed = 3;
  cfg.pilot_samples = 500;
  const auto r = run_mlmc<1>(p, cfg);
  EXPECT_EQ(r.plan.T, choose_terminal_time(0.05, 1.0, 1.0));
  EXPECT_EQ(r.plan.h0, choose_h0(r.plan.T, 1.0, PayoffClass::lipschitz, 0.1));
  ASSERT_EQ(r.pilot.size(), static_cast<std::size_t>(r.plan.L + 1));
  ASSERT_EQ(r.plan.N.size(), r.pilot.size());
  for (std::size_t l = 0; l < r.levels.size(); ++l) EXPECT_EQ(r.levels[l].n_samples, r.plan.N[l]);
  EXPECT_LE(std::abs(r.estimate - p.reference_value), 3.0 * cfg.epsilon);
  const double erg = std::exp(-r.plan.T);
  EXPECT_NEAR(r.mse_budget_split.ergodic_sq, 2.0 * erg * erg, 1e-15);
}

TEST(RunMlmc, ParityViolationNamesTheRule) {
  const auto p = triple_well_1d();
  try {
    run_mlmc<1>(p, fixed_plan(3.0, 1.0, 1, {10, 10}));
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("T, h0"), std::string::npos) << msg;
    EXPECT_NE(msg.find("parity"), std::string::npos) << msg;
  }
  EXPECT_THROW(run_mlmc<1>(p, fixed_plan(4.0, 0.25, 2, {10, 10})), ConfigError);
}

TEST(RunMlmc, UnhealthyLevelAbortsWithReport) {
  Preset<1> p = triple_well_1d();
  p.model.expand_fn = nullptr;
  p.model.drift = [](const Vec<1>& x) -> Vec<1> { return Vec<1>(x[0] * x[0] * x[0]); };
  p.model.jacobian = [](const Vec<1>& x) -> Mat<1> { return Mat<1>(3.0 * x[0] * x[0]); };
  p.model.laplacian_drift = [](const Vec<1>& x) -> Vec<1> { return Vec<1>(6.0 * x[0]); };
  p.x0 = Vec<1>(3.0);
  try {
    run_mlmc<1>(p, fixed_plan(8.0, 0.5, 1, {100, 100}));
    FAIL() << "expected UnhealthyLevelError";
  } catch (const UnhealthyLevelError& e) {
    ASSERT_FALSE(e.levels().empty());
    EXPECT_FALSE(e.levels().back().healthy);
    EXPECT_EQ(e.levels().back().n_divergent, 100);
  }
}

TEST(Telescoping, CoarseMarginalMatchesNextCoarserFine) {
  // Without spring the level-2 coarse path and the level-1 fine path use the same step 2h.
  auto p = triple_well_1d();
  p.payoff.eval = [](const Vec<1>& x) { return x[0]; };
  LevelSampling s;
  s.T = 2.0;
  s.spring = 0.0;
  s.seed = 8;
  s.n_samples = 10000;
  s.level = 2;
  s.h = 1.0 / 16;
  const auto fine2 = sample_level<1>(p, s);
  s.level = 1;
  s.h = 1.0 / 8;
  const auto fine1 = sample_level<1>(p, s);
  std::vector<double> a, b;
  for (const auto& r : fine2) a.push_back(r.coarse_payoff);
  for (const auto& r : fine1) b.push_back(r.fine_payoff);
  EXPECT_GT(stats::ks_two_sample(a, b).p_value, 0.01);
}

TEST(Telescoping, WeightedMeansAgreeWithSpring) {
  auto p = triple_well_1d();
  p.payoff.eval = [](const Vec<1>& x) { return x[0]; };
  LevelSampling s;
  s.T = 2.0;
  s.spring = 1.0;
  s.seed = 9;
  s.n_samples = 20000;
  s.level = 2;
  s.h = 1.0 / 16;
  std::vector<double> a, b;
  for (const auto& r : sample_level<1>(p, s)) a.push_back(r.coarse_payoff * r.rc);
  s.level = 1;
  s.h = 1.0 / 8;
  for (const auto& r : sample_level<1>(p, s)) b.push_back(r.fine_payoff * r.rf);
  const auto ma = stats::sample_moments(a), mb = stats::sample_moments(b);
  EXPECT_LT(std::abs(ma.mean - mb.mean), 5.0 * std::hypot(ma.mean_stderr, mb.mean_stderr));
}
