#include "ergodic_mlmc/model.hpp"
#include "ergodic_mlmc/presets.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace ergodic_mlmc;
using namespace test_support;

namespace {

template <int D, class F>
void expect_matches_dual_oracle(const Preset<D>& p, const F& oracle, double lo, double hi, int per_axis) {
  for (const auto& x : lattice_probes<D>(lo, hi, per_axis)) {
    const auto ref = dual_derivatives<D>(oracle, x);
    const auto e = p.model.expand(x);
    for (int i = 0; i < D; ++i) {
      EXPECT_NEAR(p.model.drift(x)[i], ref.value[i], 1e-12 * (1.0 + std::abs(ref.value[i])));
      EXPECT_NEAR(e.drift[i], ref.value[i], 1e-12 * (1.0 + std::abs(ref.value[i])));
      EXPECT_NEAR(e.laplacian[i], ref.laplacian[i], 1e-10 * (1.0 + std::abs(ref.laplacian[i])));
      EXPECT_NEAR(p.model.laplacian_drift(x)[i], ref.laplacian[i], 1e-10 * (1.0 + std::abs(ref.laplacian[i])));
      for (int j = 0; j < D; ++j) {
        EXPECT_NEAR(e.jacobian(i, j), ref.jacobian(i, j), 1e-11 * (1.0 + std::abs(ref.jacobian(i, j))));
        EXPECT_NEAR(p.model.jacobian(x)(i, j), ref.jacobian(i, j), 1e-11 * (1.0 + std::abs(ref.jacobian(i, j))));
        for (int k = 0; k < D; ++k) {
          const double r = ref.hessian[i](j, k);
          EXPECT_NEAR(p.model.hessian(x)[i](j, k), r, 1e-10 * (1.0 + std::abs(r)));
        }
      }
    }
  }
}

}  // namespace

TEST(Presets, TripleWellMatchesPublishedDrift) {
  expect_matches_dual_oracle<1>(triple_well_1d(), [](const auto& x) { return triple_well_drift(x); }, -3.0, 3.0, 61);
}

TEST(Presets, DoubleWellMatchesPublishedDrift) {
  expect_matches_dual_oracle<2>(double_well_2d(), [](const auto& x) { return double_well_drift(x); }, -3.0, 3.0, 13);
}

TEST(Presets, ThomasMatchesPublishedDrift) {
  expect_matches_dual_oracle<3>(thomas_3d(), [](const auto& x) { return thomas_drift(x); }, -3.0, 3.0, 7);
}

TEST(Presets, MetadataAndStartPoints) {
  const auto tw = triple_well_1d();
  EXPECT_DOUBLE_EQ(tw.reference_value, 0.42863);
  EXPECT_DOUBLE_EQ(tw.x0[0], 1.0);
  EXPECT_EQ(tw.payoff.kind, PayoffKind::indicator);
  const auto dw = double_well_2d();
  EXPECT_DOUBLE_EQ(dw.reference_value, 0.1674);
  EXPECT_EQ(dw.x0, Vec<2>::Zero());
  EXPECT_EQ(dw.payoff.kind, PayoffKind::indicator);
  const auto th = thomas_3d();
  EXPECT_DOUBLE_EQ(th.reference_value, 3.9664);
  EXPECT_EQ(th.x0, Vec<3>(1.0, 2.0, 2.0));
  EXPECT_EQ(th.payoff.kind, PayoffKind::lipschitz);
}

TEST(Presets, NamesRoundTripAndUnknownIsRejected) {
  for (auto n : {PresetName::triple_well_1d, PresetName::double_well_2d, PresetName::thomas_3d})
    EXPECT_EQ(parse_preset_name(to_string(n)), n);
  EXPECT_EQ(preset_dimension(PresetName::thomas_3d), 3);
  EXPECT_THROW(parse_preset_name("quadruple_well"), ConfigError);
}

TEST(Presets, TripleWellDriftIsOdd) {
  const auto p = triple_well_1d();
  for (double x = 0.05; x < 4.0; x += 0.1)
    EXPECT_NEAR(p.model.drift(Vec<1>(-x))[0], -p.model.drift(Vec<1>(x))[0], 1e-14);
}

TEST(Presets, GeneratorDriftVanishesAtOrigin) {
  EXPECT_NEAR(eval_generator_drift<1>(triple_well_1d().model, Vec<1>::Zero())[0], 0.0, 1e-15);
  EXPECT_NEAR(eval_generator_drift<3>(thomas_3d().model, Vec<3>::Zero()).norm(), 0.0, 1e-15);
  EXPECT_THROW(eval_generator_drift<3>(thomas_3d().model, Vec<3>(NAN, 0.0, 0.0)), PreconditionError);
}

TEST(Presets, IndicatorPayoffsTakeValuesZeroOrOne) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g(0.0, 2.0);
  const auto tw = triple_well_1d();
  const auto dw = double_well_2d();
  for (int i = 0; i < 2000; ++i) {
    const double a = tw.payoff.eval(Vec<1>(g(rng)));
    const double b = dw.payoff.eval(Vec<2>(g(rng), g(rng)));
    EXPECT_TRUE(a == 0.0 || a == 1.0);
    EXPECT_TRUE(b == 0.0 || b == 1.0);
  }
  EXPECT_EQ(tw.payoff.eval(Vec<1>(0.0)), 1.0);
  EXPECT_EQ(tw.payoff.eval(Vec<1>(2.0)), 1.0);
  EXPECT_EQ(tw.payoff.eval(Vec<1>(2.0001)), 0.0);
  EXPECT_EQ(dw.payoff.eval(Vec<2>(0.3, 0.3)), 1.0);
  EXPECT_EQ(dw.payoff.eval(Vec<2>(1.0, -1.0)), 0.0);
}

TEST(Presets, ThomasPayoffRespectsLipschitzConstant) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g(0.0, 3.0);
  const auto p = thomas_3d();
  for (int i = 0; i < 2000; ++i) {
    const Vec<3> x(g(rng), g(rng), g(rng));
    const Vec<3> y(g(rng), g(rng), g(rng));
    EXPECT_LE(std::abs(p.payoff.eval(x) - p.payoff.eval(y)), *p.payoff.lipschitz_constant * (x - y).norm() * (1.0 + 1e-8));
  }
}

TEST(ValidateDerivatives, AllPresetsPassOnLattice) {
  const auto a = lattice_probes<1>(-3.0, 3.0, 5);
  const auto b = lattice_probes<2>(-3.0, 3.0, 5);
  const auto c = lattice_probes<3>(-3.0, 3.0, 5);
  EXPECT_TRUE(validate_derivatives<1>(triple_well_1d().model, std::span<const Vec<1>>(a), 1e-5).pass);
  EXPECT_TRUE(validate_derivatives<2>(double_well_2d().model, std::span<const Vec<2>>(b), 1e-5).pass);
  EXPECT_TRUE(validate_derivatives<3>(thomas_3d().model, std::span<const Vec<3>>(c), 1e-5).pass);
}

TEST(ValidateDerivatives, AgreesWithIndependentOneSidedDifferences) {
  // Forward differences, second order in the step by Richardson extrapolation.
  const auto m = triple_well_1d().model;
  const std::vector<Vec<1>> probes{Vec<1>(-2.0), Vec<1>(-1.0), Vec<1>(0.0), Vec<1>(1.0), Vec<1>(2.0)};
  const auto rep = validate_derivatives<1>(m, std::span<const Vec<1>>(probes), 1e-5);
  EXPECT_TRUE(rep.pass);
  for (const auto& x : probes) {
    const double h = 1e-4;
    auto fwd = [&](double s) { return (m.drift(Vec<1>(x[0] + s))[0] - m.drift(x)[0]) / s; };
    const double d1 = 2.0 * fwd(h / 2) - fwd(h);
    EXPECT_NEAR(d1, m.jacobian(x)(0, 0), 1e-5 * std::max(1.0, std::abs(d1)));
  }
}

TEST(ValidateDerivatives, DetectsWrongJacobian) {
  auto m = triple_well_1d().model;
  const auto good = m.jacobian;
  m.jacobian = [good](const Vec<1>& x) -> Mat<1> { return 2.0 * good(x); };
  m.expand_fn = nullptr;
  const auto probes = lattice_probes<1>(-3.0, 3.0, 5);
  const auto rep = validate_derivatives<1>(m, std::span<const Vec<1>>(probes), 1e-5);
  EXPECT_FALSE(rep.pass);
  EXPECT_FALSE(rep.order_pass[0]);
  EXPECT_GT(rep.max_rel_error[0], 0.1);
}

TEST(ValidateDerivatives, Preconditions) {
  const std::vector<Vec<1>> none;
  const auto m = triple_well_1d().model;
  EXPECT_THROW(validate_derivatives<1>(m, std::span<const Vec<1>>(none), 1e-5), PreconditionError);
  const std::vector<Vec<1>> one{Vec<1>(0.5)};
  EXPECT_THROW(validate_derivatives<1>(m, std::span<const Vec<1>>(one), 0.0), PreconditionError);
  auto bad = m;
  bad.drift = [](const Vec<1>&) { return Vec<1>(NAN); };
  EXPECT_THROW(validate_derivatives<1>(bad, std::span<const Vec<1>>(one), 1e-5), EvaluationError);
}

TEST(Dissipativity, HoldsOnEveryProbe) {
  const auto probes = lattice_probes<3>(-10.0, 10.0, 21);
  const auto m = thomas_3d().model;
  const auto est = estimate_dissipativity<3>(m, std::span<const Vec<3>>(probes));
  EXPECT_GT(est.alpha, 0.0);
  for (const auto& x : probes) EXPECT_LE(x.dot(m.drift(x)), -est.alpha * x.squaredNorm() + est.beta + 1e-12);
  // Symmetric part of Da is -0.18 I plus a cos-weighted off-diagonal part bounded by 1.
  EXPECT_LE(est.one_sided_lipschitz, 1.0 - 0.18 + 1e-12);
}

TEST(Dissipativity, TripleWellOneSidedBound) {
  const auto probes = lattice_probes<1>(-10.0, 10.0, 2001);
  const auto m = triple_well_1d().model;
  const auto est = estimate_dissipativity<1>(m, std::span<const Vec<1>>(probes));
  EXPECT_GT(est.alpha, 0.0);
  double lam = -INFINITY;
  for (const auto& x : probes) lam = std::max(lam, m.jacobian(x)(0, 0));
  EXPECT_DOUBLE_EQ(est.one_sided_lipschitz, lam);
}

TEST(Lattice, CoversBoxCorners) {
  const auto p = lattice_probes<2>(-3.0, 3.0, 5);
  ASSERT_EQ(p.size(), 25u);
  EXPECT_EQ(p.front(), Vec<2>(-3.0, -3.0));
  EXPECT_EQ(p.back(), Vec<2>(3.0, 3.0));
}
