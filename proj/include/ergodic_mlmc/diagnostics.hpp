#pragma once

#include "ergodic_mlmc/mlmc.hpp"
#include "ergodic_mlmc/sampling.hpp"
#include "ergodic_mlmc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace ergodic_mlmc {

/// Shared settings of the per-level studies.
struct StudySettings {
  double spring = 1.0;
  double h0 = 0.0;
  double T = 0.0;
  std::int64_t n_samples = 100000;
  std::vector<int> levels{1, 2, 3, 4, 5};
  std::uint64_t seed = 0;
  Scheme scheme = Scheme::ito_taylor_15;
  unsigned threads = 0;
};

/// Moments of the level correction on one level.
struct LevelStats {
  int level = 0;
  double h = 0.0;
  std::int64_t n_samples = 0;
  std::int64_t n_divergent = 0;
  double mean = 0.0;
  double mean_stderr = 0.0;
  double mean_abs = 0.0;
  double mean_abs_stderr = 0.0;
  double variance = 0.0;
  double variance_stderr = 0.0;
  double kurtosis = 1.0;
  double max_gap = 0.0;
};

LevelStats summarize_records(int level, double h, const std::vector<LevelRecord>& records);

template <int D>
std::vector<LevelStats> level_sweep(const Preset<D>& problem, const StudySettings& cfg) {
  if (cfg.levels.empty()) throw PreconditionError("level_sweep: no levels requested");
  if (!(cfg.h0 > 0.0) || !(cfg.T > 0.0)) throw PreconditionError("level_sweep: h0 and T must be positive");
  std::vector<LevelStats> out;
  for (int l : cfg.levels) {
    LevelSampling s;
    s.level = l;
    s.h = std::ldexp(cfg.h0, -l);
    s.T = cfg.T;
    s.spring = cfg.spring;
    s.scheme = cfg.scheme;
    s.seed = cfg.seed;
    s.n_samples = cfg.n_samples;
    s.threads = cfg.threads;
    out.push_back(summarize_records(l, s.h, sample_level<D>(problem, s)));
  }
  return out;
}

enum class RateQuantity { strong_error, variance };

struct RateStudy {
  RateQuantity quantity = RateQuantity::strong_error;
  std::vector<int> levels;  // included in the fit
  std::vector<double> values;
  std::vector<double> stderrs;
  std::vector<int> excluded_levels;
  std::vector<std::string> notes;
  double fitted_slope = std::nan("");
  double slope_stderr = std::nan("");
  double slope_ci_lo = std::nan("");
  double slope_ci_hi = std::nan("");
  double r_squared = std::nan("");
  bool degenerate = false;
};

/// Weighted fit of log2(value) against level. Levels whose standard error
/// exceeds `max_rel_stderr` of the value are excluded and noted.
RateStudy fit_rate(const std::vector<LevelStats>& sweep, RateQuantity quantity,
                   double max_rel_stderr = 0.2, double confidence = 0.95);

template <int D>
RateStudy strong_error_study(const Preset<D>& problem, const StudySettings& cfg) {
  return fit_rate(level_sweep<D>(problem, cfg), RateQuantity::strong_error);
}

template <int D>
RateStudy variance_rate_study(const Preset<D>& problem, const StudySettings& cfg) {
  return fit_rate(level_sweep<D>(problem, cfg), RateQuantity::variance);
}

struct KurtosisStudy {
  std::vector<int> levels;
  std::vector<double> kurtosis;
  double spearman_rho = 0.0;
  bool increasing = false;  // rho > 0
};

KurtosisStudy kurtosis_from_sweep(const std::vector<LevelStats>& sweep);

template <int D>
KurtosisStudy kurtosis_study(const Preset<D>& problem, const StudySettings& cfg) {
  if (cfg.n_samples < 10000) throw PreconditionError("kurtosis_study: needs at least 1e4 samples per level");
  return kurtosis_from_sweep(level_sweep<D>(problem, cfg));
}

struct DivergenceReport {
  double nu1 = 1.0;
  double h = 0.0;
  double T = 0.0;
  double threshold = 0.0;  // nu1 * |ln h|
  double p_hat = 0.0;
  double max_gap = 0.0;
  std::int64_t n_samples = 0;
  std::int64_t n_exceed = 0;
  std::int64_t n_nonfinite = 0;
};

DivergenceReport divergence_from_records(double nu1, double h, double T,
                                         const std::vector<LevelRecord>& records);

/// Fraction of coupled paths with |Yf_T - Yc_T| >= nu1 |ln h|. Non-finite paths
/// count as exceedances.
template <int D>
DivergenceReport divergence_probability(const Preset<D>& problem, double spring, double h, double T,
                                        double nu1, std::int64_t n_samples, std::uint64_t seed,
                                        unsigned threads = 0, Scheme scheme = Scheme::ito_taylor_15) {
  if (!(nu1 > 0.0)) throw PreconditionError("divergence_probability: nu1 must be positive");
  if (!(h > 0.0 && h < 1.0)) throw PreconditionError("divergence_probability: h must lie in (0, 1)");
  LevelSampling s;
  s.level = 1;
  s.h = h;
  s.T = T;
  s.spring = spring;
  s.scheme = scheme;
  s.seed = seed;
  s.n_samples = n_samples;
  s.threads = threads;
  return divergence_from_records(nu1, h, T, sample_level<D>(problem, s));
}

struct VarianceVsT {
  std::vector<double> T;
  std::vector<double> variance;
  std::vector<double> variance_stderr;
  double slope = 0.0;
  double intercept = 0.0;
  double linear_r_squared = 0.0;
  double quadratic_r_squared = 0.0;
  double quadratic_gain = 0.0;  // extra explained fraction of the quadratic fit
  bool linear = false;          // R^2 >= 0.9 and gain < 0.1
};

VarianceVsT fit_variance_vs_T(std::vector<double> T, std::vector<double> variance,
                              std::vector<double> variance_stderr);

/// Level-1 variance (fine step h) as a function of the terminal time.
template <int D>
VarianceVsT variance_vs_T_study(const Preset<D>& problem, double spring, double h,
                                const std::vector<double>& T_list, std::int64_t n_samples,
                                std::uint64_t seed, unsigned threads = 0,
                                Scheme scheme = Scheme::ito_taylor_15) {
  if (T_list.size() < 3) throw PreconditionError("variance_vs_T_study: needs at least 3 terminal times");
  std::vector<double> v, se;
  for (double T : T_list) {
    LevelSampling s;
    s.level = 1;
    s.h = h;
    s.T = T;
    s.spring = spring;
    s.scheme = scheme;
    s.seed = seed;
    s.n_samples = n_samples;
    s.threads = threads;
    const auto st = summarize_records(1, h, sample_level<D>(problem, s));
    v.push_back(st.variance);
    se.push_back(st.variance_stderr);
  }
  return fit_variance_vs_T(T_list, std::move(v), std::move(se));
}

struct CostPoint {
  double epsilon = 0.0;
  double total_cost = 0.0;
  double estimate = 0.0;
  double error = 0.0;       // estimate - reference
  double normalized = 0.0;  // total_cost * eps^2 / |ln eps|^2
  double T = 0.0;
  double h0 = 0.0;
  int L = 0;
};

struct CostStudy {
  std::vector<CostPoint> points;
  bool non_increasing = true;  // normalized cost across decreasing eps
  double tolerance = 0.0;
};

/// `tolerance` is the relative slack allowed between consecutive normalized costs.
CostStudy assess_cost(std::vector<CostPoint> points, double tolerance = 0.0);

template <int D>
CostStudy cost_vs_epsilon_study(const Preset<D>& problem, const std::vector<double>& eps_list,
                                const MlmcConfig& base, double tolerance = 0.0) {
  if (eps_list.empty()) throw PreconditionError("cost_vs_epsilon_study: empty epsilon list");
  for (std::size_t i = 1; i < eps_list.size(); ++i) {
    if (!(eps_list[i] < eps_list[i - 1]))
      throw PreconditionError("cost_vs_epsilon_study: epsilon list must be decreasing");
  }
  std::vector<CostPoint> pts;
  for (double eps : eps_list) {
    MlmcConfig cfg = base;
    cfg.epsilon = eps;
    const auto r = run_mlmc<D>(problem, cfg);
    CostPoint p;
    p.epsilon = eps;
    p.total_cost = r.total_cost;
    p.estimate = r.estimate;
    p.error = r.estimate - problem.reference_value;
    p.T = r.plan.T;
    p.h0 = r.plan.h0;
    p.L = r.plan.L;
    pts.push_back(p);
  }
  return assess_cost(std::move(pts), tolerance);
}

struct ErgodicFit {
  double mu_star = 0.0;
  double lambda_star = 0.0;
  std::vector<double> T;
  std::vector<double> mean;
  std::vector<double> stderr_;
  std::vector<double> residual;  // |mean - reference|
  std::size_t window = 0;        // points used in the fit (prefix of T)
  std::vector<std::string> notes;
};

/// Log-linear fit of |E Phi(X_T) - reference| against T. Points after the
/// first residual at or below twice its standard error are dropped.
ErgodicFit fit_ergodic_curve(std::vector<double> T, std::vector<double> mean,
                             std::vector<double> stderrs, double reference);

template <int D>
ErgodicFit fit_ergodic_rate(const Preset<D>& problem, double h, std::vector<double> T_grid,
                            std::int64_t n_samples, std::uint64_t seed, unsigned threads = 0,
                            Scheme scheme = Scheme::ito_taylor_15) {
  if (T_grid.size() < 4) throw PreconditionError("fit_ergodic_rate: needs at least 4 terminal times");
  if (!(h > 0.0)) throw PreconditionError("fit_ergodic_rate: h must be positive");
  std::sort(T_grid.begin(), T_grid.end());
  std::vector<std::int64_t> marks;
  for (double T : T_grid) marks.push_back(steps_for(T, h, false));
  const std::size_t k = marks.size();
  // One path per sample, read off at every grid time.
  std::vector<double> values(static_cast<std::size_t>(n_samples) * k, std::nan(""));
  parallel_for(n_samples, threads, [&](std::int64_t i) {
    NoiseStream stream(seed, 0, static_cast<std::uint64_t>(i));
    UncoupledState<D> s{problem.x0, 0, h};
    std::size_t next = 0;
    try {
      for (std::int64_t n = 1; n <= marks.back(); ++n) {
        s = step_uncoupled_fine<D>(problem.model, s, next_increment<D>(stream, h), scheme);
        while (next < k && marks[next] == n) {
          values[static_cast<std::size_t>(i) * k + next] = problem.payoff.eval(s.x);
          ++next;
        }
      }
    } catch (const DivergenceError&) {
    }
  });
  std::vector<double> mean, se;
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<double> col;
    col.reserve(static_cast<std::size_t>(n_samples));
    for (std::int64_t i = 0; i < n_samples; ++i) {
      const double v = values[static_cast<std::size_t>(i) * k + j];
      if (std::isfinite(v)) col.push_back(v);
    }
    const auto m = stats::sample_moments(col);
    mean.push_back(m.mean);
    se.push_back(m.mean_stderr);
  }
  return fit_ergodic_curve(std::move(T_grid), std::move(mean), std::move(se), problem.reference_value);
}

}  // namespace ergodic_mlmc
