#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ergodic_mlmc::stats {

/// Pairwise (cascade) summation; the result depends only on the input order.
double pairwise_sum(std::span<const double> values);

struct SampleMoments {
  std::int64_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased, 0 when n < 2
  double kurtosis = 1.0;  // m4 / m2^2; 1 for a degenerate (constant) sample
  double mean_abs = 0.0;
  double mean_abs_stderr = 0.0;
  double mean_stderr = 0.0;
  double variance_stderr = 0.0;  // approx var * sqrt((kurtosis - 1) / n)
};

SampleMoments sample_moments(std::span<const double> values);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double slope_ci_lo = 0.0;
  double slope_ci_hi = 0.0;
  double r_squared = 0.0;
  int n_points = 0;
};

/// Weighted least squares y = intercept + slope * x with weights w (1 / sigma^2).
/// The slope interval uses the residual-scaled covariance and a Student t
/// quantile with n - 2 degrees of freedom. Needs at least 3 points.
LinearFit weighted_linear_fit(std::span<const double> x, std::span<const double> y,
                              std::span<const double> w, double confidence = 0.95);

/// Ordinary least squares polynomial fit of given degree; returns R^2.
double polynomial_r_squared(std::span<const double> x, std::span<const double> y, int degree);

/// Spearman rank correlation (average ranks for ties).
double spearman_rho(std::span<const double> x, std::span<const double> y);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value
/// (Stephens' effective-size correction).
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace ergodic_mlmc::stats
