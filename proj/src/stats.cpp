#include "ergodic_mlmc/stats.hpp"

#include "ergodic_mlmc/types.hpp"

#include <Eigen/Dense>
#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ergodic_mlmc::stats {

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kBlock = 64;
  if (values.size() <= kBlock) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

SampleMoments sample_moments(std::span<const double> values) {
  SampleMoments m;
  m.n = static_cast<std::int64_t>(values.size());
  if (values.empty()) return m;
  const double n = static_cast<double>(values.size());
  m.mean = pairwise_sum(values) / n;

  std::vector<double> buf(values.size());
  auto central_power_mean = [&](auto&& fn) {
    std::transform(values.begin(), values.end(), buf.begin(), fn);
    return pairwise_sum(buf) / n;
  };
  const double mu = m.mean;
  const double m2 = central_power_mean([mu](double v) { return (v - mu) * (v - mu); });
  const double m4 = central_power_mean([mu](double v) {
    const double d2 = (v - mu) * (v - mu);
    return d2 * d2;
  });
  m.mean_abs = central_power_mean([](double v) { return std::abs(v); });
  const double abs_sq = central_power_mean([](double v) { return v * v; });

  if (values.size() >= 2) {
    m.variance = m2 * n / (n - 1.0);
    m.mean_stderr = std::sqrt(m.variance / n);
    const double abs_var = std::max(0.0, abs_sq - m.mean_abs * m.mean_abs) * n / (n - 1.0);
    m.mean_abs_stderr = std::sqrt(abs_var / n);
  }
  m.kurtosis = m2 > 0.0 ? m4 / (m2 * m2) : 1.0;
  m.variance_stderr = m.variance * std::sqrt(std::max(0.0, m.kurtosis - 1.0) / n);
  return m;
}

LinearFit weighted_linear_fit(std::span<const double> x, std::span<const double> y,
                              std::span<const double> w, double confidence) {
  if (x.size() != y.size() || x.size() != w.size())
    throw PreconditionError("weighted_linear_fit: size mismatch");
  if (x.size() < 3) throw PreconditionError("weighted_linear_fit: need at least 3 points");

  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(w[i] > 0.0) || !std::isfinite(w[i]))
      throw PreconditionError("weighted_linear_fit: weights must be positive and finite");
    sw += w[i];
    sx += w[i] * x[i];
    sy += w[i] * y[i];
  }
  const double xbar = sx / sw;
  const double ybar = sy / sw;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += w[i] * (x[i] - xbar) * (x[i] - xbar);
    sxy += w[i] * (x[i] - xbar) * (y[i] - ybar);
    syy += w[i] * (y[i] - ybar) * (y[i] - ybar);
  }
  if (!(sxx > 0.0)) throw PreconditionError("weighted_linear_fit: x values are all equal");

  LinearFit fit;
  fit.n_points = static_cast<int>(x.size());
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    rss += w[i] * r * r;
  }
  const double dof = static_cast<double>(x.size()) - 2.0;
  fit.slope_stderr = std::sqrt(rss / dof / sxx);
  fit.r_squared = syy > 0.0 ? 1.0 - rss / syy : 1.0;
  const boost::math::students_t dist(dof);
  const double t = boost::math::quantile(dist, 0.5 + 0.5 * confidence);
  fit.slope_ci_lo = fit.slope - t * fit.slope_stderr;
  fit.slope_ci_hi = fit.slope + t * fit.slope_stderr;
  return fit;
}

double polynomial_r_squared(std::span<const double> x, std::span<const double> y, int degree) {
  if (x.size() != y.size()) throw PreconditionError("polynomial_r_squared: size mismatch");
  const auto n = static_cast<Eigen::Index>(x.size());
  if (n < degree + 1) throw PreconditionError("polynomial_r_squared: too few points for degree");
  Eigen::MatrixXd a(n, degree + 1);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double p = 1.0;
    for (int k = 0; k <= degree; ++k) {
      a(i, k) = p;
      p *= x[static_cast<std::size_t>(i)];
    }
    b[i] = y[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd coef = a.colPivHouseholderQr().solve(b);
  const double rss = (a * coef - b).squaredNorm();
  const double tss = (b.array() - b.mean()).matrix().squaredNorm();
  return tss > 0.0 ? 1.0 - rss / tss : 1.0;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman_rho(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw PreconditionError("spearman_rho: need two equal-length series of length >= 2");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw PreconditionError("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  KsResult r;
  r.statistic = d;
  const double ne = std::sqrt(na * nb / (na + nb));
  const double lambda = (ne + 0.12 + 0.11 / ne) * d;
  // Q_KS(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2)
  if (lambda < 0.2) {
    r.p_value = 1.0;
    return r;
  }
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-12 * std::abs(sum)) break;
    sign = -sign;
  }
  r.p_value = std::clamp(2.0 * sum, 0.0, 1.0);
  return r;
}

}  // namespace ergodic_mlmc::stats
