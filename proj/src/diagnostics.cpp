#include "ergodic_mlmc/diagnostics.hpp"

#include <numbers>
#include <sstream>

namespace ergodic_mlmc {

LevelStats summarize_records(int level, double h, const std::vector<LevelRecord>& records) {
  LevelStats st;
  st.level = level;
  st.h = h;
  st.n_divergent = count_divergent(records);
  const auto m = stats::sample_moments(finite_deltas(records));
  st.n_samples = m.n;
  st.mean = m.mean;
  st.mean_stderr = m.mean_stderr;
  st.mean_abs = m.mean_abs;
  st.mean_abs_stderr = m.mean_abs_stderr;
  st.variance = m.variance;
  st.variance_stderr = m.variance_stderr;
  st.kurtosis = m.kurtosis;
  for (const auto& r : records) {
    if (!r.diverged) st.max_gap = std::max(st.max_gap, r.gap);
  }
  return st;
}

RateStudy fit_rate(const std::vector<LevelStats>& sweep, RateQuantity quantity, double max_rel_stderr,
                   double confidence) {
  RateStudy study;
  study.quantity = quantity;
  std::vector<double> x, y, w;
  for (const auto& st : sweep) {
    const double v = quantity == RateQuantity::strong_error ? st.mean_abs : st.variance;
    const double se = quantity == RateQuantity::strong_error ? st.mean_abs_stderr : st.variance_stderr;
    std::ostringstream note;
    if (!(v > 0.0) || !std::isfinite(v)) {
      note << "level " << st.level << " excluded: value " << v << " is not positive";
    } else if (se > max_rel_stderr * v) {
      note << "level " << st.level << " excluded: stderr " << se << " exceeds " << max_rel_stderr * 100.0
           << "% of value " << v;
    }
    if (!note.str().empty()) {
      study.excluded_levels.push_back(st.level);
      study.notes.push_back(note.str());
      continue;
    }
    study.levels.push_back(st.level);
    study.values.push_back(v);
    study.stderrs.push_back(se);
    x.push_back(st.level);
    y.push_back(std::log2(v));
    // Delta method: sd(log2 v) = se / (v ln 2).
    const double sd = se > 0.0 ? se / (v * std::numbers::ln2) : 0.0;
    w.push_back(sd > 0.0 ? 1.0 / (sd * sd) : 1.0);
  }
  if (x.size() < 3) {
    study.degenerate = true;
    study.notes.push_back("fewer than 3 usable levels; no slope fitted");
    return study;
  }
  const auto fit = stats::weighted_linear_fit(x, y, w, confidence);
  study.fitted_slope = fit.slope;
  study.slope_stderr = fit.slope_stderr;
  study.slope_ci_lo = fit.slope_ci_lo;
  study.slope_ci_hi = fit.slope_ci_hi;
  study.r_squared = fit.r_squared;
  if (!std::isfinite(fit.slope)) {
    study.degenerate = true;
    study.notes.push_back("slope fit is not finite");
  }
  return study;
}

KurtosisStudy kurtosis_from_sweep(const std::vector<LevelStats>& sweep) {
  KurtosisStudy out;
  std::vector<double> lv;
  for (const auto& st : sweep) {
    out.levels.push_back(st.level);
    out.kurtosis.push_back(st.kurtosis);
    lv.push_back(st.level);
  }
  if (lv.size() >= 2) out.spearman_rho = stats::spearman_rho(lv, out.kurtosis);
  out.increasing = out.spearman_rho > 0.0;
  return out;
}

DivergenceReport divergence_from_records(double nu1, double h, double T,
                                         const std::vector<LevelRecord>& records) {
  DivergenceReport rep;
  rep.nu1 = nu1;
  rep.h = h;
  rep.T = T;
  rep.threshold = nu1 * std::abs(std::log(h));
  rep.n_samples = static_cast<std::int64_t>(records.size());
  for (const auto& r : records) {
    if (r.diverged) {
      ++rep.n_nonfinite;
      ++rep.n_exceed;
      continue;
    }
    rep.max_gap = std::max(rep.max_gap, r.gap);
    if (r.gap >= rep.threshold) ++rep.n_exceed;
  }
  rep.p_hat = rep.n_samples > 0 ? static_cast<double>(rep.n_exceed) / static_cast<double>(rep.n_samples) : 0.0;
  return rep;
}

VarianceVsT fit_variance_vs_T(std::vector<double> T, std::vector<double> variance,
                              std::vector<double> variance_stderr) {
  if (T.size() < 3 || T.size() != variance.size())
    throw PreconditionError("fit_variance_vs_T: needs at least 3 matching (T, variance) points");
  VarianceVsT out;
  out.T = std::move(T);
  out.variance = std::move(variance);
  out.variance_stderr = std::move(variance_stderr);
  const std::vector<double> ones(out.T.size(), 1.0);
  const auto fit = stats::weighted_linear_fit(out.T, out.variance, ones);
  out.slope = fit.slope;
  out.intercept = fit.intercept;
  out.linear_r_squared = fit.r_squared;
  out.quadratic_r_squared = stats::polynomial_r_squared(out.T, out.variance, 2);
  out.quadratic_gain = out.quadratic_r_squared - out.linear_r_squared;
  out.linear = out.linear_r_squared >= 0.9 && out.quadratic_gain < 0.1;
  return out;
}

CostStudy assess_cost(std::vector<CostPoint> points, double tolerance) {
  CostStudy study;
  study.tolerance = tolerance;
  for (auto& p : points) {
    const double le = std::log(p.epsilon);
    p.normalized = p.total_cost * p.epsilon * p.epsilon / (le * le);
  }
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].normalized > points[i - 1].normalized * (1.0 + tolerance)) study.non_increasing = false;
  }
  study.points = std::move(points);
  return study;
}

ErgodicFit fit_ergodic_curve(std::vector<double> T, std::vector<double> mean, std::vector<double> stderrs,
                             double reference) {
  if (T.size() < 4 || T.size() != mean.size() || T.size() != stderrs.size())
    throw PreconditionError("fit_ergodic_curve: needs at least 4 matching points");
  ErgodicFit fit;
  fit.T = std::move(T);
  fit.mean = std::move(mean);
  fit.stderr_ = std::move(stderrs);
  for (double m : fit.mean) fit.residual.push_back(std::abs(m - reference));

  fit.window = fit.T.size();
  for (std::size_t j = 0; j < fit.T.size(); ++j) {
    if (fit.residual[j] <= 2.0 * fit.stderr_[j] || fit.residual[j] == 0.0) {
      fit.window = j;
      std::ostringstream note;
      note << "residual at T=" << fit.T[j] << " is within twice its standard error; fit truncated to "
           << j << " points";
      fit.notes.push_back(note.str());
      break;
    }
  }
  if (fit.window < 2) throw NumericalFailure("fit_ergodic_rate: fewer than 2 points above the noise floor");

  // Ordinary least squares on (T, ln residual).
  const std::size_t n = fit.window;
  double sx = 0.0, sy = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    sx += fit.T[j];
    sy += std::log(fit.residual[j]);
  }
  const double mx = sx / static_cast<double>(n);
  const double my = sy / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    sxx += (fit.T[j] - mx) * (fit.T[j] - mx);
    sxy += (fit.T[j] - mx) * (std::log(fit.residual[j]) - my);
  }
  if (sxx == 0.0) throw NumericalFailure("fit_ergodic_rate: terminal times in the fit window coincide");
  const double slope = sxy / sxx;
  fit.lambda_star = -slope;
  fit.mu_star = std::exp(my - slope * mx);
  if (!(fit.lambda_star > 0.0)) {
    std::ostringstream msg;
    msg << "fit_ergodic_rate: fitted decay rate " << fit.lambda_star << " is not positive";
    throw NumericalFailure(msg.str());
  }
  return fit;
}

}  // namespace ergodic_mlmc
