#include "ergodic_mlmc/mlmc.hpp"

#include <algorithm>
#include <numbers>

namespace ergodic_mlmc {

namespace {

// ceil that ignores representation error just above an integer.
std::int64_t robust_ceil(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x))) return static_cast<std::int64_t>(r);
  return static_cast<std::int64_t>(std::ceil(x));
}

void require(bool ok, const char* key, const std::string& why) {
  if (!ok) throw ConfigError(std::string(key) + ": " + why);
}

}  // namespace

void validate(const MlmcConfig& cfg) {
  require(cfg.epsilon > 0.0 && cfg.epsilon < 1.0, "epsilon", "must lie in (0, 1)");
  require(cfg.spring >= 0.0 && std::isfinite(cfg.spring), "spring", "must be a finite value >= 0");
  require(cfg.mu_star > 0.0, "mu_star", "must be positive");
  require(cfg.lambda_star > 0.0, "lambda_star", "must be positive");
  require(cfg.c0 > 0.0, "c0", "must be positive");
  require(cfg.c_bias > 0.0, "c_bias", "must be positive");
  if (cfg.payoff_class == PayoffClass::discontinuous)
    require(cfg.xi > 0.0 && cfg.xi < 1.5, "xi", "must lie in (0, 3/2) for discontinuous payoffs");
  require(cfg.pilot_samples >= 2, "pilot_samples", "must be >= 2");
  require(cfg.max_divergent_fraction >= 0.0 && cfg.max_divergent_fraction <= 1.0,
          "max_divergent_fraction", "must lie in [0, 1]");
  if (cfg.overrides.T) require(*cfg.overrides.T > 0.0, "T", "must be positive");
  if (cfg.overrides.h0) require(*cfg.overrides.h0 > 0.0, "h0", "must be positive");
  if (cfg.overrides.L) require(*cfg.overrides.L >= 0, "L", "must be >= 0");
  if (cfg.overrides.N) {
    for (auto n : *cfg.overrides.N) require(n >= 1, "N", "sample counts must be >= 1");
  }
}

double choose_terminal_time(double epsilon, double mu_star, double lambda_star) {
  if (!(epsilon > 0.0) || !(mu_star > 0.0) || !(lambda_star > 0.0))
    throw PreconditionError("choose_terminal_time: arguments must be positive");
  const double t = (std::log(1.0 / epsilon) + std::log(std::sqrt(6.0) * mu_star)) / lambda_star;
  return std::max(1.0, static_cast<double>(robust_ceil(t)));
}

double h_max(double T, double c0) {
  if (!(T >= 1.0)) throw PreconditionError("h_max: T must be >= 1");
  const double tl = T * std::log(T);
  if (tl <= 0.0) return 1.0;
  return std::min(1.0, c0 / std::sqrt(tl));
}

double choose_h0(double T, double c0, PayoffClass payoff_class, double xi) {
  if (!(T >= 1.0)) throw PreconditionError("choose_h0: T must be >= 1");
  double h = h_max(T, c0);
  if (payoff_class == PayoffClass::discontinuous) {
    if (!(xi > 0.0 && xi < 1.5)) throw PreconditionError("choose_h0: xi must lie in (0, 3/2)");
    h = std::min(h, c0 * std::pow(T, -1.0 / (1.5 - xi)));
  }
  double h0 = std::exp2(std::floor(std::log2(h)));
  for (int i = 0; i < 64; ++i) {
    const double ratio = T / h0;
    if (ratio == std::floor(ratio) && std::fmod(ratio, 2.0) == 0.0) return h0;
    h0 *= 0.5;
  }
  throw ConfigError("choose_h0: no power-of-two step makes T / h0 an even integer (T=" +
                    std::to_string(T) + ")");
}

int choose_num_levels(double epsilon, double T, double h0, PayoffClass payoff_class, double xi,
                      double c_bias) {
  if (!(epsilon > 0.0) || !(T >= 1.0) || !(h0 > 0.0) || !(c_bias > 0.0))
    throw PreconditionError("choose_num_levels: invalid arguments");
  const double bias_const = std::log2(std::sqrt(6.0) * c_bias);
  double value;
  if (payoff_class == PayoffClass::lipschitz) {
    // ln T vanishes at T = 1; use ln 2 below T = 2 to keep the bound finite.
    const double log_t = std::log(std::max(T, 2.0));
    value = (2.0 / 3.0) *
            (std::log2(std::pow(T, -0.25) * std::pow(log_t, -0.75) / epsilon) + bias_const);
  } else {
    if (!(xi > 0.0 && xi < 1.5)) throw PreconditionError("choose_num_levels: xi must lie in (0, 3/2)");
    const double k = 1.0 / (1.5 - xi);
    value = k * (std::log2(1.0 / (epsilon * std::sqrt(T))) + bias_const);
  }
  return static_cast<int>(std::max<std::int64_t>(1, robust_ceil(value)));
}

std::vector<std::int64_t> allocate_samples(std::span<const double> variances,
                                           std::span<const double> costs, double epsilon,
                                           std::int64_t zero_variance_floor) {
  if (variances.size() != costs.size() || variances.empty())
    throw PreconditionError("allocate_samples: need matching, non-empty variance and cost lists");
  if (!(epsilon > 0.0)) throw PreconditionError("allocate_samples: epsilon must be positive");
  double total = 0.0;
  for (std::size_t l = 0; l < variances.size(); ++l) {
    if (variances[l] < 0.0 || !(costs[l] > 0.0))
      throw PreconditionError("allocate_samples: variances must be >= 0 and costs > 0");
    total += std::sqrt(variances[l] * costs[l]);
  }
  std::vector<std::int64_t> n(variances.size());
  const double scale = 3.0 / (epsilon * epsilon) * total;
  for (std::size_t l = 0; l < variances.size(); ++l) {
    n[l] = variances[l] == 0.0 ? zero_variance_floor
                               : std::max<std::int64_t>(1, robust_ceil(scale * std::sqrt(variances[l] / costs[l])));
  }
  return n;
}

LevelEstimate summarize_level(int level, double h, double T, const std::vector<LevelRecord>& records,
                              double max_divergent_fraction) {
  LevelEstimate est;
  est.level = level;
  est.h = h;
  est.cost_per_sample = T / h;
  est.n_divergent = count_divergent(records);
  const auto deltas = finite_deltas(records);
  const auto m = stats::sample_moments(deltas);
  est.n_samples = m.n;
  est.mean = m.mean;
  est.variance = m.variance;
  est.kurtosis = m.kurtosis;
  est.mean_abs = m.mean_abs;
  const double total = static_cast<double>(records.size());
  est.healthy = total == 0.0 || static_cast<double>(est.n_divergent) <= max_divergent_fraction * total;
  return est;
}

double correction_rate(PayoffClass payoff_class, double xi) {
  return payoff_class == PayoffClass::lipschitz ? 1.5 : 1.5 - xi;
}

}  // namespace ergodic_mlmc
