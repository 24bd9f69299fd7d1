#pragma once

#include "ergodic_mlmc/sampling.hpp"
#include "ergodic_mlmc/stats.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ergodic_mlmc {

enum class PayoffClass { lipschitz, discontinuous };

struct PlanOverrides {
  std::optional<double> T;
  std::optional<double> h0;
  std::optional<int> L;
  std::optional<std::vector<std::int64_t>> N;
};

struct MlmcConfig {
  double epsilon = 0.01;
  double spring = 1.0;
  double mu_star = 1.0;
  double lambda_star = 1.0;
  double c0 = 1.0;
  double c_bias = 1.0;
  PayoffClass payoff_class = PayoffClass::lipschitz;
  double xi = 0.1;
  std::uint64_t seed = 0;
  PlanOverrides overrides;
  std::int64_t pilot_samples = 1000;
  Scheme scheme = Scheme::ito_taylor_15;
  unsigned threads = 0;
  double max_divergent_fraction = 0.01;
};

/// Throws ConfigError naming the offending key.
void validate(const MlmcConfig& cfg);

struct MlmcPlan {
  double T = 0.0;
  double h0 = 0.0;
  int L = 0;
  std::vector<std::int64_t> N;
};

struct LevelEstimate {
  int level = 0;
  double h = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  double kurtosis = 1.0;
  double mean_abs = 0.0;
  double cost_per_sample = 0.0;  // fine steps: T / h_level
  std::int64_t n_samples = 0;
  std::int64_t n_divergent = 0;
  bool healthy = true;
};

/// The three MSE contributions, each targeted at epsilon^2 / 3.
struct MseBudget {
  double bias_sq = 0.0;      // 2 * (extrapolated remaining bias)^2
  double variance = 0.0;     // sum_l V_l / N_l
  double ergodic_sq = 0.0;   // 2 * (mu* exp(-lambda* T))^2
};

struct MlmcResult {
  double estimate = 0.0;
  MlmcPlan plan;
  std::vector<LevelEstimate> levels;
  std::vector<LevelEstimate> pilot;
  double total_cost = 0.0;
  MseBudget mse_budget_split;
};

/// Raised when a level exceeds the divergent-sample threshold; carries the
/// levels completed so far for the diagnostic report.
class UnhealthyLevelError : public NumericalFailure {
 public:
  UnhealthyLevelError(const std::string& what, std::vector<LevelEstimate> levels)
      : NumericalFailure(what), levels_(std::move(levels)) {}
  const std::vector<LevelEstimate>& levels() const noexcept { return levels_; }

 private:
  std::vector<LevelEstimate> levels_;
};

/// T = ceil((1/lambda*) ln(1/eps) + (1/lambda*) ln(sqrt(6) mu*)), at least 1.
double choose_terminal_time(double epsilon, double mu_star, double lambda_star);

/// min(1, c0 / sqrt(T ln T)); equals 1 at T = 1.
double h_max(double T, double c0);

/// Step size on level 0, floored to a power of two with T / h0 even.
double choose_h0(double T, double c0, PayoffClass payoff_class, double xi);

/// Number of correction levels from the bias bound, at least 1. `h0` does not
/// enter either formula (its T-scaling is folded into c_bias) and is only
/// checked for positivity.
int choose_num_levels(double epsilon, double T, double h0, PayoffClass payoff_class, double xi,
                      double c_bias);

/// N_l = ceil(3 eps^-2 (sum_k sqrt(V_k C_k)) sqrt(V_l / C_l)); levels with
/// zero variance get `zero_variance_floor`.
std::vector<std::int64_t> allocate_samples(std::span<const double> variances,
                                           std::span<const double> costs, double epsilon,
                                           std::int64_t zero_variance_floor = 1000);

/// Aggregates one level's records.
LevelEstimate summarize_level(int level, double h, double T, const std::vector<LevelRecord>& records,
                              double max_divergent_fraction);

/// Weak order of the level corrections used to extrapolate the remaining bias.
double correction_rate(PayoffClass payoff_class, double xi);

template <int D>
LevelEstimate run_level(int level, const MlmcPlan& plan, const Preset<D>& problem,
                        const MlmcConfig& cfg, std::int64_t n_samples,
                        std::int64_t first_index = 0) {
  LevelSampling s;
  s.level = level;
  s.h = std::ldexp(plan.h0, -level);
  s.T = plan.T;
  s.spring = cfg.spring;
  s.scheme = cfg.scheme;
  s.seed = cfg.seed;
  s.first_index = first_index;
  s.n_samples = n_samples;
  s.threads = cfg.threads;
  return summarize_level(level, s.h, plan.T, sample_level<D>(problem, s), cfg.max_divergent_fraction);
}

template <int D>
MlmcResult run_mlmc(const Preset<D>& problem, const MlmcConfig& cfg) {
  validate(cfg);
  MlmcResult result;
  MlmcPlan& plan = result.plan;
  plan.T = cfg.overrides.T.value_or(choose_terminal_time(cfg.epsilon, cfg.mu_star, cfg.lambda_star));
  plan.h0 = cfg.overrides.h0.value_or(choose_h0(plan.T, cfg.c0, cfg.payoff_class, cfg.xi));
  try {
    steps_for(plan.T, plan.h0, true);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("T, h0: ") + e.what());
  }
  plan.L = cfg.overrides.L.value_or(
      choose_num_levels(cfg.epsilon, plan.T, plan.h0, cfg.payoff_class, cfg.xi, cfg.c_bias));
  if (plan.L < 0) throw ConfigError("L must be >= 0");

  auto check_health = [&](const LevelEstimate& est, std::vector<LevelEstimate> so_far) {
    if (est.healthy) return;
    std::ostringstream msg;
    msg << "level " << est.level << " unhealthy: " << est.n_divergent << " of "
        << est.n_samples + est.n_divergent << " samples diverged (limit "
        << cfg.max_divergent_fraction * 100.0 << "%)";
    so_far.push_back(est);
    throw UnhealthyLevelError(msg.str(), std::move(so_far));
  };

  std::int64_t first_index = 0;
  if (cfg.overrides.N) {
    plan.N = *cfg.overrides.N;
    if (plan.N.size() != static_cast<std::size_t>(plan.L + 1))
      throw ConfigError("N must list L + 1 sample counts");
  } else {
    std::vector<double> v, c;
    for (int l = 0; l <= plan.L; ++l) {
      const auto est = run_level<D>(l, plan, problem, cfg, cfg.pilot_samples, 0);
      check_health(est, result.pilot);
      result.pilot.push_back(est);
      v.push_back(est.variance);
      c.push_back(est.cost_per_sample);
    }
    plan.N = allocate_samples(v, c, cfg.epsilon, cfg.pilot_samples);
    first_index = cfg.pilot_samples;
  }

  std::vector<double> means;
  for (int l = 0; l <= plan.L; ++l) {
    const auto est = run_level<D>(l, plan, problem, cfg, plan.N[static_cast<std::size_t>(l)], first_index);
    check_health(est, result.levels);
    result.levels.push_back(est);
    means.push_back(est.mean);
    result.total_cost += static_cast<double>(est.n_samples + est.n_divergent) * est.cost_per_sample;
    if (est.n_samples > 0)
      result.mse_budget_split.variance += est.variance / static_cast<double>(est.n_samples);
  }
  // Sequential sum in level order.
  for (double m : means) result.estimate += m;

  if (plan.L >= 1) {
    const double rate = correction_rate(cfg.payoff_class, cfg.xi);
    const double remaining = std::abs(result.levels.back().mean) / (std::exp2(rate) - 1.0);
    result.mse_budget_split.bias_sq = 2.0 * remaining * remaining;
  } else {
    result.mse_budget_split.bias_sq = std::numeric_limits<double>::quiet_NaN();
  }
  const double ergodic = cfg.mu_star * std::exp(-cfg.lambda_star * plan.T);
  result.mse_budget_split.ergodic_sq = 2.0 * ergodic * ergodic;
  return result;
}

}  // namespace ergodic_mlmc
