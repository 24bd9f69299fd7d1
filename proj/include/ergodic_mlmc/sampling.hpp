#pragma once

#include "ergodic_mlmc/integrator.hpp"
#include "ergodic_mlmc/parallel.hpp"
#include "ergodic_mlmc/presets.hpp"

#include <cmath>
#include <cstdint>
#include <sstream>
#include <vector>

namespace ergodic_mlmc {

/// Outcome of one Monte Carlo sample on one level.
///
/// Level 0: delta = Phi(X_T) of the spring-free path, weights 1, gap 0.
/// Level >= 1: delta = Phi(Yf_T) Rf_T - Phi(Yc_T) Rc_T of the coupled pair.
struct LevelRecord {
  double delta = 0.0;
  double fine_payoff = 0.0;
  double coarse_payoff = 0.0;
  double rf = 1.0;
  double rc = 1.0;
  double gap = 0.0;  // |Yf_T - Yc_T|
  bool diverged = false;
};

/// Number of fine steps T / h; throws ConfigError unless it is a (even, when
/// `require_even`) positive integer.
std::int64_t steps_for(double T, double h, bool require_even);

struct LevelSampling {
  int level = 0;
  double h = 0.0;  // fine step on this level
  double T = 0.0;
  double spring = 1.0;
  Scheme scheme = Scheme::ito_taylor_15;
  std::uint64_t seed = 0;
  std::int64_t first_index = 0;  // sample_index of the first sample
  std::int64_t n_samples = 0;
  unsigned threads = 0;
};

template <int D>
std::vector<LevelRecord> sample_level(const Preset<D>& problem, const LevelSampling& cfg) {
  if (cfg.level < 0) throw PreconditionError("sample_level: level must be >= 0");
  const std::int64_t n_steps = steps_for(cfg.T, cfg.h, cfg.level > 0);
  std::vector<LevelRecord> out(static_cast<std::size_t>(std::max<std::int64_t>(cfg.n_samples, 0)));
  parallel_for(cfg.n_samples, cfg.threads, [&](std::int64_t i) {
    const NoiseStream stream(cfg.seed, static_cast<std::uint32_t>(cfg.level),
                             static_cast<std::uint64_t>(cfg.first_index + i));
    LevelRecord& r = out[static_cast<std::size_t>(i)];
    if (cfg.level == 0) {
      const auto path = simulate_uncoupled_fine<D>(problem.model, problem.x0, cfg.h, n_steps, stream, cfg.scheme);
      r.diverged = path.diverged;
      if (!r.diverged) {
        r.fine_payoff = problem.payoff.eval(path.x);
        r.delta = r.fine_payoff;
      }
      return;
    }
    const auto path =
        simulate_coupled<D>(problem.model, problem.x0, cfg.spring, cfg.h, n_steps, stream, cfg.scheme);
    r.diverged = path.diverged;
    if (r.diverged) return;
    const auto& s = path.state;
    r.rf = std::exp(s.log_rf);
    r.rc = std::exp(s.log_rc);
    r.fine_payoff = problem.payoff.eval(s.yf);
    r.coarse_payoff = problem.payoff.eval(s.yc);
    r.delta = r.fine_payoff * r.rf - r.coarse_payoff * r.rc;
    r.gap = (s.yf - s.yc).norm();
    if (!std::isfinite(r.delta)) r.diverged = true;
  });
  return out;
}

/// Deltas of the non-divergent records, in sample order.
std::vector<double> finite_deltas(const std::vector<LevelRecord>& records);
std::int64_t count_divergent(const std::vector<LevelRecord>& records);

}  // namespace ergodic_mlmc
