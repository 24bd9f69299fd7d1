#pragma once

#include "ergodic_mlmc/sampling.hpp"
#include "ergodic_mlmc/stats.hpp"

#include <cmath>
#include <cstdint>

namespace ergodic_mlmc {

struct MartingaleAudit {
  double mean_rf = 1.0;
  double stderr_rf = 0.0;
  double mean_rc = 1.0;
  double stderr_rc = 0.0;
  double second_moment_rf = 1.0;  // E[(R_T^f)^2]
  std::int64_t n_samples = 0;
  std::int64_t n_divergent = 0;

  double z_rf() const { return stderr_rf > 0.0 ? (mean_rf - 1.0) / stderr_rf : (mean_rf == 1.0 ? 0.0 : INFINITY); }
  double z_rc() const { return stderr_rc > 0.0 ? (mean_rc - 1.0) / stderr_rc : (mean_rc == 1.0 ? 0.0 : INFINITY); }
  bool within(double z_max) const { return std::abs(z_rf()) <= z_max && std::abs(z_rc()) <= z_max; }
};

/// Sample means of the terminal fine and coarse weights over independent
/// coupled paths with fine step h. Divergent paths are excluded and counted.
template <int D>
MartingaleAudit martingale_audit(const Preset<D>& problem, double spring, double h, double T,
                                 std::int64_t n_samples, std::uint64_t seed, unsigned threads = 0,
                                 Scheme scheme = Scheme::ito_taylor_15) {
  LevelSampling s;
  s.level = 1;
  s.h = h;
  s.T = T;
  s.spring = spring;
  s.scheme = scheme;
  s.seed = seed;
  s.n_samples = n_samples;
  s.threads = threads;
  const auto records = sample_level<D>(problem, s);
  std::vector<double> rf, rc, rf2;
  rf.reserve(records.size());
  rc.reserve(records.size());
  rf2.reserve(records.size());
  MartingaleAudit out;
  for (const auto& r : records) {
    if (r.diverged || !std::isfinite(r.rf) || !std::isfinite(r.rc)) {
      ++out.n_divergent;
      continue;
    }
    rf.push_back(r.rf);
    rc.push_back(r.rc);
    rf2.push_back(r.rf * r.rf);
  }
  const auto mf = stats::sample_moments(rf);
  const auto mc = stats::sample_moments(rc);
  out.n_samples = mf.n;
  out.mean_rf = mf.mean;
  out.stderr_rf = mf.mean_stderr;
  out.mean_rc = mc.mean;
  out.stderr_rc = mc.mean_stderr;
  out.second_moment_rf = stats::sample_moments(rf2).mean;
  return out;
}

}  // namespace ergodic_mlmc
