#include "ergodic_mlmc/increments.hpp"

#include "ergodic_mlmc/stats.hpp"

#include <vector>

namespace ergodic_mlmc {

MomentAuditReport moment_audit(double h, int d, std::int64_t n_samples, std::uint64_t seed) {
  if (!(h > 0.0)) throw PreconditionError("moment_audit: h must be positive");
  if (d < 1) throw PreconditionError("moment_audit: d must be >= 1");
  if (n_samples < 10000) throw PreconditionError("moment_audit: need n_samples >= 10^4");

  const auto n = static_cast<std::size_t>(n_samples);
  std::vector<double> ww(n), zz(n), wz(n);
  const double sqrt_h = std::sqrt(h);
  for (std::size_t i = 0; i < n; ++i) {
    const NoiseStream stream(seed, 0, i);
    double sww = 0.0, szz = 0.0, swz = 0.0;
    for (int k = 0; k < d; ++k) {
      const auto g = stream.standard_normal_pair(0, static_cast<std::uint32_t>(k));
      const double dw = sqrt_h * g[0];
      const double dz = 0.5 * h * (dw + kInvSqrt3 * sqrt_h * g[1]);
      sww += dw * dw;
      szz += dz * dz;
      swz += dw * dz;
    }
    ww[i] = sww;
    zz[i] = szz;
    wz[i] = swz;
  }

  MomentAuditReport report;
  report.h = h;
  report.d = d;
  report.n_samples = n_samples;
  const double dd = static_cast<double>(d);
  const std::array<double, 3> targets{dd * h, dd * h * h * h / 3.0, dd * h * h / 2.0};
  const std::array<const char*, 3> names{"E|dW|^2", "E|dZ|^2", "E<dW,dZ>"};
  const std::array<const std::vector<double>*, 3> data{&ww, &zz, &wz};
  for (int q = 0; q < 3; ++q) {
    const auto m = stats::sample_moments(*data[q]);
    MomentCheck& c = report.checks[q];
    c.quantity = names[q];
    c.target = targets[q];
    c.estimate = m.mean;
    c.stderr_ = m.mean_stderr;
    c.z = m.mean_stderr > 0.0 ? (m.mean - c.target) / m.mean_stderr : 0.0;
  }
  return report;
}

}  // namespace ergodic_mlmc
