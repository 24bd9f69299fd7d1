#include "ergodic_mlmc/sampling.hpp"

#include <algorithm>

namespace ergodic_mlmc {

std::int64_t steps_for(double T, double h, bool require_even) {
  if (!(T > 0.0) || !(h > 0.0)) throw ConfigError("terminal time T and step h must be positive");
  const double ratio = T / h;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio) || rounded < 1.0) {
    std::ostringstream msg;
    msg << "T / h must be a positive integer (T=" << T << ", h=" << h << ", T/h=" << ratio << ")";
    throw ConfigError(msg.str());
  }
  const auto n = static_cast<std::int64_t>(rounded);
  if (require_even && n % 2 != 0) {
    std::ostringstream msg;
    msg << "parity rule violated: T / h must be even so fine steps pair into coarse steps (T=" << T
        << ", h=" << h << ", T/h=" << n << ")";
    throw ConfigError(msg.str());
  }
  return n;
}

std::vector<double> finite_deltas(const std::vector<LevelRecord>& records) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    if (!r.diverged) out.push_back(r.delta);
  }
  return out;
}

std::int64_t count_divergent(const std::vector<LevelRecord>& records) {
  return std::count_if(records.begin(), records.end(), [](const LevelRecord& r) { return r.diverged; });
}

}  // namespace ergodic_mlmc
