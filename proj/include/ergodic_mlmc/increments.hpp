#pragma once

#include "ergodic_mlmc/philox.hpp"
#include "ergodic_mlmc/types.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <string>

namespace ergodic_mlmc {

namespace detail {

// Wichura's AS241 (PPND16) rational approximations, about 1e-16 relative.
inline double ppnd16(double p) noexcept {
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    const double num =
        (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
              6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
            1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
          1.3314166789178437745e+2) * r + 3.3871328727963666080e+0);
    const double den =
        (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
              3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
            5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
          4.2313330701600911252e+1) * r + 1.0);
    return q * num / den;
  }

  double r = std::sqrt(-std::log(q < 0.0 ? p : 1.0 - p));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    const double num =
        (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
              2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
            3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
          4.63033784615654529590e+0) * r + 1.42343711074968357734e+0);
    const double den =
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
              1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
            6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
          2.05319162663775882187e+0) * r + 1.0);
    value = num / den;
  } else {
    r -= 5.0;
    const double num =
        (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
              1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
            2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
          5.46378491116411436990e+0) * r + 6.65790464350110377720e+0);
    const double den =
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
              1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
            1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
          5.99832206555887937690e-1) * r + 1.0);
    value = num / den;
  }
  return q < 0.0 ? -value : value;
}

}  // namespace detail

/// Inverse of the standard normal CDF (Wichura, AS241 PPND16), |rel err| ~ 1e-16.
inline double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) throw PreconditionError("inverse_normal_cdf: p must lie in (0, 1)");
  return detail::ppnd16(p);
}

/// Replayable Gaussian source for one Monte Carlo sample on one level.
///
/// The Philox key is derived from (seed, level); the counter words carry
/// (step, component, sample_index). One Philox block per (step, component)
/// yields the two raw standard normals behind dV1 and dV2, so any worker can
/// regenerate any step of any sample without touching shared state.
class NoiseStream {
 public:
  NoiseStream(std::uint64_t seed, std::uint32_t level, std::uint64_t sample_index)
      : seed_(seed), level_(level), sample_index_(sample_index) {
    const std::uint64_t k = splitmix64(seed ^ splitmix64(0x6C6576656Cull + level));
    key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint32_t level() const noexcept { return level_; }
  std::uint64_t sample_index() const noexcept { return sample_index_; }
  std::uint64_t counter() const noexcept { return counter_; }
  void seek(std::uint64_t step) noexcept { counter_ = step; }
  void advance() noexcept { ++counter_; }

  /// Two independent N(0, 1) draws for (step, component). Pure.
  std::array<double, 2> standard_normal_pair(std::uint64_t step, std::uint32_t component) const {
    const Philox4x32::Counter ctr{static_cast<std::uint32_t>(step), component,
                                  static_cast<std::uint32_t>(sample_index_),
                                  static_cast<std::uint32_t>(sample_index_ >> 32)};
    const auto w = Philox4x32::generate(ctr, key_);
    return {detail::ppnd16(to_unit(w[0], w[1])), detail::ppnd16(to_unit(w[2], w[3]))};
  }

 private:
  // 53 random bits mapped to the open interval (0, 1).
  static double to_unit(std::uint32_t hi, std::uint32_t lo) noexcept {
    const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

  std::uint64_t seed_;
  std::uint32_t level_;
  std::uint64_t sample_index_;
  std::uint64_t counter_ = 0;
  Philox4x32::Key key_{};
};

/// One step's correlated (dW, dZ) together with the raw Gaussians dV1, dV2 ~ N(0, h I).
template <int D>
struct IncrementPair {
  Vec<D> dW;
  Vec<D> dZ;
  Vec<D> dV1;
  Vec<D> dV2;
  double h = 0.0;
};

inline const double kInvSqrt3 = 1.0 / std::sqrt(3.0);

/// dW = dV1, dZ = (h / 2)(dV1 + dV2 / sqrt(3)).
template <int D>
IncrementPair<D> make_increment(const Vec<D>& dV1, const Vec<D>& dV2, double h) {
  IncrementPair<D> inc;
  inc.dV1 = dV1;
  inc.dV2 = dV2;
  inc.dW = dV1;
  inc.dZ = (0.5 * h) * (dV1 + kInvSqrt3 * dV2);
  inc.h = h;
  return inc;
}

/// Draws the increment for the stream's current step and advances the counter.
template <int D>
IncrementPair<D> next_increment(NoiseStream& stream, double h) {
  if (!(h > 0.0)) throw PreconditionError("next_increment: step size must be positive");
  const double sqrt_h = std::sqrt(h);
  Vec<D> v1;
  Vec<D> v2;
  for (int k = 0; k < D; ++k) {
    const auto z = stream.standard_normal_pair(stream.counter(), static_cast<std::uint32_t>(k));
    v1[k] = sqrt_h * z[0];
    v2[k] = sqrt_h * z[1];
  }
  stream.advance();
  return make_increment<D>(v1, v2, h);
}

struct MomentCheck {
  std::string quantity;
  double target = 0.0;
  double estimate = 0.0;
  double stderr_ = 0.0;
  double z = 0.0;
};

/// Sample estimates of E|dW|^2, E|dZ|^2, E<dW, dZ> against d h, d h^3 / 3, d h^2 / 2.
struct MomentAuditReport {
  double h = 0.0;
  int d = 0;
  std::int64_t n_samples = 0;
  std::array<MomentCheck, 3> checks;
};

MomentAuditReport moment_audit(double h, int d, std::int64_t n_samples, std::uint64_t seed);

}  // namespace ergodic_mlmc
