#pragma once

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ergodic_mlmc {

/// Time-stepping scheme for both the coupled and uncoupled paths.
///
/// `euler_maruyama` drops the Da dZ and generator terms; for additive noise it
/// coincides with Milstein and serves as the lower-order baseline.
enum class Scheme { ito_taylor_15, euler_maruyama };

template <int D>
using Vec = Eigen::Matrix<double, D, 1>;

template <int D>
using Mat = Eigen::Matrix<double, D, D>;

// hessian[i](j, k) = d^2 a_i / dx_j dx_k
template <int D>
using Tensor3 = std::array<Mat<D>, D>;

/// Invalid user input: unknown preset, malformed or inconsistent configuration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A call whose documented precondition does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

/// Non-finite value while evaluating a drift or one of its derivatives.
class EvaluationError : public std::runtime_error {
 public:
  explicit EvaluationError(const std::string& what) : std::runtime_error(what) {}
};

/// A trajectory (state or log-weight) became non-finite.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, std::int64_t step)
      : std::runtime_error(what), step_(step) {}

  std::int64_t step() const noexcept { return step_; }

 private:
  std::int64_t step_;
};

/// A run finished but its output cannot be trusted (unhealthy level, failed fit).
class NumericalFailure : public std::runtime_error {
 public:
  explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

template <int D>
bool all_finite(const Vec<D>& v) {
  for (int i = 0; i < D; ++i) {
    if (!std::isfinite(v[i])) return false;
  }
  return true;
}

}  // namespace ergodic_mlmc
