#pragma once

#include "ergodic_mlmc/types.hpp"

#include <cmath>

namespace ergodic_mlmc {

enum class SpringSide { fine, coarse };

/// Spring pull on one trajectory toward the other.
/// fine: S (yc - yf); coarse: S (yf - yc).
template <int D>
struct SpringTerm {
  Vec<D> value;
  SpringSide side = SpringSide::fine;
};

template <int D>
SpringTerm<D> fine_spring(double spring, const Vec<D>& yf, const Vec<D>& yc) {
  return {spring * (yc - yf), SpringSide::fine};
}

template <int D>
SpringTerm<D> coarse_spring(double spring, const Vec<D>& yf, const Vec<D>& yc) {
  return {spring * (yf - yc), SpringSide::coarse};
}

inline const double kSqrt3 = std::sqrt(3.0);

/// Per-step log Radon-Nikodym factor of the fine path:
///   -<Sf, dV1> + sqrt(3) <Sf, dV2> - 2 h |Sf|^2
/// This is the Gaussian likelihood ratio for the shift dV1 -> dV1 + Sf h,
/// dV2 -> dV2 - sqrt(3) Sf h, which removes the spring while leaving dZ unchanged.
template <int D>
double log_rn_fine_step(const SpringTerm<D>& sf, const Vec<D>& dV1, const Vec<D>& dV2, double h,
                        Scheme scheme = Scheme::ito_taylor_15) {
  if (sf.side != SpringSide::fine) throw PreconditionError("log_rn_fine_step: expected a fine spring");
  const Vec<D>& s = sf.value;
  if (scheme == Scheme::euler_maruyama) return -s.dot(dV1) - 0.5 * h * s.squaredNorm();
  return -s.dot(dV1) + kSqrt3 * s.dot(dV2) - 2.0 * h * s.squaredNorm();
}

/// Per-double-step log Radon-Nikodym factor of the coarse path:
///   -<Sc, dV1_0 + dV1_1> + 2 sqrt(3) <Sc, dV2_0 + dV2_1> - 13 h |Sc|^2
/// (the shift Sc h on both dV1 and -2 sqrt(3) Sc h on both dV2 of the pair).
template <int D>
double log_rn_coarse_step(const SpringTerm<D>& sc, const Vec<D>& dV1_0, const Vec<D>& dV1_1,
                          const Vec<D>& dV2_0, const Vec<D>& dV2_1, double h,
                          Scheme scheme = Scheme::ito_taylor_15) {
  if (sc.side != SpringSide::coarse)
    throw PreconditionError("log_rn_coarse_step: expected a coarse spring");
  const Vec<D>& s = sc.value;
  if (scheme == Scheme::euler_maruyama) return -s.dot(dV1_0 + dV1_1) - h * s.squaredNorm();
  return -s.dot(dV1_0 + dV1_1) + 2.0 * kSqrt3 * s.dot(dV2_0 + dV2_1) - 13.0 * h * s.squaredNorm();
}

}  // namespace ergodic_mlmc
