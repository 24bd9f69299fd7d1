#pragma once

#include "ergodic_mlmc/girsanov.hpp"
#include "ergodic_mlmc/increments.hpp"
#include "ergodic_mlmc/model.hpp"

#include <cstdint>
#include <sstream>
#include <vector>

namespace ergodic_mlmc {

template <int D>
struct UncoupledState {
  Vec<D> x;
  std::int64_t t_index = 0;
  double h = 0.0;
};

/// Spring-coupled fine/coarse pair under the sampling measure, with log weights.
template <int D>
struct CoupledState {
  Vec<D> yf;
  Vec<D> yc;
  double log_rf = 0.0;
  double log_rc = 0.0;
  std::int64_t pair_index = 0;  // completed double steps
  double h = 0.0;               // fine step
  double spring = 0.0;

  static CoupledState start(const Vec<D>& x0, double h, double spring) {
    return {x0, x0, 0.0, 0.0, 0, h, spring};
  }
};

namespace detail {

// x + shift + dt a + dW + Da dZ + (dt^2 / 2) A a, with the Taylor terms
// dropped for Euler-Maruyama. Every stepper goes through here so that a zero
// shift reproduces the unshifted update bit for bit.
template <int D>
Vec<D> taylor_update(const Vec<D>& x, const Vec<D>& shift, const DriftExpansion<D>& e,
                     const Vec<D>& dW, const Vec<D>& dZ, double dt, Scheme scheme) {
  if (scheme == Scheme::euler_maruyama) return x + shift + dt * e.drift + dW;
  return x + shift + dt * e.drift + dW + e.jacobian * dZ + (0.5 * dt * dt) * generator_drift(e);
}

template <int D>
void check_state(const Vec<D>& x, std::int64_t step, const char* what) {
  if (!all_finite(x)) {
    std::ostringstream msg;
    msg << what << " became non-finite at step " << step;
    throw DivergenceError(msg.str(), step);
  }
}

}  // namespace detail

/// One fine step without spring: x <- x + h a + dW + Da dZ + (h^2/2) A a.
template <int D>
UncoupledState<D> step_uncoupled_fine(const ModelSpec<D>& m, const UncoupledState<D>& s,
                                      const IncrementPair<D>& inc,
                                      Scheme scheme = Scheme::ito_taylor_15) {
  if (inc.h != s.h) throw PreconditionError("step_uncoupled_fine: increment step differs from state step");
  const DriftExpansion<D> e = m.expand(s.x);
  UncoupledState<D> out{detail::taylor_update<D>(s.x, Vec<D>::Zero(), e, inc.dW, inc.dZ, s.h, scheme),
                        s.t_index + 1, s.h};
  detail::check_state<D>(out.x, out.t_index, "uncoupled fine state");
  return out;
}

/// One coarse step of size 2h built from the two fine increments spanning it:
/// x <- x + 2h a + (dW0 + dW1) + Da (dZ0 + dZ1 + h dW0) + 2h^2 A a.
/// `s.h` is the fine step h.
template <int D>
UncoupledState<D> step_uncoupled_coarse(const ModelSpec<D>& m, const UncoupledState<D>& s,
                                        const IncrementPair<D>& inc0, const IncrementPair<D>& inc1,
                                        Scheme scheme = Scheme::ito_taylor_15) {
  if (inc0.h != s.h || inc1.h != s.h)
    throw PreconditionError("step_uncoupled_coarse: increments must share the state's fine step");
  const double h = s.h;
  const DriftExpansion<D> e = m.expand(s.x);
  const Vec<D> dW = inc0.dW + inc1.dW;
  const Vec<D> dZ = inc1.dZ + inc0.dZ + h * inc0.dW;
  UncoupledState<D> out{detail::taylor_update<D>(s.x, Vec<D>::Zero(), e, dW, dZ, 2.0 * h, scheme),
                        s.t_index + 2, h};
  detail::check_state<D>(out.x, out.t_index, "uncoupled coarse state");
  return out;
}

/// Advances the coupled pair from t_2n to t_2n+2.
///
/// The fine path takes two spring steps; the second one is pulled toward the
/// intermediate coarse state at t_2n+1. The coarse path takes one 2h step with
/// spring 2h S (yf - yc) read at t_2n. log_rf collects both fine factors and
/// log_rc the single coarse factor.
template <int D>
CoupledState<D> double_step_coupled(const ModelSpec<D>& m, const CoupledState<D>& s,
                                    const IncrementPair<D>& inc0, const IncrementPair<D>& inc1,
                                    Scheme scheme = Scheme::ito_taylor_15) {
  const double h = s.h;
  if (inc0.h != h || inc1.h != h)
    throw PreconditionError("double_step_coupled: increments must share the state's fine step");

  const DriftExpansion<D> ef = m.expand(s.yf);
  const DriftExpansion<D> ec = m.expand(s.yc);

  const SpringTerm<D> sf0 = fine_spring<D>(s.spring, s.yf, s.yc);
  const SpringTerm<D> sc = coarse_spring<D>(s.spring, s.yf, s.yc);

  const Vec<D> yf1 = detail::taylor_update<D>(s.yf, h * sf0.value, ef, inc0.dW, inc0.dZ, h, scheme);
  const Vec<D> yc1 = detail::taylor_update<D>(s.yc, h * sc.value, ec, inc0.dW, inc0.dZ, h, scheme);

  const DriftExpansion<D> ef1 = m.expand(yf1);
  const SpringTerm<D> sf1 = fine_spring<D>(s.spring, yf1, yc1);
  CoupledState<D> out = s;
  out.yf = detail::taylor_update<D>(yf1, h * sf1.value, ef1, inc1.dW, inc1.dZ, h, scheme);

  const Vec<D> dW = inc0.dW + inc1.dW;
  const Vec<D> dZ = inc1.dZ + inc0.dZ + h * inc0.dW;
  out.yc = detail::taylor_update<D>(s.yc, (2.0 * h) * sc.value, ec, dW, dZ, 2.0 * h, scheme);

  out.log_rf += log_rn_fine_step<D>(sf0, inc0.dV1, inc0.dV2, h, scheme);
  out.log_rf += log_rn_fine_step<D>(sf1, inc1.dV1, inc1.dV2, h, scheme);
  out.log_rc += log_rn_coarse_step<D>(sc, inc0.dV1, inc1.dV1, inc0.dV2, inc1.dV2, h, scheme);
  out.pair_index = s.pair_index + 1;

  const std::int64_t step = 2 * out.pair_index;
  detail::check_state<D>(out.yf, step, "coupled fine state");
  detail::check_state<D>(out.yc, step, "coupled coarse state");
  if (!std::isfinite(out.log_rf) || !std::isfinite(out.log_rc)) {
    std::ostringstream msg;
    msg << "coupled log-weight became non-finite at step " << step;
    throw DivergenceError(msg.str(), step);
  }
  return out;
}

struct PathOutcome {
  bool diverged = false;
  std::int64_t diverged_at = -1;
};

template <int D>
struct UncoupledPath : PathOutcome {
  Vec<D> x;
};

template <int D>
struct CoupledPath : PathOutcome {
  CoupledState<D> state;
};

/// Runs the spring-free fine scheme for n_steps from the stream's step 0.
template <int D>
UncoupledPath<D> simulate_uncoupled_fine(const ModelSpec<D>& m, const Vec<D>& x0, double h,
                                         std::int64_t n_steps, NoiseStream stream,
                                         Scheme scheme = Scheme::ito_taylor_15) {
  UncoupledState<D> s{x0, 0, h};
  UncoupledPath<D> out;
  stream.seek(0);
  try {
    for (std::int64_t n = 0; n < n_steps; ++n) s = step_uncoupled_fine<D>(m, s, next_increment<D>(stream, h), scheme);
  } catch (const DivergenceError& e) {
    out.diverged = true;
    out.diverged_at = e.step();
  }
  out.x = s.x;
  return out;
}

/// Runs the spring-free coarse scheme (step 2h) over n_fine_steps fine increments.
template <int D>
UncoupledPath<D> simulate_uncoupled_coarse(const ModelSpec<D>& m, const Vec<D>& x0, double h,
                                           std::int64_t n_fine_steps, NoiseStream stream,
                                           Scheme scheme = Scheme::ito_taylor_15) {
  if (n_fine_steps % 2 != 0) throw PreconditionError("simulate_uncoupled_coarse: n_fine_steps must be even");
  UncoupledState<D> s{x0, 0, h};
  UncoupledPath<D> out;
  stream.seek(0);
  try {
    for (std::int64_t n = 0; n < n_fine_steps / 2; ++n) {
      const auto inc0 = next_increment<D>(stream, h);
      const auto inc1 = next_increment<D>(stream, h);
      s = step_uncoupled_coarse<D>(m, s, inc0, inc1, scheme);
    }
  } catch (const DivergenceError& e) {
    out.diverged = true;
    out.diverged_at = e.step();
  }
  out.x = s.x;
  return out;
}

/// Runs the coupled scheme for n_fine_steps (must be even) fine steps.
template <int D>
CoupledPath<D> simulate_coupled(const ModelSpec<D>& m, const Vec<D>& x0, double spring, double h,
                                std::int64_t n_fine_steps, NoiseStream stream,
                                Scheme scheme = Scheme::ito_taylor_15) {
  if (n_fine_steps % 2 != 0) throw PreconditionError("simulate_coupled: n_fine_steps must be even");
  CoupledPath<D> out;
  out.state = CoupledState<D>::start(x0, h, spring);
  stream.seek(0);
  try {
    for (std::int64_t n = 0; n < n_fine_steps / 2; ++n) {
      const auto inc0 = next_increment<D>(stream, h);
      const auto inc1 = next_increment<D>(stream, h);
      out.state = double_step_coupled<D>(m, out.state, inc0, inc1, scheme);
    }
  } catch (const DivergenceError& e) {
    out.diverged = true;
    out.diverged_at = e.step();
  }
  return out;
}

/// Checks the pathwise change of measure: re-running the spring-free schemes
/// on the shifted Gaussians reproduces the sprung paths.
///
/// Fine: dU1 = Sf_n h + dV1, dU2 = -sqrt(3) Sf_n h + dV2 at every fine step.
/// Coarse: dU1 = Sc_2n h + dV1, dU2 = -2 sqrt(3) Sc_2n h + dV2 on both fine
/// sub-steps of each coarse step. Returns the largest state gap seen at any
/// fine (resp. even) time index.
template <int D>
double girsanov_transform_check(const ModelSpec<D>& m, const Vec<D>& x0, double spring, double h,
                                std::int64_t n_steps, NoiseStream stream,
                                Scheme scheme = Scheme::ito_taylor_15) {
  if (n_steps % 2 != 0) throw PreconditionError("girsanov_transform_check: n_steps must be even");
  stream.seek(0);
  std::vector<IncrementPair<D>> incs;
  incs.reserve(static_cast<std::size_t>(n_steps));
  for (std::int64_t n = 0; n < n_steps; ++n) incs.push_back(next_increment<D>(stream, h));

  // Sprung run, recording the fine/coarse states that define each spring.
  std::vector<Vec<D>> yf_path{x0}, yc_even{x0};
  std::vector<Vec<D>> fine_springs, coarse_springs;
  CoupledState<D> s = CoupledState<D>::start(x0, h, spring);
  for (std::int64_t n = 0; n < n_steps / 2; ++n) {
    const auto& i0 = incs[2 * n];
    const auto& i1 = incs[2 * n + 1];
    fine_springs.push_back(fine_spring<D>(spring, s.yf, s.yc).value);
    coarse_springs.push_back(coarse_spring<D>(spring, s.yf, s.yc).value);
    // Intermediate states, recomputed exactly as double_step_coupled does.
    const DriftExpansion<D> ef = m.expand(s.yf);
    const DriftExpansion<D> ec = m.expand(s.yc);
    const Vec<D> yf1 = detail::taylor_update<D>(s.yf, h * fine_springs.back(), ef, i0.dW, i0.dZ, h, scheme);
    const Vec<D> yc1 =
        detail::taylor_update<D>(s.yc, h * coarse_springs.back(), ec, i0.dW, i0.dZ, h, scheme);
    fine_springs.push_back(fine_spring<D>(spring, yf1, yc1).value);
    s = double_step_coupled<D>(m, s, i0, i1, scheme);
    yf_path.push_back(yf1);
    yf_path.push_back(s.yf);
    yc_even.push_back(s.yc);
  }

  double gap = 0.0;
  UncoupledState<D> f{x0, 0, h};
  for (std::int64_t n = 0; n < n_steps; ++n) {
    const auto& sf = fine_springs[static_cast<std::size_t>(n)];
    const Vec<D> u1 = sf * h + incs[n].dV1;
    const Vec<D> u2 = -kSqrt3 * sf * h + incs[n].dV2;
    f = step_uncoupled_fine<D>(m, f, make_increment<D>(u1, u2, h), scheme);
    gap = std::max(gap, (f.x - yf_path[n + 1]).norm());
  }
  UncoupledState<D> c{x0, 0, h};
  for (std::int64_t n = 0; n < n_steps / 2; ++n) {
    const auto& sc = coarse_springs[static_cast<std::size_t>(n)];
    const double z_shift = scheme == Scheme::euler_maruyama ? 0.0 : 2.0 * kSqrt3;
    const auto shifted = [&](const IncrementPair<D>& inc) {
      return make_increment<D>(sc * h + inc.dV1, -z_shift * sc * h + inc.dV2, h);
    };
    c = step_uncoupled_coarse<D>(m, c, shifted(incs[2 * n]), shifted(incs[2 * n + 1]), scheme);
    gap = std::max(gap, (c.x - yc_even[n + 1]).norm());
  }
  return gap;
}

}  // namespace ergodic_mlmc
