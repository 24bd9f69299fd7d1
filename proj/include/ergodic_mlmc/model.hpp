#pragma once

#include "ergodic_mlmc/types.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace ergodic_mlmc {

/// Drift value, Jacobian and component-wise Laplacian at one point.
///
/// This is everything the order-1.5 stepper needs from the model per step.
template <int D>
struct DriftExpansion {
  Vec<D> drift;
  Mat<D> jacobian;  // (i, j) = d a_i / d x_j
  Vec<D> laplacian;
};

/// Additive unit-noise SDE dX = a(X) dt + dW with hand-supplied derivatives.
///
/// `expand` is optional. Presets provide it so that shared subexpressions are
/// evaluated once per step; otherwise it is assembled from the separate maps.
template <int D>
struct ModelSpec {
  static constexpr int dim = D;

  std::string name;
  std::function<Vec<D>(const Vec<D>&)> drift;
  std::function<Mat<D>(const Vec<D>&)> jacobian;
  std::function<Tensor3<D>(const Vec<D>&)> hessian;
  std::function<Vec<D>(const Vec<D>&)> laplacian_drift;
  std::function<DriftExpansion<D>(const Vec<D>&)> expand_fn;

  DriftExpansion<D> expand(const Vec<D>& x) const {
    if (expand_fn) return expand_fn(x);
    return {drift(x), jacobian(x), laplacian_drift(x)};
  }
};

enum class PayoffKind { lipschitz, indicator };

template <int D>
struct PayoffSpec {
  PayoffKind kind = PayoffKind::lipschitz;
  std::function<double(const Vec<D>&)> eval;
  std::optional<double> lipschitz_constant;
  // Required for indicator payoffs.
  std::function<double(const Vec<D>&)> boundary_distance;
};

/// Constant payoff; useful for checking that weight corrections cancel.
template <int D>
PayoffSpec<D> constant_payoff(double value) {
  PayoffSpec<D> p;
  p.kind = PayoffKind::lipschitz;
  p.eval = [value](const Vec<D>&) { return value; };
  p.lipschitz_constant = 0.0;
  return p;
}

/// Generator applied to the drift: Da(x) a(x) + 0.5 * Laplacian a(x).
template <int D>
Vec<D> generator_drift(const DriftExpansion<D>& e) {
  return e.jacobian * e.drift + 0.5 * e.laplacian;
}

template <int D>
Vec<D> eval_generator_drift(const ModelSpec<D>& m, const Vec<D>& x) {
  if (!all_finite(x)) throw PreconditionError("eval_generator_drift: non-finite input state");
  const DriftExpansion<D> e = m.expand(x);
  Vec<D> out = generator_drift(e);
  for (int i = 0; i < D; ++i) {
    if (!std::isfinite(out[i])) {
      std::ostringstream msg;
      msg << "model '" << m.name << "': generator drift component " << i
          << " is non-finite (drift=" << e.drift[i] << ", laplacian=" << e.laplacian[i] << ")";
      throw EvaluationError(msg.str());
    }
  }
  return out;
}

struct DerivativeReport {
  // Indexed by derivative order - 1: jacobian, hessian, laplacian.
  std::array<double, 3> max_rel_error{0.0, 0.0, 0.0};
  std::array<bool, 3> order_pass{true, true, true};
  double tol = 0.0;
  bool pass = true;
};

namespace detail {

inline double scaled_error(double diff_norm, double ref_norm) {
  return diff_norm / std::max(1.0, ref_norm);
}

template <int D>
void require_finite(const Vec<D>& v, std::size_t probe, const char* what) {
  for (int i = 0; i < D; ++i) {
    if (!std::isfinite(v[i])) {
      std::ostringstream msg;
      msg << "validate_derivatives: non-finite " << what << " at probe " << probe
          << ", component " << i;
      throw EvaluationError(msg.str());
    }
  }
}

}  // namespace detail

/// Checks the analytic Jacobian, Hessian and Laplacian against central
/// differences with step 1e-5 * (1 + |x|).
///
/// The Jacobian is differenced from the drift; the Hessian from the analytic
/// Jacobian (so the comparison is not swamped by second-difference roundoff)
/// and the Laplacian from the trace of that differenced Hessian. Errors are
/// relative with a unit floor on the reference magnitude.
template <int D>
DerivativeReport validate_derivatives(const ModelSpec<D>& m, std::span<const Vec<D>> probes,
                                      double tol) {
  if (probes.empty()) throw PreconditionError("validate_derivatives: need at least one probe");
  if (!(tol > 0.0)) throw PreconditionError("validate_derivatives: tol must be positive");

  DerivativeReport report;
  report.tol = tol;
  for (std::size_t p = 0; p < probes.size(); ++p) {
    const Vec<D>& x = probes[p];
    const double step = 1e-5 * (1.0 + x.norm());

    Mat<D> fd_jac;
    Tensor3<D> fd_hess;
    for (int j = 0; j < D; ++j) {
      Vec<D> xp = x;
      Vec<D> xm = x;
      xp[j] += step;
      xm[j] -= step;
      const Vec<D> ap = m.drift(xp);
      const Vec<D> am = m.drift(xm);
      detail::require_finite<D>(ap, p, "drift");
      detail::require_finite<D>(am, p, "drift");
      fd_jac.col(j) = (ap - am) / (2.0 * step);

      const Mat<D> jp = m.jacobian(xp);
      const Mat<D> jm = m.jacobian(xm);
      const Mat<D> djac = (jp - jm) / (2.0 * step);  // (i, k) = d/dx_j (d a_i / d x_k)
      for (int i = 0; i < D; ++i) {
        for (int k = 0; k < D; ++k) fd_hess[i](j, k) = djac(i, k);
      }
    }
    Vec<D> fd_lap;
    for (int i = 0; i < D; ++i) fd_lap[i] = fd_hess[i].trace();

    const Mat<D> jac = m.jacobian(x);
    const Tensor3<D> hess = m.hessian(x);
    const Vec<D> lap = m.laplacian_drift(x);

    const double e1 = detail::scaled_error((jac - fd_jac).norm(), fd_jac.norm());
    double hdiff = 0.0;
    double href = 0.0;
    for (int i = 0; i < D; ++i) {
      hdiff += (hess[i] - fd_hess[i]).squaredNorm();
      href += fd_hess[i].squaredNorm();
    }
    const double e2 = detail::scaled_error(std::sqrt(hdiff), std::sqrt(href));
    const double e3 = detail::scaled_error((lap - fd_lap).norm(), fd_lap.norm());
    for (double e : {e1, e2, e3}) {
      if (!std::isfinite(e)) {
        std::ostringstream msg;
        msg << "validate_derivatives: non-finite difference at probe " << p;
        throw EvaluationError(msg.str());
      }
    }
    report.max_rel_error[0] = std::max(report.max_rel_error[0], e1);
    report.max_rel_error[1] = std::max(report.max_rel_error[1], e2);
    report.max_rel_error[2] = std::max(report.max_rel_error[2], e3);
  }
  for (int k = 0; k < 3; ++k) report.order_pass[k] = report.max_rel_error[k] <= tol;
  report.pass = report.order_pass[0] && report.order_pass[1] && report.order_pass[2];
  return report;
}

/// Empirical constants for <x, a(x)> <= -alpha |x|^2 + beta and the
/// one-sided Lipschitz bound lambda.
struct DissipativityEstimate {
  double alpha = 0.0;
  double beta = 0.0;
  double one_sided_lipschitz = 0.0;
};

/// Fits alpha from the outer half of the probe cloud (halved, for slack) and
/// then takes the smallest beta that makes the inequality hold on every probe.
/// lambda is the largest eigenvalue of the symmetric part of Da over probes.
template <int D>
DissipativityEstimate estimate_dissipativity(const ModelSpec<D>& m, std::span<const Vec<D>> probes) {
  if (probes.empty()) throw PreconditionError("estimate_dissipativity: need at least one probe");
  double r_max = 0.0;
  for (const auto& x : probes) r_max = std::max(r_max, x.norm());

  double ratio = std::numeric_limits<double>::infinity();
  for (const auto& x : probes) {
    const double r = x.norm();
    if (r < 0.5 * r_max || r == 0.0) continue;
    ratio = std::min(ratio, -x.dot(m.drift(x)) / (r * r));
  }
  DissipativityEstimate est;
  est.alpha = std::isfinite(ratio) ? 0.5 * ratio : 0.0;
  est.beta = 0.0;
  est.one_sided_lipschitz = -std::numeric_limits<double>::infinity();
  for (const auto& x : probes) {
    est.beta = std::max(est.beta, x.dot(m.drift(x)) + est.alpha * x.squaredNorm());
    const Mat<D> j = m.jacobian(x);
    const Mat<D> sym = 0.5 * (j + j.transpose());
    Eigen::SelfAdjointEigenSolver<Mat<D>> solver(sym, Eigen::EigenvaluesOnly);
    est.one_sided_lipschitz = std::max(est.one_sided_lipschitz, solver.eigenvalues().maxCoeff());
  }
  return est;
}

/// Regular lattice with `per_axis` points per coordinate on [lo, hi]^D.
template <int D>
std::vector<Vec<D>> lattice_probes(double lo, double hi, int per_axis) {
  std::vector<Vec<D>> out;
  int total = 1;
  for (int i = 0; i < D; ++i) total *= per_axis;
  out.reserve(static_cast<std::size_t>(total));
  for (int flat = 0; flat < total; ++flat) {
    Vec<D> x;
    int rem = flat;
    for (int i = 0; i < D; ++i) {
      const int k = rem % per_axis;
      rem /= per_axis;
      x[i] = per_axis == 1 ? lo : lo + (hi - lo) * k / (per_axis - 1);
    }
    out.push_back(x);
  }
  return out;
}

}  // namespace ergodic_mlmc
