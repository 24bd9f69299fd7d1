#include "ergodic_mlmc/presets.hpp"

#include <cmath>
#include <numbers>

namespace ergodic_mlmc {

namespace {

struct Poly3 {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

// Triple-well drift as a ratio num/den with
//   num = -x^13 + 4x^9 - 4x^7 + 12x^5 - 8x^3 = x^3 P(x^2)
//   den = 2 (x^6 + 1)^2
// where P(u) = -u^5 + 4u^3 - 4u^2 + 12u - 8.
Poly3 triple_well_ratio(double x) {
  const double u = x * x;
  const double x3 = u * x;
  const double x5 = x3 * u;
  const double p = (((-u * u + 4.0) * u - 4.0) * u + 12.0) * u - 8.0;
  const double p1 = ((-5.0 * u * u + 12.0) * u - 8.0) * u + 12.0;
  const double p2 = (-20.0 * u * u + 24.0) * u - 8.0;
  const double n = x3 * p;
  const double n1 = 3.0 * u * p + 2.0 * u * u * p1;
  const double n2 = 6.0 * x * p + 14.0 * x3 * p1 + 4.0 * x5 * p2;
  const double w = u * u * u + 1.0;
  const double d = 2.0 * w * w;
  const double d1 = 24.0 * x5 * w;
  const double d2 = 120.0 * u * u * w + 144.0 * x5 * x5;
  Poly3 q;
  q.v = n / d;
  q.d1 = (n1 - q.v * d1) / d;
  q.d2 = (n2 - 2.0 * q.d1 * d1 - q.v * d2) / d;
  return q;
}

// Per-axis pieces of the 2D well drift.
//   g(u) = u (4 / (1 + u^2)^2 - 2)
struct WellAxis {
  double g, g1, g2;      // g and derivatives
  double s, s1, s2;      // sech^2 and derivatives
  double t, t1, t2;      // tanh and derivatives
};

WellAxis well_axis(double u) {
  const double q = 1.0 + u * u;
  const double th = std::tanh(u);
  const double sech2 = 1.0 - th * th;
  WellAxis w;
  w.g = u * (4.0 / (q * q) - 2.0);
  w.g1 = 4.0 * (1.0 - 3.0 * u * u) / (q * q * q) - 2.0;
  w.g2 = -48.0 * u * (1.0 - u * u) / (q * q * q * q);
  w.s = sech2;
  w.s1 = -2.0 * sech2 * th;
  w.s2 = 4.0 * sech2 * th * th - 2.0 * sech2 * sech2;
  w.t = th;
  w.t1 = sech2;
  w.t2 = -2.0 * sech2 * th;
  return w;
}

constexpr double kThomasDamping = 0.18;

}  // namespace

PresetName parse_preset_name(std::string_view name) {
  if (name == "triple_well_1d") return PresetName::triple_well_1d;
  if (name == "double_well_2d") return PresetName::double_well_2d;
  if (name == "thomas_3d") return PresetName::thomas_3d;
  throw ConfigError("preset: unknown preset '" + std::string(name) +
                    "' (expected triple_well_1d, double_well_2d or thomas_3d)");
}

std::string_view to_string(PresetName name) {
  switch (name) {
    case PresetName::triple_well_1d:
      return "triple_well_1d";
    case PresetName::double_well_2d:
      return "double_well_2d";
    case PresetName::thomas_3d:
      break;
  }
  return "thomas_3d";
}

int preset_dimension(PresetName name) {
  switch (name) {
    case PresetName::triple_well_1d:
      return 1;
    case PresetName::double_well_2d:
      return 2;
    case PresetName::thomas_3d:
      break;
  }
  return 3;
}

double box_boundary_distance(std::span<const double> x, std::span<const double> lo,
                             std::span<const double> hi) {
  bool inside = true;
  double outside_sq = 0.0;
  double inside_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < lo[i]) {
      inside = false;
      outside_sq += (lo[i] - x[i]) * (lo[i] - x[i]);
    } else if (x[i] > hi[i]) {
      inside = false;
      outside_sq += (x[i] - hi[i]) * (x[i] - hi[i]);
    } else {
      inside_min = std::min({inside_min, x[i] - lo[i], hi[i] - x[i]});
    }
  }
  return inside ? inside_min : std::sqrt(outside_sq);
}

Preset<1> triple_well_1d() {
  using V = Vec<1>;
  using M = Mat<1>;
  Preset<1> p;
  p.model.name = "triple_well_1d";
  p.model.drift = [](const V& x) { return V{triple_well_ratio(x[0]).v}; };
  p.model.jacobian = [](const V& x) { return M{triple_well_ratio(x[0]).d1}; };
  p.model.hessian = [](const V& x) { return Tensor3<1>{M{triple_well_ratio(x[0]).d2}}; };
  p.model.laplacian_drift = [](const V& x) { return V{triple_well_ratio(x[0]).d2}; };
  p.model.expand_fn = [](const V& x) {
    const Poly3 q = triple_well_ratio(x[0]);
    return DriftExpansion<1>{V{q.v}, M{q.d1}, V{q.d2}};
  };

  p.payoff.kind = PayoffKind::indicator;
  p.payoff.eval = [](const V& x) { return (x[0] >= 0.0 && x[0] <= 2.0) ? 1.0 : 0.0; };
  p.payoff.boundary_distance = [](const V& x) {
    return std::min(std::abs(x[0]), std::abs(x[0] - 2.0));
  };

  p.x0 = V{1.0};
  p.reference_value = 0.42863;
  p.default_spring = 1.0;
  p.default_mu_star = 0.360;
  p.default_lambda_star = 0.259;
  return p;
}

Preset<2> double_well_2d() {
  using V = Vec<2>;
  using M = Mat<2>;
  Preset<2> p;
  p.model.name = "double_well_2d";
  p.model.drift = [](const V& x) {
    const WellAxis u = well_axis(x[0]);
    const WellAxis v = well_axis(x[1]);
    return V{u.g + 0.5 * u.s * v.t, v.g + 0.5 * v.s * u.t};
  };
  p.model.jacobian = [](const V& x) {
    const WellAxis u = well_axis(x[0]);
    const WellAxis v = well_axis(x[1]);
    M j;
    j << u.g1 + 0.5 * u.s1 * v.t, 0.5 * u.s * v.t1,  //
        0.5 * v.s * u.t1, v.g1 + 0.5 * v.s1 * u.t;
    return j;
  };
  p.model.hessian = [](const V& x) {
    const WellAxis u = well_axis(x[0]);
    const WellAxis v = well_axis(x[1]);
    Tensor3<2> h;
    h[0] << u.g2 + 0.5 * u.s2 * v.t, 0.5 * u.s1 * v.t1,  //
        0.5 * u.s1 * v.t1, 0.5 * u.s * v.t2;
    h[1] << 0.5 * v.s * u.t2, 0.5 * v.s1 * u.t1,  //
        0.5 * v.s1 * u.t1, v.g2 + 0.5 * v.s2 * u.t;
    return h;
  };
  p.model.laplacian_drift = [](const V& x) {
    const WellAxis u = well_axis(x[0]);
    const WellAxis v = well_axis(x[1]);
    return V{u.g2 + 0.5 * u.s2 * v.t + 0.5 * u.s * v.t2, v.g2 + 0.5 * v.s2 * u.t + 0.5 * v.s * u.t2};
  };
  p.model.expand_fn = [](const V& x) {
    const WellAxis u = well_axis(x[0]);
    const WellAxis v = well_axis(x[1]);
    DriftExpansion<2> e;
    e.drift = V{u.g + 0.5 * u.s * v.t, v.g + 0.5 * v.s * u.t};
    e.jacobian << u.g1 + 0.5 * u.s1 * v.t, 0.5 * u.s * v.t1,  //
        0.5 * v.s * u.t1, v.g1 + 0.5 * v.s1 * u.t;
    e.laplacian =
        V{u.g2 + 0.5 * u.s2 * v.t + 0.5 * u.s * v.t2, v.g2 + 0.5 * v.s2 * u.t + 0.5 * v.s * u.t2};
    return e;
  };

  // 0 <= x1 + x2 <= 1.4 and -0.75 <= x2 - x1 <= 0.75; in the rotated frame
  // (x1 + x2, x2 - x1) / sqrt(2) this is an axis-aligned rectangle.
  p.payoff.kind = PayoffKind::indicator;
  p.payoff.eval = [](const V& x) {
    const double s = x[0] + x[1];
    const double t = x[1] - x[0];
    return (s >= 0.0 && s <= 1.4 && t >= -0.75 && t <= 0.75) ? 1.0 : 0.0;
  };
  p.payoff.boundary_distance = [](const V& x) {
    constexpr double r = std::numbers::sqrt2 / 2.0;
    const std::array<double, 2> y{r * (x[0] + x[1]), r * (x[1] - x[0])};
    const std::array<double, 2> lo{0.0, -0.75 * r};
    const std::array<double, 2> hi{1.4 * r, 0.75 * r};
    return box_boundary_distance(y, lo, hi);
  };

  p.x0 = V{0.0, 0.0};
  p.reference_value = 0.1674;
  p.default_spring = 1.0;
  p.default_mu_star = 0.31;
  p.default_lambda_star = 3.07;
  return p;
}

Preset<3> thomas_3d() {
  using V = Vec<3>;
  using M = Mat<3>;
  Preset<3> p;
  p.model.name = "thomas_3d";
  // a_i = sin(x_{i+1}) - 0.18 x_i, indices cyclic.
  p.model.drift = [](const V& x) {
    return V{std::sin(x[1]) - kThomasDamping * x[0], std::sin(x[2]) - kThomasDamping * x[1],
             std::sin(x[0]) - kThomasDamping * x[2]};
  };
  p.model.jacobian = [](const V& x) {
    M j = -kThomasDamping * M::Identity();
    j(0, 1) = std::cos(x[1]);
    j(1, 2) = std::cos(x[2]);
    j(2, 0) = std::cos(x[0]);
    return j;
  };
  p.model.hessian = [](const V& x) {
    Tensor3<3> h{M::Zero(), M::Zero(), M::Zero()};
    h[0](1, 1) = -std::sin(x[1]);
    h[1](2, 2) = -std::sin(x[2]);
    h[2](0, 0) = -std::sin(x[0]);
    return h;
  };
  p.model.laplacian_drift = [](const V& x) {
    return V{-std::sin(x[1]), -std::sin(x[2]), -std::sin(x[0])};
  };
  p.model.expand_fn = [](const V& x) {
    const V s{std::sin(x[0]), std::sin(x[1]), std::sin(x[2])};
    DriftExpansion<3> e;
    e.drift = V{s[1] - kThomasDamping * x[0], s[2] - kThomasDamping * x[1],
                s[0] - kThomasDamping * x[2]};
    e.jacobian = -kThomasDamping * M::Identity();
    e.jacobian(0, 1) = std::cos(x[1]);
    e.jacobian(1, 2) = std::cos(x[2]);
    e.jacobian(2, 0) = std::cos(x[0]);
    e.laplacian = V{-s[1], -s[2], -s[0]};
    return e;
  };

  p.payoff.kind = PayoffKind::lipschitz;
  p.payoff.eval = [](const V& x) { return x.norm(); };
  p.payoff.lipschitz_constant = 1.0;

  p.x0 = V{1.0, 2.0, 2.0};
  p.reference_value = 3.9664;
  p.default_spring = 1.0;
  p.default_mu_star = 1.08;
  p.default_lambda_star = 0.25;
  return p;
}

}  // namespace ergodic_mlmc
