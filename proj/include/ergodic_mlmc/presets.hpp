#pragma once

#include "ergodic_mlmc/model.hpp"

#include <string>
#include <string_view>
#include <utility>

namespace ergodic_mlmc {

/// A complete test problem: model, payoff, start point and known answer.
template <int D>
struct Preset {
  ModelSpec<D> model;
  PayoffSpec<D> payoff;
  Vec<D> x0;
  double reference_value = 0.0;
  // Overridable defaults used when a config omits them.
  double default_spring = 1.0;
  double default_mu_star = 1.0;
  double default_lambda_star = 1.0;
};

enum class PresetName { triple_well_1d, double_well_2d, thomas_3d };

PresetName parse_preset_name(std::string_view name);
std::string_view to_string(PresetName name);
int preset_dimension(PresetName name);

/// 1D triple-well potential, indicator of [0, 2], started at 1.
Preset<1> triple_well_1d();
/// 2D potential well, indicator of a rotated box, started at the origin.
Preset<2> double_well_2d();
/// Thomas' cyclically symmetric attractor with noise, payoff |x|, started at (1, 2, 2).
Preset<3> thomas_3d();

/// Calls `f` with the preset object for `name`. All branches must return the same type.
template <class F>
decltype(auto) with_preset(PresetName name, F&& f) {
  switch (name) {
    case PresetName::triple_well_1d:
      return std::forward<F>(f)(triple_well_1d());
    case PresetName::double_well_2d:
      return std::forward<F>(f)(double_well_2d());
    case PresetName::thomas_3d:
      break;
  }
  return std::forward<F>(f)(thomas_3d());
}

/// Distance from x to the boundary of the axis-aligned box [lo, hi] (either side).
double box_boundary_distance(std::span<const double> x, std::span<const double> lo,
                             std::span<const double> hi);

}  // namespace ergodic_mlmc
