#include "commands.hpp"
#include "ergodic_mlmc/config.hpp"
#include "ergodic_mlmc/increments.hpp"
#include "ergodic_mlmc/mlmc.hpp"
#include "ergodic_mlmc/presets.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>

namespace py = pybind11;
using namespace ergodic_mlmc;

namespace {

py::dict level_dict(const LevelEstimate& l) {
  py::dict d;
  d["level"] = l.level;
  d["h"] = l.h;
  d["n_samples"] = l.n_samples;
  d["n_divergent"] = l.n_divergent;
  d["mean"] = l.mean;
  d["variance"] = l.variance;
  d["kurtosis"] = l.kurtosis;
  d["cost_per_sample"] = l.cost_per_sample;
  return d;
}

py::dict run(const std::string& preset, const std::map<std::string, std::string>& config) {
  ConfigDocument doc;
  for (const auto& [k, v] : config) doc.set(k, v);
  return with_preset(parse_preset_name(preset), [&](const auto& p) {
    constexpr int D = std::decay_t<decltype(p.model)>::dim;
    const auto cfg = mlmc_config_from<D>(doc, p);
    MlmcResult r;
    {
      py::gil_scoped_release release;
      r = run_mlmc<D>(p, cfg);
    }
    py::dict out;
    out["estimate"] = r.estimate;
    out["reference"] = p.reference_value;
    out["T"] = r.plan.T;
    out["h0"] = r.plan.h0;
    out["L"] = r.plan.L;
    out["N"] = r.plan.N;
    out["total_cost"] = r.total_cost;
    py::list levels;
    for (const auto& l : r.levels) levels.append(level_dict(l));
    out["levels"] = levels;
    return out;
  });
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Order-1.5 change-of-measure multilevel Monte Carlo for invariant measures";
  m.attr("__version__") = ERGODIC_MLMC_VERSION;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericalFailure>(m, "NumericalFailure", PyExc_RuntimeError);

  m.def("presets", [] {
    return std::vector<std::string>{"triple_well_1d", "double_well_2d", "thomas_3d"};
  });
  m.def(
      "reference_value",
      [](const std::string& name) {
        return with_preset(parse_preset_name(name), [](const auto& p) { return p.reference_value; });
      },
      py::arg("preset"));
  m.def("run", &run, py::arg("preset"), py::arg("config") = std::map<std::string, std::string>{},
        "Runs the estimator. Config values are strings keyed like the config file.");
  m.def(
      "moment_audit",
      [](double h, int d, std::int64_t n, std::uint64_t seed) {
        const auto rep = moment_audit(h, d, n, seed);
        py::list rows;
        for (const auto& c : rep.checks) {
          py::dict row;
          row["quantity"] = c.quantity;
          row["target"] = c.target;
          row["estimate"] = c.estimate;
          row["z"] = c.z;
          rows.append(row);
        }
        return rows;
      },
      py::arg("h"), py::arg("d"), py::arg("n_samples"), py::arg("seed") = 0);
  m.def(
      "cli",
      [](const std::vector<std::string>& args) {
        py::gil_scoped_release release;
        return cli::run_cli(args);
      },
      py::arg("args"), "Runs a command-line invocation (without the program name); returns the exit code.");
}
