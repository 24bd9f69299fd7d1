#include "commands.hpp"

#include "ergodic_mlmc/audit.hpp"
#include "ergodic_mlmc/config.hpp"
#include "ergodic_mlmc/csv.hpp"
#include "ergodic_mlmc/diagnostics.hpp"
#include "ergodic_mlmc/increments.hpp"
#include "ergodic_mlmc/mlmc.hpp"
#include "ergodic_mlmc/model.hpp"
#include "ergodic_mlmc/presets.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <utility>

namespace ergodic_mlmc::cli {

namespace {

namespace fs = std::filesystem;

using Outputs = std::vector<std::pair<std::string, CsvTable>>;

/// Report files written by each subcommand.
const std::map<std::string, std::vector<std::string>>& subcommand_outputs() {
  static const std::map<std::string, std::vector<std::string>> out{
      {"run", {"levels.csv", "result.csv"}},
      {"level-study", {"level_study.csv"}},
      {"variance-study", {"variance_rate.csv"}},
      {"strong-error", {"strong_error.csv"}},
      {"kurtosis", {"kurtosis.csv"}},
      {"divergence", {"divergence.csv"}},
      {"variance-vs-T", {"variance_vs_T.csv"}},
      {"cost-sweep", {"cost_sweep.csv"}},
      {"ergodic-fit", {"ergodic_fit.csv"}},
      {"audit-increments", {"increments.csv"}},
      {"audit-martingale", {"martingale.csv"}},
      {"validate-model", {"validate_model.csv"}},
  };
  return out;
}

const std::map<std::string, std::string>& subcommand_help() {
  static const std::map<std::string, std::string> help{
      {"run", "Run the MLMC estimator for a preset"},
      {"level-study", "Per-level moments of the level correction"},
      {"variance-study", "Decay rate of the level-correction variance"},
      {"strong-error", "Decay rate of E|level correction|"},
      {"kurtosis", "Kurtosis of the level correction across levels"},
      {"divergence", "Frequency of large fine/coarse gaps"},
      {"variance-vs-T", "Level-1 variance as a function of T"},
      {"cost-sweep", "Total cost of the estimator across epsilon"},
      {"ergodic-fit", "Fit mu* and lambda* from the decay of E Phi(X_T)"},
      {"audit-increments", "Moment check of the (dW, dZ) sampler"},
      {"audit-martingale", "Sample means of the terminal Girsanov weights"},
      {"validate-model", "Finite-difference check of the preset derivatives"},
  };
  return help;
}

struct Context {
  std::string subcommand;
  ConfigDocument doc;
  fs::path out_dir;
  bool force = false;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  Scheme scheme = Scheme::ito_taylor_15;

  CsvMetadata metadata() const { return {seed, ERGODIC_MLMC_VERSION, doc.hash()}; }
};

std::string fmt(double v) { return format_cell(v); }

std::int64_t positive_int(const ConfigDocument& doc, const std::string& key, std::int64_t fallback) {
  const std::int64_t v = doc.get_int(key).value_or(fallback);
  if (v <= 0) throw ConfigError(key + ": must be positive");
  return v;
}

double positive_double(const ConfigDocument& doc, const std::string& key) {
  const double v = doc.require_double(key);
  if (!(v > 0.0)) throw ConfigError(key + ": must be positive");
  return v;
}

std::vector<double> require_doubles(const ConfigDocument& doc, const std::string& key) {
  const auto v = doc.get_doubles(key);
  if (!v || v->empty()) throw ConfigError(key + ": required but missing");
  return *v;
}

/// Rethrows library precondition and config failures as config errors tagged with `key`.
template <class F>
decltype(auto) as_config(const std::string& key, F&& f) {
  try {
    return std::forward<F>(f)();
  } catch (const PreconditionError& e) {
    throw ConfigError(key + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

template <int D>
Preset<D> with_reference(Preset<D> p, const ConfigDocument& doc) {
  if (auto r = doc.get_double("reference")) p.reference_value = *r;
  return p;
}

template <int D>
StudySettings study_settings(const Context& ctx, const Preset<D>& preset) {
  StudySettings s;
  s.spring = ctx.doc.get_double("spring").value_or(preset.default_spring);
  if (!(s.spring >= 0.0)) throw ConfigError("spring: must be >= 0");
  s.h0 = positive_double(ctx.doc, "h0");
  s.T = positive_double(ctx.doc, "T");
  s.n_samples = positive_int(ctx.doc, "n_samples", s.n_samples);
  if (auto lv = ctx.doc.get_ints("levels")) {
    if (lv->empty()) throw ConfigError("levels: empty list");
    s.levels.clear();
    for (auto l : *lv) {
      if (l < 1 || l > 30) throw ConfigError("levels: each level must lie in [1, 30]");
      s.levels.push_back(static_cast<int>(l));
    }
  }
  s.seed = ctx.seed;
  s.scheme = ctx.scheme;
  s.threads = ctx.threads;
  for (int l : s.levels) {
    as_config("T, h0", [&] { return steps_for(s.T, std::ldexp(s.h0, -l), true); });
  }
  return s;
}

template <int D>
double study_spring(const Context& ctx, const Preset<D>& preset) {
  const double s = ctx.doc.get_double("spring").value_or(preset.default_spring);
  if (!(s >= 0.0)) throw ConfigError("spring: must be >= 0");
  return s;
}

CsvTable level_stats_table(const std::vector<LevelStats>& sweep) {
  CsvTable t({"level", "h", "n_samples", "n_divergent", "mean", "mean_stderr", "mean_abs", "mean_abs_stderr",
              "variance", "variance_stderr", "kurtosis", "max_gap"});
  for (const auto& st : sweep) {
    t.add_row({std::int64_t{st.level}, st.h, st.n_samples, st.n_divergent, st.mean, st.mean_stderr, st.mean_abs,
               st.mean_abs_stderr, st.variance, st.variance_stderr, st.kurtosis, st.max_gap});
  }
  return t;
}

CsvTable rate_table(const std::vector<LevelStats>& sweep, const RateStudy& fit) {
  const bool strong = fit.quantity == RateQuantity::strong_error;
  CsvTable t({"level", "h", strong ? "mean_abs" : "variance", "stderr", "used", "slope", "slope_stderr",
              "slope_ci_lo", "slope_ci_hi", "r_squared", "degenerate"});
  for (const auto& st : sweep) {
    const bool used = std::find(fit.levels.begin(), fit.levels.end(), st.level) != fit.levels.end();
    t.add_row({std::int64_t{st.level}, st.h, strong ? st.mean_abs : st.variance,
               strong ? st.mean_abs_stderr : st.variance_stderr, std::int64_t{used}, fit.fitted_slope,
               fit.slope_stderr, fit.slope_ci_lo, fit.slope_ci_hi, fit.r_squared, std::int64_t{fit.degenerate}});
  }
  return t;
}

template <int D>
Outputs cmd_run(const Context& ctx, const Preset<D>& preset) {
  MlmcConfig cfg = mlmc_config_from(ctx.doc, preset);
  cfg.seed = ctx.seed;
  cfg.threads = ctx.threads;
  cfg.scheme = ctx.scheme;
  const MlmcResult r = run_mlmc<D>(preset, cfg);

  CsvTable levels({"level", "h", "n_samples", "mean", "variance", "kurtosis", "cost_per_sample", "n_divergent"});
  for (const auto& l : r.levels) {
    levels.add_row({std::int64_t{l.level}, l.h, l.n_samples, l.mean, l.variance, l.kurtosis, l.cost_per_sample,
                    l.n_divergent});
  }
  CsvTable result({"preset", "epsilon", "estimate", "reference", "error", "T", "h0", "L", "total_cost", "bias_sq",
                   "variance", "ergodic_sq", "h0_over_hmax"});
  result.add_row({std::string(preset.model.name), cfg.epsilon, r.estimate, preset.reference_value,
                  r.estimate - preset.reference_value, r.plan.T, r.plan.h0, std::int64_t{r.plan.L}, r.total_cost,
                  r.mse_budget_split.bias_sq, r.mse_budget_split.variance, r.mse_budget_split.ergodic_sq,
                  r.plan.h0 / h_max(r.plan.T, cfg.c0)});
  Outputs out;
  out.emplace_back("levels.csv", std::move(levels));
  out.emplace_back("result.csv", std::move(result));
  return out;
}

template <int D>
Outputs cmd_level_study(const Context& ctx, const Preset<D>& preset) {
  const auto sweep = level_sweep<D>(preset, study_settings(ctx, preset));
  Outputs out;
  out.emplace_back("level_study.csv", level_stats_table(sweep));
  return out;
}

template <int D>
Outputs cmd_rate(const Context& ctx, const Preset<D>& preset, RateQuantity q) {
  const auto sweep = level_sweep<D>(preset, study_settings(ctx, preset));
  const auto fit = fit_rate(sweep, q);
  for (const auto& note : fit.notes) std::cerr << "note: " << note << '\n';
  Outputs out;
  out.emplace_back(q == RateQuantity::strong_error ? "strong_error.csv" : "variance_rate.csv", rate_table(sweep, fit));
  return out;
}

template <int D>
Outputs cmd_kurtosis(const Context& ctx, const Preset<D>& preset) {
  const auto sweep = level_sweep<D>(preset, study_settings(ctx, preset));
  const auto k = kurtosis_from_sweep(sweep);
  CsvTable t({"level", "h", "n_samples", "kurtosis", "spearman_rho", "increasing"});
  for (const auto& st : sweep) {
    t.add_row({std::int64_t{st.level}, st.h, st.n_samples, st.kurtosis, k.spearman_rho, std::int64_t{k.increasing}});
  }
  Outputs out;
  out.emplace_back("kurtosis.csv", std::move(t));
  return out;
}

template <int D>
Outputs cmd_divergence(const Context& ctx, const Preset<D>& preset) {
  const double spring = study_spring(ctx, preset);
  const double h = positive_double(ctx.doc, "h");
  const double T = positive_double(ctx.doc, "T");
  const double nu1 = ctx.doc.get_double("nu1").value_or(1.0);
  const auto n = positive_int(ctx.doc, "n_samples", 100000);
  as_config("T, h", [&] { return steps_for(T, h, true); });
  const auto rep = as_config("nu1, h", [&] {
    return divergence_probability<D>(preset, spring, h, T, nu1, n, ctx.seed, ctx.threads, ctx.scheme);
  });
  CsvTable t({"preset", "spring", "h", "T", "nu1", "threshold", "n_samples", "n_exceed", "n_nonfinite", "p_hat",
              "max_gap"});
  t.add_row({std::string(preset.model.name), spring, rep.h, rep.T, rep.nu1, rep.threshold, rep.n_samples,
             rep.n_exceed, rep.n_nonfinite, rep.p_hat, rep.max_gap});
  Outputs out;
  out.emplace_back("divergence.csv", std::move(t));
  return out;
}

template <int D>
Outputs cmd_variance_vs_T(const Context& ctx, const Preset<D>& preset) {
  const double spring = study_spring(ctx, preset);
  const double h = positive_double(ctx.doc, "h");
  const auto T_list = require_doubles(ctx.doc, "T_list");
  const auto n = positive_int(ctx.doc, "n_samples", 100000);
  for (double T : T_list) as_config("T_list, h", [&] { return steps_for(T, h, true); });
  const auto fit = as_config("T_list", [&] {
    return variance_vs_T_study<D>(preset, spring, h, T_list, n, ctx.seed, ctx.threads, ctx.scheme);
  });
  CsvTable t({"T", "variance", "variance_stderr", "slope", "intercept", "linear_r_squared", "quadratic_r_squared",
              "quadratic_gain", "linear"});
  for (std::size_t i = 0; i < fit.T.size(); ++i) {
    t.add_row({fit.T[i], fit.variance[i], fit.variance_stderr[i], fit.slope, fit.intercept, fit.linear_r_squared,
               fit.quadratic_r_squared, fit.quadratic_gain, std::int64_t{fit.linear}});
  }
  Outputs out;
  out.emplace_back("variance_vs_T.csv", std::move(t));
  return out;
}

template <int D>
Outputs cmd_cost_sweep(const Context& ctx, const Preset<D>& preset) {
  MlmcConfig cfg = mlmc_config_from(ctx.doc, preset);
  cfg.seed = ctx.seed;
  cfg.threads = ctx.threads;
  cfg.scheme = ctx.scheme;
  const auto eps = require_doubles(ctx.doc, "eps_list");
  for (double e : eps) {
    if (!(e > 0.0 && e < 1.0)) throw ConfigError("eps_list: each epsilon must lie in (0, 1)");
  }
  const double tol = ctx.doc.get_double("cost_tolerance").value_or(0.0);
  if (!(tol >= 0.0)) throw ConfigError("cost_tolerance: must be >= 0");
  const auto study = as_config("eps_list", [&] { return cost_vs_epsilon_study<D>(preset, eps, cfg, tol); });
  CsvTable t({"epsilon", "T", "h0", "L", "total_cost", "normalized_cost", "estimate", "error", "non_increasing"});
  for (const auto& p : study.points) {
    t.add_row({p.epsilon, p.T, p.h0, std::int64_t{p.L}, p.total_cost, p.normalized, p.estimate, p.error,
               std::int64_t{study.non_increasing}});
  }
  Outputs out;
  out.emplace_back("cost_sweep.csv", std::move(t));
  return out;
}

template <int D>
Outputs cmd_ergodic_fit(const Context& ctx, const Preset<D>& preset) {
  const double h = positive_double(ctx.doc, "h");
  const auto grid = require_doubles(ctx.doc, "T_grid");
  const auto n = positive_int(ctx.doc, "n_samples", 100000);
  for (double T : grid) {
    if (!(T > 0.0)) throw ConfigError("T_grid: terminal times must be positive");
    as_config("T_grid, h", [&] { return steps_for(T, h, false); });
  }
  const auto fit = as_config("T_grid", [&] {
    return fit_ergodic_rate<D>(preset, h, grid, n, ctx.seed, ctx.threads, ctx.scheme);
  });
  for (const auto& note : fit.notes) std::cerr << "note: " << note << '\n';
  CsvTable t({"T", "mean", "stderr", "residual", "in_fit", "reference", "mu_star", "lambda_star"});
  for (std::size_t i = 0; i < fit.T.size(); ++i) {
    t.add_row({fit.T[i], fit.mean[i], fit.stderr_[i], fit.residual[i], std::int64_t{i < fit.window},
               preset.reference_value, fit.mu_star, fit.lambda_star});
  }
  Outputs out;
  out.emplace_back("ergodic_fit.csv", std::move(t));
  return out;
}

template <int D>
Outputs cmd_audit_martingale(const Context& ctx, const Preset<D>& preset) {
  const double spring = study_spring(ctx, preset);
  const double h = positive_double(ctx.doc, "h");
  const double T = positive_double(ctx.doc, "T");
  const auto n = positive_int(ctx.doc, "n_samples", 100000);
  as_config("T, h", [&] { return steps_for(T, h, true); });
  const auto a = martingale_audit<D>(preset, spring, h, T, n, ctx.seed, ctx.threads, ctx.scheme);
  CsvTable t({"preset", "spring", "h", "T", "n_samples", "n_divergent", "mean_rf", "stderr_rf", "z_rf", "mean_rc",
              "stderr_rc", "z_rc", "second_moment_rf"});
  t.add_row({std::string(preset.model.name), spring, h, T, a.n_samples, a.n_divergent, a.mean_rf, a.stderr_rf,
             a.z_rf(), a.mean_rc, a.stderr_rc, a.z_rc(), a.second_moment_rf});
  Outputs out;
  out.emplace_back("martingale.csv", std::move(t));
  return out;
}

template <int D>
Outputs cmd_validate_model(const Context& ctx, const Preset<D>& preset) {
  const double tol = ctx.doc.get_double("tolerance").value_or(1e-5);
  if (!(tol > 0.0)) throw ConfigError("tolerance: must be positive");
  const double spring = study_spring(ctx, preset);
  const auto probes = lattice_probes<D>(-3.0, 3.0, 5);
  const auto rep = validate_derivatives<D>(preset.model, std::span<const Vec<D>>(probes), tol);
  const auto wide = lattice_probes<D>(-10.0, 10.0, D == 1 ? 201 : (D == 2 ? 41 : 21));
  const auto diss = estimate_dissipativity<D>(preset.model, std::span<const Vec<D>>(wide));

  CsvTable t({"preset", "check", "value", "threshold", "pass"});
  const std::string name(preset.model.name);
  const char* orders[] = {"jacobian_rel_error", "hessian_rel_error", "laplacian_rel_error"};
  for (int k = 0; k < 3; ++k) {
    t.add_row({name, std::string(orders[k]), rep.max_rel_error[k], tol, std::int64_t{rep.order_pass[k]}});
  }
  t.add_row({name, std::string("dissipativity_alpha"), diss.alpha, 0.0, std::int64_t{diss.alpha > 0.0}});
  t.add_row({name, std::string("dissipativity_beta"), diss.beta, 0.0, std::int64_t{diss.beta >= 0.0}});
  t.add_row({name, std::string("one_sided_lipschitz"), diss.one_sided_lipschitz, 2.0 * spring,
             std::int64_t{diss.one_sided_lipschitz <= 2.0 * spring}});
  if (!rep.pass) {
    std::ostringstream msg;
    msg << "validate-model: derivatives of '" << name << "' disagree with finite differences (max errors "
        << fmt(rep.max_rel_error[0]) << ", " << fmt(rep.max_rel_error[1]) << ", " << fmt(rep.max_rel_error[2])
        << " against tol " << fmt(tol) << ")";
    throw NumericalFailure(msg.str());
  }
  Outputs out;
  out.emplace_back("validate_model.csv", std::move(t));
  return out;
}

Outputs cmd_audit_increments(const Context& ctx) {
  const double h = positive_double(ctx.doc, "h");
  const auto d = positive_int(ctx.doc, "d", 1);
  const auto n = positive_int(ctx.doc, "n_samples", 1000000);
  const auto rep = as_config("h, d", [&] { return moment_audit(h, static_cast<int>(d), n, ctx.seed); });
  CsvTable t({"quantity", "h", "d", "n_samples", "target", "estimate", "stderr", "z"});
  for (const auto& c : rep.checks) {
    t.add_row({c.quantity, rep.h, std::int64_t{rep.d}, rep.n_samples, c.target, c.estimate, c.stderr_, c.z});
  }
  Outputs out;
  out.emplace_back("increments.csv", std::move(t));
  return out;
}

template <int D>
Outputs dispatch(const Context& ctx, const Preset<D>& preset) {
  const std::string& s = ctx.subcommand;
  if (s == "run") return cmd_run(ctx, preset);
  if (s == "level-study") return cmd_level_study(ctx, preset);
  if (s == "variance-study") return cmd_rate(ctx, preset, RateQuantity::variance);
  if (s == "strong-error") return cmd_rate(ctx, preset, RateQuantity::strong_error);
  if (s == "kurtosis") return cmd_kurtosis(ctx, preset);
  if (s == "divergence") return cmd_divergence(ctx, preset);
  if (s == "variance-vs-T") return cmd_variance_vs_T(ctx, preset);
  if (s == "cost-sweep") return cmd_cost_sweep(ctx, preset);
  if (s == "ergodic-fit") return cmd_ergodic_fit(ctx, preset);
  if (s == "audit-martingale") return cmd_audit_martingale(ctx, preset);
  if (s == "validate-model") return cmd_validate_model(ctx, preset);
  throw ConfigError("subcommand: unknown subcommand '" + s + "'");
}

Outputs execute(const Context& ctx) {
  if (ctx.subcommand == "audit-increments") return cmd_audit_increments(ctx);
  return with_preset(preset_from(ctx.doc), [&](auto preset) { return dispatch(ctx, with_reference(preset, ctx.doc)); });
}

/// Writes `<out>/diagnostic.txt`; never replaces an existing file without --force.
void write_diagnostic(const Context& ctx, const std::string& message, const std::vector<LevelEstimate>* levels) {
  std::ostringstream text;
  text << "subcommand: " << ctx.subcommand << '\n'
       << "error: " << message << '\n'
       << "seed: " << ctx.seed << '\n'
       << "config-hash: " << ctx.doc.hash() << '\n';
  if (levels && !levels->empty()) {
    text << "levels:\n";
    for (const auto& l : *levels) {
      text << "  level=" << l.level << " h=" << fmt(l.h) << " n_samples=" << l.n_samples
           << " n_divergent=" << l.n_divergent << " mean=" << fmt(l.mean) << " variance=" << fmt(l.variance)
           << " healthy=" << (l.healthy ? 1 : 0) << '\n';
    }
  }
  try {
    const fs::path path = ctx.out_dir / "diagnostic.txt";
    if (!ctx.force && fs::exists(path)) {
      std::cerr << "warning: not replacing existing " << path.string() << " (pass --force)\n";
      return;
    }
    fs::create_directories(ctx.out_dir);
    std::ofstream(path, std::ios::binary | std::ios::trunc) << text.str();
    std::cerr << "diagnostic written to " << path.string() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "warning: could not write diagnostic file: " << e.what() << '\n';
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Higher-order change-of-measure multilevel Monte Carlo for invariant measures", "ergodic-mlmc"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ERGODIC_MLMC_VERSION));

  std::string config_path;
  std::string out_dir = ".";
  std::string threads_flag;
  std::optional<std::int64_t> seed_flag;
  bool force = false;
  std::map<std::string, std::string> key_values;

  for (const auto& [name, files] : subcommand_outputs()) {
    (void)files;
    CLI::App* sub = app.add_subcommand(name, subcommand_help().at(name));
    sub->add_option("--config", config_path, "Config file (key = value lines)");
    sub->add_option("--out", out_dir, "Output directory, created if absent")->capture_default_str();
    sub->add_option("--seed", seed_flag, "Random seed (non-negative)");
    sub->add_option("--threads", threads_flag, "Worker threads: integer or 'auto'");
    sub->add_flag("--force", force, "Replace existing output files");
    for (const auto& key : ConfigDocument::known_keys()) {
      if (key == "seed" || key == "threads") continue;
      const std::string names = key == "n_samples" ? "--n_samples,--n" : "--" + key;
      sub->add_option(names, key_values[key], "Overrides config key '" + key + "'");
    }
  }

  std::vector<const char*> argv{"ergodic-mlmc"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kConfigError;
  }

  Context ctx;
  ctx.subcommand = app.get_subcommands().front()->get_name();
  ctx.out_dir = out_dir;
  ctx.force = force;
  try {
    if (!config_path.empty()) ctx.doc = ConfigDocument::load(config_path);
    CLI::App* sub = app.get_subcommands().front();
    for (const auto& key : ConfigDocument::known_keys()) {
      if (key == "seed" || key == "threads") continue;
      if (sub->count("--" + key) > 0) ctx.doc.set(key, key_values[key]);
    }
    if (seed_flag) {
      if (*seed_flag < 0) throw ConfigError("seed: must be >= 0");
      ctx.doc.set("seed", std::to_string(*seed_flag));
    }
    if (auto s = ctx.doc.get_int("seed")) {
      if (*s < 0) throw ConfigError("seed: must be >= 0");
      ctx.seed = static_cast<std::uint64_t>(*s);
    }
    if (!threads_flag.empty()) {
      ctx.threads = parse_threads(threads_flag);
    } else if (const char* env = std::getenv("ERGODIC_MLMC_THREADS"); env && *env) {
      ctx.threads = parse_threads(env);
    } else if (auto t = ctx.doc.get_string("threads")) {
      ctx.threads = parse_threads(*t);
    }
    if (auto s = ctx.doc.get_string("scheme")) ctx.scheme = parse_scheme(*s);

    for (const auto& file : subcommand_outputs().at(ctx.subcommand)) {
      const fs::path path = ctx.out_dir / file;
      if (!ctx.force && fs::exists(path))
        throw ConfigError("out: refusing to overwrite existing file '" + path.string() + "' (pass --force)");
    }

    const Outputs outputs = execute(ctx);
    const CsvMetadata meta = ctx.metadata();
    for (const auto& [file, table] : outputs) {
      const fs::path path = ctx.out_dir / file;
      table.write(path.string(), meta, ctx.force);
      std::cerr << "wrote " << path.string() << '\n';
    }
    return kSuccess;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const PreconditionError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const UnhealthyLevelError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    write_diagnostic(ctx, e.what(), &e.levels());
    return kNumericalFailure;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    write_diagnostic(ctx, e.what(), nullptr);
    return kNumericalFailure;
  } catch (const DivergenceError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    write_diagnostic(ctx, e.what(), nullptr);
    return kNumericalFailure;
  } catch (const EvaluationError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    write_diagnostic(ctx, e.what(), nullptr);
    return kNumericalFailure;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
}

}  // namespace ergodic_mlmc::cli
