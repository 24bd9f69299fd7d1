#pragma once

#include "ergodic_mlmc/mlmc.hpp"
#include "ergodic_mlmc/presets.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ergodic_mlmc {

/// Flat key = value document. Lines starting with '#' or ';' are comments;
/// list values are comma separated.
class ConfigDocument {
 public:
  static ConfigDocument parse(const std::string& text);
  static ConfigDocument load(const std::string& path);

  /// Known keys; anything else is rejected with ConfigError.
  static const std::vector<std::string>& known_keys();

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  std::optional<std::string> get_string(const std::string& key) const;
  std::optional<double> get_double(const std::string& key) const;
  std::optional<std::int64_t> get_int(const std::string& key) const;
  std::optional<std::vector<double>> get_doubles(const std::string& key) const;
  std::optional<std::vector<std::int64_t>> get_ints(const std::string& key) const;

  double require_double(const std::string& key) const;
  std::int64_t require_int(const std::string& key) const;

  /// FNV-1a over the sorted "key=value" lines, as 16 hex digits.
  std::string hash() const;

 private:
  std::map<std::string, std::string> values_;
};

PresetName preset_from(const ConfigDocument& doc);
Scheme parse_scheme(const std::string& s);
PayoffClass parse_payoff_class(const std::string& s);
std::string to_string(Scheme s);
std::string to_string(PayoffClass c);
/// "auto" or a non-negative integer; 0 and "auto" mean one worker per hardware thread.
unsigned parse_threads(const std::string& s);

/// Fills the preset-independent fields of `cfg` from `doc`.
void apply_common(const ConfigDocument& doc, MlmcConfig& cfg);

/// Builds the driver config; omitted keys fall back to the preset defaults.
template <int D>
MlmcConfig mlmc_config_from(const ConfigDocument& doc, const Preset<D>& preset) {
  MlmcConfig cfg;
  cfg.spring = doc.get_double("spring").value_or(preset.default_spring);
  cfg.mu_star = doc.get_double("mu_star").value_or(preset.default_mu_star);
  cfg.lambda_star = doc.get_double("lambda_star").value_or(preset.default_lambda_star);
  cfg.payoff_class = preset.payoff.kind == PayoffKind::indicator ? PayoffClass::discontinuous
                                                                  : PayoffClass::lipschitz;
  apply_common(doc, cfg);
  return cfg;
}

}  // namespace ergodic_mlmc
