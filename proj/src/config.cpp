#include "ergodic_mlmc/config.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ergodic_mlmc {

namespace {

std::string trim(std::string s) {
  boost::algorithm::trim(s);
  return s;
}

double to_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + text + "'");
  }
}

std::int64_t to_int(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    // Accept integral values written in floating notation, e.g. 1e5.
    const double d = to_double(key, text);
    if (d != static_cast<double>(static_cast<std::int64_t>(d)))
      throw ConfigError(key + ": expected an integer, got '" + text + "'");
    return static_cast<std::int64_t>(d);
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  boost::algorithm::split(parts, text, boost::algorithm::is_any_of(","));
  for (auto& p : parts) p = trim(p);
  parts.erase(std::remove(parts.begin(), parts.end(), std::string{}), parts.end());
  return parts;
}

}  // namespace

const std::vector<std::string>& ConfigDocument::known_keys() {
  static const std::vector<std::string> keys{
      "preset",      "epsilon",   "spring",        "seed",     "payoff_class", "xi",
      "mu_star",     "lambda_star", "c0",          "c_bias",   "T",            "h0",
      "L",           "N",         "pilot_samples", "scheme",   "threads",      "max_divergent_fraction",
      "n_samples",   "levels",    "h",             "nu1",      "T_list",       "eps_list",
      "T_grid",      "d",         "cost_tolerance", "reference", "tolerance"};
  return keys;
}

ConfigDocument ConfigDocument::parse(const std::string& text) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  ConfigDocument doc;
  for (const auto& [key, node] : tree) {
    if (!node.empty()) throw ConfigError(key + ": sections are not supported; the config is a flat document");
    doc.set(key, node.data());
  }
  return doc;
}

ConfigDocument ConfigDocument::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str());
}

void ConfigDocument::set(const std::string& key, const std::string& value) {
  const auto& keys = known_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw ConfigError(key + ": unknown config key");
  values_[key] = trim(value);
}

std::optional<std::string> ConfigDocument::get_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::optional<double> ConfigDocument::get_double(const std::string& key) const {
  const auto s = get_string(key);
  if (!s) return std::nullopt;
  return to_double(key, *s);
}

std::optional<std::int64_t> ConfigDocument::get_int(const std::string& key) const {
  const auto s = get_string(key);
  if (!s) return std::nullopt;
  return to_int(key, *s);
}

std::optional<std::vector<double>> ConfigDocument::get_doubles(const std::string& key) const {
  const auto s = get_string(key);
  if (!s) return std::nullopt;
  std::vector<double> out;
  for (const auto& p : split_list(*s)) out.push_back(to_double(key, p));
  return out;
}

std::optional<std::vector<std::int64_t>> ConfigDocument::get_ints(const std::string& key) const {
  const auto s = get_string(key);
  if (!s) return std::nullopt;
  std::vector<std::int64_t> out;
  for (const auto& p : split_list(*s)) out.push_back(to_int(key, p));
  return out;
}

double ConfigDocument::require_double(const std::string& key) const {
  const auto v = get_double(key);
  if (!v) throw ConfigError(key + ": required but missing");
  return *v;
}

std::int64_t ConfigDocument::require_int(const std::string& key) const {
  const auto v = get_int(key);
  if (!v) throw ConfigError(key + ": required but missing");
  return *v;
}

std::string ConfigDocument::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& [k, v] : values_) {
    if (k == "threads") continue;  // never affects results
    for (char ch : k + "=" + v + "\n") {
      h ^= static_cast<unsigned char>(ch);
      h *= 0x100000001b3ULL;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

PresetName preset_from(const ConfigDocument& doc) {
  const auto name = doc.get_string("preset");
  if (!name) throw ConfigError("preset: required but missing");
  return parse_preset_name(*name);
}

Scheme parse_scheme(const std::string& s) {
  if (s == "ito_taylor_15" || s == "taylor") return Scheme::ito_taylor_15;
  if (s == "euler_maruyama" || s == "em") return Scheme::euler_maruyama;
  throw ConfigError("scheme: unknown scheme '" + s + "' (expected ito_taylor_15 or euler_maruyama)");
}

PayoffClass parse_payoff_class(const std::string& s) {
  if (s == "lipschitz") return PayoffClass::lipschitz;
  if (s == "discontinuous" || s == "indicator") return PayoffClass::discontinuous;
  throw ConfigError("payoff_class: unknown class '" + s + "' (expected lipschitz or discontinuous)");
}

std::string to_string(Scheme s) {
  return s == Scheme::ito_taylor_15 ? "ito_taylor_15" : "euler_maruyama";
}

std::string to_string(PayoffClass c) {
  return c == PayoffClass::lipschitz ? "lipschitz" : "discontinuous";
}

unsigned parse_threads(const std::string& s) {
  if (s == "auto") return 0;
  const auto n = to_int("threads", s);
  if (n < 0) throw ConfigError("threads: must be >= 0 or 'auto'");
  return static_cast<unsigned>(n);
}

void apply_common(const ConfigDocument& doc, MlmcConfig& cfg) {
  if (auto v = doc.get_double("epsilon")) cfg.epsilon = *v;
  if (auto v = doc.get_double("c0")) cfg.c0 = *v;
  if (auto v = doc.get_double("c_bias")) cfg.c_bias = *v;
  if (auto v = doc.get_double("xi")) cfg.xi = *v;
  if (auto v = doc.get_string("payoff_class")) cfg.payoff_class = parse_payoff_class(*v);
  if (auto v = doc.get_string("scheme")) cfg.scheme = parse_scheme(*v);
  if (auto v = doc.get_int("seed")) {
    if (*v < 0) throw ConfigError("seed: must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(*v);
  }
  if (auto v = doc.get_int("pilot_samples")) cfg.pilot_samples = *v;
  if (auto v = doc.get_string("threads")) cfg.threads = parse_threads(*v);
  if (auto v = doc.get_double("max_divergent_fraction")) cfg.max_divergent_fraction = *v;
  if (auto v = doc.get_double("T")) cfg.overrides.T = *v;
  if (auto v = doc.get_double("h0")) cfg.overrides.h0 = *v;
  if (auto v = doc.get_int("L")) cfg.overrides.L = static_cast<int>(*v);
  if (auto v = doc.get_ints("N")) cfg.overrides.N = *v;
  validate(cfg);
}

}  // namespace ergodic_mlmc
