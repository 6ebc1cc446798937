#include "paraqk/verify/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "paraqk/error.hpp"

namespace paraqk::verify {

namespace {

using nlohmann::json;

void only_keys(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [k, v] : j.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* s) { return k == s; }))
      throw ConfigError(where + ": unknown key '" + k + "'");
  }
}

template <class T>
T get(const json& j, const std::string& key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config key '" + key + "': " + e.what());
  }
}

int sign_value(const json& v) {
  if (!v.is_number_integer() || (v.get<int>() != 1 && v.get<int>() != -1))
    throw ConfigError("signs: entries must be +1 or -1");
  return v.get<int>();
}

}  // namespace

std::optional<double> RunConfig::tolerance_for(const std::string& id) const {
  if (auto it = tolerances.find(id); it != tolerances.end()) return it->second;
  std::optional<double> best;
  std::size_t best_len = 0;
  for (const auto& [key, tol] : tolerances) {
    if (key.size() < 1 || key.back() != '*') continue;
    const std::string prefix = key.substr(0, key.size() - 1);
    if (id.compare(0, prefix.size(), prefix) == 0 && (!best || prefix.size() >= best_len)) {
      best = tol;
      best_len = prefix.size();
    }
  }
  return best;
}

RunConfig parse_config(const json& j) {
  only_keys(j, {"fixture", "signs", "c", "samples", "derivative_points", "seed", "suites", "tolerances", "out"},
            "config");
  RunConfig c;
  if (j.contains("fixture")) {
    const json& f = j["fixture"];
    only_keys(f, {"prepotential", "n", "kappa"}, "fixture");
    if (f.contains("prepotential")) c.fixture.prepotential = get<std::string>(f, "prepotential");
    if (f.contains("n")) c.fixture.n = get<int>(f, "n");
    if (f.contains("kappa")) c.fixture.kappa = get<double>(f, "kappa");
    if (c.fixture.n < 0 || c.fixture.n > 3) throw ConfigError("fixture.n must lie in [0, 3]");
  }
  if (j.contains("signs")) {
    if (!j["signs"].is_array() || j["signs"].empty()) throw ConfigError("signs: expected a non-empty array");
    c.signs.clear();
    for (const auto& s : j["signs"]) {
      if (!s.is_array() || s.size() != 2) throw ConfigError("signs: entries must be [eps1, eps2] pairs");
      c.signs.push_back({sign_value(s[0]), sign_value(s[1])});
    }
  }
  if (j.contains("c")) {
    c.c = get<std::vector<double>>(j, "c");
    if (c.c.empty()) throw ConfigError("c: expected at least one value");
    for (double v : c.c)
      if (!std::isfinite(v)) throw ConfigError("c: values must be finite");
  }
  if (j.contains("samples")) c.samples = get<int>(j, "samples");
  if (c.samples < 1 || c.samples > 100) throw ConfigError("samples must lie in [1, 100]");
  if (j.contains("derivative_points")) c.derivative_points = get<int>(j, "derivative_points");
  if (c.derivative_points < 0 || c.derivative_points > c.samples)
    throw ConfigError("derivative_points must lie in [0, samples]");
  if (j.contains("seed")) c.seed = get<std::uint64_t>(j, "seed");
  if (j.contains("suites")) {
    c.suites = get<std::vector<std::string>>(j, "suites");
    for (const auto& s : c.suites)
      if (std::find(all_suites().begin(), all_suites().end(), s) == all_suites().end())
        throw ConfigError("unknown suite '" + s + "'");
  }
  if (j.contains("tolerances")) {
    if (!j["tolerances"].is_object()) throw ConfigError("tolerances: expected an object");
    for (const auto& [k, v] : j["tolerances"].items()) {
      if (!v.is_number() || !(v.get<double>() > 0.0)) throw ConfigError("tolerance '" + k + "' must be positive");
      c.tolerances[k] = v.get<double>();
    }
  }
  if (j.contains("out")) c.out = get<std::string>(j, "out");
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

nlohmann::json to_json(const RunConfig& c) {
  json j;
  j["fixture"] = {{"prepotential", c.fixture.prepotential}, {"n", c.fixture.n}, {"kappa", c.fixture.kappa}};
  j["signs"] = json::array();
  for (const auto& s : c.signs) j["signs"].push_back({s[0], s[1]});
  j["c"] = c.c;
  j["samples"] = c.samples;
  j["derivative_points"] = c.derivative_points;
  j["seed"] = c.seed;
  j["suites"] = c.suites;
  j["tolerances"] = c.tolerances;
  return j;
}

}  // namespace paraqk::verify
