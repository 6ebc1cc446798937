#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace paraqk::verify {

inline const std::vector<std::string>& all_suites() {
  static const std::vector<std::string> s{"derivatives", "sk", "cmap", "qk", "moment", "flat", "fs"};
  return s;
}

struct FixtureConfig {
  std::string prepotential = "quadratic";
  int n = 1;
  double kappa = 1.0;
};

/// Run configuration, read from a JSON document:
///
///   {
///     "fixture": {"prepotential": "quadratic", "n": 1, "kappa": 1.0},
///     "signs": [[-1, -1], [-1, 1], [1, -1], [1, 1]],
///     "c": [0.0, 0.5],
///     "samples": 8,
///     "derivative_points": 2,
///     "seed": 1,
///     "suites": ["qk", "fs"],
///     "tolerances": {"qk.nu": 1e-6, "qk.*": 1e-5},
///     "out": "report.json"
///   }
///
/// Every key is optional; unknown keys are rejected.
struct RunConfig {
  FixtureConfig fixture;
  std::vector<std::array<int, 2>> signs{{-1, -1}, {-1, 1}, {1, -1}, {1, 1}};
  std::vector<double> c{0.0, 0.5};
  int samples = 8;
  int derivative_points = 2;
  std::uint64_t seed = 1;
  std::vector<std::string> suites = all_suites();
  std::map<std::string, double> tolerances;
  std::optional<std::string> out;

  /// Override for a check id: exact match first, then the longest "prefix.*".
  std::optional<double> tolerance_for(const std::string& id) const;
};

/// Throws ConfigError on malformed or out-of-range entries.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
nlohmann::json to_json(const RunConfig& c);

}  // namespace paraqk::verify
