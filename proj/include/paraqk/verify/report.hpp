#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace paraqk::verify {

inline constexpr const char* kSchemaVersion = "paraqk-verify/1";

/// upper: pass iff max <= tol. lower: pass iff min >= tol (negative
/// controls). info: logged only, always passes.
enum class Bound { upper, lower, info };

struct CheckSpec {
  std::string id;
  std::string anchor;  // statement checked, or "plumbing"
  double tol = 0.0;
  Bound bound = Bound::upper;
};

struct CheckRecord {
  CheckSpec spec;
  int points = 0;
  double value = 0.0;  // max residual (upper, info) or min value (lower)
  int errors = 0;
  std::string first_error;
  bool pass = true;
};

/// Aggregates per-point values into records, keeping first-seen order.
class ReportBuilder {
 public:
  void add(const CheckSpec& spec, double value);
  /// The check could not be evaluated at a point; counts as a failure.
  void error(const CheckSpec& spec, const std::string& what);
  std::vector<CheckRecord> records() const;

 private:
  CheckRecord& slot(const CheckSpec& spec);
  std::vector<CheckRecord> records_;
  std::map<std::string, std::size_t> index_;
};

struct VerificationReport {
  nlohmann::json config;
  std::vector<CheckRecord> checks;
  int failed = 0;
  bool pass() const { return failed == 0; }
};

/// Canonical text: fixed key order, 2-space indentation, doubles with 17
/// significant digits, non-finite values as null.
std::string to_text(const VerificationReport& r);

}  // namespace paraqk::verify
