#include "paraqk/verify/report.hpp"

#include <cmath>
#include <cstdio>

namespace paraqk::verify {

namespace {

using nlohmann::json;

std::string number(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// nlohmann keeps object keys sorted, so this is deterministic; only floats
// are formatted here.
void write(const json& j, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (const auto& [k, v] : j.items()) {
      if (!first) out += ",\n";
      first = false;
      out += pad + json(k).dump() + ": ";
      write(v, indent + 2, out);
    }
    out += "\n" + close + "}";
  } else if (j.is_array()) {
    if (j.empty()) {
      out += "[]";
      return;
    }
    bool scalars = true;
    for (const auto& v : j) scalars = scalars && !v.is_structured();
    out += scalars ? "[" : "[\n";
    bool first = true;
    for (const auto& v : j) {
      if (!first) out += scalars ? ", " : ",\n";
      first = false;
      if (!scalars) out += pad;
      write(v, indent + 2, out);
    }
    out += scalars ? "]" : "\n" + close + "]";
  } else if (j.is_number_float()) {
    out += number(j.get<double>());
  } else {
    out += j.dump();
  }
}

const char* bound_name(Bound b) {
  switch (b) {
    case Bound::upper: return "max";
    case Bound::lower: return "min";
    default: return "info";
  }
}

}  // namespace

CheckRecord& ReportBuilder::slot(const CheckSpec& spec) {
  auto [it, inserted] = index_.try_emplace(spec.id, records_.size());
  if (inserted) {
    CheckRecord r;
    r.spec = spec;
    r.value = spec.bound == Bound::lower ? INFINITY : (spec.bound == Bound::info ? -INFINITY : 0.0);
    records_.push_back(r);
  }
  return records_[it->second];
}

void ReportBuilder::add(const CheckSpec& spec, double value) {
  CheckRecord& r = slot(spec);
  ++r.points;
  if (std::isnan(value)) {
    r.value = NAN;
  } else if (!std::isnan(r.value)) {
    r.value = spec.bound == Bound::lower ? std::min(r.value, value) : std::max(r.value, value);
  }
}

void ReportBuilder::error(const CheckSpec& spec, const std::string& what) {
  CheckRecord& r = slot(spec);
  ++r.points;
  if (r.errors++ == 0) r.first_error = what;
}

std::vector<CheckRecord> ReportBuilder::records() const {
  std::vector<CheckRecord> out = records_;
  for (auto& r : out) {
    const bool finite = std::isfinite(r.value);
    switch (r.spec.bound) {
      case Bound::upper: r.pass = r.errors == 0 && finite && r.value <= r.spec.tol; break;
      case Bound::lower: r.pass = r.errors == 0 && finite && r.value >= r.spec.tol; break;
      case Bound::info: r.pass = true; break;
    }
  }
  return out;
}

std::string to_text(const VerificationReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    json e;
    e["id"] = c.spec.id;
    e["anchor"] = c.spec.anchor;
    e["statistic"] = bound_name(c.spec.bound);
    e["points"] = c.points;
    e["value"] = c.value;
    if (c.spec.bound == Bound::info)
      e["tolerance"] = nullptr;
    else
      e["tolerance"] = c.spec.tol;
    e["errors"] = c.errors;
    if (c.errors) e["first_error"] = c.first_error;
    e["pass"] = c.pass;
    checks.push_back(e);
  }
  json doc;
  doc["schema"] = kSchemaVersion;
  doc["config"] = r.config;
  doc["checks"] = checks;
  doc["summary"] = {{"checks", static_cast<int>(r.checks.size())}, {"failed", r.failed}, {"pass", r.pass()}};
  std::string out;
  write(doc, 0, out);
  out += "\n";
  return out;
}

}  // namespace paraqk::verify
