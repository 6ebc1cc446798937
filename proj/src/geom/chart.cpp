#include "paraqk/geom/chart.hpp"

#include <set>

#include "paraqk/error.hpp"

namespace paraqk::geom {

Chart::Chart(std::string n, std::vector<std::string> l) : name(std::move(n)), labels(std::move(l)) {
  if (labels.empty()) throw UsageError("chart '" + name + "' has no coordinates");
  std::set<std::string> seen(labels.begin(), labels.end());
  if (seen.size() != labels.size()) throw UsageError("chart '" + name + "' has duplicate labels");
}

int Chart::index_of(const std::string& label) const {
  for (int i = 0; i < dim(); ++i)
    if (labels[static_cast<std::size_t>(i)] == label) return i;
  throw UsageError("chart '" + name + "' has no coordinate '" + label + "'");
}

}  // namespace paraqk::geom
