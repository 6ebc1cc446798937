#pragma once

#include <string>
#include <vector>

namespace paraqk::geom {

/// Named coordinate chart; jets evaluated in a chart use variable i for
/// coordinate i.
struct Chart {
  std::string name;
  std::vector<std::string> labels;

  Chart() = default;
  Chart(std::string name, std::vector<std::string> labels);

  int dim() const { return static_cast<int>(labels.size()); }
  int index_of(const std::string& label) const;
};

}  // namespace paraqk::geom
