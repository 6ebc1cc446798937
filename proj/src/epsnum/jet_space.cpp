#include "paraqk/epsnum/jet_space.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <utility>

#include "paraqk/error.hpp"

namespace paraqk {

namespace {

void enumerate(int nvars, int degree, std::vector<std::uint8_t>& current, int var, int remaining,
               std::vector<std::uint8_t>& out) {
  if (var == nvars - 1) {
    current[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(remaining);
    out.insert(out.end(), current.begin(), current.end());
    current[static_cast<std::size_t>(var)] = 0;
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    current[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(e);
    enumerate(nvars, degree, current, var + 1, remaining - e, out);
  }
  current[static_cast<std::size_t>(var)] = 0;
}

double factorial_of(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

}  // namespace

std::uint64_t JetSpace::key(std::span<const std::uint8_t> alpha) {
  std::uint64_t k = 0;
  for (std::uint8_t a : alpha) k = (k << 3) | a;
  return k;
}

JetSpace::JetSpace(int nvars, int order) : nvars_(nvars), order_(order) {
  if (nvars < 0 || nvars > kMaxJetVars) throw ConfigError("jet: unsupported number of variables");
  if (order < 0 || order > kMaxJetOrder) throw ConfigError("jet: order must lie in [0, 5]");

  std::vector<std::uint8_t> current(static_cast<std::size_t>(nvars), 0);
  for (int d = 0; d <= order; ++d) {
    degree_begin_.push_back(degree_.size());
    if (nvars == 0) {
      if (d == 0) degree_.push_back(0);
      continue;
    }
    const std::size_t before = exponents_.size();
    enumerate(nvars, d, current, 0, d, exponents_);
    const std::size_t added = (exponents_.size() - before) / static_cast<std::size_t>(nvars);
    degree_.insert(degree_.end(), added, d);
  }
  degree_begin_.push_back(degree_.size());

  const std::size_t n = degree_.size();
  factorial_.resize(n);
  lookup_.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    double f = 1.0;
    for (std::uint8_t a : exponents(k)) f *= factorial_of(a);
    factorial_[k] = f;
    lookup_.emplace_back(key(exponents(k)), static_cast<std::uint32_t>(k));
  }
  std::sort(lookup_.begin(), lookup_.end());

  std::vector<std::uint8_t> sum(static_cast<std::size_t>(nvars));
  for (std::size_t a = 0; a < n; ++a) {
    const int da = degree_[a];
    for (std::size_t b = 0; b < degree_begin(order - da + 1); ++b) {
      auto ea = exponents(a);
      auto eb = exponents(b);
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = static_cast<std::uint8_t>(ea[i] + eb[i]);
      const auto out = find(sum);
      products_.push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b),
                           static_cast<std::uint32_t>(*out)});
    }
  }
  std::stable_sort(products_.begin(), products_.end(),
                   [](const Product& x, const Product& y) { return x.out < y.out; });

  derivative_.resize(static_cast<std::size_t>(nvars));
  if (order > 0) {
    const std::size_t lower = degree_begin(order);
    for (int v = 0; v < nvars; ++v) {
      auto& terms = derivative_[static_cast<std::size_t>(v)];
      terms.reserve(lower);
      for (std::size_t k = 0; k < lower; ++k) {
        auto e = exponents(k);
        std::copy(e.begin(), e.end(), sum.begin());
        sum[static_cast<std::size_t>(v)] += 1;
        terms.push_back({static_cast<std::uint32_t>(*find(sum)),
                         static_cast<double>(sum[static_cast<std::size_t>(v)])});
      }
    }
  }
}

std::optional<std::size_t> JetSpace::find(std::span<const std::uint8_t> alpha) const {
  int d = 0;
  for (std::uint8_t a : alpha) d += a;
  if (d > order_ || static_cast<int>(alpha.size()) != nvars_) return std::nullopt;
  const std::uint64_t k = key(alpha);
  auto it = std::lower_bound(lookup_.begin(), lookup_.end(), std::make_pair(k, std::uint32_t{0}));
  if (it == lookup_.end() || it->first != k) return std::nullopt;
  return it->second;
}

JetSpacePtr JetSpace::get(int nvars, int order) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, JetSpacePtr> registry;
  std::lock_guard lock(mutex);
  auto& slot = registry[{nvars, order}];
  if (!slot) slot = std::make_shared<const JetSpace>(nvars, order);
  return slot;
}

}  // namespace paraqk
