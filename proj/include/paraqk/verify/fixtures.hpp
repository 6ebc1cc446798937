#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "paraqk/sk/prepotential.hpp"

namespace paraqk::verify {

/// Built-in prepotentials by name: "quadratic" (eta = diag(1, -1, ..., -1)),
/// "cubic" (X^1 X^2 X^3 / X^0, n = 3) and "mixed" (quadratic plus a
/// rational cubic correction, n >= 1).
sk::Prepotential make_prepotential(const std::string& name, int n, int eps1, double kappa = 1.0);

/// Uniform sampling box for conical coordinates.
struct ConicalBox {
  double x0_re_lo = 0.6, x0_re_hi = 1.4;
  double x0_im = 0.3;
  double xu_re = 0.35;
  double xu_im = 0.35;
  double xu_im_floor = 0.0;  // |Im X^u| >= floor when positive
};

ConicalBox default_box(const std::string& prepotential);

/// Deterministic sampler of admissible CASK points X (rejection sampling,
/// budget 10^4 draws per point). Throws ConfigError on starvation.
class ConicalSampler {
 public:
  ConicalSampler(const sk::Prepotential& f, ConicalBox box, std::uint64_t seed);

  /// Next admissible X; extra is an additional acceptance test.
  template <class Pred>
  std::vector<EpsComplex> next(Pred&& extra) {
    for (int attempt = 0; attempt < kRetryBudget; ++attempt) {
      auto x = draw();
      if (accept(x) && extra(x)) return x;
    }
    throw ConfigError("sampler starvation: no admissible point within the retry budget");
  }
  std::vector<EpsComplex> next() {
    return next([](const std::vector<EpsComplex>&) { return true; });
  }

  double uniform(double lo, double hi);

  static constexpr int kRetryBudget = 10000;

 private:
  std::vector<EpsComplex> draw();
  bool accept(const std::vector<EpsComplex>& x) const;

  const sk::Prepotential* f_;
  ConicalBox box_;
  std::mt19937_64 rng_;
};

}  // namespace paraqk::verify
