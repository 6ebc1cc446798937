#include "paraqk/epsnum/finite_diff.hpp"

#include <vector>

#include "paraqk/error.hpp"

namespace paraqk {

namespace {

Eigen::MatrixXd nested(const MatrixField& f, std::vector<double>& x, std::span<const std::uint8_t> alpha,
                       std::size_t var, int remaining, double h) {
  while (var < alpha.size() && remaining == 0) {
    ++var;
    if (var < alpha.size()) remaining = alpha[var];
  }
  if (var >= alpha.size()) return f(x);
  const double x0 = x[var];
  x[var] = x0 + 0.5 * h;
  const Eigen::MatrixXd up = nested(f, x, alpha, var, remaining - 1, h);
  x[var] = x0 - 0.5 * h;
  const Eigen::MatrixXd dn = nested(f, x, alpha, var, remaining - 1, h);
  x[var] = x0;
  return (up - dn) / h;
}

Eigen::MatrixXd stencil(const MatrixField& f, std::span<const double> x, std::span<const std::uint8_t> alpha,
                        double h) {
  std::vector<double> xx(x.begin(), x.end());
  if (alpha.empty()) return f(xx);
  return nested(f, xx, alpha, 0, alpha[0], h);
}

}  // namespace

Eigen::MatrixXd fd_partial(const MatrixField& f, std::span<const double> x, std::span<const std::uint8_t> alpha,
                           double h, int levels) {
  if (alpha.size() != x.size()) throw UsageError("fd_partial: multi-index does not match the point");
  if (!(h > 0.0)) throw UsageError("fd_partial: step must be positive");
  if (levels < 1 || levels > 6) throw UsageError("fd_partial: levels must lie in [1, 6]");
  // Richardson table in h^2; prev and cur are consecutive rows.
  std::vector<Eigen::MatrixXd> prev, cur;
  double step = h;
  for (int i = 0; i < levels; ++i, step *= 0.5) {
    cur.assign(1, stencil(f, x, alpha, step));
    double w = 4.0;
    for (int j = 1; j <= i; ++j, w *= 4.0)
      cur.push_back((w * cur[static_cast<std::size_t>(j - 1)] - prev[static_cast<std::size_t>(j - 1)]) / (w - 1.0));
    prev.swap(cur);
  }
  return prev.back();
}

double fd_partial(const ScalarField& f, std::span<const double> x, std::span<const std::uint8_t> alpha, double h,
                  int levels) {
  const MatrixField m = [&f](std::span<const double> y) { return Eigen::MatrixXd::Constant(1, 1, f(y)); };
  return fd_partial(m, x, alpha, h, levels)(0, 0);
}

double fd_step(int k) {
  switch (k) {
    case 0:
    case 1: return 1e-3;
    case 2: return 1e-2;
    case 3: return 3e-2;
    default: return 6e-2;
  }
}

}  // namespace paraqk
