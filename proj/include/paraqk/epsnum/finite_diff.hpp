#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include <Eigen/Core>

namespace paraqk {

using ScalarField = std::function<double(std::span<const double>)>;
using MatrixField = std::function<Eigen::MatrixXd(std::span<const double>)>;

/// Mixed partial d^alpha f(x) from nested central differences,
/// Richardson-extrapolated over the steps h, h/2, ..., h/2^(levels-1)
/// (error O(h^(2 levels))).
double fd_partial(const ScalarField& f, std::span<const double> x, std::span<const std::uint8_t> alpha, double h,
                  int levels = 3);
/// Componentwise version for matrix-valued fields.
Eigen::MatrixXd fd_partial(const MatrixField& f, std::span<const double> x, std::span<const std::uint8_t> alpha,
                           double h, int levels = 3);

/// Default base step for a derivative of total degree k.
double fd_step(int k);

/// |a - b| / max(|b|, floor).
inline double rel_error(double a, double b, double floor = 1.0) {
  const double d = a > b ? a - b : b - a;
  const double s = b < 0 ? -b : b;
  return d / (s > floor ? s : floor);
}

}  // namespace paraqk
