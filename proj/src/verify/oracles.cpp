#include "paraqk/verify/oracles.hpp"

#include <algorithm>
#include <vector>

namespace paraqk::verify {

namespace {

// Multi-indices of the given degree in n variables.
void multi_indices(int n, int degree, bool mixed, std::vector<std::vector<std::uint8_t>>& out) {
  std::vector<std::uint8_t> a(static_cast<std::size_t>(n), 0);
  if (!mixed && degree > 1) {
    for (int i = 0; i < n; ++i) {
      std::fill(a.begin(), a.end(), 0);
      a[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(degree);
      out.push_back(a);
    }
    return;
  }
  std::function<void(int, int)> rec = [&](int var, int left) {
    if (var == n - 1) {
      a[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(left);
      out.push_back(a);
      return;
    }
    for (int k = left; k >= 0; --k) {
      a[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(k);
      rec(var + 1, left - k);
    }
  };
  rec(0, degree);
}

}  // namespace

std::vector<RJet> identity_jets(std::span<const double> x, int order) {
  const auto space = JetSpace::get(static_cast<int>(x.size()), order);
  std::vector<RJet> out;
  for (std::size_t i = 0; i < x.size(); ++i) out.push_back(RJet::variable(space, static_cast<int>(i), x[i]));
  return out;
}

double jet_fd_residual(const JetField& jets, const MatrixField& values, std::span<const double> x, int max_degree,
                       bool mixed) {
  const int n = static_cast<int>(x.size());
  const JetMat m = jets(x, max_degree);
  double worst = 0.0;
  for (int d = 1; d <= max_degree; ++d) {
    std::vector<std::vector<std::uint8_t>> alphas;
    multi_indices(n, d, mixed, alphas);
    double scale = 1.0, diff = 0.0;
    for (const auto& alpha : alphas) {
      const Eigen::MatrixXd fd = fd_partial(values, x, alpha, fd_step(d));
      for (Eigen::Index r = 0; r < fd.rows(); ++r)
        for (Eigen::Index c = 0; c < fd.cols(); ++c) {
          scale = std::max(scale, std::abs(fd(r, c)));
          diff = std::max(diff, std::abs(m(r, c).partial(alpha) - fd(r, c)));
        }
    }
    worst = std::max(worst, diff / scale);
  }
  return worst;
}

double prepotential_fd_residual(const sk::Prepotential& f, std::span<const EpsComplex> x, int max_degree) {
  const int k = static_cast<int>(x.size());
  const CJet t = f.taylor(x, max_degree);
  std::vector<EpsComplex> x0(x.begin(), x.end());
  const MatrixField values = [&](std::span<const double> re) {
    std::vector<EpsComplex> y = x0;
    for (int i = 0; i < k; ++i) y[static_cast<std::size_t>(i)].re = re[static_cast<std::size_t>(i)];
    const EpsComplex v = f.value(y);
    Eigen::MatrixXd out(1, 2);
    out << v.re, v.im;
    return out;
  };
  std::vector<double> re;
  for (const auto& xi : x) re.push_back(xi.re);
  double worst = 0.0;
  for (int d = 1; d <= max_degree; ++d) {
    std::vector<std::vector<std::uint8_t>> alphas;
    multi_indices(k, d, true, alphas);
    double scale = 1.0, diff = 0.0;
    for (const auto& alpha : alphas) {
      const Eigen::MatrixXd fd = fd_partial(values, re, alpha, fd_step(d), 4);
      const EpsComplex jet = t.partial(alpha);
      scale = std::max({scale, std::abs(fd(0, 0)), std::abs(fd(0, 1))});
      diff = std::max({diff, std::abs(jet.re - fd(0, 0)), std::abs(jet.im - fd(0, 1))});
    }
    worst = std::max(worst, diff / scale);
  }
  return worst;
}

}  // namespace paraqk::verify
