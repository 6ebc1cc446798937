#include <cmath>
#include <sstream>

#include "paraqk/epsnum/eigen_support.hpp"

namespace paraqk {

JetMat solve(const JetMat& a, const JetMat& b) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || b.rows() != n) throw UsageError("solve: dimension mismatch");
  JetMat m = a;
  JetMat rhs = b;
  double scale = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) scale = std::max(scale, std::abs(m(i, j).value()));
  if (scale == 0.0) throw DegeneracyError("solve: zero matrix");
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index piv = col;
    double best = std::abs(m(col, col).value());
    for (Eigen::Index r = col + 1; r < n; ++r) {
      const double v = std::abs(m(r, col).value());
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best <= 1e-13 * scale) {
      std::ostringstream msg;
      msg << "solve: singular matrix (leading " << col + 1 << "x" << col + 1 << " minor degenerates)";
      throw DegeneracyError(msg.str());
    }
    if (piv != col) {
      m.row(col).swap(m.row(piv));
      rhs.row(col).swap(rhs.row(piv));
    }
    const RJet inv = inverse(m(col, col));
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r == col) continue;
      const RJet& lead = m(r, col);
      if (lead.is_constant() && lead.value() == 0.0) continue;
      const RJet factor = lead * inv;
      for (Eigen::Index c = col; c < n; ++c) m(r, c) = m(r, c) - factor * m(col, c);
      for (Eigen::Index c = 0; c < rhs.cols(); ++c) rhs(r, c) = rhs(r, c) - factor * rhs(col, c);
    }
    for (Eigen::Index c = col; c < n; ++c) m(col, c) = m(col, c) * inv;
    for (Eigen::Index c = 0; c < rhs.cols(); ++c) rhs(col, c) = rhs(col, c) * inv;
  }
  return rhs;
}

JetMat inverse(const JetMat& a) {
  JetMat id(a.rows(), a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) id(i, i) = RJet(1.0);
  return solve(a, id);
}

}  // namespace paraqk

namespace paraqk {

std::vector<RJet> invert_map(std::span<const RJet> y, std::span<const double> w0) {
  const int k = static_cast<int>(y.size());
  JetSpacePtr space;
  for (const auto& yi : y)
    if (!yi.is_constant()) space = yi.space();
  if (!space || space->nvars() != k || static_cast<int>(w0.size()) != k)
    throw UsageError("invert_map: expected k jets in k variables");
  Eigen::MatrixXd d(k, k);
  std::vector<double> y0(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    y0[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i)].value();
    for (int j = 0; j < k; ++j) d(i, j) = y[static_cast<std::size_t>(i)].gradient(j);
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(d);
  if (!lu.isInvertible()) throw DegeneracyError("invert_map: singular Jacobian");
  const Eigen::MatrixXd dinv = lu.inverse();
  const auto yv = identity_jets<double>(y0, space->order());
  std::vector<RJet> w(static_cast<std::size_t>(k));
  auto correct = [&](const std::vector<RJet>& resid) {
    for (int i = 0; i < k; ++i) {
      RJet acc = w[static_cast<std::size_t>(i)];
      for (int j = 0; j < k; ++j) acc = acc + dinv(i, j) * resid[static_cast<std::size_t>(j)];
      w[static_cast<std::size_t>(i)] = acc;
    }
  };
  for (int i = 0; i < k; ++i) w[static_cast<std::size_t>(i)] = RJet::constant(yv[0].space(), w0[static_cast<std::size_t>(i)]);
  std::vector<RJet> resid(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) resid[static_cast<std::size_t>(j)] = yv[static_cast<std::size_t>(j)] - y0[static_cast<std::size_t>(j)];
  correct(resid);
  for (int it = 1; it < space->order(); ++it) {
    MonomialCache<double> cache(w, space->order());
    for (int j = 0; j < k; ++j)
      resid[static_cast<std::size_t>(j)] = yv[static_cast<std::size_t>(j)] - cache.apply(y[static_cast<std::size_t>(j)]);
    correct(resid);
  }
  return w;
}

}  // namespace paraqk
