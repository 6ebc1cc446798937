#include "paraqk/geom/curvature.hpp"

#include <cmath>
#include <limits>

#include "paraqk/geom/tensor_ops.hpp"

namespace paraqk::geom {

namespace {
std::size_t idx3(int n, int a, int b, int c) { return static_cast<std::size_t>((a * n + b) * n + c); }
std::size_t idx4(int n, int a, int b, int c, int d) { return static_cast<std::size_t>(((a * n + b) * n + c) * n + d); }

// Lowest order among non-constant entries; constant matrices are exact.
int jet_order(const JetMat& g) {
  int m = kMaxJetOrder;
  for (Eigen::Index i = 0; i < g.size(); ++i)
    if (!g(i).is_constant()) m = std::min(m, g(i).order());
  return m;
}
}  // namespace

std::vector<RJet> christoffel(const JetMat& g) {
  const int n = static_cast<int>(g.rows());
  if (g.cols() != n) throw UsageError("christoffel: metric must be square");
  if (jet_order(g) < 1) throw UsageError("christoffel: metric jet must have order >= 1");
  const int m = jet_order(g) - 1;
  const JetMat ginv = inverse(truncate(g, m));
  std::vector<RJet> dg(static_cast<std::size_t>(n * n * n));
  for (int d = 0; d < n; ++d)
    for (int b = 0; b < n; ++b)
      for (int c = b; c < n; ++c) {
        dg[idx3(n, d, b, c)] = g(b, c).derivative(d);
        dg[idx3(n, d, c, b)] = dg[idx3(n, d, b, c)];
      }
  std::vector<RJet> low(static_cast<std::size_t>(n * n * n));
  for (int d = 0; d < n; ++d)
    for (int b = 0; b < n; ++b)
      for (int c = b; c < n; ++c) {
        low[idx3(n, d, b, c)] = 0.5 * (dg[idx3(n, b, d, c)] + dg[idx3(n, c, d, b)] - dg[idx3(n, d, b, c)]);
        low[idx3(n, d, c, b)] = low[idx3(n, d, b, c)];
      }
  std::vector<RJet> gamma(static_cast<std::size_t>(n * n * n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = b; c < n; ++c) {
        RJet acc(0.0);
        for (int d = 0; d < n; ++d) acc = acc + ginv(a, d) * low[idx3(n, d, b, c)];
        gamma[idx3(n, a, b, c)] = acc;
        gamma[idx3(n, a, c, b)] = acc;
      }
  return gamma;
}

CurvatureData curvature(const JetMat& g) {
  const int n = static_cast<int>(g.rows());
  if (jet_order(g) < 2) throw UsageError("curvature: metric jet must have order >= 2");
  const auto gamma = christoffel(truncate(g, 2));
  CurvatureData c;
  c.dim = n;
  c.metric = values(g);
  c.metric_inv = c.metric.inverse();
  c.christoffel.resize(gamma.size());
  std::vector<double> dgam(static_cast<std::size_t>(n) * gamma.size());
  for (std::size_t k = 0; k < gamma.size(); ++k) {
    c.christoffel[k] = gamma[k].value();
    for (int e = 0; e < n; ++e) dgam[static_cast<std::size_t>(e) * gamma.size() + k] = gamma[k].gradient(e);
  }
  auto G = [&](int a, int b, int d) { return c.christoffel[idx3(n, a, b, d)]; };
  auto dG = [&](int e, int a, int b, int d) { return dgam[static_cast<std::size_t>(e) * gamma.size() + idx3(n, a, b, d)]; };
  c.riemann.assign(static_cast<std::size_t>(n) * n * n * n, 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int cc = 0; cc < n; ++cc)
        for (int d = cc + 1; d < n; ++d) {
          double r = dG(cc, a, d, b) - dG(d, a, cc, b);
          for (int e = 0; e < n; ++e) r += G(a, cc, e) * G(e, d, b) - G(a, d, e) * G(e, cc, b);
          c.riemann[idx4(n, a, b, cc, d)] = r;
          c.riemann[idx4(n, a, b, d, cc)] = -r;
        }
  c.ricci = ricci_of(c.riemann, n);
  c.scal = (c.metric_inv.cwiseProduct(c.ricci)).sum();
  if (n % 4 == 0) {
    const double m = n / 4;
    c.nu = c.scal / (4.0 * m * (m + 2.0));
  } else {
    c.nu = std::numeric_limits<double>::quiet_NaN();
  }
  return c;
}

Eigen::MatrixXd ricci_of(const std::vector<double>& r, int n) {
  Eigen::MatrixXd ric = Eigen::MatrixXd::Zero(n, n);
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d)
      for (int a = 0; a < n; ++a) ric(b, d) += r[idx4(n, a, b, a, d)];
  return ric;
}

double riemann_symmetry_residual(const CurvatureData& c) {
  const int n = c.dim;
  std::vector<double> low(c.riemann.size(), 0.0);
  for (int a = 0; a < n; ++a)
    for (int e = 0; e < n; ++e) {
      const double gae = c.metric(a, e);
      if (gae == 0.0) continue;
      for (int b = 0; b < n; ++b)
        for (int cc = 0; cc < n; ++cc)
          for (int d = 0; d < n; ++d) low[idx4(n, a, b, cc, d)] += gae * c.r(e, b, cc, d);
    }
  double scale = 1.0;
  for (double v : low) scale = std::max(scale, std::abs(v));
  double res = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int cc = 0; cc < n; ++cc)
        for (int d = 0; d < n; ++d) {
          const double v = low[idx4(n, a, b, cc, d)];
          res = std::max(res, std::abs(v + low[idx4(n, a, b, d, cc)]));
          res = std::max(res, std::abs(v + low[idx4(n, b, a, cc, d)]));
          res = std::max(res, std::abs(v - low[idx4(n, cc, d, a, b)]));
          res = std::max(res, std::abs(c.r(a, b, cc, d) + c.r(a, cc, d, b) + c.r(a, d, b, cc)));
        }
  return res / scale;
}

double metric_compatibility_residual(const JetMat& g) {
  const int n = static_cast<int>(g.rows());
  const auto gamma = christoffel(truncate(g, 1));
  const Eigen::MatrixXd gv = values(g);
  double res = 0.0;
  for (int cc = 0; cc < n; ++cc)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double v = g(a, b).gradient(cc);
        for (int e = 0; e < n; ++e)
          v -= gamma[idx3(n, e, cc, a)].value() * gv(e, b) + gamma[idx3(n, e, cc, b)].value() * gv(a, e);
        res = std::max(res, std::abs(v));
      }
  return res;
}

std::vector<double> model_curvature(const Eigen::MatrixXd& g, const std::array<Eigen::MatrixXd, 3>& j, int eps1,
                                    int eps2, double tol) {
  const int n = static_cast<int>(g.rows());
  if (quaternion_algebra_residual(j, eps1, eps2, &g) > tol)
    throw UsageError("model_curvature: (g, J1, J2, J3) violate the quaternion algebra");
  const int eps[3] = {eps1, eps2, -eps1 * eps2};
  std::array<Eigen::MatrixXd, 3> w;
  for (int a = 0; a < 3; ++a) w[static_cast<std::size_t>(a)] = -eps[a] * j[static_cast<std::size_t>(a)].transpose() * g;
  std::vector<double> r(static_cast<std::size_t>(n) * n * n * n, 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double v = (a == c ? g(d, b) : 0.0) - (a == d ? g(c, b) : 0.0);
          for (std::size_t al = 0; al < 3; ++al)
            v += w[al](d, b) * j[al](a, c) - w[al](c, b) * j[al](a, d) - 2.0 * w[al](c, d) * j[al](a, b);
          r[idx4(n, a, b, c, d)] = 0.25 * v;
        }
  return r;
}

DecompositionResidual curvature_decomposition(const CurvatureData& c, const std::array<Eigen::MatrixXd, 3>& j,
                                              int eps1, int eps2) {
  const int n = c.dim;
  const auto r0 = model_curvature(c.metric, j, eps1, eps2, 1e-6);
  std::vector<double> w(c.riemann.size());
  double rmax = 1.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    w[k] = c.riemann[k] - c.nu * r0[k];
    rmax = std::max(rmax, std::abs(c.riemann[k]));
  }
  DecompositionResidual out;
  for (double v : w) out.w_norm = std::max(out.w_norm, std::abs(v));
  const Eigen::MatrixXd ric_w = ricci_of(w, n);
  out.ricci_w = max_abs(ric_w) / std::max(1.0, max_abs(c.ricci));
  Eigen::MatrixXd wcd(n, n);
  for (int cc = 0; cc < n; ++cc)
    for (int d = cc + 1; d < n; ++d) {
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) wcd(a, b) = w[idx4(n, a, b, cc, d)];
      for (const auto& ja : j) out.q_invariance = std::max(out.q_invariance, max_abs(wcd * ja - ja * wcd));
    }
  out.q_invariance /= rmax;
  return out;
}

std::vector<double> covariant_derivative_endomorphism(const JetMat& a, const std::vector<RJet>& gamma) {
  const int n = static_cast<int>(a.rows());
  const Eigen::MatrixXd av = values(a);
  std::vector<double> out(static_cast<std::size_t>(n * n * n));
  for (int cc = 0; cc < n; ++cc)
    for (int x = 0; x < n; ++x)
      for (int b = 0; b < n; ++b) {
        double v = a(x, b).gradient(cc);
        for (int e = 0; e < n; ++e)
          v += gamma[idx3(n, x, cc, e)].value() * av(e, b) - gamma[idx3(n, e, cc, b)].value() * av(x, e);
        out[idx3(n, cc, x, b)] = v;
      }
  return out;
}

}  // namespace paraqk::geom
