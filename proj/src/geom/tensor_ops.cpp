#include "paraqk/geom/tensor_ops.hpp"

#include <cmath>

namespace paraqk::geom {

namespace {

// dv[c][a] = d_a V^c
std::vector<std::vector<RJet>> jacobian(const JetVec& v) {
  const auto n = static_cast<std::size_t>(v.size());
  std::vector<std::vector<RJet>> dv(n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t a = 0; a < n; ++a) dv[c].push_back(v(static_cast<Eigen::Index>(c)).derivative(static_cast<int>(a)));
  return dv;
}

RJet transport(const RJet& t, const JetVec& v) {
  if (t.is_constant()) return RJet(0.0);
  RJet acc(0.0);
  for (Eigen::Index c = 0; c < v.size(); ++c) acc = acc + v(c) * t.derivative(static_cast<int>(c));
  return acc;
}

bool is_zero(const RJet& x) { return x.is_constant() && x.value() == 0.0; }

}  // namespace

JetMat lie_derivative(const JetMat& t, Valence valence, const JetVec& v) {
  const Eigen::Index n = v.size();
  if (t.rows() != n || t.cols() != n) throw UsageError("lie_derivative: dimension mismatch");
  const bool covariant = valence == Valence{0, 2};
  const bool endo = valence == Valence{1, 1};
  if (!covariant && !endo) throw UsageError("lie_derivative: only valence (0,2) and (1,1) are supported for matrices");
  const auto dv = jacobian(v);
  JetMat out(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      RJet acc = transport(t(a, b), v);
      for (Eigen::Index c = 0; c < n; ++c) {
        const RJet& dcb = dv[static_cast<std::size_t>(c)][static_cast<std::size_t>(b)];
        if (covariant) {
          const RJet& dca = dv[static_cast<std::size_t>(c)][static_cast<std::size_t>(a)];
          if (!is_zero(dca)) acc = acc + t(c, b) * dca;
          if (!is_zero(dcb)) acc = acc + t(a, c) * dcb;
        } else {
          const RJet& dac = dv[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)];
          if (!is_zero(dac)) acc = acc - t(c, b) * dac;
          if (!is_zero(dcb)) acc = acc + t(a, c) * dcb;
        }
      }
      out(a, b) = acc;
    }
  }
  return out;
}

JetVec lie_derivative_covector(const JetVec& a, const JetVec& v) {
  const Eigen::Index n = v.size();
  if (a.size() != n) throw UsageError("lie_derivative: dimension mismatch");
  const auto dv = jacobian(v);
  JetVec out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    RJet acc = transport(a(i), v);
    for (Eigen::Index c = 0; c < n; ++c) {
      const RJet& d = dv[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)];
      if (!is_zero(d)) acc = acc + a(c) * d;
    }
    out(i) = acc;
  }
  return out;
}

JetVec lie_bracket(const JetVec& v, const JetVec& w) {
  if (v.size() != w.size()) throw UsageError("lie_bracket: dimension mismatch");
  JetVec out(v.size());
  for (Eigen::Index a = 0; a < v.size(); ++a) out(a) = transport(w(a), v) - transport(v(a), w);
  return out;
}

RJet directional(const RJet& f, const JetVec& v) { return transport(f, v); }

JetVec differential(const RJet& f) {
  if (f.is_constant()) throw UsageError("differential: constant jet has no chart");
  JetVec out(f.nvars());
  for (int i = 0; i < f.nvars(); ++i) out(i) = f.derivative(i);
  return out;
}

std::vector<double> nijenhuis(const JetMat& j, double tol) {
  const int n = static_cast<int>(j.rows());
  const Eigen::MatrixXd jv = values(j);
  const Eigen::MatrixXd sq = jv * jv;
  const double eps = sq(0, 0) > 0 ? 1.0 : -1.0;
  if (max_abs(sq - eps * Eigen::MatrixXd::Identity(n, n)) > tol)
    throw UsageError("nijenhuis: J^2 is not +Id or -Id");
  // dj[d][a][b] = d_d J^a_b
  std::vector<double> dj(static_cast<std::size_t>(n * n * n));
  for (int d = 0; d < n; ++d)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) dj[static_cast<std::size_t>((d * n + a) * n + b)] = j(a, b).gradient(d);
  auto D = [&](int d, int a, int b) { return dj[static_cast<std::size_t>((d * n + a) * n + b)]; };
  std::vector<double> out(static_cast<std::size_t>(n * n * n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        double s = 0.0;
        for (int d = 0; d < n; ++d)
          s += jv(d, b) * D(d, a, c) - jv(d, c) * D(d, a, b) + jv(a, d) * D(c, d, b) - jv(a, d) * D(b, d, c);
        out[static_cast<std::size_t>((a * n + b) * n + c)] = s;
      }
  return out;
}


double quaternion_algebra_residual(const std::array<Eigen::MatrixXd, 3>& j, int eps1, int eps2,
                                   const Eigen::MatrixXd* g) {
  const Eigen::Index n = j[0].rows();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  const int eps[3] = {eps1, eps2, -eps1 * eps2};
  double r = 0.0;
  for (int a = 0; a < 3; ++a) {
    r = std::max(r, max_abs(j[static_cast<std::size_t>(a)] * j[static_cast<std::size_t>(a)] - eps[a] * id));
    for (int b = a + 1; b < 3; ++b) {
      const auto& ja = j[static_cast<std::size_t>(a)];
      const auto& jb = j[static_cast<std::size_t>(b)];
      r = std::max(r, max_abs(ja * jb + jb * ja));
    }
    if (g) {
      const auto& ja = j[static_cast<std::size_t>(a)];
      r = std::max(r, max_abs(ja.transpose() * *g + *g * ja));
    }
  }
  r = std::max(r, max_abs(j[0] * j[1] - j[2]));
  return r;
}

Eigen::MatrixXd endomorphism_from_form(const Eigen::MatrixXd& g, const Eigen::MatrixXd& omega, int eps) {
  return -eps * g.lu().solve(omega.transpose());
}

JetMat endomorphism_from_form(const JetMat& g, const JetMat& omega, int eps) {
  JetMat rhs = omega.transpose();
  return solve(g, rhs) * RJet(-static_cast<double>(eps));
}

JetMat form_from_endomorphism(const JetMat& g, const JetMat& j, int eps) {
  return (j.transpose() * g) * RJet(-static_cast<double>(eps));
}

JetMat sym(const JetVec& a, const JetVec& b) {
  const Eigen::Index n = a.size();
  JetMat m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < n; ++k) m(i, k) = 0.5 * (a(i) * b(k) + a(k) * b(i));
  return m;
}

JetMat sq(const JetVec& a) {
  const Eigen::Index n = a.size();
  JetMat m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = i; k < n; ++k) {
      m(i, k) = a(i) * a(k);
      m(k, i) = m(i, k);
    }
  return m;
}

JetMat twisted_structure(const JetMat& j, const Eigen::MatrixXd& b, int var, double t) {
  const JetSpacePtr& space = j(0, 0).space();
  if (!space || space->order() < 1) throw UsageError("twisted_structure: J must be a jet of order >= 1");
  const Eigen::Index n = j.rows();
  const RJet y = RJet::variable(space, var, 0.0);
  JetMat a(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) a(r, c) = (r == c ? 1.0 : 0.0) + t * b(r, c) * y;
  return a * j * inverse(a);
}

}  // namespace paraqk::geom
