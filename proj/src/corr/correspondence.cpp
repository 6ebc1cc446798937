#include "paraqk/corr/correspondence.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>

#include "paraqk/geom/curvature.hpp"
#include "paraqk/geom/forms.hpp"
#include "paraqk/geom/tensor_ops.hpp"

namespace paraqk::corr {

namespace {

using geom::Form;

std::array<int, 4> signs(int e1, int e2) { return {-1, e1, e2, -e1 * e2}; }

// Cyclic partners (beta, gamma) of alpha = 1, 2, 3.
constexpr int kBeta[4] = {0, 2, 3, 1};
constexpr int kGamma[4] = {0, 3, 1, 2};

JetMat lift(const JetMat& m) {
  const Eigen::Index n = m.rows();
  JetMat out(n + 1, n + 1);
  for (Eigen::Index i = 0; i <= n; ++i)
    for (Eigen::Index j = 0; j <= n; ++j) out(i, j) = (i < n && j < n) ? m(i, j) : RJet(0.0);
  return out;
}

JetVec lift(const JetVec& v, const RJet& last) {
  JetVec out(v.size() + 1);
  out.head(v.size()) = v;
  out(v.size()) = last;
  return out;
}

JetVec drop(const JetVec& v, int l) {
  JetVec out(v.size() - 1);
  for (Eigen::Index i = 0, k = 0; i < v.size(); ++i)
    if (i != l) out(k++) = v(i);
  return out;
}

JetMat drop(const JetMat& m, int l) {
  JetMat out(m.rows() - 1, m.cols() - 1);
  for (Eigen::Index i = 0, r = 0; i < m.rows(); ++i) {
    if (i == l) continue;
    for (Eigen::Index j = 0, c = 0; j < m.cols(); ++j)
      if (j != l) out(r, c++) = m(i, j);
    ++r;
  }
  return out;
}

JetMat times(const RJet& s, const JetMat& m) {
  JetMat out = m;
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = s * out(i);
  return out;
}

JetVec times(const RJet& s, const JetVec& v) {
  JetVec out = v;
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = s * out(i);
  return out;
}

// (iota_V w)_b = V^a w_ab
JetVec contract(const JetVec& v, const JetMat& w) { return w.transpose() * v; }

RJet dot(const JetVec& a, const JetVec& b) {
  RJet s(0.0);
  for (Eigen::Index i = 0; i < a.size(); ++i) s += a(i) * b(i);
  return s;
}

double rel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

void check_signs(const CorrespondenceInput& in) {
  if ((in.eps1 != 1 && in.eps1 != -1) || (in.eps2 != 1 && in.eps2 != -1))
    throw ConfigError("correspondence: eps1 and eps2 must be +1 or -1");
  if (!in.base) throw UsageError("correspondence: missing base evaluator");
}

}  // namespace

geom::Chart bundle_chart(const CorrespondenceInput& in) {
  auto labels = in.base_chart.labels;
  labels.push_back("s");
  return geom::Chart(in.base_chart.name + "+s", labels);
}

BundleJets bundle_jets(const CorrespondenceInput& in, std::span<const RJet> p) {
  check_signs(in);
  const int m = in.base_chart.dim();
  if (static_cast<int>(p.size()) != m + 1) throw UsageError("bundle_jets: expected a point of P");
  const BaseJets b = in.base(p.first(static_cast<std::size_t>(m)));
  if (b.g.rows() != m || b.z.size() != m || b.eta.size() != m)
    throw UsageError("bundle_jets: base evaluator returned wrong shapes");
  BundleJets out;
  out.base.g = lift(b.g);
  for (std::size_t a = 0; a < 3; ++a) {
    out.base.j[a] = lift(b.j[a]);
    out.base.omega[a] = lift(b.omega[a]);
  }
  out.base.z = lift(b.z, RJet(0.0));
  out.base.f = b.f;
  out.base.eta = lift(b.eta, RJet(0.0));
  out.f = b.f;
  out.eta = lift(b.eta, RJet(1.0));
  out.beta = out.base.g * out.base.z;
  out.f1 = b.f - 0.5 * dot(out.base.z, out.beta);

  const int e2 = in.eps2;
  // theta_0 = df/2 = -omega_1(Z, .)/2; the second form keeps the jet order.
  out.theta[0] = times(RJet(-0.5), contract(out.base.z, out.base.omega[0]));
  out.theta[1] = out.eta + times(RJet(0.5), out.beta);
  out.theta[2] = times(RJet(-0.5 * e2), contract(out.base.z, out.base.omega[2]));
  out.theta[3] = times(RJet(0.5 * e2), contract(out.base.z, out.base.omega[1]));
  out.g_p = out.base.g + times(2.0 / out.f1, geom::sq(out.eta));
  out.z1 = lift(b.z, out.f1 - dot(b.z, b.eta));
  return out;
}

BundleData bundle_data(const CorrespondenceInput& in, std::span<const double> p) {
  std::vector<RJet> pj(p.begin(), p.end());
  const auto b = bundle_jets(in, pj);
  BundleData out;
  out.f = b.f.value();
  out.f1 = b.f1.value();
  if (out.f == 0.0) throw AssumptionViolation("bundle_data: f vanishes (sigma undefined)");
  if (out.f1 == 0.0) throw AssumptionViolation("bundle_data: f1 vanishes (sigma1 undefined)");
  for (std::size_t a = 0; a < 4; ++a) out.theta[a] = values(b.theta[a]);
  out.g_p = values(b.g_p);
  out.z1 = values(b.z1);
  out.eta = values(b.eta);
  return out;
}

BundleChecks bundle_checks(const CorrespondenceInput& in, std::span<const double> p) {
  const auto pj = identity_jets<double>(p, 1);
  const auto b = bundle_jets(in, pj);
  const auto e = signs(in.eps1, in.eps2);
  BundleChecks out;
  for (int a = 1; a <= 3; ++a) {
    const Form lhs = geom::exterior_derivative(Form::one_form(b.theta[static_cast<std::size_t>(a)]));
    const Form rhs = static_cast<double>(in.eps1 * e[static_cast<std::size_t>(a)]) *
                     Form::two_form(b.base.omega[static_cast<std::size_t>(a - 1)], 1e-9);
    out.lemma1[static_cast<std::size_t>(a - 1)] = (lhs - rhs).max_abs();
  }
  const Eigen::VectorXd z1 = values(b.z1);
  const double f = b.f.value();
  const double f1 = b.f1.value();
  const Eigen::VectorXd t1 = values(b.theta[1]) - (f / f1) * values(b.eta);
  auto on_z1 = [&](const JetVec& t) { return std::abs(Eigen::VectorXd(values(t)).dot(z1)); };
  out.kernel = std::max({on_z1(b.theta[0]), on_z1(b.theta[2]), on_z1(b.theta[3]), std::abs(t1.dot(z1))});
  out.eta_norm = std::abs(b.eta(b.eta.size() - 1).value() - 1.0);
  const Form deta = geom::exterior_derivative(Form::one_form(b.eta));
  const Form dbeta = geom::exterior_derivative(Form::one_form(b.beta));
  out.eta_curvature = (deta - Form::two_form(b.base.omega[0], 1e-9) + 0.5 * dbeta).max_abs();
  out.killing_z = geom::max_abs(geom::lie_derivative(b.base.g, {0, 2}, b.base.z));
  const Eigen::VectorXd beta = values(b.beta);
  const double gzz = Eigen::VectorXd(values(b.base.z)).dot(beta);
  out.f1_identity = std::abs(f1 - (f - 0.5 * gzz)) / std::max(1.0, std::abs(f1));
  return out;
}

QkJets qk_jets(const CorrespondenceInput& in, const Slice& slice, std::span<const double> p, int order) {
  check_signs(in);
  const int m = in.base_chart.dim();
  if (static_cast<int>(p.size()) != m + 1) throw UsageError("qk_jets: expected a point of P");
  const int l = slice.coordinate;
  if (l < 0 || l > m) throw ConfigError("qk_jets: slice coordinate out of range");
  if (order > in.max_order) throw ConfigError("qk_jets: jet order exceeds what the input supports");
  if (std::abs(p[static_cast<std::size_t>(l)] - slice.value) > 1e-12 * std::max(1.0, std::abs(slice.value)))
    throw DomainError("qk_jets: point is not on M'");

  std::vector<double> y0;
  for (int i = 0; i <= m; ++i)
    if (i != l) y0.push_back(p[static_cast<std::size_t>(i)]);
  const auto w = identity_jets<double>(y0, order);
  const JetSpacePtr sp = w.front().space();
  std::vector<RJet> pj;
  for (int i = 0, k = 0; i <= m; ++i)
    pj.push_back(i == l ? RJet::constant(sp, slice.value) : w[static_cast<std::size_t>(k++)]);
  const BundleJets b = bundle_jets(in, pj);

  const Eigen::VectorXd z1 = values(b.z1);
  if (std::abs(z1(l)) < 1e-8 * std::max(1.0, z1.cwiseAbs().maxCoeff()))
    throw GeometryError("qk_jets: M' is not transversal to Z_1^P");
  const double f0 = b.f.value();
  const double f10 = b.f1.value();
  if (f0 == 0.0) throw AssumptionViolation("qk_jets: f vanishes (sigma undefined)");
  if (f10 == 0.0) throw AssumptionViolation("qk_jets: f1 vanishes (sigma1 undefined)");

  QkJets q;
  q.dim = m;
  q.eps1 = in.eps1;
  q.eps2 = in.eps2;
  q.sigma = f0 > 0 ? 1 : -1;
  q.sigma1 = f10 > 0 ? 1 : -1;
  q.slice = slice;
  q.f = b.f;
  const auto e = signs(in.eps1, in.eps2);
  const RJet absf = static_cast<double>(q.sigma) * b.f;

  JetMat quad = geom::sq(b.theta[1]);
  quad -= times(RJet(in.eps1), geom::sq(b.theta[0]));
  quad -= times(RJet(in.eps2), geom::sq(b.theta[3]));
  quad -= times(RJet(e[3]), geom::sq(b.theta[2]));
  const JetMat gfull = times(1.0 / (2.0 * absf), JetMat(b.g_p - times(2.0 / b.f, quad)));
  q.g = drop(gfull, l);
  for (std::size_t a = 0; a < 4; ++a) q.theta_bar[a] = times(1.0 / b.f, drop(b.theta[a], l));

  // X = X_P - a Z_1^P with a fixed by tangency to M'.
  q.a = (l == m) ? RJet(1.0) / b.z1(l) : RJet::constant(sp, 0.0);
  JetVec xp(m + 1);
  for (int i = 0; i <= m; ++i) xp(i) = RJet(i == m ? 1.0 : 0.0);
  q.x = drop(JetVec(xp - times(q.a, b.z1)), l);

  if (order >= 1) {
    for (int a = 1; a <= 3; ++a) {
      const auto ua = static_cast<std::size_t>(a);
      const Form d = geom::exterior_derivative(Form::one_form(q.theta_bar[ua]));
      const Form t = geom::wedge(Form::one_form(q.theta_bar[static_cast<std::size_t>(kBeta[a])]),
                                 Form::one_form(q.theta_bar[static_cast<std::size_t>(kGamma[a])]));
      const Form w = (0.5 * q.sigma * in.eps1 * e[ua]) * d + static_cast<double>(q.sigma * in.eps2) * t;
      q.omega[ua - 1] = w.matrix();
      q.j[ua - 1] = geom::endomorphism_from_form(q.g, q.omega[ua - 1], e[ua]);
    }
  }

  // Projector construction: Y -> pr(Y~) with Y~ = Y - eta(Y) X_P.
  const Eigen::VectorXd eta = values(b.eta);
  Eigen::MatrixXd phi(m, m);
  for (int c = 0; c < m; ++c) {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(m + 1);
    y(c) = 1.0;
    y(m) = -eta(c);
    y -= (y(l) / z1(l)) * z1;
    for (int i = 0, k = 0; i <= m; ++i)
      if (i != l) phi(k++, c) = y(i);
  }
  q.projector = phi;
  const Eigen::MatrixXd phi_inv = phi.inverse();
  for (std::size_t a = 0; a < 3; ++a) {
    const Eigen::MatrixXd ja = values(b.base.j[a]).topLeftCorner(m, m);
    q.j_projector[a] = phi * ja * phi_inv;
  }
  return q;
}

Eigen::MatrixXd qk_metric(const CorrespondenceInput& in, const Slice& slice, std::span<const double> p) {
  const auto q = qk_jets(in, slice, p, 0);
  Eigen::MatrixXd g = values(q.g);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(g);
  const auto& s = svd.singularValues();
  if (s(s.size() - 1) <= 1e-12 * s(0)) throw DegeneracyError("qk_metric: g' is degenerate");
  return g;
}

QkChecks qk_checks(const CorrespondenceInput& in, const Slice& slice, std::span<const double> p, bool curvature) {
  const QkJets q = qk_jets(in, slice, p, 2);
  const auto e = signs(in.eps1, in.eps2);
  const int n = q.dim;
  QkChecks out;

  const Eigen::MatrixXd g = values(q.g);
  std::array<Eigen::MatrixXd, 3> jv;
  for (std::size_t a = 0; a < 3; ++a) {
    jv[a] = values(q.j[a]);
    out.projector = std::max(out.projector, rel(jv[a], q.j_projector[a]));
  }
  out.algebra = geom::quaternion_algebra_residual(jv, in.eps1, in.eps2, &g);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(g);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= 1e-12 * sv(0)) throw DegeneracyError("qk_checks: g' is degenerate");
  out.condition = sv(0) / sv(sv.size() - 1);
  const double gscale = std::max(1.0, g.cwiseAbs().maxCoeff());
  out.killing = geom::max_abs(geom::lie_derivative(q.g, {0, 2}, q.x)) / gscale;
  out.nijenhuis = 0.0;
  for (double v : geom::nijenhuis(q.j[0])) out.nijenhuis = std::max(out.nijenhuis, std::abs(v));

  std::array<Form, 3> w;
  for (std::size_t a = 0; a < 3; ++a) w[a] = Form::two_form(q.omega[a], 1e-9);
  Form omega4(n, 4);
  for (int a = 1; a <= 3; ++a) {
    const auto ua = static_cast<std::size_t>(a);
    const auto ub = static_cast<std::size_t>(kBeta[a]);
    const auto uc = static_cast<std::size_t>(kGamma[a]);
    const Form lhs = geom::exterior_derivative(w[ua - 1]);
    const Form tb = Form::one_form(q.theta_bar[ub]);
    const Form tc = Form::one_form(q.theta_bar[uc]);
    const Form rhs = (2.0 * e[3]) * (static_cast<double>(e[uc]) * geom::wedge(tb, w[uc - 1]) -
                                     static_cast<double>(e[ub]) * geom::wedge(tc, w[ub - 1]));
    out.domega = std::max(out.domega, (lhs - rhs).max_abs());
    omega4 += static_cast<double>(e[ua]) * geom::wedge(w[ua - 1], w[ua - 1]);
  }
  out.d_omega4 = geom::exterior_derivative(omega4).max_abs();

  // L_X omega' = (0, -2 eps3 a omega'_3, -2 a omega'_2)
  const std::array<Form, 3> expect{Form(n, 2), (-2.0 * e[3]) * (q.a * w[2]), -2.0 * (q.a * w[1])};
  for (std::size_t a = 0; a < 3; ++a)
    out.lie_x_omega[a] = (geom::lie_derivative(w[a], q.x) - expect[a]).max_abs();
  // Same quantity from the moment map mu^X = -J'_1 / (2|f'|) and iota_X theta_bar = (1/f' - a', 0, 0).
  const std::array<Form, 3> from_mu{Form(n, 2), 2.0 * (q.a * w[2]), (2.0 * in.eps1) * (q.a * w[1])};
  for (std::size_t a = 0; a < 3; ++a)
    out.lie_x_omega_mu[a] = (geom::lie_derivative(w[a], q.x) - from_mu[a]).max_abs();

  const RJet absf = static_cast<double>(q.sigma) * q.f;
  const JetVec ix3 = contract(q.x, q.omega[2]);
  const JetVec ix2 = contract(q.x, q.omega[1]);
  out.theta_bar_23 = std::max(geom::max_abs(JetVec(q.theta_bar[2] - times(absf * in.eps2, ix3))),
                              geom::max_abs(JetVec(q.theta_bar[3] + times(absf * in.eps2, ix2))));
  out.a_value = q.a.value();

  if (curvature) {
    const auto cd = geom::curvature(q.g);
    out.nu = cd.nu;
    out.nu_residual = std::abs(cd.nu + 4.0 * in.eps1 * q.sigma);
    out.riemann_symmetry = geom::riemann_symmetry_residual(cd);
    const auto dec = geom::curvature_decomposition(cd, jv, in.eps1, in.eps2);
    out.ricci_w = dec.ricci_w;
    out.q_invariance = dec.q_invariance;
    out.w_norm = dec.w_norm;

    const auto gamma = geom::christoffel(q.g);
    const JetMat mu = times(-1.0 / (2.0 * absf), q.j[0]);
    const auto nabla = geom::covariant_derivative_endomorphism(mu, gamma);
    std::array<Eigen::VectorXd, 3> ix;
    for (std::size_t a = 0; a < 3; ++a) ix[a] = values(contract(q.x, q.omega[a]));
    for (int c = 0; c < n; ++c)
      for (int a = 0; a < n; ++a)
        for (int b2 = 0; b2 < n; ++b2) {
          double rhs = 0.0;
          for (std::size_t al = 0; al < 3; ++al) rhs += ix[al](c) * jv[al](a, b2);
          const double lhs = nabla[static_cast<std::size_t>((c * n + a) * n + b2)];
          out.moment_map = std::max(out.moment_map, std::abs(lhs - rhs));
        }
  }
  return out;
}

double vertical_matrices_residual(const CorrespondenceInput& in, std::span<const double> base_point) {
  check_signs(in);
  std::vector<RJet> u(base_point.begin(), base_point.end());
  const BaseJets b = in.base(u);
  const Eigen::VectorXd z = values(b.z);
  std::array<Eigen::MatrixXd, 3> j;
  for (std::size_t a = 0; a < 3; ++a) j[a] = values(b.j[a]);
  Eigen::MatrixXd frame(z.size(), 4);
  frame.col(0) = z;
  for (int a = 0; a < 3; ++a) frame.col(a + 1) = j[static_cast<std::size_t>(a)] * z;
  const double e1 = in.eps1;
  const double e2 = in.eps2;
  std::array<Eigen::Matrix4d, 3> shown;
  shown[0] << 0, e1, 0, 0, 1, 0, 0, 0, 0, 0, 0, e1, 0, 0, 1, 0;
  shown[1] << 0, 0, e2, 0, 0, 0, 0, -e2, 1, 0, 0, 0, 0, -1, 0, 0;
  shown[2] << 0, 0, 0, -e1 * e2, 0, 0, e2, 0, 0, -e1, 0, 0, 1, 0, 0, 0;
  const auto qr = frame.colPivHouseholderQr();
  if (qr.rank() < 4) throw DegeneracyError("vertical frame (Z, J_a Z) is degenerate");
  double r = 0.0;
  for (std::size_t a = 0; a < 3; ++a) {
    const Eigen::MatrixXd rep = qr.solve(Eigen::MatrixXd(j[a] * frame));
    r = std::max(r, (rep - Eigen::MatrixXd(shown[a])).cwiseAbs().maxCoeff());
  }
  return r;
}

}  // namespace paraqk::corr
