#include "paraqk/cmap/rigid_cmap.hpp"

#include <cmath>

#include "paraqk/geom/forms.hpp"
#include "paraqk/geom/tensor_ops.hpp"

namespace paraqk::cmap {

namespace {

JetMat blocks(const JetMat& a, const JetMat& b, const JetMat& c, const JetMat& d) {
  const Eigen::Index k = a.rows();
  JetMat m(2 * k, 2 * k);
  m.topLeftCorner(k, k) = a;
  m.topRightCorner(k, k) = b;
  m.bottomLeftCorner(k, k) = c;
  m.bottomRightCorner(k, k) = d;
  return m;
}

Eigen::MatrixXd blocks(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Eigen::MatrixXd& c,
                       const Eigen::MatrixXd& d) {
  const Eigen::Index k = a.rows();
  Eigen::MatrixXd m(2 * k, 2 * k);
  m << a, b, c, d;
  return m;
}

JetMat scaled(const JetMat& m, double s) {
  JetMat out = m;
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = s * out(i);
  return out;
}

std::vector<RJet> point_jets(std::span<const EpsComplex> x, std::span<const double> qhat, int order) {
  std::vector<double> u;
  for (const auto& xi : x) u.push_back(xi.re);
  for (const auto& xi : x) u.push_back(xi.im);
  u.insert(u.end(), qhat.begin(), qhat.end());
  return identity_jets<double>(u, order);
}

void check_point(const sk::Prepotential& f, std::span<const EpsComplex> x, std::span<const double> qhat) {
  const auto k = static_cast<std::size_t>(f.n() + 1);
  if (x.size() != k || qhat.size() != 2 * k) throw UsageError("c-map: wrong number of coordinates");
  std::string why;
  if (!sk::admissible(f, x, &why)) throw DomainError("c-map: inadmissible point (" + why + ")");
}

double rel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

}  // namespace

Eigen::MatrixXd symplectic(int k) {
  Eigen::MatrixXd o = Eigen::MatrixXd::Zero(2 * k, 2 * k);
  o.topRightCorner(k, k).setIdentity();
  o.bottomLeftCorner(k, k) = -Eigen::MatrixXd::Identity(k, k);
  return o;
}

geom::Chart cmap_chart(int n) {
  std::vector<std::string> labels;
  for (int i = 0; i <= n; ++i) labels.push_back("x" + std::to_string(i));
  for (int i = 0; i <= n; ++i) labels.push_back("v" + std::to_string(i));
  for (int a = 0; a < 2 * n + 2; ++a) labels.push_back("qh" + std::to_string(a));
  return geom::Chart("cmap", labels);
}

CmapJets cmap_jets(const sk::Prepotential& f, int eps2, std::span<const RJet> u) {
  const int k = f.n() + 1;
  if (static_cast<int>(u.size()) != 4 * k) throw UsageError("cmap_jets: expected 4(n+1) coordinates");
  if (eps2 != 1 && eps2 != -1) throw ConfigError("eps2 must be +1 or -1");
  CmapJets c;
  c.n = f.n();
  c.eps1 = f.eps1();
  c.eps2 = eps2;
  c.cask = sk::conical_jets(f, u.first(static_cast<std::size_t>(k)), u.subspan(static_cast<std::size_t>(k), static_cast<std::size_t>(k)));
  c.hab = sk::hesse_matrix(c.cask.n_mat, c.cask.r_mat, c.eps1);

  const Eigen::Index h = 2 * k;
  const JetMat zero = to_jets(Eigen::MatrixXd::Zero(h, h));
  const JetMat one = to_jets(Eigen::MatrixXd::Identity(h, h));
  const JetMat om = to_jets(symplectic(k));
  c.t = blocks(sk::conical_jacobian(c.cask.n_mat, c.cask.r_mat), zero, zero, one);
  c.t_inv = blocks(sk::conical_jacobian_inverse(c.cask.n_mat, c.cask.r_mat), zero, zero, one);

  // J^a_b = -1/2 Omega^ac H_cb with Omega^ab = -Omega_ab.
  const JetMat js = scaled(om * c.hab, 0.5);
  const JetMat gq = blocks(c.hab, zero, zero, scaled(c.hab, -eps2));
  const std::array<JetMat, 3> jq{blocks(js, zero, zero, scaled(js, -1.0)), blocks(zero, scaled(one, eps2), one, zero),
                                 blocks(zero, scaled(js, eps2), scaled(js, -1.0), zero)};
  const std::array<JetMat, 3> wq{blocks(scaled(om, -2.0), zero, zero, scaled(om, -2.0 * eps2)),
                                 blocks(zero, c.hab, scaled(c.hab, -1.0), zero),
                                 blocks(zero, scaled(om, 2.0), scaled(om, 2.0), zero)};
  c.g = c.t.transpose() * gq * c.t;
  for (int a = 0; a < 3; ++a) {
    c.j[static_cast<std::size_t>(a)] = c.t_inv * jq[static_cast<std::size_t>(a)] * c.t;
    c.omega[static_cast<std::size_t>(a)] = c.t.transpose() * wq[static_cast<std::size_t>(a)] * c.t;
  }

  // Z^b = -eps1 H_a Omega^ab = -eps1 (Omega H_.)^b
  JetVec zq(2 * h);
  const JetVec zx = om * c.cask.dh;
  for (Eigen::Index a = 0; a < h; ++a) {
    zq(a) = -c.eps1 * zx(a);
    zq(h + a) = RJet(0.0);
  }
  c.z = c.t_inv * zq;
  return c;
}

RigidCmapPoint hk_structure(const sk::Prepotential& f, int eps2, std::span<const EpsComplex> x,
                            std::span<const double> qhat) {
  check_point(f, x, qhat);
  const auto u = point_jets(x, qhat, 0);
  const auto c = cmap_jets(f, eps2, u);
  const int k = f.n() + 1;
  RigidCmapPoint p;
  p.q = values(c.cask.q);
  p.qhat = Eigen::Map<const Eigen::VectorXd>(qhat.data(), 2 * k);
  p.p = 2.0 * symplectic(k) * p.qhat;
  p.hab = values(c.hab);
  const Eigen::MatrixXd t = values(c.t);
  const Eigen::MatrixXd ti = values(c.t_inv);
  p.g = ti.transpose() * values(c.g) * ti;
  const int eps[3] = {c.eps1, eps2, -c.eps1 * eps2};
  for (int a = 0; a < 3; ++a) {
    p.j[static_cast<std::size_t>(a)] = t * values(c.j[static_cast<std::size_t>(a)]) * ti;
    p.omega[static_cast<std::size_t>(a)] = ti.transpose() * values(c.omega[static_cast<std::size_t>(a)]) * ti;
    const Eigen::MatrixXd w = -eps[a] * p.j[static_cast<std::size_t>(a)].transpose() * p.g;
    if (rel(w, p.omega[static_cast<std::size_t>(a)]) > 1e-8)
      throw GeometryError("hk_structure: omega_" + std::to_string(a + 1) + " != -eps g(J., .)");
  }
  return p;
}

RotatingField rotating_field(const sk::Prepotential& f, int eps2, double c, std::span<const EpsComplex> x,
                             std::span<const double> qhat) {
  const auto p = hk_structure(f, eps2, x, qhat);
  const auto cp = sk::cask_point(f, x);
  const int e1 = f.eps1();
  const int k = f.n() + 1;
  const auto u = point_jets(x, qhat, 0);
  const auto cj = sk::conical_jets(f, std::span<const RJet>(u).first(static_cast<std::size_t>(k)),
                                   std::span<const RJet>(u).subspan(static_cast<std::size_t>(k), static_cast<std::size_t>(k)));
  RotatingField r;
  r.z = Eigen::VectorXd::Zero(4 * k);
  r.z.head(2 * k) = -e1 * symplectic(k) * values(cj.dh);
  r.f = -e1 * (2.0 * cp.h - c);
  r.f1 = e1 * (2.0 * cp.h + c);
  const double scale = std::max(1.0, std::abs(c) + 2.0 * std::abs(cp.h));
  if (std::abs(r.f) < 1e-12 * scale) throw AssumptionViolation("rotating_field: f vanishes, sigma undefined");
  if (std::abs(r.f1) < 1e-12 * scale) throw AssumptionViolation("rotating_field: f1 vanishes, sigma1 undefined");
  r.beta = p.g * r.z;
  r.beta_z = r.z.dot(r.beta);
  r.sigma = r.f > 0 ? 1 : -1;
  r.sigma1 = r.f1 > 0 ? 1 : -1;
  r.lambda = r.beta_z > 0 ? 1 : (r.beta_z < 0 ? -1 : 0);
  return r;
}

CmapChecks cmap_checks(const sk::Prepotential& f, int eps2, double c, std::span<const EpsComplex> x,
                       std::span<const double> qhat) {
  check_point(f, x, qhat);
  const int k = f.n() + 1;
  const int e1 = f.eps1();
  const int eps[3] = {e1, eps2, -e1 * eps2};
  CmapChecks out;

  const auto pt = hk_structure(f, eps2, x, qhat);
  const auto rf = rotating_field(f, eps2, c, x, qhat);
  out.algebra = geom::quaternion_algebra_residual(pt.j, e1, eps2, &pt.g);
  for (int a = 0; a < 3; ++a) {
    const Eigen::MatrixXd w = -eps[a] * pt.j[static_cast<std::size_t>(a)].transpose() * pt.g;
    out.omega_consistency = std::max(out.omega_consistency, rel(w, pt.omega[static_cast<std::size_t>(a)]));
  }

  const auto u = point_jets(x, qhat, 1);
  const auto cj = cmap_jets(f, eps2, u);
  for (int a = 0; a < 3; ++a)
    out.closure[static_cast<std::size_t>(a)] =
        geom::exterior_derivative(geom::Form::two_form(cj.omega[static_cast<std::size_t>(a)], 1e-9)).max_abs();

  const RJet fj = -e1 * (2.0 * cj.cask.h - c);
  const JetVec df = geom::differential(fj);
  const JetVec izw = cj.omega[0].transpose() * cj.z;
  out.df_omega1 = geom::max_abs(JetVec(df + izw));

  out.lz_g = geom::max_abs(geom::lie_derivative(cj.g, {0, 2}, cj.z));
  out.lz_j1 = geom::max_abs(geom::lie_derivative(cj.j[0], {1, 1}, cj.z));
  const JetMat lj2 = geom::lie_derivative(cj.j[1], {1, 1}, cj.z);
  out.lz_j2 = geom::max_abs(JetMat(lj2 - 2.0 * e1 * truncate(cj.j[2], 0)));

  out.beta_z = std::abs(rf.beta_z + 8.0 * e1 * sk::cask_point(f, x).h);
  const Eigen::MatrixXd om = symplectic(k);
  Eigen::VectorXd beta_q = Eigen::VectorXd::Zero(4 * k);
  beta_q.head(2 * k) = 4.0 * om * pt.q;
  out.beta_formula = (rf.beta - beta_q).cwiseAbs().maxCoeff() / std::max(1.0, beta_q.cwiseAbs().maxCoeff());
  out.f1_identity = std::abs(rf.f1 - (rf.f - 0.5 * rf.beta_z)) / std::max(1.0, std::abs(rf.f1));
  out.p_roundtrip = (pt.qhat - (-0.5 * om * pt.p)).cwiseAbs().maxCoeff();

  // (q, qhat) -> (q, p): compare with the cotangent presentation.
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(2 * k, 2 * k);
  const Eigen::MatrixXd one = Eigen::MatrixXd::Identity(2 * k, 2 * k);
  const Eigen::MatrixXd sinv = blocks(one, zero, zero, (2.0 * om).inverse());
  const Eigen::MatrixXd hinv = pt.hab.inverse();
  const Eigen::MatrixXd w2 = 2.0 * e1 * om * hinv;
  const std::array<Eigen::MatrixXd, 4> expected{
      blocks(pt.hab, zero, zero, e1 * eps2 * hinv), blocks(-2.0 * om, zero, zero, -0.5 * eps2 * om),
      blocks(zero, w2, Eigen::MatrixXd(-w2.transpose()), zero), blocks(zero, one, -one, zero)};
  const std::array<const Eigen::MatrixXd*, 4> actual{&pt.g, &pt.omega[0], &pt.omega[1], &pt.omega[2]};
  for (int i = 0; i < 4; ++i)
    out.cotangent = std::max(out.cotangent, rel(sinv.transpose() * *actual[static_cast<std::size_t>(i)] * sinv,
                                                expected[static_cast<std::size_t>(i)]));
  out.omega_identity = rel(om * pt.hab * om, 4.0 * e1 * hinv);
  return out;
}

}  // namespace paraqk::cmap
