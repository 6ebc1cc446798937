#include "paraqk/fs/fs_metric.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "paraqk/cmap/rigid_cmap.hpp"
#include "paraqk/corr/correspondence.hpp"
#include "paraqk/corr/inputs.hpp"
#include "paraqk/epsnum/finite_diff.hpp"
#include "paraqk/geom/curvature.hpp"
#include "paraqk/geom/tensor_ops.hpp"
#include "paraqk/sk/cask.hpp"

namespace paraqk::fs {

namespace {

std::vector<RJet> constants(std::span<const double> v) { return {v.begin(), v.end()}; }

JetVec unit(int i, int dim) {
  JetVec e(dim);
  for (int k = 0; k < dim; ++k) e(k) = RJet(k == i ? 1.0 : 0.0);
  return e;
}

JetMat zeros(int dim) {
  JetMat m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int k = 0; k < dim; ++k) m(i, k) = RJet(0.0);
  return m;
}

JetMat scaled(const JetMat& m, const RJet& s) {
  JetMat out = m;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index k = 0; k < m.cols(); ++k) out(i, k) = s * m(i, k);
  return out;
}

struct Layout {
  int n, k, dim;
  int rho() const { return 0; }
  int phi() const { return 1; }
  int ab(int i) const { return 2 + i; }             // 0 <= i < 2n
  int p(int a) const { return 2 + 2 * n + a; }      // 0 <= a < 2k: (zeta~, zeta)
};

std::array<JetMat, 5> terms_jets(const sk::Prepotential& f, int eps2, const RJet& c, std::span<const RJet> y,
                                 bool deformed) {
  const int n = f.n();
  const Layout l{n, n + 1, 4 * (n + 1)};
  if (static_cast<int>(y.size()) != l.dim) throw UsageError("fs: wrong number of coordinates");
  const double e1 = f.eps1();
  const double e2 = eps2;
  const RJet& rho = y[0];
  check_domain(rho.value(), c.value());

  const auto psk = sk::psk_jets(f, y.subspan(2, static_cast<std::size_t>(n)),
                                y.subspan(static_cast<std::size_t>(2 + n), static_cast<std::size_t>(n)));
  std::array<JetMat, 5> t;
  for (auto& m : t) m = zeros(l.dim);

  const RJet rpc = rho + c;
  const RJet rp2c = rho + 2.0 * c;
  const RJet rho2inv = inverse(rho * rho);

  JetMat gbar = zeros(l.dim);
  for (int i = 0; i < 2 * n; ++i)
    for (int j = 0; j < 2 * n; ++j) gbar(l.ab(i), l.ab(j)) = psk.g_bar(i, j);
  t[0] = deformed ? scaled(gbar, rpc / rho) : gbar;

  const JetVec drho = unit(l.rho(), l.dim);
  t[1] = scaled(geom::sq(drho), deformed ? 0.25 * rho2inv * rp2c / rpc : 0.25 * rho2inv);

  JetVec theta = unit(l.phi(), l.dim);
  for (int i = 0; i < l.k; ++i) {
    theta(l.p(i)) = theta(l.p(i)) + y[static_cast<std::size_t>(l.p(l.k + i))];
    theta(l.p(l.k + i)) = theta(l.p(l.k + i)) - y[static_cast<std::size_t>(l.p(i))];
  }
  if (deformed) {
    for (int i = 0; i < 2 * n; ++i) theta(l.ab(i)) = theta(l.ab(i)) + (e1 * e2) * c * psk.dck(i);
  }
  t[2] = scaled(geom::sq(theta), deformed ? (-0.25 * e1) * rho2inv * rpc / rp2c : (-0.25 * e1) * rho2inv);

  const JetMat hhat = sk::hhat_matrix(psk.cal_r, psk.cal_i, f.eps1());
  const RJet hcoef = (-0.5 * e2) * inverse(rho);
  for (int a = 0; a < 2 * l.k; ++a)
    for (int b = 0; b < 2 * l.k; ++b) t[3](l.p(a), l.p(b)) = hcoef * hhat(a, b);

  if (deformed) {
    JetVec u = JetVec::Constant(l.dim, RJet(0.0));
    JetVec v = JetVec::Constant(l.dim, RJet(0.0));
    for (int i = 0; i < l.k; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      u(l.p(i)) = real_part(psk.z[ui]);
      v(l.p(i)) = imag_part(psk.z[ui]);
      u(l.p(l.k + i)) = real_part(psk.hol.fi[ui]);
      v(l.p(l.k + i)) = imag_part(psk.hol.fi[ui]);
    }
    JetMat uv = geom::sq(u);
    const JetMat vv = geom::sq(v);
    for (int i = 0; i < l.dim; ++i)
      for (int j = 0; j < l.dim; ++j) uv(i, j) = uv(i, j) - e1 * vv(i, j);
    t[4] = scaled(uv, (2.0 * e1 * e2) * c * rho2inv * exp(psk.kpot));
  }
  return t;
}

JetMat sum(const std::array<JetMat, 5>& t) {
  JetMat g = t[0];
  for (int i = 1; i < 5; ++i) g = g + t[static_cast<std::size_t>(i)];
  return g;
}

double rel_max(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return geom::max_abs(a - b) / std::max(1.0, geom::max_abs(b));
}

}  // namespace

geom::Chart fs_chart(int n) {
  std::vector<std::string> labels{"rho", "phi"};
  for (int mu = 1; mu <= n; ++mu) labels.push_back("a" + std::to_string(mu));
  for (int mu = 1; mu <= n; ++mu) labels.push_back("b" + std::to_string(mu));
  for (int i = 0; i <= n; ++i) labels.push_back("zt" + std::to_string(i));
  for (int i = 0; i <= n; ++i) labels.push_back("ze" + std::to_string(i));
  return geom::Chart("fs", labels);
}

std::vector<double> fs_coordinates(const FsPoint& p) {
  std::vector<double> y{p.rho, p.phi};
  for (const auto& z : p.z) y.push_back(z.re);
  for (const auto& z : p.z) y.push_back(z.im);
  y.insert(y.end(), p.zeta_t.begin(), p.zeta_t.end());
  y.insert(y.end(), p.zeta.begin(), p.zeta.end());
  return y;
}

FsPoint fs_point(std::span<const double> y, int eps1, double c) {
  if (y.size() < 4 || y.size() % 4 != 0) throw UsageError("fs_point: wrong number of coordinates");
  const auto k = y.size() / 4;
  const auto n = k - 1;
  FsPoint p;
  p.rho = y[0];
  p.phi = y[1];
  p.c = c;
  for (std::size_t mu = 0; mu < n; ++mu) p.z.emplace_back(y[2 + mu], y[2 + n + mu], eps1);
  p.zeta_t.assign(y.begin() + static_cast<std::ptrdiff_t>(2 + 2 * n), y.begin() + static_cast<std::ptrdiff_t>(2 + 2 * n + k));
  p.zeta.assign(y.begin() + static_cast<std::ptrdiff_t>(2 + 2 * n + k), y.end());
  return p;
}

void check_domain(double rho, double c) {
  if (!(rho + c > 0.0)) throw DomainError("fs: rho + c > 0 violated (rho = " + std::to_string(rho) + ")");
  if (!(rho > 0.0)) throw DomainError("fs: rho > 0 violated (rho = " + std::to_string(rho) + ")");
  if (std::abs(rho + 2.0 * c) < 1e-12 * std::max(1.0, std::abs(c)))
    throw DomainError("fs: rho != -2c violated (boundary between the two domains)");
}

JetMat fs_metric_jets(const sk::Prepotential& f, int eps2, const RJet& c, std::span<const RJet> y) {
  return sum(terms_jets(f, eps2, c, y, true));
}

FsTerms fs_terms(const sk::Prepotential& f, int eps2, const FsPoint& p) {
  const auto y = fs_coordinates(p);
  const auto t = terms_jets(f, eps2, RJet(p.c), constants(y), true);
  FsTerms out;
  for (std::size_t i = 0; i < 5; ++i) out.terms[i] = values(t[i]);
  return out;
}

Eigen::MatrixXd fs_eval(const sk::Prepotential& f, int eps2, const FsPoint& p) {
  const auto y = fs_coordinates(p);
  return values(fs_metric_jets(f, eps2, RJet(p.c), constants(y)));
}

Eigen::MatrixXd fs_undeformed(const sk::Prepotential& f, int eps2, const FsPoint& p) {
  const auto y = fs_coordinates(p);
  return values(sum(terms_jets(f, eps2, RJet(0.0), constants(y), false)));
}

geom::Chart slice_chart(int n) {
  std::vector<std::string> labels;
  for (int i = 0; i <= n; ++i) labels.push_back("x" + std::to_string(i));
  for (int i = 1; i <= n; ++i) labels.push_back("v" + std::to_string(i));
  for (int a = 0; a < 2 * n + 2; ++a) labels.push_back("qh" + std::to_string(a));
  labels.push_back("s");
  return geom::Chart("slice", labels);
}

JetVec coordinate_map_jets(const sk::Prepotential& f, int eps2, double c, std::span<const RJet> m) {
  const int n = f.n();
  const int k = n + 1;
  const int dim = 4 * k;
  if (static_cast<int>(m.size()) != dim) throw UsageError("coordinate_map: wrong number of coordinates");
  std::vector<RJet> x(m.begin(), m.begin() + k);
  std::vector<RJet> v{RJet(0.0)};
  v.insert(v.end(), m.begin() + k, m.begin() + 2 * k - 1);
  const auto cask = sk::conical_jets(f, x, v);
  JetVec y(dim);
  y(0) = 2.0 * cask.h - c;
  y(1) = (4.0 * eps2) * m[static_cast<std::size_t>(dim - 1)];
  const CJet x0inv = inverse(cask.x[0]);
  for (int mu = 0; mu < n; ++mu) {
    const CJet z = cask.x[static_cast<std::size_t>(mu + 1)] * x0inv;
    y(2 + mu) = real_part(z);
    y(2 + n + mu) = imag_part(z);
  }
  // p = 2 Omega qhat.
  for (int i = 0; i < k; ++i) {
    y(2 + 2 * n + i) = 2.0 * m[static_cast<std::size_t>(2 * k - 1 + k + i)];
    y(2 + 2 * n + k + i) = -2.0 * m[static_cast<std::size_t>(2 * k - 1 + i)];
  }
  return y;
}

FsPoint coordinate_map(const sk::Prepotential& f, int eps2, double c, std::span<const double> m) {
  const auto y = values(coordinate_map_jets(f, eps2, c, constants(m)));
  std::vector<double> yy(y.data(), y.data() + y.size());
  return fs_point(yy, f.eps1(), c);
}

std::vector<double> coordinate_map_inverse(const sk::Prepotential& f, int eps2, const FsPoint& p) {
  check_domain(p.rho, p.c);
  const int n = f.n();
  const int k = n + 1;
  const auto psk = sk::psk_data(f, p.z);
  const double scale = std::sqrt(p.rho + p.c) * std::exp(0.5 * psk.kpot);
  std::vector<double> m(static_cast<std::size_t>(4 * k));
  m[0] = scale;
  for (int mu = 0; mu < n; ++mu) {
    m[static_cast<std::size_t>(1 + mu)] = scale * p.z[static_cast<std::size_t>(mu)].re;
    m[static_cast<std::size_t>(k + mu)] = scale * p.z[static_cast<std::size_t>(mu)].im;
  }
  // qhat = -Omega p / 2.
  for (int i = 0; i < k; ++i) {
    m[static_cast<std::size_t>(2 * k - 1 + i)] = -0.5 * p.zeta[static_cast<std::size_t>(i)];
    m[static_cast<std::size_t>(2 * k - 1 + k + i)] = 0.5 * p.zeta_t[static_cast<std::size_t>(i)];
  }
  m[static_cast<std::size_t>(4 * k - 1)] = 0.25 * eps2 * p.phi;
  return m;
}

std::vector<double> slice_to_bundle(int n, std::span<const double> m) {
  const auto k = static_cast<std::size_t>(n + 1);
  if (m.size() != 4 * k) throw UsageError("slice_to_bundle: wrong number of coordinates");
  std::vector<double> p(m.begin(), m.begin() + static_cast<std::ptrdiff_t>(k));
  p.push_back(0.0);
  p.insert(p.end(), m.begin() + static_cast<std::ptrdiff_t>(k), m.end());
  return p;
}

FsChecks fs_checks(const sk::Prepotential& f, int eps2, double c, std::span<const double> m) {
  const int n = f.n();
  const int k = n + 1;
  const int dim = 4 * k;
  const int e1 = f.eps1();
  FsChecks out;

  const auto space = JetSpace::get(dim, 1);
  std::vector<RJet> mj;
  for (int i = 0; i < dim; ++i) mj.push_back(RJet::variable(space, i, m[static_cast<std::size_t>(i)]));
  const JetVec yj = coordinate_map_jets(f, eps2, c, mj);
  Eigen::MatrixXd jac(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) jac(i, j) = yj(i).gradient(j);
  const Eigen::VectorXd yv = values(yj);
  const FsPoint p = fs_point(std::vector<double>(yv.data(), yv.data() + dim), e1, c);

  const Eigen::MatrixXd gfs = fs_eval(f, eps2, p);
  out.symmetry = geom::max_abs(gfs - gfs.transpose()) / std::max(1.0, geom::max_abs(gfs));

  const auto in = corr::cmap_input(f, eps2, c);
  const Eigen::MatrixXd gprime = corr::qk_metric(in, corr::cmap_slice(n), slice_to_bundle(n, m));
  const double fval = -e1 * p.rho;
  const double sigma = fval > 0 ? 1.0 : -1.0;
  out.factor = 0.5 * e1 * sigma;
  out.equivalence = rel_max(out.factor * jac.transpose() * gfs * jac, gprime);

  const auto back = coordinate_map_inverse(f, eps2, p);
  for (int i = 0; i < dim; ++i)
    out.round_trip = std::max(out.round_trip, std::abs(back[static_cast<std::size_t>(i)] - m[static_cast<std::size_t>(i)]));

  std::vector<EpsComplex> x;
  x.emplace_back(m[0], 0.0, e1);
  for (int mu = 1; mu <= n; ++mu) x.emplace_back(m[static_cast<std::size_t>(mu)], m[static_cast<std::size_t>(k + mu - 1)], e1);
  const auto cp = sk::cask_point(f, x);
  out.rho_identity = std::abs(p.rho + c - cp.r2) / std::max(1.0, cp.r2);

  // phi* d^c K against (2 eps1 / H) D^T Omega q with the v^0 entry dropped.
  {
    std::vector<double> xr, vr;
    for (const auto& xi : x) {
      xr.push_back(xi.re);
      vr.push_back(xi.im);
    }
    const auto cj = sk::conical_jets(f, constants(xr), constants(vr));
    const Eigen::MatrixXd d = values(sk::conical_jacobian(cj.n_mat, cj.r_mat));
    const Eigen::VectorXd q = values(cj.q);
    const Eigen::VectorXd full = (2.0 * e1 / cj.h.value()) * d.transpose() * cmap::symplectic(k) * q;
    Eigen::VectorXd expected = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i < k; ++i) expected(i) = full(i);
    for (int mu = 1; mu <= n; ++mu) expected(k + mu - 1) = full(k + mu);
    const auto psk = sk::psk_data(f, p.z);
    const Eigen::VectorXd pulled = jac.block(2, 0, 2 * n, dim).transpose() * psk.dck;
    out.dck_pullback = geom::max_abs(pulled - expected) / std::max(1.0, geom::max_abs(expected));
  }

  {
    FsPoint p0 = p;
    p0.c = 0.0;
    if (p0.rho > 0.0) out.c0_reduction = rel_max(fs_eval(f, eps2, p0), fs_undeformed(f, eps2, p0));
  }

  {
    const auto cspace = JetSpace::get(dim + 1, 1);
    std::vector<RJet> yc;
    for (int i = 0; i < dim; ++i) yc.push_back(RJet::variable(cspace, i, yv(i)));
    const RJet cj = RJet::variable(cspace, dim, c);
    const JetMat g = fs_metric_jets(f, eps2, cj, yc);
    const std::vector<double> c0{c};
    const std::vector<std::uint8_t> alpha{1};
    double worst = 0.0;
    for (int i = 0; i < dim; ++i)
      for (int j = i; j < dim; ++j) {
        const ScalarField fc = [&](std::span<const double> cc) {
          FsPoint q = p;
          q.c = cc[0];
          return fs_eval(f, eps2, q)(i, j);
        };
        const double fd = fd_partial(fc, c0, alpha, fd_step(1));
        worst = std::max(worst, rel_error(g(i, j).gradient(dim), fd));
      }
    out.c_derivative = worst;
  }
  return out;
}

double fs_nu(const sk::Prepotential& f, int eps2, const FsPoint& p) {
  const auto y = fs_coordinates(p);
  const int dim = static_cast<int>(y.size());
  const auto space = JetSpace::get(dim, 2);
  std::vector<RJet> yj;
  for (int i = 0; i < dim; ++i) yj.push_back(RJet::variable(space, i, y[static_cast<std::size_t>(i)]));
  return geom::curvature(fs_metric_jets(f, eps2, RJet(p.c), yj)).nu;
}

}  // namespace paraqk::fs
