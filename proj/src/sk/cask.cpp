#include "paraqk/sk/cask.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <sstream>

namespace paraqk::sk {

namespace {

JetSpacePtr common_space(std::span<const CJet> x) {
  JetSpacePtr sp;
  for (const auto& xi : x)
    if (!xi.is_constant()) {
      if (sp && sp != xi.space()) throw UsageError("holomorphic_jets: inputs live in different spaces");
      sp = xi.space();
    }
  return sp;
}

CJet unit(int eps) { return CJet(EpsComplex(0.0, 1.0, eps)); }

// Re/Im of sum_IJ N_IJ u^I w^J for real N.
CJet contract(const JetMat& n, std::span<const CJet> u, std::span<const CJet> w) {
  CJet acc(0.0);
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < w.size(); ++j)
      acc = acc + to_eps(n(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) * u[i] * w[j];
  return acc;
}

std::vector<CJet> mat_apply(const JetMat& n, std::span<const CJet> u) {
  std::vector<CJet> out;
  for (Eigen::Index i = 0; i < n.rows(); ++i) {
    CJet acc(0.0);
    for (std::size_t j = 0; j < u.size(); ++j) acc = acc + to_eps(n(i, static_cast<Eigen::Index>(j))) * u[j];
    out.push_back(acc);
  }
  return out;
}

JetMat n_from_fij(const std::vector<CJet>& fij, int k, int eps) {
  JetMat n(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) n(i, j) = (-2.0 * eps) * imag_part(fij[static_cast<std::size_t>(i * k + j)]);
  return n;
}

std::pair<JetMat, JetMat> period_matrix(const JetMat& n, const std::vector<CJet>& fij, std::span<const CJet> x,
                                        int eps) {
  const int k = static_cast<int>(x.size());
  const auto nx = mat_apply(n, x);
  const CJet xnx = contract(n, x, x);
  const CJet scale = unit(eps) * CJet(EpsComplex(static_cast<double>(eps))) / xnx;
  JetMat cr(k, k), ci(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      const CJet v = conj(fij[static_cast<std::size_t>(i * k + j)]) - scale * nx[static_cast<std::size_t>(i)] * nx[static_cast<std::size_t>(j)];
      cr(i, j) = real_part(v);
      ci(i, j) = imag_part(v);
    }
  return {cr, ci};
}

JetMat block2(const JetMat& a, const JetMat& b, const JetMat& c, const JetMat& d) {
  const Eigen::Index k = a.rows();
  JetMat m(2 * k, 2 * k);
  m.topLeftCorner(k, k) = a;
  m.topRightCorner(k, k) = b;
  m.bottomLeftCorner(k, k) = c;
  m.bottomRightCorner(k, k) = d;
  return m;
}

JetMat scaled(const JetMat& m, double s) {
  JetMat out = m;
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = s * out(i);
  return out;
}

JetMat identity(Eigen::Index k) {
  JetMat m(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) m(i, j) = RJet(i == j ? 1.0 : 0.0);
  return m;
}

JetMat zeros(Eigen::Index k) {
  JetMat m(k, k);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = RJet(0.0);
  return m;
}

std::vector<RJet> constants(std::span<const double> v) { return {v.begin(), v.end()}; }

}  // namespace

HolomorphicJets holomorphic_jets(const Prepotential& f, std::span<const CJet> x) {
  const int k = f.n() + 1;
  if (static_cast<int>(x.size()) != k) throw UsageError("holomorphic_jets: wrong number of variables");
  const JetSpacePtr sp = common_space(x);
  const int m = sp ? sp->order() : 0;
  if (m + 2 > kMaxJetOrder) throw ConfigError("holomorphic_jets: jet order must not exceed 3");
  std::vector<EpsComplex> x0;
  for (const auto& xi : x) x0.push_back(xi.value());
  if (!f.regular_at(x0)) throw DomainError("prepotential is singular at the sample point");
  const CJet series = f.taylor(x0, m + 2);
  HolomorphicJets out;
  std::vector<CJet> di;
  for (int i = 0; i < k; ++i) di.push_back(series.derivative(i));
  if (!sp) {
    for (int i = 0; i < k; ++i) {
      out.fi.push_back(CJet(di[static_cast<std::size_t>(i)].value()));
      for (int j = 0; j < k; ++j) out.fij.push_back(CJet(di[static_cast<std::size_t>(i)].gradient(j)));
    }
    return out;
  }
  MonomialCache<EpsComplex> cache(x, m + 1);
  for (int i = 0; i < k; ++i) {
    out.fi.push_back(cache.apply(di[static_cast<std::size_t>(i)]));
    for (int j = 0; j < k; ++j) out.fij.push_back(cache.apply(di[static_cast<std::size_t>(i)].derivative(j)));
  }
  return out;
}

ConicalJets conical_jets(const Prepotential& f, std::span<const RJet> x, std::span<const RJet> v) {
  const int k = f.n() + 1;
  if (static_cast<int>(x.size()) != k || static_cast<int>(v.size()) != k)
    throw UsageError("conical_jets: wrong number of coordinates");
  const int eps = f.eps1();
  ConicalJets c;
  c.n = f.n();
  c.eps1 = eps;
  for (int i = 0; i < k; ++i) c.x.push_back(make_eps(x[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(i)], eps));
  c.hol = holomorphic_jets(f, c.x);
  c.n_mat = n_from_fij(c.hol.fij, k, eps);
  c.r_mat.resize(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) c.r_mat(i, j) = 2.0 * real_part(c.hol.fij[static_cast<std::size_t>(i * k + j)]);
  RJet h(0.0);
  c.q.resize(2 * k);
  c.dh.resize(2 * k);
  for (int i = 0; i < k; ++i) {
    const auto u = static_cast<std::size_t>(i);
    const RJet re_f = real_part(c.hol.fi[u]);
    const RJet im_f = imag_part(c.hol.fi[u]);
    h = h + v[u] * re_f - x[u] * im_f;
    c.q(i) = x[u];
    c.q(k + i) = re_f;
    c.dh(i) = (-2.0 * eps) * im_f;
    c.dh(k + i) = (2.0 * eps) * v[u];
  }
  c.h = static_cast<double>(eps) * h;
  return c;
}

JetMat hesse_matrix(const JetMat& n, const JetMat& r, int eps1) {
  const JetMat ninv = inverse(n);
  const JetMat rn = r * ninv;
  return block2(n - scaled(rn * r, eps1), scaled(rn, 2.0 * eps1), scaled(ninv * r, 2.0 * eps1), scaled(ninv, -4.0 * eps1));
}

JetMat hesse_inverse(const JetMat& n, const JetMat& r, int eps1) {
  const JetMat ninv = inverse(n);
  return block2(ninv, scaled(ninv * r, 0.5), scaled(r * ninv, 0.5), scaled(scaled(n, -eps1) + r * ninv * r, 0.25));
}

JetMat conical_jacobian(const JetMat& n, const JetMat& r) {
  const Eigen::Index k = n.rows();
  return block2(identity(k), zeros(k), scaled(r, 0.5), scaled(n, -0.5));
}

JetMat conical_jacobian_inverse(const JetMat& n, const JetMat& r) {
  const Eigen::Index k = n.rows();
  const JetMat ninv = inverse(n);
  return block2(identity(k), zeros(k), ninv * r, scaled(ninv, -2.0));
}

bool admissible(const Prepotential& f, std::span<const EpsComplex> x, std::string* why) {
  auto fail = [why](const char* msg) {
    if (why) *why = msg;
    return false;
  };
  if (static_cast<int>(x.size()) != f.n() + 1) return fail("wrong number of coordinates");
  if (!f.regular_at(x)) return fail("prepotential singular");
  if (!(norm2(x[0]) > 0.0)) return fail("X^0 Xbar^0 > 0 violated");
  if (!(x[0].re > 0.0)) return fail("Re X^0 > 0 violated");
  std::vector<double> re, im;
  for (const auto& xi : x) {
    re.push_back(xi.re);
    im.push_back(xi.im);
  }
  const auto c = conical_jets(f, constants(re), constants(im));
  if (!(c.h.value() > 0.0)) return fail("r^2 > 0 violated");
  const Eigen::MatrixXd n = values(c.n_mat);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(n);
  const auto& s = svd.singularValues();
  if (!(s(s.size() - 1) > 1e-10 * s(0))) return fail("N not invertible");
  return true;
}

CaskPoint cask_point(const Prepotential& f, std::span<const EpsComplex> x) {
  std::string why;
  if (!admissible(f, x, &why)) throw DomainError("inadmissible CASK point: " + why);
  std::vector<double> re, im;
  for (const auto& xi : x) {
    re.push_back(xi.re);
    im.push_back(xi.im);
  }
  const auto c = conical_jets(f, constants(re), constants(im));
  CaskPoint p;
  p.x.assign(x.begin(), x.end());
  p.n_mat = values(c.n_mat);
  p.r_mat = values(c.r_mat);
  p.h = c.h.value();
  p.r2 = 2.0 * p.h;
  return p;
}

CaskMetric cask_metric(const Prepotential& f, std::span<const EpsComplex> x) {
  const int k = f.n() + 1;
  std::vector<double> w0;
  for (const auto& xi : x) w0.push_back(xi.re);
  for (const auto& xi : x) w0.push_back(xi.im);
  const auto w = identity_jets<double>(w0, 2);
  const auto c = conical_jets(f, std::span<const RJet>(w).first(static_cast<std::size_t>(k)),
                              std::span<const RJet>(w).subspan(static_cast<std::size_t>(k)));
  CaskMetric out;
  out.block = values(hesse_matrix(c.n_mat, c.r_mat, f.eps1()));
  out.inverse = values(hesse_inverse(c.n_mat, c.r_mat, f.eps1()));
  std::vector<RJet> q(c.q.data(), c.q.data() + c.q.size());
  const auto wq = invert_map(q, w0);
  const RJet hq = MonomialCache<double>(wq, 2).apply(c.h);
  out.direct.resize(2 * k, 2 * k);
  std::vector<std::uint8_t> alpha(static_cast<std::size_t>(2 * k));
  for (int a = 0; a < 2 * k; ++a)
    for (int b = 0; b < 2 * k; ++b) {
      std::fill(alpha.begin(), alpha.end(), 0);
      alpha[static_cast<std::size_t>(a)] += 1;
      alpha[static_cast<std::size_t>(b)] += 1;
      out.direct(a, b) = hq.partial(alpha);
    }
  out.rel_diff = (out.direct - out.block).cwiseAbs().maxCoeff() / out.block.cwiseAbs().maxCoeff();
  out.inverse_residual =
      (out.block * out.inverse - Eigen::MatrixXd::Identity(2 * k, 2 * k)).cwiseAbs().maxCoeff();
  return out;
}

std::vector<EpsComplex> point_from_q(const Prepotential& f, std::span<const double> q, std::span<const double> v0) {
  const int k = f.n() + 1;
  if (static_cast<int>(q.size()) != 2 * k || static_cast<int>(v0.size()) != k)
    throw UsageError("point_from_q: wrong number of coordinates");
  const int eps = f.eps1();
  Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(v0.data(), k);
  auto eval = [&](const Eigen::VectorXd& vv, Eigen::MatrixXd* jac) {
    std::vector<RJet> xr, vr;
    for (int i = 0; i < k; ++i) {
      xr.emplace_back(q[static_cast<std::size_t>(i)]);
      vr.emplace_back(vv(i));
    }
    const auto c = conical_jets(f, xr, vr);
    Eigen::VectorXd res(k);
    for (int i = 0; i < k; ++i) res(i) = c.q(k + i).value() - q[static_cast<std::size_t>(k + i)];
    if (jac) *jac = -0.5 * values(c.n_mat);
    return res;
  };
  const double scale = 1.0 + Eigen::Map<const Eigen::VectorXd>(q.data(), 2 * k).cwiseAbs().maxCoeff();
  Eigen::MatrixXd jac;
  Eigen::VectorXd res = eval(v, &jac);
  for (int it = 0; it < 50; ++it) {
    if (res.cwiseAbs().maxCoeff() < 1e-12 * scale) {
      std::vector<EpsComplex> x;
      for (int i = 0; i < k; ++i) x.emplace_back(q[static_cast<std::size_t>(i)], v(i), eps);
      return x;
    }
    const Eigen::VectorXd step = jac.fullPivLu().solve(res);
    double t = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 30; ++ls, t *= 0.5) {
      Eigen::VectorXd trial = v - t * step;
      try {
        Eigen::MatrixXd tj;
        Eigen::VectorXd tr = eval(trial, &tj);
        if (tr.norm() < res.norm()) {
          v = trial;
          res = tr;
          jac = tj;
          improved = true;
          break;
        }
      } catch (const DomainError&) {
      }
    }
    if (!improved) break;
  }
  throw DomainError("point_from_q: Newton iteration did not converge");
}

ConicalDecomposition conical_decomposition_check(const Prepotential& f, std::span<const EpsComplex> x) {
  const int k = f.n() + 1;
  const int n = f.n();
  const int eps = f.eps1();
  std::vector<double> w0;
  for (const auto& xi : x) w0.push_back(xi.re);
  for (const auto& xi : x) w0.push_back(xi.im);
  const auto w = identity_jets<double>(w0, 1);
  const auto c = conical_jets(f, std::span<const RJet>(w).first(static_cast<std::size_t>(k)),
                              std::span<const RJet>(w).subspan(static_cast<std::size_t>(k)));
  const double r2 = 2.0 * c.h.value();
  if (!(r2 > 0.0)) throw GeometryError("conical decomposition: r^2 <= 0");
  const Eigen::MatrixXd nv = values(c.n_mat);
  Eigen::MatrixXd gm = Eigen::MatrixXd::Zero(2 * k, 2 * k);
  gm.topLeftCorner(k, k) = nv;
  gm.bottomRightCorner(k, k) = -eps * nv;
  ConicalDecomposition out;
  const Eigen::MatrixXd d = values(conical_jacobian(c.n_mat, c.r_mat));
  const Eigen::MatrixXd hb = values(hesse_matrix(c.n_mat, c.r_mat, eps));
  out.block_vs_complex = (d.transpose() * hb * d - gm).cwiseAbs().maxCoeff();

  const RJet r = sqrt(2.0 * c.h);
  Eigen::VectorXd dr(2 * k), xi(2 * k), jxi(2 * k);
  for (int a = 0; a < 2 * k; ++a) dr(a) = r.gradient(a);
  for (int i = 0; i < k; ++i) {
    xi(i) = w0[static_cast<std::size_t>(i)];
    xi(k + i) = w0[static_cast<std::size_t>(k + i)];
    jxi(i) = eps * w0[static_cast<std::size_t>(k + i)];
    jxi(k + i) = w0[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd eta = gm * jxi / r2;
  out.eta_jxi = std::abs(eta.dot(jxi) + eps);
  out.eta_xi = std::abs(eta.dot(xi));

  Eigen::MatrixXd rhs = dr * dr.transpose() - eps * r2 * eta * eta.transpose();
  if (n > 0) {
    const CJet inv0 = inverse(c.x[0]);
    Eigen::MatrixXd p(2 * n, 2 * k);
    std::vector<double> za, zb;
    for (int mu = 0; mu < n; ++mu) {
      const CJet z = c.x[static_cast<std::size_t>(mu + 1)] * inv0;
      const RJet a = real_part(z), b = imag_part(z);
      za.push_back(a.value());
      zb.push_back(b.value());
      for (int col = 0; col < 2 * k; ++col) {
        p(mu, col) = a.gradient(col);
        p(n + mu, col) = b.gradient(col);
      }
    }
    const auto psk = psk_jets(f, constants(za), constants(zb));
    rhs -= r2 * p.transpose() * values(psk.g_bar) * p;
  }
  out.residual = (gm - rhs).cwiseAbs().maxCoeff() / std::max(1.0, gm.cwiseAbs().maxCoeff());
  return out;
}

PskJets psk_jets(const Prepotential& f, std::span<const RJet> a, std::span<const RJet> b) {
  const int n = f.n();
  const int k = n + 1;
  const int eps = f.eps1();
  if (static_cast<int>(a.size()) != n || static_cast<int>(b.size()) != n)
    throw UsageError("psk_jets: wrong number of coordinates");
  PskJets p;
  p.n = n;
  p.z.push_back(CJet(EpsComplex(1.0, 0.0, eps)));
  for (int mu = 0; mu < n; ++mu) p.z.push_back(make_eps(a[static_cast<std::size_t>(mu)], b[static_cast<std::size_t>(mu)], eps));
  p.hol = holomorphic_jets(f, p.z);
  const JetMat nm = n_from_fij(p.hol.fij, k, eps);
  std::vector<CJet> zbar;
  for (const auto& z : p.z) zbar.push_back(conj(z));
  const RJet y = real_part(contract(nm, p.z, zbar));
  if (!(y.value() > 0.0)) throw DomainError("psk: z N zbar > 0 violated");
  p.kpot = -log(y);
  const auto nzbar = mat_apply(nm, zbar);
  const auto nz = mat_apply(nm, p.z);
  const CJet yinv = to_eps(inverse(y));
  p.g_bar.resize(2 * n, 2 * n);
  p.dck.resize(2 * n);
  for (int mu = 0; mu < n; ++mu) {
    const auto um = static_cast<std::size_t>(mu + 1);
    const CJet kz = -(nzbar[um] * yinv);
    p.dck(mu) = (-2.0 * eps) * imag_part(kz);
    p.dck(n + mu) = (-2.0 * eps) * real_part(kz);
    for (int nu = 0; nu < n; ++nu) {
      const auto un = static_cast<std::size_t>(nu + 1);
      const CJet g = -(to_eps(nm(mu + 1, nu + 1)) * yinv) + nzbar[um] * nz[un] * yinv * yinv;
      const RJet gr = real_part(g), gi = imag_part(g);
      p.g_bar(mu, nu) = gr;
      p.g_bar(n + mu, n + nu) = (-static_cast<double>(eps)) * gr;
      p.g_bar(mu, n + nu) = (-static_cast<double>(eps)) * gi;
      p.g_bar(n + mu, nu) = static_cast<double>(eps) * gi;
    }
  }
  auto [cr, ci] = period_matrix(nm, p.hol.fij, p.z, eps);
  p.cal_r = cr;
  p.cal_i = ci;
  return p;
}

JetMat hhat_matrix(const JetMat& cal_r, const JetMat& cal_i, int eps1) {
  const JetMat iinv = inverse(cal_i);
  return block2(iinv, iinv * cal_r, cal_r * iinv, scaled(cal_i, -eps1) + cal_r * iinv * cal_r);
}

PskPoint psk_data(const Prepotential& f, std::span<const EpsComplex> z) {
  std::vector<double> a, b;
  for (const auto& zi : z) {
    a.push_back(zi.re);
    b.push_back(zi.im);
  }
  const auto p = psk_jets(f, constants(a), constants(b));
  PskPoint out;
  out.z.assign(z.begin(), z.end());
  out.kpot = p.kpot.value();
  out.g_bar = values(p.g_bar);
  out.dck = values(p.dck);
  out.cal_r = values(p.cal_r);
  out.cal_i = values(p.cal_i);
  out.hhat = values(hhat_matrix(p.cal_r, p.cal_i, f.eps1()));
  return out;
}

double hhat_identity_residual(const Prepotential& f, std::span<const EpsComplex> x,
                              const std::vector<Eigen::VectorXd>& covectors) {
  const int k = f.n() + 1;
  const int eps = f.eps1();
  std::vector<CJet> xc(x.begin(), x.end());
  const auto hol = holomorphic_jets(f, xc);
  const JetMat nm = n_from_fij(hol.fij, k, eps);
  auto [cr, ci] = period_matrix(nm, hol.fij, xc, eps);
  const Eigen::MatrixXd hhat = values(hhat_matrix(cr, ci, eps));
  const Eigen::MatrixXd ninv = values(nm).inverse();
  std::vector<CJet> xbar;
  for (const auto& xi : xc) xbar.push_back(conj(xi));
  const double r2 = real_part(contract(nm, xc, xbar)).value();
  double worst = 0.0;
  for (const auto& p : covectors) {
    std::vector<EpsComplex> a(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      EpsComplex acc(p(i), 0.0, eps);
      for (int j = 0; j < k; ++j) acc += hol.fij[static_cast<std::size_t>(i * k + j)].value() * p(k + j);
      a[static_cast<std::size_t>(i)] = acc;
    }
    EpsComplex ana(0.0, 0.0, eps), xa(0.0, 0.0, eps);
    for (int i = 0; i < k; ++i) {
      xa += x[static_cast<std::size_t>(i)] * a[static_cast<std::size_t>(i)];
      for (int j = 0; j < k; ++j) ana += ninv(i, j) * a[static_cast<std::size_t>(i)] * conj(a[static_cast<std::size_t>(j)]);
    }
    const double lhs = -ana.re + 2.0 / r2 * norm2(xa);
    const double rhs = -0.5 * eps * p.dot(hhat * p);
    worst = std::max(worst, std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-300}));
  }
  return worst;
}

}  // namespace paraqk::sk
