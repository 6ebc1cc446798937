#include <gtest/gtest.h>

#include <cmath>

#include "paraqk/sk/cask.hpp"
#include "paraqk/verify/fixtures.hpp"
#include "paraqk/verify/oracles.hpp"

using namespace paraqk;
using namespace paraqk::sk;

namespace {

struct Case {
  std::string name;
  int n;
  int eps1;
};

std::vector<Case> all_cases() {
  std::vector<Case> c;
  for (int e : {-1, 1}) {
    c.push_back({"quadratic", 0, e});
    c.push_back({"quadratic", 1, e});
    c.push_back({"mixed", 1, e});
    c.push_back({"mixed", 2, e});
    c.push_back({"cubic", 3, e});
  }
  return c;
}

template <class F>
void for_samples(const Case& c, int count, F&& body) {
  auto f = verify::make_prepotential(c.name, c.n, c.eps1);
  verify::ConicalSampler s(f, verify::default_box(c.name), 1234 + static_cast<unsigned>(c.n * 7 + c.eps1));
  for (int i = 0; i < count; ++i) body(f, s.next());
}

std::string label(const Case& c) { return c.name + " n=" + std::to_string(c.n) + " eps1=" + std::to_string(c.eps1); }

}  // namespace

TEST(Prepotential, ExactHomogeneity) {
  auto q = verify::make_prepotential("quadratic", 1, -1);
  std::vector<EpsComplex> x{EpsComplex(0.9, 0.2, -1), EpsComplex(0.3, -0.1, -1)};
  EXPECT_LT(homogeneity_check(q, x, 2.0).scaling, 1e-12);
  auto cub = verify::make_prepotential("cubic", 3, 1);
  std::vector<EpsComplex> y{EpsComplex(1.1, 0.2, 1), EpsComplex(0.3, 0.8, 1), EpsComplex(-0.2, 0.6, 1),
                            EpsComplex(0.5, -0.7, 1)};
  EXPECT_LT(homogeneity_check(cub, y, 3.0).scaling, 1e-10);
}

TEST(Prepotential, EulerIdentityOnAllBuiltins) {
  for (const auto& c : all_cases())
    for_samples(c, 10, [&](const Prepotential& f, const std::vector<EpsComplex>& x) {
      EXPECT_LT(homogeneity_check(f, x, 1.7).euler, 1e-10) << label(c);
    });
}

TEST(Prepotential, InvalidDefinitionsRejected) {
  EXPECT_THROW(Prepotential("bad", 1, -1, {Monomial{1.0, 0.0, {1, 1, 0}}}), ConfigError);
  EXPECT_THROW(Prepotential("bad", 0, -1, {Monomial{1.0, 0.0, {3}}}), ConfigError);
  EXPECT_THROW(Prepotential("bad", 0, 2, {Monomial{1.0, 0.0, {2}}}), ConfigError);
  auto cub = verify::make_prepotential("cubic", 3, -1);
  std::vector<EpsComplex> x{EpsComplex(0.0, 0.0, -1), EpsComplex(1.0, 0.0, -1), EpsComplex(1.0, 0.0, -1),
                            EpsComplex(1.0, 0.0, -1)};
  EXPECT_THROW(homogeneity_check(cub, x, 2.0), DomainError);
}

TEST(Cask, QuadraticOneVariableByHand) {
  auto f = verify::make_prepotential("quadratic", 0, -1);
  std::vector<EpsComplex> x{EpsComplex(0.8, 0.6, -1)};
  auto p = cask_point(f, x);
  EXPECT_NEAR(p.n_mat(0, 0), 2.0, 1e-15);
  EXPECT_NEAR(p.r2, 2.0, 1e-14);
  EXPECT_NEAR(p.h, 1.0, 1e-14);
}

TEST(Cask, EulerIdentitiesOfDerivatives) {
  for (const auto& c : all_cases())
    for_samples(c, 5, [&](const Prepotential& f, const std::vector<EpsComplex>& x) {
      std::vector<CJet> xc(x.begin(), x.end());
      auto hol = holomorphic_jets(f, xc);
      const int k = f.n() + 1;
      for (int i = 0; i < k; ++i) {
        EpsComplex acc(0.0, 0.0, f.eps1());
        for (int j = 0; j < k; ++j) acc += x[static_cast<std::size_t>(j)] * hol.fij[static_cast<std::size_t>(i * k + j)].value();
        EXPECT_LT(abs_diff(acc, hol.fi[static_cast<std::size_t>(i)].value()), 1e-10);
      }
    });
}

TEST(Cask, BlockFormulaMatchesDirectHessian) {
  for (const auto& c : all_cases())
    for_samples(c, 10, [&](const Prepotential& f, const std::vector<EpsComplex>& x) {
      auto m = cask_metric(f, x);
      EXPECT_LT(m.rel_diff, 1e-8) << label(c);
      EXPECT_LT(m.inverse_residual, 1e-10) << label(c);
    });
}

TEST(Cask, HesseGradientClosedForm) {
  for (const auto& c : all_cases())
    for_samples(c, 5, [&](const Prepotential& f, const std::vector<EpsComplex>& x) {
      const int k = f.n() + 1;
      std::vector<double> w0;
      for (auto& xi : x) w0.push_back(xi.re);
      for (auto& xi : x) w0.push_back(xi.im);
      auto w = identity_jets<double>(w0, 1);
      auto cj = conical_jets(f, std::span<const RJet>(w).first(k), std::span<const RJet>(w).subspan(k));
      Eigen::VectorXd grad(2 * k);
      for (int a = 0; a < 2 * k; ++a) grad(a) = cj.h.gradient(a);
      Eigen::MatrixXd dinv = values(conical_jacobian_inverse(cj.n_mat, cj.r_mat));
      Eigen::VectorXd ha = dinv.transpose() * grad;
      EXPECT_LT((ha - values(cj.dh)).cwiseAbs().maxCoeff(), 1e-10) << label(c);
      // 2H = r^2 = g_M(xi, xi)
      Eigen::MatrixXd nv = values(cj.n_mat);
      Eigen::VectorXd re(k), im(k);
      for (int i = 0; i < k; ++i) {
        re(i) = x[static_cast<std::size_t>(i)].re;
        im(i) = x[static_cast<std::size_t>(i)].im;
      }
      const double gxx = re.dot(nv * re) - f.eps1() * im.dot(nv * im);
      EXPECT_NEAR(gxx, 2.0 * cj.h.value(), 1e-10 * std::max(1.0, gxx));
    });
}

TEST(Cask, ConicalDecomposition) {
  for (const auto& c : all_cases())
    for_samples(c, 10, [&](const Prepotential& f, const std::vector<EpsComplex>& x) {
      auto d = conical_decomposition_check(f, x);
      EXPECT_LT(d.residual, 1e-8) << label(c);
      EXPECT_LT(d.eta_jxi, 1e-10);
      EXPECT_LT(d.eta_xi, 1e-12);
      EXPECT_LT(d.block_vs_complex, 1e-10);
    });
}

TEST(Cask, NewtonInversionRoundTrip) {
  for (const auto& c : all_cases())
    for_samples(c, 5, [&](const Prepotential& f, const std::vector<EpsComplex>& x) {
      const int k = f.n() + 1;
      std::vector<double> re, im;
      for (auto& xi : x) {
        re.push_back(xi.re);
        im.push_back(xi.im);
      }
      std::vector<RJet> rj(re.begin(), re.end()), ij(im.begin(), im.end());
      auto cj = conical_jets(f, rj, ij);
      std::vector<double> q(static_cast<std::size_t>(2 * k)), v0(static_cast<std::size_t>(k));
      for (int a = 0; a < 2 * k; ++a) q[static_cast<std::size_t>(a)] = cj.q(a).value();
      for (int i = 0; i < k; ++i) v0[static_cast<std::size_t>(i)] = im[static_cast<std::size_t>(i)] + 0.05;
      auto back = point_from_q(f, q, v0);
      for (int i = 0; i < k; ++i) EXPECT_NEAR(back[static_cast<std::size_t>(i)].im, im[static_cast<std::size_t>(i)], 1e-10);
    });
}

TEST(Psk, PeriodMatrixAndHhatIdentity) {
  for (const auto& c : all_cases()) {
    if (c.n == 0) continue;
    for_samples(c, 10, [&](const Prepotential& f, const std::vector<EpsComplex>& x) {
      std::vector<EpsComplex> z;
      for (int u = 1; u <= f.n(); ++u) z.push_back(x[static_cast<std::size_t>(u)] / x[0]);
      auto p = psk_data(f, z);
      EXPECT_LT((p.cal_r - p.cal_r.transpose()).cwiseAbs().maxCoeff(), 1e-12);
      EXPECT_LT((p.cal_i - p.cal_i.transpose()).cwiseAbs().maxCoeff(), 1e-12);
      std::vector<Eigen::VectorXd> cov;
      for (int r = 0; r < 5; ++r) cov.push_back(Eigen::VectorXd::Random(2 * f.n() + 2));
      EXPECT_LT(hhat_identity_residual(f, x, cov), 1e-8) << label(c);
    });
  }
}

TEST(Psk, KahlerPotentialIsProjective) {
  auto f = verify::make_prepotential("mixed", 2, -1);
  verify::ConicalSampler s(f, verify::default_box("mixed"), 5);
  auto x = s.next();
  std::vector<EpsComplex> z, z2;
  for (int u = 1; u <= 2; ++u) z.push_back(x[static_cast<std::size_t>(u)] / x[0]);
  std::vector<EpsComplex> lx;
  for (auto& xi : x) lx.push_back(EpsComplex(1.7, 0.4, -1) * xi);
  for (int u = 1; u <= 2; ++u) z2.push_back(lx[static_cast<std::size_t>(u)] / lx[0]);
  EXPECT_NEAR(psk_data(f, z).kpot, psk_data(f, z2).kpot, 1e-12);
}

TEST(Psk, PositiveDefiniteForComplexQuadratic) {
  auto f = verify::make_prepotential("quadratic", 2, -1);
  verify::ConicalSampler s(f, verify::default_box("quadratic"), 9);
  for (int i = 0; i < 10; ++i) {
    auto x = s.next();
    std::vector<EpsComplex> z;
    for (int u = 1; u <= 2; ++u) z.push_back(x[static_cast<std::size_t>(u)] / x[0]);
    auto p = psk_data(f, z);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p.g_bar);
    EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
  }
}

TEST(Prepotential, DerivativesAgreeWithFiniteDifferences) {
  for (const std::string name : {"quadratic", "cubic", "mixed"})
    for (int e1 : {-1, 1}) {
      const int n = name == "cubic" ? 3 : 1;
      const auto f = verify::make_prepotential(name, n, e1);
      verify::ConicalSampler s(f, verify::default_box(name), 3);
      for (int i = 0; i < 100; ++i) EXPECT_LT(verify::prepotential_fd_residual(f, s.next()), 1e-6) << name << e1;
    }
}
