#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "paraqk/epsnum/eigen_support.hpp"
#include "paraqk/epsnum/jet.hpp"
#include "paraqk/epsnum/finite_diff.hpp"
#include "paraqk/verify/oracles.hpp"

using namespace paraqk;

TEST(EpsComplex, MultiplicationTable) {
  const EpsComplex i = EpsComplex::unit(-1);
  const EpsComplex e = EpsComplex::unit(1);
  EXPECT_EQ(i * i, EpsComplex(-1.0, 0.0, -1));
  EXPECT_EQ(e * e, EpsComplex(1.0, 0.0, 1));
  const EpsComplex a(1.0, 1.0, 1), b(1.0, -1.0, 1);
  EXPECT_EQ(a * b, EpsComplex(0.0, 0.0, 1));
}

TEST(EpsComplex, MixedSignsRejected) {
  EXPECT_THROW(EpsComplex::unit(1) * EpsComplex::unit(-1), UsageError);
  EXPECT_THROW(EpsComplex(1.0, 0.0, 2), UsageError);
}

TEST(EpsComplex, InverseAndZeroDivisors) {
  for (int eps : {-1, 1}) {
    const EpsComplex z(0.7, -0.3, eps);
    const EpsComplex w = z * inverse(z);
    EXPECT_NEAR(w.re, 1.0, 1e-14);
    EXPECT_NEAR(w.im, 0.0, 1e-14);
  }
  EXPECT_THROW(inverse(EpsComplex(2.0, 2.0, 1)), DomainError);
  EXPECT_THROW(inverse(EpsComplex(2.0, -2.0, 1)), DomainError);
}

TEST(EpsComplex, ConjugationIsMultiplicative) {
  for (int eps : {-1, 1}) {
    const EpsComplex a(0.3, 1.1, eps), b(-2.0, 0.4, eps);
    EXPECT_LT(abs_diff(conj(a * b), conj(a) * conj(b)), 1e-14);
    EXPECT_NEAR(norm2(a), (a * conj(a)).re, 1e-14);
    EXPECT_NEAR(norm2(a * b), norm2(a) * norm2(b), 1e-13);
  }
}

TEST(Jet, CubeDerivatives) {
  std::vector<double> x{2.0};
  auto j = jet_lift<double>([](std::span<const RJet> v) { return v[0] * v[0] * v[0]; }, x, 4);
  std::uint8_t a[1];
  const double expect[] = {8.0, 12.0, 12.0, 6.0, 0.0};
  for (int k = 0; k <= 4; ++k) {
    a[0] = static_cast<std::uint8_t>(k);
    EXPECT_NEAR(j.partial(a), expect[k], 1e-12);
  }
}

TEST(Jet, ExpAtZero) {
  std::vector<double> x{0.0};
  auto j = jet_lift<double>([](std::span<const RJet> v) { return exp(v[0]); }, x, 5);
  std::uint8_t a[1];
  for (int k = 0; k <= 5; ++k) {
    a[0] = static_cast<std::uint8_t>(k);
    EXPECT_NEAR(j.partial(a), 1.0, 1e-12);
  }
}

TEST(Jet, OrderLimit) {
  std::vector<double> x{0.0};
  EXPECT_THROW(jet_lift<double>([](std::span<const RJet> v) { return v[0]; }, x, 6), ConfigError);
}

TEST(Jet, MixedPartialsSymmetric) {
  std::vector<double> x{0.4, -0.9};
  auto f = [](std::span<const RJet> v) { return exp(v[0] * v[1]) * v[0] + log(v[0] * v[0] + 1.0) * v[1]; };
  auto j = jet_lift<double>(f, x, 3);
  const std::uint8_t a21[] = {2, 1};
  auto d = j.derivative(0).derivative(0).derivative(1);
  EXPECT_NEAR(d.value(), j.partial(a21), 1e-12);
  auto e = j.derivative(1).derivative(0).derivative(0);
  EXPECT_NEAR(d.value(), e.value(), 1e-12);
}

TEST(Jet, CompositionChainRule) {
  std::vector<double> x{0.3, 0.5};
  auto inner = identity_jets<double>(x, 3);
  std::vector<RJet> g{sqrt(inner[0] * inner[0] + 1.0), inner[0] * inner[1]};
  std::vector<double> y{g[0].value(), g[1].value()};
  auto outer = jet_lift<double>([](std::span<const RJet> v) { return v[0] * exp(v[1]); }, y, 3);
  auto composed = compose<double>(outer, g);
  auto direct = g[0] * exp(g[1]);
  ASSERT_EQ(composed.size(), direct.size());
  for (std::size_t k = 0; k < direct.size(); ++k) EXPECT_NEAR(composed[k], direct[k], 1e-12);
}

TEST(Jet, EpsComplexHolomorphicSquare) {
  for (int eps : {-1, 1}) {
    std::vector<EpsComplex> z0{EpsComplex(0.5, 0.2, eps)};
    auto j = jet_lift<EpsComplex>([](std::span<const CJet> v) { return v[0] * v[0]; }, z0, 2);
    EXPECT_LT(abs_diff(j.gradient(0), 2.0 * z0[0]), 1e-14);
  }
}

TEST(Jet, MixedOrdersTruncate) {
  std::vector<double> x{1.0, 2.0};
  auto a = identity_jets<double>(x, 3);
  auto b = identity_jets<double>(x, 1);
  auto c = a[0] * a[0] + b[1];
  EXPECT_EQ(c.order(), 1);
  EXPECT_NEAR(c.gradient(0), 2.0, 1e-15);
}

TEST(JetLinalg, InverseMatchesTaylorSeries) {
  std::vector<double> x{0.2, -0.1};
  auto v = identity_jets<double>(x, 3);
  JetMat m(2, 2);
  m << v[0] + 2.0, v[1], v[0] * v[1], exp(v[1]);
  JetMat id = m * inverse(m);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      auto e = id(i, j);
      for (std::size_t k = 0; k < e.size(); ++k) EXPECT_NEAR(e[k], (i == j && k == 0) ? 1.0 : 0.0, 1e-12);
    }
  JetMat sing(2, 2);
  sing << v[0], v[0], v[0], v[0];
  EXPECT_THROW(inverse(sing), DegeneracyError);
}

TEST(FiniteDiff, RichardsonMatchesClosedForms) {
  const ScalarField f = [](std::span<const double> x) { return std::exp(x[0]) * std::sin(x[1]); };
  const std::vector<double> x{0.3, 0.7};
  for (int k = 1; k <= 4; ++k) {
    const std::vector<std::uint8_t> a{static_cast<std::uint8_t>(k), 0};
    EXPECT_LT(rel_error(fd_partial(f, x, a, fd_step(k)), f(x)), 1e-7) << k;
  }
  const std::vector<std::uint8_t> mixed{1, 1};
  EXPECT_LT(rel_error(fd_partial(f, x, mixed, fd_step(2)), std::exp(0.3) * std::cos(0.7)), 1e-8);
  const std::vector<std::uint8_t> bad{1};
  EXPECT_THROW(fd_partial(f, x, bad, 1e-3), UsageError);
}

TEST(FiniteDiff, JetsAgreeWithDifferences) {
  const verify::JetField jets = [](std::span<const double> x, int order) {
    const auto y = verify::identity_jets(x, order);
    JetMat m(1, 2);
    m(0, 0) = exp(y[0] * y[1]);
    m(0, 1) = log(y[0] + 2.0 * y[1]) / y[1];
    return m;
  };
  const MatrixField vals = [](std::span<const double> y) {
    Eigen::MatrixXd m(1, 2);
    m << std::exp(y[0] * y[1]), std::log(y[0] + 2.0 * y[1]) / y[1];
    return m;
  };
  const std::vector<double> x{0.4, 0.9};
  EXPECT_LT(verify::jet_fd_residual(jets, vals, x, 4), 1e-6);
}
