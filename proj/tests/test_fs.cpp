#include <gtest/gtest.h>

#include <cmath>

#include "paraqk/fs/fs_metric.hpp"
#include "paraqk/sk/cask.hpp"
#include "paraqk/verify/fixtures.hpp"

using namespace paraqk;

namespace {

// Point of M' = {Im X^0 = 0} with rho > 0 and rho + 2c away from zero.
std::vector<double> slice_point(verify::ConicalSampler& s, const sk::Prepotential& f, double c) {
  auto x = s.next([&](const std::vector<EpsComplex>& x) {
    const double r2 = sk::cask_point(f, x).r2;
    return r2 - c > 0.1 && std::abs(r2 + c) > 0.1;
  });
  std::vector<double> m;
  for (auto& xi : x) m.push_back(xi.re);
  for (std::size_t i = 1; i < x.size(); ++i) m.push_back(x[i].im);
  for (int a = 0; a < 2 * f.n() + 2; ++a) m.push_back(s.uniform(-0.8, 0.8));
  m.push_back(s.uniform(-1.0, 1.0));
  return m;
}

verify::ConicalBox slice_box(const std::string& name) {
  auto box = verify::default_box(name);
  box.x0_im = 0.0;
  return box;
}

}  // namespace

TEST(FsMetric, ChartLayout) {
  EXPECT_EQ(fs::fs_chart(1).dim(), 8);
  EXPECT_EQ(fs::slice_chart(2).dim(), 12);
  EXPECT_EQ(fs::fs_chart(1).index_of("zt0"), 4);
  std::vector<double> m{1, 2, 3, 4, 5, 6, 7, 8};
  auto p = fs::slice_to_bundle(1, m);
  ASSERT_EQ(p.size(), 9u);
  EXPECT_EQ(p[2], 0.0);
  EXPECT_EQ(p[3], 3.0);
}

TEST(FsMetric, DomainErrorsNameTheInequality) {
  try {
    fs::check_domain(-0.5, 0.2);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("rho + c > 0"), std::string::npos);
  }
  EXPECT_THROW(fs::check_domain(0.4, -0.2), DomainError);
  EXPECT_NO_THROW(fs::check_domain(0.3, -0.2));
  EXPECT_NO_THROW(fs::check_domain(0.5, -0.2));
}

TEST(FsMetric, PullbackAgreesWithQkMetric) {
  for (const std::string name : {"quadratic", "mixed"})
    for (int e1 : {-1, 1})
      for (int e2 : {-1, 1})
        for (double c : {-0.3, 0.0, 0.7}) {
          const auto f = verify::make_prepotential(name, 1, e1);
          verify::ConicalSampler s(f, slice_box(name), 101);
          for (int i = 0; i < 3; ++i) {
            const auto m = slice_point(s, f, c);
            const auto r = fs::fs_checks(f, e2, c, m);
            const std::string t = name + " e1=" + std::to_string(e1) + " e2=" + std::to_string(e2) +
                                  " c=" + std::to_string(c);
            EXPECT_LT(r.equivalence, 1e-9) << t;
            EXPECT_DOUBLE_EQ(r.factor, -0.5) << t;
            EXPECT_LT(r.symmetry, 1e-14) << t;
            EXPECT_LT(r.round_trip, 1e-10) << t;
            EXPECT_LT(r.rho_identity, 1e-12) << t;
            EXPECT_LT(r.dck_pullback, 1e-8) << t;
            EXPECT_LT(r.c0_reduction, 1e-14) << t;
            EXPECT_LT(r.c_derivative, 1e-6) << t;
          }
        }
}

TEST(FsMetric, CubicPullback) {
  for (int e1 : {-1, 1}) {
    const auto f = verify::make_prepotential("cubic", 3, e1);
    verify::ConicalSampler s(f, slice_box("cubic"), 7);
    const auto m = slice_point(s, f, 0.5);
    const auto r = fs::fs_checks(f, -1, 0.5, m);
    EXPECT_LT(r.equivalence, 1e-9);
    EXPECT_LT(r.round_trip, 1e-10);
  }
}

TEST(FsMetric, ScalarCurvatureIsMinusTwo) {
  for (int e1 : {-1, 1})
    for (int e2 : {-1, 1})
      for (double c : {-0.3, 0.0, 0.7}) {
        const auto f = verify::make_prepotential("quadratic", 1, e1);
        verify::ConicalSampler s(f, slice_box("quadratic"), 23);
        const auto m = slice_point(s, f, c);
        const auto p = fs::coordinate_map(f, e2, c, m);
        EXPECT_NEAR(fs::fs_nu(f, e2, p), -2.0, 1e-7) << e1 << " " << e2 << " " << c;
      }
}

TEST(FsMetric, TermsSumToMetric) {
  const auto f = verify::make_prepotential("mixed", 1, -1);
  verify::ConicalSampler s(f, slice_box("mixed"), 5);
  const auto p = fs::coordinate_map(f, -1, 0.4, slice_point(s, f, 0.4));
  const auto t = fs::fs_terms(f, -1, p);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(8, 8);
  for (const auto& m : t.terms) sum += m;
  EXPECT_LT((sum - fs::fs_eval(f, -1, p)).cwiseAbs().maxCoeff(), 1e-14);
}
