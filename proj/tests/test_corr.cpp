#include <gtest/gtest.h>

#include "paraqk/cmap/rigid_cmap.hpp"
#include "paraqk/corr/inputs.hpp"
#include "paraqk/verify/fixtures.hpp"

using namespace paraqk;

namespace {

std::string tag(const std::string& name, int e1, int e2, double c) {
  return name + " e1=" + std::to_string(e1) + " e2=" + std::to_string(e2) + " c=" + std::to_string(c);
}

void expect_qk(const corr::QkChecks& r, bool curvature, const std::string& t) {
  EXPECT_LT(r.algebra, 1e-8) << t;
  EXPECT_LT(r.projector, 1e-8) << t;
  EXPECT_LT(r.killing, 1e-8) << t;
  EXPECT_LT(r.nijenhuis, 1e-8) << t;
  EXPECT_LT(r.domega, 1e-7) << t;
  EXPECT_LT(r.d_omega4, 1e-7) << t;
  EXPECT_LT(r.lie_x_omega[0], 1e-7) << t;
  for (double v : r.lie_x_omega_mu) EXPECT_LT(v, 1e-7) << t;
  EXPECT_LT(r.theta_bar_23, 1e-8) << t;
  if (curvature) {
    EXPECT_LT(r.nu_residual, 1e-6) << t;
    EXPECT_LT(r.ricci_w, 1e-6) << t;
    EXPECT_LT(r.q_invariance, 1e-6) << t;
    EXPECT_LT(r.moment_map, 1e-6) << t;
    EXPECT_LT(r.riemann_symmetry, 1e-7) << t;
  }
}

// Point of P on {Im X^0 = 0}.
std::vector<double> cmap_point(verify::ConicalSampler& s, int n) {
  auto x = s.next();
  std::vector<double> p;
  for (auto& xi : x) p.push_back(xi.re);
  for (auto& xi : x) p.push_back(xi.im);
  for (int a = 0; a < 2 * n + 2; ++a) p.push_back(s.uniform(-0.8, 0.8));
  p.push_back(s.uniform(-1.0, 1.0));
  return p;
}

}  // namespace

TEST(FlatModel, DisplayedIdentities) {
  for (int e1 : {-1, 1})
    for (int e2 : {-1, 1}) {
      std::vector<double> p{0.3, -0.2, 0.7, 0.4};
      auto r = corr::flat_model_checks(e1, e2, p);
      EXPECT_LT(r.lie_omega_plus, 1e-10);
      EXPECT_LT(r.eta_curvature, 1e-10);
      EXPECT_LT(r.f1_relation, 1e-14);
      EXPECT_LT(r.z_formula, 1e-10);
      EXPECT_LT(corr::vertical_matrices_residual(corr::flat_model(e1, e2), p), 1e-12);
    }
}

TEST(FlatModel, CorrespondenceOnBothSlices) {
  for (int e1 : {-1, 1})
    for (int e2 : {-1, 1})
      for (double shift : {0.0, 0.3, -0.4}) {
        auto in = corr::flat_model(e1, e2, shift);
        std::vector<double> p{0.3, -0.2, 0.7, 0.0, 0.1};
        auto b = corr::bundle_checks(in, p);
        for (double v : b.lemma1) EXPECT_LT(v, 1e-8);
        EXPECT_LT(b.kernel, 1e-10);
        EXPECT_LT(b.eta_curvature, 1e-10);
        expect_qk(corr::qk_checks(in, corr::Slice{3, 0.0}, p), true, tag("flat v=0", e1, e2, shift));
        if (shift != 0.0) {
          std::vector<double> p2{0.3, -0.2, 0.7, 0.1, 0.0};
          auto r = corr::qk_checks(in, corr::Slice{4, 0.0}, p2);
          EXPECT_NEAR(r.a_value, 1.0 / shift, 1e-12);
          expect_qk(r, true, tag("flat s=0", e1, e2, shift));
        }
      }
}

TEST(FlatModel, PrintedLieDerivativeOnlyHoldsForSpatialSigns) {
  std::vector<double> p{0.3, -0.2, 0.7, 0.1, 0.0};
  for (int e1 : {-1, 1})
    for (int e2 : {-1, 1}) {
      auto r = corr::qk_checks(corr::flat_model(e1, e2, 0.3), corr::Slice{4, 0.0}, p, false);
      const double worst = std::max(r.lie_x_omega[1], r.lie_x_omega[2]);
      if (e1 == -1 && e2 == -1)
        EXPECT_LT(worst, 1e-10);
      else
        EXPECT_GT(worst, 1e-3);
    }
}

TEST(FlatModel, TransversalityFailureIsReported) {
  auto in = corr::flat_model(-1, -1, 0.0);
  std::vector<double> p{0.3, -0.2, 0.7, 0.1, 0.0};
  EXPECT_THROW(corr::qk_checks(in, corr::Slice{4, 0.0}, p), GeometryError);
  std::vector<double> q{0.3, -0.2, 0.0, 0.0, 0.1};  // w = 0
  EXPECT_THROW(corr::qk_metric(in, corr::Slice{3, 0.0}, q), Error);
}

TEST(CmapCorrespondence, SmallFixturesWithCurvature) {
  struct Fx {
    std::string name;
    int n;
  };
  for (const Fx& fx : {Fx{"quadratic", 0}, Fx{"quadratic", 1}, Fx{"mixed", 1}})
    for (int e1 : {-1, 1})
      for (int e2 : {-1, 1})
        for (double c : {-0.3, 0.0, 0.7}) {
          auto f = verify::make_prepotential(fx.name, fx.n, e1);
          auto box = verify::default_box(fx.name);
          box.x0_im = 0.0;
          verify::ConicalSampler s(f, box, 11);
          auto in = corr::cmap_input(f, e2, c);
          for (int i = 0; i < 2; ++i) {
            auto p = cmap_point(s, fx.n);
            const std::string t = tag(fx.name + std::to_string(fx.n), e1, e2, c);
            auto b = corr::bundle_checks(in, p);
            for (double v : b.lemma1) EXPECT_LT(v, 1e-8) << t;
            EXPECT_LT(b.kernel, 1e-10) << t;
            EXPECT_LT(b.eta_curvature, 1e-10) << t;
            EXPECT_LT(b.eta_norm, 1e-15) << t;
            EXPECT_LT(corr::vertical_matrices_residual(in, std::span<const double>(p).first(p.size() - 1)), 1e-8) << t;
            expect_qk(corr::qk_checks(in, corr::cmap_slice(fx.n), p), true, t);
          }
        }
}

TEST(CmapCorrespondence, CubicWithoutCurvature) {
  for (int e1 : {-1, 1})
    for (int e2 : {-1, 1}) {
      auto f = verify::make_prepotential("cubic", 3, e1);
      auto box = verify::default_box("cubic");
      box.x0_im = 0.0;
      verify::ConicalSampler s(f, box, 5);
      auto p = cmap_point(s, 3);
      expect_qk(corr::qk_checks(corr::cmap_input(f, e2, 0.4), corr::cmap_slice(3), p, false), false,
                tag("cubic", e1, e2, 0.4));
    }
}

TEST(CmapCorrespondence, FibreSliceGivesNontrivialKillingDecomposition) {
  auto f = verify::make_prepotential("quadratic", 1, -1);
  verify::ConicalSampler s(f, verify::default_box("quadratic"), 3);
  auto x = s.next();
  std::vector<double> p;
  for (auto& xi : x) p.push_back(xi.re);
  for (auto& xi : x) p.push_back(xi.im);
  for (int a = 0; a < 4; ++a) p.push_back(0.1 * (a + 1));
  p.push_back(0.0);
  const double c = 0.5;
  auto r = corr::qk_checks(corr::cmap_input(f, -1, c), corr::Slice{8, 0.0}, p);
  EXPECT_NEAR(r.a_value, 1.0 / (-1 * c), 1e-12);  // Z_1^P(s) = eps1 c
  expect_qk(r, true, "quadratic1 s=0");
}
