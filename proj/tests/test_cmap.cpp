#include <gtest/gtest.h>

#include "paraqk/cmap/rigid_cmap.hpp"
#include "paraqk/verify/fixtures.hpp"

using namespace paraqk;

namespace {

struct Fixture {
  std::string name;
  int n;
};

const Fixture kFixtures[] = {{"quadratic", 0}, {"quadratic", 1}, {"mixed", 1}, {"cubic", 3}};

template <class Body>
void sweep(int count, Body&& body) {
  for (const auto& fx : kFixtures)
    for (int e1 : {-1, 1})
      for (int e2 : {-1, 1}) {
        auto f = verify::make_prepotential(fx.name, fx.n, e1);
        verify::ConicalSampler s(f, verify::default_box(fx.name), 77);
        for (int i = 0; i < count; ++i) {
          auto x = s.next();
          std::vector<double> qh;
          for (int a = 0; a < 2 * fx.n + 2; ++a) qh.push_back(s.uniform(-1.0, 1.0));
          body(f, e2, x, qh, fx.name + " n=" + std::to_string(fx.n) + " e1=" + std::to_string(e1) +
                                   " e2=" + std::to_string(e2));
        }
      }
}

}  // namespace

TEST(RigidCmap, SymplecticMatrix) {
  auto om = cmap::symplectic(2);
  EXPECT_EQ(om(0, 2), 1.0);
  EXPECT_EQ(om(2, 0), -1.0);
  EXPECT_LT((om * om + Eigen::MatrixXd::Identity(4, 4)).norm(), 1e-15);
}

TEST(RigidCmap, StructureIdentities) {
  sweep(4, [](const sk::Prepotential& f, int e2, const std::vector<EpsComplex>& x, const std::vector<double>& qh,
              const std::string& tag) {
    auto r = cmap::cmap_checks(f, e2, 0.3, x, qh);
    EXPECT_LT(r.algebra, 1e-10) << tag;
    EXPECT_LT(r.omega_consistency, 1e-10) << tag;
    for (double d : r.closure) EXPECT_LT(d, 1e-8) << tag;
    EXPECT_LT(r.df_omega1, 1e-10) << tag;
    EXPECT_LT(r.lz_g, 1e-8) << tag;
    EXPECT_LT(r.lz_j1, 1e-8) << tag;
    EXPECT_LT(r.lz_j2, 1e-8) << tag;
    EXPECT_LT(r.beta_z, 1e-10) << tag;
    EXPECT_LT(r.beta_formula, 1e-10) << tag;
    EXPECT_LT(r.f1_identity, 1e-10) << tag;
    EXPECT_LT(r.p_roundtrip, 1e-15) << tag;
    EXPECT_LT(r.cotangent, 1e-10) << tag;
    EXPECT_LT(r.omega_identity, 1e-10) << tag;
  });
}

TEST(RigidCmap, SignDegeneracyIsReported) {
  auto f = verify::make_prepotential("quadratic", 0, -1);
  std::vector<EpsComplex> x{EpsComplex(0.8, 0.6, -1)};  // H = 1
  std::vector<double> qh{0.1, 0.2};
  EXPECT_THROW(cmap::rotating_field(f, -1, 2.0, x, qh), AssumptionViolation);
  EXPECT_THROW(cmap::rotating_field(f, -1, -2.0, x, qh), AssumptionViolation);
  auto r = cmap::rotating_field(f, -1, 0.5, x, qh);
  EXPECT_EQ(r.sigma, 1);
  EXPECT_EQ(r.sigma1, -1);
}
