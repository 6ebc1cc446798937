#pragma once

#include <array>
#include <span>

#include "paraqk/geom/chart.hpp"
#include "paraqk/sk/cask.hpp"

namespace paraqk::cmap {

/// Omega_ab = (0, 1; -1, 0) in (k + k) blocks; Omega^ab = -Omega_ab.
Eigen::MatrixXd symplectic(int k);

/// Chart u = (x^I, v^I, qhat^a) on TM with X^I = x^I + i v^I.
geom::Chart cmap_chart(int n);

/// Rigid c-map structure as jets in the u chart.
struct CmapJets {
  int n = 0;
  int eps1 = -1;
  int eps2 = -1;
  sk::ConicalJets cask;
  JetMat hab;        // H_ab in the q coordinates
  JetMat t;          // d(q, qhat)/du
  JetMat t_inv;
  JetMat g;
  std::array<JetMat, 3> j;
  std::array<JetMat, 3> omega;
  JetVec z;          // rotating field
};
CmapJets cmap_jets(const sk::Prepotential& f, int eps2, std::span<const RJet> u);

/// Pointwise structure in the coordinates (q, qhat) with p = 2 Omega qhat.
struct RigidCmapPoint {
  Eigen::VectorXd q;
  Eigen::VectorXd qhat;
  Eigen::VectorXd p;
  Eigen::MatrixXd hab;
  Eigen::MatrixXd g;
  std::array<Eigen::MatrixXd, 3> j;
  std::array<Eigen::MatrixXd, 3> omega;
};
/// Throws DegeneracyError when H_ab is singular and GeometryError when the
/// displayed forms disagree with -eps_a g(J_a., .).
RigidCmapPoint hk_structure(const sk::Prepotential& f, int eps2, std::span<const EpsComplex> x,
                            std::span<const double> qhat);

struct RotatingField {
  Eigen::VectorXd z;     // in (q, qhat)
  double f = 0.0;        // -eps1 (2H - c)
  double f1 = 0.0;       // eps1 (2H + c)
  Eigen::VectorXd beta;  // g(Z, .)
  double beta_z = 0.0;
  int sigma = 0;
  int sigma1 = 0;
  int lambda = 0;
};
/// Throws AssumptionViolation when f or f1 is numerically zero.
RotatingField rotating_field(const sk::Prepotential& f, int eps2, double c, std::span<const EpsComplex> x,
                             std::span<const double> qhat);

struct CmapChecks {
  double algebra = 0.0;
  double omega_consistency = 0.0;
  std::array<double, 3> closure{};
  double df_omega1 = 0.0;
  double lz_g = 0.0;
  double lz_j1 = 0.0;
  double lz_j2 = 0.0;
  double beta_z = 0.0;
  double beta_formula = 0.0;
  double f1_identity = 0.0;
  double p_roundtrip = 0.0;
  double cotangent = 0.0;
  double omega_identity = 0.0;  // Omega H Omega - 4 eps1 H^-1
};
CmapChecks cmap_checks(const sk::Prepotential& f, int eps2, double c, std::span<const EpsComplex> x,
                       std::span<const double> qhat);

}  // namespace paraqk::cmap
