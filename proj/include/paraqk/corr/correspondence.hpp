#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>

#include "paraqk/geom/chart.hpp"
#include "paraqk/epsnum/eigen_support.hpp"

namespace paraqk::corr {

/// eps-hyper-Kaehler data on the base chart, with the rotating field Z, the
/// function f (df = -omega_1(Z, .)) and the base part of the connection
/// eta = ds + eta_M on P = M x R.
struct BaseJets {
  JetMat g;
  std::array<JetMat, 3> j;
  std::array<JetMat, 3> omega;
  JetVec z;
  RJet f;
  JetVec eta;
};

struct CorrespondenceInput {
  std::string name;
  int eps1 = -1;
  int eps2 = -1;
  geom::Chart base_chart;
  std::function<BaseJets(std::span<const RJet>)> base;
  int max_order = 3;
};

/// Chart of P: base coordinates followed by the fibre coordinate s, X_P = d_s.
geom::Chart bundle_chart(const CorrespondenceInput& in);

/// M' = {y^coordinate = value} in the chart of P.
struct Slice {
  int coordinate = 0;
  double value = 0.0;
};

/// Bundle quantities on P as jets; index 0..3 of theta is theta_a^P.
struct BundleJets {
  BaseJets base;  // lifted to P (zero s row and column)
  JetVec eta;
  JetVec beta;
  std::array<JetVec, 4> theta;
  JetMat g_p;
  JetVec z1;  // Z_1^P
  RJet f;
  RJet f1;
};
BundleJets bundle_jets(const CorrespondenceInput& in, std::span<const RJet> p);

struct BundleData {
  std::array<Eigen::VectorXd, 4> theta;
  Eigen::MatrixXd g_p;
  Eigen::VectorXd z1;
  Eigen::VectorXd eta;
  double f = 0.0;
  double f1 = 0.0;
};
/// Throws AssumptionViolation when f or f1 vanishes.
BundleData bundle_data(const CorrespondenceInput& in, std::span<const double> p);

struct BundleChecks {
  std::array<double, 3> lemma1{};  // d theta_a^P - eps1 eps_a pi* omega_a
  double kernel = 0.0;             // theta_{0,2,3}(Z_1^P), (theta_1 - f/f1 eta)(Z_1^P)
  double eta_norm = 0.0;           // eta(X_P) - 1
  double eta_curvature = 0.0;      // d eta - pi*(omega_1 - d beta / 2)
  double killing_z = 0.0;          // L_Z g on the base
  double f1_identity = 0.0;
};
BundleChecks bundle_checks(const CorrespondenceInput& in, std::span<const double> p);

/// Output of the correspondence on M' as jets in the chart of M' (the chart
/// of P without the slice coordinate). g has the requested order, the forms
/// and endomorphisms one order less.
struct QkJets {
  int dim = 0;
  int eps1 = -1;
  int eps2 = -1;
  int sigma = 0;
  int sigma1 = 0;
  Slice slice;
  JetMat g;
  std::array<JetVec, 4> theta_bar;  // theta_a^P / f on M'
  std::array<JetMat, 3> omega;
  std::array<JetMat, 3> j;
  JetVec x;  // X = (X_P - a Z_1^P)|M'
  RJet a;
  RJet f;
  Eigen::MatrixXd projector;  // d(Y -> Y') from T_pi(p) M to T_p M'
  std::array<Eigen::MatrixXd, 3> j_projector;
};
/// p is a point of P with p[slice.coordinate] = slice.value. Throws
/// GeometryError when M' is not transversal to Z_1^P and DegeneracyError
/// when g' is degenerate.
QkJets qk_jets(const CorrespondenceInput& in, const Slice& slice, std::span<const double> p, int order);

/// g' at a point of M' (values).
Eigen::MatrixXd qk_metric(const CorrespondenceInput& in, const Slice& slice, std::span<const double> p);

struct QkChecks {
  double algebra = 0.0;
  double projector = 0.0;      // J' from g'^-1 omega' against the projector construction
  double killing = 0.0;        // L_X g'
  double condition = 0.0;      // condition number of g'
  double nu = 0.0;
  double nu_residual = 0.0;    // |nu + 4 eps1 sigma|
  double ricci_w = 0.0;
  double q_invariance = 0.0;
  double w_norm = 0.0;
  double riemann_symmetry = 0.0;
  double nijenhuis = 0.0;
  double domega = 0.0;         // d omega'_a - 2 eps3 (eps_c th_b ^ w_c - eps_b th_c ^ w_b)
  double d_omega4 = 0.0;
  double moment_map = 0.0;     // nabla mu^X - omega'_a(X, .) J'_a
  std::array<double, 3> lie_x_omega{};     // against (0, -2 eps3 a' w3, -2 a' w2)
  std::array<double, 3> lie_x_omega_mu{};  // against (0, 2 a' w3, 2 eps1 a' w2)
  double theta_bar_23 = 0.0;   // theta_2 - eps2|f|i_X w3, theta_3 + eps2|f| i_X w2
  double a_value = 0.0;
};
/// With curvature = false the order-2 quantities (nu, W, moment map) are
/// skipped and left at zero.
QkChecks qk_checks(const CorrespondenceInput& in, const Slice& slice, std::span<const double> p, bool curvature = true);

/// Matrices of J_a on the frame (Z, J1 Z, J2 Z, J3 Z) against the displayed
/// ones.
double vertical_matrices_residual(const CorrespondenceInput& in, std::span<const double> base_point);

}  // namespace paraqk::corr
