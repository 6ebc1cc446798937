#pragma once

#include <span>
#include <string>
#include <vector>

#include "paraqk/sk/prepotential.hpp"

namespace paraqk::sk {

/// Derivatives F_I and F_IJ (row-major, (n+1)^2 entries) composed along
/// eps1-complex jets X^I. F is expanded to order ord(X) + 2, so ord(X) <= 3.
struct HolomorphicJets {
  std::vector<CJet> fi;
  std::vector<CJet> fij;
};
HolomorphicJets holomorphic_jets(const Prepotential& f, std::span<const CJet> x);

/// CASK quantities as jets along X = x + i v.
struct ConicalJets {
  int n = 0;
  int eps1 = -1;
  std::vector<CJet> x;
  HolomorphicJets hol;
  JetMat n_mat;  // N = -2 eps1 Im F_IJ
  JetMat r_mat;  // R = 2 Re F_IJ
  RJet h;        // H = X N Xbar / 2
  JetVec q;      // (Re X^I, Re F_I)
  JetVec dh;     // H_a = dH/dq^a
};
ConicalJets conical_jets(const Prepotential& f, std::span<const RJet> x, std::span<const RJet> v);

/// H_ab from N and R by the block formula, and its inverse H^ab.
JetMat hesse_matrix(const JetMat& n, const JetMat& r, int eps1);
JetMat hesse_inverse(const JetMat& n, const JetMat& r, int eps1);
/// dq/d(x, v) = [[1, 0], [R/2, -N/2]] and its inverse.
JetMat conical_jacobian(const JetMat& n, const JetMat& r);
JetMat conical_jacobian_inverse(const JetMat& n, const JetMat& r);

/// Pointwise CASK data.
struct CaskPoint {
  std::vector<EpsComplex> x;
  Eigen::MatrixXd n_mat;
  Eigen::MatrixXd r_mat;
  double r2 = 0.0;
  double h = 0.0;
};

/// Domain conditions: F regular, X^0 Xbar^0 > 0, Re X^0 > 0, r^2 > 0 and N
/// invertible. On failure `why` names the violated condition.
bool admissible(const Prepotential& f, std::span<const EpsComplex> x, std::string* why = nullptr);

/// Throws DomainError for inadmissible X.
CaskPoint cask_point(const Prepotential& f, std::span<const EpsComplex> x);

struct CaskMetric {
  Eigen::MatrixXd direct;   // Hessian of H(q), q(X) inverted as jets
  Eigen::MatrixXd block;    // block formula
  Eigen::MatrixXd inverse;  // displayed inverse formula
  double rel_diff = 0.0;    // |direct - block| / |block|
  double inverse_residual = 0.0;  // |block * inverse - 1|
};
/// Throws DegeneracyError when N is singular.
CaskMetric cask_metric(const Prepotential& f, std::span<const EpsComplex> x);

/// Solves q(X) = q for X by damped Newton iteration in Im X, seeded at
/// Im X = v0 (tolerance 1e-12, at most 50 steps). Throws DomainError on
/// failure.
std::vector<EpsComplex> point_from_q(const Prepotential& f, std::span<const double> q, std::span<const double> v0);

struct ConicalDecomposition {
  double residual = 0.0;   // |g_M - (dr^2 - eps1 r^2 eta~^2 - r^2 pi* g_Mbar)|
  double eta_jxi = 0.0;    // |eta~(J xi) + eps1|
  double eta_xi = 0.0;     // |eta~(xi)|
  double block_vs_complex = 0.0;  // |D^T H D - diag(N, -eps1 N)|
};
/// Throws GeometryError when r^2 <= 0.
ConicalDecomposition conical_decomposition_check(const Prepotential& f, std::span<const EpsComplex> x);

/// PSK quantities as jets along z = a + i b (z^0 = 1), real coordinates
/// ordered (a^1..a^n, b^1..b^n).
struct PskJets {
  int n = 0;
  std::vector<CJet> z;   // z^0 = 1 included
  HolomorphicJets hol;
  RJet kpot;             // K = -log(z N zbar)
  JetMat g_bar;          // 2n x 2n real tensor of dd^c K
  JetVec dck;            // d^c K
  JetMat cal_r;          // Re of the period matrix
  JetMat cal_i;          // Im of the period matrix
};
PskJets psk_jets(const Prepotential& f, std::span<const RJet> a, std::span<const RJet> b);

/// (I^-1, I^-1 R; R I^-1, -eps1 I + R I^-1 R); throws DegeneracyError when I
/// is singular.
JetMat hhat_matrix(const JetMat& cal_r, const JetMat& cal_i, int eps1);

struct PskPoint {
  std::vector<EpsComplex> z;
  double kpot = 0.0;
  Eigen::MatrixXd g_bar;
  Eigen::VectorXd dck;
  Eigen::MatrixXd cal_r;
  Eigen::MatrixXd cal_i;
  Eigen::MatrixXd hhat;
};
/// z holds z^1..z^n.
PskPoint psk_data(const Prepotential& f, std::span<const EpsComplex> z);

/// Relative difference of the two sides of the period-matrix identity
/// -A N^-1 Abar + (2/r^2)|X.A|^2 = -(eps1/2) Hhat(p, p), A_I = p~_I + F_IJ p^J,
/// over the given covectors p = (p~, p).
double hhat_identity_residual(const Prepotential& f, std::span<const EpsComplex> x,
                              const std::vector<Eigen::VectorXd>& covectors);

}  // namespace paraqk::sk
