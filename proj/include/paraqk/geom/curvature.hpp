#pragma once

#include <array>
#include <vector>

#include "paraqk/epsnum/eigen_support.hpp"

namespace paraqk::geom {

/// Values-level curvature of a metric at one point. Riemann components are
/// R^a_bcd = riemann[((a*n + b)*n + c)*n + d] with R(d_c, d_d) d_b = R^a_bcd d_a.
struct CurvatureData {
  int dim = 0;
  Eigen::MatrixXd metric;
  Eigen::MatrixXd metric_inv;
  std::vector<double> christoffel;  // Gamma^a_bc at (a*n + b)*n + c
  std::vector<double> riemann;
  Eigen::MatrixXd ricci;  // Ric_bd = R^a_bad
  double scal = 0.0;
  double nu = 0.0;  // scal / (4m(m+2)) when dim = 4m, NaN otherwise

  double r(int a, int b, int c, int d) const {
    return riemann[static_cast<std::size_t>(((a * dim + b) * dim + c) * dim + d)];
  }
};

/// Christoffel symbols as jets; g must have order >= 1, the result has one
/// order less. Throws DegeneracyError for a singular metric.
std::vector<RJet> christoffel(const JetMat& g);

/// Curvature from a metric jet of order >= 2.
CurvatureData curvature(const JetMat& g);

/// Max residual of the Riemann symmetries and first Bianchi identity,
/// relative to the largest lowered component (absolute when that is < 1).
double riemann_symmetry_residual(const CurvatureData& c);

/// Max |nabla g| from a metric jet of order >= 1.
double metric_compatibility_residual(const JetMat& g);

/// Calibrated model tensor R0^a_bcd of (para-)quaternionic projective space;
/// its Ricci contraction is (m+2) g for dim 4m. Throws UsageError when the
/// triple violates the algebra beyond tol.
std::vector<double> model_curvature(const Eigen::MatrixXd& g, const std::array<Eigen::MatrixXd, 3>& j,
                                    int eps1, int eps2, double tol = 1e-6);

/// Ricci contraction of an arbitrary Riemann-type array.
Eigen::MatrixXd ricci_of(const std::vector<double>& r, int dim);

struct DecompositionResidual {
  double ricci_w = 0.0;     // |Ric(W)| relative to |Ric(R)|
  double q_invariance = 0.0;  // max |[W(d_c, d_d), J_a]| relative to |R|
  double w_norm = 0.0;      // max |W^a_bcd|
};

/// W = R - nu R0 and its trace and Q-invariance residuals.
DecompositionResidual curvature_decomposition(const CurvatureData& c, const std::array<Eigen::MatrixXd, 3>& j,
                                              int eps1, int eps2);

/// (nabla_c A)^a_b at (c*n + a)*n + b for an endomorphism jet A (order >= 1)
/// and Christoffel jets.
std::vector<double> covariant_derivative_endomorphism(const JetMat& a, const std::vector<RJet>& gamma);

}  // namespace paraqk::geom
