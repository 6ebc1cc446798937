#pragma once

#include <array>
#include <vector>

#include "paraqk/epsnum/eigen_support.hpp"

namespace paraqk::geom {

/// Valence of a tensor: `up` contravariant and `down` covariant slots.
struct Valence {
  int up = 0;
  int down = 0;
  bool operator==(const Valence&) const = default;
};

/// Lie derivative of a two-index tensor (valence (0,2) or (1,1), stored as
/// T(a,b) = T_ab or T^a_b). Other valences throw UsageError.
JetMat lie_derivative(const JetMat& t, Valence valence, const JetVec& v);

/// L_V of a one-form.
JetVec lie_derivative_covector(const JetVec& a, const JetVec& v);

/// [V, W].
JetVec lie_bracket(const JetVec& v, const JetVec& w);

/// Directional derivative V(f).
RJet directional(const RJet& f, const JetVec& v);

/// Gradient covector df.
JetVec differential(const RJet& f);

/// Nijenhuis tensor N^a_bc of an endomorphism field J (jets of order >= 1).
/// Requires J^2 = eps Id at the expansion point for eps = +1 or -1.
std::vector<double> nijenhuis(const JetMat& j, double tol = 1e-8);

/// Max entry of |J_a^2 - eps_a|, |J1 J2 - J3|, |J_a J_b + J_b J_a| and, when a
/// metric is supplied, |g(J_a., .) + g(., J_a .)|. eps3 = -eps1 eps2.
double quaternion_algebra_residual(const std::array<Eigen::MatrixXd, 3>& j, int eps1, int eps2,
                                   const Eigen::MatrixXd* g = nullptr);

/// Largest absolute entry (expansion-point values for jets).
template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  if constexpr (std::is_same_v<typename Derived::Scalar, double>) {
    return m.cwiseAbs().maxCoeff();
  } else {
    return values(m).cwiseAbs().maxCoeff();
  }
}

/// J^c_a = -eps g^{cb} omega_ab, the endomorphism with omega = -eps g(J., .).
Eigen::MatrixXd endomorphism_from_form(const Eigen::MatrixXd& g, const Eigen::MatrixXd& omega, int eps);
JetMat endomorphism_from_form(const JetMat& g, const JetMat& omega, int eps);

/// omega_ab = -eps g(J d_a, d_b).
JetMat form_from_endomorphism(const JetMat& g, const JetMat& j, int eps);

/// Symmetric product a (x) b + b (x) a halved: components (a_i b_j + a_j b_i)/2.
JetMat sym(const JetVec& a, const JetVec& b);
/// a (x) a.
JetMat sq(const JetVec& a);

/// A J A^-1 with A = 1 + t (y_var - y_var(p)) B. Keeps J^2 but is generically
/// not integrable; used as a negative control for the Nijenhuis tensor.
JetMat twisted_structure(const JetMat& j, const Eigen::MatrixXd& b, int var, double t);

}  // namespace paraqk::geom
