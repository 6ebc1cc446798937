#pragma once

#include <Eigen/Core>
#include <Eigen/LU>
#include <Eigen/Eigenvalues>

#include "paraqk/epsnum/jet.hpp"

namespace Eigen {

template <class S>
struct NumTraits<paraqk::Jet<S>> : GenericNumTraits<paraqk::Jet<S>> {
  using Real = paraqk::Jet<S>;
  using NonInteger = paraqk::Jet<S>;
  using Nested = paraqk::Jet<S>;
  using Literal = paraqk::Jet<S>;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 32,
    MulCost = 256
  };
  static inline Real epsilon() { return Real(1e-16); }
  static inline Real dummy_precision() { return Real(1e-12); }
  static inline int digits10() { return 15; }
};

template <class S, typename BinaryOp>
struct ScalarBinaryOpTraits<paraqk::Jet<S>, double, BinaryOp> {
  using ReturnType = paraqk::Jet<S>;
};
template <class S, typename BinaryOp>
struct ScalarBinaryOpTraits<double, paraqk::Jet<S>, BinaryOp> {
  using ReturnType = paraqk::Jet<S>;
};

}  // namespace Eigen

namespace paraqk {

using JetVec = Eigen::Matrix<RJet, Eigen::Dynamic, 1>;
using JetMat = Eigen::Matrix<RJet, Eigen::Dynamic, Eigen::Dynamic>;
using CJetVec = Eigen::Matrix<CJet, Eigen::Dynamic, 1>;
using CJetMat = Eigen::Matrix<CJet, Eigen::Dynamic, Eigen::Dynamic>;

/// Expansion-point values of a jet matrix.
template <class Derived>
Eigen::MatrixXd values(const Eigen::MatrixBase<Derived>& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).value();
  return out;
}

template <class Derived>
auto truncate(const Eigen::MatrixBase<Derived>& m, int order) {
  using Scalar = typename Derived::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).truncate(order);
  return out;
}

/// Componentwise d/dx_var.
template <class Derived>
auto derivative(const Eigen::MatrixBase<Derived>& m, int var) {
  using Scalar = typename Derived::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).derivative(var);
  return out;
}

/// Componentwise variable remap (see Jet::remap).
template <class Derived>
auto remap(const Eigen::MatrixBase<Derived>& m, std::span<const int> var_map, const JetSpacePtr& target) {
  using Scalar = typename Derived::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).remap(var_map, target);
  return out;
}

/// Constant jet matrix from values.
inline JetMat to_jets(const Eigen::MatrixXd& m) {
  JetMat out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = RJet(m(i, j));
  return out;
}

/// Inverse of a square jet matrix by Gauss-Jordan elimination, pivoting on
/// expansion-point magnitudes. Throws DegeneracyError when the value matrix is
/// numerically singular.
JetMat inverse(const JetMat& a);

/// Solve a x = b for jet matrices.
JetMat solve(const JetMat& a, const JetMat& b);

}  // namespace paraqk

namespace paraqk {

/// Inverse of a local diffeomorphism given as jets y_i(w) in the identity
/// chart of w expanded at w0. The result expresses w as jets in the variables
/// y around y(w0), of the same order. Throws DegeneracyError for a singular
/// Jacobian.
std::vector<RJet> invert_map(std::span<const RJet> y, std::span<const double> w0);

}  // namespace paraqk
