#pragma once

#include <span>
#include <string>
#include <vector>

#include "paraqk/epsnum/eigen_support.hpp"

namespace paraqk::sk {

/// coeff * prod_I (X^I)^exps[I], exponents summing to 2; coeff = re + i im.
struct Monomial {
  double re = 0.0;
  double im = 0.0;
  std::vector<int> exps;
};

/// Degree-2 homogeneous eps1-holomorphic prepotential F(X^0, ..., X^n)
/// given as a sum of (possibly rational) monomials.
class Prepotential {
 public:
  Prepotential(std::string name, int n, int eps1, std::vector<Monomial> terms);

  /// F = -(eps1/2) i eta_IJ X^I X^J, so that N = 2 eta and R = 0.
  static Prepotential quadratic(const Eigen::MatrixXd& eta, int eps1);
  /// F = kappa X^1 X^2 X^3 / X^0.
  static Prepotential cubic(int eps1, double kappa = 1.0);

  const std::string& name() const { return name_; }
  int n() const { return n_; }
  int eps1() const { return eps1_; }
  const std::vector<Monomial>& terms() const { return terms_; }

  CJet evaluate(std::span<const CJet> x) const;
  EpsComplex value(std::span<const EpsComplex> x) const;
  /// Taylor series of F at x0 to the given order.
  CJet taylor(std::span<const EpsComplex> x0, int order) const;
  /// All variables carrying negative exponents are invertible at x.
  bool regular_at(std::span<const EpsComplex> x) const;

 private:
  std::string name_;
  int n_;
  int eps1_;
  std::vector<Monomial> terms_;
};

struct HomogeneityResidual {
  double scaling = 0.0;  // |F(lambda X) - lambda^2 F(X)|
  double euler = 0.0;    // |X^I F_I - 2F|
};

/// Throws DomainError when F is singular at X.
HomogeneityResidual homogeneity_check(const Prepotential& f, std::span<const EpsComplex> x, double lambda);

}  // namespace paraqk::sk
