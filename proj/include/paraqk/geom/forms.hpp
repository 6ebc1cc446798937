#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "paraqk/epsnum/eigen_support.hpp"

namespace paraqk::geom {

/// Strictly increasing index tuples of length k in {0..dim-1}, in
/// lexicographic order, with reverse lookup.
class Combinations {
 public:
  static const Combinations& get(int dim, int k);

  int dim() const { return dim_; }
  int degree() const { return k_; }
  std::size_t size() const { return count_; }
  std::span<const int> tuple(std::size_t r) const {
    return {tuples_.data() + r * static_cast<std::size_t>(k_), static_cast<std::size_t>(k_)};
  }
  /// Rank of a strictly increasing tuple.
  std::size_t rank(std::span<const int> sorted) const;

 private:
  Combinations(int dim, int k);
  int dim_;
  int k_;
  std::size_t count_ = 0;
  std::vector<int> tuples_;
};

/// Differential k-form with jet components on increasing index tuples.
/// Components follow omega_{i1..ik} = omega(d_i1, ..., d_ik); wedge products
/// use the determinant convention (dx ^ dy)(d_x, d_y) = 1.
class Form {
 public:
  Form() = default;
  Form(int dim, int degree);

  static Form scalar(const RJet& f);
  static Form one_form(const JetVec& a);
  /// Two-form from an antisymmetric matrix; throws UsageError otherwise.
  static Form two_form(const JetMat& m, double tol = 1e-12);

  int dim() const { return dim_; }
  int degree() const { return k_; }
  std::size_t size() const { return comps_.size(); }
  RJet& operator[](std::size_t r) { return comps_[r]; }
  const RJet& operator[](std::size_t r) const { return comps_[r]; }
  const Combinations& basis() const { return Combinations::get(dim_, k_); }

  /// Component for an arbitrary index tuple (antisymmetrized lookup).
  RJet at(std::span<const int> idx) const;

  JetVec vector() const;
  JetMat matrix() const;
  /// Largest absolute expansion-point value.
  double max_abs() const;
  Form truncate(int order) const;

  Form& operator+=(const Form& o);
  Form& operator-=(const Form& o);
  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }
  friend Form operator*(const RJet& s, const Form& a);
  friend Form operator*(double s, const Form& a) { return RJet(s) * a; }

 private:
  int dim_ = 0;
  int k_ = 0;
  std::vector<RJet> comps_;
};

Form wedge(const Form& a, const Form& b);

/// d, computed from jet derivatives; lowers the jet order by one.
Form exterior_derivative(const Form& w);

/// iota_V w.
Form interior(const JetVec& v, const Form& w);

/// L_V w by the coordinate formula (not via Cartan's identity).
Form lie_derivative(const Form& w, const JetVec& v);

/// Pull a form back along a coordinate embedding y(x); jac(i, a) = dy^i/dx^a.
Form pullback(const Form& w, const JetMat& jac);

}  // namespace paraqk::geom
