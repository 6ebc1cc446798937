#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace paraqk {

/// Maximum truncation order of a jet.
inline constexpr int kMaxJetOrder = 5;
/// Maximum number of independent variables of a jet.
inline constexpr int kMaxJetVars = 21;

/// Immutable index tables for dense truncated Taylor series in `nvars`
/// variables up to total degree `order`.
///
/// Coefficients are stored in graded order: all multi-indices of degree 0,
/// then degree 1, ... Spaces are interned, so two jets share a space iff they
/// have the same (nvars, order); pointer equality is space equality.
class JetSpace {
 public:
  struct Product {
    std::uint32_t lhs;
    std::uint32_t rhs;
    std::uint32_t out;
  };
  struct DerivativeTerm {
    std::uint32_t source;  // index in this space
    double factor;         // exponent of the differentiated variable after shift
  };

  static std::shared_ptr<const JetSpace> get(int nvars, int order);

  int nvars() const { return nvars_; }
  int order() const { return order_; }
  std::size_t size() const { return degree_.size(); }

  std::span<const std::uint8_t> exponents(std::size_t k) const {
    return {exponents_.data() + k * static_cast<std::size_t>(nvars_),
            static_cast<std::size_t>(nvars_)};
  }
  int degree(std::size_t k) const { return degree_[k]; }
  /// First coefficient index of total degree d (d may be order+1).
  std::size_t degree_begin(int d) const { return degree_begin_[static_cast<std::size_t>(d)]; }
  /// Index of a multi-index, if its degree does not exceed the order.
  std::optional<std::size_t> find(std::span<const std::uint8_t> alpha) const;
  /// Index of the degree-one monomial of variable i.
  std::size_t linear_index(int i) const { return 1 + static_cast<std::size_t>(i); }
  /// alpha! for coefficient k.
  double factorial(std::size_t k) const { return factorial_[k]; }

  /// All (lhs, rhs, out) with alpha_lhs + alpha_rhs = alpha_out, sorted by out.
  const std::vector<Product>& products() const { return products_; }

  /// Terms mapping coefficients of d/dx_var (a jet of order-1) from this space.
  const std::vector<DerivativeTerm>& derivative(int var) const {
    return derivative_[static_cast<std::size_t>(var)];
  }

  JetSpace(int nvars, int order);

 private:
  static std::uint64_t key(std::span<const std::uint8_t> alpha);

  int nvars_;
  int order_;
  std::vector<std::uint8_t> exponents_;
  std::vector<int> degree_;
  std::vector<std::size_t> degree_begin_;
  std::vector<double> factorial_;
  std::vector<std::pair<std::uint64_t, std::uint32_t>> lookup_;  // sorted by key
  std::vector<Product> products_;
  std::vector<std::vector<DerivativeTerm>> derivative_;
};

using JetSpacePtr = std::shared_ptr<const JetSpace>;

}  // namespace paraqk
