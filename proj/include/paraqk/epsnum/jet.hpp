#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "paraqk/epsnum/eps_complex.hpp"
#include "paraqk/epsnum/jet_space.hpp"
#include "paraqk/error.hpp"

namespace paraqk {

/// Truncated multivariate Taylor series with coefficients of type S
/// (double or EpsComplex).
///
/// A jet without a space is a constant; it combines with any jet. Jets with a
/// space only combine with jets of the very same space.
template <class S>
class Jet {
 public:
  using Scalar = S;

  Jet() : coeffs_(1, S{}) {}
  Jet(double c) : coeffs_(1, S(c)) {}  // NOLINT: constants embed implicitly
  template <class T = S, class = std::enable_if_t<!std::is_same_v<T, double>>>
  Jet(const S& c) : coeffs_(1, c) {}  // NOLINT
  explicit Jet(JetSpacePtr space) : space_(std::move(space)), coeffs_(space_->size(), S{}) {}

  static Jet constant(JetSpacePtr space, const S& c) {
    Jet j(std::move(space));
    j.coeffs_[0] = c;
    return j;
  }
  /// value + (x_i - x_i(0)).
  static Jet variable(JetSpacePtr space, int i, const S& value) {
    Jet j(std::move(space));
    j.coeffs_[0] = value;
    if (j.space_->order() > 0) j.coeffs_[j.space_->linear_index(i)] = S(1.0);
    return j;
  }

  const JetSpacePtr& space() const { return space_; }
  bool is_constant() const { return !space_; }
  int order() const { return space_ ? space_->order() : 0; }
  int nvars() const { return space_ ? space_->nvars() : 0; }
  std::size_t size() const { return coeffs_.size(); }

  const S& value() const { return coeffs_[0]; }
  const S& operator[](std::size_t k) const { return coeffs_[k]; }
  S& operator[](std::size_t k) { return coeffs_[k]; }
  std::span<const S> coeffs() const { return coeffs_; }
  std::span<S> coeffs() { return coeffs_; }

  /// Coefficient of the degree-one term in variable i (= first partial).
  S gradient(int i) const {
    if (!space_ || space_->order() < 1) return S{};
    return coeffs_[space_->linear_index(i)];
  }

  /// Partial derivative d^alpha f / d x^alpha at the expansion point.
  S partial(std::span<const std::uint8_t> alpha) const {
    if (!space_) {
      for (auto a : alpha) if (a) return S{};
      return coeffs_[0];
    }
    auto k = space_->find(alpha);
    if (!k) return S{};
    return space_->factorial(*k) * coeffs_[*k];
  }

  /// Same jet viewed in a space of the given (lower or equal) order.
  Jet truncate(int order) const {
    if (!space_ || order >= space_->order()) {
      if (space_ && order > space_->order()) throw UsageError("jet: cannot raise truncation order");
      return *this;
    }
    Jet r(JetSpace::get(space_->nvars(), order));
    for (std::size_t k = 0; k < r.size(); ++k) r.coeffs_[k] = coeffs_[k];
    return r;
  }

  /// d/dx_i; the result has order one less.
  Jet derivative(int i) const {
    if (!space_) return Jet();
    if (space_->order() == 0) throw UsageError("jet: cannot differentiate an order-0 jet");
    Jet r(JetSpace::get(space_->nvars(), space_->order() - 1));
    const auto& terms = space_->derivative(i);
    for (std::size_t k = 0; k < terms.size(); ++k) r.coeffs_[k] = terms[k].factor * coeffs_[terms[k].source];
    return r;
  }

  /// Re-express in another variable set. var_map[i] is the new index of old
  /// variable i, or -1 if that variable is frozen at its expansion value.
  Jet remap(std::span<const int> var_map, const JetSpacePtr& target) const {
    if (!space_) return *this;
    if (static_cast<int>(var_map.size()) != space_->nvars()) throw UsageError("jet: bad variable map");
    Jet r(target);
    std::vector<std::uint8_t> beta(static_cast<std::size_t>(target->nvars()));
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
      if (space_->degree(k) > target->order()) break;
      std::fill(beta.begin(), beta.end(), 0);
      bool keep = true;
      auto alpha = space_->exponents(k);
      for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (alpha[i] == 0) continue;
        if (var_map[i] < 0) {
          keep = false;
          break;
        }
        beta[static_cast<std::size_t>(var_map[i])] += alpha[i];
      }
      if (!keep) continue;
      r.coeffs_[*target->find(beta)] += coeffs_[k];
    }
    return r;
  }

  Jet& operator+=(const Jet& o) { return *this = *this + o; }
  Jet& operator-=(const Jet& o) { return *this = *this - o; }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
  Jet& operator/=(const Jet& o) { return *this = *this / o; }

  friend Jet operator+(const Jet& a, const Jet& b) {
    if (b.is_constant()) {
      Jet r = a;
      r.coeffs_[0] += b.coeffs_[0];
      return r;
    }
    if (a.is_constant()) return b + a;
    if (a.space_ != b.space_) return align(a, b, [](const Jet& x, const Jet& y) { return x + y; });
    Jet r = a;
    for (std::size_t k = 0; k < r.size(); ++k) r.coeffs_[k] += b.coeffs_[k];
    return r;
  }
  friend Jet operator-(const Jet& a) {
    Jet r = a;
    for (auto& c : r.coeffs_) c = -c;
    return r;
  }
  friend Jet operator-(const Jet& a, const Jet& b) { return a + (-b); }

  friend Jet operator*(const Jet& a, const Jet& b) {
    if (b.is_constant()) return a.scaled(b.coeffs_[0]);
    if (a.is_constant()) return b.scaled(a.coeffs_[0]);
    if (a.space_ != b.space_) return align(a, b, [](const Jet& x, const Jet& y) { return x * y; });
    Jet r(a.space_);
    const S* x = a.coeffs_.data();
    const S* y = b.coeffs_.data();
    S* z = r.coeffs_.data();
    for (const auto& p : a.space_->products()) z[p.out] += x[p.lhs] * y[p.rhs];
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) {
    if (b.is_constant()) return a.scaled(S(1.0) / b.coeffs_[0]);
    return a * inverse(b);
  }

  /// Exact coefficientwise equality.
  friend bool operator==(const Jet& a, const Jet& b) {
    const Jet d = a - b;
    for (const auto& c : d.coeffs_)
      if (!(c == S{})) return false;
    return true;
  }

  friend Jet operator*(double s, const Jet& a) { return a.scaled(S(s)); }
  friend Jet operator*(const Jet& a, double s) { return a.scaled(S(s)); }

  Jet scaled(const S& s) const {
    Jet r = *this;
    for (auto& c : r.coeffs_) c = c * s;
    return r;
  }

  /// f(a) where coeffs[k] = f^(k)(a0) / k!, k = 0..order.
  Jet compose_univariate(std::span<const S> taylor) const {
    if (!space_) return Jet(taylor[0]);
    Jet h = *this;
    h.coeffs_[0] = S{};
    const int m = space_->order();
    Jet r = Jet::constant(space_, taylor[static_cast<std::size_t>(m)]);
    for (int k = m - 1; k >= 0; --k) {
      r = r * h;
      r.coeffs_[0] += taylor[static_cast<std::size_t>(k)];
    }
    return r;
  }

  friend Jet inverse(const Jet& b) {
    const S b0 = b.value();
    if constexpr (std::is_same_v<S, double>) {
      if (b0 == 0.0) throw DomainError("jet: division by zero");
    } else {
      if (std::abs(norm2(b0)) < kMinEpsNorm2) {
        throw DomainError("jet: division by an eps-complex zero divisor");
      }
    }
    if (b.is_constant()) return Jet(S(1.0) / b0);
    const S inv0 = S(1.0) / b0;
    std::vector<S> taylor(static_cast<std::size_t>(b.order()) + 1);
    S p = inv0;
    for (std::size_t k = 0; k < taylor.size(); ++k) {
      taylor[k] = (k % 2 == 0) ? p : -p;
      p = p * inv0;
    }
    return b.compose_univariate(taylor);
  }

 private:
  // Operands over the same variables but of different orders are combined at
  // the lower order.
  template <class Op>
  static Jet align(const Jet& a, const Jet& b, Op op) {
    if (a.space_->nvars() != b.space_->nvars()) throw UsageError("jet: operands live in different jet spaces");
    const int m = std::min(a.space_->order(), b.space_->order());
    return op(a.truncate(m), b.truncate(m));
  }

  JetSpacePtr space_;
  std::vector<S> coeffs_;
};

using RJet = Jet<double>;
using CJet = Jet<EpsComplex>;

// ---------------------------------------------------------------------------
// Real elementary functions.

namespace detail {
template <class F>
RJet apply_real(const RJet& x, F&& derivs) {
  std::vector<double> taylor(static_cast<std::size_t>(x.order()) + 1);
  derivs(x.value(), taylor);
  return x.compose_univariate(taylor);
}
}  // namespace detail

inline RJet exp(const RJet& x) {
  return detail::apply_real(x, [](double a, std::vector<double>& t) {
    double e = std::exp(a), f = 1.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
      if (k > 0) f *= static_cast<double>(k);
      t[k] = e / f;
    }
  });
}

inline RJet log(const RJet& x) {
  if (x.value() <= 0.0) throw DomainError("jet: log of a non-positive value");
  return detail::apply_real(x, [](double a, std::vector<double>& t) {
    t[0] = std::log(a);
    double p = 1.0;
    for (std::size_t k = 1; k < t.size(); ++k) {
      p /= a;
      t[k] = ((k % 2 == 1) ? 1.0 : -1.0) * p / static_cast<double>(k);
    }
  });
}

/// x^s for real s; requires x > 0 unless s is a non-negative integer.
inline RJet pow(const RJet& x, double s) {
  if (x.value() <= 0.0) throw DomainError("jet: real power of a non-positive value");
  return detail::apply_real(x, [s](double a, std::vector<double>& t) {
    double coeff = 1.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
      t[k] = coeff * std::pow(a, s - static_cast<double>(k));
      coeff *= (s - static_cast<double>(k)) / static_cast<double>(k + 1);
    }
  });
}

inline RJet sqrt(const RJet& x) { return pow(x, 0.5); }

/// |x|, differentiable away from zero.
inline RJet abs(const RJet& x) {
  if (x.value() == 0.0) throw DomainError("jet: abs at zero");
  return x.value() > 0.0 ? x : -x;
}

inline double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// ---------------------------------------------------------------------------
// Eps-complex jets.

inline RJet real_part(const CJet& z) {
  if (z.is_constant()) return RJet(z.value().re);
  RJet r(z.space());
  for (std::size_t k = 0; k < z.size(); ++k) r[k] = z[k].re;
  return r;
}

inline RJet imag_part(const CJet& z) {
  if (z.is_constant()) return RJet(z.value().im);
  RJet r(z.space());
  for (std::size_t k = 0; k < z.size(); ++k) r[k] = z[k].im;
  return r;
}

inline CJet conj(const CJet& z) {
  CJet r = z;
  for (std::size_t k = 0; k < r.size(); ++k) r[k] = conj(r[k]);
  return r;
}

/// re + i_eps im.
inline CJet make_eps(const RJet& re, const RJet& im, int eps) {
  const JetSpacePtr& sp = re.is_constant() ? im.space() : re.space();
  if (!re.is_constant() && !im.is_constant() && re.space() != im.space()) {
    throw UsageError("jet: real and imaginary parts live in different spaces");
  }
  if (!sp) return CJet(EpsComplex(re.value(), im.value(), eps));
  CJet r(sp);
  for (std::size_t k = 0; k < r.size(); ++k) {
    const double a = re.is_constant() ? (k == 0 ? re.value() : 0.0) : re[k];
    const double b = im.is_constant() ? (k == 0 ? im.value() : 0.0) : im[k];
    r[k] = EpsComplex(a, b, eps);
  }
  return r;
}

inline CJet to_eps(const RJet& x) {
  if (x.is_constant()) return CJet(EpsComplex(x.value()));
  CJet r(x.space());
  for (std::size_t k = 0; k < r.size(); ++k) r[k] = EpsComplex(x[k]);
  return r;
}

/// Integer power; negative exponents divide.
template <class S>
Jet<S> ipow(const Jet<S>& x, int k) {
  if (k < 0) return inverse(ipow(x, -k));
  Jet<S> r(1.0);
  for (int i = 0; i < k; ++i) r = r * x;
  return r;
}

// ---------------------------------------------------------------------------
// Composition.

/// Products of the increments h_i = inner_i - inner_i(0) indexed by the
/// multi-indices of an outer space; shared between several outer series.
template <class S>
class MonomialCache {
 public:
  MonomialCache(std::span<const Jet<S>> inner, int outer_order) {
    if (inner.empty()) throw UsageError("jet: composition needs at least one inner jet");
    target_ = nullptr;
    for (const auto& h : inner) {
      if (!h.is_constant()) {
        if (target_ && target_ != h.space()) throw UsageError("jet: inner jets live in different spaces");
        target_ = h.space();
      }
    }
    if (!target_) throw UsageError("jet: composition needs a non-constant inner jet");
    const int order = std::min(outer_order, target_->order());
    outer_ = JetSpace::get(static_cast<int>(inner.size()), order);
    std::vector<Jet<S>> incr;
    for (const auto& h : inner) {
      Jet<S> d = h.is_constant() ? Jet<S>(target_) : h;
      d[0] = S{};
      incr.push_back(std::move(d));
    }
    mono_.reserve(outer_->size());
    mono_.push_back(Jet<S>::constant(target_, S(1.0)));
    for (std::size_t k = 1; k < outer_->size(); ++k) {
      auto alpha = outer_->exponents(k);
      std::vector<std::uint8_t> beta(alpha.begin(), alpha.end());
      std::size_t i = 0;
      while (beta[i] == 0) ++i;
      beta[i] -= 1;
      mono_.push_back(mono_[*outer_->find(beta)] * incr[i]);
    }
  }

  /// outer(inner) where outer is a Taylor series in the increments.
  Jet<S> apply(const Jet<S>& outer) const {
    if (outer.is_constant()) return Jet<S>::constant(target_, outer.value());
    if (outer.nvars() != outer_->nvars()) throw UsageError("jet: composition arity mismatch");
    Jet<S> r(target_);
    const std::size_t n = std::min(outer.size(), outer_->size());
    for (std::size_t k = 0; k < n; ++k) {
      const S& c = outer[k];
      if (c == S{}) continue;
      const auto& m = mono_[k];
      for (std::size_t j = 0; j < r.size(); ++j) r[j] += c * m[j];
    }
    return r;
  }

  const JetSpacePtr& target() const { return target_; }

 private:
  JetSpacePtr target_;
  JetSpacePtr outer_;
  std::vector<Jet<S>> mono_;
};

template <class S>
Jet<S> compose(const Jet<S>& outer, std::span<const Jet<S>> inner) {
  return MonomialCache<S>(inner, outer.order()).apply(outer);
}

/// Identity jets x0_i + dx_i of the given order.
template <class S>
std::vector<Jet<S>> identity_jets(std::span<const S> x0, int order) {
  auto sp = JetSpace::get(static_cast<int>(x0.size()), order);
  std::vector<Jet<S>> out;
  out.reserve(x0.size());
  for (std::size_t i = 0; i < x0.size(); ++i) out.push_back(Jet<S>::variable(sp, static_cast<int>(i), x0[i]));
  return out;
}

/// Taylor expansion of f at x to the given order; f must be evaluable on jets.
template <class S, class F>
Jet<S> jet_lift(F&& f, std::span<const S> x, int order) {
  if (order > kMaxJetOrder) throw ConfigError("jet: order must not exceed 5");
  auto vars = identity_jets<S>(x, order);
  return f(std::span<const Jet<S>>(vars));
}

}  // namespace paraqk
