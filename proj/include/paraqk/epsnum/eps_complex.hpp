#pragma once

#include <cmath>
#include <iosfwd>

#include "paraqk/error.hpp"

namespace paraqk {

/// Number re + i_eps * im with i_eps^2 = eps.
///
/// eps = -1 gives the complex numbers, eps = +1 the para-complex (split-complex)
/// numbers. eps = 0 marks a purely real value that combines with either algebra.
struct EpsComplex {
  double re = 0.0;
  double im = 0.0;
  int eps = 0;

  constexpr EpsComplex() = default;
  constexpr EpsComplex(double r) : re(r) {}  // NOLINT: implicit real embedding
  EpsComplex(double r, double i, int e) : re(r), im(i), eps(e) {
    if (e != -1 && e != 1 && !(e == 0 && i == 0.0)) {
      throw UsageError("EpsComplex: eps must be -1 or +1");
    }
  }

  /// The unit i_eps.
  static EpsComplex unit(int e) { return {0.0, 1.0, e}; }
};

namespace detail {
inline int merge_eps(int a, int b) {
  if (a != 0 && b != 0 && a != b) {
    throw UsageError("EpsComplex: operands belong to different algebras");
  }
  return a != 0 ? a : b;
}
}  // namespace detail

/// Value equality; the algebra tag is ignored.
inline bool operator==(const EpsComplex& a, const EpsComplex& b) { return a.re == b.re && a.im == b.im; }

inline EpsComplex operator+(const EpsComplex& a, const EpsComplex& b) {
  EpsComplex r;
  r.eps = detail::merge_eps(a.eps, b.eps);
  r.re = a.re + b.re;
  r.im = a.im + b.im;
  return r;
}

inline EpsComplex operator-(const EpsComplex& a, const EpsComplex& b) {
  EpsComplex r;
  r.eps = detail::merge_eps(a.eps, b.eps);
  r.re = a.re - b.re;
  r.im = a.im - b.im;
  return r;
}

inline EpsComplex operator-(const EpsComplex& a) {
  EpsComplex r = a;
  r.re = -a.re;
  r.im = -a.im;
  return r;
}

/// (a + i b)(c + i d) = (ac + eps bd) + i (ad + bc).
inline EpsComplex operator*(const EpsComplex& a, const EpsComplex& b) {
  EpsComplex r;
  r.eps = detail::merge_eps(a.eps, b.eps);
  r.re = a.re * b.re + r.eps * a.im * b.im;
  r.im = a.re * b.im + a.im * b.re;
  return r;
}

inline EpsComplex operator*(double s, const EpsComplex& a) {
  EpsComplex r = a;
  r.re *= s;
  r.im *= s;
  return r;
}
inline EpsComplex operator*(const EpsComplex& a, double s) { return s * a; }

inline EpsComplex conj(const EpsComplex& a) {
  EpsComplex r = a;
  r.im = -a.im;
  return r;
}

/// z * conj(z) = re^2 - eps im^2. Indefinite for para-complex numbers.
inline double norm2(const EpsComplex& a) { return a.re * a.re - a.eps * a.im * a.im; }

/// Smallest |z conj(z)| accepted by division.
inline constexpr double kMinEpsNorm2 = 1e-14;

inline EpsComplex inverse(const EpsComplex& a) {
  const double n = norm2(a);
  if (std::abs(n) < kMinEpsNorm2) {
    throw DomainError("EpsComplex: division by a (near) zero divisor");
  }
  return (1.0 / n) * conj(a);
}

inline EpsComplex operator/(const EpsComplex& a, const EpsComplex& b) { return a * inverse(b); }
inline EpsComplex operator/(const EpsComplex& a, double s) { return (1.0 / s) * a; }

inline EpsComplex& operator+=(EpsComplex& a, const EpsComplex& b) { return a = a + b; }
inline EpsComplex& operator-=(EpsComplex& a, const EpsComplex& b) { return a = a - b; }
inline EpsComplex& operator*=(EpsComplex& a, const EpsComplex& b) { return a = a * b; }

/// Componentwise max-abs distance; used by tests and residuals.
inline double abs_diff(const EpsComplex& a, const EpsComplex& b) {
  return std::max(std::abs(a.re - b.re), std::abs(a.im - b.im));
}

/// Integer power, negative exponents allowed where the base is invertible.
inline EpsComplex pow(const EpsComplex& a, int k) {
  EpsComplex base = k < 0 ? inverse(a) : a;
  EpsComplex r(1.0);
  for (int i = 0; i < std::abs(k); ++i) r = r * base;
  return r;
}

std::ostream& operator<<(std::ostream& os, const EpsComplex& a);

}  // namespace paraqk
