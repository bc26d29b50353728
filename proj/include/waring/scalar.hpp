#pragma once

#include <gmpxx.h>

#include <Eigen/Core>
#include <cmath>
#include <complex>
#include <concepts>
#include <iosfwd>
#include <string>
#include <type_traits>

#include "waring/errors.hpp"

namespace waring {

using Complex = std::complex<double>;

/// Complex number whose real and imaginary parts are arbitrary-precision rationals.
class GaussRational {
 public:
  GaussRational() = default;

  template <std::integral I>
  GaussRational(I value) : re_(static_cast<long>(value)) {}  // NOLINT(google-explicit-constructor)

  GaussRational(mpq_class re, mpq_class im = 0) : re_(std::move(re)), im_(std::move(im)) {  // NOLINT
    re_.canonicalize();
    im_.canonicalize();
  }

  static GaussRational ratio(long num, long den) { return GaussRational(mpq_class(num, den)); }

  const mpq_class& real() const { return re_; }
  const mpq_class& imag() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }

  GaussRational conj() const { return GaussRational(re_, -im_); }
  mpq_class norm() const { return re_ * re_ + im_ * im_; }

  Complex to_complex() const { return {re_.get_d(), im_.get_d()}; }

  GaussRational& operator+=(const GaussRational& o) {
    re_ += o.re_;
    if (sgn(o.im_) != 0) im_ += o.im_;
    return *this;
  }
  GaussRational& operator-=(const GaussRational& o) {
    re_ -= o.re_;
    if (sgn(o.im_) != 0) im_ -= o.im_;
    return *this;
  }
  GaussRational& operator*=(const GaussRational& o) {
    if (is_real() && o.is_real()) {
      re_ *= o.re_;
      return *this;
    }
    mpq_class re = re_ * o.re_ - im_ * o.im_;
    mpq_class im = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
  }
  GaussRational& operator/=(const GaussRational& o) {
    if (o.is_zero()) throw std::domain_error("GaussRational: division by zero");
    if (o.is_real()) {
      re_ /= o.re_;
      if (sgn(im_) != 0) im_ /= o.re_;
      return *this;
    }
    mpq_class n = o.norm();
    mpq_class re = (re_ * o.re_ + im_ * o.im_) / n;
    mpq_class im = (im_ * o.re_ - re_ * o.im_) / n;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
  }

  friend GaussRational operator+(GaussRational a, const GaussRational& b) { return a += b; }
  friend GaussRational operator-(GaussRational a, const GaussRational& b) { return a -= b; }
  friend GaussRational operator*(GaussRational a, const GaussRational& b) { return a *= b; }
  friend GaussRational operator/(GaussRational a, const GaussRational& b) { return a /= b; }
  friend GaussRational operator-(const GaussRational& a) { return GaussRational(-a.re_, -a.im_); }

  friend bool operator==(const GaussRational& a, const GaussRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const GaussRational& a, const GaussRational& b) { return !(a == b); }

 private:
  mpq_class re_{0};
  mpq_class im_{0};
};

/// "3", "-1/2", "(1/2+3i)", "(-2i)".
std::string to_string(const GaussRational& value);
std::ostream& operator<<(std::ostream& os, const GaussRational& value);

/// Shortest round-trip decimal for a double ("0.1", "1e-300", "3").
std::string to_string_shortest(double value);
/// Same rules as the exact printer: "2", "(0.5+0.25i)", "(-1.5i)".
std::string to_string(const Complex& value);

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<GaussRational> {
  static constexpr bool is_exact = true;
  static constexpr const char* name = "exact";
};

template <>
struct scalar_traits<Complex> {
  static constexpr bool is_exact = false;
  static constexpr const char* name = "float";
};

template <class S>
concept Scalar = requires { scalar_traits<S>::is_exact; };

template <class S>
inline constexpr bool is_exact_v = scalar_traits<S>::is_exact;

inline Complex to_complex(const GaussRational& v) { return v.to_complex(); }
inline Complex to_complex(const Complex& v) { return v; }

inline double magnitude(const GaussRational& v) { return std::abs(v.to_complex()); }
inline double magnitude(const Complex& v) { return std::abs(v); }

/// Exact zero test. On the float backend this is bitwise 0.0 + 0.0i, never an epsilon.
inline bool is_zero(const GaussRational& v) { return v.is_zero(); }
inline bool is_zero(const Complex& v) { return v.real() == 0.0 && v.imag() == 0.0; }

/// Exact backend: exact zero test. Float backend: |v| <= tol.
inline bool near_zero(const GaussRational& v, double /*tol*/) { return v.is_zero(); }
inline bool near_zero(const Complex& v, double tol) { return std::abs(v) <= tol; }

template <Scalar S>
S from_ratio(long num, long den) {
  if constexpr (is_exact_v<S>) {
    return GaussRational::ratio(num, den);
  } else {
    return Complex(static_cast<double>(num) / static_cast<double>(den), 0.0);
  }
}

template <Scalar S>
S from_integer(long v) {
  return from_ratio<S>(v, 1);
}

template <Scalar To>
To scalar_cast(const GaussRational& v) {
  if constexpr (is_exact_v<To>) {
    return v;
  } else {
    return v.to_complex();
  }
}

template <Scalar To>
To scalar_cast(const Complex& v) {
  static_assert(!is_exact_v<To>, "no implicit conversion from floating point to exact");
  return v;
}

/// Binomial coefficient C(n, k) in the requested backend.
template <Scalar S>
S binomial(int n, int k) {
  if (k < 0 || k > n) return from_integer<S>(0);
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  if constexpr (is_exact_v<S>) {
    return GaussRational(mpq_class(b));
  } else {
    return Complex(b.get_d(), 0.0);
  }
}

/// Falling factorial n (n-1) ... (n-k+1).
template <Scalar S>
S falling_factorial(int n, int k) {
  S out = from_integer<S>(1);
  for (int i = 0; i < k; ++i) out *= from_integer<S>(n - i);
  return out;
}

/// Tolerances used by the float backend. Ignored by exact arithmetic.
struct Tolerances {
  /// Relative rank threshold (times the largest matrix entry) for pivots and kernels.
  double rank = 1e-10;
  /// Relative residual below which a least-squares solution counts as a solution.
  double consistency = 1e-9;
  /// Relative separation below which two roots are considered repeated.
  double root_separation = 1e-6;
  /// Relative residual accepted when verifying decompositions.
  double verify = 1e-9;
};

}  // namespace waring

namespace Eigen {

template <>
struct NumTraits<waring::GaussRational> : GenericNumTraits<waring::GaussRational> {
  using Real = waring::GaussRational;
  using NonInteger = waring::GaussRational;
  using Nested = waring::GaussRational;
  using Literal = waring::GaussRational;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 4,
    AddCost = 16,
    MulCost = 32
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen
