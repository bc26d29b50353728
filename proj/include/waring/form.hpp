#pragma once

// Binary forms f(x, y) = sum_i C(d, i) a_i x^(d-i) y^i stored by their binomial-normalized
// coefficients a_i, differential operators in dx, dy, and power-sum decompositions.

#include <Eigen/Core>
#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "waring/errors.hpp"
#include "waring/scalar.hpp"

namespace waring {

template <class S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;
template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

template <Scalar S>
Vec<S> zeros(Eigen::Index n) {
  Vec<S> v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = from_integer<S>(0);
  return v;
}

template <Scalar S>
Mat<S> zeros(Eigen::Index rows, Eigen::Index cols) {
  Mat<S> m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = from_integer<S>(0);
  return m;
}

/// Homogeneous binary form of degree d with coefficients a_0..a_d in the binomial basis.
template <Scalar S>
class BinaryForm {
 public:
  /// The zero form of the given degree.
  explicit BinaryForm(int degree = 0) : coeffs_(zeros<S>(check_degree(degree) + 1)) {}

  explicit BinaryForm(Vec<S> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.size() == 0) throw DegreeError("a binary form needs at least one coefficient");
  }

  BinaryForm(std::initializer_list<S> coeffs) : BinaryForm(Vec<S>(from_list(coeffs))) {}

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const Vec<S>& coeffs() const { return coeffs_; }
  const S& coeff(int i) const { return coeffs_[i]; }

  /// Coefficient of x^(d-i) y^i in the monomial basis.
  S monomial_coeff(int i) const { return binomial<S>(degree(), i) * coeffs_[i]; }

  bool is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const S& c) { return waring::is_zero(c); });
  }

  /// Largest coefficient magnitude, ||a||_inf.
  double norm_inf() const {
    double m = 0.0;
    for (const auto& c : coeffs_) m = std::max(m, magnitude(c));
    return m;
  }

  friend bool operator==(const BinaryForm& a, const BinaryForm& b) {
    return a.degree() == b.degree() && a.coeffs_ == b.coeffs_;
  }

  BinaryForm& operator+=(const BinaryForm& o) {
    require_same_degree(o);
    for (int i = 0; i <= degree(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  BinaryForm& operator-=(const BinaryForm& o) {
    require_same_degree(o);
    for (int i = 0; i <= degree(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  BinaryForm& operator*=(const S& s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
  }
  friend BinaryForm operator+(BinaryForm a, const BinaryForm& b) { return a += b; }
  friend BinaryForm operator-(BinaryForm a, const BinaryForm& b) { return a -= b; }
  friend BinaryForm operator*(const S& s, BinaryForm a) { return a *= s; }

 private:
  static int check_degree(int d) {
    if (d < 0) throw DegreeError("negative degree");
    return d;
  }
  static Vec<S> from_list(std::initializer_list<S> list) {
    Vec<S> v(static_cast<Eigen::Index>(list.size()));
    Eigen::Index i = 0;
    for (const auto& s : list) v[i++] = s;
    return v;
  }
  void require_same_degree(const BinaryForm& o) const {
    if (o.degree() != degree()) throw DegreeError("forms of different degree");
  }

  Vec<S> coeffs_;
};

/// Homogeneous operator g = sum_j b_j dx^(e-j) dy^j.
template <Scalar S>
class DiffOperator {
 public:
  explicit DiffOperator(int degree = 0) : coeffs_(zeros<S>(degree + 1)) {
    if (degree < 0) throw DegreeError("negative operator degree");
  }
  explicit DiffOperator(Vec<S> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.size() == 0) throw DegreeError("an operator needs at least one coefficient");
  }

  static DiffOperator identity() { return DiffOperator(Vec<S>::Constant(1, from_integer<S>(1))); }
  static DiffOperator dx() { return linear(from_integer<S>(1), from_integer<S>(0)); }
  static DiffOperator dy() { return linear(from_integer<S>(0), from_integer<S>(1)); }
  /// u dx + v dy.
  static DiffOperator linear(const S& u, const S& v) {
    Vec<S> c(2);
    c << u, v;
    return DiffOperator(std::move(c));
  }
  /// p dy - q dx, the operator killing (p x + q y)^d.
  static DiffOperator annihilator_of(const S& p, const S& q) { return linear(-q, p); }

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const Vec<S>& coeffs() const { return coeffs_; }
  const S& coeff(int j) const { return coeffs_[j]; }

  bool is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const S& c) { return waring::is_zero(c); });
  }

  double norm_l1() const {
    double s = 0.0;
    for (const auto& c : coeffs_) s += magnitude(c);
    return s;
  }

  friend DiffOperator operator*(const DiffOperator& a, const DiffOperator& b) {
    DiffOperator out(a.degree() + b.degree());
    for (int i = 0; i <= a.degree(); ++i) {
      if (waring::is_zero(a.coeffs_[i])) continue;
      for (int j = 0; j <= b.degree(); ++j) out.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return out;
  }

  friend bool operator==(const DiffOperator& a, const DiffOperator& b) { return a.coeffs_ == b.coeffs_; }

 private:
  Vec<S> coeffs_;
};

/// weight * (x_coef x + y_coef y)^d.
template <Scalar S>
struct LinearFormPower {
  S weight;
  S x_coef;
  S y_coef;

  /// weight * (x + beta y)^d.
  static LinearFormPower finite(S weight, S beta) {
    return {std::move(weight), from_integer<S>(1), std::move(beta)};
  }
  /// weight * y^d.
  static LinearFormPower y_power(S weight) {
    return {std::move(weight), from_integer<S>(0), from_integer<S>(1)};
  }

  bool is_y_power() const { return waring::is_zero(x_coef); }
};

template <Scalar S>
struct Decomposition {
  int degree = 0;
  std::vector<LinearFormPower<S>> terms;
  /// Every term is (x + beta y)^d with distinct beta, plus at most one y^d term.
  bool canonical = false;

  std::size_t size() const { return terms.size(); }

  bool has_y_term() const {
    return std::any_of(terms.begin(), terms.end(), [](const auto& t) { return t.is_y_power(); });
  }

  std::vector<S> finite_betas() const {
    std::vector<S> out;
    for (const auto& t : terms)
      if (!t.is_y_power()) out.push_back(t.y_coef / t.x_coef);
    return out;
  }
};

template <Scalar S>
BinaryForm<S> from_monomial(int degree, const std::vector<S>& monomial_coeffs) {
  if (degree < 0 || static_cast<int>(monomial_coeffs.size()) != degree + 1)
    throw DegreeError("monomial coefficient count must be degree + 1");
  Vec<S> a(degree + 1);
  for (int i = 0; i <= degree; ++i) a[i] = monomial_coeffs[i] / binomial<S>(degree, i);
  return BinaryForm<S>(std::move(a));
}

template <Scalar S>
std::vector<S> to_monomial(const BinaryForm<S>& f) {
  std::vector<S> out;
  out.reserve(f.degree() + 1);
  for (int i = 0; i <= f.degree(); ++i) out.push_back(f.monomial_coeff(i));
  return out;
}

template <Scalar To, Scalar From>
BinaryForm<To> convert(const BinaryForm<From>& f) {
  Vec<To> a(f.degree() + 1);
  for (int i = 0; i <= f.degree(); ++i) a[i] = scalar_cast<To>(f.coeff(i));
  return BinaryForm<To>(std::move(a));
}

template <Scalar To, Scalar From>
Decomposition<To> convert(const Decomposition<From>& dec) {
  Decomposition<To> out{dec.degree, {}, dec.canonical};
  for (const auto& t : dec.terms)
    out.terms.push_back({scalar_cast<To>(t.weight), scalar_cast<To>(t.x_coef), scalar_cast<To>(t.y_coef)});
  return out;
}

/// df/dx. In the binomial basis a'_i = d a_i.
template <Scalar S>
BinaryForm<S> derivative_x(const BinaryForm<S>& f) {
  const int d = f.degree();
  if (d == 0) throw DegreeError("cannot differentiate a degree-0 form");
  Vec<S> a(d);
  const S scale = from_integer<S>(d);
  for (int i = 0; i < d; ++i) a[i] = scale * f.coeff(i);
  return BinaryForm<S>(std::move(a));
}

/// Antiderivative in x whose y^(d+1) monomial coefficient is constant_term / (d+1).
template <Scalar S>
BinaryForm<S> integrate_x(const BinaryForm<S>& f, const S& constant_term) {
  const int d = f.degree();
  Vec<S> a(d + 2);
  const S scale = from_integer<S>(d + 1);
  for (int i = 0; i <= d; ++i) a[i] = f.coeff(i) / scale;
  a[d + 1] = constant_term / scale;
  return BinaryForm<S>(std::move(a));
}

/// g o f by termwise monomial differentiation.
template <Scalar S>
BinaryForm<S> apply_operator(const DiffOperator<S>& g, const BinaryForm<S>& f) {
  const int d = f.degree();
  const int e = g.degree();
  if (e > d) throw DegreeError("operator degree exceeds form degree");
  const auto m = to_monomial(f);
  // Result monomial x^(d-e-k) y^k gathers x^(d-n) y^n with n = k + j under dx^(e-j) dy^j.
  std::vector<S> out(d - e + 1, from_integer<S>(0));
  for (int j = 0; j <= e; ++j) {
    if (is_zero(g.coeff(j))) continue;
    for (int k = 0; k <= d - e; ++k) {
      const int n = k + j;
      const S& mono = m[n];
      if (is_zero(mono)) continue;
      out[k] += g.coeff(j) * mono * falling_factorial<S>(d - n, e - j) * falling_factorial<S>(n, j);
    }
  }
  return from_monomial<S>(d - e, out);
}

template <Scalar S>
S evaluate(const BinaryForm<S>& f, const S& x0, const S& y0) {
  const int d = f.degree();
  S acc = from_integer<S>(0);
  for (int i = 0; i <= d; ++i) {
    S term = f.monomial_coeff(i);
    for (int k = 0; k < d - i; ++k) term *= x0;
    for (int k = 0; k < i; ++k) term *= y0;
    acc += term;
  }
  return acc;
}

/// Binomial coefficients of weight * (p x + q y)^d: a_i = weight p^(d-i) q^i.
template <Scalar S>
BinaryForm<S> power_form(const LinearFormPower<S>& t, int degree) {
  Vec<S> a(degree + 1);
  std::vector<S> ppow(degree + 1), qpow(degree + 1);
  ppow[0] = qpow[0] = from_integer<S>(1);
  for (int k = 1; k <= degree; ++k) {
    ppow[k] = ppow[k - 1] * t.x_coef;
    qpow[k] = qpow[k - 1] * t.y_coef;
  }
  for (int i = 0; i <= degree; ++i) a[i] = t.weight * ppow[degree - i] * qpow[i];
  return BinaryForm<S>(std::move(a));
}

template <Scalar S>
BinaryForm<S> expand(const Decomposition<S>& dec) {
  BinaryForm<S> out(dec.degree);
  for (const auto& t : dec.terms) out += power_form(t, dec.degree);
  return out;
}

/// f(p1 X + q1 Y, p2 X + q2 Y) as a form in (X, Y).
template <Scalar S>
BinaryForm<S> substitute(const BinaryForm<S>& f, const S& p1, const S& q1, const S& p2, const S& q2) {
  const int d = f.degree();
  // Expand with monomial coefficients, then renormalize.
  std::vector<S> out(d + 1, from_integer<S>(0));
  for (int i = 0; i <= d; ++i) {
    const S m = f.monomial_coeff(i);
    if (is_zero(m)) continue;
    // (p1 X + q1 Y)^(d-i) (p2 X + q2 Y)^i, monomial coefficient of X^(d-k) Y^k.
    std::vector<S> poly{from_integer<S>(1)};
    auto mul_linear = [&](const S& px, const S& qy, int times) {
      for (int t = 0; t < times; ++t) {
        std::vector<S> next(poly.size() + 1, from_integer<S>(0));
        for (std::size_t k = 0; k < poly.size(); ++k) {
          next[k] += poly[k] * px;
          next[k + 1] += poly[k] * qy;
        }
        poly = std::move(next);
      }
    };
    mul_linear(p1, q1, d - i);
    mul_linear(p2, q2, i);
    for (int k = 0; k <= d; ++k) out[k] += m * poly[k];
  }
  return from_monomial<S>(d, out);
}

/// Rescales finite terms with rational beta = n/m to (w/m^d)(m x + n y)^d for display; the
/// float backend is returned unchanged.
template <Scalar S>
Decomposition<S> clear_denominators(Decomposition<S> dec) {
  if constexpr (is_exact_v<S>) {
    for (auto& t : dec.terms) {
      if (t.is_y_power() || !t.y_coef.is_real() || !t.x_coef.is_real()) continue;
      const mpq_class beta = t.y_coef.real() / t.x_coef.real();
      const mpz_class m = beta.get_den();
      if (m == 1) continue;
      mpq_class scale = t.x_coef.real() / m;
      mpq_class factor = 1;
      for (int k = 0; k < dec.degree; ++k) factor *= scale;
      t.weight *= S(factor);
      t.x_coef = S(mpq_class(m));
      t.y_coef = S(mpq_class(beta.get_num()));
    }
  }
  return dec;
}

/// prod over terms of (p dy - q dx); the operator annihilating every term of `dec`.
template <Scalar S>
DiffOperator<S> annihilating_operator(const Decomposition<S>& dec) {
  auto g = DiffOperator<S>::identity();
  for (const auto& t : dec.terms) g = g * DiffOperator<S>::annihilator_of(t.x_coef, t.y_coef);
  return g;
}

}  // namespace waring
