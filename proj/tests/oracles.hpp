#pragma once

// Reference computations used only by the tests. Each one is written from the textbook
// definition and shares no code path with the library routine it checks.

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "waring/form.hpp"

namespace oracle {

using waring::GaussRational;
using Q = GaussRational;

/// Sparse polynomial in x, y keyed by (x exponent, y exponent).
struct Poly {
  std::map<std::pair<int, int>, Q> terms;

  static Poly constant(const Q& c) {
    Poly p;
    if (!c.is_zero()) p.terms[{0, 0}] = c;
    return p;
  }
  static Poly linear(const Q& px, const Q& qy) {
    Poly p;
    if (!px.is_zero()) p.terms[{1, 0}] = px;
    if (!qy.is_zero()) p.terms[{0, 1}] = qy;
    return p;
  }

  void add(std::pair<int, int> k, const Q& v) {
    auto& slot = terms[k];
    slot += v;
    if (slot.is_zero()) terms.erase(k);
  }

  friend Poly operator*(const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [ka, va] : a.terms)
      for (const auto& [kb, vb] : b.terms) out.add({ka.first + kb.first, ka.second + kb.second}, va * vb);
    return out;
  }
  friend Poly operator+(Poly a, const Poly& b) {
    for (const auto& [k, v] : b.terms) a.add(k, v);
    return a;
  }

  Poly pow(int e) const {
    Poly out = constant(Q(1));
    for (int i = 0; i < e; ++i) out = out * *this;
    return out;
  }

  /// d/dx applied `nx` times and d/dy applied `ny` times.
  Poly differentiate(int nx, int ny) const {
    Poly out;
    for (const auto& [k, v] : terms) {
      if (k.first < nx || k.second < ny) continue;
      Q c = v;
      for (int i = 0; i < nx; ++i) c *= Q(k.first - i);
      for (int i = 0; i < ny; ++i) c *= Q(k.second - i);
      out.add({k.first - nx, k.second - ny}, c);
    }
    return out;
  }

  /// Coefficient of x^(d-i) y^i.
  Q coeff(int d, int i) const {
    auto it = terms.find({d - i, i});
    return it == terms.end() ? Q(0) : it->second;
  }

  bool operator==(const Poly& o) const { return terms == o.terms; }
};

/// Operator sum_j b_j dx^(e-j) dy^j applied to p.
inline Poly apply(const std::vector<Q>& b, const Poly& p) {
  const int e = static_cast<int>(b.size()) - 1;
  Poly out;
  for (int j = 0; j <= e; ++j)
    if (!b[j].is_zero()) out = out + Poly::constant(b[j]) * p.differentiate(e - j, j);
  return out;
}

/// sum_k w_k (p_k x + q_k y)^d.
inline Poly power_sum(const std::vector<std::array<Q, 3>>& terms, int d) {
  Poly out;
  for (const auto& t : terms) out = out + Poly::constant(t[0]) * Poly::linear(t[1], t[2]).pow(d);
  return out;
}

/// Determinant by the Leibniz permutation sum.
inline Q leibniz_det(const std::vector<std::vector<Q>>& m) {
  const int n = static_cast<int>(m.size());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Q total(0);
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    Q prod(inversions % 2 ? -1 : 1);
    for (int i = 0; i < n && !prod.is_zero(); ++i) prod *= m[i][perm[i]];
    total += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

/// Reduced row echelon form by plain Gauss-Jordan elimination; returns the rank.
inline int rref(std::vector<std::vector<Q>>& m) {
  const int rows = static_cast<int>(m.size());
  const int cols = rows ? static_cast<int>(m[0].size()) : 0;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (!m[i][c].is_zero()) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(m[r], m[piv]);
    const Q inv = Q(1) / m[r][c];
    for (auto& v : m[r]) v *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || m[i][c].is_zero()) continue;
      const Q factor = m[i][c];
      for (int k = 0; k < cols; ++k) m[i][k] -= factor * m[r][k];
    }
    ++r;
  }
  return r;
}

/// Rank of A and whether A x = b is consistent, from the augmented matrix.
struct SystemFacts {
  int rank = 0;
  bool consistent = false;
};

inline SystemFacts system_facts(std::vector<std::vector<Q>> a, const std::vector<Q>& b) {
  auto aug = a;
  for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
  SystemFacts out;
  out.rank = rref(a);
  out.consistent = rref(aug) == out.rank;
  return out;
}

/// Random Gaussian rational with numerators in [-range, range] and denominators in [1, den].
inline Q random_q(std::mt19937_64& rng, int range, int den, bool gaussian) {
  std::uniform_int_distribution<int> num(-range, range), dd(1, den);
  const mpq_class re(num(rng), dd(rng));
  const mpq_class im = gaussian ? mpq_class(num(rng), dd(rng)) : mpq_class(0);
  mpq_class r = re, i = im;
  r.canonicalize();
  i.canonicalize();
  return Q(r, i);
}

/// Monomial coefficients of an exact form as a sparse polynomial.
inline Poly to_poly(const waring::BinaryForm<Q>& f) {
  Poly p;
  const int d = f.degree();
  for (int i = 0; i <= d; ++i) p.add({d - i, i}, f.monomial_coeff(i));
  return p;
}

inline bool equals(const waring::BinaryForm<Q>& f, const Poly& p) { return to_poly(f) == p; }

/// Terms as sorted "weight@beta" strings, with each term rescaled to (x + beta y)^d or y^d.
inline std::vector<std::string> term_multiset(const waring::Decomposition<Q>& dec) {
  std::vector<std::string> out;
  for (const auto& t : dec.terms) {
    Q w = t.weight;
    if (t.x_coef.is_zero()) {
      for (int k = 0; k < dec.degree; ++k) w *= t.y_coef;
      out.push_back(waring::to_string(w) + "@inf");
    } else {
      for (int k = 0; k < dec.degree; ++k) w *= t.x_coef;
      out.push_back(waring::to_string(w) + "@" + waring::to_string(Q(t.y_coef / t.x_coef)));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace oracle
