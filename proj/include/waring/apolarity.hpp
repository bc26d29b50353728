#pragma once

// Apolar ideal of a binary form and the rank it determines.
//
// (f^perp)_e is the kernel of the catalecticant [a_{i+j}], i = 0..d-e, j = 0..e. A degree-e
// operator g = sum_j b_j dx^(e-j) dy^j is squarefree when it splits into e pairwise
// non-proportional linear factors; the least e with a squarefree g in (f^perp)_e is the rank.

#include <algorithm>
#include <optional>
#include <vector>

#include "waring/linalg.hpp"

namespace waring {

template <Scalar S>
struct AnnihilatorBasis {
  int degree = 0;  // e
  std::vector<DiffOperator<S>> basis;

  int dimension() const { return static_cast<int>(basis.size()); }
};

/// Basis of (f^perp)_e for 1 <= e <= d.
template <Scalar S>
AnnihilatorBasis<S> annihilator_space(const BinaryForm<S>& f, int e, const Tolerances& tol = {}) {
  const int d = f.degree();
  if (e < 1 || e > d) throw DegreeError("annihilator degree must lie in 1..d");
  AnnihilatorBasis<S> out;
  out.degree = e;
  for (auto& v : kernel(catalecticant(f, d - e + 1, e + 1), tol)) out.basis.emplace_back(std::move(v));
  return out;
}

/// g splits into pairwise distinct linear factors (at most one of them dx).
template <Scalar S>
bool squarefree_binary(const DiffOperator<S>& g, const Tolerances& tol = {}) {
  if (g.is_zero()) throw std::invalid_argument("squarefree_binary: zero operator");
  const int e = g.degree();
  // Dehomogenize at dy = t dx: h(t) = sum_j b_j t^j. Missing degree is a factor dx.
  int top = e;
  double gmax = 0.0;
  for (int j = 0; j <= e; ++j) gmax = std::max(gmax, magnitude(g.coeff(j)));
  while (top >= 0 && near_zero(g.coeff(top), tol.rank * gmax)) --top;
  if (e - top > 1) return false;
  if (top <= 1) return true;
  Vec<S> lower(top);
  for (int j = 0; j < top; ++j) lower[j] = g.coeff(j) / g.coeff(top);
  return is_squarefree(MonicPoly<S>(std::move(lower)), tol);
}

struct OracleRank {
  int rank = 0;
  Certainty certainty = Certainty::Exact;
  double failure_bound = 0.0;
};

/// Least e with a squarefree operator in (f^perp)_e. Members are sampled in the chart
/// basis[0] + sum_m t_m basis[m]; the discriminant has degree 2e - 2 in t.
template <Scalar S>
OracleRank oracle_rank(const BinaryForm<S>& f, const SearchOptions& opts = {}, const Tolerances& tol = {}) {
  if (f.is_zero()) throw ZeroFormError();
  const int d = f.degree();
  OracleRank out;
  out.certainty = is_exact_v<S> ? Certainty::Exact : Certainty::Numerical;
  if (d == 0) {
    out.rank = 1;
    return out;
  }
  for (int e = 1; e <= d; ++e) {
    const auto space = annihilator_space(f, e, tol);
    if (space.basis.empty()) continue;
    const int p = space.dimension() - 1;
    auto member = [&](const std::vector<long>& t) {
      Vec<S> b = space.basis[0].coeffs();
      for (int m = 0; m < p; ++m) b += from_integer<S>(t[m]) * space.basis[m + 1].coeffs();
      return DiffOperator<S>(std::move(b));
    };
    auto accept = [&](const std::vector<long>& t) {
      const auto g = member(t);
      return !g.is_zero() && squarefree_binary(g, tol);
    };
    SearchOptions search = opts;
    search.seed = mix_seed(opts.seed, 0x0a00u + static_cast<unsigned>(e));
    const auto found = search_family(p, std::max(0, 2 * e - 2), accept, search);
    if (found.parameters) {
      out.rank = e;
      return out;
    }
    if (found.certainty == Certainty::Probabilistic) {
      out.certainty = Certainty::Probabilistic;
      out.failure_bound = std::max(out.failure_bound, found.failure_bound);
    }
  }
  throw SearchExhausted("no squarefree annihilator up to degree d");
}

/// Some lambda make f = sum lambda_k (x + beta_k y)^d [+ mu y^d], tested through apolarity:
/// prod (beta_k dx - dy) [* dx] annihilates f.
template <Scalar S>
bool apolarity_check(const BinaryForm<S>& f, const std::vector<S>& betas, bool include_y, const Tolerances& tol = {}) {
  for (std::size_t i = 0; i < betas.size(); ++i)
    for (std::size_t j = i + 1; j < betas.size(); ++j)
      if (near_zero(S(betas[i] - betas[j]), tol.root_separation * std::max(1.0, magnitude(betas[i]))))
        throw std::invalid_argument("apolarity_check: repeated beta");
  Decomposition<S> dec{f.degree(), {}, true};
  for (const auto& b : betas) dec.terms.push_back(LinearFormPower<S>::finite(from_integer<S>(1), b));
  if (include_y) dec.terms.push_back(LinearFormPower<S>::y_power(from_integer<S>(1)));
  const auto g = annihilating_operator(dec);
  if (g.degree() > f.degree()) return true;
  const auto image = apply_operator(g, f);
  if constexpr (is_exact_v<S>) {
    return image.is_zero();
  } else {
    const double denom = std::max(1.0, g.norm_l1() * f.norm_inf() * magnitude(falling_factorial<S>(f.degree(), g.degree())));
    return image.norm_inf() <= tol.verify * denom;
  }
}

}  // namespace waring
