#pragma once

// Waring rank and minimal decompositions f = sum_k lambda_k (x + beta_k y)^d [+ mu y^d].
//
// The F-rank FR(f) is the least r for which the Hankel recurrence system has a solution c whose
// polynomial T(t) = t^r + c_{r-1} t^{r-1} + ... + c_0 is squarefree; the roots of T are the
// beta_k. With s = FR(df/dx): WR(f) = FR(f) when the two agree, otherwise WR(f) = s + 1 and a
// minimal decomposition is obtained by integrating one of df/dx.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

#include "waring/linalg.hpp"

namespace waring {

struct WaringOptions {
  SearchOptions search;
  Tolerances tol;
};

template <Scalar S>
struct FRankCertificate {
  int r = 0;
  Vec<S> c;
  MonicPoly<S> t{Vec<S>()};
  AffineSolutionSet<S> solutions;
  Certainty certainty = Certainty::Exact;
  double failure_bound = 0.0;
};

template <Scalar S>
struct FRankResult {
  int degree = 0;
  /// Empty when FR(f) > d ("AboveD"); then FR(f) = d + 1.
  std::optional<FRankCertificate<S>> certificate;
  Certainty certainty = Certainty::Exact;
  double failure_bound = 0.0;

  bool above_degree() const { return !certificate.has_value(); }
  int value() const { return certificate ? certificate->r : degree + 1; }
};

enum class Branch { Finite, YTerm, DegenerateMonomial };

inline const char* to_string(Branch b) {
  switch (b) {
    case Branch::Finite: return "finite";
    case Branch::YTerm: return "y-term";
    case Branch::DegenerateMonomial: return "degenerate-monomial";
  }
  return "unknown";
}

template <Scalar S>
struct RankReport {
  int degree = 0;
  /// Empty means FR(f) exceeds the degree.
  std::optional<int> f_rank;
  int fx_rank = 0;
  int waring_rank = 0;
  Branch branch = Branch::Finite;
  std::optional<FRankCertificate<S>> certificate;     // for f, when f_rank is finite
  std::optional<FRankCertificate<S>> fx_certificate;  // for df/dx, when it has one
  Certainty certainty = Certainty::Exact;

  /// FR(f) with the AboveD sentinel read as d + 1.
  int f_rank_value() const { return f_rank.value_or(degree + 1); }
};

/// A decomposition in the input backend when it is representable there, and always in floats.
template <Scalar S>
struct Decomposed {
  std::optional<Decomposition<S>> native;
  Decomposition<Complex> numeric;

  bool is_native() const { return native.has_value(); }
};

template <Scalar S>
struct DecompositionResult : Decomposed<S> {
  RankReport<S> report;
};

struct VerificationReport {
  /// ||coeffs(expand(dec)) - coeffs(f)||_inf
  double max_residual = 0.0;
  /// max_residual / ||coeffs(f)||_inf
  double relative_residual = 0.0;
  /// ||g o f||_inf / (||g||_1 ||f||_inf d!/(d-e)!) for g the product of the term annihilators.
  double apolarity_residual = 0.0;
  bool length_ok = false;
  bool weights_nonzero = false;
  /// Dropping any one factor of the annihilator leaves a nonzero image, so every term is needed.
  bool terms_present = false;

  bool passed(double tol) const {
    return relative_residual <= tol && apolarity_residual <= tol && length_ok && weights_nonzero && terms_present;
  }
};

namespace detail {

template <Scalar S>
Certainty base_certainty() {
  return is_exact_v<S> ? Certainty::Exact : Certainty::Numerical;
}

template <Scalar S>
Certainty combine(Certainty a, Certainty b) {
  if (a == Certainty::Probabilistic || b == Certainty::Probabilistic) return Certainty::Probabilistic;
  if (a == Certainty::Numerical || b == Certainty::Numerical) return Certainty::Numerical;
  return Certainty::Exact;
}

/// f = a_0 (x + beta y)^d with beta = a_1 / a_0.
template <Scalar S>
std::optional<S> power_ratio(const BinaryForm<S>& f, const Tolerances& tol) {
  const int d = f.degree();
  if (is_zero(f.coeff(0))) return std::nullopt;
  const S beta = f.coeff(1) / f.coeff(0);
  S expected = f.coeff(0);
  const double scale = f.norm_inf();
  for (int i = 1; i <= d; ++i) {
    expected *= beta;
    if (!near_zero(S(expected - f.coeff(i)), tol.consistency * scale)) return std::nullopt;
  }
  return beta;
}

template <Scalar S>
FRankCertificate<S> power_certificate(const S& beta) {
  Vec<S> c(1);
  c[0] = -beta;
  AffineSolutionSet<S> sol{c, {}};
  return {1, c, MonicPoly<S>(c), sol, base_certainty<S>(), 0.0};
}

inline std::uint64_t stream_id(int degree, int r) {
  return (static_cast<std::uint64_t>(degree) << 16) | static_cast<std::uint64_t>(r);
}

}  // namespace detail

/// Smallest r <= d with a squarefree certificate, or AboveD.
template <Scalar S>
FRankResult<S> f_rank(const BinaryForm<S>& f, const WaringOptions& opts = {}) {
  if (f.is_zero()) throw ZeroFormError();
  const int d = f.degree();
  if (d < 1) throw DegreeError("F-rank needs degree >= 1");
  FRankResult<S> out;
  out.degree = d;
  out.certainty = detail::base_certainty<S>();
  for (int r = 1; r <= d; ++r) {
    auto sol = solve_affine(build_hankel(f, r), opts.tol);
    if (!sol) continue;
    SearchOptions search = opts.search;
    search.seed = mix_seed(opts.search.seed, detail::stream_id(d, r));
    auto found = find_squarefree_member(*sol, search, opts.tol);
    if (found.found()) {
      FRankCertificate<S> cert;
      cert.r = r;
      cert.t = *found.member;
      cert.c = cert.t.lower();
      cert.solutions = std::move(*sol);
      cert.certainty = out.certainty;
      cert.failure_bound = out.failure_bound;
      out.certificate = std::move(cert);
      return out;
    }
    if (found.certainty == Certainty::Probabilistic) {
      out.certainty = Certainty::Probabilistic;
      out.failure_bound = std::max(out.failure_bound, found.failure_bound);
    }
  }
  return out;
}

template <Scalar S>
RankReport<S> waring_rank(const BinaryForm<S>& f, const WaringOptions& opts = {}) {
  if (f.is_zero()) throw ZeroFormError();
  const int d = f.degree();
  RankReport<S> rep;
  rep.degree = d;
  rep.certainty = detail::base_certainty<S>();

  if (d == 0) {
    rep.f_rank = 1;
    rep.fx_rank = 0;
    rep.waring_rank = 1;
    rep.branch = Branch::DegenerateMonomial;
    return rep;
  }
  bool fx_zero = true;
  for (int i = 0; i < d; ++i) fx_zero = fx_zero && is_zero(f.coeff(i));
  if (fx_zero) {
    // f = a_d y^d
    rep.f_rank.reset();
    rep.fx_rank = 0;
    rep.waring_rank = 1;
    rep.branch = Branch::DegenerateMonomial;
    return rep;
  }
  if (auto beta = detail::power_ratio(f, opts.tol)) {
    rep.f_rank = 1;
    rep.fx_rank = 1;
    rep.waring_rank = 1;
    rep.branch = Branch::Finite;
    rep.certificate = detail::power_certificate(*beta);
    rep.fx_certificate = rep.certificate;
    return rep;
  }

  auto fr = f_rank(f, opts);
  auto fxr = f_rank(derivative_x(f), opts);
  rep.certainty = detail::combine<S>(fr.certainty, fxr.certainty);
  if (!fr.above_degree()) rep.f_rank = fr.value();
  rep.fx_rank = fxr.value();
  rep.certificate = fr.certificate;
  rep.fx_certificate = fxr.certificate;

  if (rep.f_rank && *rep.f_rank < rep.fx_rank)
    throw NumericFailure("F-rank of f below F-rank of df/dx; tolerances too loose for this input");
  if (rep.f_rank && *rep.f_rank == rep.fx_rank) {
    rep.waring_rank = *rep.f_rank;
    rep.branch = Branch::Finite;
  } else {
    rep.waring_rank = rep.fx_rank + 1;
    rep.branch = (rep.f_rank && *rep.f_rank == rep.waring_rank) ? Branch::Finite : Branch::YTerm;
  }
  return rep;
}

/// Minimal F-decomposition from a certificate: betas are the roots of T, weights solve the
/// Vandermonde system on a_0..a_{r-1}.
template <Scalar S>
Decomposed<S> decomposition_from_certificate(const BinaryForm<S>& f, const FRankCertificate<S>& cert,
                                             const Tolerances& tol = {}) {
  const int d = f.degree();
  const int r = cert.r;
  const auto roots = poly_roots(cert.t, tol);
  Decomposed<S> out;

  // Compare term sizes |lambda| max(1, |beta|)^d, not raw weights.
  auto check_weights = [&](const auto& lambda, const auto& betas) {
    std::vector<double> size(r);
    double scale = 0.0;
    for (int k = 0; k < r; ++k) {
      size[k] = magnitude(lambda[k]) * std::pow(std::max(1.0, magnitude(betas[k])), d);
      scale = std::max(scale, size[k]);
    }
    for (int k = 0; k < r; ++k)
      if (is_zero(lambda[k]) || size[k] <= tol.consistency * scale)
        throw NumericFailure("vanishing weight in a minimal F-decomposition");
  };

  if (roots.all_exact()) {
    const Vec<S> lambda = vandermonde_solve(roots.roots, Vec<S>(f.coeffs().head(r)), tol);
    check_weights(lambda, roots.roots);
    Decomposition<S> dec{d, {}, true};
    for (int k = 0; k < r; ++k) dec.terms.push_back(LinearFormPower<S>::finite(lambda[k], roots.roots[k]));
    out.numeric = convert<Complex>(dec);
    if constexpr (is_exact_v<S>) {
      out.native = std::move(dec);
    } else {
      out.native = out.numeric;
    }
    return out;
  }
  const auto betas = roots.as_complex();
  const auto fc = convert<Complex>(f);
  const Vec<Complex> lambda = vandermonde_solve(betas, Vec<Complex>(fc.coeffs().head(r)), tol);
  check_weights(lambda, betas);
  Decomposition<Complex> dec{d, {}, true};
  for (int k = 0; k < r; ++k) dec.terms.push_back(LinearFormPower<Complex>::finite(lambda[k], betas[k]));
  out.numeric = std::move(dec);
  return out;
}

namespace detail {

template <class T>
T pow_int(const T& base, int e) {
  T out = T(1);
  for (int k = 0; k < e; ++k) out *= base;
  return out;
}

/// f = (1/d) sum mu_k (x + gamma_k y)^d + mu_{s+1} y^d from an F-decomposition of df/dx.
template <Scalar S, Scalar T>
Decomposition<T> integrate_decomposition(const BinaryForm<S>& f, const Decomposition<T>& fx_dec,
                                         const Tolerances& tol) {
  const int d = f.degree();
  const T inv_d = T(1) / from_integer<T>(d);
  Decomposition<T> out{d, {}, true};
  T mu_y = scalar_cast<T>(f.coeff(d));
  for (const auto& t : fx_dec.terms) {
    const T gamma = t.y_coef / t.x_coef;
    const T mu = t.weight * pow_int(t.x_coef, d - 1);
    out.terms.push_back(LinearFormPower<T>::finite(inv_d * mu, gamma));
    mu_y -= inv_d * mu * pow_int(gamma, d);
  }
  if (!near_zero(mu_y, tol.consistency * std::max(1.0, f.norm_inf())))
    out.terms.push_back(LinearFormPower<T>::y_power(mu_y));
  return out;
}

}  // namespace detail

template <Scalar S>
Decomposed<S> integrate_fx_decomposition(const BinaryForm<S>& f, const Decomposed<S>& fx_dec,
                                         const Tolerances& tol = {}) {
  Decomposed<S> out;
  out.numeric = detail::integrate_decomposition(f, fx_dec.numeric, tol);
  if (fx_dec.native) {
    if constexpr (is_exact_v<S>) {
      out.native = detail::integrate_decomposition(f, *fx_dec.native, tol);
      out.numeric = convert<Complex>(*out.native);
    } else {
      out.native = out.numeric;
    }
  }
  return out;
}

namespace detail {

template <Scalar S>
Decomposed<S> degenerate_decomposition(const BinaryForm<S>& f) {
  const int d = f.degree();
  Decomposition<S> dec{d, {}, true};
  if (d == 0) dec.terms.push_back(LinearFormPower<S>::finite(f.coeff(0), from_integer<S>(0)));
  else dec.terms.push_back(LinearFormPower<S>::y_power(f.coeff(d)));
  Decomposed<S> out;
  out.numeric = convert<Complex>(dec);
  out.native = std::move(dec);
  return out;
}

}  // namespace detail

/// Minimal decomposition following the branch chosen by waring_rank.
template <Scalar S>
DecompositionResult<S> decompose(const BinaryForm<S>& f, const WaringOptions& opts = {}) {
  DecompositionResult<S> out;
  out.report = waring_rank(f, opts);
  const auto& rep = out.report;
  Decomposed<S> dec;
  switch (rep.branch) {
    case Branch::DegenerateMonomial:
      dec = detail::degenerate_decomposition(f);
      break;
    case Branch::Finite:
      dec = decomposition_from_certificate(f, *rep.certificate, opts.tol);
      break;
    case Branch::YTerm: {
      if (!rep.fx_certificate) throw NumericFailure("y-term branch without an F-decomposition of df/dx");
      const auto fx = derivative_x(f);
      dec = integrate_fx_decomposition(f, decomposition_from_certificate(fx, *rep.fx_certificate, opts.tol), opts.tol);
      if (static_cast<int>(dec.numeric.size()) != rep.waring_rank)
        throw NumericFailure("integrated decomposition is shorter than the Waring rank");
      break;
    }
  }
  static_cast<Decomposed<S>&>(out) = std::move(dec);
  return out;
}

/// Orders terms by (is y-term, Re beta, Im beta) for multiset comparison.
inline Decomposition<Complex> sorted_terms(Decomposition<Complex> dec) {
  auto key = [](const LinearFormPower<Complex>& t) {
    if (t.is_y_power()) return std::tuple(1, 0.0, 0.0);
    const Complex beta = t.y_coef / t.x_coef;
    return std::tuple(0, beta.real(), beta.imag());
  };
  std::sort(dec.terms.begin(), dec.terms.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
  return dec;
}

/// Same multiset of (weight, beta, y-term) up to a relative tolerance.
inline bool same_decomposition(const Decomposition<Complex>& a, const Decomposition<Complex>& b, double tol) {
  if (a.degree != b.degree || a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const auto& ta : a.terms) {
    bool matched = false;
    for (std::size_t j = 0; j < b.size() && !matched; ++j) {
      if (used[j]) continue;
      const auto& tb = b.terms[j];
      if (ta.is_y_power() != tb.is_y_power()) continue;
      // Compare weight * (x + beta y)^d through the normalized pair (weight p^d, q/p).
      Complex wa = ta.weight, wb = tb.weight, ba = 0.0, bb = 0.0;
      if (!ta.is_y_power()) {
        wa *= std::pow(ta.x_coef, a.degree);
        wb *= std::pow(tb.x_coef, b.degree);
        ba = ta.y_coef / ta.x_coef;
        bb = tb.y_coef / tb.x_coef;
      } else {
        wa *= std::pow(ta.y_coef, a.degree);
        wb *= std::pow(tb.y_coef, b.degree);
      }
      const double ws = std::max({1.0, std::abs(wa), std::abs(wb)});
      const double bs = std::max({1.0, std::abs(ba), std::abs(bb)});
      if (std::abs(wa - wb) <= tol * ws && std::abs(ba - bb) <= tol * bs) {
        used[j] = true;
        matched = true;
      }
    }
    if (!matched) return false;
  }
  return true;
}

/// Up to `count` pairwise-distinct minimal decompositions. Members of the certificate family
/// are visited in order of increasing parameter size, then at seeded random small points; when
/// WR(f) = FR(df/dx) + 1 the integrated decompositions of df/dx are included as well.
template <Scalar S>
std::vector<Decomposed<S>> enumerate_decompositions(const BinaryForm<S>& f, int count, const WaringOptions& opts = {},
                                                    double distinct_tol = 1e-8) {
  std::vector<Decomposed<S>> out;
  if (count <= 0) return out;
  const auto rep = waring_rank(f, opts);

  auto add = [&](Decomposed<S> cand) {
    for (const auto& have : out)
      if (same_decomposition(have.numeric, cand.numeric, distinct_tol)) return;
    out.push_back(std::move(cand));
  };

  auto walk_family = [&](const BinaryForm<S>& g, const FRankCertificate<S>& cert, int limit, auto&& emit) {
    const auto& set = cert.solutions;
    const int p = set.parameter_count();
    const int attempts = std::max(64, 16 * count);
    int tried = 0;
    auto visit = [&](const std::vector<long>& params) {
      MonicPoly<S> t(set.member(std::span<const long>(params)));
      if (!is_squarefree(t, opts.tol)) return;
      FRankCertificate<S> member = cert;
      member.t = t;
      member.c = t.lower();
      try {
        emit(decomposition_from_certificate(g, member, opts.tol));
      } catch (const NumericFailure&) {
        // Ill-conditioned member; others remain.
      }
    };
    if (p == 0) {
      visit({});
      return;
    }
    for (const auto& pt : small_parameter_points(p, 3)) {
      if (static_cast<int>(out.size()) >= limit || ++tried > attempts) return;
      visit(pt);
    }
    std::mt19937_64 rng(mix_seed(opts.search.seed, 0xe7u));
    std::vector<long> params(p);
    while (static_cast<int>(out.size()) < limit && ++tried <= attempts) {
      for (auto& v : params) v = draw_integer(rng, 10);
      visit(params);
    }
  };

  if (rep.branch == Branch::DegenerateMonomial) {
    add(detail::degenerate_decomposition(f));
    return out;
  }
  const bool with_y = rep.waring_rank == rep.fx_rank + 1 && rep.fx_certificate.has_value();
  // Hold back part of the budget so y-term alternatives get a turn.
  const int reserve = with_y && rep.branch == Branch::Finite ? std::max(1, count / 2) : 0;
  if (rep.branch == Branch::Finite) walk_family(f, *rep.certificate, count - reserve, add);
  if (with_y && static_cast<int>(out.size()) < count) {
    const auto fx = derivative_x(f);
    walk_family(fx, *rep.fx_certificate, count, [&](Decomposed<S> fx_dec) {
      auto cand = integrate_fx_decomposition(f, fx_dec, opts.tol);
      if (static_cast<int>(cand.numeric.size()) == rep.waring_rank) add(std::move(cand));
    });
  }
  if (reserve > 0 && static_cast<int>(out.size()) < count) walk_family(f, *rep.certificate, count, add);
  if (out.size() > static_cast<std::size_t>(count)) out.resize(count);
  return out;
}

/// Residuals of a candidate decomposition. `expected_rank` defaults to waring_rank(f).
template <Scalar S, Scalar T>
VerificationReport verify(const BinaryForm<S>& f, const Decomposition<T>& dec, std::optional<int> expected_rank = {},
                          const WaringOptions& opts = {}) {
  if (f.degree() != dec.degree) throw DegreeError("decomposition degree differs from the form degree");
  static_assert(is_exact_v<S> || !is_exact_v<T>, "verify a floating decomposition against a float form");
  const BinaryForm<T> ft = convert<T>(f);
  const int d = f.degree();
  VerificationReport rep;

  const auto diff = expand(dec) - ft;
  rep.max_residual = diff.norm_inf();
  const double fnorm = ft.norm_inf();
  rep.relative_residual = fnorm > 0.0 ? rep.max_residual / fnorm : rep.max_residual;

  const auto g = annihilating_operator(dec);
  if (g.degree() <= d) {
    const auto image = apply_operator(g, ft);
    const double denom = g.norm_l1() * fnorm * magnitude(falling_factorial<T>(d, g.degree()));
    rep.apolarity_residual = denom > 0.0 ? image.norm_inf() / denom : image.norm_inf();
  }

  rep.terms_present = true;
  for (std::size_t i = 0; i < dec.size() && rep.terms_present; ++i) {
    auto g_i = DiffOperator<T>::identity();
    for (std::size_t j = 0; j < dec.size(); ++j)
      if (j != i) g_i = g_i * DiffOperator<T>::annihilator_of(dec.terms[j].x_coef, dec.terms[j].y_coef);
    if (g_i.degree() > d) continue;
    const auto image = apply_operator(g_i, ft);
    const double denom = g_i.norm_l1() * fnorm * magnitude(falling_factorial<T>(d, g_i.degree()));
    if constexpr (is_exact_v<T>) rep.terms_present = !image.is_zero();
    else rep.terms_present = image.norm_inf() > opts.tol.verify * denom;
  }

  rep.weights_nonzero = std::none_of(dec.terms.begin(), dec.terms.end(), [](const auto& t) {
    return is_zero(t.weight) || (is_zero(t.x_coef) && is_zero(t.y_coef));
  });
  const int rank = expected_rank ? *expected_rank : waring_rank(f, opts).waring_rank;
  rep.length_ok = static_cast<int>(dec.size()) == rank;
  return rep;
}

/// Length <= d decomposition over the d-th roots of unity after normalizing a_0 and a_d.
template <Scalar S>
Decomposition<Complex> roots_of_unity_decomposition(const BinaryForm<S>& f, double drop_tol = 1e-12) {
  if (f.is_zero()) throw ZeroFormError();
  const int d = f.degree();
  if (d < 1) throw DegreeError("roots-of-unity decomposition needs degree >= 1");

  // Shear so that a_0 and a_d vanish together or not at all. Terms (P, Q) in the sheared
  // coordinates map back through `unshear`.
  BinaryForm<S> h = f;
  Complex shear_x = 0.0;  // X = x - alpha y
  Complex shear_y = 0.0;  // Y = y - alpha x
  const bool a0 = !is_zero(f.coeff(0));
  const bool ad = !is_zero(f.coeff(d));
  if (a0 != ad) {
    const S one = from_integer<S>(1), zero = from_integer<S>(0);
    for (long alpha = 0;; ++alpha) {
      const S al = from_integer<S>(alpha);
      if (a0) {
        if (is_zero(evaluate(f, al, one))) continue;
        h = substitute(f, one, al, zero, one);  // f(X + alpha Y, Y)
        shear_x = Complex(static_cast<double>(alpha), 0.0);
      } else {
        if (is_zero(evaluate(f, one, al))) continue;
        h = substitute(f, one, zero, al, one);  // f(X, alpha X + Y)
        shear_y = Complex(static_cast<double>(alpha), 0.0);
      }
      break;
    }
  }

  const auto hc = convert<Complex>(h);
  Complex s = 1.0, t = 1.0;
  if (!is_zero(h.coeff(0))) {
    s = std::pow(hc.coeff(0), 1.0 / d);
    t = std::pow(hc.coeff(d), 1.0 / d);
  }
  std::vector<Complex> normalized(d + 1);
  for (int i = 0; i <= d; ++i) normalized[i] = hc.coeff(i) / (std::pow(s, d - i) * std::pow(t, i));

  const double pi = std::numbers::pi;
  double scale = 0.0;
  for (const auto& v : normalized) scale = std::max(scale, std::abs(v));

  Decomposition<Complex> out{d, {}, false};
  for (int k = 1; k <= d; ++k) {
    Complex lambda = 0.0;
    for (int i = 0; i < d; ++i) lambda += normalized[i] * std::polar(1.0, -2.0 * pi * k * i / d);
    lambda /= static_cast<double>(d);
    if (std::abs(lambda) <= drop_tol * scale) continue;
    const Complex zeta_k = std::polar(1.0, 2.0 * pi * k / d);
    Complex p = s;
    Complex q = zeta_k * t;
    // Undo the shear.
    if (shear_x != 0.0) q -= shear_x * p;
    if (shear_y != 0.0) p -= shear_y * q;
    out.terms.push_back({lambda, p, q});
  }
  return out;
}

}  // namespace waring
