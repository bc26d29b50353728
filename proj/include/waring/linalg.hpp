#pragma once

// Structured linear algebra behind the rank computation: Hankel systems for the
// recurrence a_i = -(c_0 a_{i-r} + ... + c_{r-1} a_{i-1}), their affine solution sets,
// squarefree tests for T(t) = t^r + c_{r-1} t^{r-1} + ... + c_0, roots and Vandermonde solves.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "waring/form.hpp"

namespace waring {

enum class Certainty {
  Exact,          ///< decided by exact arithmetic
  Probabilistic,  ///< an exhaustive exact check was too large; randomized search only
  Numerical,      ///< decided in floating point with the configured tolerances
};

inline const char* to_string(Certainty c) {
  switch (c) {
    case Certainty::Exact: return "exact";
    case Certainty::Probabilistic: return "probabilistic";
    case Certainty::Numerical: return "numerical";
  }
  return "unknown";
}

/// Rows i = 0..d-r of  sum_j a_{i+j} c_j = -a_{r+i}.
template <Scalar S>
struct HankelSystem {
  Mat<S> matrix;
  Vec<S> rhs;
  int source_degree = 0;
  int order = 0;
};

/// particular + sum_m t_m basis[m].
template <Scalar S>
struct AffineSolutionSet {
  Vec<S> particular;
  std::vector<Vec<S>> basis;

  int parameter_count() const { return static_cast<int>(basis.size()); }

  template <class T>
  Vec<S> member(std::span<const T> params) const {
    Vec<S> out = particular;
    for (std::size_t m = 0; m < basis.size() && m < params.size(); ++m) {
      const S t = S(params[m]);
      if (is_zero(t)) continue;
      for (Eigen::Index i = 0; i < out.size(); ++i) out[i] += t * basis[m][i];
    }
    return out;
  }
};

/// T(t) = t^r + c_{r-1} t^{r-1} + ... + c_0, stored by its lower coefficients c_0..c_{r-1}.
template <Scalar S>
class MonicPoly {
 public:
  explicit MonicPoly(Vec<S> lower) : lower_(std::move(lower)) {}

  static MonicPoly from_roots(const std::vector<S>& roots) {
    std::vector<S> p{from_integer<S>(1)};  // ascending
    for (const auto& r : roots) {
      std::vector<S> next(p.size() + 1, from_integer<S>(0));
      for (std::size_t k = 0; k < p.size(); ++k) {
        next[k + 1] += p[k];
        next[k] -= r * p[k];
      }
      p = std::move(next);
    }
    Vec<S> lower(static_cast<Eigen::Index>(roots.size()));
    for (std::size_t k = 0; k < roots.size(); ++k) lower[k] = p[k];
    return MonicPoly(std::move(lower));
  }

  int degree() const { return static_cast<int>(lower_.size()); }
  const Vec<S>& lower() const { return lower_; }

  /// Ascending coefficients including the leading 1.
  std::vector<S> ascending() const {
    std::vector<S> out(lower_.begin(), lower_.end());
    out.push_back(from_integer<S>(1));
    return out;
  }

  double norm_inf() const {
    double m = 0.0;
    for (const auto& c : lower_) m = std::max(m, magnitude(c));
    return m;
  }

  template <class T>
  T operator()(const T& x) const {
    T acc = T(1);
    for (int k = degree() - 1; k >= 0; --k) acc = acc * x + scalar_cast_to<T>(lower_[k]);
    return acc;
  }

  /// Companion matrix whose characteristic polynomial is T.
  Mat<S> companion() const {
    const int r = degree();
    Mat<S> m = zeros<S>(r, r);
    for (int i = 1; i < r; ++i) m(i, i - 1) = from_integer<S>(1);
    for (int i = 0; i < r; ++i) m(i, r - 1) = -lower_[i];
    return m;
  }

 private:
  template <class T>
  static T scalar_cast_to(const S& v) {
    if constexpr (std::is_same_v<T, S>) return v;
    else return T(to_complex(v));
  }

  Vec<S> lower_;
};

// ---------------------------------------------------------------------------
// Dense univariate helpers (ascending coefficient vectors).

namespace poly {

template <Scalar S>
void trim(std::vector<S>& p) {
  while (!p.empty() && is_zero(p.back())) p.pop_back();
}

template <Scalar S>
std::vector<S> derivative(const std::vector<S>& p) {
  std::vector<S> out;
  for (std::size_t k = 1; k < p.size(); ++k) out.push_back(from_integer<S>(static_cast<long>(k)) * p[k]);
  return out;
}

/// Exact remainder of a by b (b nonzero, trimmed).
inline std::vector<GaussRational> remainder(std::vector<GaussRational> a, const std::vector<GaussRational>& b) {
  trim(a);
  const std::size_t nb = b.size();
  while (a.size() >= nb) {
    const GaussRational q = a.back() / b.back();
    const std::size_t shift = a.size() - nb;
    for (std::size_t k = 0; k < nb; ++k) a[shift + k] -= q * b[k];
    a.pop_back();
    trim(a);
  }
  return a;
}

/// Monic gcd over the Gaussian rationals. Both inputs may not be zero simultaneously.
inline std::vector<GaussRational> gcd(std::vector<GaussRational> a, std::vector<GaussRational> b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    auto r = remainder(a, b);
    a = std::move(b);
    b = std::move(r);
    if (!b.empty()) {
      const GaussRational lead = b.back();
      for (auto& c : b) c /= lead;
    }
  }
  if (!a.empty()) {
    const GaussRational lead = a.back();
    for (auto& c : a) c /= lead;
  }
  return a;
}

}  // namespace poly

// ---------------------------------------------------------------------------

template <Scalar S>
HankelSystem<S> build_hankel(const BinaryForm<S>& f, int r) {
  const int d = f.degree();
  if (r < 1 || r > d) throw DegreeError("Hankel order must satisfy 1 <= r <= d");
  HankelSystem<S> sys{Mat<S>(d - r + 1, r), Vec<S>(d - r + 1), d, r};
  for (int i = 0; i <= d - r; ++i) {
    for (int j = 0; j < r; ++j) sys.matrix(i, j) = f.coeff(i + j);
    sys.rhs[i] = -f.coeff(r + i);
  }
  return sys;
}

/// The (rows x cols) catalecticant [a_{i+j}].
template <Scalar S>
Mat<S> catalecticant(const BinaryForm<S>& f, int rows, int cols) {
  Mat<S> m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = f.coeff(i + j);
  return m;
}

namespace detail {

inline std::optional<AffineSolutionSet<GaussRational>> solve_exact(Mat<GaussRational> a, Vec<GaussRational> b) {
  using Q = GaussRational;
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();
  Mat<Q> m(rows, cols + 1);
  m.leftCols(cols) = a;
  m.col(cols) = b;

  // Fraction-free (Bareiss) forward elimination; columns without a pivot are free.
  std::vector<Eigen::Index> pivots;
  Q prev(1);
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < cols && row < rows; ++col) {
    Eigen::Index p = row;
    while (p < rows && m(p, col).is_zero()) ++p;
    if (p == rows) continue;
    if (p != row) m.row(p).swap(m.row(row));
    const Q piv = m(row, col);
    for (Eigen::Index i = row + 1; i < rows; ++i) {
      const Q lead = m(i, col);
      for (Eigen::Index j = col + 1; j <= cols; ++j) m(i, j) = (piv * m(i, j) - lead * m(row, j)) / prev;
      m(i, col) = Q(0);
    }
    prev = piv;
    pivots.push_back(col);
    ++row;
  }
  for (Eigen::Index i = row; i < rows; ++i)
    if (!m(i, cols).is_zero()) return std::nullopt;

  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;

  auto back_substitute = [&](Vec<Q> x, bool homogeneous) {
    for (auto k = static_cast<Eigen::Index>(pivots.size()) - 1; k >= 0; --k) {
      const Eigen::Index pc = pivots[k];
      Q acc = homogeneous ? Q(0) : m(k, cols);
      for (Eigen::Index j = pc + 1; j < cols; ++j)
        if (!m(k, j).is_zero() && !x[j].is_zero()) acc -= m(k, j) * x[j];
      x[pc] = acc / m(k, pc);
    }
    return x;
  };

  AffineSolutionSet<Q> out;
  out.particular = back_substitute(zeros<Q>(cols), false);
  for (Eigen::Index f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    Vec<Q> x = zeros<Q>(cols);
    x[f] = Q(1);
    out.basis.push_back(back_substitute(std::move(x), true));
  }
  return out;
}

inline std::optional<AffineSolutionSet<Complex>> solve_float(const Mat<Complex>& a, const Vec<Complex>& b,
                                                             const Tolerances& tol) {
  const Eigen::Index cols = a.cols();
  const double scale_a = a.size() ? a.cwiseAbs().maxCoeff() : 0.0;
  const double scale_b = b.size() ? b.cwiseAbs().maxCoeff() : 0.0;

  Eigen::ColPivHouseholderQR<Mat<Complex>> qr(a);
  const auto& qrm = qr.matrixQR();
  const Eigen::Index diag = std::min(qrm.rows(), qrm.cols());
  Eigen::Index rank = 0;
  const double threshold = tol.rank * scale_a;
  while (rank < diag && std::abs(qrm(rank, rank)) > threshold && scale_a > 0.0) ++rank;

  Vec<Complex> qtb = qr.householderQ().adjoint() * b;
  const auto r11 = qrm.topLeftCorner(rank, rank).template triangularView<Eigen::Upper>();

  Vec<Complex> z = Vec<Complex>::Zero(cols);
  if (rank > 0) z.head(rank) = r11.solve(qtb.head(rank));
  Vec<Complex> x = qr.colsPermutation() * z;

  const double residual = (a * x - b).cwiseAbs().maxCoeff();
  const double xnorm = x.size() ? x.cwiseAbs().maxCoeff() : 0.0;
  const double bound = tol.consistency * std::max({scale_a * xnorm, scale_b, 1e-300});
  if (b.size() && residual > bound) return std::nullopt;

  AffineSolutionSet<Complex> out;
  out.particular = x;
  for (Eigen::Index j = rank; j < cols; ++j) {
    Vec<Complex> w = Vec<Complex>::Zero(cols);
    if (rank > 0) w.head(rank) = -r11.solve(qrm.block(0, j, rank, 1));
    w[j] = 1.0;
    out.basis.push_back(qr.colsPermutation() * w);
  }
  return out;
}

}  // namespace detail

/// Full solution set of A x = b, or nullopt when inconsistent.
template <Scalar S>
std::optional<AffineSolutionSet<S>> solve_affine(const Mat<S>& a, const Vec<S>& b, const Tolerances& tol = {}) {
  if constexpr (is_exact_v<S>) {
    (void)tol;
    return detail::solve_exact(a, b);
  } else {
    return detail::solve_float(a, b, tol);
  }
}

template <Scalar S>
std::optional<AffineSolutionSet<S>> solve_affine(const HankelSystem<S>& sys, const Tolerances& tol = {}) {
  return solve_affine<S>(sys.matrix, sys.rhs, tol);
}

/// Basis of the kernel of A.
template <Scalar S>
std::vector<Vec<S>> kernel(const Mat<S>& a, const Tolerances& tol = {}) {
  auto sol = solve_affine<S>(a, zeros<S>(a.rows()), tol);
  return sol ? sol->basis : std::vector<Vec<S>>{};
}

template <Scalar S>
S determinant(Mat<S> m) {
  if (m.rows() != m.cols()) throw DegreeError("determinant of a non-square matrix");
  const Eigen::Index n = m.rows();
  if (n == 0) return from_integer<S>(1);
  if constexpr (is_exact_v<S>) {
    S prev(1);
    bool negate = false;
    for (Eigen::Index k = 0; k < n - 1; ++k) {
      Eigen::Index p = k;
      while (p < n && m(p, k).is_zero()) ++p;
      if (p == n) return S(0);
      if (p != k) {
        m.row(p).swap(m.row(k));
        negate = !negate;
      }
      for (Eigen::Index i = k + 1; i < n; ++i) {
        for (Eigen::Index j = k + 1; j < n; ++j) m(i, j) = (m(k, k) * m(i, j) - m(i, k) * m(k, j)) / prev;
        m(i, k) = S(0);
      }
      prev = m(k, k);
    }
    return negate ? S(-m(n - 1, n - 1)) : m(n - 1, n - 1);
  } else {
    return m.partialPivLu().determinant();
  }
}

/// Sylvester matrix of p and q (ascending coefficient vectors with nonzero leading terms).
template <Scalar S>
Mat<S> sylvester_matrix(const std::vector<S>& p, const std::vector<S>& q) {
  const int m = static_cast<int>(p.size()) - 1;
  const int n = static_cast<int>(q.size()) - 1;
  Mat<S> s = zeros<S>(m + n, m + n);
  for (int row = 0; row < n; ++row)
    for (int k = 0; k <= m; ++k) s(row, row + k) = p[m - k];
  for (int row = 0; row < m; ++row)
    for (int k = 0; k <= n; ++k) s(n + row, row + k) = q[n - k];
  return s;
}

/// Res(T, T') as the determinant of the Sylvester matrix. Zero iff T has a repeated root.
template <Scalar S>
S resultant_TTprime(const MonicPoly<S>& t) {
  if (t.degree() < 1) throw DegreeError("resultant needs a polynomial of degree >= 1");
  const auto p = t.ascending();
  const auto dp = poly::derivative(p);
  return determinant<S>(sylvester_matrix(p, dp));
}

/// Roots of T from companion-matrix eigenvalues, refined by Newton steps.
template <Scalar S>
std::vector<Complex> numeric_roots(const MonicPoly<S>& t) {
  const int r = t.degree();
  if (r == 0) return {};
  Mat<Complex> comp(r, r);
  const Mat<S> c = t.companion();
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) comp(i, j) = to_complex(c(i, j));
  Eigen::ComplexEigenSolver<Mat<Complex>> es(comp, false);
  if (es.info() != Eigen::Success) throw NumericFailure("companion eigenvalue iteration did not converge");
  std::vector<Complex> roots(es.eigenvalues().begin(), es.eigenvalues().end());

  std::vector<Complex> asc;
  for (const auto& v : t.ascending()) asc.push_back(to_complex(v));
  auto eval = [&](Complex x, Complex& deriv) {
    Complex v = asc.back();
    deriv = 0.0;
    for (int k = static_cast<int>(asc.size()) - 2; k >= 0; --k) {
      deriv = deriv * x + v;
      v = v * x + asc[k];
    }
    return v;
  };
  for (auto& x : roots) {
    Complex dv;
    Complex v = eval(x, dv);
    for (int it = 0; it < 8 && std::abs(dv) > 0.0; ++it) {
      const Complex cand = x - v / dv;
      Complex dcand;
      const Complex vcand = eval(cand, dcand);
      if (!(std::abs(vcand) < std::abs(v))) break;
      x = cand;
      v = vcand;
      dv = dcand;
    }
  }
  return roots;
}

/// Smallest pairwise distance relative to max(1, largest root magnitude).
inline double relative_separation(const std::vector<Complex>& roots) {
  double scale = 1.0;
  for (const auto& r : roots) scale = std::max(scale, std::abs(r));
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = i + 1; j < roots.size(); ++j) best = std::min(best, std::abs(roots[i] - roots[j]));
  return best / scale;
}

/// Squarefree test for T: exact gcd(T, T') on the exact backend, root separation on floats.
template <Scalar S>
bool is_squarefree(const MonicPoly<S>& t, const Tolerances& tol = {}) {
  if (t.degree() <= 1) return true;
  if constexpr (is_exact_v<S>) {
    (void)tol;
    const auto p = t.ascending();
    return poly::gcd(p, poly::derivative(p)).size() == 1;
  } else {
    return relative_separation(numeric_roots(t)) > tol.root_separation;
  }
}

struct SearchOptions {
  std::uint64_t seed = 0;
  /// Random trials after the deterministic ones.
  int budget = 64;
  /// Exhaustive certification is attempted when C(p + D, D) does not exceed this.
  long certify_limit = 100000;
  /// Random parameters are drawn from [-range, range].
  long random_range = 1000000;
};

template <Scalar S>
struct SquarefreeSearch {
  std::optional<MonicPoly<S>> member;
  std::vector<long> parameters;
  Certainty certainty = Certainty::Exact;
  /// Upper bound on the probability that a member exists although none was found.
  double failure_bound = 0.0;

  bool found() const { return member.has_value(); }
};

template <Scalar S>
SquarefreeSearch<S>& finish(SquarefreeSearch<S>& s) {
  if constexpr (!is_exact_v<S>) {
    if (s.certainty == Certainty::Exact) s.certainty = Certainty::Numerical;
  }
  return s;
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Uniform integer in [-range, range] from a 64-bit engine, identical on every platform.
inline long draw_integer(std::mt19937_64& rng, long range) {
  const auto span = static_cast<std::uint64_t>(2 * range + 1);
  return static_cast<long>(rng() % span) - range;
}

/// Integer points of Z^p in shells of increasing l1 norm; within a shell negative entries first.
inline std::vector<std::vector<long>> small_parameter_points(int p, int max_norm) {
  std::vector<std::vector<long>> out;
  std::vector<long> cur(p, 0);
  std::function<void(int, int)> rec = [&](int idx, int remaining) {
    if (idx == p) {
      if (remaining == 0) out.push_back(cur);
      return;
    }
    if (idx == p - 1) {
      for (long v : {-static_cast<long>(remaining), static_cast<long>(remaining)}) {
        cur[idx] = v;
        rec(idx + 1, 0);
        if (remaining == 0) break;
      }
      cur[idx] = 0;
      return;
    }
    for (int mag = remaining; mag >= 0; --mag) {
      for (long v : {-static_cast<long>(mag), static_cast<long>(mag)}) {
        cur[idx] = v;
        rec(idx + 1, remaining - mag);
        if (mag == 0) break;
      }
    }
    cur[idx] = 0;
  };
  for (int s = 0; s <= max_norm; ++s) rec(0, s);
  if (p == 0) out.assign(1, {});
  return out;
}

/// C(n, k) saturating at `cap + 1`.
inline long binomial_capped(long n, long k, long cap) {
  k = std::min(k, n - k);
  long double acc = 1.0L;
  for (long i = 1; i <= k; ++i) {
    acc = acc * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    if (acc > static_cast<long double>(cap)) return cap + 1;
  }
  return static_cast<long>(acc + 0.5L);
}

/// Visits every point of {alpha in N^p : |alpha| <= total}; stops early when `visit` returns true.
inline bool for_each_simplex_point(int p, int total, const std::function<bool(const std::vector<long>&)>& visit) {
  std::vector<long> cur(p, 0);
  std::function<bool(int, int)> rec = [&](int idx, int remaining) -> bool {
    if (idx == p) return visit(cur);
    for (int v = 0; v <= remaining; ++v) {
      cur[idx] = v;
      if (rec(idx + 1, remaining - v)) return true;
    }
    cur[idx] = 0;
    return false;
  };
  return rec(0, total);
}

struct FamilySearch {
  std::optional<std::vector<long>> parameters;
  Certainty certainty = Certainty::Exact;
  double failure_bound = 0.0;
};

/// Searches integer points t in Z^p for one satisfying `accept`, where rejection is the
/// vanishing of a polynomial of total degree <= `total_degree` in t. Order: the origin and
/// +-e_m, then `budget` seeded random points, then (when small enough) every point of the
/// simplex {alpha in N^p : |alpha| <= total_degree}, which is unisolvent for that degree, so
/// exhausting it proves the polynomial is identically zero on the family.
inline FamilySearch search_family(int p, int total_degree, const std::function<bool(const std::vector<long>&)>& accept,
                                  const SearchOptions& opts) {
  FamilySearch out;
  for (const auto& pt : small_parameter_points(p, 1)) {
    if (accept(pt)) {
      out.parameters = pt;
      return out;
    }
  }
  if (p == 0) return out;

  std::mt19937_64 rng(opts.seed);
  std::vector<long> params(p);
  for (int trial = 0; trial < opts.budget; ++trial) {
    for (auto& v : params) v = draw_integer(rng, opts.random_range);
    if (accept(params)) {
      out.parameters = params;
      return out;
    }
  }

  if (binomial_capped(p + total_degree, total_degree, opts.certify_limit) <= opts.certify_limit) {
    for_each_simplex_point(p, total_degree, [&](const std::vector<long>& pt) {
      if (!accept(pt)) return false;
      out.parameters = pt;
      return true;
    });
    return out;
  }
  out.certainty = Certainty::Probabilistic;
  // Each independent draw misses with probability <= D / (2R + 1) when a good member exists.
  out.failure_bound =
      std::pow(static_cast<double>(total_degree) / (2.0 * static_cast<double>(opts.random_range) + 1.0), opts.budget);
  return out;
}

/// Looks for c in the affine set with T squarefree. Res(T, T') restricted to the family has
/// total degree <= 2r - 1 in the parameters, which bounds the exhaustive certification grid.
template <Scalar S>
SquarefreeSearch<S> find_squarefree_member(const AffineSolutionSet<S>& set, const SearchOptions& opts = {},
                                           const Tolerances& tol = {}) {
  SquarefreeSearch<S> out;
  const int r = static_cast<int>(set.particular.size());
  auto accept = [&](const std::vector<long>& params) {
    return is_squarefree(MonicPoly<S>(set.member(std::span<const long>(params))), tol);
  };
  const auto found = search_family(set.parameter_count(), 2 * r - 1, accept, opts);
  if (found.parameters) {
    out.parameters = *found.parameters;
    out.member = MonicPoly<S>(set.member(std::span<const long>(out.parameters)));
  }
  out.certainty = found.certainty;
  out.failure_bound = found.failure_bound;
  return finish(out);
}

/// Roots of a squarefree T. Roots representable in S are in `roots`; on the exact backend,
/// irrational roots are left in `approx`.
template <Scalar S>
struct RootSet {
  std::vector<S> roots;
  std::vector<Complex> approx;

  bool all_exact() const { return approx.empty(); }
  std::vector<Complex> as_complex() const {
    std::vector<Complex> out;
    for (const auto& r : roots) out.push_back(to_complex(r));
    out.insert(out.end(), approx.begin(), approx.end());
    return out;
  }
};

namespace detail {

inline std::vector<mpz_class> small_divisors(mpz_class n, const mpz_class& limit) {
  n = abs(n);
  if (n == 0 || n > limit) return {};
  std::vector<std::pair<mpz_class, int>> factors;
  mpz_class m = n;
  for (mpz_class q = 2; q * q <= m; ++q) {
    int e = 0;
    while (m % q == 0) {
      m /= q;
      ++e;
    }
    if (e) factors.emplace_back(q, e);
  }
  if (m > 1) factors.emplace_back(m, 1);
  std::vector<mpz_class> divs{1};
  for (const auto& [prime, e] : factors) {
    const std::size_t base = divs.size();
    mpz_class pw = 1;
    for (int k = 1; k <= e; ++k) {
      pw *= prime;
      for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pw);
    }
  }
  return divs;
}

/// Rational roots of an exact polynomial with rational coefficients; deflates `asc` in place.
inline std::vector<GaussRational> extract_rational_roots(std::vector<GaussRational>& asc) {
  std::vector<GaussRational> found;
  for (const auto& c : asc)
    if (!c.is_real()) return found;
  // Zero roots.
  while (asc.size() > 1 && asc.front().is_zero()) {
    found.emplace_back(0);
    asc.erase(asc.begin());
  }
  if (asc.size() <= 1) return found;

  mpz_class lcm = 1;
  for (const auto& c : asc) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.real().get_den_mpz_t());
  std::vector<mpz_class> ints;
  for (const auto& c : asc) ints.emplace_back(c.real() * lcm);

  const mpz_class limit("1000000000000");
  const auto num_divs = small_divisors(ints.front(), limit);
  const auto den_divs = small_divisors(ints.back(), limit);
  if (num_divs.empty() || den_divs.empty()) return found;

  auto deflate = [&](const GaussRational& root) {
    // Synthetic division by (t - root).
    std::vector<GaussRational> q(asc.size() - 1);
    GaussRational carry(0);
    for (auto k = static_cast<long>(asc.size()) - 1; k >= 1; --k) {
      carry = asc[k] + carry * root;
      q[k - 1] = carry;
    }
    asc = std::move(q);
  };
  auto is_root = [&](const mpz_class& num, const mpz_class& den) {
    // sum_k A_k num^k den^(n-k) == 0
    const std::size_t n = ints.size() - 1;
    mpz_class acc = 0, np = 1;
    std::vector<mpz_class> dp(n + 1, 1);
    for (std::size_t k = 1; k <= n; ++k) dp[k] = dp[k - 1] * den;
    for (std::size_t k = 0; k <= n; ++k) {
      acc += ints[k] * np * dp[n - k];
      np *= num;
    }
    return acc == 0;
  };
  for (const auto& den : den_divs) {
    for (const auto& num : num_divs) {
      if (gcd(num, den) != 1) continue;
      for (int sign : {1, -1}) {
        const mpz_class sn = sign * num;
        if (asc.size() > 1 && is_root(sn, den)) {
          const GaussRational root(mpq_class(sn, den));
          found.push_back(root);
          deflate(root);
        }
      }
    }
  }
  return found;
}

}  // namespace detail

/// Roots of squarefree T. Each numeric root satisfies |T(beta)| <= 2^-40 max(1, ||c||) r.
template <Scalar S>
RootSet<S> poly_roots(const MonicPoly<S>& t, const Tolerances& tol = {}) {
  const int r = t.degree();
  RootSet<S> out;
  if (r == 0) return out;
  MonicPoly<S> rest = t;
  if constexpr (is_exact_v<S>) {
    auto asc = t.ascending();
    out.roots = detail::extract_rational_roots(asc);
    Vec<S> lower(static_cast<Eigen::Index>(asc.size()) - 1);
    for (Eigen::Index k = 0; k < lower.size(); ++k) lower[k] = asc[k] / asc.back();
    rest = MonicPoly<S>(std::move(lower));
    for (std::size_t i = 0; i < out.roots.size(); ++i)
      for (std::size_t j = i + 1; j < out.roots.size(); ++j)
        if (out.roots[i] == out.roots[j]) throw NumericFailure("repeated root");
  }
  if (rest.degree() > 0) {
    auto numeric = numeric_roots(rest);
    const auto asc = t.ascending();
    for (const auto& x : numeric) {
      // Scale by sum |c_k| |x|^k so that large roots are judged relative to the terms of T.
      double terms = 0.0, xp = 1.0;
      for (const auto& c : asc) {
        terms += magnitude(c) * xp;
        xp *= std::abs(x);
      }
      const double bound = std::ldexp(1.0, -40) * std::max(1.0, terms) * r;
      if (std::abs(t(x)) > bound) throw NumericFailure("root refinement did not reach the residual bound");
    }
    auto all = numeric;
    for (const auto& e : out.roots) all.push_back(to_complex(e));
    if (relative_separation(all) <= tol.root_separation) throw NumericFailure("repeated root");
    if constexpr (is_exact_v<S>) {
      out.approx = std::move(numeric);
    } else {
      out.roots = std::move(numeric);
    }
  }
  return out;
}

/// Solves sum_k lambda_k beta_k^i = a_i, i = 0..r-1, by the Bjorck-Pereyra recurrences.
template <Scalar S>
Vec<S> vandermonde_solve(const std::vector<S>& betas, const Vec<S>& prefix, const Tolerances& tol = {}) {
  const auto n = static_cast<Eigen::Index>(betas.size());
  if (prefix.size() != n) throw DegreeError("Vandermonde right-hand side has the wrong length");
  double scale = 1.0;
  for (const auto& b : betas) scale = std::max(scale, magnitude(b));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (near_zero(S(betas[i] - betas[j]), tol.root_separation * scale))
        throw std::invalid_argument("vandermonde_solve: duplicate nodes");
  Vec<S> x = prefix;
  if (n == 0) return x;
  const Eigen::Index last = n - 1;
  for (Eigen::Index k = 0; k < last; ++k)
    for (Eigen::Index i = last; i > k; --i) x[i] -= betas[k] * x[i - 1];
  for (Eigen::Index k = last - 1; k >= 0; --k) {
    for (Eigen::Index i = k + 1; i <= last; ++i) x[i] /= betas[i] - betas[i - k - 1];
    for (Eigen::Index i = k; i < last; ++i) x[i] -= x[i + 1];
  }
  return x;
}

}  // namespace waring
