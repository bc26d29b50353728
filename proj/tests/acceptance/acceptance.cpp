// Acceptance run: one PASS/FAIL line per criterion. Exits 0 when the failing set equals --expect-fail.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "../oracles.hpp"
#include "waring/apolarity.hpp"
#include "waring/parser.hpp"
#include "waring/waring.hpp"

using namespace waring;
using Q = GaussRational;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

/// A decomposition produced somewhere in the run, kept for the apolarity sweep.
struct Produced {
  std::string origin;
  BinaryForm<Complex> f;
  std::optional<BinaryForm<Q>> exact_form;
  std::optional<Decomposition<Q>> exact;
  Decomposition<Complex> numeric;
};
std::vector<Produced> produced;

void keep(const std::string& origin, const BinaryForm<Q>& f, const Decomposed<Q>& dec) {
  produced.push_back({origin, convert<Complex>(f), f, dec.native, dec.numeric});
}
void keep(const std::string& origin, const BinaryForm<Complex>& f, const Decomposition<Complex>& dec) {
  produced.push_back({origin, f, std::nullopt, std::nullopt, dec});
}

struct Rank3 {
  int f, fx, wr;
};
std::vector<std::pair<std::string, Rank3>> chain;  // forms from the generic and oracle sweeps

void record_chain(const BinaryForm<Q>& f, const RankReport<Q>& r) {
  chain.push_back({format_form(f), {r.f_rank_value(), r.fx_rank, r.waring_rank}});
}

std::set<int> failed;
void report(int n, const std::string& what, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << " C" << n << " " << what << ": " << detail << std::endl;
  if (!ok) failed.insert(n);
}

/// Runs one criterion; an escaping exception counts as a failure.
void criterion(int n, const std::string& what, const std::function<std::pair<bool, std::string>()>& body) {
  try {
    const auto [ok, detail] = body();
    report(n, what, ok, detail);
  } catch (const std::exception& e) {
    report(n, what, false, std::string("exception: ") + e.what());
  }
}

BinaryForm<Q> integer_form(std::mt19937_64& rng, int d, int range) {
  std::uniform_int_distribution<int> u(-range, range);
  std::vector<Q> mono(d + 1);
  for (auto& v : mono) v = Q(u(rng));
  return from_monomial<Q>(d, mono);
}

// Operators b_0 dx^e + b_1 dx^(e-1) dy + ... built and applied without the library.
template <class T>
std::vector<T> operator_product(const Decomposition<T>& dec) {
  std::vector<T> b{T(1)};
  for (const auto& t : dec.terms) {
    // q dx - p dy kills (p x + q y)^d.
    std::vector<T> next(b.size() + 1, T(0));
    for (std::size_t j = 0; j < b.size(); ++j) {
      next[j] += b[j] * t.y_coef;
      next[j + 1] -= b[j] * t.x_coef;
    }
    b = std::move(next);
  }
  return b;
}

bool exact_annihilates(const BinaryForm<Q>& f, const Decomposition<Q>& dec) {
  const auto b = operator_product(dec);
  if (static_cast<int>(b.size()) - 1 > f.degree()) return true;
  return oracle::apply(b, oracle::to_poly(f)).terms.empty();
}

/// max_i |sum_j a_{i+j} b_j| / (||b||_1 ||a||_inf); zero when the operator outranks f.
double float_apolarity(const BinaryForm<Complex>& f, const Decomposition<Complex>& dec) {
  const auto b = operator_product(dec);
  const int e = static_cast<int>(b.size()) - 1, d = f.degree();
  if (e > d) return 0.0;
  double bn = 0.0, an = 0.0, worst = 0.0;
  for (const auto& v : b) bn += std::abs(v);
  for (int i = 0; i <= d; ++i) an = std::max(an, std::abs(f.coeff(i)));
  for (int i = 0; i <= d - e; ++i) {
    Complex s = 0.0;
    for (int j = 0; j <= e; ++j) s += f.coeff(i + j) * b[j];
    worst = std::max(worst, std::abs(s));
  }
  return worst / (bn * an);
}

double relative_residual(const BinaryForm<Complex>& f, const Decomposition<Complex>& dec) {
  const auto diff = expand(dec) - f;
  return diff.norm_inf() / std::max(1e-300, f.norm_inf());
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : " ") + s;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> expected;
  app.add_option("--expect-fail", expected, "criteria known to fail; exit 0 when exactly these fail");
  CLI11_PARSE(app, argc, argv);
  std::cout.setf(std::ios::unitbuf);

  criterion(1, "golden cubic", [] {
    const auto t0 = Clock::now();
    const auto f = parse_form<Q>("3x^3-3x^2y+9xy^2-y^3");
    const auto res = decompose(f);
    const double secs = seconds_since(t0);
    keep("C1", f, res);
    bool ok = res.report.waring_rank == 2 && res.is_native();
    std::string terms = "none";
    if (res.is_native()) {
      const auto got = oracle::term_multiset(*res.native);
      terms = join(got);
      ok = ok && got == std::vector<std::string>{"1@1", "2@-1"} && expand(*res.native) == f;
    }
    ok = ok && secs < 0.1;
    std::ostringstream s;
    s << "rank " << res.report.waring_rank << ", terms {" << terms << "}, " << secs << " s";
    return std::pair{ok, s.str()};
  });

  criterion(2, "cubic with a y-term", [] {
    const auto f = parse_form<Q>("8x^3+12x^2y+6xy^2");
    WaringOptions other;
    other.search.seed = 0x5eed;
    const auto a = decompose(f), b = decompose(f, other);
    keep("C2", f, a);
    keep("C2", f, b);
    const auto& r = a.report;
    bool ok = r.f_rank_value() == 3 && r.fx_rank == 1 && r.waring_rank == 2 && a.is_native() && b.is_native();
    std::string shown = "none";
    if (ok) {
      const auto expected = parse_decomposition<Q>("(2x + y)^3 - (y)^3");
      ok = oracle::term_multiset(*a.native) == oracle::term_multiset(expected) &&
           oracle::term_multiset(*b.native) == oracle::term_multiset(expected) && expand(*a.native) == f;
      shown = format_decomposition(clear_denominators(*a.native));
    }
    std::ostringstream s;
    s << "fRank " << r.f_rank_value() << ", fxRank " << r.fx_rank << ", waringRank " << r.waring_rank << ", "
      << shown << " for both seeds";
    return std::pair{ok, s.str()};
  });

  criterion(3, "rank three monomial in floats", [] {
    const auto f = parse_form<Complex>("3x^2y");
    const int wr = waring_rank(f).waring_rank;
    const Complex w = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
    Decomposition<Complex> roots{3, {}, true};
    roots.terms.push_back(LinearFormPower<Complex>::finite(1.0 / 3.0, 1.0));
    roots.terms.push_back(LinearFormPower<Complex>::finite(w * w / 3.0, w));
    roots.terms.push_back(LinearFormPower<Complex>::finite(w / 3.0, w * w));
    const auto yterm = parse_decomposition<Complex>("(1/2)*(x + y)^3 - (1/2)*(x - y)^3 - (y)^3");
    const auto v1 = verify(f, roots, 3), v2 = verify(f, yterm, 3);
    const auto dec = decompose(f);
    keep("C3", f, roots);
    keep("C3", f, yterm);
    keep("C3", f, dec.numeric);
    const bool ok = wr == 3 && v1.passed(1e-10) && v1.max_residual <= 1e-10 && v2.passed(1e-10) &&
                    v2.max_residual <= 1e-10 && verify(f, dec.numeric, 3).passed(1e-10);
    std::ostringstream s;
    s << "waringRank " << wr << ", residuals " << v1.max_residual << " and " << v2.max_residual;
    return std::pair{ok, s.str()};
  });

  criterion(4, "x y^(d-1) family", [] {
    const auto t0 = Clock::now();
    bool ok = true;
    std::ostringstream s;
    for (int d = 2; d <= 8; ++d) {
      std::vector<Q> mono(d + 1, Q(0));
      mono[d - 1] = Q(1);
      const auto f = from_monomial<Q>(d, mono);
      const int oracle = oracle_rank(f).rank;
      const auto res = decompose(f);
      keep("C4", f, res);
      // Degree-two piece of <dx^2, dy^d>: dx^2 alone, plus dy^2 when d = 2.
      const auto space = annihilator_space(f, 2);
      bool span_ok = space.dimension() == (d == 2 ? 2 : 1);
      for (const auto& g : space.basis) {
        span_ok = span_ok && g.coeff(1).is_zero() && (d == 2 || g.coeff(2).is_zero());
      }
      if (d > 2) span_ok = span_ok && !space.basis[0].coeff(0).is_zero();
      const bool row = oracle == d && res.report.waring_rank == d && span_ok;
      ok = ok && row;
      if (!row) s << "d=" << d << " oracle " << oracle << " rank " << res.report.waring_rank << "; ";
    }
    const double secs = seconds_since(t0);
    ok = ok && secs < 1.0;
    s << "oracle = rank = d for d=2..8, annihilator piece checked, " << secs << " s";
    return std::pair{ok, s.str()};
  });

  criterion(5, "generic odd degree", [] {
    const auto t0 = Clock::now();
    bool ok = true;
    std::ostringstream s;
    WaringOptions other;
    other.search.seed = 0xabcdef;
    for (int d : {3, 5, 7, 9}) {
      std::mt19937_64 rng(mix_seed(5, d));
      int generic = 0, unique = 0;
      for (int k = 0; k < 200; ++k) {
        const auto f = integer_form(rng, d, 9);
        if (f.is_zero()) continue;
        const auto a = decompose(f);
        record_chain(f, a.report);
        keep("C5", f, a);
        if (a.report.waring_rank != (d + 1) / 2) continue;
        ++generic;
        const auto b = decompose(f, other);
        if (same_decomposition(a.numeric, b.numeric, 1e-8)) ++unique;
      }
      ok = ok && generic >= 199 && unique == generic;
      s << "d=" << d << " " << generic << "/200 unique " << unique << "; ";
    }
    const double secs = seconds_since(t0);
    ok = ok && secs < 30.0;
    s << secs << " s";
    return std::pair{ok, s.str()};
  });

  criterion(6, "generic even degree", [] {
    bool ok = true;
    std::ostringstream s;
    int enumerated = 0, enumerated_ok = 0;
    for (int d : {4, 6, 8}) {
      std::mt19937_64 rng(mix_seed(6, d));
      int generic = 0;
      for (int k = 0; k < 200; ++k) {
        const auto f = integer_form(rng, d, 9);
        if (f.is_zero()) continue;
        const auto a = decompose(f);
        record_chain(f, a.report);
        keep("C6", f, a);
        if (a.report.waring_rank == d / 2 + 1) ++generic;
        // 7 + 7 + 6 subsampled forms.
        if (k % 29 == 0 && enumerated < 20) {
          ++enumerated;
          const auto found = enumerate_decompositions(f, 3);
          bool good = found.size() >= 3;
          for (std::size_t i = 0; i < found.size(); ++i) {
            keep("C6 enumerate", f, found[i]);
            good = good && verify(f, found[i].numeric, a.report.waring_rank).passed(1e-8) &&
                   relative_residual(convert<Complex>(f), found[i].numeric) <= 1e-8;
            for (std::size_t j = 0; j < i; ++j) good = good && !same_decomposition(found[i].numeric, found[j].numeric, 1e-8);
          }
          if (good) ++enumerated_ok;
        }
      }
      ok = ok && generic >= 199;
      s << "d=" << d << " " << generic << "/200; ";
    }
    ok = ok && enumerated == 20 && enumerated_ok == 20;
    s << enumerated_ok << "/" << enumerated << " enumerations with >= 3 distinct";
    return std::pair{ok, s.str()};
  });

  criterion(7, "oracle agreement", [] {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> kind(0, 5), small(-5, 5);
    int agree = 0;
    std::string first_bad;
    for (int k = 0; k < 100; ++k) {
      const int d = 2 + k % 7;
      BinaryForm<Q> f(d);
      switch (k % 6) {
        case 0: {  // dense
          Vec<Q> a(d + 1);
          for (int i = 0; i <= d; ++i) a[i] = oracle::random_q(rng, 9, 4, false);
          f = BinaryForm<Q>(a);
          break;
        }
        case 1: {  // sparse
          std::vector<Q> mono(d + 1, Q(0));
          std::bernoulli_distribution keep_it(0.3);
          for (auto& v : mono)
            if (keep_it(rng)) v = oracle::random_q(rng, 9, 3, false);
          mono[k % (d + 1)] = Q(1 + k % 4);
          f = from_monomial<Q>(d, mono);
          break;
        }
        case 2: {  // monomial
          std::vector<Q> mono(d + 1, Q(0));
          mono[(k / 6) % (d + 1)] = oracle::random_q(rng, 9, 3, false);
          if (mono[(k / 6) % (d + 1)].is_zero()) mono[(k / 6) % (d + 1)] = Q(2);
          f = from_monomial<Q>(d, mono);
          break;
        }
        case 3: {  // perfect power
          Q p = oracle::random_q(rng, 5, 2, false), q = oracle::random_q(rng, 5, 2, false);
          if (p.is_zero() && q.is_zero()) p = Q(1);
          f = power_form(LinearFormPower<Q>{Q(1 + k % 3), p, q}, d);
          break;
        }
        case 4: {  // a few rational powers, some with a y-term
          Decomposition<Q> dec{d, {}, true};
          const int r = 1 + k % ((d + 1) / 2 + 1);
          for (int j = 0; j < r; ++j) dec.terms.push_back(LinearFormPower<Q>::finite(Q(small(rng) | 1), Q(j - r / 2)));
          if (k % 4 == 0) dec.terms.push_back({Q(1), Q(0), Q(1)});
          f = expand(dec);
          break;
        }
        default: {  // binomial x^d + c y^d or repeated factor
          std::vector<Q> mono(d + 1, Q(0));
          mono[0] = Q(1);
          if (k % 2) mono[d] = oracle::random_q(rng, 9, 2, false);
          else mono[1] = Q(d);
          f = from_monomial<Q>(d, mono);
          break;
        }
      }
      if (f.is_zero()) f = power_form(LinearFormPower<Q>{Q(1), Q(1), Q(1)}, d);
      const auto res = decompose(f);
      record_chain(f, res.report);
      keep("C7", f, res);
      const int oracle = oracle_rank(f).rank;
      if (oracle == res.report.waring_rank) ++agree;
      else if (first_bad.empty()) first_bad = ", first mismatch " + format_form(f);
    }
    return std::pair{agree == 100, std::to_string(agree) + "/100 agree" + first_bad};
  });

  criterion(8, "apolarity of every produced decomposition", [] {
    int exact = 0, floating = 0, bad = 0;
    double worst = 0.0;
    std::string first_bad;
    for (const auto& p : produced) {
      bool good;
      if (p.exact && p.exact_form) {
        ++exact;
        good = exact_annihilates(*p.exact_form, *p.exact);
      } else {
        ++floating;
        const double r = float_apolarity(p.f, p.numeric);
        worst = std::max(worst, r);
        good = r <= 1e-9;
      }
      if (!good) {
        ++bad;
        if (first_bad.empty()) first_bad = ", first failure from " + p.origin;
      }
    }
    std::ostringstream s;
    s << exact << " exact and " << floating << " float decompositions, worst float residual " << worst << first_bad;
    return std::pair{bad == 0 && !produced.empty(), s.str()};
  });

  criterion(9, "roots-of-unity upper bound", [] {
    std::mt19937_64 rng(9);
    int total = 0, good = 0, cases[3] = {0, 0, 0};
    double worst = 0.0;
    for (int d = 3; d <= 8; ++d) {
      for (int k = 0; k < 50; ++k) {
        Vec<Q> a(d + 1);
        for (int i = 0; i <= d; ++i) a[i] = oracle::random_q(rng, 9, 3, k % 5 == 0);
        const int which = k % 3;  // both ends nonzero, exactly one zero, both zero
        if (which == 0) {
          if (a[0].is_zero()) a[0] = Q(1);
          if (a[d].is_zero()) a[d] = Q(-2);
        } else if (which == 1) {
          (k % 2 ? a[0] : a[d]) = Q(0);
          if ((k % 2 ? a[d] : a[0]).is_zero()) (k % 2 ? a[d] : a[0]) = Q(3);
        } else {
          a[0] = Q(0);
          a[d] = Q(0);
          if (a[1].is_zero()) a[1] = Q(1);
        }
        const BinaryForm<Q> f(a);
        ++cases[which];
        ++total;
        const auto dec = roots_of_unity_decomposition(f);
        const double r = relative_residual(convert<Complex>(f), dec);
        worst = std::max(worst, r);
        if (static_cast<int>(dec.size()) <= d && r <= 1e-9) ++good;
      }
    }
    std::ostringstream s;
    s << good << "/" << total << " with length <= d, cases " << cases[0] << "/" << cases[1] << "/" << cases[2]
      << ", worst residual " << worst;
    return std::pair{good == total, s.str()};
  });

  criterion(10, "reconstruction of canonical decompositions", [] {
    std::mt19937_64 rng(10);
    int good = 0, with_y = 0;
    std::string first_bad;
    for (int k = 0; k < 100; ++k) {
      const int d = 2 + k % 8;
      std::uniform_int_distribution<int> rr(1, (d + 1) / 2);
      const int r = rr(rng);
      const bool y = k % 3 == 0;
      Decomposition<Q> dec{d, {}, true};
      std::vector<Q> betas;
      while (static_cast<int>(betas.size()) < r - (y ? 1 : 0)) {
        const Q b = oracle::random_q(rng, 6, 3, false);
        if (std::find(betas.begin(), betas.end(), b) == betas.end()) betas.push_back(b);
      }
      auto weight = [&] {
        Q w(0);
        while (w.is_zero()) w = oracle::random_q(rng, 9, 4, false);
        return w;
      };
      for (const auto& b : betas) dec.terms.push_back(LinearFormPower<Q>::finite(weight(), b));
      if (y) {
        dec.terms.push_back({weight(), Q(0), Q(1)});
        ++with_y;
      }
      const auto f = expand(dec);
      const auto res = decompose(f);
      const bool same = res.is_native() && oracle::term_multiset(*res.native) == oracle::term_multiset(dec);
      if (same) ++good;
      else if (first_bad.empty()) first_bad = ", first miss " + format_decomposition(dec);
    }
    return std::pair{good == 100, std::to_string(good) + "/100 recovered exactly, " + std::to_string(with_y) +
                                      " with a y-term" + first_bad};
  });

  criterion(11, "rank chain", [] {
    int good = 0;
    std::string first_bad;
    for (const auto& [text, r] : chain) {
      if (r.f >= r.wr && r.wr >= r.fx && r.fx >= r.wr - 1) ++good;
      else if (first_bad.empty()) first_bad = ", first violation " + text;
    }
    return std::pair{good == static_cast<int>(chain.size()) && !chain.empty(),
                     std::to_string(good) + "/" + std::to_string(chain.size()) + " forms" + first_bad};
  });

  criterion(12, "parse and format round trip", [] {
    std::mt19937_64 rng(12);
    std::bernoulli_distribution sparse(0.35);
    int good = 0;
    for (int k = 0; k < 500; ++k) {
      const int d = k % 13;
      Vec<Q> a(d + 1);
      for (int i = 0; i <= d; ++i) a[i] = sparse(rng) ? Q(0) : oracle::random_q(rng, 99, 9, k % 2 == 1);
      const BinaryForm<Q> f(a);
      ParseOptions po;
      po.expected_degree = d;
      if (parse_form<Q>(format_form(f), po) == f) ++good;
    }
    return std::pair{good == 500, std::to_string(good) + "/500 identical"};
  });

  std::cout << "acceptance: " << 12 - failed.size() << "/12 pass";
  for (int n : failed) std::cout << " C" << n;
  std::cout << std::endl;
  return failed == std::set<int>(expected.begin(), expected.end()) ? 0 : 1;
}
