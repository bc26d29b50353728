#include "waring/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <istream>
#include <map>
#include <stdexcept>

namespace waring {

namespace {

struct Term {
  GaussRational exact;
  Complex approx;
  int x_exp = 0;
  int y_exp = 0;
};

// Literal values are kept in both backends at once so that the float backend reads
// decimals with correct rounding instead of going through a rational.
struct Literal {
  GaussRational exact;
  Complex approx;

  Literal& operator+=(const Literal& o) {
    exact += o.exact;
    approx += o.approx;
    return *this;
  }
  Literal operator-() const { return {-exact, -approx}; }
};

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  bool accept_word(std::string_view w) {
    skip_ws();
    if (text_.substr(pos_, w.size()) == w) {
      pos_ += w.size();
      return true;
    }
    return false;
  }
  bool starts_number() {
    const char c = peek();
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.';
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  std::size_t pos() const { return pos_; }
  void reset(std::size_t p) { pos_ = p; }

  int integer() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    int v = 0;
    auto res = std::from_chars(text_.data() + start, text_.data() + pos_, v);
    if (res.ec != std::errc()) {
      pos_ = start;
      fail("integer out of range");
    }
    return v;
  }

  // digits ['.' digits] [e [sign] digits] ['/' digits]
  Literal real_number() {
    skip_ws();
    const std::size_t start = pos_;
    auto digits = [&] {
      const std::size_t s = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return pos_ - s;
    };
    std::size_t n = digits();
    std::size_t frac = 0;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      frac = digits();
    }
    if (n + frac == 0) {
      pos_ = start;
      fail("expected a number");
    }
    long exponent = 0;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      bool neg = false;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) neg = text_[pos_++] == '-';
      const std::size_t es = pos_;
      if (digits() == 0) {
        pos_ = save;
      } else {
        long ev = 0;
        std::from_chars(text_.data() + es, text_.data() + pos_, ev);
        exponent = neg ? -ev : ev;
      }
    }
    const std::string_view lexeme = text_.substr(start, pos_ - start);

    // Exact value: mantissa digits over a power of ten.
    std::string mant;
    long scale = exponent;
    for (std::size_t i = 0; i < lexeme.size(); ++i) {
      const char c = lexeme[i];
      if (c == 'e' || c == 'E') break;
      if (c == '.') {
        scale -= static_cast<long>(frac);
        continue;
      }
      mant.push_back(c);
    }
    mpz_class num(mant, 10);
    mpz_class ten_pow;
    mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
    mpq_class exact = scale >= 0 ? mpq_class(num * ten_pow) : mpq_class(num, ten_pow);
    exact.canonicalize();
    double approx = 0.0;
    std::from_chars(lexeme.data(), lexeme.data() + lexeme.size(), approx);

    if (accept('/')) {
      const std::size_t dpos = pos();
      skip_ws();
      const std::size_t ds = pos_;
      if (digits() == 0) fail("expected a denominator");
      mpz_class den(std::string(text_.substr(ds, pos_ - ds)), 10);
      if (den == 0) {
        pos_ = dpos;
        fail("zero denominator");
      }
      exact /= den;
      approx /= den.get_d();
    }
    return {GaussRational(exact), Complex(approx, 0.0)};
  }

  // Body of '(' ... ')': signed real and imaginary parts, e.g. 1/2-3i, -i, 2.5i.
  Literal complex_body() {
    Literal total{GaussRational(0), Complex(0.0, 0.0)};
    bool first = true;
    while (true) {
      bool neg = false;
      if (accept('+')) {
      } else if (accept('-')) {
        neg = true;
      } else if (!first) {
        break;
      }
      first = false;
      Literal part{GaussRational(1), Complex(1.0, 0.0)};
      bool have_number = false;
      if (starts_number()) {
        part = real_number();
        have_number = true;
        accept('*');
      }
      if (accept('i')) {
        part = {part.exact * GaussRational(mpq_class(0), mpq_class(1)), part.approx * Complex(0.0, 1.0)};
      } else if (!have_number) {
        fail("expected a number or 'i'");
      }
      total += neg ? -part : part;
    }
    return total;
  }

  std::string_view rest() const { return text_.substr(pos_); }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

class FormParser {
 public:
  FormParser(Cursor& cur, const Symbols& sym) : cur_(cur), sym_(sym) {}

  // Parses a signed sum of terms. Stops before ')' or end of input.
  std::vector<Term> sum() {
    std::vector<Term> terms;
    bool neg = false;
    if (cur_.accept('-')) neg = true;
    else cur_.accept('+');
    while (true) {
      Term t = term();
      if (neg) {
        t.exact = -t.exact;
        t.approx = -t.approx;
      }
      terms.push_back(std::move(t));
      if (cur_.accept('+')) neg = false;
      else if (cur_.accept('-')) neg = true;
      else break;
    }
    return terms;
  }

 private:
  bool starts_symbol() {
    cur_.skip_ws();
    const auto r = cur_.rest();
    return r.starts_with(longer()) || r.starts_with(shorter());
  }
  const std::string& longer() const { return sym_.x.size() >= sym_.y.size() ? sym_.x : sym_.y; }
  const std::string& shorter() const { return sym_.x.size() >= sym_.y.size() ? sym_.y : sym_.x; }

  Term term() {
    Term t{GaussRational(1), Complex(1.0, 0.0)};
    bool have_coeff = false;
    if (cur_.starts_number()) {
      Literal lit = cur_.real_number();
      t.exact = lit.exact;
      t.approx = lit.approx;
      have_coeff = true;
    } else if (cur_.peek() == '(') {
      cur_.expect('(');
      Literal lit = cur_.complex_body();
      cur_.expect(')');
      t.exact = lit.exact;
      t.approx = lit.approx;
      have_coeff = true;
    }
    bool have_factor = false;
    while (true) {
      const std::size_t save = cur_.pos();
      const bool star = cur_.accept('*');
      if (!starts_symbol()) {
        if (star) {
          if (!have_coeff && !have_factor) cur_.fail("unexpected '*'");
          cur_.reset(save + 1);
          cur_.fail("expected a variable after '*'");
        }
        break;
      }
      if (star && !have_coeff && !have_factor) cur_.fail("unexpected '*'");
      bool is_x = false;
      if (cur_.accept_word(longer())) {
        is_x = &longer() == &sym_.x;
      } else {
        cur_.accept_word(shorter());
        is_x = &shorter() == &sym_.x;
      }
      int exp = 1;
      if (cur_.accept('^')) exp = cur_.integer();
      (is_x ? t.x_exp : t.y_exp) += exp;
      have_factor = true;
    }
    if (!have_coeff && !have_factor) cur_.fail("expected a term");
    return t;
  }

  Cursor& cur_;
  const Symbols& sym_;
};

template <Scalar S>
S pick(const Term& t) {
  if constexpr (is_exact_v<S>) return t.exact;
  else return t.approx;
}

template <Scalar S>
S pick(const Literal& l) {
  if constexpr (is_exact_v<S>) return l.exact;
  else return l.approx;
}

template <Scalar S>
BinaryForm<S> assemble(const std::vector<Term>& terms, std::optional<int> expected_degree, std::size_t where) {
  std::optional<int> degree;
  // A lone constant zero ("0") carries no degree of its own.
  const bool lone_zero =
      terms.size() == 1 && terms[0].x_exp == 0 && terms[0].y_exp == 0 && terms[0].exact.is_zero();
  if (!lone_zero) {
    for (const auto& t : terms) {
      const int td = t.x_exp + t.y_exp;
      if (!degree) degree = td;
      else if (*degree != td)
        throw ParseError("non-homogeneous input: terms of degree " + std::to_string(*degree) + " and " +
                             std::to_string(td),
                         where);
    }
  }
  const int d = degree.value_or(expected_degree.value_or(0));
  if (expected_degree && *expected_degree != d)
    throw ParseError("expected degree " + std::to_string(*expected_degree) + ", got " + std::to_string(d), where);
  std::vector<S> mono(d + 1, from_integer<S>(0));
  if (!lone_zero)
    for (const auto& t : terms) mono[t.y_exp] += pick<S>(t);
  return from_monomial<S>(d, mono);
}

bool digits_only(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

bool is_negative_real(const GaussRational& v) { return v.is_real() && sgn(v.real()) < 0; }
bool is_negative_real(const Complex& v) { return v.imag() == 0.0 && v.real() < 0.0; }
bool is_one(const GaussRational& v) { return v == GaussRational(1); }
bool is_one(const Complex& v) { return v == Complex(1.0, 0.0); }

// Appends "c*monomial" with sign handling. `first` controls the leading separator.
template <Scalar S>
void append_signed(std::string& out, const S& c, const std::string& body, bool first, bool star_always) {
  const bool neg = is_negative_real(c);
  const S mag = neg ? S(-c) : c;
  if (first) out += neg ? "-" : "";
  else out += neg ? " - " : " + ";
  if (body.empty()) {
    out += to_string(mag);
    return;
  }
  if (!is_one(mag)) {
    const std::string text = to_string(mag);
    out += text;
    if (star_always || !digits_only(text)) out += "*";
  }
  out += body;
}

std::string monomial_text(const Symbols& sym, int xe, int ye) {
  const bool sep = sym.x.size() > 1 || sym.y.size() > 1;
  std::string out;
  auto factor = [&](const std::string& name, int e) {
    if (e == 0) return;
    if (!out.empty() && sep) out += "*";
    out += name;
    if (e > 1) out += "^" + std::to_string(e);
  };
  factor(sym.x, xe);
  factor(sym.y, ye);
  return out;
}

}  // namespace

template <Scalar S>
BinaryForm<S> parse_form(std::string_view text, const ParseOptions& opts) {
  Cursor cur(text);
  FormParser parser(cur, opts.symbols);
  auto terms = parser.sum();
  if (!cur.at_end()) cur.fail("unexpected character '" + std::string(1, cur.peek()) + "'");
  auto f = assemble<S>(terms, opts.expected_degree, cur.pos());
  if (!opts.allow_zero && f.is_zero()) throw ZeroFormError();
  return f;
}

template <Scalar S>
DiffOperator<S> parse_operator(std::string_view text, std::optional<int> expected_degree) {
  ParseOptions opts;
  opts.expected_degree = expected_degree;
  opts.symbols = Symbols::operators();
  // An operator sum_j b_j dx^(e-j) dy^j is read like a form; its coefficients are the monomial ones.
  const auto f = parse_form<S>(text, opts);
  Vec<S> b(f.degree() + 1);
  for (int j = 0; j <= f.degree(); ++j) b[j] = f.monomial_coeff(j);
  return DiffOperator<S>(std::move(b));
}

template <Scalar S>
Decomposition<S> parse_decomposition(std::string_view text) {
  Cursor cur(text);
  Symbols sym;
  Decomposition<S> dec;
  std::optional<int> degree;
  bool neg = cur.accept('-');
  if (!neg) cur.accept('+');
  while (true) {
    Literal weight{GaussRational(1), Complex(1.0, 0.0)};
    if (cur.starts_number()) {
      weight = cur.real_number();
      cur.expect('*');
    } else if (cur.peek() == '(') {
      // Either a complex weight "(a+bi)*" or the linear form group itself.
      const std::size_t save = cur.pos();
      cur.expect('(');
      try {
        Literal lit = cur.complex_body();
        cur.expect(')');
        if (cur.accept('*')) weight = lit;
        else cur.reset(save);
      } catch (const ParseError&) {
        cur.reset(save);
      }
    }
    cur.expect('(');
    FormParser inner(cur, sym);
    const auto lin = assemble<S>(inner.sum(), 1, cur.pos());
    cur.expect(')');
    cur.expect('^');
    const std::size_t dpos = cur.pos();
    const int d = cur.integer();
    if (degree && *degree != d) throw ParseError("terms of different degree", dpos);
    degree = d;
    S w = pick<S>(weight);
    if (neg) w = -w;
    const S p = lin.monomial_coeff(0);
    const S q = lin.monomial_coeff(1);
    if (is_zero(p) && is_zero(q)) throw ParseError("zero linear form", dpos);
    dec.terms.push_back({w, p, q});
    if (cur.accept('+')) neg = false;
    else if (cur.accept('-')) neg = true;
    else break;
  }
  if (!cur.at_end()) cur.fail("unexpected character '" + std::string(1, cur.peek()) + "'");
  dec.degree = *degree;
  return dec;
}

template <Scalar S>
std::string format_form(const BinaryForm<S>& f, const Symbols& symbols) {
  const int d = f.degree();
  std::string out;
  for (int i = 0; i <= d; ++i) {
    const S m = f.monomial_coeff(i);
    if (is_zero(m)) continue;
    append_signed(out, m, monomial_text(symbols, d - i, i), out.empty(), false);
  }
  return out.empty() ? "0" : out;
}

template <Scalar S>
std::string format_operator(const DiffOperator<S>& g) {
  Vec<S> a(g.degree() + 1);
  for (int j = 0; j <= g.degree(); ++j) a[j] = g.coeff(j) / binomial<S>(g.degree(), j);
  return format_form(BinaryForm<S>(std::move(a)), Symbols::operators());
}

template <Scalar S>
std::string format_decomposition(const Decomposition<S>& dec, const Symbols& symbols) {
  if (dec.terms.empty()) throw std::invalid_argument("cannot format an empty decomposition");
  std::string out;
  for (const auto& t : dec.terms) {
    Vec<S> lin(2);
    lin << t.x_coef, t.y_coef;
    const std::string body = "(" + format_form(BinaryForm<S>(std::move(lin)), symbols) + ")^" + std::to_string(dec.degree);
    append_signed(out, t.weight, body, out.empty(), true);
  }
  return out;
}

std::vector<std::string> read_form_lines(std::istream& in) {
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    out.push_back(line.substr(first, last - first + 1));
  }
  return out;
}

#define WARING_INSTANTIATE(S)                                                             \
  template BinaryForm<S> parse_form<S>(std::string_view, const ParseOptions&);           \
  template DiffOperator<S> parse_operator<S>(std::string_view, std::optional<int>);      \
  template Decomposition<S> parse_decomposition<S>(std::string_view);                    \
  template std::string format_form<S>(const BinaryForm<S>&, const Symbols&);             \
  template std::string format_operator<S>(const DiffOperator<S>&);                       \
  template std::string format_decomposition<S>(const Decomposition<S>&, const Symbols&);

WARING_INSTANTIATE(GaussRational)
WARING_INSTANTIATE(Complex)

#undef WARING_INSTANTIATE

}  // namespace waring
