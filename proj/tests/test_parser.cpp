#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "waring/parser.hpp"

using namespace waring;
using Q = GaussRational;

TEST(ParseForm, Monomials) {
  const auto f = parse_form<Q>("3x^2y");
  ASSERT_EQ(f.degree(), 3);
  EXPECT_EQ(f.monomial_coeff(1), Q(3));
  EXPECT_EQ(parse_form<Q>("x*y^4"), parse_form<Q>("x y^4"));
  EXPECT_EQ(parse_form<Q>("x*y^4"), parse_form<Q>("y^4 x"));
  EXPECT_EQ(parse_form<Q>("x^2y^2").monomial_coeff(2), Q(1));
}

TEST(ParseForm, Coefficients) {
  EXPECT_EQ(parse_form<Q>("1/2x^2").monomial_coeff(0), Q::ratio(1, 2));
  EXPECT_EQ(parse_form<Q>("0.25*x").monomial_coeff(0), Q::ratio(1, 4));
  EXPECT_EQ(parse_form<Q>("1e-3 y").monomial_coeff(1), Q::ratio(1, 1000));
  EXPECT_EQ(parse_form<Q>("2.5e2 y").monomial_coeff(1), Q(250));
  EXPECT_EQ(parse_form<Q>("(1/2-3i)x^2").monomial_coeff(0), Q(mpq_class(1, 2), mpq_class(-3)));
  EXPECT_EQ(parse_form<Q>("(-i) x").monomial_coeff(0), Q(mpq_class(0), mpq_class(-1)));
  EXPECT_EQ(parse_form<Q>("x - 2x + y").monomial_coeff(0), Q(-1));
  EXPECT_EQ(parse_form<Q>("-x^3 + x^3").is_zero(), true);
}

TEST(ParseForm, FloatBackendRoundsDecimalsCorrectly) {
  const auto f = parse_form<Complex>("0.1x + 0.7y");
  EXPECT_EQ(f.monomial_coeff(0), Complex(0.1, 0.0));
  EXPECT_EQ(f.monomial_coeff(1), Complex(0.7, 0.0));
}

TEST(ParseForm, ZeroForm) {
  EXPECT_EQ(parse_form<Q>("0").degree(), 0);
  ParseOptions po;
  po.expected_degree = 4;
  EXPECT_EQ(parse_form<Q>("0", po).degree(), 4);
  po.allow_zero = false;
  EXPECT_THROW(parse_form<Q>("0", po), ZeroFormError);
  po.expected_degree.reset();
  EXPECT_THROW(parse_form<Q>("x^2 - x^2", po), ZeroFormError);
}

TEST(ParseForm, Errors) {
  EXPECT_THROW(parse_form<Q>("x^2 + y"), ParseError);
  EXPECT_THROW(parse_form<Q>("x^2 + "), ParseError);
  EXPECT_THROW(parse_form<Q>("x % y"), ParseError);
  EXPECT_THROW(parse_form<Q>("1/0 x"), ParseError);
  EXPECT_THROW(parse_form<Q>("*x"), ParseError);
  EXPECT_THROW(parse_form<Q>("x^"), ParseError);
  EXPECT_THROW(parse_form<Q>(""), ParseError);
  ParseOptions po;
  po.expected_degree = 3;
  EXPECT_THROW(parse_form<Q>("x^2", po), ParseError);
}

TEST(ParseForm, ErrorPositionPointsAtOffendingInput) {
  try {
    parse_form<Q>("x^2 + 3 # y");
    FAIL() << "no exception";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 8u);
  }
}

TEST(ParseForm, CustomSymbols) {
  ParseOptions po;
  po.symbols = {"u", "v"};
  const auto f = parse_form<Q>("u^2 - 4uv", po);
  EXPECT_EQ(f, parse_form<Q>("x^2 - 4xy"));
  EXPECT_EQ(format_form(f, po.symbols), "u^2 - 4uv");
}

TEST(FormatForm, Canonical) {
  EXPECT_EQ(format_form(parse_form<Q>("3x^3-3x^2y+9xy^2-y^3")), "3x^3 - 3x^2y + 9xy^2 - y^3");
  EXPECT_EQ(format_form(parse_form<Q>("1/2 x^2 - y^2")), "1/2*x^2 - y^2");
  EXPECT_EQ(format_form(parse_form<Q>("(1+2i) x y")), "(1+2i)*xy");
  EXPECT_EQ(format_form(parse_form<Q>("-7")), "-7");
  EXPECT_EQ(format_form(BinaryForm<Q>(3)), "0");
  EXPECT_EQ(format_form(parse_form<Complex>("0.5x - y")), "0.5*x - y");
}

TEST(FormatForm, ParseFormatRoundTrip) {
  std::mt19937_64 rng(11);
  std::bernoulli_distribution sparse(0.3);
  for (int trial = 0; trial < 300; ++trial) {
    const int d = trial % 13;
    Vec<Q> a(d + 1);
    for (int i = 0; i <= d; ++i) a[i] = sparse(rng) ? Q(0) : oracle::random_q(rng, 50, 7, trial % 2 == 0);
    const BinaryForm<Q> f(std::move(a));
    ParseOptions po;
    po.expected_degree = d;
    EXPECT_EQ(parse_form<Q>(format_form(f), po), f) << format_form(f);
  }
}

TEST(FormatForm, FloatRoundTripIsExact) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 1 + trial % 8;
    Vec<Complex> a(d + 1);
    for (int i = 0; i <= d; ++i) a[i] = Complex(u(rng), trial % 3 ? u(rng) : 0.0);
    // Monomial coefficients survive the text round trip bit for bit.
    const auto f = BinaryForm<Complex>(std::move(a));
    ParseOptions po;
    po.expected_degree = d;
    const auto g = parse_form<Complex>(format_form(f), po);
    for (int i = 0; i <= d; ++i) EXPECT_EQ(g.monomial_coeff(i), f.monomial_coeff(i));
  }
}

TEST(ParseOperator, DxDy) {
  const auto g = parse_operator<Q>("dy^2 - dx^2");
  ASSERT_EQ(g.degree(), 2);
  EXPECT_EQ(g.coeff(0), Q(-1));
  EXPECT_EQ(g.coeff(1), Q(0));
  EXPECT_EQ(g.coeff(2), Q(1));
  EXPECT_EQ(parse_operator<Q>("dx dy").coeff(1), Q(1));
  EXPECT_EQ(format_operator(g), "-dx^2 + dy^2");
  EXPECT_THROW(parse_operator<Q>("dx^2", 3), ParseError);
}

TEST(ParseDecomposition, RoundTrip) {
  for (const char* text : {"(x + y)^3 + 2*(x - y)^3", "(2x + y)^3 - (y)^3", "(1/2+i)*(x + 3y)^4 - 5*(x)^4",
                           "-(x - 1/3*y)^2"}) {
    const auto dec = parse_decomposition<Q>(text);
    EXPECT_EQ(format_decomposition(dec), text);
  }
}

TEST(ParseDecomposition, Errors) {
  EXPECT_THROW(parse_decomposition<Q>("(x + y)^3 + (x)^2"), ParseError);
  EXPECT_THROW(parse_decomposition<Q>("(x^2)^3"), ParseError);
  EXPECT_THROW(parse_decomposition<Q>("(x - x)^3"), ParseError);
  EXPECT_THROW(parse_decomposition<Q>("x^3"), ParseError);
  EXPECT_THROW(format_decomposition(Decomposition<Q>{}), std::invalid_argument);
}

TEST(ReadFormLines, SkipsCommentsAndBlanks) {
  std::istringstream in("# fixture\n3x^2y\n\n  x^3 + y^3   # tail\n#only\n");
  const auto lines = read_form_lines(in);
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0], "3x^2y");
  EXPECT_EQ(lines[1], "x^3 + y^3");
}
