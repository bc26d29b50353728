#pragma once

// Text format for forms, operators and decompositions.
//
//   form   := term { ('+' | '-') term }
//   term   := [coefficient ['*']] [factor {['*'] factor}]
//   factor := symbol ['^' integer]
//   coefficient := integer | decimal | p/q | '(' complex ')'     e.g. (1/2-3i)
//
// Whitespace is ignored. Every term must have the same total degree.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "waring/form.hpp"

namespace waring {

/// Variable names used for display and parsing. Operators use {"dx", "dy"}.
struct Symbols {
  std::string x = "x";
  std::string y = "y";

  static Symbols operators() { return {"dx", "dy"}; }
};

struct ParseOptions {
  std::optional<int> expected_degree;
  /// When false, a form whose coefficients are all zero raises ZeroFormError.
  bool allow_zero = true;
  Symbols symbols;
};

template <Scalar S>
BinaryForm<S> parse_form(std::string_view text, const ParseOptions& opts = {});

/// Operator text over the symbols dx, dy, e.g. "dy^2 - dx^2".
template <Scalar S>
DiffOperator<S> parse_operator(std::string_view text, std::optional<int> expected_degree = {});

/// "l1*(p1 x + q1 y)^d + ..." as produced by format_decomposition.
template <Scalar S>
Decomposition<S> parse_decomposition(std::string_view text);

template <Scalar S>
std::string format_form(const BinaryForm<S>& f, const Symbols& symbols = {});

template <Scalar S>
std::string format_operator(const DiffOperator<S>& g);

/// Throws std::invalid_argument for an empty decomposition.
template <Scalar S>
std::string format_decomposition(const Decomposition<S>& dec, const Symbols& symbols = {});

/// Fixture reader: one form per line, blank lines and '#' comments skipped.
std::vector<std::string> read_form_lines(std::istream& in);

}  // namespace waring
