#include "waring/scalar.hpp"

#include <array>
#include <charconv>
#include <ostream>

namespace waring {

namespace {

std::string imaginary_suffix(const std::string& text) {
  if (text == "1") return "i";
  if (text == "-1") return "-i";
  return text + "i";
}

template <class Part, class Fmt>
std::string format_complex(const Part& re, const Part& im, bool re_zero, bool im_zero, bool im_negative,
                           Fmt fmt) {
  if (im_zero) return fmt(re);
  std::string out = "(";
  if (!re_zero) {
    out += fmt(re);
    out += im_negative ? "-" : "+";
    out += imaginary_suffix(fmt(im_negative ? Part(-im) : im));
  } else {
    out += imaginary_suffix(fmt(im));
  }
  out += ")";
  return out;
}

}  // namespace

std::string to_string(const GaussRational& value) {
  auto fmt = [](const mpq_class& q) { return q.get_str(); };
  return format_complex(value.real(), value.imag(), sgn(value.real()) == 0, sgn(value.imag()) == 0,
                        sgn(value.imag()) < 0, fmt);
}

std::ostream& operator<<(std::ostream& os, const GaussRational& value) { return os << to_string(value); }

std::string to_string_shortest(double value) {
  if (value == 0.0) return "0";  // folds -0.0
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

std::string to_string(const Complex& value) {
  auto fmt = [](double v) { return to_string_shortest(v); };
  return format_complex(value.real(), value.imag(), value.real() == 0.0, value.imag() == 0.0,
                        value.imag() < 0.0, fmt);
}

}  // namespace waring
