#pragma once

// Text form of polynomials, shared by the CLI and config files.
//
//   expression = ["+"|"-"] term { ("+"|"-") term }
//   term       = rational "*" atom | atom | rational
//   atom       = "x" ["^" integer] | "H" integer
//   rational   = integer | integer "/" integer | decimal
//
// Monomial and Hermite atoms may be mixed; the result is always normalized
// to the Hermite basis. Whitespace between tokens is ignored.

#include <cctype>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "hermrank/hermite_algebra.hpp"

namespace hermrank {

class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::invalid_argument(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

namespace detail {

class PolyParser {
 public:
  PolyParser(std::string_view text, std::size_t degree_cap) : text_(text), cap_(degree_cap) {}

  HermitePoly parse() {
    skip_ws();
    if (at_end()) fail("empty polynomial expression");
    HermitePoly result;
    bool first = true;
    while (true) {
      skip_ws();
      int sign = 1;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1 : 1;
        ++pos_;
        skip_ws();
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      HermitePoly t = term();
      if (sign < 0) t = -t;
      result += t;
      first = false;
      skip_ws();
      if (at_end()) break;
    }
    return result;
  }

 private:
  HermitePoly term() {
    if (peek() == 'x' || peek() == 'H') return atom();
    if (!is_digit(peek()) && peek() != '.') fail("expected a coefficient, 'x' or 'H<k>'");
    const Rational c = rational();
    skip_ws();
    if (peek() == '*') {
      ++pos_;
      skip_ws();
      if (peek() != 'x' && peek() != 'H') fail("expected 'x' or 'H<k>' after '*'");
      return c * atom();
    }
    return HermitePoly::constant(c);
  }

  HermitePoly atom() {
    if (peek() == 'H') {
      ++pos_;
      if (!is_digit(peek())) fail("expected an index after 'H'");
      const std::size_t k = integer_index();
      return HermitePoly::basis(k);
    }
    ++pos_;  // 'x'
    skip_ws();
    std::size_t k = 1;
    if (peek() == '^') {
      ++pos_;
      skip_ws();
      if (!is_digit(peek())) fail("expected an integer exponent after '^'");
      k = integer_index();
    }
    return monomial_to_hermite(MonomialPoly::basis(k));
  }

  std::size_t integer_index() {
    const std::size_t begin = pos_;
    while (is_digit(peek())) ++pos_;
    const std::string digits(text_.substr(begin, pos_ - begin));
    // Anything this long is over any sensible cap; avoid stoul overflow.
    if (digits.size() > 9) throw DegreeCapError(999999999, cap_);
    const std::size_t k = std::stoul(digits);
    check_degree_cap(k, cap_);
    return k;
  }

  Rational rational() {
    const std::size_t begin = pos_;
    while (is_digit(peek())) ++pos_;
    if (peek() == '.') {
      ++pos_;
      const std::size_t frac_begin = pos_;
      while (is_digit(peek())) ++pos_;
      const std::string whole(text_.substr(begin, frac_begin - 1 - begin));
      const std::string frac(text_.substr(frac_begin, pos_ - frac_begin));
      if (whole.empty() && frac.empty()) fail("malformed decimal", begin);
      Integer num(whole.empty() ? "0" : whole);
      Integer den = 1;
      for (char ch : frac) {
        num = num * 10 + (ch - '0');
        den *= 10;
      }
      return Rational(num, den);
    }
    Integer num(std::string(text_.substr(begin, pos_ - begin)));
    skip_ws();
    if (peek() == '/') {
      ++pos_;
      skip_ws();
      if (!is_digit(peek())) fail("expected a denominator after '/'");
      const std::size_t dbeg = pos_;
      while (is_digit(peek())) ++pos_;
      Integer den(std::string(text_.substr(dbeg, pos_ - dbeg)));
      if (den == 0) fail("zero denominator", dbeg);
      return Rational(num, den);
    }
    return Rational(num);
  }

  static bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& msg) const { fail(msg, pos_); }
  [[noreturn]] void fail(const std::string& msg, std::size_t at) const {
    std::string found = at < text_.size() ? std::string("'") + text_[at] + "'" : "end of input";
    throw ParseError(msg + ", found " + found, at);
  }

  std::string_view text_;
  std::size_t cap_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses the polynomial grammar into the Hermite basis.
/// Throws ParseError (with position) or DegreeCapError.
inline HermitePoly parse_polynomial(std::string_view text, std::size_t degree_cap = kDefaultDegreeCap) {
  return detail::PolyParser(text, degree_cap).parse();
}

/// Same grammar, returned in the power basis (used for the outer polynomial
/// of a composition).
inline MonomialPoly parse_monomial(std::string_view text, std::size_t degree_cap = kDefaultDegreeCap) {
  return hermite_to_monomial(parse_polynomial(text, degree_cap));
}

}  // namespace hermrank
