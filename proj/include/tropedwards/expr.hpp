#pragma once

// Textual parameters: signed sums of rational multiples of rational powers of
// q, e.g. "1 - 3*q", "-1+q^(3/2)", "1/2 q^-1 + 2q".

#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "tropedwards/error.hpp"
#include "tropedwards/rational.hpp"
#include "tropedwards/series.hpp"

namespace tropedwards {

class ExprParseError : public Error {
 public:
  ExprParseError(std::size_t position, const std::string& msg)
      : Error(Errc::parse_error, "column " + std::to_string(position + 1) + ": " + msg), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

namespace detail {

class ExprParser {
 public:
  explicit ExprParser(std::string_view s) : s_(s) {}

  std::map<Rational, Rational> parse_sum(std::optional<Rational>& order) {
    std::map<Rational, Rational> terms;
    skip();
    if (at_end()) fail("empty expression");
    bool first = true;
    while (!at_end()) {
      int sign = 1;
      if (peek() == '+' || peek() == '-') {
        sign = get() == '-' ? -1 : 1;
        skip();
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      first = false;
      if (peek() == 'O') {
        if (sign < 0) fail("order term cannot be negated");
        order = parse_order();
        skip();
        if (!at_end()) fail("nothing may follow the order term");
        break;
      }
      auto [e, c] = parse_term();
      terms[e] += sign * c;
      skip();
    }
    return terms;
  }

 private:
  std::pair<Rational, Rational> parse_term() {
    Rational c(1), e(0);
    bool have_coeff = false;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      c = parse_unsigned_rational();
      have_coeff = true;
      skip();
      if (peek() == '*') {
        get();
        skip();
        if (peek() != 'q') fail("expected 'q' after '*'");
      }
    }
    if (peek() == 'q') {
      get();
      e = 1;
      skip();
      if (peek() == '^') {
        get();
        skip();
        e = parse_exponent();
      }
    } else if (!have_coeff) {
      fail("expected a number or 'q'");
    }
    return {e, c};
  }

  Rational parse_exponent() {
    if (peek() == '(') {
      get();
      skip();
      Rational e = parse_signed_rational();
      skip();
      if (peek() != ')') fail("expected ')'");
      get();
      return e;
    }
    if (peek() == '-') {
      get();
      return -parse_integer();
    }
    return parse_integer();
  }

  Rational parse_order() {
    get();  // O
    if (peek() != '(') fail("expected '(' after 'O'");
    get();
    skip();
    if (peek() != 'q') fail("expected 'q' in order term");
    get();
    Rational e(1);
    skip();
    if (peek() == '^') {
      get();
      skip();
      e = parse_exponent();
    }
    skip();
    if (peek() != ')') fail("expected ')'");
    get();
    return e;
  }

  Rational parse_signed_rational() {
    bool neg = false;
    if (peek() == '-' || peek() == '+') {
      neg = get() == '-';
      skip();
    }
    Rational r = parse_unsigned_rational();
    return neg ? Rational(-r) : r;
  }

  Rational parse_unsigned_rational() {
    Rational n = parse_integer();
    if (peek() == '/') {
      std::size_t at = pos_;
      get();
      Rational d = parse_integer();
      if (d == 0) {
        pos_ = at;
        fail("zero denominator");
      }
      n /= d;
    }
    return n;
  }

  Rational parse_integer() {
    std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (start == pos_) fail("expected digits");
    return Rational(Integer(std::string(s_.substr(start, pos_ - start))));
  }

  void skip() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return at_end() ? '\0' : s_[pos_]; }
  char get() { return s_[pos_++]; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ExprParseError(pos_, msg + (at_end() ? " at end of input" : std::string(" near '") + s_[pos_] + "'"));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses `text` into a series known below `horizon`. A trailing "+ O(q^h)"
/// lowers the horizon to h. `ram`, when given, must divide into every
/// exponent's denominator lcm.
inline PuiseuxSeries parse_series(std::string_view text, const Rational& horizon = Rational(kDefaultHorizon),
                                  std::optional<int> ram = std::nullopt) {
  std::optional<Rational> order;
  auto terms = detail::ExprParser(text).parse_sum(order);
  Rational h = order ? std::min(*order, horizon) : horizon;
  if (h <= 0) throw ExprParseError(0, "horizon must be positive");
  PuiseuxSeries out = PuiseuxSeries::from_terms(terms, h, ram.value_or(1));
  if (ram && out.ram() != *ram)
    throw ExprParseError(0, "exponents need ramification " + std::to_string(out.ram()) + ", not " + std::to_string(*ram));
  return out;
}

/// Inverse of parse_series; the order term is included when `with_order`.
inline std::string print_series(const PuiseuxSeries& s, bool with_order = false) { return s.to_string(with_order); }

}  // namespace tropedwards
