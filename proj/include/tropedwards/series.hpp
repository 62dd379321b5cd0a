#pragma once

// Truncated Puiseux series in q^(1/N) with exact rational coefficients.
//
// A series stores every coefficient with exponent strictly below its horizon;
// nothing is known about exponents at or above the horizon. Arithmetic
// propagates horizons so that a result never claims more than its inputs
// determine.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tropedwards/error.hpp"
#include "tropedwards/rational.hpp"

namespace tropedwards {

inline constexpr long kDefaultHorizon = 24;

/// v(a) of a truncated series: either a witnessed value or only a lower bound
/// (the horizon) when every stored coefficient vanishes.
class Valuation {
 public:
  static Valuation known(Rational v) { return Valuation(true, std::move(v)); }
  static Valuation at_least(Rational bound) { return Valuation(false, std::move(bound)); }

  bool is_known() const noexcept { return known_; }

  const Rational& value() const {
    if (!known_)
      throw Error(Errc::insufficient_precision, "valuation only bounded below by " + value_.get_str());
    return value_;
  }

  /// The value when known, otherwise the lower bound.
  const Rational& bound() const noexcept { return value_; }

  friend bool operator==(const Valuation& a, const Valuation& b) {
    return a.known_ == b.known_ && a.value_ == b.value_;
  }

  std::string to_string() const {
    return known_ ? "Known(" + value_.get_str() + ")" : "AtLeast(" + value_.get_str() + ")";
  }

 private:
  Valuation(bool known, Rational v) : known_(known), value_(std::move(v)) {}
  bool known_;
  Rational value_;
};

inline std::ostream& operator<<(std::ostream& os, const Valuation& v) { return os << v.to_string(); }

class PuiseuxSeries {
 public:
  using Term = std::pair<Rational, Rational>;  // (exponent, coefficient)

  PuiseuxSeries() : PuiseuxSeries(1, kDefaultHorizon, kDefaultHorizon, {}) {}

  static PuiseuxSeries zero(const Rational& horizon, int ram = 1) {
    int n = std::lcm(ram, den_int(horizon));
    std::int64_t hk = index_of(horizon, n);
    return PuiseuxSeries(n, hk, hk, {});
  }

  static PuiseuxSeries constant(const Rational& c, const Rational& horizon) {
    return monomial(c, Rational(0), horizon);
  }

  static PuiseuxSeries monomial(const Rational& c, const Rational& exponent, const Rational& horizon) {
    std::map<Rational, Rational> t;
    if (exponent < horizon) t.emplace(exponent, c);
    return from_terms(t, horizon);
  }

  /// Builds a series from exponent -> coefficient pairs; the ramification is
  /// the least N that makes every exponent and the horizon lie in (1/N)Z,
  /// at least `ram`.
  static PuiseuxSeries from_terms(const std::map<Rational, Rational>& terms, const Rational& horizon,
                                  int ram = 1) {
    int n = std::lcm(ram, den_int(horizon));
    for (const auto& [e, c] : terms) n = std::lcm(n, den_int(e));
    std::int64_t hk = index_of(horizon, n);
    std::map<std::int64_t, Rational> idx;
    for (const auto& [e, c] : terms) {
      if (e >= horizon || c == 0) continue;
      idx[index_of(e, n)] += c;
    }
    return from_index_map(n, hk, idx);
  }

  int ram() const noexcept { return ram_; }
  Rational horizon() const { return exponent_of(hk_); }

  /// True when no coefficient below the horizon is nonzero.
  bool is_zero_truncation() const noexcept { return coeffs_.empty(); }

  Valuation valuation() const {
    if (coeffs_.empty()) return Valuation::at_least(horizon());
    return Valuation::known(exponent_of(first_));
  }

  const Rational& principal_coefficient() const {
    if (coeffs_.empty())
      throw Error(Errc::insufficient_precision,
                  "principal coefficient of a zero truncation (horizon " + horizon().get_str() + ")");
    return coeffs_.front();
  }

  Rational coefficient(const Rational& exponent) const {
    if (exponent >= horizon())
      throw Error(Errc::insufficient_precision,
                  "coefficient at " + exponent.get_str() + " lies beyond horizon " + horizon().get_str());
    Rational k = exponent * ram_;
    if (!is_integer(k)) return Rational(0);
    std::int64_t i = to_int64(k);
    if (i < first_ || i >= first_ + static_cast<std::int64_t>(coeffs_.size())) return Rational(0);
    return coeffs_[static_cast<std::size_t>(i - first_)];
  }

  std::vector<Term> terms() const {
    std::vector<Term> out;
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
      if (coeffs_[i] != 0) out.emplace_back(exponent_of(first_ + static_cast<std::int64_t>(i)), coeffs_[i]);
    return out;
  }

  /// Same series with ramification index `n`, which must be a multiple of ram().
  PuiseuxSeries lifted(int n) const {
    if (n % ram_ != 0) throw Error(Errc::invalid_argument, "ramification lift must be a multiple");
    if (n == ram_) return *this;
    int f = n / ram_;
    std::vector<Rational> c;
    if (!coeffs_.empty()) {
      c.assign((coeffs_.size() - 1) * f + 1, Rational(0));
      for (std::size_t i = 0; i < coeffs_.size(); ++i) c[i * f] = coeffs_[i];
    }
    return PuiseuxSeries(n, first_ * f, hk_ * f, std::move(c));
  }

  /// Smallest ramification index representing the same data.
  PuiseuxSeries reduced() const {
    std::int64_t g = hk_;
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
      if (coeffs_[i] != 0) g = std::gcd(g, first_ + static_cast<std::int64_t>(i));
    std::int64_t n = std::gcd(static_cast<std::int64_t>(ram_), g);
    if (n <= 1) return *this;
    std::map<std::int64_t, Rational> idx;
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
      if (coeffs_[i] != 0) idx[(first_ + static_cast<std::int64_t>(i)) / n] = coeffs_[i];
    return from_index_map(static_cast<int>(ram_ / n), hk_ / n, idx);
  }

  PuiseuxSeries truncated(const Rational& horizon) const {
    if (horizon >= this->horizon()) return *this;
    std::map<Rational, Rational> t;
    for (auto& [e, c] : terms())
      if (e < horizon) t.emplace(e, c);
    return from_terms(t, horizon, ram_);
  }

  /// Exact multiplication by q^e.
  PuiseuxSeries shifted(const Rational& e) const {
    int n = std::lcm(ram_, den_int(e));
    PuiseuxSeries l = lifted(n);
    std::int64_t s = index_of(e, n);
    l.first_ += s;
    l.hk_ += s;
    return l;
  }

  /// q -> -q. Only defined when every exponent (and the horizon) is integral.
  PuiseuxSeries sign_twisted() const {
    PuiseuxSeries r = reduced();
    if (r.ram_ != 1) throw Error(Errc::invalid_argument, "q -> -q needs integral exponents");
    for (std::size_t i = 0; i < r.coeffs_.size(); ++i)
      if ((r.first_ + static_cast<std::int64_t>(i)) % 2 != 0) r.coeffs_[i] = -r.coeffs_[i];
    return r;
  }

  /// q -> q^m for a positive integer m.
  PuiseuxSeries power_substituted(int m) const {
    if (m <= 0) throw Error(Errc::invalid_argument, "q -> q^m needs m > 0");
    std::map<std::int64_t, Rational> idx;
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
      if (coeffs_[i] != 0) idx[(first_ + static_cast<std::int64_t>(i)) * m] = coeffs_[i];
    return from_index_map(ram_, hk_ * m, idx);
  }

  PuiseuxSeries operator-() const {
    PuiseuxSeries r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
  }

  friend PuiseuxSeries operator+(const PuiseuxSeries& a, const PuiseuxSeries& b) { return combine(a, b, 1); }
  friend PuiseuxSeries operator-(const PuiseuxSeries& a, const PuiseuxSeries& b) { return combine(a, b, -1); }

  friend PuiseuxSeries operator*(const PuiseuxSeries& a, const Rational& k) {
    if (k == 0) return zero(a.horizon(), a.ram_);
    PuiseuxSeries r = a;
    for (auto& c : r.coeffs_) c *= k;
    return r;
  }
  friend PuiseuxSeries operator*(const Rational& k, const PuiseuxSeries& a) { return a * k; }

  friend PuiseuxSeries operator+(const PuiseuxSeries& a, const Rational& k) {
    return a + constant(k, a.horizon());
  }
  friend PuiseuxSeries operator-(const PuiseuxSeries& a, const Rational& k) {
    return a - constant(k, a.horizon());
  }
  friend PuiseuxSeries operator+(const Rational& k, const PuiseuxSeries& a) { return a + k; }
  friend PuiseuxSeries operator-(const Rational& k, const PuiseuxSeries& a) { return -a + k; }

  /// Cauchy product truncated at min(v(a) + horizon(b), v(b) + horizon(a)).
  friend PuiseuxSeries operator*(const PuiseuxSeries& x, const PuiseuxSeries& y) {
    int n = std::lcm(x.ram_, y.ram_);
    PuiseuxSeries a = x.lifted(n), b = y.lifted(n);
    std::int64_t low_a = a.coeffs_.empty() ? a.hk_ : a.first_;
    std::int64_t low_b = b.coeffs_.empty() ? b.hk_ : b.first_;
    std::int64_t hk = std::min(low_a + b.hk_, low_b + a.hk_);
    if (a.coeffs_.empty() || b.coeffs_.empty()) return PuiseuxSeries(n, hk, hk, {});
    std::int64_t first = a.first_ + b.first_;
    std::int64_t len = std::min<std::int64_t>(
        hk - first, static_cast<std::int64_t>(a.coeffs_.size() + b.coeffs_.size() - 1));
    std::vector<Rational> c(static_cast<std::size_t>(std::max<std::int64_t>(len, 0)), Rational(0));
    for (std::size_t i = 0; i < a.coeffs_.size() && static_cast<std::int64_t>(i) < len; ++i) {
      if (a.coeffs_[i] == 0) continue;
      std::size_t jmax = std::min(b.coeffs_.size(), static_cast<std::size_t>(len) - i);
      for (std::size_t j = 0; j < jmax; ++j)
        if (b.coeffs_[j] != 0) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return PuiseuxSeries(n, first, hk, std::move(c));
  }

  /// Multiplicative inverse; the relative precision (horizon - valuation) is kept.
  PuiseuxSeries inverse() const {
    if (coeffs_.empty())
      throw Error(Errc::insufficient_precision, "cannot invert a zero truncation (horizon " + horizon().get_str() + ")");
    std::int64_t prec = hk_ - first_;
    std::vector<Rational> b(static_cast<std::size_t>(prec), Rational(0));
    Rational inv0 = 1 / coeffs_[0];
    b[0] = inv0;
    for (std::int64_t k = 1; k < prec; ++k) {
      Rational acc = 0;
      std::int64_t imax = std::min<std::int64_t>(k, static_cast<std::int64_t>(coeffs_.size()) - 1);
      for (std::int64_t i = 1; i <= imax; ++i)
        if (coeffs_[static_cast<std::size_t>(i)] != 0)
          acc += coeffs_[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(k - i)];
      b[static_cast<std::size_t>(k)] = -acc * inv0;
    }
    return PuiseuxSeries(ram_, -first_, -first_ + prec, std::move(b));
  }

  friend PuiseuxSeries operator/(const PuiseuxSeries& a, const PuiseuxSeries& b) { return a * b.inverse(); }
  friend PuiseuxSeries operator/(const PuiseuxSeries& a, const Rational& k) { return a * (1 / k); }

  /// Square root with positive principal coefficient. The ramification is
  /// doubled when the valuation is not an even multiple of 1/ram.
  PuiseuxSeries sqrt() const {
    if (coeffs_.empty())
      throw Error(Errc::insufficient_precision, "square root of a zero truncation");
    Rational s0;
    if (!rational_sqrt(coeffs_[0], s0))
      throw Error(Errc::not_a_square, "principal coefficient " + coeffs_[0].get_str() + " is not a rational square");
    PuiseuxSeries a = (first_ % 2 == 0) ? *this : lifted(2 * ram_);
    std::int64_t prec = a.hk_ - a.first_;
    std::vector<Rational> s(static_cast<std::size_t>(prec), Rational(0));
    s[0] = s0;
    Rational inv2s0 = 1 / (2 * s0);
    for (std::int64_t k = 1; k < prec; ++k) {
      Rational acc = k < static_cast<std::int64_t>(a.coeffs_.size()) ? a.coeffs_[static_cast<std::size_t>(k)] : Rational(0);
      for (std::int64_t i = 1; i < k; ++i) acc -= s[static_cast<std::size_t>(i)] * s[static_cast<std::size_t>(k - i)];
      s[static_cast<std::size_t>(k)] = acc * inv2s0;
    }
    std::int64_t first = a.first_ / 2;
    return PuiseuxSeries(a.ram_, first, first + prec, std::move(s));
  }

  /// Integer power; negative exponents go through inverse(). The relative
  /// precision (horizon - valuation) of the base is kept.
  PuiseuxSeries pow(long k) const {
    if (k < 0) return inverse().pow(-k);
    if (k == 0) {
      Rational rel = horizon() - valuation().bound();
      return constant(Rational(1), rel > 0 ? rel : Rational(1, ram_));
    }
    PuiseuxSeries result, base = *this;
    bool first = true;
    while (k > 0) {
      if (k & 1) {
        result = first ? base : result * base;
        first = false;
      }
      k >>= 1;
      if (k) base = base * base;
    }
    return result;
  }

  /// Equality of the represented data: same horizon and same coefficients.
  friend bool operator==(const PuiseuxSeries& x, const PuiseuxSeries& y) {
    int n = std::lcm(x.ram_, y.ram_);
    PuiseuxSeries a = x.lifted(n), b = y.lifted(n);
    return a.hk_ == b.hk_ && a.first_ == b.first_ && a.coeffs_ == b.coeffs_;
  }
  friend bool operator!=(const PuiseuxSeries& x, const PuiseuxSeries& y) { return !(x == y); }

  /// Agreement of every coefficient below min(horizons).
  bool agrees_with(const PuiseuxSeries& other) const {
    return (*this - other).is_zero_truncation();
  }

  /// Human-readable form, e.g. "1 - 3*q + 1/2*q^(3/2) + O(q^24)".
  std::string to_string(bool with_order = true) const {
    std::ostringstream os;
    bool first = true;
    for (auto& [e, c] : terms()) {
      Rational mag = abs(c);
      if (first) {
        if (sgn(c) < 0) os << "-";
      } else {
        os << (sgn(c) < 0 ? " - " : " + ");
      }
      first = false;
      bool unit = (mag == 1);
      if (e == 0) {
        os << mag.get_str();
        continue;
      }
      if (!unit) os << mag.get_str() << "*";
      os << "q";
      if (e != 1) {
        if (is_integer(e) && sgn(e) > 0)
          os << "^" << e.get_str();
        else
          os << "^(" << e.get_str() << ")";
      }
    }
    if (first) os << "0";
    if (with_order) {
      Rational h = horizon();
      os << " + O(q";
      if (h != 1) os << (is_integer(h) && sgn(h) > 0 ? "^" + h.get_str() : "^(" + h.get_str() + ")");
      os << ")";
    }
    return os.str();
  }

 private:
  PuiseuxSeries(int ram, std::int64_t first, std::int64_t hk, std::vector<Rational> coeffs)
      : ram_(ram), first_(first), hk_(hk), coeffs_(std::move(coeffs)) {
    normalize();
  }

  static int den_int(const Rational& r) {
    const Integer& d = r.get_den();
    if (!d.fits_sint_p()) throw Error(Errc::invalid_argument, "exponent denominator too large");
    return static_cast<int>(d.get_si());
  }

  static std::int64_t index_of(const Rational& e, int n) { return to_int64(Rational(e * n)); }

  Rational exponent_of(std::int64_t k) const {
    Rational r(k, ram_);
    r.canonicalize();
    return r;
  }

  static PuiseuxSeries from_index_map(int n, std::int64_t hk, const std::map<std::int64_t, Rational>& idx) {
    std::vector<Rational> c;
    std::int64_t first = hk;
    for (const auto& [k, v] : idx) {
      if (k >= hk || v == 0) continue;
      if (c.empty()) first = k;
      c.resize(static_cast<std::size_t>(k - first + 1), Rational(0));
      c.back() = v;
    }
    return PuiseuxSeries(n, first, hk, std::move(c));
  }

  static PuiseuxSeries combine(const PuiseuxSeries& x, const PuiseuxSeries& y, int sign) {
    int n = std::lcm(x.ram_, y.ram_);
    PuiseuxSeries a = x.lifted(n), b = y.lifted(n);
    std::int64_t hk = std::min(a.hk_, b.hk_);
    std::int64_t lo = std::min(a.coeffs_.empty() ? hk : a.first_, b.coeffs_.empty() ? hk : b.first_);
    if (lo >= hk) return PuiseuxSeries(n, hk, hk, {});
    std::vector<Rational> c(static_cast<std::size_t>(hk - lo), Rational(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      std::int64_t k = a.first_ + static_cast<std::int64_t>(i);
      if (k < hk) c[static_cast<std::size_t>(k - lo)] += a.coeffs_[i];
    }
    for (std::size_t i = 0; i < b.coeffs_.size(); ++i) {
      std::int64_t k = b.first_ + static_cast<std::int64_t>(i);
      if (k >= hk) continue;
      if (sign > 0)
        c[static_cast<std::size_t>(k - lo)] += b.coeffs_[i];
      else
        c[static_cast<std::size_t>(k - lo)] -= b.coeffs_[i];
    }
    return PuiseuxSeries(n, lo, hk, std::move(c));
  }

  void normalize() {
    if (first_ + static_cast<std::int64_t>(coeffs_.size()) > hk_)
      coeffs_.resize(static_cast<std::size_t>(std::max<std::int64_t>(hk_ - first_, 0)));
    std::size_t lead = 0;
    while (lead < coeffs_.size() && coeffs_[lead] == 0) ++lead;
    if (lead == coeffs_.size()) {
      coeffs_.clear();
      first_ = hk_;
      return;
    }
    if (lead > 0) {
      coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(lead));
      first_ += static_cast<std::int64_t>(lead);
    }
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }

  int ram_;
  std::int64_t first_;  // index of coeffs_[0], in units of 1/ram_
  std::int64_t hk_;     // horizon, in units of 1/ram_
  std::vector<Rational> coeffs_;
};

inline std::ostream& operator<<(std::ostream& os, const PuiseuxSeries& s) { return os << s.to_string(); }

// Free-function spellings of the kernel operations.

inline PuiseuxSeries ps_add(const PuiseuxSeries& a, const PuiseuxSeries& b) { return a + b; }
inline PuiseuxSeries ps_sub(const PuiseuxSeries& a, const PuiseuxSeries& b) { return a - b; }
inline PuiseuxSeries ps_neg(const PuiseuxSeries& a) { return -a; }
inline PuiseuxSeries ps_mul(const PuiseuxSeries& a, const PuiseuxSeries& b) { return a * b; }
inline PuiseuxSeries ps_scale(const PuiseuxSeries& a, const Rational& k) { return a * k; }
inline PuiseuxSeries ps_invert(const PuiseuxSeries& a) { return a.inverse(); }
inline PuiseuxSeries ps_sqrt(const PuiseuxSeries& a) { return a.sqrt(); }
inline Valuation ps_valuation(const PuiseuxSeries& a) { return a.valuation(); }
inline Rational ps_principal_coefficient(const PuiseuxSeries& a) { return a.principal_coefficient(); }

/// The series q itself, known exactly below `horizon`.
inline PuiseuxSeries q_series(const Rational& horizon) {
  return PuiseuxSeries::monomial(Rational(1), Rational(1), horizon);
}

/// prod_{n>=1} (1 + q^n), the generating function of partitions into distinct parts.
inline PuiseuxSeries euler_epsilon(const Rational& horizon = Rational(kDefaultHorizon)) {
  if (horizon < 1) throw Error(Errc::invalid_argument, "euler_epsilon needs horizon >= 1");
  std::int64_t h = to_int64(Integer(-floor_div(Rational(-horizon))));
  std::vector<Integer> c(static_cast<std::size_t>(h), Integer(0));
  c[0] = 1;
  for (std::int64_t n = 1; n < h; ++n)
    for (std::int64_t k = h - 1; k >= n; --k) c[static_cast<std::size_t>(k)] += c[static_cast<std::size_t>(k - n)];
  std::map<Rational, Rational> t;
  for (std::int64_t k = 0; k < h; ++k)
    if (Rational(k) < horizon) t.emplace(Rational(k), Rational(c[static_cast<std::size_t>(k)]));
  return PuiseuxSeries::from_terms(t, horizon);
}

/// epsilon(-q).
inline PuiseuxSeries epsilon_bar(const Rational& horizon = Rational(kDefaultHorizon)) {
  return euler_epsilon(horizon).sign_twisted();
}

}  // namespace tropedwards
