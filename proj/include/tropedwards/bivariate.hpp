#pragma once

// Truncated series in q^(1/N) whose coefficients are Laurent polynomials in t.
//
// A series is either full (every term with q-exponent below the horizon is
// stored, whatever its t-degree) or windowed to a t-degree range [lo, hi]
// (only the terms with lo <= deg <= hi are known). Products and log
// derivatives need full operands; scaling t by a series produces a window.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tropedwards/error.hpp"
#include "tropedwards/rational.hpp"
#include "tropedwards/series.hpp"

namespace tropedwards {

inline constexpr int kDefaultTDegreeBound = 10;

using Laurent = std::map<int, Rational>;  // t-degree -> coefficient, no zeros

class BivariateSeries {
 public:
  using Window = std::pair<int, int>;

  BivariateSeries() : ram_(1), hk_(kDefaultHorizon) {}

  static BivariateSeries zero(const Rational& horizon, int ram = 1) {
    BivariateSeries b;
    b.ram_ = std::lcm(ram, static_cast<int>(horizon.get_den().get_si()));
    b.hk_ = to_int64(Rational(horizon * b.ram_));
    return b;
  }

  /// A t-free series viewed as a bivariate one.
  static BivariateSeries from_series(const PuiseuxSeries& s) {
    BivariateSeries b = zero(s.horizon(), s.ram());
    for (auto& [e, c] : s.terms()) b.data_[b.index(e)][0] = c;
    return b;
  }

  /// c * q^e * t^k, known below `horizon`.
  static BivariateSeries monomial(const Rational& c, const Rational& e, int k, const Rational& horizon) {
    BivariateSeries b = zero(horizon, static_cast<int>(e.get_den().get_si()));
    if (e < horizon && c != 0) b.data_[b.index(e)][k] = c;
    return b;
  }

  int ram() const noexcept { return ram_; }
  Rational horizon() const { return exponent_of(hk_); }
  const std::optional<Window>& window() const noexcept { return window_; }
  bool is_full() const noexcept { return !window_.has_value(); }
  bool is_zero_truncation() const noexcept { return data_.empty(); }

  /// Lowest q-exponent with a nonzero coefficient, or AtLeast(horizon).
  Valuation q_valuation() const {
    if (data_.empty()) return Valuation::at_least(horizon());
    return Valuation::known(exponent_of(data_.begin()->first));
  }

  Laurent coefficient(const Rational& e) const {
    if (e >= horizon())
      throw Error(Errc::insufficient_precision, "q-coefficient " + e.get_str() + " beyond horizon " + horizon().get_str());
    Rational k = e * ram_;
    if (!is_integer(k)) return {};
    auto it = data_.find(to_int64(k));
    return it == data_.end() ? Laurent{} : it->second;
  }

  /// (q-exponent, Laurent coefficient) pairs in increasing exponent order.
  std::vector<std::pair<Rational, Laurent>> terms() const {
    std::vector<std::pair<Rational, Laurent>> out;
    for (auto& [k, l] : data_) out.emplace_back(exponent_of(k), l);
    return out;
  }

  /// Coefficient of t^k as a univariate series.
  PuiseuxSeries t_coefficient(int k) const {
    if (window_ && (k < window_->first || k > window_->second))
      throw Error(Errc::insufficient_precision, "t-degree outside the known window");
    std::map<Rational, Rational> m;
    for (auto& [qi, l] : data_) {
      auto it = l.find(k);
      if (it != l.end()) m.emplace(exponent_of(qi), it->second);
    }
    return PuiseuxSeries::from_terms(m, horizon(), ram_);
  }

  BivariateSeries lifted(int n) const {
    if (n % ram_ != 0) throw Error(Errc::invalid_argument, "ramification lift must be a multiple");
    if (n == ram_) return *this;
    BivariateSeries b = *this;
    int f = n / ram_;
    b.ram_ = n;
    b.hk_ = hk_ * f;
    b.data_.clear();
    for (auto& [k, l] : data_) b.data_[k * f] = l;
    return b;
  }

  /// Restriction to the t-degree range [lo, hi].
  BivariateSeries windowed(int lo, int hi) const {
    BivariateSeries b = *this;
    if (window_) {
      lo = std::max(lo, window_->first);
      hi = std::min(hi, window_->second);
    }
    b.window_ = Window{lo, hi};
    for (auto& [k, l] : b.data_)
      for (auto it = l.begin(); it != l.end();) it = (it->first < lo || it->first > hi) ? l.erase(it) : std::next(it);
    b.prune();
    return b;
  }

  BivariateSeries truncated(const Rational& horizon) const {
    if (horizon >= this->horizon()) return *this;
    BivariateSeries b = *this;
    int n = std::lcm(ram_, static_cast<int>(horizon.get_den().get_si()));
    b = b.lifted(n);
    b.hk_ = to_int64(Rational(horizon * n));
    b.data_.erase(b.data_.lower_bound(b.hk_), b.data_.end());
    return b;
  }

  BivariateSeries operator-() const {
    BivariateSeries b = *this;
    for (auto& [k, l] : b.data_)
      for (auto& [d, c] : l) c = -c;
    return b;
  }

  friend BivariateSeries operator+(const BivariateSeries& a, const BivariateSeries& b) { return combine(a, b, 1); }
  friend BivariateSeries operator-(const BivariateSeries& a, const BivariateSeries& b) { return combine(a, b, -1); }

  friend BivariateSeries operator*(const BivariateSeries& a, const Rational& k) {
    BivariateSeries b = a;
    for (auto& [i, l] : b.data_)
      for (auto& [d, c] : l) c *= k;
    b.prune();
    return b;
  }

  /// Multiplication by t^k (exact, shifts the window).
  BivariateSeries t_shifted(int k) const {
    BivariateSeries b = *this;
    b.data_.clear();
    for (auto& [i, l] : data_)
      for (auto& [d, c] : l) b.data_[i][d + k] = c;
    if (window_) b.window_ = Window{window_->first + k, window_->second + k};
    return b;
  }

  /// Multiplication by q^e (exact).
  BivariateSeries q_shifted(const Rational& e) const {
    int n = std::lcm(ram_, static_cast<int>(e.get_den().get_si()));
    BivariateSeries a = lifted(n), b = a;
    std::int64_t s = to_int64(Rational(e * n));
    b.data_.clear();
    for (auto& [i, l] : a.data_) b.data_[i + s] = l;
    b.hk_ = a.hk_ + s;
    return b;
  }

  /// Multiplication by a t-free series; keeps any window.
  friend BivariateSeries operator*(const PuiseuxSeries& s, const BivariateSeries& a) {
    int n = std::lcm(s.ram(), a.ram_);
    BivariateSeries x = a.lifted(n);
    PuiseuxSeries y = s.lifted(n);
    std::int64_t low_x = x.data_.empty() ? x.hk_ : x.data_.begin()->first;
    Valuation vy = y.valuation();
    std::int64_t low_y = to_int64(Rational(vy.bound() * n));
    std::int64_t hy = to_int64(Rational(y.horizon() * n));
    BivariateSeries r;
    r.ram_ = n;
    r.hk_ = std::min(low_x + hy, low_y + x.hk_);
    r.window_ = x.window_;
    for (auto& [e, c] : y.terms()) {
      std::int64_t j = to_int64(Rational(e * n));
      for (auto& [i, l] : x.data_) {
        if (i + j >= r.hk_) break;
        Laurent& dst = r.data_[i + j];
        for (auto& [d, v] : l) dst[d] += c * v;
      }
    }
    r.prune();
    return r;
  }
  friend BivariateSeries operator*(const BivariateSeries& a, const PuiseuxSeries& s) { return s * a; }

  friend BivariateSeries operator*(const BivariateSeries& x0, const BivariateSeries& y0) {
    if (!x0.is_full() || !y0.is_full())
      throw Error(Errc::invalid_argument, "product of t-windowed bivariate series is not determined");
    int n = std::lcm(x0.ram_, y0.ram_);
    BivariateSeries x = x0.lifted(n), y = y0.lifted(n);
    std::int64_t low_x = x.data_.empty() ? x.hk_ : x.data_.begin()->first;
    std::int64_t low_y = y.data_.empty() ? y.hk_ : y.data_.begin()->first;
    BivariateSeries r;
    r.ram_ = n;
    r.hk_ = std::min(low_x + y.hk_, low_y + x.hk_);
    for (auto& [i, li] : x.data_) {
      for (auto& [j, lj] : y.data_) {
        if (i + j >= r.hk_) break;
        Laurent& dst = r.data_[i + j];
        for (auto& [di, ci] : li)
          for (auto& [dj, cj] : lj) dst[di + dj] += ci * cj;
      }
    }
    r.prune();
    return r;
  }

  /// d/dt, exact.
  BivariateSeries t_derivative() const {
    BivariateSeries b = *this;
    b.data_.clear();
    for (auto& [i, l] : data_)
      for (auto& [d, c] : l)
        if (d != 0) b.data_[i][d - 1] = c * d;
    if (window_) b.window_ = Window{window_->first - 1, window_->second - 1};
    b.prune();
    return b;
  }

  /// Multiplicative inverse of a full series whose lowest q-coefficient is a
  /// single monomial c*t^m. Relative q-precision is preserved.
  BivariateSeries inverse() const {
    if (!is_full()) throw Error(Errc::invalid_argument, "inverse of a t-windowed series");
    if (data_.empty()) throw Error(Errc::insufficient_precision, "inverse of a zero truncation");
    auto lead = data_.begin();
    if (lead->second.size() != 1)
      throw Error(Errc::insufficient_precision, "leading q-coefficient is not a monomial in t");
    std::int64_t e0 = lead->first;
    int m = lead->second.begin()->first;
    Rational c = lead->second.begin()->second;
    std::int64_t prec = hk_ - e0;
    // a = c t^m q^e0 (1 + R), R has positive q-exponents
    std::map<std::int64_t, Laurent> rest;
    for (auto it = std::next(lead); it != data_.end(); ++it) {
      Laurent& dst = rest[it->first - e0];
      for (auto& [d, v] : it->second) dst[d - m] = v / c;
    }
    // 1/(1+R) = 1 - R + R^2 - ..., truncated at prec
    std::map<std::int64_t, Laurent> acc{{0, Laurent{{0, Rational(1)}}}};
    std::map<std::int64_t, Laurent> power{{0, Laurent{{0, Rational(1)}}}};
    for (int sign = -1;; sign = -sign) {
      std::map<std::int64_t, Laurent> next;
      for (auto& [i, li] : power)
        for (auto& [j, lj] : rest) {
          if (i + j >= prec) break;
          Laurent& dst = next[i + j];
          for (auto& [di, ci] : li)
            for (auto& [dj, cj] : lj) dst[di + dj] += ci * cj;
        }
      strip(next);
      if (next.empty()) break;
      for (auto& [i, l] : next)
        for (auto& [d, v] : l) acc[i][d] += sign * v;
      power = std::move(next);
    }
    strip(acc);
    BivariateSeries r;
    r.ram_ = ram_;
    r.hk_ = -e0 + prec;
    Rational ic = 1 / c;
    for (auto& [i, l] : acc)
      for (auto& [d, v] : l) r.data_[i - e0][d - m] = v * ic;
    r.prune();
    return r;
  }

  friend bool operator==(const BivariateSeries& x, const BivariateSeries& y) {
    int n = std::lcm(x.ram_, y.ram_);
    BivariateSeries a = x.lifted(n), b = y.lifted(n);
    return a.hk_ == b.hk_ && a.window_ == b.window_ && a.data_ == b.data_;
  }

  /// Agreement below the smaller horizon, on the common t-window.
  bool agrees_with(const BivariateSeries& other) const { return (*this - other).is_zero_truncation(); }

  std::string to_string() const {
    std::ostringstream os;
    bool first = true;
    for (auto& [e, l] : terms()) {
      if (!first) os << " + ";
      first = false;
      os << "(";
      bool f2 = true;
      for (auto& [d, c] : l) {
        if (!f2) os << (sgn(c) < 0 ? " - " : " + ");
        else if (sgn(c) < 0) os << "-";
        f2 = false;
        os << Rational(abs(c)).get_str();
        if (d != 0) os << "*t^" << d;
      }
      os << ")*q^(" << e.get_str() << ")";
    }
    if (first) os << "0";
    os << " + O(q^(" << horizon().get_str() << "))";
    return os.str();
  }

 private:
  friend BivariateSeries bv_substitute_t_scale(const BivariateSeries&, const PuiseuxSeries&);

  std::int64_t index(const Rational& e) const { return to_int64(Rational(e * ram_)); }

  Rational exponent_of(std::int64_t k) const {
    Rational r(k, ram_);
    r.canonicalize();
    return r;
  }

  static void strip(std::map<std::int64_t, Laurent>& m) {
    for (auto it = m.begin(); it != m.end();) {
      for (auto jt = it->second.begin(); jt != it->second.end();) jt = jt->second == 0 ? it->second.erase(jt) : std::next(jt);
      it = it->second.empty() ? m.erase(it) : std::next(it);
    }
  }

  void prune() {
    data_.erase(data_.lower_bound(hk_), data_.end());
    strip(data_);
  }

  static BivariateSeries combine(const BivariateSeries& x0, const BivariateSeries& y0, int sign) {
    int n = std::lcm(x0.ram_, y0.ram_);
    BivariateSeries x = x0.lifted(n), y = y0.lifted(n);
    BivariateSeries r;
    r.ram_ = n;
    r.hk_ = std::min(x.hk_, y.hk_);
    if (x.window_ || y.window_) {
      int lo = std::max(x.window_ ? x.window_->first : INT32_MIN, y.window_ ? y.window_->first : INT32_MIN);
      int hi = std::min(x.window_ ? x.window_->second : INT32_MAX, y.window_ ? y.window_->second : INT32_MAX);
      r.window_ = Window{lo, hi};
    }
    auto inside = [&](int d) { return !r.window_ || (d >= r.window_->first && d <= r.window_->second); };
    for (auto& [i, l] : x.data_)
      for (auto& [d, c] : l)
        if (inside(d)) r.data_[i][d] += c;
    for (auto& [i, l] : y.data_)
      for (auto& [d, c] : l)
        if (inside(d)) r.data_[i][d] += sign * c;
    r.prune();
    return r;
  }

  int ram_;
  std::int64_t hk_;
  std::optional<Window> window_;
  std::map<std::int64_t, Laurent> data_;
};

inline BivariateSeries bv_mul(const BivariateSeries& a, const BivariateSeries& b) { return a * b; }

/// t -> c*t. Every unknown term (q-exponent >= horizon, degree k in the known
/// window) moves to exponent >= horizon + k*v(c), so the result is windowed
/// to the input window (default: the stored degree range) and its horizon is
/// lowered accordingly.
inline BivariateSeries bv_substitute_t_scale(const BivariateSeries& a, const PuiseuxSeries& c) {
  Valuation vc = c.valuation();
  if (!vc.is_known()) throw Error(Errc::insufficient_precision, "scale factor is a zero truncation");
  int lo = 0, hi = 0;
  if (a.window_) {
    lo = a.window_->first;
    hi = a.window_->second;
  } else if (!a.data_.empty()) {
    lo = INT32_MAX;
    hi = INT32_MIN;
    for (auto& [i, l] : a.data_) {
      lo = std::min(lo, l.begin()->first);
      hi = std::max(hi, l.rbegin()->first);
    }
  }
  const Rational& v = vc.value();
  Rational horizon = a.horizon() + std::min(v * lo, v * hi);
  Rational rel = c.horizon() - v;  // relative precision of c and its powers
  std::map<int, PuiseuxSeries> powers;
  auto power = [&](int k) -> const PuiseuxSeries& {
    auto it = powers.find(k);
    if (it == powers.end()) it = powers.emplace(k, c.pow(k)).first;
    return it->second;
  };
  for (auto& [i, l] : a.data_)
    for (auto& [d, x] : l) horizon = std::min(horizon, Rational(a.exponent_of(i) + v * d + rel));
  int n = std::lcm(a.ram_, c.ram());
  n = std::lcm(n, static_cast<int>(horizon.get_den().get_si()));
  BivariateSeries r = BivariateSeries::zero(horizon, n);
  r.window_ = BivariateSeries::Window{lo, hi};
  for (auto& [i, l] : a.data_)
    for (auto& [d, x] : l) {
      Rational e = a.exponent_of(i);
      if (e + v * d >= horizon) continue;
      for (auto& [pe, pc] : power(d).terms()) {
        Rational ee = e + pe;
        if (ee >= horizon) break;
        r.data_[to_int64(Rational(ee * r.ram_))][d] += x * pc;
      }
    }
  r.prune();
  return r;
}

/// (d/dt a) / a.
inline BivariateSeries bv_log_derivative_t(const BivariateSeries& a) {
  return a.t_derivative() * a.inverse();
}

/// The reduced theta series of index 1..4 (the Jacobi thetas at nome -q^2
/// with fragment factors removed). Terms whose t-degree exceeds the bound
/// but whose q-exponent is below the horizon force the horizon down, so the
/// result is always full.
inline BivariateSeries theta_bar(int index, const Rational& q_horizon = Rational(kDefaultHorizon),
                                 int t_degree_bound = kDefaultTDegreeBound) {
  if (index < 1 || index > 4) throw Error(Errc::invalid_argument, "theta index must be 1..4");
  if (sgn(q_horizon) <= 0 || t_degree_bound <= 0) throw Error(Errc::invalid_argument, "bounds must be positive");
  bool odd_part = index <= 2;
  bool alternating = index == 1 || index == 3;
  long reach = to_int64(floor_div(q_horizon)) + 2;
  Rational horizon = q_horizon;
  for (long m = -reach; m <= reach; ++m) {
    long e = odd_part ? 2 * m * m + 2 * m : 2 * m * m;
    long deg = 2 * m + (odd_part ? 1 : 0);
    if (std::labs(deg) > t_degree_bound && Rational(e) < horizon) horizon = Rational(e);
  }
  BivariateSeries b = BivariateSeries::zero(horizon);
  for (long m = -reach; m <= reach; ++m) {
    long e = odd_part ? 2 * m * m + 2 * m : 2 * m * m;
    long deg = 2 * m + (odd_part ? 1 : 0);
    if (Rational(e) >= horizon) continue;
    Rational c = (alternating && (m % 2 != 0)) ? Rational(-1) : Rational(1);
    b = b + BivariateSeries::monomial(c, Rational(e), static_cast<int>(deg), horizon);
  }
  return b;
}

/// theta_bar(index) evaluated at t = unit * q^(2u), as a univariate series.
inline PuiseuxSeries theta_bar_at(int index, const PuiseuxSeries& t, const Rational& horizon) {
  if (index < 1 || index > 4) throw Error(Errc::invalid_argument, "theta index must be 1..4");
  Valuation vt = t.valuation();
  if (!vt.is_known()) throw Error(Errc::insufficient_precision, "t is a zero truncation");
  const Rational& w = vt.value();
  bool odd_part = index <= 2;
  bool alternating = index == 1 || index == 3;
  PuiseuxSeries tinv = t.inverse();
  PuiseuxSeries sum = PuiseuxSeries::zero(horizon, t.ram());
  // term valuation: e(m) + deg(m) * w, a convex quadratic in m
  auto val = [&](long m) {
    long e = odd_part ? 2 * m * m + 2 * m : 2 * m * m;
    long deg = 2 * m + (odd_part ? 1 : 0);
    return Rational(Rational(e) + w * deg);
  };
  long centre = to_int64(floor_div(-w / 2));
  long lo = centre, hi = centre;
  while (val(lo - 1) < horizon || val(lo) < horizon) --lo;
  while (val(hi + 1) < horizon || val(hi) < horizon) ++hi;
  for (long m = lo; m <= hi; ++m) {
    Rational v = val(m);
    if (v >= horizon) continue;
    long e = odd_part ? 2 * m * m + 2 * m : 2 * m * m;
    long deg = 2 * m + (odd_part ? 1 : 0);
    PuiseuxSeries tp = deg >= 0 ? t.pow(deg) : tinv.pow(-deg);
    PuiseuxSeries term = tp.shifted(Rational(e));
    if (alternating && (m % 2 != 0)) term = -term;
    sum = sum + term;
  }
  return sum.truncated(horizon);
}

}  // namespace tropedwards
