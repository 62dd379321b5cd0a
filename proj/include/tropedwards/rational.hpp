#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "tropedwards/error.hpp"

namespace tropedwards {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw Error(Errc::invalid_argument, "zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Integer floor_div(const Rational& x) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

inline Rational floor(const Rational& x) { return Rational(floor_div(x)); }

inline bool is_integer(const Rational& x) { return x.get_den() == 1; }

inline Integer lcm(const Integer& a, const Integer& b) {
  Integer r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Integer gcd(const Integer& a, const Integer& b) {
  Integer r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline std::int64_t to_int64(const Integer& z) {
  if (!z.fits_slong_p()) throw Error(Errc::invalid_argument, "integer out of range: " + z.get_str());
  return z.get_si();
}

inline std::int64_t to_int64(const Rational& x) {
  if (!is_integer(x)) throw Error(Errc::invalid_argument, "not an integer: " + x.get_str());
  return to_int64(x.get_num());
}

/// Rational square root when it exists in Q.
inline bool rational_sqrt(const Rational& x, Rational& out) {
  if (sgn(x) < 0) return false;
  if (!mpz_perfect_square_p(x.get_num_mpz_t()) || !mpz_perfect_square_p(x.get_den_mpz_t()))
    return false;
  Integer n, d;
  mpz_sqrt(n.get_mpz_t(), x.get_num_mpz_t());
  mpz_sqrt(d.get_mpz_t(), x.get_den_mpz_t());
  out = Rational(n, d);
  out.canonicalize();
  return true;
}

inline std::string to_string(const Rational& x) { return x.get_str(); }

}  // namespace tropedwards
