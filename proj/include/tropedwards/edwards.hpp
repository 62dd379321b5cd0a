#pragma once

// The two-parameter family f_{r,s} of plane models of the Edwards curve
// x^2 + y^2 = a^2 (1 + x^2 y^2), its coefficients and the Tate-parametrized
// points.

#include <optional>
#include <string>
#include <vector>

#include "tropedwards/bivariate.hpp"
#include "tropedwards/error.hpp"
#include "tropedwards/series.hpp"

namespace tropedwards {

struct FamilyParams {
  PuiseuxSeries r;
  PuiseuxSeries s;

  Rational horizon() const { return std::min(r.horizon(), s.horizon()); }
};

/// Checks the non-degeneracy condition eps*r != epsbar*s at truncation.
inline FamilyParams make_family(const PuiseuxSeries& r, const PuiseuxSeries& s) {
  Rational h = std::min(r.horizon(), s.horizon());
  PuiseuxSeries e = euler_epsilon(h), eb = epsilon_bar(h);
  PuiseuxSeries w = e * r - eb * s;
  if (!w.valuation().is_known())
    throw Error(Errc::degenerate_params, "eps*r - epsbar*s vanishes below horizon " + w.horizon().get_str());
  return FamilyParams{r, s};
}

struct EdwardsCoefficients {
  PuiseuxSeries d12, d34, d5, d67, d8;
  PuiseuxSeries a_squared;
};

struct TropCoefficientVector {
  Valuation u12, u34, u5, u67, u8;
};

/// a^2 = 2 eps^2 epsbar^2 / (eps^4 + epsbar^4).
inline PuiseuxSeries edwards_a_squared(const Rational& horizon = Rational(kDefaultHorizon)) {
  if (horizon < 4) throw Error(Errc::invalid_argument, "edwards_a_squared needs horizon >= 4");
  PuiseuxSeries e2 = euler_epsilon(horizon).pow(2), eb2 = epsilon_bar(horizon).pow(2);
  return (e2 * eb2 * Rational(2)) / (e2 * e2 + eb2 * eb2);
}

inline EdwardsCoefficients family_coefficients(const FamilyParams& p) {
  Rational h = p.horizon();
  PuiseuxSeries e = euler_epsilon(h), eb = epsilon_bar(h);
  const PuiseuxSeries &r = p.r, &s = p.s;
  PuiseuxSeries w = e * r - eb * s;
  if (!w.valuation().is_known())
    throw Error(Errc::degenerate_params, "eps*r - epsbar*s vanishes below horizon " + w.horizon().get_str());
  PuiseuxSeries e2 = e * e, eb2 = eb * eb;
  PuiseuxSeries e4 = e2 * e2, eb4 = eb2 * eb2;
  PuiseuxSeries eeb = e * eb;
  PuiseuxSeries r2 = r * r, s2 = s * s;
  EdwardsCoefficients c;
  c.d12 = Rational(2) * eeb * (e4 - eb4) * (eb * s - e * r);
  c.d34 = (e4 - eb4) * (eb2 * s2 - e2 * r2);
  c.d5 = Rational(8) * eeb * (e * r - eb * s) * (eb2 * eb * r - e2 * e * s);
  c.d67 = Rational(2) * (e * r - eb * s) * ((eb4 - e4) * r * s + Rational(2) * eeb * (eb2 * r2 - e2 * s2));
  c.d8 = Rational(2) * (e2 * s2 - eb2 * r2) * (eb2 * s2 - e2 * r2);
  c.a_squared = (e2 * eb2 * Rational(2)) / (e4 + eb4);
  return c;
}

inline TropCoefficientVector trop_valuations(const EdwardsCoefficients& c) {
  return {c.d12.valuation(), c.d34.valuation(), c.d5.valuation(), c.d67.valuation(), c.d8.valuation()};
}

/// f_{r,s}(xx, yy).
inline PuiseuxSeries f_eval(const EdwardsCoefficients& c, const PuiseuxSeries& x, const PuiseuxSeries& y) {
  PuiseuxSeries x2 = x * x, y2 = y * y, xy = x * y;
  return c.d12 * (x + y) + c.d34 * (x2 + y2) + c.d5 * xy + c.d67 * (x2 * y + y2 * x) + c.d8 * x2 * y2;
}

// ---------------------------------------------------------------------------
// Identity reports

struct IdentityReport {
  std::string identity;
  bool pass = false;
  std::optional<Rational> first_mismatch_exponent;
  Rational horizon;
};

/// Compares two series below the smaller horizon.
inline IdentityReport compare_series(const std::string& name, const PuiseuxSeries& a, const PuiseuxSeries& b) {
  PuiseuxSeries d = a - b;
  IdentityReport r{name, d.is_zero_truncation(), std::nullopt, d.horizon()};
  if (!r.pass) r.first_mismatch_exponent = d.valuation().value();
  return r;
}

inline IdentityReport vanishing_report(const std::string& name, const PuiseuxSeries& a) {
  return compare_series(name, a, PuiseuxSeries::zero(a.horizon(), a.ram()));
}

inline IdentityReport vanishing_report(const std::string& name, const BivariateSeries& a) {
  IdentityReport r{name, a.is_zero_truncation(), std::nullopt, a.horizon()};
  if (!r.pass) r.first_mismatch_exponent = a.q_valuation().value();
  return r;
}

/// The standard j-function 1/z + 744 + 196884 z + ... as E4^3 / Delta, known
/// below `z_horizon` - 2.
inline PuiseuxSeries standard_j(const Rational& z_horizon) {
  std::int64_t n_max = to_int64(Integer(-floor_div(Rational(-z_horizon))));
  std::map<Rational, Rational> e4{{Rational(0), Rational(1)}};
  for (std::int64_t n = 1; n < n_max; ++n) {
    Integer sigma3 = 0;
    for (std::int64_t d = 1; d <= n; ++d)
      if (n % d == 0) sigma3 += Integer(d) * d * d;
    e4[Rational(n)] = Rational(240 * sigma3);
  }
  PuiseuxSeries E4 = PuiseuxSeries::from_terms(e4, z_horizon);
  PuiseuxSeries prod = PuiseuxSeries::constant(Rational(1), z_horizon);
  for (std::int64_t n = 1; n < n_max; ++n)
    prod = prod * PuiseuxSeries::from_terms({{Rational(0), Rational(1)}, {Rational(n), Rational(-1)}}, z_horizon);
  PuiseuxSeries delta = prod.pow(24).shifted(Rational(1));
  return E4.pow(3) / delta;
}

/// j(E_a) = (1728/108) (a^8 + 14 a^4 + 1)^3 / (a^4 (a^4 - 1)^4) from a^2.
inline PuiseuxSeries j_of_a_squared(const PuiseuxSeries& a2) {
  PuiseuxSeries a4 = a2 * a2;
  PuiseuxSeries num = (a4 * a4 + Rational(14) * a4 + Rational(1)).pow(3);
  PuiseuxSeries den = a4 * (a4 - Rational(1)).pow(4);
  return Rational(16) * num / den;
}

/// j(E_a) against j(q^8).
inline IdentityReport j_invariant_check(const Rational& horizon = Rational(kDefaultHorizon)) {
  PuiseuxSeries j = j_of_a_squared(edwards_a_squared(horizon));
  if (j.horizon() <= 8)
    throw Error(Errc::insufficient_precision,
                "j(E_a) known only below q^" + j.horizon().get_str() + "; the q^8 coefficient needs a larger horizon");
  Rational zh = floor(Rational(j.horizon() / 8)) + 3;
  PuiseuxSeries ref = standard_j(zh).power_substituted(8);
  return compare_series("j(E_a) = j(q^8)", j, ref);
}

/// d0 = 2 alpha^2 beta^2 - a^2 (alpha^4 + beta^4) at alpha = epsbar, beta = eps.
inline PuiseuxSeries d0_series(const Rational& horizon = Rational(kDefaultHorizon)) {
  PuiseuxSeries al = epsilon_bar(horizon), be = euler_epsilon(horizon);
  PuiseuxSeries al2 = al * al, be2 = be * be;
  return Rational(2) * al2 * be2 - edwards_a_squared(horizon) * (al2 * al2 + be2 * be2);
}

/// q-orders the t-degree cut at the default bound costs the shift identities.
inline constexpr int kThetaIdentitySlack = 6;

/// The four shift identities of the reduced thetas under t -> tq.
inline std::vector<IdentityReport> theta_identity_checks(const Rational& horizon = Rational(kDefaultHorizon),
                                                         int t_degree_bound = kDefaultTDegreeBound) {
  BivariateSeries th[5];
  for (int i = 1; i <= 4; ++i) th[i] = theta_bar(i, horizon, t_degree_bound);
  PuiseuxSeries q = PuiseuxSeries::monomial(Rational(1), Rational(1), horizon + 2 * t_degree_bound);
  auto at_tq = [&](int i) { return bv_substitute_t_scale(th[i], q); };
  return {
      vanishing_report("theta1(t) = t theta3(tq)", th[1] - at_tq(3).t_shifted(1)),
      vanishing_report("theta2(t) = t theta4(tq)", th[2] - at_tq(4).t_shifted(1)),
      vanishing_report("theta3(t) = -tq theta1(tq)", th[3] + at_tq(1).t_shifted(1).q_shifted(Rational(1))),
      vanishing_report("theta4(t) = tq theta2(tq)", th[4] - at_tq(2).t_shifted(1).q_shifted(Rational(1))),
  };
}

// ---------------------------------------------------------------------------
// Tate points

struct TatePoint {
  Rational t_exponent;  // u, with v(t) = 2u
  PuiseuxSeries t_unit;
  PuiseuxSeries x, y;    // Edwards coordinates
  PuiseuxSeries xx, yy;  // coordinates on f_{r,s} = 0
};

/// 1 + p q^(1/N), a unit avoiding the exceptional parameters.
inline PuiseuxSeries generic_unit(int n, const Rational& horizon, long p = 3) {
  return PuiseuxSeries::from_terms({{Rational(0), Rational(1)}, {make_rational(1, n), Rational(p)}}, horizon);
}

inline PuiseuxSeries checked_quotient(const PuiseuxSeries& num, const PuiseuxSeries& den, const char* what) {
  if (!den.valuation().is_known())
    throw Error(Errc::polar_point, std::string(what) + " has a vanishing denominator below q^" + den.horizon().get_str());
  return num / den;
}

/// The point t = unit * q^(2u) of K^x / <+-q^(4Z)>, mapped to E_a and then
/// to f_{r,s} = 0. Every coordinate carries its own propagated horizon.
inline TatePoint tate_point(const Rational& u, const PuiseuxSeries& unit, const FamilyParams& p,
                            std::optional<Rational> horizon = std::nullopt) {
  Valuation vu = unit.valuation();
  if (!vu.is_known() || vu.value() != 0) throw Error(Errc::invalid_argument, "t_unit must have valuation 0");
  Rational h = horizon.value_or(p.horizon());
  PuiseuxSeries t = unit.shifted(Rational(2 * u));
  PuiseuxSeries th1 = theta_bar_at(1, t, h), th2 = theta_bar_at(2, t, h);
  PuiseuxSeries th3 = theta_bar_at(3, t, h), th4 = theta_bar_at(4, t, h);
  TatePoint pt{u, unit, -checked_quotient(th1, th2, "x(t)"), checked_quotient(th3, th4, "y(t)"), {}, {}};
  PuiseuxSeries e = euler_epsilon(h), eb = epsilon_bar(h);
  pt.xx = checked_quotient(e * pt.x - eb, p.r - p.s * pt.x, "xx(t)");
  pt.yy = checked_quotient(e * pt.y - eb, p.r - p.s * pt.y, "yy(t)");
  return pt;
}

/// x^2 + y^2 - a^2 (1 + x^2 y^2) at a Tate point.
inline PuiseuxSeries edwards_residual(const TatePoint& pt, const PuiseuxSeries& a2) {
  PuiseuxSeries x2 = pt.x * pt.x, y2 = pt.y * pt.y;
  return x2 + y2 - a2 * (Rational(1) + x2 * y2);
}

}  // namespace tropedwards
