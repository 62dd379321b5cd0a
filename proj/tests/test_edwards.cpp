#include <random>
#include <gtest/gtest.h>

#include <map>

#include "tropedwards/edwards.hpp"

using namespace tropedwards;

namespace {

Rational R(long n, long d = 1) { return make_rational(n, d); }

PuiseuxSeries ps(std::map<Rational, Rational> terms, long horizon = 24) {
  return PuiseuxSeries::from_terms(terms, R(horizon));
}

FamilyParams square_case() { return make_family(ps({{R(0), R(1)}, {R(1), R(-3)}}), ps({{R(0), R(-1)}, {R(1), R(1)}})); }
FamilyParams heptagon_case() {
  return make_family(ps({{R(0), R(1)}, {R(3, 2), R(1)}}), ps({{R(0), R(-1)}, {R(3, 2), R(1)}}));
}

// bivariate polynomials in xx, yy with series coefficients
using Poly = std::map<std::pair<int, int>, PuiseuxSeries>;

Poly pmul(const Poly& a, const Poly& b) {
  Poly out;
  for (auto& [ka, ca] : a)
    for (auto& [kb, cb] : b) {
      std::pair<int, int> k{ka.first + kb.first, ka.second + kb.second};
      auto it = out.find(k);
      if (it == out.end()) out.emplace(k, ca * cb);
      else it->second = it->second + ca * cb;
    }
  return out;
}

Poly padd(Poly a, const Poly& b, const Rational& sign) {
  for (auto& [k, c] : b) {
    auto it = a.find(k);
    if (it == a.end()) a.emplace(k, sign * c);
    else it->second = it->second + sign * c;
  }
  return a;
}

// numerator of x^2 + y^2 - a^2 (1 + x^2 y^2) after x = (r xx + epsbar)/(s xx + eps)
Poly substituted_numerator(const FamilyParams& p) {
  Rational h = p.horizon();
  auto e = euler_epsilon(h), eb = epsilon_bar(h);
  auto a2 = edwards_a_squared(h);
  Poly X1{{{1, 0}, p.r}, {{0, 0}, eb}}, X2{{{1, 0}, p.s}, {{0, 0}, e}};
  Poly Y1{{{0, 1}, p.r}, {{0, 0}, eb}}, Y2{{{0, 1}, p.s}, {{0, 0}, e}};
  Poly x1s = pmul(X1, X1), x2s = pmul(X2, X2), y1s = pmul(Y1, Y1), y2s = pmul(Y2, Y2);
  Poly n = padd(pmul(x1s, y2s), pmul(y1s, x2s), R(1));
  Poly inner = padd(pmul(x2s, y2s), pmul(x1s, y1s), R(1));
  for (auto& [k, c] : inner) c = a2 * c;
  return padd(n, inner, R(-1));
}

}  // namespace

TEST(Edwards, ASquaredHead) {
  auto a2 = edwards_a_squared(R(24));
  EXPECT_EQ(a2.coefficient(R(0)), 1);
  EXPECT_EQ(a2.coefficient(R(1)), 0);
  EXPECT_EQ(a2.coefficient(R(2)), -8);
  EXPECT_EQ(a2.coefficient(R(3)), 0);
  auto e = euler_epsilon(R(24)), eb = epsilon_bar(R(24));
  auto lhs = Rational(2) * e.pow(2) * eb.pow(2) - a2 * (e.pow(4) + eb.pow(4));
  EXPECT_TRUE(lhs.is_zero_truncation());
}

TEST(Edwards, D0Vanishes) {
  for (long h : {8, 16, 24, 32}) {
    auto d0 = d0_series(R(h));
    EXPECT_EQ(d0.valuation(), Valuation::at_least(R(h)));
  }
}

TEST(Edwards, CoefficientsMatchSubstitutedNumerator) {
  for (auto p : {square_case(), heptagon_case(),
                 make_family(ps({{R(0), R(2)}, {R(2), R(5)}}), ps({{R(1), R(-1)}, {R(3), R(7)}}))}) {
    auto c = family_coefficients(p);
    Poly n = substituted_numerator(p);
    auto e4 = euler_epsilon(p.horizon()).pow(4), eb4 = epsilon_bar(p.horizon()).pow(4);
    auto k = -(e4 + eb4);
    auto at = [&](int i, int j) {
      auto it = n.find({i, j});
      return it == n.end() ? PuiseuxSeries::zero(p.horizon()) : it->second;
    };
    EXPECT_TRUE((k * at(0, 0)).is_zero_truncation());
    EXPECT_TRUE((c.d12 - k * at(1, 0)).is_zero_truncation());
    EXPECT_TRUE((c.d12 - k * at(0, 1)).is_zero_truncation());
    EXPECT_TRUE((c.d34 - k * at(2, 0)).is_zero_truncation());
    EXPECT_TRUE((c.d34 - k * at(0, 2)).is_zero_truncation());
    EXPECT_TRUE((c.d5 - k * at(1, 1)).is_zero_truncation());
    EXPECT_TRUE((c.d67 - k * at(2, 1)).is_zero_truncation());
    EXPECT_TRUE((c.d67 - k * at(1, 2)).is_zero_truncation());
    EXPECT_TRUE((c.d8 - k * at(2, 2)).is_zero_truncation());
  }
}

TEST(Edwards, SquareCaseValuations) {
  auto u = trop_valuations(family_coefficients(square_case()));
  EXPECT_EQ(u.u12, Valuation::known(R(1)));
  EXPECT_EQ(u.u5, Valuation::known(R(0)));
  EXPECT_EQ(u.u67, Valuation::known(R(1)));
  ASSERT_TRUE(u.u34.is_known());
  EXPECT_GT(u.u34.value(), 2);
  EXPECT_EQ(u.u8, u.u34);
}

TEST(Edwards, HeptagonCaseAllKnown) {
  auto u = trop_valuations(family_coefficients(heptagon_case()));
  for (auto* v : {&u.u12, &u.u34, &u.u5, &u.u67, &u.u8}) EXPECT_TRUE(v->is_known());
}

TEST(Edwards, DegenerateRejected) {
  // eps r = epsbar s with r = epsbar, s = eps
  auto h = R(24);
  try {
    make_family(epsilon_bar(h), euler_epsilon(h));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::degenerate_params);
  }
}

TEST(Edwards, JInvariant) {
  auto rep = j_invariant_check(R(24));
  EXPECT_TRUE(rep.pass);
  auto j = j_of_a_squared(edwards_a_squared(R(24)));
  EXPECT_EQ(j.valuation(), Valuation::known(R(-8)));
  EXPECT_EQ(j.coefficient(R(-8)), 1);
  EXPECT_EQ(j.coefficient(R(0)), 744);
  EXPECT_EQ(j.coefficient(R(8)), 196884);
  for (auto& [e, c] : j.terms()) EXPECT_TRUE(is_integer(Rational(e / 8))) << e.get_str();
  EXPECT_THROW(j_invariant_check(R(12)), Error);
}

TEST(Edwards, StandardJHead) {
  auto j = standard_j(R(5));
  EXPECT_EQ(j.coefficient(R(-1)), 1);
  EXPECT_EQ(j.coefficient(R(0)), 744);
  EXPECT_EQ(j.coefficient(R(1)), 196884);
  EXPECT_EQ(j.coefficient(R(2)), 21493760);
}

TEST(Edwards, ThetaIdentities) {
  for (auto& rep : theta_identity_checks(R(24))) {
    EXPECT_TRUE(rep.pass) << rep.identity;
    EXPECT_GE(rep.horizon, R(14));
  }
}

TEST(Edwards, TatePointOnCurves) {
  auto p = square_case();
  auto c = family_coefficients(p);
  for (Rational u : {R(1, 4), R(3, 8), R(-5, 16), R(7, 4)}) {
    auto pt = tate_point(u, generic_unit(4, R(40)), p);
    auto res = edwards_residual(pt, c.a_squared);
    EXPECT_TRUE(res.is_zero_truncation()) << res.to_string();
    EXPECT_GE(res.horizon(), R(16));
    auto f = f_eval(c, pt.xx, pt.yy);
    EXPECT_TRUE(f.is_zero_truncation()) << u.get_str() << ": " << f.to_string(false);
    EXPECT_GE(f.horizon(), R(8));
  }
}

TEST(Edwards, TatePeriodicity) {
  auto p = heptagon_case();
  auto unit = generic_unit(2, R(40));
  Rational u = R(3, 8);
  auto a = tate_point(u, unit, p);
  auto minus = tate_point(u, -unit, p);
  auto shifted4 = tate_point(u + 2, unit, p);
  auto shifted1 = tate_point(u + R(1, 2), unit, p);
  EXPECT_TRUE(a.x.agrees_with(minus.x));
  EXPECT_TRUE(a.y.agrees_with(minus.y));
  EXPECT_TRUE(a.x.agrees_with(shifted4.x));
  EXPECT_TRUE(a.y.agrees_with(shifted4.y));
  EXPECT_TRUE(shifted1.x.agrees_with(a.y));
  EXPECT_TRUE(shifted1.y.agrees_with(-a.x));
  EXPECT_GE((a.x - shifted4.x).horizon(), R(10));
}

TEST(Edwards, RandomFamiliesVanishOnTatePoints) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coef(-4, 4);
  int done = 0;
  while (done < 10) {
    std::map<Rational, Rational> rt, st;
    for (int k = 0; k < 3; ++k) {
      rt[R(k)] = coef(rng);
      st[R(k)] = coef(rng);
    }
    auto r = ps(rt, 20), s = ps(st, 20);
    if (!r.valuation().is_known() || !s.valuation().is_known()) continue;
    FamilyParams p;
    try {
      p = make_family(r, s);
    } catch (const Error&) {
      continue;
    }
    auto c = family_coefficients(p);
    auto pt = tate_point(R(5, 16), generic_unit(8, R(40)), p);
    auto f = f_eval(c, pt.xx, pt.yy);
    EXPECT_TRUE(f.is_zero_truncation()) << r << " / " << s;
    ++done;
  }
}
