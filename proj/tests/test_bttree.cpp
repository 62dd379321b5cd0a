#include <gtest/gtest.h>

#include "tropedwards/bttree.hpp"

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

PuiseuxSeries poly(std::vector<long> c, long horizon) {
  std::map<Rational, Rational> m;
  for (std::size_t k = 0; k < c.size(); ++k) m[R(static_cast<long>(k))] = R(c[k]);
  return ps(m, horizon);
}

/// A zero W of sum_n c_n (-1)^n q^(2n^2 - a n) W^n by Newton iteration; the
/// zero T = -W q^-a of Delta(T = t^2).
PuiseuxSeries newton_root(const FamilyParams& p, const Rational& a, const Rational& w0, const Rational& h) {
  PuiseuxSeries even = p.r - p.s, odd = p.r + p.s;
  PuiseuxSeries W = PuiseuxSeries::constant(w0, h);
  for (int it = 0; it < 8; ++it) {
    PuiseuxSeries f = PuiseuxSeries::zero(h), df = PuiseuxSeries::zero(h);
    for (long n = -4; n <= 4; ++n) {
      PuiseuxSeries c = (n % 2 == 0 ? even : odd) * Rational(n % 2 == 0 ? 1 : -1);
      Rational e = 2 * n * n - a * n;
      PuiseuxSeries wn = n >= 0 ? W.pow(n) : W.inverse().pow(-n);
      f = f + (c * wn).shifted(e).truncated(h);
      if (n != 0) {
        PuiseuxSeries wd = n - 1 >= 0 ? W.pow(n - 1) : W.inverse().pow(1 - n);
        df = df + (c * wd * Rational(n)).shifted(e).truncated(h);
      }
    }
    W = (W - f / df).truncated(h);
  }
  return W;
}

}  // namespace

TEST(Zeros, Representatives) {
  auto zy = zero_divisor_y();
  EXPECT_EQ(zy.size(), 4u);
  EXPECT_EQ(deck_classes(zy), 2u);
  auto z = zero_divisor();
  // q * q^(-1/2) = q^(1/2) is already a zero of yy
  EXPECT_EQ(z.size(), 6u);
  EXPECT_EQ(deck_classes(z), 3u);
}

TEST(Delta, LogDerivativeHeads) {
  Laurent sq = bv_log_derivative_t(delta_series(square_case())).coefficient(R(3));
  EXPECT_EQ(sq, (Laurent{{-3, R(2)}, {1, R(-2)}}));
  BivariateSeries hl = bv_log_derivative_t(delta_series(heptagon_case()));
  EXPECT_EQ(hl.q_valuation().value(), R(7, 2));
  EXPECT_EQ(hl.coefficient(R(7, 2)), (Laurent{{-3, R(-2)}, {1, R(2)}}));
  EXPECT_EQ(hl.coefficient(R(7)), (Laurent{{-5, R(2)}, {3, R(-2)}}));
}

TEST(Fit, SquareCase) {
  PoleFit f = fit_pole_factors(delta_series(square_case()));
  EXPECT_EQ(f.first.offset, 3);
  EXPECT_EQ(f.second.offset, 5);
  EXPECT_TRUE(f.first.xi == poly({-1, -2, -3, -10, -15, -38, -51, -162}, 8)) << f.first.xi;
  EXPECT_TRUE(f.second.xi == poly({-1, 2, -1, 6, -14, 28, -84, 232}, 8)) << f.second.xi;
  EXPECT_TRUE(f.residual_known_zero);
  EXPECT_GE(f.residual_valuation, f.first.offset + f.fit_order);
}

TEST(Fit, HeptagonCaseAgainstNewton) {
  FamilyParams p = heptagon_case();
  PoleFit f = fit_pole_factors(delta_series(p));
  EXPECT_EQ(f.first.offset, R(7, 2));
  EXPECT_EQ(f.second.offset, R(9, 2));
  PuiseuxSeries w = newton_root(p, R(7, 2), R(1), R(12));
  EXPECT_TRUE(f.first.xi.agrees_with(w.inverse())) << f.first.xi << " vs " << w.inverse();
  EXPECT_TRUE(f.second.xi == poly({1, 1, 2, 5, 14, 42, 132, 428}, 8)) << f.second.xi;
  // Delta(1/T) = Delta(T) pairs the two zero orbits
  EXPECT_TRUE((f.first.xi * f.second.xi).agrees_with(PuiseuxSeries::constant(R(1), R(8))));
}

TEST(Fit, SquareCaseAgainstNewton) {
  FamilyParams p = square_case();
  PoleFit f = fit_pole_factors(delta_series(p));
  PuiseuxSeries w = newton_root(p, R(3), R(-1), R(12));
  EXPECT_TRUE(f.first.xi.agrees_with(w.inverse()));
}

TEST(Fit, Offsets) {
  BivariateSeries d = delta_series(square_case());
  PoleFit f = fit_pole_factors(d, std::pair{R(5), R(3)});
  EXPECT_EQ(f.first.offset, 5);
  EXPECT_EQ(f.second.offset, 3);
  try {
    fit_pole_factors(d, std::pair{R(2), R(6)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::offset_mismatch);
  }
  try {
    fit_pole_factors(delta_series(square_case(), R(9)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::underdetermined_fit);
  }
  // delta = 2 puts both factors at q^4
  FamilyParams pent = make_family(ps({{R(0), R(1)}, {R(2), R(1)}}), ps({{R(0), R(-1)}, {R(2), R(1)}}));
  try {
    fit_pole_factors(delta_series(pent));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::underdetermined_fit);
  }
}

TEST(Poles, SquareCase) {
  PoleFit f = fit_pole_factors(delta_series(square_case()));
  PuiseuxSeries xibar = (-f.first.xi.inverse()).sqrt(), etabar = (-f.second.xi.inverse()).sqrt();
  std::map<Rational, Rational> xb{{R(0), R(1)}, {R(1), R(-1)}, {R(3), R(-3)}, {R(4), R(4)},
                                  {R(5), R(-10)}, {R(6), R(55, 2)}, {R(7), R(-153, 2)}};
  std::map<Rational, Rational> eb{{R(0), R(1)}, {R(1), R(1)}, {R(2), R(1)}, {R(3), R(4)},
                                  {R(4), R(3)}, {R(5), R(12)}, {R(6), R(5, 2)}, {R(7), R(109, 2)}};
  EXPECT_TRUE(xibar == ps(xb, 8)) << xibar;
  EXPECT_TRUE(etabar == ps(eb, 8)) << etabar;
  auto P = pole_divisor(f);
  auto has = [&](const PuiseuxSeries& u, const Rational& e, int sign) {
    for (auto& p : P)
      if (p.exponent == e && p.sign == sign && (p.unit - u).is_zero_truncation()) return true;
    return false;
  };
  for (int sg : {1, -1}) {
    EXPECT_TRUE(has(xibar, R(5, 2), sg));
    EXPECT_TRUE(has(etabar, R(3, 2), sg));
    EXPECT_TRUE(has(xibar, R(7, 2), sg));
    EXPECT_TRUE(has(etabar, R(5, 2), sg));
  }
  // stable under -1 and q^4 inside the window
  for (auto& p : P) {
    EXPECT_TRUE(has(p.unit, p.exponent, -p.sign));
    if (p.exponent + 4 < R(15, 2)) {
      EXPECT_TRUE(has(p.unit, p.exponent + 4, p.sign));
    }
  }
}

TEST(Poles, HeptagonNeedsSquaredEnds) {
  PoleFit f = fit_pole_factors(delta_series(heptagon_case()));
  try {
    pole_divisor(f);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::not_a_square);
  }
  std::set<Rational> heights;
  for (auto& e : squared_ends(f, R(-1), R(7))) heights.insert(e.exponent);
  EXPECT_EQ(heights, (std::set<Rational>{R(-1), R(1), R(3), R(7, 2), R(9, 2), R(11, 2), R(13, 2)}));
}

TEST(CrossRatio, SquareCaseLengths) {
  PoleFit f = fit_pole_factors(delta_series(square_case()));
  PuiseuxSeries xibar = (-f.first.xi.inverse()).sqrt(), etabar = (-f.second.xi.inverse()).sqrt();
  End a = End::finite(xibar, R(-1, 2), "a"), b = End::finite(etabar, R(5, 2), "b"), c = End::finite(xibar, R(5, 2), "c");
  EXPECT_EQ(cross_ratio_length(End::zero_end(), a, b, End::infinity_end()), 3);
  EXPECT_EQ(cross_ratio_length(a, c, b, End::infinity_end()), 4);
  EXPECT_THROW(cross_ratio_length(a, a, b, c), Error);
}

TEST(Tree, SquareCase) {
  PoleFit f = fit_pole_factors(delta_series(square_case()));
  std::vector<End> ends = zero_ends();
  for (auto& e : pole_divisor(f)) ends.push_back(e);
  SpannedTree t = build_tree(ends);
  EXPECT_GT(check_tree_metric(t, 200), 0u);
  // q^(7/2) and xibar q^(7/2) share a vertical branch of length 1
  std::size_t qa = SIZE_MAX, xa = SIZE_MAX;
  for (auto& m : t.graph.ends) {
    if (m.label == "q^(7/2)") qa = m.at;
    if (m.label == "xibar*q^(7/2)") xa = m.at;
  }
  ASSERT_NE(qa, SIZE_MAX);
  EXPECT_EQ(qa, xa);
  EXPECT_FALSE(t.graph.heights[qa].has_value());
  for (auto& e : t.graph.edges)
    if (e.a == qa || e.b == qa) {
      EXPECT_EQ(e.len, 1);
    }
  EXPECT_EQ(betti_number(t.graph), 0);

  SquareQuotient sq = square_quotient(t);
  std::size_t q7 = SIZE_MAX, x7 = SIZE_MAX;
  for (auto& m : sq.tree.graph.ends) {
    if (m.label == "q^7") q7 = m.at;
    if (m.label == "xibar^2*q^7") x7 = m.at;
  }
  ASSERT_NE(q7, SIZE_MAX);
  EXPECT_EQ(q7, x7);
  PuiseuxSeries xibar = (-f.first.xi.inverse()).sqrt();
  EXPECT_EQ((PuiseuxSeries::constant(R(1), R(8)) - xibar * xibar).valuation().value(), 1);
}

TEST(Tree, HeptagonHasNoInternalEdges) {
  PoleFit f = fit_pole_factors(delta_series(heptagon_case()));
  SpannedTree t = build_tree(squared_ends(f));
  for (auto& e : t.graph.edges) {
    EXPECT_TRUE(t.graph.heights[e.a].has_value());
    EXPECT_TRUE(t.graph.heights[e.b].has_value());
  }
  check_tree_metric(t, 200);
}

TEST(Quotient, CycleAndEnds) {
  for (auto p : {square_case(), heptagon_case()}) {
    PoleFit f = fit_pole_factors(delta_series(p));
    MetricGraph g = mod_q8_quotient(build_tree(squared_ends(f)));
    EXPECT_EQ(betti_number(g), 1);
    EXPECT_EQ(*g.cycle_len, 8);
    EXPECT_EQ(canonical_form(g).cycle_length, 8);
    // one end per ray of the tropical curve
    EXPECT_EQ(g.ends.size(), 7u);
  }
}

TEST(Quotient, NeedsAFullPeriod) {
  PoleFit f = fit_pole_factors(delta_series(square_case()));
  try {
    mod_q8_quotient(build_tree(squared_ends(f, R(-1), R(5))));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::incomplete_fundamental_domain);
  }
}

TEST(Isometry, BothExamples) {
  for (auto p : {square_case(), heptagon_case()}) {
    BtResult r = bt_pipeline(p);
    EXPECT_TRUE(r.isometry.isometric) << r.isometry.graph_form.text() << " vs " << r.isometry.curve_form.text();
  }
}

TEST(Isometry, PentagonRefused) {
  FamilyParams pent = make_family(ps({{R(0), R(1)}, {R(2), R(1)}}), ps({{R(0), R(-1)}, {R(2), R(1)}}));
  try {
    bt_pipeline(pent);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::not_smooth);
  }
}

TEST(Isometry, DetectsDifferentGraphs) {
  PoleFit f = fit_pole_factors(delta_series(square_case()));
  MetricGraph g = mod_q8_quotient(build_tree(squared_ends(f)));
  auto [tc, rep] = analyse(TropPolynomial::from_values(R(1), R(2), R(0), R(3, 2), R(2)));
  IsometryReport r = compare_isometry(g, tc);
  EXPECT_FALSE(r.isometric);
  EXPECT_TRUE(r.first_discrepancy.has_value());
}
