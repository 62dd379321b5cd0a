#include <gtest/gtest.h>

#include <random>

#include "tropedwards/series.hpp"

using namespace tropedwards;

namespace {

PuiseuxSeries poly(std::initializer_list<std::pair<Rational, Rational>> terms, long horizon = 24) {
  std::map<Rational, Rational> m;
  for (auto& [e, c] : terms) m[e] += c;
  return PuiseuxSeries::from_terms(m, Rational(horizon));
}

Rational R(long n, long d = 1) { return make_rational(n, d); }

// number of partitions of n into distinct parts, by enumeration
long distinct_partitions(long n, long max_part) {
  if (n == 0) return 1;
  long count = 0;
  for (long p = std::min(n, max_part); p >= 1; --p) count += distinct_partitions(n - p, p - 1);
  return count;
}

}  // namespace

TEST(Series, AddCancels) {
  auto a = poly({{R(0), R(1)}, {R(1), R(1)}});
  auto b = poly({{R(0), R(-1)}, {R(1), R(1)}});
  EXPECT_EQ(a + b, poly({{R(1), R(2)}}));
  EXPECT_EQ(a + PuiseuxSeries::zero(R(24)), a);
}

TEST(Series, AddHorizonIsMinimum) {
  auto a = PuiseuxSeries::from_terms({{R(0), R(1)}}, R(5));
  auto b = PuiseuxSeries::from_terms({{R(1), R(1)}}, R(7, 2));
  EXPECT_EQ((a + b).horizon(), R(7, 2));
}

TEST(Series, EpsilonPlusEpsilonBar) {
  auto s = euler_epsilon(R(12)) + epsilon_bar(R(12));
  EXPECT_EQ(s.coefficient(R(0)), 2);
  EXPECT_EQ(s.coefficient(R(1)), 0);
  EXPECT_EQ(s.coefficient(R(2)), 2);
  EXPECT_EQ(s.coefficient(R(3)), 0);
}

TEST(Series, Products) {
  auto a = poly({{R(0), R(1)}, {R(1), R(1)}});
  auto b = poly({{R(0), R(1)}, {R(1), R(-1)}});
  EXPECT_EQ(a * b, poly({{R(0), R(1)}, {R(2), R(-1)}}));
  auto h = poly({{R(1, 2), R(1)}});
  auto p = h * h;
  EXPECT_EQ(p.valuation(), Valuation::known(R(1)));
  EXPECT_EQ(p.horizon(), R(49, 2));
  EXPECT_EQ(p.truncated(R(24)).reduced().ram(), 1);
}

TEST(Series, MulHorizonRule) {
  auto a = PuiseuxSeries::from_terms({{R(2), R(1)}}, R(10));
  auto b = PuiseuxSeries::from_terms({{R(1), R(3)}}, R(6));
  EXPECT_EQ((a * b).horizon(), R(8));
}

TEST(Series, EpsilonTimesEpsilonBarMatchesConvolution) {
  const long H = 20;
  auto e = euler_epsilon(R(H)), eb = epsilon_bar(R(H));
  auto prod = e * eb;
  for (long n = 0; n < H; ++n) {
    Integer acc = 0;
    for (long i = 0; i <= n; ++i) {
      long sign = ((n - i) % 2 == 0) ? 1 : -1;
      acc += distinct_partitions(i, i) * distinct_partitions(n - i, n - i) * sign;
    }
    EXPECT_EQ(prod.coefficient(R(n)), Rational(acc)) << "n=" << n;
  }
  // epsilon(q) epsilon(-q) is even in q
  for (long n = 1; n < H; n += 2) EXPECT_EQ(prod.coefficient(R(n)), 0);
}

TEST(Series, Inverse) {
  auto one = poly({{R(0), R(1)}});
  EXPECT_EQ(one.inverse(), one);
  auto g = poly({{R(0), R(1)}, {R(1), R(-1)}}, 10).inverse();
  for (long n = 0; n < 10; ++n) EXPECT_EQ(g.coefficient(R(n)), 1);
  auto x = poly({{R(1), R(2)}}).inverse();
  EXPECT_EQ(x.valuation(), Valuation::known(R(-1)));
  EXPECT_EQ(x.principal_coefficient(), R(1, 2));
  EXPECT_THROW(PuiseuxSeries::zero(R(5)).inverse(), Error);
}

TEST(Series, Sqrt) {
  auto sq = poly({{R(0), R(1)}, {R(1), R(2)}, {R(2), R(1)}});
  EXPECT_EQ(sq.sqrt(), poly({{R(0), R(1)}, {R(1), R(1)}}));
  EXPECT_EQ(poly({{R(2), R(1)}}).sqrt().valuation(), Valuation::known(R(1)));
  EXPECT_EQ(poly({{R(1), R(4)}}).sqrt().valuation(), Valuation::known(R(1, 2)));
  try {
    poly({{R(0), R(-1)}}).sqrt();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::not_a_square);
  }
}

TEST(Series, SqrtOfMinusXiInverse) {
  // xi of the square case, as fitted through q^7
  auto xi = -poly({{R(0), R(1)}, {R(1), R(2)}, {R(2), R(3)}, {R(3), R(10)}, {R(4), R(15)},
                   {R(5), R(38)}, {R(6), R(51)}, {R(7), R(162)}}, 8);
  auto xb = (-xi.inverse()).sqrt();
  std::vector<Rational> want{R(1), R(-1), R(0), R(-3), R(4), R(-10), R(55, 2), R(-153, 2)};
  ASSERT_EQ(xb.horizon(), R(8));
  for (long n = 0; n < 8; ++n) EXPECT_EQ(xb.coefficient(R(n)), want[static_cast<size_t>(n)]) << n;
}

TEST(Series, Valuations) {
  EXPECT_EQ(poly({{R(1), R(-2)}}).valuation(), Valuation::known(R(1)));
  EXPECT_EQ(poly({{R(3, 2), R(2)}}).valuation(), Valuation::known(R(3, 2)));
  EXPECT_EQ(PuiseuxSeries::zero(R(5)).valuation(), Valuation::at_least(R(5)));
  EXPECT_THROW(PuiseuxSeries::zero(R(5)).principal_coefficient(), Error);
}

TEST(Series, EpsilonCoefficients) {
  auto e = euler_epsilon(R(24));
  std::vector<long> head{1, 1, 1, 2};
  for (long n = 0; n < 4; ++n) EXPECT_EQ(e.coefficient(R(n)), head[static_cast<size_t>(n)]);
  EXPECT_EQ(e.coefficient(R(6)), 4);
  auto eb = epsilon_bar(R(24));
  std::vector<long> headb{1, -1, 1, -2};
  for (long n = 0; n < 4; ++n) EXPECT_EQ(eb.coefficient(R(n)), headb[static_cast<size_t>(n)]);
  for (long n = 0; n < 24; ++n) {
    long p = distinct_partitions(n, n);
    EXPECT_EQ(e.coefficient(R(n)), p);
    EXPECT_EQ(eb.coefficient(R(n)), n % 2 ? -p : p);
  }
}

TEST(Series, ToString) {
  EXPECT_EQ(poly({{R(0), R(1)}, {R(1), R(-3)}, {R(3, 2), R(1, 2)}}).to_string(),
            "1 - 3*q + 1/2*q^(3/2) + O(q^24)");
}
