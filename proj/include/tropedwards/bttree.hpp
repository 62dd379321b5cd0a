#pragma once

// The tropical curve as a quotient of a subtree of the Bruhat-Tits tree:
// zeros and poles of xx, yy under the theta uniformization, fitting of the
// pole factors, cross ratios, the spanned tree, its +-1 and q^8 quotients,
// and an isometry test against the tropical curve.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tropedwards/bivariate.hpp"
#include "tropedwards/edwards.hpp"
#include "tropedwards/error.hpp"
#include "tropedwards/rational.hpp"
#include "tropedwards/series.hpp"
#include "tropedwards/thetaparam.hpp"
#include "tropedwards/tropcurve.hpp"

namespace tropedwards {

inline constexpr int kDefaultFitOrder = 8;

/// q^e written the way the labels use it.
inline std::string q_power_label(const Rational& e) {
  if (e == 0) return "1";
  if (e == 1) return "q";
  if (is_integer(e)) return "q^" + e.get_str();
  return "q^(" + e.get_str() + ")";
}

struct End {
  enum class Kind { Finite, Zero, Infinity };
  Kind kind = Kind::Finite;
  int sign = 1;
  PuiseuxSeries unit;  // valuation 0, positive principal coefficient
  Rational exponent;
  std::string label;

  static End zero_end() { return {Kind::Zero, 1, {}, Rational(0), "0"}; }
  static End infinity_end() { return {Kind::Infinity, 1, {}, Rational(0), "inf"}; }

  /// sign * unit * q^exponent from any series s * q^e with s a unit up to a power of q.
  static End finite(const PuiseuxSeries& s, const Rational& e, std::string label) {
    Valuation v = s.valuation();
    if (!v.is_known()) throw Error(Errc::insufficient_precision, "end coefficient is a zero truncation");
    PuiseuxSeries u = s.shifted(Rational(-v.value()));
    int sg = sgn(u.principal_coefficient()) < 0 ? -1 : 1;
    return {Kind::Finite, sg, sg < 0 ? -u : u, Rational(e + v.value()), std::move(label)};
  }

  bool is_finite() const { return kind == Kind::Finite; }
  PuiseuxSeries value() const { return (sign < 0 ? -unit : unit).shifted(exponent); }
};

/// v(a - b) for finite ends.
inline Rational end_difference_valuation(const End& a, const End& b) {
  PuiseuxSeries d = a.value() - b.value();
  Valuation v = d.valuation();
  if (!v.is_known())
    throw Error(Errc::insufficient_precision,
                "cannot separate " + a.label + " and " + b.label + " below q^" + v.bound().get_str());
  return v.value();
}

inline bool same_end(const End& a, const End& b) {
  if (a.kind != b.kind) return false;
  if (!a.is_finite()) return true;
  return a.exponent == b.exponent && a.sign == b.sign && (a.unit - b.unit).is_zero_truncation();
}

// ---------------------------------------------------------------------------
// Zeros

/// Representatives of the zeros of yy o wp: +-q^(+-1/2).
inline std::vector<End> zero_divisor_y() {
  std::vector<End> out;
  for (Rational e : {Rational(1, 2), Rational(-1, 2)})
    for (int sg : {1, -1})
      out.push_back(End::finite(PuiseuxSeries::constant(Rational(sg), Rational(kDefaultHorizon)), e,
                                std::string(sg < 0 ? "-" : "") + q_power_label(e)));
  return out;
}

/// Representatives of Z = Z_y u qZ_y, duplicates removed.
inline std::vector<End> zero_divisor() {
  std::vector<End> out = zero_divisor_y();
  for (auto z : zero_divisor_y()) {
    End w = End::finite(PuiseuxSeries::constant(Rational(z.sign), Rational(kDefaultHorizon)), z.exponent + 1,
                        std::string(z.sign < 0 ? "-" : "") + q_power_label(z.exponent + 1));
    bool dup = false;
    for (auto& o : out) dup = dup || same_end(o, w);
    if (!dup) out.push_back(w);
  }
  return out;
}

/// Number of classes modulo <-1, q^4> (exponents mod 4, signs ignored), for
/// ends with unit 1.
inline std::size_t deck_classes(const std::vector<End>& ends) {
  std::set<Rational> cls;
  for (auto& e : ends) cls.insert(Rational(e.exponent - 4 * floor(Rational(e.exponent / 4))));
  return cls.size();
}

// ---------------------------------------------------------------------------
// Poles: Delta and the theta-factor fit

struct ThetaFactor {
  PuiseuxSeries xi;
  Rational offset;  // a, modulo 8
};

/// Delta = -s theta3 + r theta4, whose zeros in t are the poles of yy o wp.
inline BivariateSeries delta_series(const FamilyParams& p, std::optional<Rational> q_horizon = std::nullopt,
                                    int t_degree_bound = kDefaultTDegreeBound) {
  Rational h = q_horizon.value_or(p.horizon());
  return -(p.s * theta_bar(3, h, t_degree_bound)) + p.r * theta_bar(4, h, t_degree_bound);
}

/// d/dt log Theta_{xi,a}, known below `horizon`, for xi a polynomial in q.
inline BivariateSeries theta_factor_log_derivative(const PuiseuxSeries& xi, const Rational& a, const Rational& horizon) {
  BivariateSeries out = BivariateSeries::zero(horizon);
  PuiseuxSeries xinv = xi.inverse();
  long nmax = to_int64(floor_div(Rational((horizon - a) / 8))) + 1;
  long nmin = -to_int64(floor_div(Rational((horizon + a) / 8))) - 1;
  for (long n = nmin; n <= nmax; ++n) {
    Rational e = 8 * n + a;
    if (e == 0) throw Error(Errc::invalid_argument, "theta factor offset must not be 0 mod 8");
    Rational step = abs(e);
    if (step >= horizon) continue;
    const PuiseuxSeries& base = e > 0 ? xi : xinv;
    PuiseuxSeries power = base;
    for (long m = 1; m * step < horizon; ++m, power = power * base) {
      Rational c = (m % 2 == 1 ? 2 : -2) * (e > 0 ? 1 : -1);
      int deg = e > 0 ? static_cast<int>(2 * m - 1) : static_cast<int>(-2 * m - 1);
      out = out + power * BivariateSeries::monomial(c, Rational(m * step), deg, horizon);
    }
  }
  return out.truncated(horizon);
}

/// Theta_{xi,a} itself, known below `horizon`.
inline BivariateSeries theta_factor(const PuiseuxSeries& xi, const Rational& a, const Rational& horizon) {
  BivariateSeries out = BivariateSeries::from_series(PuiseuxSeries::constant(Rational(1), horizon));
  PuiseuxSeries xinv = xi.inverse();
  long nmax = to_int64(floor_div(Rational((horizon - a) / 8))) + 1;
  long nmin = -to_int64(floor_div(Rational((horizon + a) / 8))) - 1;
  for (long n = nmin; n <= nmax; ++n) {
    Rational e = 8 * n + a;
    if (abs(e) >= horizon) continue;
    BivariateSeries f = BivariateSeries::from_series(PuiseuxSeries::constant(Rational(1), horizon)) +
                        (e > 0 ? xi : xinv) * BivariateSeries::monomial(Rational(1), abs(e), e > 0 ? 2 : -2, horizon);
    out = (out * f).truncated(horizon);
  }
  return out;
}

struct PoleFit {
  ThetaFactor first;   // the factor whose offset is the lowest exponent of d log Delta
  ThetaFactor second;
  PuiseuxSeries constant;            // Delta ~ constant * Theta_first * Theta_second
  BivariateSeries log_derivative;    // d/dt log Delta
  Rational residual_valuation;       // q-valuation of Delta - constant * Theta * Theta (a lower bound if unknown)
  bool residual_known_zero = false;  // residual vanished below its horizon
  int fit_order = kDefaultFitOrder;
};

/// Solves d/dt log Delta = d/dt log(Theta_{xi,a} Theta_{eta,b}) order by order
/// in q. xi and eta are returned known below q^fit_order.
inline PoleFit fit_pole_factors(const BivariateSeries& delta, std::optional<std::pair<Rational, Rational>> offsets = std::nullopt,
                                int fit_order = kDefaultFitOrder) {
  if (fit_order <= 0) throw Error(Errc::invalid_argument, "fit order must be positive");
  BivariateSeries L = bv_log_derivative_t(delta);
  Valuation vl = L.q_valuation();
  if (!vl.is_known()) throw Error(Errc::insufficient_precision, "d log Delta vanishes below its horizon");
  Rational a = vl.value();
  if (a == 4) throw Error(Errc::underdetermined_fit, "both factors start at q^4; the leading terms do not separate them");
  if (!(a > 0 && a < 4)) throw Error(Errc::offset_mismatch, "d log Delta starts at q^" + a.get_str() + ", outside (0, 4)");
  Rational b = 8 - a;
  bool swapped = false;
  if (offsets) {
    auto [oa, ob] = *offsets;
    if (oa + ob != 8) throw Error(Errc::offset_mismatch, "offsets must add up to 8");
    if (oa == b && ob == a) swapped = true;
    else if (!(oa == a && ob == b))
      throw Error(Errc::offset_mismatch, "d log Delta starts at q^" + a.get_str() + ", not at the supplied offsets");
  }
  Laurent lead = L.coefficient(a);
  if (lead.size() != 2 || !lead.count(1) || !lead.count(-3))
    throw Error(Errc::offset_mismatch, "leading coefficient of d log Delta is not of the form alpha*t + beta*t^-3");
  Rational horizon = a + fit_order;
  if (L.horizon() < horizon)
    throw Error(Errc::underdetermined_fit, "d log Delta known only below q^" + L.horizon().get_str() + ", need q^" +
                                               horizon.get_str());
  int n = std::lcm(L.ram(), static_cast<int>(a.get_den().get_si()));
  std::map<Rational, Rational> xi{{Rational(0), lead[1] / 2}}, eta{{Rational(0), Rational(-2) / lead[-3]}};
  Rational eta0 = eta[Rational(0)];
  Rational big = horizon + 8;
  auto model = [&](const Rational& h) {
    PuiseuxSeries x = PuiseuxSeries::from_terms(xi, big, n), y = PuiseuxSeries::from_terms(eta, big, n);
    return theta_factor_log_derivative(x, a, h) + theta_factor_log_derivative(y, b, h);
  };
  for (long j = 1; j < static_cast<long>(fit_order) * n; ++j) {
    Rational e = a + make_rational(j, n);
    BivariateSeries res = L.truncated(e + make_rational(1, n)) - model(e + make_rational(1, n));
    Valuation vr = res.q_valuation();
    if (vr.is_known() && vr.value() < e)
      throw Error(Errc::offset_mismatch, "fit inconsistent at q^" + vr.value().get_str());
    Laurent c = res.coefficient(e);
    for (auto& [d, v] : c)
      if (d != 1 && d != -3)
        throw Error(Errc::offset_mismatch, "residual at q^" + e.get_str() + " has a t^" + std::to_string(d) + " term");
    if (c.count(1)) xi[make_rational(j, n)] = c[1] / 2;
    if (c.count(-3)) eta[make_rational(j, n)] = c[-3] * eta0 * eta0 / 2;
  }
  BivariateSeries res = L.truncated(horizon) - model(horizon);
  if (!res.is_zero_truncation())
    throw Error(Errc::offset_mismatch, "fit leaves a residual at q^" + res.q_valuation().value().get_str());

  PoleFit out;
  out.fit_order = fit_order;
  out.log_derivative = L;
  out.first = {PuiseuxSeries::from_terms(xi, Rational(fit_order), n), a};
  out.second = {PuiseuxSeries::from_terms(eta, Rational(fit_order), n), b};
  // Delta against the product, with xi and eta taken as exact polynomials
  PuiseuxSeries xp = PuiseuxSeries::from_terms(xi, big, n), yp = PuiseuxSeries::from_terms(eta, big, n);
  Rational hc = std::min(delta.horizon(), horizon);
  BivariateSeries prod = (theta_factor(xp, a, hc) * theta_factor(yp, b, hc)).truncated(hc);
  BivariateSeries dt = delta.truncated(hc);
  out.constant = (dt * prod.inverse()).t_coefficient(0);
  BivariateSeries resid = dt - out.constant * prod;
  out.residual_known_zero = resid.is_zero_truncation();
  out.residual_valuation = resid.q_valuation().is_known() ? resid.q_valuation().value() : resid.horizon();
  if (swapped) std::swap(out.first, out.second);
  return out;
}

/// Poles of xx o wp and yy o wp in t: +-sqrt(-xi^-1) q^(-a/2 + 4n) and the
/// same for eta, then times q. Needs -xi^-1, -eta^-1 to be squares.
inline std::vector<End> pole_divisor(const PoleFit& fit, const Rational& lo = Rational(-1, 2),
                                     const Rational& hi = Rational(15, 2)) {
  std::vector<End> out;
  const char* names[2] = {"xibar", "etabar"};
  const ThetaFactor* fs[2] = {&fit.first, &fit.second};
  for (int k = 0; k < 2; ++k) {
    PuiseuxSeries bar = (-fs[k]->xi.inverse()).sqrt();
    for (Rational shift : {Rational(0), Rational(1)}) {
      Rational base = -fs[k]->offset / 2 + shift;
      base -= 4 * floor(Rational((base - lo) / 4));
      for (Rational e = base; e < hi; e += 4)
        for (int sg : {1, -1})
          out.push_back(End::finite(sg < 0 ? -bar : bar, e, std::string(sg < 0 ? "-" : "") + names[k] + "*" + q_power_label(e)));
    }
  }
  return out;
}

/// Zeros in t with exponents in [lo, hi).
inline std::vector<End> zero_ends(const Rational& lo = Rational(-1, 2), const Rational& hi = Rational(15, 2)) {
  std::vector<End> out;
  for (auto& z : zero_divisor()) {
    Rational base = z.exponent - 4 * floor(Rational((z.exponent - lo) / 4));
    for (Rational e = base; e < hi; e += 4)
      out.push_back(End::finite(PuiseuxSeries::constant(Rational(z.sign), Rational(kDefaultHorizon)), e,
                                std::string(z.sign < 0 ? "-" : "") + q_power_label(e)));
  }
  return out;
}

/// Zeros and poles after t -> t^2, with exponents in [lo, hi). No square roots
/// are needed: the squared poles are -xi^-1 q^(-a + 8n) and q^2 times them.
inline std::vector<End> squared_ends(const PoleFit& fit, const Rational& lo = Rational(-1), const Rational& hi = Rational(15)) {
  std::vector<End> out;
  auto add = [&](const PuiseuxSeries& c, Rational base, const std::string& name) {
    base -= 8 * floor(Rational((base - lo) / 8));
    for (Rational e = base; e < hi; e += 8) {
      End w = End::finite(c, e, name + q_power_label(e));
      bool dup = false;
      for (auto& o : out) dup = dup || same_end(o, w);
      if (!dup) out.push_back(w);
    }
  };
  PuiseuxSeries one = PuiseuxSeries::constant(Rational(1), Rational(kDefaultHorizon));
  for (Rational e : {Rational(-1), Rational(1), Rational(3)}) add(one, e, "");
  const char* names[2] = {"xibar^2*", "etabar^2*"};
  const ThetaFactor* fs[2] = {&fit.first, &fit.second};
  for (int k = 0; k < 2; ++k) {
    PuiseuxSeries c = -fs[k]->xi.inverse();
    add(c, -fs[k]->offset, names[k]);
    add(c, 2 - fs[k]->offset, names[k]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cross ratios and metric graphs

/// |v(c(w,x:y,z))| with c = (w-y)(x-z)/((w-z)(x-y)); factors meeting the end
/// at infinity cancel and v(a - 0) = v(a).
inline Rational cross_ratio_length(const End& w, const End& x, const End& y, const End& z) {
  const End* e[4] = {&w, &x, &y, &z};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (same_end(*e[i], *e[j])) throw Error(Errc::invalid_argument, "cross ratio of coincident ends");
  auto v = [](const End& a, const End& b) -> std::optional<Rational> {
    if (a.kind == End::Kind::Infinity || b.kind == End::Kind::Infinity) return std::nullopt;
    if (a.kind == End::Kind::Zero) return b.exponent;
    if (b.kind == End::Kind::Zero) return a.exponent;
    return end_difference_valuation(a, b);
  };
  Rational total = 0;
  auto add = [&](const End& a, const End& b, int sign) {
    if (auto r = v(a, b)) total += sign * *r;
  };
  add(w, y, 1);
  add(x, z, 1);
  add(w, z, -1);
  add(x, y, -1);
  return abs(total);
}

struct MetricGraph {
  struct Edge {
    std::size_t a, b;
    Rational len;
  };
  struct EndMark {
    std::size_t at;
    std::string label;
  };
  std::vector<std::optional<Rational>> heights;  // per node; set on the central line
  std::vector<Edge> edges;
  std::vector<EndMark> ends;
  std::optional<Rational> cycle_len;

  std::size_t add_node(std::optional<Rational> h = std::nullopt) {
    heights.push_back(h);
    return heights.size() - 1;
  }
  std::size_t node_count() const { return heights.size(); }
};

inline long betti_number(const MetricGraph& g) {
  std::vector<std::size_t> parent(g.node_count());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  long comps = static_cast<long>(g.node_count());
  for (auto& e : g.edges) {
    auto a = find(e.a), b = find(e.b);
    if (a != b) {
      parent[a] = b;
      --comps;
    }
  }
  return static_cast<long>(g.edges.size()) - static_cast<long>(g.node_count()) + comps;
}

/// Tree distances from one node, by depth-first search.
inline std::vector<Rational> tree_distances(const MetricGraph& g, std::size_t from) {
  std::vector<std::vector<std::pair<std::size_t, Rational>>> adj(g.node_count());
  for (auto& e : g.edges) {
    adj[e.a].emplace_back(e.b, e.len);
    adj[e.b].emplace_back(e.a, e.len);
  }
  std::vector<Rational> d(g.node_count());
  std::vector<bool> seen(g.node_count(), false);
  std::vector<std::size_t> stack{from};
  seen[from] = true;
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    for (auto& [w, l] : adj[v])
      if (!seen[w]) {
        seen[w] = true;
        d[w] = d[v] + l;
        stack.push_back(w);
      }
  }
  return d;
}

/// Length of [w,x] n [y,z] for ends of a tree, given by their end indices.
/// Ray lengths cancel, so each end is measured from its attachment node.
inline Rational tree_path_intersection(const MetricGraph& g, std::size_t w, std::size_t x, std::size_t y, std::size_t z) {
  auto d = [&](std::size_t i, std::size_t j) { return tree_distances(g, g.ends[i].at)[g.ends[j].at]; };
  Rational wx = d(w, x), yz = d(y, z), wy = d(w, y), xz = d(x, z), wz = d(w, z), xy = d(x, y);
  Rational r = (wx + yz - std::min(Rational(wy + xz), Rational(wz + xy))) / 2;
  return r > 0 ? r : Rational(0);
}

struct SpannedTree {
  MetricGraph graph;
  std::vector<End> ends;  // ends[k] is graph.ends[k]; the last two are 0 and infinity
};

/// Tree spanned by 0, infinity and the finite ends: each end leaves the line
/// [0, inf] at height v(z); ends at a common height share the path up to
/// height v(z - z').
inline SpannedTree build_tree(const std::vector<End>& ends) {
  SpannedTree t;
  std::map<Rational, std::vector<std::size_t>> by_height;
  for (std::size_t k = 0; k < ends.size(); ++k) {
    if (!ends[k].is_finite()) throw Error(Errc::invalid_argument, "0 and infinity are added by build_tree");
    by_height[ends[k].exponent].push_back(k);
  }
  if (by_height.empty()) throw Error(Errc::invalid_argument, "no finite ends");
  MetricGraph& g = t.graph;
  std::map<Rational, std::size_t> central;
  std::optional<std::size_t> prev;
  Rational prev_h;
  for (auto& [h, idx] : by_height) {
    std::size_t node = g.add_node(h);
    central[h] = node;
    if (prev) g.edges.push_back({*prev, node, h - prev_h});
    prev = node;
    prev_h = h;
  }
  std::vector<std::optional<std::size_t>> attach(ends.size());
  std::function<void(const std::vector<std::size_t>&, const Rational&, std::size_t)> grow =
      [&](const std::vector<std::size_t>& set, const Rational& depth, std::size_t parent) {
        if (set.size() == 1) {
          attach[set[0]] = parent;
          return;
        }
        std::optional<Rational> m;
        for (std::size_t i = 0; i < set.size(); ++i)
          for (std::size_t j = i + 1; j < set.size(); ++j) {
            Rational v = end_difference_valuation(ends[set[i]], ends[set[j]]);
            if (!m || v < *m) m = v;
          }
        std::size_t node = parent;
        if (*m > depth) {
          node = g.add_node();
          g.edges.push_back({parent, node, *m - depth});
        }
        std::vector<bool> used(set.size(), false);
        for (std::size_t i = 0; i < set.size(); ++i) {
          if (used[i]) continue;
          std::vector<std::size_t> cls{set[i]};
          used[i] = true;
          for (std::size_t j = i + 1; j < set.size(); ++j)
            if (!used[j] && end_difference_valuation(ends[set[i]], ends[set[j]]) > *m) {
              cls.push_back(set[j]);
              used[j] = true;
            }
          grow(cls, *m, node);
        }
      };
  for (auto& [h, idx] : by_height) grow(idx, h, central[h]);
  for (std::size_t k = 0; k < ends.size(); ++k) g.ends.push_back({*attach[k], ends[k].label});
  // small balls around 0 sit high on the central line
  g.ends.push_back({central.rbegin()->second, "0"});
  g.ends.push_back({central.begin()->second, "inf"});
  t.ends = ends;
  t.ends.push_back(End::zero_end());
  t.ends.push_back(End::infinity_end());
  return t;
}

/// Compares tree path intersections with |v(cross ratio)| on 4-subsets of
/// ends, in a fixed order, stopping after `cap` subsets. Returns the number
/// checked; throws DisagreementBug on the first mismatch.
inline std::size_t check_tree_metric(const SpannedTree& t, std::size_t cap = 400) {
  std::size_t n = t.ends.size(), count = 0;
  for (std::size_t w = 0; w < n && count < cap; ++w)
    for (std::size_t x = w + 1; x < n && count < cap; ++x)
      for (std::size_t y = x + 1; y < n && count < cap; ++y)
        for (std::size_t z = y + 1; z < n && count < cap; ++z) {
          // the three pairings of the four ends
          std::size_t q[3][4] = {{w, x, y, z}, {w, y, x, z}, {w, z, x, y}};
          for (auto& p : q) {
            Rational tree = tree_path_intersection(t.graph, p[0], p[1], p[2], p[3]);
            Rational cr = cross_ratio_length(t.ends[p[0]], t.ends[p[1]], t.ends[p[2]], t.ends[p[3]]);
            if (tree != cr)
              throw Error(Errc::disagreement_bug, "tree gives " + tree.get_str() + " but the cross ratio gives " +
                                                      cr.get_str() + " for " + t.ends[p[0]].label + ", " +
                                                      t.ends[p[1]].label + " : " + t.ends[p[2]].label + ", " +
                                                      t.ends[p[3]].label);
          }
          ++count;
        }
  return count;
}

// ---------------------------------------------------------------------------
// Canonical forms

namespace detail {

/// Removes nodes with two edges and no ends, joining the edges.
inline MetricGraph suppress_degree_two(MetricGraph g) {
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<int> deg(g.node_count(), 0), nends(g.node_count(), 0);
    for (auto& e : g.edges) {
      ++deg[e.a];
      ++deg[e.b];
    }
    for (auto& m : g.ends) ++nends[m.at];
    for (std::size_t v = 0; v < g.node_count() && !changed; ++v) {
      if (deg[v] != 2 || nends[v] != 0) continue;
      std::vector<std::size_t> inc;
      for (std::size_t k = 0; k < g.edges.size(); ++k)
        if (g.edges[k].a == v || g.edges[k].b == v) inc.push_back(k);
      if (inc.size() != 2) continue;
      auto other = [&](std::size_t k) { return g.edges[k].a == v ? g.edges[k].b : g.edges[k].a; };
      std::size_t p = other(inc[0]), q = other(inc[1]);
      if (p == q || p == v || q == v) continue;
      Rational len = g.edges[inc[0]].len + g.edges[inc[1]].len;
      g.edges.erase(g.edges.begin() + static_cast<long>(inc[1]));
      g.edges.erase(g.edges.begin() + static_cast<long>(inc[0]));
      g.edges.push_back({p, q, len});
      changed = true;
    }
  }
  return g;
}

}  // namespace detail

struct CanonicalForm {
  Rational cycle_length;
  std::vector<std::string> tokens;  // alternating attachment strings and gap lengths
  std::string text() const {
    std::string s = "cycle " + cycle_length.get_str() + ":";
    for (auto& t : tokens) s += " " + t;
    return s;
  }
};

/// Canonical form of a connected metric graph with first Betti number 1:
/// the cycle read from the attachment with the smallest string, in the
/// direction giving the smaller token sequence.
inline CanonicalForm canonical_form(const MetricGraph& g0) {
  MetricGraph g = detail::suppress_degree_two(g0);
  if (betti_number(g) != 1) throw Error(Errc::invalid_argument, "canonical form needs first Betti number 1");
  std::size_t n = g.node_count();
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(n);  // (neighbour, edge)
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    adj[g.edges[k].a].emplace_back(g.edges[k].b, k);
    adj[g.edges[k].b].emplace_back(g.edges[k].a, k);
  }
  std::vector<int> deg(n);
  for (std::size_t v = 0; v < n; ++v) deg[v] = static_cast<int>(adj[v].size());
  std::vector<bool> on_cycle(n, true);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t v = 0; v < n; ++v)
      if (on_cycle[v] && deg[v] <= 1) {
        on_cycle[v] = false;
        changed = true;
        for (auto& [w, k] : adj[v])
          if (on_cycle[w]) --deg[w];
      }
  }
  std::vector<int> nends(n, 0);
  std::map<std::size_t, std::vector<std::string>> end_labels;
  for (auto& m : g.ends) ++nends[m.at];
  std::function<std::string(std::size_t, std::size_t)> subtree = [&](std::size_t v, std::size_t from) {
    std::vector<std::string> parts(static_cast<std::size_t>(nends[v]), "E");
    for (auto& [w, k] : adj[v]) {
      if (w == from || on_cycle[w]) continue;
      parts.push_back("(" + g.edges[k].len.get_str() + ":" + subtree(w, v) + ")");
    }
    std::sort(parts.begin(), parts.end());
    std::string s = "[";
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + parts[i];
    return s + "]";
  };
  // walk the cycle
  std::size_t start = 0;
  while (!on_cycle[start]) ++start;
  std::vector<std::size_t> order{start};
  std::vector<Rational> gaps;
  std::size_t prev_edge = SIZE_MAX;
  for (std::size_t cur = start;;) {
    std::size_t next = SIZE_MAX, used = SIZE_MAX;
    for (auto& [w, k] : adj[cur])
      if (on_cycle[w] && k != prev_edge) {
        next = w;
        used = k;
        break;
      }
    gaps.push_back(g.edges[used].len);
    prev_edge = used;
    if (next == start) break;
    order.push_back(next);
    cur = next;
  }
  std::vector<std::string> att;
  for (auto v : order) att.push_back(subtree(v, SIZE_MAX));
  std::size_t m = order.size();
  CanonicalForm best;
  best.cycle_length = 0;
  for (auto& l : gaps) best.cycle_length += l;
  bool have = false;
  for (int dir = 0; dir < 2; ++dir)
    for (std::size_t s = 0; s < m; ++s) {
      std::vector<std::string> tok;
      for (std::size_t i = 0; i < m; ++i) {
        std::size_t k = dir == 0 ? (s + i) % m : (s + m - i) % m;
        // gap after node k in this direction
        std::size_t gi = dir == 0 ? k : (k + m - 1) % m;
        tok.push_back(att[k]);
        tok.push_back(gaps[gi].get_str());
      }
      if (!have || tok < best.tokens) {
        best.tokens = tok;
        have = true;
      }
    }
  return best;
}

/// The tropical curve as a metric graph: lattice lengths on bounded edges,
/// one end per ray.
inline MetricGraph curve_metric_graph(const TropicalCurve& tc) {
  MetricGraph g;
  for (std::size_t k = 0; k < tc.vertices.size(); ++k) g.add_node();
  for (auto& e : tc.edges) g.edges.push_back({e.from, e.to, lattice_length(tc, e)});
  for (auto& r : tc.rays) g.ends.push_back({r.at, "ray(" + std::to_string(r.dir.x) + "," + std::to_string(r.dir.y) + ")"});
  return g;
}

// ---------------------------------------------------------------------------
// Quotients

struct SquareQuotient {
  SpannedTree tree;
  std::vector<std::string> checks;  // metric statements confirmed
};

/// z -> z^2 on the ends of a +-1 symmetric tree, rebuilt on the squared ends.
/// Confirms the central line doubles and the branches keep their lengths.
inline SquareQuotient square_quotient(const SpannedTree& t) {
  std::vector<End> sq;
  std::vector<End> finite;
  for (auto& e : t.ends)
    if (e.is_finite()) finite.push_back(e);
  for (auto& e : finite) {
    bool mirrored = false;
    for (auto& f : finite)
      mirrored = mirrored || (f.exponent == e.exponent && f.sign == -e.sign && (f.unit - e.unit).is_zero_truncation());
    if (!mirrored) throw Error(Errc::invalid_argument, "end set is not +-1 symmetric: " + e.label);
    std::string lab = e.label;
    if (!lab.empty() && lab[0] == '-') lab = lab.substr(1);
    PuiseuxSeries u2 = e.unit * e.unit;
    std::string name = lab.substr(0, lab.find('*'));
    std::string label = lab.find('*') == std::string::npos ? q_power_label(2 * e.exponent)
                                                           : name + "^2*" + q_power_label(2 * e.exponent);
    End w = End::finite(u2, 2 * e.exponent, label);
    bool dup = false;
    for (auto& o : sq) dup = dup || same_end(o, w);
    if (!dup) sq.push_back(w);
  }
  SquareQuotient out{build_tree(sq), {}};
  // compare attachments height by height
  auto attachments = [](const SpannedTree& tr) {
    MetricGraph g = tr.graph;
    std::map<Rational, std::vector<std::string>> at;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(g.node_count());
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
      adj[g.edges[k].a].emplace_back(g.edges[k].b, k);
      adj[g.edges[k].b].emplace_back(g.edges[k].a, k);
    }
    std::vector<int> nends(g.node_count(), 0);
    for (std::size_t k = 0; k + 2 < g.ends.size(); ++k) ++nends[g.ends[k].at];
    std::function<std::string(std::size_t, std::size_t)> sub = [&](std::size_t v, std::size_t from) {
      std::vector<std::string> parts(static_cast<std::size_t>(nends[v]), "E");
      for (auto& [w, k] : adj[v])
        if (w != from && !g.heights[w]) parts.push_back("(" + g.edges[k].len.get_str() + ":" + sub(w, v) + ")");
      std::sort(parts.begin(), parts.end());
      std::string s;
      for (auto& p : parts) s += p + ";";
      return s;
    };
    for (std::size_t v = 0; v < g.node_count(); ++v)
      if (g.heights[v]) {
        std::vector<std::string> parts(static_cast<std::size_t>(nends[v]), "E");
        for (auto& [w, k] : adj[v])
          if (!g.heights[w]) parts.push_back("(" + g.edges[k].len.get_str() + ":" + sub(w, v) + ")");
        std::sort(parts.begin(), parts.end());
        at[*g.heights[v]] = parts;
      }
    return at;
  };
  auto before = attachments(t), after = attachments(out.tree);
  if (before.size() != after.size())
    throw Error(Errc::disagreement_bug, "squaring changed the number of attachment heights");
  for (auto& [h, parts] : before) {
    auto it = after.find(2 * h);
    if (it == after.end())
      throw Error(Errc::disagreement_bug, "no attachment at doubled height " + Rational(2 * h).get_str());
    // the two mirror images at h collapse to one copy at 2h
    std::vector<std::string> doubled;
    for (auto& p : it->second) {
      doubled.push_back(p);
      doubled.push_back(p);
    }
    std::sort(doubled.begin(), doubled.end());
    if (doubled != parts)
      throw Error(Errc::disagreement_bug, "branches at height " + h.get_str() + " change length under squaring");
  }
  out.checks.push_back("central line heights doubled");
  out.checks.push_back("branch lengths preserved");
  return out;
}

/// The tree modulo z -> q^period z: the central line closes into a cycle of
/// length `period`. The ends must cover at least one full period, and every
/// attachment above the first period must repeat one below it.
inline MetricGraph mod_q8_quotient(const SpannedTree& t, const Rational& period = Rational(8)) {
  const MetricGraph& g = t.graph;
  std::vector<std::pair<Rational, std::size_t>> central;
  for (std::size_t v = 0; v < g.node_count(); ++v)
    if (g.heights[v]) central.emplace_back(*g.heights[v], v);
  std::sort(central.begin(), central.end());
  Rational lo = central.front().first;
  if (central.back().first < lo + period)
    throw Error(Errc::incomplete_fundamental_domain, "ends span heights [" + lo.get_str() + ", " +
                                                          central.back().first.get_str() + "], less than one period");
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(g.node_count());
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    adj[g.edges[k].a].emplace_back(g.edges[k].b, k);
    adj[g.edges[k].b].emplace_back(g.edges[k].a, k);
  }
  std::vector<std::vector<std::string>> ends_at(g.node_count());
  for (std::size_t k = 0; k + 2 < g.ends.size(); ++k) ends_at[g.ends[k].at].push_back(g.ends[k].label);
  std::function<std::string(std::size_t, std::size_t)> shape = [&](std::size_t v, std::size_t from) {
    std::vector<std::string> parts(ends_at[v].size(), "E");
    for (auto& [w, k] : adj[v])
      if (w != from && !g.heights[w]) parts.push_back("(" + g.edges[k].len.get_str() + ":" + shape(w, v) + ")");
    std::sort(parts.begin(), parts.end());
    std::string s;
    for (auto& p : parts) s += p + ";";
    return s;
  };
  std::map<Rational, std::string> by_height;
  for (auto& [h, v] : central) by_height[h] = shape(v, SIZE_MAX);
  for (auto& [h, s] : by_height) {
    if (h < lo + period) continue;
    auto it = by_height.find(h - period);
    if (it == by_height.end() || it->second != s)
      throw Error(Errc::incomplete_fundamental_domain,
                  "attachment at height " + h.get_str() + " does not repeat one a period lower");
  }
  for (auto& [h, s] : by_height) {
    if (h >= lo + period || h + period > central.back().first) continue;
    auto it = by_height.find(h + period);
    if (it == by_height.end() || it->second != s)
      throw Error(Errc::incomplete_fundamental_domain,
                  "attachment at height " + h.get_str() + " does not repeat one a period higher");
  }
  MetricGraph out;
  std::vector<std::pair<Rational, std::size_t>> ring;
  std::function<void(std::size_t, std::size_t, std::size_t)> copy = [&](std::size_t v, std::size_t from, std::size_t nv) {
    for (auto& l : ends_at[v]) out.ends.push_back({nv, l});
    for (auto& [w, k] : adj[v])
      if (w != from && !g.heights[w]) {
        std::size_t nw = out.add_node();
        out.edges.push_back({nv, nw, g.edges[k].len});
        copy(w, v, nw);
      }
  };
  for (auto& [h, v] : central) {
    if (h >= lo + period) break;
    std::size_t nv = out.add_node(h);
    ring.emplace_back(h, nv);
    copy(v, SIZE_MAX, nv);
  }
  for (std::size_t k = 0; k < ring.size(); ++k) {
    Rational next = k + 1 < ring.size() ? ring[k + 1].first : Rational(ring[0].first + period);
    out.edges.push_back({ring[k].second, ring[(k + 1) % ring.size()].second, next - ring[k].first});
  }
  out.cycle_len = period;
  return out;
}

struct IsometryReport {
  bool isometric = false;
  CanonicalForm graph_form, curve_form;
  std::optional<std::string> first_discrepancy;
};

/// Compares the quotient graph with the tropical curve. Refused unless the
/// curve is smooth.
inline IsometryReport compare_isometry(const MetricGraph& graph, const TropicalCurve& curve) {
  if (!subdivision_smoothness(curve.subdivision))
    throw Error(Errc::not_smooth, "the tropical curve is not smooth; the isometry statement does not apply");
  IsometryReport r;
  r.graph_form = canonical_form(graph);
  r.curve_form = canonical_form(curve_metric_graph(curve));
  if (r.graph_form.cycle_length != r.curve_form.cycle_length) {
    r.first_discrepancy = "cycle length " + r.graph_form.cycle_length.get_str() + " vs " + r.curve_form.cycle_length.get_str();
  } else if (r.graph_form.tokens.size() != r.curve_form.tokens.size()) {
    r.first_discrepancy = std::to_string(r.graph_form.tokens.size() / 2) + " attachments vs " +
                          std::to_string(r.curve_form.tokens.size() / 2);
  } else {
    for (std::size_t k = 0; k < r.graph_form.tokens.size(); ++k)
      if (r.graph_form.tokens[k] != r.curve_form.tokens[k]) {
        r.first_discrepancy = "token " + std::to_string(k) + ": " + r.graph_form.tokens[k] + " vs " + r.curve_form.tokens[k];
        break;
      }
  }
  r.isometric = !r.first_discrepancy;
  return r;
}

// ---------------------------------------------------------------------------
// Pipeline

struct BtResult {
  PoleFit fit;
  std::optional<SpannedTree> gamma;      // in t; only when -xi^-1, -eta^-1 are squares
  std::optional<SquareQuotient> gamma_bar_check;
  SpannedTree gamma_bar;                 // in t^2
  MetricGraph quotient;
  std::size_t cross_ratio_checks = 0;
  IsometryReport isometry;
};

inline BtResult bt_pipeline(const FamilyParams& p, int fit_order = kDefaultFitOrder) {
  Classification cl = classify(p);
  if (!subdivision_smoothness(cl.curve.subdivision))
    throw Error(Errc::not_smooth, "the tropical curve is " + kind_name(cl.report.kind) +
                                      " and not smooth; the comparison covers smooth curves only");
  BtResult out;
  out.fit = fit_pole_factors(delta_series(p), std::nullopt, fit_order);
  std::vector<End> ends;
  try {
    std::vector<End> t_ends = zero_ends();
    for (auto& e : pole_divisor(out.fit)) t_ends.push_back(e);
    out.gamma = build_tree(t_ends);
    out.cross_ratio_checks = check_tree_metric(*out.gamma);
    out.gamma_bar_check = square_quotient(*out.gamma);
  } catch (const Error& e) {
    if (e.code() != Errc::not_a_square) throw;
  }
  out.gamma_bar = build_tree(squared_ends(out.fit));
  out.cross_ratio_checks += check_tree_metric(out.gamma_bar);
  out.quotient = mod_q8_quotient(out.gamma_bar);
  out.isometry = compare_isometry(out.quotient, cl.curve);
  return out;
}

}  // namespace tropedwards
