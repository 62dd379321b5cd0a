#pragma once

// Tropicalization of f_{r,s}: the min-plus polynomial on the fixed support,
// its regular subdivision (lower hull of the lifted support), the dual
// tropical curve, the cycle and two smoothness tests.

#include <algorithm>
#include <array>
#include <compare>
#include <cstdlib>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tropedwards/edwards.hpp"
#include "tropedwards/error.hpp"
#include "tropedwards/rational.hpp"
#include "tropedwards/series.hpp"

namespace tropedwards {

struct LatticePoint {
  int i = 0, j = 0;
  auto operator<=>(const LatticePoint&) const = default;
};

struct IVec {
  long x = 0, y = 0;
  auto operator<=>(const IVec&) const = default;
};

inline IVec primitive(long x, long y) {
  long g = std::gcd(std::labs(x), std::labs(y));
  if (g == 0) throw Error(Errc::invalid_argument, "zero vector has no primitive direction");
  return {x / g, y / g};
}

struct QPoint {
  Rational x, y;
  friend bool operator==(const QPoint& a, const QPoint& b) { return a.x == b.x && a.y == b.y; }
  friend bool operator<(const QPoint& a, const QPoint& b) { return a.x != b.x ? a.x < b.x : a.y < b.y; }
};

struct TropTerm {
  LatticePoint p;
  Valuation u;
};

/// min over the support of u_ij + iX + jY. The support is always the eight
/// points below; symmetric points share a coefficient.
struct TropPolynomial {
  std::vector<TropTerm> terms;

  static TropPolynomial from_valuations(const TropCoefficientVector& u) {
    return {{{{1, 0}, u.u12}, {{0, 1}, u.u12}, {{2, 0}, u.u34}, {{0, 2}, u.u34},
             {{1, 1}, u.u5}, {{2, 1}, u.u67}, {{1, 2}, u.u67}, {{2, 2}, u.u8}}};
  }

  static TropPolynomial from_values(const Rational& u12, const Rational& u34, const Rational& u5,
                                    const Rational& u67, const Rational& u8) {
    return from_valuations({Valuation::known(u12), Valuation::known(u34), Valuation::known(u5),
                            Valuation::known(u67), Valuation::known(u8)});
  }
};

inline bool is_newton_vertex(const LatticePoint& p) {
  static const std::set<LatticePoint> v{{1, 0}, {2, 0}, {2, 2}, {0, 2}, {0, 1}};
  return v.count(p) > 0;
}

struct TropEval {
  Rational value;
  std::vector<LatticePoint> argmin;
  bool on_curve() const { return argmin.size() >= 2; }
};

inline TropEval trop_eval(const TropPolynomial& f, const Rational& X, const Rational& Y) {
  std::optional<Rational> best;
  for (auto& t : f.terms) {
    if (!t.u.is_known()) continue;
    Rational v = t.u.value() + t.p.i * X + t.p.j * Y;
    if (!best || v < *best) best = v;
  }
  if (!best) throw Error(Errc::unknown_coefficient_valuation, "no known coefficient");
  TropEval r{*best, {}};
  for (auto& t : f.terms) {
    Rational v = t.u.bound() + t.p.i * X + t.p.j * Y;
    if (!t.u.is_known()) {
      if (v <= *best)
        throw Error(Errc::unknown_coefficient_valuation,
                    "coefficient at (" + std::to_string(t.p.i) + "," + std::to_string(t.p.j) +
                        ") is only bounded below and could reach the minimum");
      continue;
    }
    if (v == *best) r.argmin.push_back(t.p);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Regular subdivision

struct Cell {
  std::vector<LatticePoint> vertices;  // counterclockwise, no collinear points
  std::vector<LatticePoint> points;    // every lifted point on the face
  Rational a, b, c;                    // the face is u = a i + b j + c
};

struct Subdivision {
  std::vector<Cell> cells;
  std::vector<std::pair<LatticePoint, Rational>> lifted_heights;
};

inline long cross(const LatticePoint& o, const LatticePoint& p, const LatticePoint& q) {
  return static_cast<long>(p.i - o.i) * (q.j - o.j) - static_cast<long>(p.j - o.j) * (q.i - o.i);
}

/// Twice the area of a lattice polygon given counterclockwise.
inline long twice_area(const std::vector<LatticePoint>& poly) {
  long s = 0;
  for (std::size_t k = 0; k < poly.size(); ++k) {
    auto& p = poly[k];
    auto& q = poly[(k + 1) % poly.size()];
    s += static_cast<long>(p.i) * q.j - static_cast<long>(q.i) * p.j;
  }
  return s;
}

/// Convex hull, counterclockwise, collinear points dropped.
inline std::vector<LatticePoint> convex_hull(std::vector<LatticePoint> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<LatticePoint> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i - 1]) <= 0) --k;
    h[k++] = pts[i - 1];
  }
  h.resize(k - 1);
  return h;
}

namespace detail {

struct Lifted {
  LatticePoint p;
  Rational u;
};

struct Plane {
  Rational a, b, c;
  Rational at(const LatticePoint& p) const { return Rational(a * p.i + b * p.j + c); }
};

/// Lower faces of the lifted point set, each with the points lying on it.
inline std::vector<std::pair<Plane, std::vector<LatticePoint>>> lower_faces(const std::vector<Lifted>& pts) {
  std::vector<std::pair<Plane, std::vector<LatticePoint>>> faces;
  std::size_t n = pts.size();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y)
      for (std::size_t z = y + 1; z < n; ++z) {
        const auto &P = pts[x], &Q = pts[y], &S = pts[z];
        long det = cross(P.p, Q.p, S.p);
        if (det == 0) continue;
        // solve u = a i + b j + c through the three lifted points
        Rational du1 = Q.u - P.u, du2 = S.u - P.u;
        long di1 = Q.p.i - P.p.i, dj1 = Q.p.j - P.p.j, di2 = S.p.i - P.p.i, dj2 = S.p.j - P.p.j;
        Plane pl;
        pl.a = (du1 * dj2 - du2 * dj1) / det;
        pl.b = (di1 * du2 - di2 * du1) / det;
        pl.c = P.u - pl.a * P.p.i - pl.b * P.p.j;
        bool lower = true;
        std::vector<LatticePoint> on;
        for (auto& w : pts) {
          Rational h = pl.at(w.p);
          if (w.u < h) {
            lower = false;
            break;
          }
          if (w.u == h) on.push_back(w.p);
        }
        if (!lower) continue;
        bool seen = false;
        for (auto& f : faces)
          if (f.first.a == pl.a && f.first.b == pl.b && f.first.c == pl.c) seen = true;
        if (!seen) faces.emplace_back(pl, on);
      }
  return faces;
}

}  // namespace detail

inline Subdivision regular_subdivision(const TropPolynomial& f) {
  std::vector<detail::Lifted> known;
  std::vector<TropTerm> bounded;
  for (auto& t : f.terms) {
    if (t.u.is_known())
      known.push_back({t.p, t.u.value()});
    else
      bounded.push_back(t);
  }
  if (known.size() < 3) throw Error(Errc::degenerate_params, "fewer than three known coefficients");
  auto faces = detail::lower_faces(known);
  for (auto& t : bounded) {
    if (is_newton_vertex(t.p))
      throw Error(Errc::unknown_coefficient_valuation,
                  "vertex (" + std::to_string(t.p.i) + "," + std::to_string(t.p.j) + ") of the Newton polygon has an unknown coefficient");
    std::optional<Rational> hull;
    for (auto& [pl, on] : faces) {
      Rational h = pl.at(t.p);
      if (!hull || h > *hull) hull = h;
    }
    if (!hull || !(t.u.bound() > *hull))
      throw Error(Errc::unknown_coefficient_valuation,
                  "coefficient at (" + std::to_string(t.p.i) + "," + std::to_string(t.p.j) +
                      ") is only bounded below and could touch the lower hull");
  }
  Subdivision sub;
  for (auto& k : known) sub.lifted_heights.emplace_back(k.p, k.u);
  for (auto& [pl, on] : faces) sub.cells.push_back({convex_hull(on), on, pl.a, pl.b, pl.c});
  std::sort(sub.cells.begin(), sub.cells.end(),
            [](const Cell& x, const Cell& y) { return x.vertices < y.vertices; });
  return sub;
}

inline bool subdivision_smoothness(const Subdivision& sub) {
  for (auto& c : sub.cells)
    if (c.vertices.size() != 3 || twice_area(c.vertices) != 1) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Dual tropical curve

struct CurveEdge {
  std::size_t from = 0, to = 0;
  int weight = 1;
  IVec dir;                      // primitive, from -> to
  LatticePoint dual_a, dual_b;   // the dual subdivision edge
};

struct CurveRay {
  std::size_t at = 0;
  IVec dir;
  int weight = 1;
  LatticePoint dual_a, dual_b;
};

struct TropicalCurve {
  std::vector<QPoint> vertices;  // vertex k is dual to subdivision.cells[k]
  std::vector<CurveEdge> edges;
  std::vector<CurveRay> rays;
  Subdivision subdivision;
};

inline TropicalCurve dual_curve(const Subdivision& sub) {
  TropicalCurve tc;
  tc.subdivision = sub;
  for (auto& c : sub.cells) tc.vertices.push_back({-c.a, -c.b});
  // undirected cell edge -> (cell, opposite vertex of that cell)
  std::map<std::pair<LatticePoint, LatticePoint>, std::vector<std::pair<std::size_t, LatticePoint>>> owners;
  for (std::size_t k = 0; k < sub.cells.size(); ++k) {
    auto& v = sub.cells[k].vertices;
    for (std::size_t m = 0; m < v.size(); ++m) {
      LatticePoint p = v[m], q = v[(m + 1) % v.size()], other = v[(m + 2) % v.size()];
      owners[std::minmax(p, q)].emplace_back(k, other);
    }
  }
  for (auto& [e, cells] : owners) {
    auto [p, q] = e;
    long dx = q.i - p.i, dy = q.j - p.j;
    int w = static_cast<int>(std::gcd(std::labs(dx), std::labs(dy)));
    IVec normal = primitive(-dy, dx);
    if (cells.size() == 2) {
      std::size_t A = cells[0].first, B = cells[1].first;
      QPoint va = tc.vertices[A], vb = tc.vertices[B];
      Rational ddx = vb.x - va.x, ddy = vb.y - va.y;
      IVec d = normal;
      if (ddx * d.x + ddy * d.y < 0) d = {-d.x, -d.y};
      tc.edges.push_back({A, B, w, d, p, q});
    } else if (cells.size() == 1) {
      LatticePoint o = cells[0].second;
      IVec d = normal;
      long s = d.x * (p.i - o.i) + d.y * (p.j - o.j);
      if (s > 0) d = {-d.x, -d.y};
      tc.rays.push_back({cells[0].first, d, w, p, q});
    } else {
      throw Error(Errc::disagreement_bug, "subdivision edge shared by more than two cells");
    }
  }
  return tc;
}

/// Sum of weighted primitive directions at every vertex.
inline std::vector<IVec> balancing_defects(const TropicalCurve& tc) {
  std::vector<IVec> sum(tc.vertices.size());
  for (auto& e : tc.edges) {
    sum[e.from].x += e.weight * e.dir.x;
    sum[e.from].y += e.weight * e.dir.y;
    sum[e.to].x -= e.weight * e.dir.x;
    sum[e.to].y -= e.weight * e.dir.y;
  }
  for (auto& r : tc.rays) {
    sum[r.at].x += r.weight * r.dir.x;
    sum[r.at].y += r.weight * r.dir.y;
  }
  return sum;
}

inline bool is_balanced(const TropicalCurve& tc) {
  for (auto& d : balancing_defects(tc))
    if (d.x != 0 || d.y != 0) return false;
  return true;
}

/// Lattice length of a bounded edge.
inline Rational lattice_length(const TropicalCurve& tc, const CurveEdge& e) {
  const QPoint &a = tc.vertices[e.from], &b = tc.vertices[e.to];
  return e.dir.x != 0 ? Rational((b.x - a.x) / e.dir.x) : Rational((b.y - a.y) / e.dir.y);
}

/// True when (X, Y) lies on a bounded edge or a ray.
inline bool curve_contains(const TropicalCurve& tc, const Rational& X, const Rational& Y) {
  auto on_segment = [&](const QPoint& a, const IVec& d, std::optional<Rational> len) {
    Rational dx = X - a.x, dy = Y - a.y;
    if (dx * d.y != dy * d.x) return false;
    Rational lam = d.x != 0 ? Rational(dx / d.x) : Rational(dy / d.y);
    if (lam < 0) return false;
    return !len || lam <= *len;
  };
  for (auto& e : tc.edges)
    if (on_segment(tc.vertices[e.from], e.dir, lattice_length(tc, e))) return true;
  for (auto& r : tc.rays)
    if (on_segment(tc.vertices[r.at], r.dir, std::nullopt)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Cycle

enum class PolygonKind { Triangle, Square, Pentagon, Hexagon, Heptagon, Degenerate, None };

inline std::string kind_name(PolygonKind k) {
  switch (k) {
    case PolygonKind::Triangle: return "Triangle";
    case PolygonKind::Square: return "Square";
    case PolygonKind::Pentagon: return "Pentagon";
    case PolygonKind::Hexagon: return "Hexagon";
    case PolygonKind::Heptagon: return "Heptagon";
    case PolygonKind::Degenerate: return "Degenerate";
    case PolygonKind::None: return "None";
  }
  return "None";
}

inline PolygonKind kind_from_corners(std::size_t n) {
  switch (n) {
    case 3: return PolygonKind::Triangle;
    case 4: return PolygonKind::Square;
    case 5: return PolygonKind::Pentagon;
    case 6: return PolygonKind::Hexagon;
    case 7: return PolygonKind::Heptagon;
    default: return PolygonKind::Degenerate;
  }
}

struct CycleReport {
  PolygonKind kind = PolygonKind::None;
  Rational lattice_length;
  std::optional<Rational> delta;
  std::optional<bool> smooth_by_table1;
  std::optional<bool> smooth_by_subdivision;
  std::vector<std::size_t> cycle;  // vertex indices, counterclockwise
  std::vector<QPoint> polygon;     // corners only, counterclockwise
};

/// First Betti number of the bounded part.
inline long betti_number(const TropicalCurve& tc) {
  std::vector<std::size_t> parent(tc.vertices.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  long comps = static_cast<long>(tc.vertices.size());
  for (auto& e : tc.edges) {
    auto a = find(e.from), b = find(e.to);
    if (a != b) {
      parent[a] = b;
      --comps;
    }
  }
  return static_cast<long>(tc.edges.size()) - static_cast<long>(tc.vertices.size()) + comps;
}

inline CycleReport cycle_measure(const TropicalCurve& tc) {
  std::size_t n = tc.vertices.size();
  std::vector<int> degree(n, 0);
  std::vector<bool> alive_edge(tc.edges.size(), true);
  for (auto& e : tc.edges) {
    ++degree[e.from];
    ++degree[e.to];
  }
  std::vector<bool> alive(n, true);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t v = 0; v < n; ++v) {
      if (!alive[v] || degree[v] > 1) continue;
      alive[v] = false;
      changed = true;
      for (std::size_t k = 0; k < tc.edges.size(); ++k) {
        auto& e = tc.edges[k];
        if (alive_edge[k] && (e.from == v || e.to == v)) {
          alive_edge[k] = false;
          --degree[e.from == v ? e.to : e.from];
        }
      }
    }
  }
  std::vector<std::size_t> core;
  for (std::size_t v = 0; v < n; ++v)
    if (alive[v]) core.push_back(v);
  if (core.empty()) throw Error(Errc::no_cycle, "the bounded part of the curve is a tree");
  for (auto v : core)
    if (degree[v] != 2) throw Error(Errc::disagreement_bug, "bounded part has first Betti number above one");

  // walk the cycle starting from the smallest vertex
  std::size_t start = *std::min_element(core.begin(), core.end(), [&](std::size_t a, std::size_t b) {
    return tc.vertices[a] < tc.vertices[b];
  });
  std::vector<std::size_t> order{start};
  std::vector<std::size_t> via;
  std::size_t prev_edge = SIZE_MAX;
  for (std::size_t cur = start;;) {
    std::size_t next = SIZE_MAX, used = SIZE_MAX;
    for (std::size_t k = 0; k < tc.edges.size(); ++k) {
      if (!alive_edge[k] || k == prev_edge) continue;
      auto& e = tc.edges[k];
      if (e.from == cur) next = e.to;
      else if (e.to == cur) next = e.from;
      else continue;
      used = k;
      break;
    }
    via.push_back(used);
    prev_edge = used;
    if (next == start) break;
    order.push_back(next);
    cur = next;
  }
  // orient counterclockwise
  Rational area2 = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    auto& p = tc.vertices[order[k]];
    auto& q = tc.vertices[order[(k + 1) % order.size()]];
    area2 += p.x * q.y - q.x * p.y;
  }
  if (area2 < 0) {
    std::reverse(order.begin() + 1, order.end());
    std::reverse(via.begin(), via.end());
  }
  CycleReport rep;
  rep.cycle = order;
  rep.lattice_length = 0;
  for (auto k : via) rep.lattice_length += lattice_length(tc, tc.edges[k]);
  // corners: vertices where the direction changes
  std::size_t m = order.size();
  for (std::size_t k = 0; k < m; ++k) {
    const QPoint &a = tc.vertices[order[(k + m - 1) % m]], &b = tc.vertices[order[k]], &c = tc.vertices[order[(k + 1) % m]];
    Rational cr = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
    if (cr != 0) rep.polygon.push_back(b);
  }
  rep.kind = kind_from_corners(rep.polygon.size());
  return rep;
}

// ---------------------------------------------------------------------------
// Smoothness from coefficient inequalities

namespace detail {

/// Decides sum_k coeff_k * u_k < 0 when every u_k is known, or when the
/// lower bounds of the unknown entries already settle the sign.
inline bool strictly_negative(const std::array<long, 5>& coeff, const std::array<Valuation, 5>& u) {
  Rational known_part = 0;
  bool can_grow = false, can_shrink = false;
  for (std::size_t k = 0; k < 5; ++k) {
    if (coeff[k] == 0) continue;
    if (u[k].is_known()) {
      known_part += coeff[k] * u[k].value();
    } else {
      known_part += coeff[k] * u[k].bound();
      (coeff[k] > 0 ? can_grow : can_shrink) = true;
    }
  }
  // the sum ranges over [known_part, inf) if can_grow, (-inf, known_part] if can_shrink
  if (!can_grow && !can_shrink) return known_part < 0;
  if (can_grow && !can_shrink) {
    if (known_part >= 0) return false;
  } else if (can_shrink && !can_grow) {
    if (known_part < 0) return true;
  }
  throw Error(Errc::unknown_coefficient_valuation, "a smoothness inequality depends on an unbounded coefficient");
}

}  // namespace detail

/// The three smoothness inequalities for `kind`, over
/// (u12, u34, u5, u67, u8).
inline std::array<std::array<long, 5>, 3> table1_row(PolygonKind kind) {
  switch (kind) {
    case PolygonKind::Triangle: return {{{0, -1, 0, 2, -1}, {1, 0, -1, -1, 1}, {-2, 0, 3, 0, -1}}};
    case PolygonKind::Square: return {{{0, 0, -1, 2, -1}, {-1, 0, 2, -1, 0}, {1, -1, -1, 1, 0}}};
    case PolygonKind::Pentagon: return {{{0, 0, 1, -2, 1}, {-1, 0, 1, 1, -1}, {1, -1, -1, 1, 0}}};
    case PolygonKind::Hexagon: return {{{0, 0, -1, 2, -1}, {0, -1, 1, 0, 0}, {-1, 1, 1, -1, 0}}};
    case PolygonKind::Heptagon: return {{{0, 0, 1, -2, 1}, {0, -1, 0, 2, -1}, {-1, 1, 1, -1, 0}}};
    default: throw Error(Errc::invalid_argument, "no smoothness inequalities for " + kind_name(kind));
  }
}

inline bool table1_smoothness(const TropCoefficientVector& u, PolygonKind kind) {
  std::array<Valuation, 5> v{u.u12, u.u34, u.u5, u.u67, u.u8};
  for (auto& row : table1_row(kind))
    if (!detail::strictly_negative(row, v)) return false;
  return true;
}

inline TropCoefficientVector valuations_of(const TropPolynomial& f) {
  auto get = [&](int i, int j) {
    for (auto& t : f.terms)
      if (t.p.i == i && t.p.j == j) return t.u;
    throw Error(Errc::invalid_argument, "support point missing");
  };
  return {get(1, 0), get(2, 0), get(1, 1), get(2, 1), get(2, 2)};
}

/// Curve, cycle and both smoothness verdicts for a tropical polynomial.
inline std::pair<TropicalCurve, CycleReport> analyse(const TropPolynomial& f) {
  Subdivision sub = regular_subdivision(f);
  TropicalCurve tc = dual_curve(sub);
  if (!is_balanced(tc)) throw Error(Errc::disagreement_bug, "constructed curve is not balanced");
  CycleReport rep = cycle_measure(tc);
  rep.smooth_by_subdivision = subdivision_smoothness(sub);
  if (rep.kind != PolygonKind::Degenerate && rep.kind != PolygonKind::None) {
    rep.smooth_by_table1 = table1_smoothness(valuations_of(f), rep.kind);
    if (*rep.smooth_by_table1 != *rep.smooth_by_subdivision)
      throw Error(Errc::disagreement_bug, "inequality and subdivision smoothness verdicts differ");
  }
  return {tc, rep};
}

}  // namespace tropedwards
