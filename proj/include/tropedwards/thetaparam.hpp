#pragma once

// Ultradiscrete theta functions, the one-parameter description of the cycle
// of C(trop f_{r,s}), the shape predicted by delta, and classification.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "tropedwards/edwards.hpp"
#include "tropedwards/error.hpp"
#include "tropedwards/rational.hpp"
#include "tropedwards/series.hpp"
#include "tropedwards/tropcurve.hpp"

namespace tropedwards {

inline Rational theta_odd(const Rational& u) {
  Rational w = 2 * floor(Rational(u / 2)) + 1 - u;
  return Rational(-2 * w * w);
}

inline Rational theta_even(const Rational& u) {
  Rational w = 2 * floor(Rational((u + 1) / 2)) - u;
  return Rational(-2 * w * w);
}

struct CycleParam {
  FamilyParams params;
  Rational v_plus;   // v(r+s)
  Rational v_minus;  // v(r-s)
  Rational delta;
};

inline CycleParam cycle_param(const FamilyParams& p) {
  Valuation vp = (p.r + p.s).valuation(), vm = (p.r - p.s).valuation();
  if (!vp.is_known()) throw Error(Errc::undefined_delta, "r + s vanishes below q^" + vp.bound().get_str());
  if (!vm.is_known()) throw Error(Errc::undefined_delta, "r - s vanishes below q^" + vm.bound().get_str());
  return {p, vp.value(), vm.value(), vp.value() - vm.value()};
}

/// From valuations alone, for sweeps that do not need the series.
inline CycleParam cycle_param(const Rational& v_plus, const Rational& v_minus) {
  return {FamilyParams{}, v_plus, v_minus, v_plus - v_minus};
}

namespace detail {

inline Rational y_of(const Rational& vp, const Rational& vm, const Rational& u) {
  Rational to = theta_odd(u), te = theta_even(u);
  return Rational(std::max(to, Rational(te - 1)) - std::max(Rational(te - vm), Rational(to - vp)));
}

}  // namespace detail

/// (-X(u), -Y(u)) with X(u) = Y(u - 1/2).
inline QPoint cycle_point(const CycleParam& cp, const Rational& u) {
  return {-detail::y_of(cp.v_plus, cp.v_minus, Rational(u - Rational(1, 2))),
          -detail::y_of(cp.v_plus, cp.v_minus, u)};
}

struct ShapePrediction {
  PolygonKind kind;
  Rational length;  // cycle length, or the segment length when Degenerate
};

inline ShapePrediction delta_shape(const Rational& delta) {
  if (delta >= 2) return {PolygonKind::Pentagon, Rational(8)};
  if (delta > 1) return {PolygonKind::Heptagon, Rational(8)};
  if (delta > -1) return {PolygonKind::Square, Rational(4 * (delta + 1))};
  return {PolygonKind::Degenerate, std::min(Rational(1), Rational(-delta - 1))};
}

/// u in Xi: an integer, or a tie in the numerator (Theta^odd - Theta^even = -1)
/// or in the denominator (Theta^odd - Theta^even = delta) of yy.
inline bool is_exceptional(const CycleParam& cp, const Rational& u) {
  if (is_integer(u)) return true;
  Rational d = theta_odd(u) - theta_even(u);
  return d == -1 || d == cp.delta;
}

inline QPoint point_valuations(const CycleParam& cp, const Rational& u) {
  if (is_exceptional(cp, u))
    throw Error(Errc::exceptional_parameter, "u = " + u.get_str() + " lies in the exceptional set");
  Rational h = u - Rational(1, 2);
  if (is_exceptional(cp, h))
    throw Error(Errc::exceptional_parameter, "u - 1/2 = " + h.get_str() + " lies in the exceptional set");
  auto v = [&](const Rational& w) {
    Rational to = theta_odd(w), te = theta_even(w);
    return Rational(std::min(Rational(1 - te), Rational(-to)) -
                    std::min(Rational(cp.v_minus - te), Rational(cp.v_plus - to)));
  };
  return {v(h), v(u)};
}

// ---------------------------------------------------------------------------
// Sampling and reconstruction

struct Segment {
  QPoint a, b;
};

struct CycleSamples {
  Rational step, offset;
  std::vector<Rational> us;
  std::vector<QPoint> points;
  std::vector<bool> membership;           // per sample; empty when no curve given
  std::vector<QPoint> polygon;            // corners, counterclockwise (cyclic locus)
  std::vector<Segment> segments;          // undirected pieces (degenerate locus)
  bool degenerate = false;
  Rational length;                        // lattice perimeter, or total segment length
  std::vector<std::string> warnings;
  bool all_on_curve() const {
    return std::all_of(membership.begin(), membership.end(), [](bool b) { return b; });
  }
};

namespace detail {

struct Velocity {
  Rational dx, dy;  // per unit of u
  friend bool operator==(const Velocity& a, const Velocity& b) { return a.dx == b.dx && a.dy == b.dy; }
};

inline Rational lattice_len(const QPoint& a, const QPoint& b) {
  Rational dx = abs(Rational(b.x - a.x)), dy = abs(Rational(b.y - a.y));
  if (dx == 0) return dy;
  if (dy == 0) return dx;
  // primitive direction (p, q) has dx / p = dy / q; length = dx / p
  Rational ratio = dy / dx;  // = q / p in lowest terms
  return Rational(dx / Rational(ratio.get_den()));
}

inline bool same_direction(const QPoint& a, const QPoint& b, const QPoint& c) {
  Rational ux = b.x - a.x, uy = b.y - a.y, vx = c.x - b.x, vy = c.y - b.y;
  return ux * vy - uy * vx == 0 && ux * vx + uy * vy > 0;
}

}  // namespace detail

/// Samples the cycle at u = offset + k*step over [offset, offset + 4) and
/// rebuilds the traced polygon with exact corners. When `curve` is given every
/// sample is tested against trop f.
inline CycleSamples sample_cycle(const CycleParam& cp, const Rational& step = Rational(1, 16),
                                 std::optional<Rational> offset = std::nullopt,
                                 const TropPolynomial* curve = nullptr, int refine_depth = 6) {
  if (sgn(step) <= 0 || step.get_num() != 1) throw Error(Errc::invalid_argument, "step must be 1/n");
  CycleSamples out;
  out.step = step;
  Rational off = offset.value_or(Rational(step / 2));
  long n = to_int64(Rational(4 / step));
  auto grid_hits = [&](const Rational& o) {
    for (long k = 0; k < n; ++k) {
      Rational u = o + k * step;
      if (is_exceptional(cp, u) || is_exceptional(cp, Rational(u - Rational(1, 2)))) return true;
    }
    return false;
  };
  if (grid_hits(off)) {
    Rational tried = off;
    for (Rational o = step / 4; o > 0; o /= 2)
      if (!grid_hits(o)) {
        off = o;
        break;
      }
    if (grid_hits(off)) throw Error(Errc::exceptional_parameter, "no offset keeps the grid off the exceptional set");
    out.warnings.push_back("grid offset " + tried.get_str() + " meets the exceptional set; using " + off.get_str());
  }
  out.offset = off;
  for (long k = 0; k < n; ++k) {
    Rational u = off + k * step;
    out.us.push_back(u);
    out.points.push_back(point_valuations(cp, u));
    if (curve) out.membership.push_back(trop_eval(*curve, out.points.back().x, out.points.back().y).on_curve());
  }

  // refine in u where the velocity changes, then split into runs of constant velocity
  struct S {
    Rational u;
    QPoint p;
  };
  std::vector<S> pts;
  for (long k = 0; k < n; ++k) pts.push_back({out.us[k], out.points[k]});
  pts.push_back({off + 4, cycle_point(cp, off + 4)});
  auto vel = [](const S& a, const S& b) {
    Rational du = b.u - a.u;
    return detail::Velocity{Rational((b.p.x - a.p.x) / du), Rational((b.p.y - a.p.y) / du)};
  };
  for (int depth = 0; depth < refine_depth; ++depth) {
    std::vector<S> next{pts.front()};
    std::size_t m = pts.size() - 1;
    for (std::size_t k = 0; k < m; ++k) {
      auto v = vel(pts[k], pts[k + 1]);
      auto vp = vel(pts[(k + m - 1) % m], pts[(k + m - 1) % m + 1]);
      auto vn = vel(pts[(k + 1) % m], pts[(k + 1) % m + 1]);
      if (!(v == vp) || !(v == vn)) {
        Rational mid = (pts[k].u + pts[k + 1].u) / 2;
        next.push_back({mid, cycle_point(cp, mid)});
      }
      next.push_back(pts[k + 1]);
    }
    pts = std::move(next);
  }
  struct Run {
    std::size_t first, last;  // interval indices
    detail::Velocity v;
  };
  std::vector<Run> runs;
  std::size_t m = pts.size() - 1;
  for (std::size_t k = 0; k < m; ++k) {
    auto v = vel(pts[k], pts[k + 1]);
    if (!runs.empty() && runs.back().v == v) runs.back().last = k;
    else runs.push_back({k, k, v});
  }
  if (runs.size() > 1 && runs.front().v == runs.back().v) {
    runs.front().first = runs.back().first;
    runs.pop_back();
  }
  // single-interval runs between two different runs straddle a kink
  std::vector<Run> kept;
  for (std::size_t k = 0; k < runs.size(); ++k)
    if (runs[k].first != runs[k].last || runs.size() <= 2) kept.push_back(runs[k]);
  // corners: where consecutive affine pieces in u meet
  std::vector<QPoint> corners;
  for (std::size_t k = 0; k < kept.size(); ++k) {
    const Run &r1 = kept[k], &r2 = kept[(k + 1) % kept.size()];
    const S& a = pts[r1.last];
    const S& b = pts[r2.first];
    // P1(u) = a.p + (u - a.u) v1, P2(u) = b.p + (u - b.u) v2
    std::optional<Rational> ustar;
    Rational dvx = r1.v.dx - r2.v.dx, dvy = r1.v.dy - r2.v.dy;
    if (dvx != 0) ustar = (b.p.x - a.p.x + a.u * r1.v.dx - b.u * r2.v.dx) / dvx;
    else if (dvy != 0) ustar = (b.p.y - a.p.y + a.u * r1.v.dy - b.u * r2.v.dy) / dvy;
    if (!ustar) continue;
    Rational us = *ustar;
    if (b.u < a.u) us = us;  // wrap handled by periodicity of the affine pieces
    corners.push_back({a.p.x + (us - a.u) * r1.v.dx, a.p.y + (us - a.u) * r1.v.dy});
  }
  // drop points where the traced direction does not change
  std::vector<QPoint> poly;
  for (std::size_t k = 0; k < corners.size(); ++k) {
    const QPoint &p = corners[(k + corners.size() - 1) % corners.size()], &c = corners[k],
                 &nx = corners[(k + 1) % corners.size()];
    if (c == p) continue;
    if (!detail::same_direction(p, c, nx)) poly.push_back(c);
  }
  // the locus has period 2 in u: keep one traversal
  if (poly.size() % 2 == 0 && !poly.empty()) {
    std::size_t h = poly.size() / 2;
    bool doubled = true;
    for (std::size_t k = 0; k < h; ++k)
      if (!(poly[k] == poly[k + h])) doubled = false;
    if (doubled) poly.resize(h);
  }
  Rational area2 = 0;
  for (std::size_t k = 0; k < poly.size(); ++k) {
    auto& p = poly[k];
    auto& q = poly[(k + 1) % poly.size()];
    area2 += p.x * q.y - q.x * p.y;
  }
  out.length = 0;
  if (area2 == 0) {
    out.degenerate = true;
    std::vector<Segment> segs;
    for (std::size_t k = 0; k < poly.size(); ++k) {
      QPoint a = poly[k], b = poly[(k + 1) % poly.size()];
      if (b < a) std::swap(a, b);
      bool dup = false;
      for (auto& s : segs)
        if (s.a == a && s.b == b) dup = true;
      if (!dup && !(a == b)) segs.push_back({a, b});
    }
    std::sort(segs.begin(), segs.end(), [](const Segment& x, const Segment& y) {
      return x.a == y.a ? x.b < y.b : x.a < y.a;
    });
    out.segments = segs;
    for (auto& s : segs) out.length += detail::lattice_len(s.a, s.b);
  } else {
    if (area2 < 0) std::reverse(poly.begin(), poly.end());
    auto lowest = std::min_element(poly.begin(), poly.end());
    std::rotate(poly.begin(), lowest, poly.end());
    out.polygon = poly;
    for (std::size_t k = 0; k < poly.size(); ++k) out.length += detail::lattice_len(poly[k], poly[(k + 1) % poly.size()]);
  }
  return out;
}

/// The locus corners computed from the exact breakpoints of Y and X in u;
/// an independent check on sample_cycle.
inline std::vector<QPoint> exact_locus_corners(const CycleParam& cp) {
  std::vector<Rational> cand{Rational(0), Rational(1), Rational(1, 4), Rational(7, 4),
                             Rational((2 + cp.delta) / 4), Rational((6 - cp.delta) / 4)};
  std::vector<Rational> us;
  for (auto& c : cand)
    for (Rational shift : {Rational(0), Rational(1, 2)}) {
      Rational u = c + shift;
      u -= 2 * floor(Rational(u / 2));
      us.push_back(u);
    }
  std::sort(us.begin(), us.end());
  us.erase(std::unique(us.begin(), us.end()), us.end());
  std::vector<QPoint> pts;
  for (auto& u : us) pts.push_back(cycle_point(cp, u));
  std::vector<QPoint> corners;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const QPoint &p = pts[(k + pts.size() - 1) % pts.size()], &c = pts[k], &nx = pts[(k + 1) % pts.size()];
    if (c == p) continue;
    if (!detail::same_direction(p, c, nx)) corners.push_back(c);
  }
  return corners;
}

// ---------------------------------------------------------------------------
// Classification

struct Classification {
  TropCoefficientVector u;
  CycleParam cp;
  ShapePrediction predicted;
  TropicalCurve curve;
  std::optional<CycleReport> measured;  // absent when the curve has no cycle
  CycleReport report;
};

inline Classification classify(const FamilyParams& p) {
  CycleParam cp = cycle_param(p);
  EdwardsCoefficients c = family_coefficients(p);
  TropCoefficientVector u = trop_valuations(c);
  TropPolynomial f = TropPolynomial::from_valuations(u);
  Subdivision sub = regular_subdivision(f);
  TropicalCurve tc = dual_curve(sub);
  if (!is_balanced(tc)) throw Error(Errc::disagreement_bug, "constructed curve is not balanced");
  Classification out{u, cp, delta_shape(cp.delta), tc, std::nullopt, {}};
  try {
    out.measured = cycle_measure(tc);
  } catch (const Error& e) {
    if (e.code() != Errc::no_cycle) throw;
  }
  bool smooth_sub = subdivision_smoothness(sub);
  if (out.predicted.kind == PolygonKind::Degenerate) {
    out.report.kind = PolygonKind::Degenerate;
    out.report.lattice_length = out.predicted.length;
    out.report.smooth_by_subdivision = smooth_sub;
    if (out.measured && out.measured->kind != PolygonKind::Degenerate) {
      out.report.smooth_by_table1 = table1_smoothness(u, out.measured->kind);
      if (*out.report.smooth_by_table1 != smooth_sub)
        throw Error(Errc::disagreement_bug, "inequality and subdivision smoothness verdicts differ");
    }
  } else {
    if (!out.measured) throw Error(Errc::disagreement_bug, "predicted a cycle but the curve has none");
    out.report = *out.measured;
    if (out.report.kind != out.predicted.kind || out.report.lattice_length != out.predicted.length)
      throw Error(Errc::disagreement_bug, "measured " + kind_name(out.report.kind) + " of length " +
                                              out.report.lattice_length.get_str() + ", predicted " +
                                              kind_name(out.predicted.kind) + " of length " +
                                              out.predicted.length.get_str());
    out.report.smooth_by_subdivision = smooth_sub;
    out.report.smooth_by_table1 = table1_smoothness(u, out.report.kind);
    if (*out.report.smooth_by_table1 != smooth_sub)
      throw Error(Errc::disagreement_bug, "inequality and subdivision smoothness verdicts differ");
  }
  out.report.delta = cp.delta;
  return out;
}

}  // namespace tropedwards
