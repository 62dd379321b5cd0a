#pragma once

// JSON forms of the library's values. Every rational is a [num, den] pair;
// integers too large for 64 bits are written as decimal strings.

#include <string>
#include <vector>

#include "json.hpp"
#include "tropedwards/bttree.hpp"
#include "tropedwards/edwards.hpp"
#include "tropedwards/error.hpp"
#include "tropedwards/series.hpp"
#include "tropedwards/thetaparam.hpp"
#include "tropedwards/tropcurve.hpp"

namespace tropedwards {

using Json = nlohmann::ordered_json;

inline Json integer_json(const Integer& z) {
  if (z.fits_slong_p()) return Json(z.get_si());
  return Json(z.get_str());
}

inline Integer integer_from_json(const Json& j) {
  if (j.is_number_integer()) return Integer(j.get<long>());
  if (j.is_string()) return Integer(j.get<std::string>());
  throw Error(Errc::schema_mismatch, "expected an integer, got " + j.dump());
}

inline Json rational_json(const Rational& x) { return Json::array({integer_json(x.get_num()), integer_json(x.get_den())}); }

inline Rational rational_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(Errc::schema_mismatch, "expected [num, den], got " + j.dump());
  Integer d = integer_from_json(j[1]);
  if (d == 0) throw Error(Errc::schema_mismatch, "zero denominator");
  Rational r(integer_from_json(j[0]), d);
  r.canonicalize();
  return r;
}

inline Json point_json(const QPoint& p) { return Json::array({rational_json(p.x), rational_json(p.y)}); }

inline QPoint point_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(Errc::schema_mismatch, "expected [x, y], got " + j.dump());
  return {rational_from_json(j[0]), rational_from_json(j[1])};
}

inline Json series_json(const PuiseuxSeries& s) {
  Json terms = Json::array();
  for (auto& [e, c] : s.terms())
    terms.push_back({integer_json(c.get_num()), integer_json(c.get_den()), integer_json(e.get_num()),
                     integer_json(e.get_den())});
  return Json{{"ram", s.ram()}, {"horizon", rational_json(s.horizon())}, {"terms", terms}};
}

inline PuiseuxSeries series_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("terms") || !j.contains("horizon"))
    throw Error(Errc::schema_mismatch, "not a series object");
  std::map<Rational, Rational> m;
  for (auto& t : j["terms"]) {
    if (!t.is_array() || t.size() != 4) throw Error(Errc::schema_mismatch, "series term must have 4 entries");
    Rational c(integer_from_json(t[0]), integer_from_json(t[1])), e(integer_from_json(t[2]), integer_from_json(t[3]));
    c.canonicalize();
    e.canonicalize();
    m[e] += c;
  }
  return PuiseuxSeries::from_terms(m, rational_from_json(j["horizon"]), j.value("ram", 1));
}

inline Json valuation_json(const Valuation& v) {
  if (v.is_known()) return Json{{"known", rational_json(v.value())}};
  return Json{{"at_least", rational_json(v.bound())}};
}

inline Json identity_json(const IdentityReport& r) {
  Json j{{"identity", r.identity}, {"status", r.pass ? "pass" : "fail"}};
  if (r.first_mismatch_exponent) j["first_mismatch_exponent"] = rational_json(*r.first_mismatch_exponent);
  j["horizon"] = rational_json(r.horizon);
  return j;
}

inline Json lattice_json(const LatticePoint& p) { return Json::array({p.i, p.j}); }

inline Json subdivision_json(const Subdivision& sub) {
  Json cells = Json::array();
  for (auto& c : sub.cells) {
    Json cell = Json::array();
    for (auto& p : c.vertices) cell.push_back(lattice_json(p));
    cells.push_back(cell);
  }
  return Json{{"cells", cells}};
}

inline Json curve_json(const TropicalCurve& tc) {
  Json v = Json::array(), e = Json::array(), r = Json::array();
  for (auto& p : tc.vertices) v.push_back(point_json(p));
  for (auto& x : tc.edges)
    e.push_back({{"from", x.from}, {"to", x.to}, {"weight", x.weight}, {"dir", {x.dir.x, x.dir.y}}});
  for (auto& x : tc.rays) r.push_back({{"at", x.at}, {"dir", {x.dir.x, x.dir.y}}, {"weight", x.weight}});
  return Json{{"vertices", v}, {"edges", e}, {"rays", r}, {"subdivision", subdivision_json(tc.subdivision)}};
}

inline Json cycle_report_json(const CycleReport& c) {
  Json j{{"kind", kind_name(c.kind)}, {"lattice_length", rational_json(c.lattice_length)}};
  j["delta"] = c.delta ? rational_json(*c.delta) : Json(nullptr);
  j["smooth_by_table1"] = c.smooth_by_table1 ? Json(*c.smooth_by_table1) : Json(nullptr);
  j["smooth_by_subdivision"] = c.smooth_by_subdivision ? Json(*c.smooth_by_subdivision) : Json(nullptr);
  Json poly = Json::array();
  for (auto& p : c.polygon) poly.push_back(point_json(p));
  j["polygon"] = poly;
  return j;
}

inline Json trop_vector_json(const TropCoefficientVector& u) {
  return Json{{"u12", valuation_json(u.u12)}, {"u34", valuation_json(u.u34)}, {"u5", valuation_json(u.u5)},
              {"u67", valuation_json(u.u67)}, {"u8", valuation_json(u.u8)}};
}

inline Json prediction_json(const ShapePrediction& s) {
  return Json{{"kind", kind_name(s.kind)}, {"length", rational_json(s.length)}};
}

inline Json samples_json(const CycleParam& cp, const CycleSamples& cs) {
  Json j{{"delta", rational_json(cp.delta)}, {"predicted", prediction_json(delta_shape(cp.delta))}};
  j["step"] = rational_json(cs.step);
  j["offset"] = rational_json(cs.offset);
  Json pts = Json::array(), poly = Json::array(), segs = Json::array();
  for (auto& p : cs.points) pts.push_back(point_json(p));
  for (auto& p : cs.polygon) poly.push_back(point_json(p));
  for (auto& s : cs.segments) segs.push_back(Json::array({point_json(s.a), point_json(s.b)}));
  j["samples"] = pts;
  j["reconstructed_polygon"] = poly;
  j["segments"] = segs;
  j["degenerate"] = cs.degenerate;
  j["length"] = rational_json(cs.length);
  j["on_curve"] = cs.all_on_curve();
  j["warnings"] = cs.warnings;
  return j;
}

inline Json metric_graph_json(const MetricGraph& g) {
  Json nodes = Json::array(), heights = Json::array(), edges = Json::array(), ends = Json::array();
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    nodes.push_back(v);
    heights.push_back(g.heights[v] ? rational_json(*g.heights[v]) : Json(nullptr));
  }
  for (auto& e : g.edges) edges.push_back({{"a", e.a}, {"b", e.b}, {"len", rational_json(e.len)}});
  for (auto& e : g.ends) ends.push_back({{"at", e.at}, {"label", e.label}});
  Json j{{"nodes", nodes}, {"edges", edges}, {"ends", ends}};
  j["cycle_len"] = g.cycle_len ? rational_json(*g.cycle_len) : Json(nullptr);
  j["heights"] = heights;
  return j;
}

inline MetricGraph metric_graph_from_json(const Json& j) {
  MetricGraph g;
  std::size_t n = j.at("nodes").size();
  for (std::size_t v = 0; v < n; ++v) {
    std::optional<Rational> h;
    if (j.contains("heights") && v < j["heights"].size() && !j["heights"][v].is_null())
      h = rational_from_json(j["heights"][v]);
    g.add_node(h);
  }
  for (auto& e : j.at("edges")) {
    std::size_t a = e.at("a").get<std::size_t>(), b = e.at("b").get<std::size_t>();
    if (a >= n || b >= n) throw Error(Errc::schema_mismatch, "edge refers to a missing node");
    g.edges.push_back({a, b, rational_from_json(e.at("len"))});
  }
  for (auto& e : j.at("ends")) g.ends.push_back({e.at("at").get<std::size_t>(), e.at("label").get<std::string>()});
  if (j.contains("cycle_len") && !j["cycle_len"].is_null()) g.cycle_len = rational_from_json(j["cycle_len"]);
  return g;
}

inline Json canonical_json(const CanonicalForm& c) {
  return Json{{"cycle_length", rational_json(c.cycle_length)}, {"text", c.text()}};
}

inline Json isometry_json(const IsometryReport& r) {
  Json j{{"isometric", r.isometric}, {"graph_form", canonical_json(r.graph_form)},
         {"curve_form", canonical_json(r.curve_form)}};
  j["first_discrepancy"] = r.first_discrepancy ? Json(*r.first_discrepancy) : Json(nullptr);
  return j;
}

}  // namespace tropedwards
