#pragma once

// Static SVG pictures of curves, subdivisions, cycle loci and metric graphs.
// Geometry stays rational until the last step, where coordinates are written
// with 6 decimals, rounding half to even.

#include <sstream>
#include <string>
#include <vector>

#include "tropedwards/json_io.hpp"

namespace tropedwards {

inline std::string decimal6(const Rational& x) {
  Rational scaled = x * 1000000;
  Integer f = floor_div(scaled);
  Rational frac = scaled - f;
  if (frac > Rational(1, 2) || (frac == Rational(1, 2) && mpz_odd_p(f.get_mpz_t()))) f += 1;
  bool neg = f < 0;
  Integer a = abs(f);
  std::string digits = a.get_str();
  if (digits.size() < 7) digits.insert(0, 7 - digits.size(), '0');
  std::string out = (neg ? "-" : "") + digits.substr(0, digits.size() - 6) + "." + digits.substr(digits.size() - 6);
  return out == "-0.000000" ? "0.000000" : out;
}

namespace detail {

/// Maps rational plane coordinates to pixels, y pointing up.
struct Viewport {
  Rational min_x, min_y, max_x, max_y;
  Rational scale{40}, margin{1};
  bool empty = true;

  void include(const QPoint& p) {
    if (empty) {
      min_x = max_x = p.x;
      min_y = max_y = p.y;
      empty = false;
      return;
    }
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  Rational width() const { return Rational((max_x - min_x + 2 * margin) * scale); }
  Rational height() const { return Rational((max_y - min_y + 2 * margin) * scale); }
  std::string x(const Rational& v) const { return decimal6(Rational((v - min_x + margin) * scale)); }
  std::string y(const Rational& v) const { return decimal6(Rational((max_y - v + margin) * scale)); }
};

class SvgWriter {
 public:
  explicit SvgWriter(const Viewport& vp) : vp_(vp) {}

  void line(const QPoint& a, const QPoint& b, const std::string& style) {
    body_ << "  <line x1=\"" << vp_.x(a.x) << "\" y1=\"" << vp_.y(a.y) << "\" x2=\"" << vp_.x(b.x) << "\" y2=\""
          << vp_.y(b.y) << "\" style=\"" << style << "\"/>\n";
  }
  void dot(const QPoint& p, const std::string& r, const std::string& fill) {
    body_ << "  <circle cx=\"" << vp_.x(p.x) << "\" cy=\"" << vp_.y(p.y) << "\" r=\"" << r << "\" fill=\"" << fill
          << "\"/>\n";
  }
  void polygon(const std::vector<QPoint>& pts, const std::string& style) {
    body_ << "  <path d=\"";
    for (std::size_t k = 0; k < pts.size(); ++k)
      body_ << (k ? " L " : "M ") << vp_.x(pts[k].x) << " " << vp_.y(pts[k].y);
    body_ << " Z\" style=\"" << style << "\"/>\n";
  }
  void text(const QPoint& p, const std::string& s) {
    body_ << "  <text x=\"" << vp_.x(p.x) << "\" y=\"" << vp_.y(p.y) << "\" font-size=\"10\">" << escape(s)
          << "</text>\n";
  }

  std::string finish(const std::string& title) const {
    std::ostringstream os;
    std::string w = decimal6(vp_.width()), h = decimal6(vp_.height());
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w
       << " " << h << "\">\n";
    os << "  <title>" << escape(title) << "</title>\n";
    os << body_.str() << "</svg>\n";
    return os.str();
  }
  std::string fragment() const { return body_.str(); }

  static std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
      if (c == '<') out += "&lt;";
      else if (c == '>') out += "&gt;";
      else if (c == '&') out += "&amp;";
      else out += c;
    }
    return out;
  }

 private:
  Viewport vp_;
  std::ostringstream body_;
};

inline QPoint lattice_point_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
    throw Error(Errc::schema_mismatch, "expected a lattice point [i, j], got " + j.dump());
  return {Rational(j[0].get<long>()), Rational(j[1].get<long>())};
}

}  // namespace detail

/// Tropical curve; rays are drawn with lattice length 2.
inline std::string render_curve(const Json& j) {
  std::vector<QPoint> v;
  for (auto& p : j.at("vertices")) v.push_back(point_from_json(p));
  auto ray_end = [&](const Json& r) {
    QPoint a = v.at(r.at("at").get<std::size_t>());
    return QPoint{Rational(a.x + 2 * r["dir"][0].get<long>()), Rational(a.y + 2 * r["dir"][1].get<long>())};
  };
  detail::Viewport vp;
  for (auto& p : v) vp.include(p);
  for (auto& r : j.at("rays")) vp.include(ray_end(r));
  detail::SvgWriter w(vp);
  auto stroke = [](const Json& e) { return "stroke:black;stroke-width:" + std::to_string(e.value("weight", 1) * 2); };
  for (auto& e : j.at("edges")) w.line(v.at(e.at("from").get<std::size_t>()), v.at(e.at("to").get<std::size_t>()), stroke(e));
  for (auto& r : j.at("rays")) w.line(v.at(r.at("at").get<std::size_t>()), ray_end(r), stroke(r) + ";stroke-dasharray:4 2");
  for (auto& p : v) w.dot(p, "3", "black");
  return w.finish("tropical curve");
}

/// Newton subdivision; unimodular cells are shaded.
inline std::string render_subdivision(const Json& j) {
  detail::Viewport vp;
  vp.scale = 80;
  vp.margin = Rational(1, 2);
  std::vector<std::vector<QPoint>> cells;
  for (auto& c : j.at("cells")) {
    cells.emplace_back();
    for (auto& p : c) {
      cells.back().push_back(detail::lattice_point_from_json(p));
      vp.include(cells.back().back());
    }
  }
  detail::SvgWriter w(vp);
  for (auto& c : cells) {
    Rational twice(0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      const QPoint &a = c[k], &b = c[(k + 1) % c.size()];
      twice += a.x * b.y - a.y * b.x;
    }
    bool unimodular = c.size() == 3 && abs(twice) == 1;
    w.polygon(c, std::string("stroke:black;stroke-width:2;fill:") + (unimodular ? "#b8d8f0" : "#f6d0c8"));
  }
  for (auto& c : cells)
    for (auto& p : c) w.dot(p, "4", "black");
  return w.finish("subdivision");
}

inline std::string cycle_fragment(const Json& j, detail::Viewport& vp, bool fit) {
  std::vector<QPoint> samples, poly;
  std::vector<std::pair<QPoint, QPoint>> segs;
  for (auto& p : j.at("samples")) samples.push_back(point_from_json(p));
  for (auto& p : j.value("reconstructed_polygon", Json::array())) poly.push_back(point_from_json(p));
  for (auto& s : j.value("segments", Json::array())) segs.emplace_back(point_from_json(s[0]), point_from_json(s[1]));
  if (fit) {
    for (auto& p : samples) vp.include(p);
    for (auto& p : poly) vp.include(p);
  }
  detail::SvgWriter w(vp);
  if (!poly.empty() && !j.value("degenerate", false)) w.polygon(poly, "stroke:black;stroke-width:2;fill:none");
  for (auto& [a, b] : segs) w.line(a, b, "stroke:black;stroke-width:2");
  for (auto& p : samples) w.dot(p, "2", "#c03020");
  if (j.contains("delta")) {
    Rational d = rational_from_json(j["delta"]);
    w.text({vp.min_x - vp.margin / 2, vp.max_y + vp.margin / 2}, "delta = " + d.get_str());
  }
  return w.fragment();
}

/// Sampled cycle locus with its reconstructed polygon or segments.
inline std::string render_cycle(const Json& j) {
  detail::Viewport vp;
  std::string body = cycle_fragment(j, vp, true);
  detail::SvgWriter w(vp);
  std::string s = w.finish("cycle locus");
  return s.insert(s.rfind("</svg>"), body);
}

/// A row of cycle loci, one per panel, on a common scale.
inline std::string render_panels(const Json& j) {
  const Json& panels = j.at("panels");
  std::ostringstream inner;
  Rational x(0), height(0);
  for (auto& p : panels) {
    detail::Viewport vp;
    std::string body = cycle_fragment(p, vp, true);
    inner << "  <g transform=\"translate(" << decimal6(x) << " 0)\">\n" << body << "  </g>\n";
    x += vp.width();
    height = std::max(height, vp.height());
  }
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << decimal6(x) << "\" height=\"" << decimal6(height)
     << "\" viewBox=\"0 0 " << decimal6(x) << " " << decimal6(height) << "\">\n";
  os << "  <title>cycle loci (" << panels.size() << " panels)</title>\n" << inner.str() << "</svg>\n";
  return os.str();
}

/// Metric graph laid out with central-line nodes on a horizontal line at
/// their heights, closed by a return edge when the graph has a cycle, and
/// branches drawn upward.
inline std::string render_metric_graph(const Json& j) {
  MetricGraph g = metric_graph_from_json(j);
  std::size_t n = g.node_count();
  std::vector<std::optional<QPoint>> pos(n);
  std::vector<std::vector<std::pair<std::size_t, Rational>>> adj(n);
  for (auto& e : g.edges) {
    adj[e.a].emplace_back(e.b, e.len);
    adj[e.b].emplace_back(e.a, e.len);
  }
  std::optional<Rational> lo;
  for (std::size_t v = 0; v < n; ++v)
    if (g.heights[v]) lo = lo ? std::min(*lo, *g.heights[v]) : *g.heights[v];
  if (!lo) throw Error(Errc::schema_mismatch, "metric graph has no central line heights to lay out");
  std::vector<std::size_t> stack;
  for (std::size_t v = 0; v < n; ++v)
    if (g.heights[v]) {
      pos[v] = QPoint{Rational(*g.heights[v] - *lo), Rational(0)};
      stack.push_back(v);
    }
  std::vector<int> used(n, 0);
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    for (auto& [w, len] : adj[v]) {
      if (pos[w]) continue;
      Rational dx = Rational(used[v]++, 2);
      pos[w] = QPoint{Rational(pos[v]->x + dx), Rational(pos[v]->y + len)};
      stack.push_back(w);
    }
  }
  detail::Viewport vp;
  for (auto& p : pos)
    if (p) vp.include(*p);
  Rational drop(-1, 2);
  if (g.cycle_len) vp.include({Rational(0), drop});
  detail::SvgWriter w(vp);
  for (auto& e : g.edges) {
    if (!pos[e.a] || !pos[e.b]) throw Error(Errc::schema_mismatch, "metric graph is not connected");
    const QPoint &a = *pos[e.a], &b = *pos[e.b];
    if (g.heights[e.a] && g.heights[e.b] && b.x < a.x) {
      // the closing edge of the cycle runs below the line
      w.line(a, {a.x, drop}, "stroke:black;stroke-width:2");
      w.line({a.x, drop}, {b.x, drop}, "stroke:black;stroke-width:2");
      w.line({b.x, drop}, b, "stroke:black;stroke-width:2");
    } else {
      w.line(a, b, "stroke:black;stroke-width:2");
    }
  }
  std::map<std::size_t, int> end_count;
  for (auto& e : g.ends) {
    const QPoint& a = *pos.at(e.at);
    int k = end_count[e.at]++;
    QPoint tip{Rational(a.x + Rational(k, 4)), Rational(a.y + Rational(1, 2))};
    w.line(a, tip, "stroke:#3060c0;stroke-width:1;stroke-dasharray:3 2");
    w.text(tip, e.label);
  }
  for (auto& p : pos) w.dot(*p, "3", "black");
  return w.finish("metric graph");
}

/// Picks the renderer from the document's shape. Reports from the CLI are
/// unwrapped to the first picture they contain.
inline std::string render_json(const Json& j) {
  if (!j.is_object()) throw Error(Errc::schema_mismatch, "expected a JSON object");
  if (j.contains("panels")) return render_panels(j);
  if (j.contains("nodes")) return render_metric_graph(j);
  if (j.contains("vertices") && j.contains("rays")) return render_curve(j);
  if (j.contains("samples")) return render_cycle(j);
  if (j.contains("cells")) return render_subdivision(j);
  for (const char* key : {"quotient", "curve", "cycle", "subdivision"})
    if (j.contains(key) && j[key].is_object()) return render_json(j[key]);
  throw Error(Errc::schema_mismatch, "no known picture in this document");
}

}  // namespace tropedwards
