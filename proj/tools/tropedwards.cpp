// tropedwards: command-line front end.
//
//   tropedwards family   R S     coefficients, valuations, delta
//   tropedwards classify R S     cycle shape, length and smoothness
//   tropedwards cycle    R S     sampled cycle locus and curve membership
//   tropedwards verify           identity suite and j-invariant
//   tropedwards bt       R S     pole fit, trees, quotient, isometry
//   tropedwards render   FILE    SVG from a JSON document
//
// Exit codes: 0 success, 1 failed check or internal error, 2 precision,
// 3 degenerate or refused input, 4 parse or usage error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "tropedwards/tropedwards.hpp"

using namespace tropedwards;

namespace {

struct RunConfig {
  Rational horizon{kDefaultHorizon};
  std::optional<int> ram;
  Rational step{1, 16};
  int fit_order = kDefaultFitOrder;
  std::string out;
  std::string format = "json";
};

int exit_code(Errc c) {
  switch (c) {
    case Errc::insufficient_precision:
    case Errc::unknown_coefficient_valuation:
    case Errc::underdetermined_fit:
    case Errc::incomplete_fundamental_domain:
      return 2;
    case Errc::degenerate_params:
    case Errc::undefined_delta:
    case Errc::polar_point:
    case Errc::no_cycle:
    case Errc::exceptional_parameter:
    case Errc::not_a_square:
    case Errc::not_smooth:
    case Errc::offset_mismatch:
      return 3;
    case Errc::parse_error:
    case Errc::schema_mismatch:
    case Errc::invalid_argument:
      return 4;
    case Errc::disagreement_bug:
      return 1;
  }
  return 1;
}

Rational parse_rational_flag(const std::string& name, const std::string& text) {
  try {
    Rational r(text);
    r.canonicalize();
    if (sgn(r) <= 0) throw Error(Errc::invalid_argument, name + " must be positive");
    return r;
  } catch (const std::invalid_argument&) {
    throw Error(Errc::parse_error, name + ": '" + text + "' is not a rational number");
  }
}

void emit(const RunConfig& cfg, const std::string& text, const std::string& path_override = {}) {
  const std::string& path = path_override.empty() ? cfg.out : path_override;
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::invalid_argument, "cannot write " + path);
  f << text;
}

void emit_json(const RunConfig& cfg, const Json& j) { emit(cfg, j.dump(2) + "\n"); }

FamilyParams read_family(const std::string& r, const std::string& s, const RunConfig& cfg, Json& doc) {
  PuiseuxSeries rs = parse_series(r, cfg.horizon, cfg.ram), ss = parse_series(s, cfg.horizon, cfg.ram);
  doc["r"] = {{"text", print_series(rs)}, {"series", series_json(rs)}};
  doc["s"] = {{"text", print_series(ss)}, {"series", series_json(ss)}};
  return make_family(rs, ss);
}

int cmd_family(const std::string& r, const std::string& s, const RunConfig& cfg) {
  Json doc;
  FamilyParams p = read_family(r, s, cfg, doc);
  EdwardsCoefficients c = family_coefficients(p);
  doc["coefficients"] = {{"d12", series_json(c.d12)}, {"d34", series_json(c.d34)}, {"d5", series_json(c.d5)},
                         {"d67", series_json(c.d67)}, {"d8", series_json(c.d8)}};
  doc["u"] = trop_vector_json(trop_valuations(c));
  try {
    doc["delta"] = rational_json(cycle_param(p).delta);
  } catch (const Error& e) {
    if (e.code() != Errc::undefined_delta) throw;
    doc["delta"] = nullptr;
    doc["delta_error"] = {{"error", std::string(errc_name(e.code()))}, {"message", e.what()}};
  }
  if (cfg.format == "svg") {
    emit(cfg, render_subdivision(subdivision_json(
                  regular_subdivision(TropPolynomial::from_valuations(trop_valuations(c))))));
    return 0;
  }
  emit_json(cfg, doc);
  return 0;
}

int cmd_classify(const std::string& r, const std::string& s, const RunConfig& cfg) {
  Json doc;
  FamilyParams p = read_family(r, s, cfg, doc);
  Classification cl = classify(p);
  doc["delta"] = rational_json(cl.cp.delta);
  doc["u"] = trop_vector_json(cl.u);
  doc["predicted"] = prediction_json(cl.predicted);
  doc["report"] = cycle_report_json(cl.report);
  doc["curve"] = curve_json(cl.curve);
  if (cfg.format == "svg") {
    emit(cfg, render_curve(doc["curve"]));
    return 0;
  }
  emit_json(cfg, doc);
  return 0;
}

int cmd_cycle(const std::string& r, const std::string& s, const RunConfig& cfg) {
  Json doc;
  FamilyParams p = read_family(r, s, cfg, doc);
  CycleParam cp = cycle_param(p);
  TropPolynomial f = TropPolynomial::from_valuations(trop_valuations(family_coefficients(p)));
  CycleSamples cs = sample_cycle(cp, cfg.step, std::nullopt, &f);
  Json cyc = samples_json(cp, cs);
  if (cfg.format == "svg") {
    emit(cfg, render_cycle(cyc));
    return 0;
  }
  for (auto& [k, v] : cyc.items()) doc[k] = v;
  emit_json(cfg, doc);
  return 0;
}

int cmd_verify(const RunConfig& cfg) {
  if (cfg.format != "json") throw Error(Errc::invalid_argument, "verify only writes JSON");
  Json doc, ids = Json::array();
  bool ok = true;
  auto add = [&](const IdentityReport& r) {
    ok = ok && r.pass;
    ids.push_back(identity_json(r));
  };
  add(vanishing_report("d0 = 2 epsbar^2 eps^2 - a^2 (epsbar^4 + eps^4)", d0_series(cfg.horizon)));
  for (auto& r : theta_identity_checks(cfg.horizon)) add(r);
  IdentityReport j = j_invariant_check(cfg.horizon);
  add(j);
  doc["identities"] = ids;
  PuiseuxSeries js = j_of_a_squared(edwards_a_squared(cfg.horizon));
  Json coeffs = Json::array();
  for (long e : {-8L, 0L, 8L}) coeffs.push_back({{"exponent", e}, {"value", rational_json(js.coefficient(Rational(e)))}});
  doc["j_coefficients"] = coeffs;
  doc["status"] = ok ? "pass" : "fail";
  emit_json(cfg, doc);
  return ok ? 0 : 1;
}

Json cross_ratio_table(const SpannedTree& t, const Rational& lo, const Rational& width) {
  std::vector<End> fin;
  for (auto& e : t.ends)
    if (e.is_finite() && e.sign > 0 && e.exponent >= lo && e.exponent < lo + width) fin.push_back(e);
  Json rows = Json::array();
  auto row = [&](const End& w, const End& x, const End& y, const End& z) {
    rows.push_back({{"ends", {w.label, x.label, y.label, z.label}}, {"length", rational_json(cross_ratio_length(w, x, y, z))}});
  };
  for (std::size_t i = 0; i < fin.size(); ++i)
    for (std::size_t k = i + 1; k < fin.size(); ++k) row(End::zero_end(), fin[i], fin[k], End::infinity_end());
  for (std::size_t i = 0; i < fin.size(); ++i)
    for (std::size_t k = 0; k < fin.size(); ++k)
      for (std::size_t l = i + 1; l < fin.size(); ++l)
        if (k != i && k != l) row(fin[i], fin[k], fin[l], End::infinity_end());
  return rows;
}

int cmd_bt(const std::string& r, const std::string& s, const RunConfig& cfg) {
  Json doc;
  FamilyParams p = read_family(r, s, cfg, doc);
  BtResult b = bt_pipeline(p, cfg.fit_order);
  doc["offsets"] = {rational_json(b.fit.first.offset), rational_json(b.fit.second.offset)};
  doc["xi"] = {{"text", print_series(b.fit.first.xi)}, {"series", series_json(b.fit.first.xi)}};
  doc["eta"] = {{"text", print_series(b.fit.second.xi)}, {"series", series_json(b.fit.second.xi)}};
  doc["constant"] = {{"text", print_series(b.fit.constant)}, {"series", series_json(b.fit.constant)}};
  doc["residual"] = {{"valuation", rational_json(b.fit.residual_valuation)}, {"known_zero", b.fit.residual_known_zero}};
  doc["cross_ratio_checks"] = b.cross_ratio_checks;
  if (b.gamma) {
    doc["cross_ratios"] = cross_ratio_table(*b.gamma, Rational(-1, 2), Rational(4));
    doc["gamma"] = metric_graph_json(b.gamma->graph);
  } else {
    doc["cross_ratios"] = cross_ratio_table(b.gamma_bar, Rational(-1), Rational(8));
    doc["gamma"] = nullptr;
  }
  doc["gamma_bar"] = metric_graph_json(b.gamma_bar.graph);
  doc["quotient"] = metric_graph_json(b.quotient);
  doc["isometry"] = isometry_json(b.isometry);
  if (cfg.format == "svg") {
    emit(cfg, render_metric_graph(doc["quotient"]));
    if (!cfg.out.empty() && cfg.out != "-") {
      std::string stem = cfg.out.size() > 4 && cfg.out.ends_with(".svg") ? cfg.out.substr(0, cfg.out.size() - 4) : cfg.out;
      emit(cfg, render_metric_graph(doc["gamma_bar"]), stem + ".gamma_bar.svg");
      if (b.gamma) emit(cfg, render_metric_graph(doc["gamma"]), stem + ".gamma.svg");
    }
    return 0;
  }
  emit_json(cfg, doc);
  return b.isometry.isometric ? 0 : 1;
}

int cmd_render(const std::string& input, const RunConfig& cfg) {
  std::stringstream buf;
  if (input == "-") {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream f(input, std::ios::binary);
    if (!f) throw Error(Errc::invalid_argument, "cannot read " + input);
    buf << f.rdbuf();
  }
  Json j;
  try {
    j = Json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::parse_error, std::string("input is not JSON: ") + e.what());
  }
  emit(cfg, render_json(j));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tropical Edwards curves: families, cycles and Bruhat-Tits quotients"};
  app.require_subcommand(1);
  std::string horizon = "24", step = "1/16", r_expr, s_expr, input;
  if (const char* env = std::getenv("TROPEDWARDS_HORIZON")) horizon = env;
  int ram = 0;
  RunConfig cfg;

  auto common = [&](CLI::App* c) {
    c->add_option("--horizon", horizon, "truncation horizon in q-exponent units (default 24 or $TROPEDWARDS_HORIZON)");
    c->add_option("--ram", ram, "ramification index of the parameters (default inferred)")->check(CLI::PositiveNumber);
    c->add_option("--out", cfg.out, "output file (default stdout)");
    c->add_option("--format", cfg.format, "json or svg")->check(CLI::IsMember({"json", "svg"}));
  };
  auto params = [&](CLI::App* c) {
    c->add_option("r", r_expr, "r, e.g. \"1-3q\"")->required();
    c->add_option("s", s_expr, "s, e.g. \"-1+q^(3/2)\"")->required();
  };

  CLI::App* family = app.add_subcommand("family", "coefficients of f_{r,s}, their valuations and delta");
  CLI::App* classify_cmd = app.add_subcommand("classify", "cycle shape, lattice length and smoothness");
  CLI::App* cycle = app.add_subcommand("cycle", "sampled cycle locus and membership in the tropical curve");
  CLI::App* verify = app.add_subcommand("verify", "identity suite and j-invariant");
  CLI::App* bt = app.add_subcommand("bt", "pole fit, spanned trees, mod q^8 quotient and isometry");
  CLI::App* render = app.add_subcommand("render", "SVG from a JSON document written by another command");
  for (CLI::App* c : {family, classify_cmd, cycle, verify, bt, render}) common(c);
  for (CLI::App* c : {family, classify_cmd, cycle, bt}) params(c);
  cycle->add_option("--step", step, "grid step 1/n (default 1/16)");
  bt->add_option("--fit-order", cfg.fit_order, "number of fitted q-coefficients (default 8)")->check(CLI::PositiveNumber);
  render->add_option("input", input, "JSON file, or - for stdin")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 4;
  }

  try {
    cfg.horizon = parse_rational_flag("--horizon", horizon);
    cfg.step = parse_rational_flag("--step", step);
    if (ram > 0) cfg.ram = ram;
    if (*family) return cmd_family(r_expr, s_expr, cfg);
    if (*classify_cmd) return cmd_classify(r_expr, s_expr, cfg);
    if (*cycle) return cmd_cycle(r_expr, s_expr, cfg);
    if (*verify) return cmd_verify(cfg);
    if (*bt) return cmd_bt(r_expr, s_expr, cfg);
    if (*render) return cmd_render(input, cfg);
  } catch (const Error& e) {
    Json err{{"error", std::string(errc_name(e.code()))}, {"message", e.what()}};
    if (auto* pe = dynamic_cast<const ExprParseError*>(&e)) err["position"] = pe->position();
    std::cerr << err.dump() << "\n";
    return exit_code(e.code());
  }
  return 1;
}
