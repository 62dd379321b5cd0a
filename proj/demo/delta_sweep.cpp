// Writes the cycle loci for delta in {-5/2, -3/2, -1/2, 1, 3/2, 2, 9/4} as
// one JSON panel document and its SVG picture.
//
//   demo_delta_sweep [output-prefix]     (default: delta_sweep)

#include <fstream>
#include <iostream>

#include "tropedwards/tropedwards.hpp"

using namespace tropedwards;

int main(int argc, char** argv) {
  std::string prefix = argc > 1 ? argv[1] : "delta_sweep";
  const std::vector<std::pair<const char*, const char*>> cases{
      {"1-q^(5/2)", "1+q^(5/2)"}, {"1+q^(3/2)", "1-q^(3/2)"}, {"1+q^(1/2)", "1-q^(1/2)"}, {"1-3q", "-1+q"},
      {"1+q^(3/2)", "-1+q^(3/2)"}, {"1+q^2", "-1+q^2"},        {"1+q^(9/4)", "-1+q^(9/4)"}};
  Json panels = Json::array();
  for (auto [r, s] : cases) {
    FamilyParams p = make_family(parse_series(r), parse_series(s));
    CycleParam cp = cycle_param(p);
    TropPolynomial f = TropPolynomial::from_valuations(trop_valuations(family_coefficients(p)));
    CycleSamples cs = sample_cycle(cp, Rational(1, 16), std::nullopt, &f);
    ShapePrediction pr = delta_shape(cp.delta);
    std::cout << "delta = " << cp.delta << ": " << kind_name(pr.kind);
    if (cs.degenerate)
      std::cout << ", " << cs.segments.size() << " segments of total length " << cs.length << " (predicted "
                << pr.length << " each)";
    else
      std::cout << ", length " << cs.length << " (predicted " << pr.length << ")";
    std::cout << ", on curve: " << std::boolalpha << cs.all_on_curve() << "\n";
    panels.push_back(samples_json(cp, cs));
  }
  Json doc{{"panels", panels}};
  std::ofstream(prefix + ".json") << doc.dump(2) << "\n";
  std::ofstream(prefix + ".svg") << render_json(doc);
  std::cout << "wrote " << prefix << ".json and " << prefix << ".svg\n";
}
