// Walks the square example r = 1 - 3q, s = -1 + q through every stage:
// coefficients, tropical curve, cycle parametrization and the quotient tree.

#include <iostream>

#include "tropedwards/tropedwards.hpp"

using namespace tropedwards;

int main() {
  FamilyParams p = make_family(parse_series("1-3q"), parse_series("-1+q"));
  std::cout << "r = " << print_series(p.r) << ", s = " << print_series(p.s) << "\n\n";

  EdwardsCoefficients c = family_coefficients(p);
  TropCoefficientVector u = trop_valuations(c);
  std::cout << "valuations: u12 = " << u.u12 << ", u34 = " << u.u34 << ", u5 = " << u.u5 << ", u67 = " << u.u67
            << ", u8 = " << u.u8 << "\n";

  Classification cl = classify(p);
  std::cout << "delta = " << cl.cp.delta << ", cycle: " << kind_name(cl.report.kind) << " of lattice length "
            << cl.report.lattice_length << ", smooth: " << std::boolalpha << *cl.report.smooth_by_subdivision << "\n";
  std::cout << "corners:";
  for (auto& q : cl.report.polygon) std::cout << " (" << q.x << ", " << q.y << ")";
  std::cout << "\n\n";

  TropPolynomial f = TropPolynomial::from_valuations(u);
  CycleSamples cs = sample_cycle(cl.cp, Rational(1, 16), std::nullopt, &f);
  std::cout << cs.points.size() << " cycle samples, all on the curve: " << cs.all_on_curve() << "\n";
  for (Rational t : {Rational(1, 32), Rational(17, 32), Rational(33, 32)}) {
    QPoint q = cycle_point(cl.cp, t);
    std::cout << "  u = " << t << " -> (" << q.x << ", " << q.y << ")\n";
  }

  BtResult b = bt_pipeline(p);
  std::cout << "\nxi  = " << print_series(b.fit.first.xi) << "\neta = " << print_series(b.fit.second.xi) << "\n";
  std::cout << "quotient:   " << b.isometry.graph_form.text() << "\ncurve:      " << b.isometry.curve_form.text()
            << "\nisometric:  " << b.isometry.isometric << " (" << b.cross_ratio_checks << " cross ratios checked)\n";
}
