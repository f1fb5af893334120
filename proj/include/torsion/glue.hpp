#pragma once

// Gluing of degree-0 torsion for 1-D models: a circle cut into two arcs
// (Y = two points) or an interval cut once (Y = one point). Z1 carries
// absolute and Z2 relative conditions along Y.
//
// The analytic side uses the zeta engine; the combinatorial side uses the
// Thom-Smale complexes of an arc chain, the three-column double complex
// C(Z2, Y) -> C(Z) -> C(Z1) and the doubled one-sided complexes.

#include <string>
#include <vector>

#include "torsion/analytic.hpp"
#include "torsion/morse.hpp"
#include "torsion/spectral.hpp"

namespace torsion::glue {

struct GluingScenario {
  enum class Kind { Circle, Interval };
  Kind kind = Kind::Circle;
  double length = 2.0;  // of Z
  double split = 0.5;   // length(Z1) / length(Z)
  int rank = 1;
  Mat holonomy;         // circle only; empty = identity

  static GluingScenario circle(double length, double split, const Mat& holonomy);
  static GluingScenario interval(double length, double split, int rank);

  analytic::ModelGeometry z() const;
  analytic::ModelGeometry z1() const;  // absolute along Y
  analytic::ModelGeometry z2() const;  // relative along Y
  int chi_y() const;                   // number of points of Y
  std::string describe() const;
};

void validate(const GluingScenario& sc);

// Arc chain with arcs Z1 then Z2 (holonomy on the closing instanton).
morse::MorseData morse_model(const GluingScenario& sc);

// Mayer-Vietoris sequence 0 -> H^0(Z2, Y) -> H^0(Z) -> H^0(Z1) -> H^1(Z2, Y)
// -> ... with H^q(Z2, Y), H^q(Z), H^q(Z1) in degrees 3q, 3q+1, 3q+2 and L^2
// metrics on every term.
struct MayerVietorisData {
  MetricComplex sequence;
  std::vector<std::string> labels;  // per degree
  double torsion = 0;
  // The three-column double complex and its column page E_1 with the
  // metrics induced by the cochain metrics and with L^2 metrics.
  spectral::DoubleComplexData double_complex;
  spectral::SpectralPage e1_induced, e1_l2;
};
MayerVietorisData build_mv(const GluingScenario& sc);

struct GluingReport {
  double t_z = 0, t_abs = 0, t_rel = 0;
  double lhs = 0;         // t_z - t_abs - t_rel
  double correction = 0;  // log 2 / 2 * rank * chi(Y)
  double t_mv = 0;
  double residual = 0;    // lhs - correction - t_mv
};
GluingReport verify_gluing_degree0(const GluingScenario& sc, const analytic::ZetaOptions& opt = {});

struct Check {
  std::string name;
  double value = 0;
  double residual = 0;
};
struct MorseSideReport {
  std::vector<Check> checks;
  double worst() const;
};
// Finite-dimensional identities along the combinatorial proof of the
// gluing formula, each as a residual.
MorseSideReport verify_morse_side(const GluingScenario& sc, const analytic::ZetaOptions& opt = {});

struct DoubleFormulaReport {
  std::vector<Check> checks;
  double worst_analytic() const;
  double worst_combinatorial() const;
};
// Double formulas for both sides of the scenario and g in {1, reflection}:
// analytic (heat route on the doubled spectrum against the zeta torsions of
// the absolute and relative problems) and combinatorial (doubled Thom-Smale
// complexes against their +- parts).
DoubleFormulaReport verify_double_formula(const GluingScenario& sc);

// L^2 metric, in the representatives of entry (s, n) of a column page E_1,
// of the classes of the given cocycles of column s with L^2 Gram matrix gram.
Mat l2_page_metric(const spectral::DoubleComplexData& dc, const spectral::SpectralPage& e1, int s, int n,
                   const Mat& cocycles, const Mat& gram);

// The sweep of lengths, split fractions, holonomies and ranks used by the
// verification suite.
std::vector<GluingScenario> standard_sweep();

}  // namespace torsion::glue
