#pragma once

// Degree-0 analytic torsion of 1-D model fibers from explicit spectra.
//
// Every spectrum used here is a finite union of families
//   lambda_n = (c (n + alpha))^2,  n >= 0,  alpha in (0, 1],
// carrying a real weight (a multiplicity, or a trace of a group element
// on the eigenspaces), plus weighted zero modes.

#include <array>
#include <utility>
#include <vector>

#include "torsion/linalg.hpp"

namespace torsion::analytic {

enum class Bc { Abs, Rel };

struct ModelGeometry {
  enum class Kind { Circle, Interval };
  Kind kind = Kind::Circle;
  double length = 1.0;
  Mat holonomy;                      // circle: rank x rank, unitary
  Bc left = Bc::Abs, right = Bc::Abs;  // interval: condition at x = 0, x = L
  int interval_rank = 1;

  static ModelGeometry circle(double length, const Mat& holonomy);
  static ModelGeometry interval(double length, Bc bc, int rank = 1);
  static ModelGeometry interval(double length, Bc left, Bc right, int rank);
  int rank() const;
  // Euler characteristic of the boundary (number of boundary points).
  int boundary_points() const { return kind == Kind::Circle ? 0 : 2; }
};

// Throws Domain / Dimension / Unsupported.
void validate(const ModelGeometry& g);

struct Family {
  double c = 1;
  double alpha = 1;
  double weight = 1;
};

struct DegreeSpectrum {
  std::vector<Family> families;
  double zero_modes = 0;  // weighted count
};

struct SpectrumData {
  std::array<DegreeSpectrum, 2> degree;
};

SpectrumData spectrum(const ModelGeometry& g);

// Spectrum of the double of an interval (the circle of length 2L, trivial
// bundle of the same rank) with weights tr(g | E_lambda), g the identity
// (`reflect` = false) or the reflection (`reflect` = true).
SpectrumData double_spectrum(const ModelGeometry& interval, bool reflect);

enum class ZetaMethod { ClosedForm, EulerMaclaurin };

struct ZetaOptions {
  ZetaMethod method = ZetaMethod::ClosedForm;
  double tolerance = 1e-10;  // bound on the Euler-Maclaurin remainder
  int terms = 1000;          // explicit terms before the tail correction
};

// zeta'_H(0, alpha) for the Hurwitz zeta function.
double hurwitz_zeta_prime0(double alpha, const ZetaOptions& opt = {});

// -zeta'(0) of one family: sum over n >= 0 of log (c (n + alpha))^2,
// zeta-regularized, times the weight.
double family_log_det(const Family& f, const ZetaOptions& opt = {});

// log det' Delta_q.
double zeta_log_det(const SpectrumData& s, int q, const ZetaOptions& opt = {});

// 1/2 sum_q (-1)^q q log det' Delta_q = -1/2 log det' Delta_1.
double scalar_torsion(const ModelGeometry& g, const ZetaOptions& opt = {});
double scalar_torsion(const SpectrumData& s, const ZetaOptions& opt = {});
// The same value from the degree-0 spectrum (1-D Hodge duality).
double scalar_torsion_from_degree0(const SpectrumData& s, const ZetaOptions& opt = {});

// Equivariant torsion of the double of an interval for g = 1 or the
// reflection.
double equivariant_scalar_torsion(const ModelGeometry& interval, bool reflect, const ZetaOptions& opt = {});

// h(t) = 1/2 sum_q (-1)^q q sum_lambda (1 - t lambda / 2) e^{-t lambda / 4}.
double heat_supertrace(const SpectrumData& s, double t);

struct HeatCounterterms {
  double chi_rank = 0;   // sum_q (-1)^q b_q (weighted), = chi_bd rk(F)
  double chi_prime = 0;  // sum_q (-1)^q q b_q
  // The small-t limit 1/4 m chi_bd rk(F) (m = 1) and the large-t limit
  // chi'/2 of h(t).
  double small_t_limit() const { return 0.25 * chi_rank; }
  double large_t_limit() const { return 0.5 * chi_prime; }
};
HeatCounterterms heat_counterterms(const SpectrumData& s);

struct HeatIntegralResult {
  double value = 0;
  double error = 0;
  int evaluations = 0;
};

// -int_0^inf [h(t) - chi'/2 - (chi rk / 4 - chi'/2)(1 - t/2) e^{-t/4}] dt/t.
HeatIntegralResult torsion_via_heat_integral(const SpectrumData& s, double abs_tol = 1e-10);
HeatIntegralResult torsion_via_heat_integral(const ModelGeometry& g, double abs_tol = 1e-10);

// Closed-form L^2 harmonic representatives. Degree 0: flat sections s;
// degree 1: forms s dx. Columns of `sections` are the values of s at x = 0
// (orthonormal in h^F), `gram` their L^2 Gram matrix.
struct HarmonicBasis {
  Mat sections;
  Mat gram;
};
struct L2Cohomology {
  std::array<HarmonicBasis, 2> degree;
};
L2Cohomology l2_cohomology(const ModelGeometry& g);

// All eigenvalues <= lambda_max of Delta_q, with weights, sorted; zero
// modes included. For multiset identities on truncations.
std::vector<std::pair<double, double>> eigenvalues_upto(const SpectrumData& s, int q, double lambda_max);

}  // namespace torsion::analytic
