#pragma once

// Characteristic forms, metric-variation classes and torsion forms of a
// MetricComplex over a formal point or a circle.
//
// All superconnection data is evaluated in h-orthonormal frames (Cholesky
// h = L L^*, e -> L^* e). This is a similarity by a degree-0 matrix, so it
// leaves supertraces of matrix functions unchanged.

#include <vector>

#include "torsion/forms.hpp"
#include "torsion/metric_complex.hpp"
#include "torsion/quadrature.hpp"

namespace torsion::flat {

// omega(E, h) = h^{-1} dh in the flat frame, as a degree-1 FormMatrix on
// the total space. Configuration error without a base.
forms::FormMatrix omega(const MetricComplex& e);

// X_t = 1/2 (omega' + t v'^* - v') in orthonormal frames.
forms::FormMatrix x_t(const MetricComplex& e, double t);

// f(nabla, h) = (2 i pi)^{1/2} phi tr_s[f(omega / 2)].
forms::Form char_form(const MetricComplex& e);

struct TorsionFormResult {
  forms::Form value;   // even and real up to rounding
  double error = 0;    // quadrature error estimate
  int evaluations = 0;
  int d_e = 0, d_h = 0;

  // Degree-0 component: a scalar on a point, grid samples on a circle.
  double degree0() const;
  Vec degree0_function() const;
};

// f^(A', h_t) = phi tr_s[N/2 f'(X_t)], optionally weighted by a group
// element g (tr_s[g N/2 f'(X_t)]).
forms::Form f_hat(const MetricComplex& e, double t);

// T_f(A', h) = -int_0^inf [f^ - d(H)/2 - (d(E) - d(H))/2 (1 - t/2) e^{-t/4}] dt/t.
TorsionFormResult torsion_form(const MetricComplex& e, const QuadratureSpec& quad = {});

// Same integral with supertraces weighted by an involution g of E that
// commutes with v and preserves h; counterterms use the g-traces. Point
// base only.
TorsionFormResult equivariant_torsion_form(const MetricComplex& e, const std::vector<Mat>& g,
                                           const QuadratureSpec& quad = {});

enum class Path { Linear, LogLinear };

// f~(nabla, h0, h1) = int_0^1 phi tr_s[1/2 h_l^{-1} dh_l/dl f'(omega(h_l)/2)] dl.
// e0 and e1 share dims, v and base kind; their metric data are the two
// endpoints. The supertrace makes this the alternating sum over degrees.
struct TildeFResult {
  forms::Form value;
  double error = 0;
};
TildeFResult tilde_f(const MetricComplex& e0, const MetricComplex& e1, Path path = Path::Linear,
                     const QuadratureSpec& quad = {});

// Metric of the path at parameter l (per degree, at the constant term /
// germ base point; circle families are sampled by the caller).
Mat path_metric(const Mat& h0, const Mat& h1, double l, Path path);

// Degree-0 torsion of a complex over a point: from the Laplacian spectra
// (hodge) or from the torsion_form integral.
enum class TorsionMethod { Eigen, Quadrature };
double degree0_torsion(const MetricComplex& e, TorsionMethod method = TorsionMethod::Eigen,
                       const QuadratureSpec& quad = {});

}  // namespace torsion::flat
