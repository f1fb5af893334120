#pragma once

// A finite complex 0 -> E^0 -> E^1 -> ... -> E^k -> 0 of Hermitian spaces,
// optionally varying over a base:
//   - a formal point: the metric germ h + sum_j xi_j dh_j, so that
//     omega = h^{-1} dh is a degree-1 FormMatrix;
//   - a circle: the metric on E^i is a trigonometric family in theta,
//     written in a flat trivialization on [0, L) with holonomy U_i; v does
//     not depend on theta.

#include <variant>
#include <vector>

#include "torsion/forms.hpp"
#include "torsion/linalg.hpp"

namespace torsion {

struct FormalGerm {
  forms::FormAlgebra algebra;            // FormalPoint(n)
  std::vector<std::vector<Mat>> dh;      // dh[i][j]: derivative of h^i along xi_j
};

struct TrigTerm {
  int k = 1;  // harmonic: cos / sin of 2 pi k theta / L
  Mat cos_part, sin_part;
};

struct CircleFamily {
  forms::FormAlgebra algebra;                  // CircleBase(N, L)
  std::vector<std::vector<TrigTerm>> terms;    // per degree, added to h[i]
  std::vector<Mat> holonomy;                   // per degree; empty = identity
};

using BaseData = std::variant<std::monostate, FormalGerm, CircleFamily>;

struct MetricComplex {
  std::vector<int> dims;
  std::vector<Mat> v;  // v[i]: E^i -> E^{i+1}, dims[i+1] x dims[i]
  std::vector<Mat> h;  // h[i]: dims[i] x dims[i]
  BaseData base;

  int length() const { return static_cast<int>(dims.size()); }
  int total_dim() const;
  std::vector<int> offsets() const;
  // Per-index degrees of the total space (the grading of E).
  std::vector<int> grading() const;
  // The total differential as a single block matrix.
  Mat total_v() const;
  Mat total_h() const;
  Mat number_operator() const;

  bool has_base() const { return base.index() != 0; }
  bool on_circle() const { return base.index() == 2; }
  bool on_formal_point() const { return base.index() == 1; }
  forms::FormAlgebra algebra() const;

  // Circle: metric of degree i at theta, and its theta-derivative.
  Mat metric_at(int i, double theta) const;
  Mat metric_derivative_at(int i, double theta) const;
};

// Zero differentials, identity metrics.
MetricComplex make_complex(const std::vector<int>& dims);
// 0 -> C^r -tau-> C^r -> 0 with identity metrics.
MetricComplex two_term(const Mat& tau);

// Throws Data/Dimension/Domain on violated invariants.
void validate(const MetricComplex& e, double tol = 1e-10);

// h^i -> t^i h^i (also rescales germs and circle families).
MetricComplex rescale_metric(const MetricComplex& e, double t);

// The h_t-adjoint of the total differential, t^{-N} v^* t^N with
// v^* = h^{-1} v^dagger h, as a block matrix.
Mat adjoint_differential(const MetricComplex& e, double t);

}  // namespace torsion
