#pragma once

// Finite-dimensional Hodge theory for a MetricComplex, taken at the
// constant metric h (for circle families this is the theta-average, and
// Betti numbers do not depend on theta).

#include <vector>

#include "torsion/metric_complex.hpp"

namespace torsion::hodge {

struct HodgeData {
  std::vector<Mat> chol;          // h^i = L L^*
  std::vector<Mat> v_on;          // differentials in orthonormal coordinates
  std::vector<Mat> laplacian;     // Delta_q in orthonormal coordinates
  std::vector<RVec> eigenvalues;  // ascending
  std::vector<Mat> eigenvectors;  // orthonormal coordinates
  std::vector<Mat> harmonic;      // h-orthonormal harmonic basis, original coordinates
  std::vector<int> betti;
  std::vector<double> log_det_prime;
  double threshold = 0;           // eigenvalues <= threshold count as zero
  double spectral_radius = 0;

  // h-orthogonal projector onto harmonic forms, original coordinates.
  Mat harmonic_projector(int q, const Mat& h) const;
};

HodgeData hodge_decompose(const MetricComplex& e);

// 1/2 sum_q (-1)^q q log det' Delta_q.
double scalar_torsion_eigen(const MetricComplex& e);
double scalar_torsion_eigen(const HodgeData& hd);

struct EulerData {
  int chi = 0;        // sum (-1)^i rk E^i = sum (-1)^i b_i
  int chi_prime = 0;  // sum (-1)^i i b_i
  int d_e = 0;        // sum (-1)^i i rk E^i
  int d_h = 0;        // = chi_prime
};
EulerData chi_primes(const MetricComplex& e);
EulerData chi_primes(const MetricComplex& e, const HodgeData& hd);

// Gram matrix, for the metric h of e, of the cohomology classes of the
// given cocycles (columns, original coordinates of E^q): the Gram matrix
// of their harmonic projections.
Mat cohomology_gram(const MetricComplex& e, int q, const Mat& cocycles);

// Degree-0 metric-variation class of a graded space: for Gram matrices
// g0[q], g1[q] of one basis, sum_q (-1)^q 1/2 log(det g1 / det g0).
double tilde_f_degree0(const std::vector<Mat>& g0, const std::vector<Mat>& g1);

// Equivariant degree-0 torsion for a metric-preserving involution g
// commuting with v: 1/2 sum_q (-1)^q q sum_lambda tr(g|E_lambda) log lambda.
double equivariant_torsion_eigen(const MetricComplex& e, const std::vector<Mat>& g);

}  // namespace torsion::hodge
