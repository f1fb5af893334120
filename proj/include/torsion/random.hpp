#pragma once

// Seeded random instances (std::mt19937_64 everywhere).

#include <random>
#include <vector>

#include "torsion/metric_complex.hpp"

namespace torsion::rnd {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi);
int uniform_int(Rng& rng, int lo, int hi);  // inclusive
Mat gaussian(Rng& rng, int rows, int cols);
Mat unitary(Rng& rng, int n);
// U diag(s) V^* with s uniform in [smin, smax].
Mat well_conditioned(Rng& rng, int rows, int cols, double smin = 0.5, double smax = 2.0);
// Hermitian positive definite with spectrum in [lo, hi].
Mat hpd(Rng& rng, int n, double lo = 0.5, double hi = 2.0);
Mat hermitian(Rng& rng, int n, double scale);

struct ComplexShape {
  std::vector<int> ranks;  // rank of v_i, i = 0..k-2
  std::vector<int> betti;  // per degree
};
// Random shape with length in [1, max_length], every dim <= max_dim.
ComplexShape random_shape(Rng& rng, int max_length, int max_dim, bool acyclic);

// Complex with the given ranks/Betti numbers: standard-form differentials
// conjugated by well-conditioned changes of basis, random metrics.
MetricComplex random_complex(Rng& rng, const ComplexShape& shape);

// Random metrics with spectrum in [lo, hi] on the same complex.
MetricComplex with_random_metrics(Rng& rng, const MetricComplex& e, double lo = 0.5, double hi = 2.0);

// Attach a formal germ over n generators with Hermitian derivatives of
// size ~scale.
MetricComplex with_random_germ(Rng& rng, const MetricComplex& e, int generators, double scale = 0.3);

// Attach a smooth trigonometric metric family on CircleBase(grid, L),
// harmonics 1..max_k with amplitude ~amp relative to the smallest
// eigenvalue of h (kept positive definite).
MetricComplex with_random_family(Rng& rng, const MetricComplex& e, int grid, double circumference,
                                 int max_k = 2, double amp = 0.3);

}  // namespace torsion::rnd
