#pragma once

// Adaptive Gauss-Kronrod (7/15) quadrature for vector-valued integrands,
// with global bisection of the interval carrying the largest error.

#include <functional>

#include "torsion/linalg.hpp"

namespace torsion {

struct QuadratureSpec {
  double abs_tol = 1e-10;
  int max_levels = 20;  // bisection depth limit per subinterval
  int max_intervals = 4000;
};

struct QuadratureResult {
  Vec value;
  double error = 0;  // sum of |K15 - G7| (max over components)
  int evaluations = 0;
  bool converged = false;
};

QuadratureResult integrate(const std::function<Vec(double)>& f, double a, double b,
                           const QuadratureSpec& spec = {});

}  // namespace torsion
