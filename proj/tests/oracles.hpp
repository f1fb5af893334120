#pragma once

// Test-side oracles, independent of the library's zeta engine.

#include <cmath>

#include "torsion/analytic.hpp"

namespace oracles {

// zeta'_H(0, a) by Euler-Maclaurin in long double with more explicit terms
// and a longer tail than the library route.
inline long double hurwitz_oracle(long double a) {
  constexpr int n = 4000;
  constexpr long double b[] = {1.0L / 6, -1.0L / 30, 1.0L / 42, -1.0L / 30, 5.0L / 66, -691.0L / 2730};
  long double s = 0;
  for (int k = 0; k < n; ++k) s -= std::log(static_cast<long double>(k) + a);
  const long double x = n + a;
  s += (x - 0.5L) * std::log(x) - x;
  for (int k = 1; k <= 6; ++k) s += b[k - 1] / (2.0L * k * (2 * k - 1)) * std::pow(x, static_cast<long double>(1 - 2 * k));
  return s;
}

// log det' Delta_q recomputed from the oracle.
inline double oracle_log_det(const torsion::analytic::SpectrumData& s, int q) {
  long double sum = 0;
  for (const torsion::analytic::Family& f : s.degree[q].families)
    sum += f.weight * (2 * std::log(static_cast<long double>(f.c)) * (0.5L - f.alpha) - 2 * hurwitz_oracle(f.alpha));
  return static_cast<double>(sum);
}

}  // namespace oracles
