#pragma once

// Verification suites and the compute command behind the CLI.
//
// Suite entries (one per property):
//   finite:   two_term_torsion, convention_lock, anomaly_degree0, transgression
//   spectral: goette_identity
//   morse:    morse_structure
//   analytic: zeta_determinants, heat_consistency
//   gluing:   gluing_formula, double_formulas

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "torsion/report.hpp"

namespace torsion::verify {

enum class Suite { Finite, Spectral, Morse, Analytic, Gluing, All };
Suite suite_from_string(const std::string& s);  // Configuration error if unknown
const char* to_string(Suite s);

struct Options {
  std::uint64_t seed = 7;
  std::optional<double> tolerance;  // replaces every tolerance
  int grid = 64;                    // finest circle grid of the transgression check
  // Remainder bound of the Euler-Maclaurin zeta route; unset uses its default.
  std::optional<double> precision;
};

report::Report run(Suite suite, const Options& opt);
// Names of the entries of a suite, in report order.
std::vector<std::string> entry_names(Suite suite);
// One entry, identical to its appearance in `run`.
report::Entry run_entry(const std::string& name, const Options& opt);

enum class InputKind { Complex, Morse, Double, Geometry, Scenario };
InputKind kind_from_string(const std::string& s);

// Torsions of one input document; `bytes` is the raw file for the digest.
report::Report compute(InputKind kind, const std::string& bytes, const Options& opt);

}  // namespace torsion::verify
