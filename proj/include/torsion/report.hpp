#pragma once

// Machine-readable results of the CLI commands. Entry order is the order
// of evaluation, so equal inputs give byte-identical documents.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "torsion/io.hpp"

namespace torsion::report {

// A further bound inside an entry. `ratio` bounds are not scaled by a
// tolerance override.
struct Bound {
  std::string name;
  double residual = 0;
  double tolerance = 0;
  bool ratio = false;
  bool pass = false;
};

struct Entry {
  std::string name;
  std::vector<std::pair<std::string, double>> values;
  double residual = 0;
  double tolerance = 0;  // <= 0: informational, no verdict
  std::vector<Bound> bounds;
  bool pass = true;
  std::string note;

  Entry& value(const std::string& key, double v);
  Entry& bound(const std::string& key, double residual, double tolerance, bool ratio = false);
  // Recompute verdicts from residuals and tolerances.
  void judge();
};

struct Report {
  std::string command;
  std::string digest;
  std::vector<Entry> entries;

  bool passed() const;
  const Entry* find(const std::string& name) const;
};

std::string fnv1a_hex(const std::string& bytes);

// Replace every non-ratio tolerance and recompute the verdicts.
void override_tolerance(Report& r, double tolerance);

io::Json to_json(const Report& r);
std::string to_text(const Report& r);

}  // namespace torsion::report
