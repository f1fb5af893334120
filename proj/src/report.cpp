#include "torsion/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace torsion::report {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", x + 0.0);
  return buf;
}

}  // namespace

Entry& Entry::value(const std::string& key, double v) {
  values.emplace_back(key, v + 0.0);  // no negative zero
  return *this;
}

Entry& Entry::bound(const std::string& key, double r, double tol, bool ratio) {
  bounds.push_back({key, r, tol, ratio, false});
  judge();
  return *this;
}

void Entry::judge() {
  // NaN residuals fail.
  pass = tolerance <= 0 || std::abs(residual) < tolerance;
  for (Bound& b : bounds) {
    b.pass = std::abs(b.residual) < b.tolerance;
    pass = pass && b.pass;
  }
}

bool Report::passed() const {
  for (const Entry& e : entries)
    if (!e.pass) return false;
  return true;
}

const Entry* Report::find(const std::string& name) const {
  for (const Entry& e : entries)
    if (e.name == name) return &e;
  return nullptr;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void override_tolerance(Report& r, double tolerance) {
  for (Entry& e : r.entries) {
    if (e.tolerance > 0) e.tolerance = tolerance;
    for (Bound& b : e.bounds)
      if (!b.ratio) b.tolerance = tolerance;
    e.judge();
  }
}

io::Json to_json(const Report& r) {
  io::Json j;
  j["command"] = r.command;
  j["inputs_digest"] = r.digest;
  io::Json checks = io::Json::array();
  for (const Entry& e : r.entries) {
    io::Json c;
    c["name"] = e.name;
    io::Json values = io::Json::object();
    for (const auto& [k, v] : e.values) values[k] = v;
    c["values"] = values;
    c["residual"] = e.residual + 0.0;
    if (e.tolerance > 0) c["tolerance"] = e.tolerance;
    if (!e.bounds.empty()) {
      io::Json bs = io::Json::array();
      for (const Bound& b : e.bounds)
        bs.push_back({{"name", b.name}, {"residual", b.residual + 0.0}, {"tolerance", b.tolerance},
                      {"verdict", b.pass ? "pass" : "fail"}});
      c["bounds"] = bs;
    }
    c["verdict"] = e.tolerance > 0 || !e.bounds.empty() ? (e.pass ? "pass" : "fail") : "info";
    if (!e.note.empty()) c["note"] = e.note;
    checks.push_back(c);
  }
  j["checks"] = checks;
  j["verdict"] = r.passed() ? "pass" : "fail";
  return j;
}

std::string to_text(const Report& r) {
  std::ostringstream os;
  os << r.command << "  (inputs " << r.digest << ")\n";
  std::size_t w = 8;
  for (const Entry& e : r.entries) {
    w = std::max(w, e.name.size());
    for (const Bound& b : e.bounds) w = std::max(w, b.name.size() + 2);
  }
  auto pad = [&](const std::string& s) { return s + std::string(w + 2 - s.size(), ' '); };
  os << pad("check") << "residual       tolerance      verdict\n";
  for (const Entry& e : r.entries) {
    const bool judged = e.tolerance > 0 || !e.bounds.empty();
    os << pad(e.name) << num(e.residual) << "   " << (e.tolerance > 0 ? num(e.tolerance) : std::string(12, '-'))
       << "   " << (judged ? (e.pass ? "PASS" : "FAIL") : "info") << "\n";
    for (const Bound& b : e.bounds)
      os << pad("  " + b.name) << num(b.residual) << "   " << num(b.tolerance) << "   "
         << (b.pass ? "PASS" : "FAIL") << "\n";
    for (const auto& [k, v] : e.values) os << "    " << k << " = " << num(v) << "\n";
    if (!e.note.empty()) os << "    note: " << e.note << "\n";
  }
  os << (r.passed() ? "all checks passed" : "some checks FAILED") << "\n";
  return os.str();
}

}  // namespace torsion::report
