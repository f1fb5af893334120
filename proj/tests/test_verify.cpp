#include <cmath>
#include <numbers>
#include <string>

#include "doctest.h"
#include "torsion/errors.hpp"
#include "torsion/verify.hpp"

using namespace torsion;

namespace {

const double kLog2 = std::numbers::ln2;

report::Report compute_file(const std::string& name, verify::InputKind kind) {
  return verify::compute(kind, io::read_file(std::string(TORSION_TEST_DATA) + "/" + name), {});
}

double value_of(const report::Entry& e, const std::string& key) {
  for (const auto& [k, v] : e.values)
    if (k == key) return v;
  FAIL("no value " << key);
  return 0;
}

}  // namespace

TEST_CASE("FNV-1a digest") {
  CHECK(report::fnv1a_hex("") == "cbf29ce484222325");
  CHECK(report::fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("verdicts and tolerance override") {
  report::Entry e;
  e.name = "x";
  e.residual = 1e-8;
  e.tolerance = 1e-7;
  e.bound("ratio", 0.5, 1.0, true);
  CHECK(e.pass);
  report::Report r;
  r.entries.push_back(e);
  report::override_tolerance(r, 1e-9);
  CHECK_FALSE(r.passed());
  CHECK(r.entries[0].bounds[0].tolerance == 1.0);
  r.entries[0].residual = std::nan("");
  report::override_tolerance(r, 1.0);
  CHECK_FALSE(r.passed());

  const io::Json j = report::to_json(r);
  CHECK(j["checks"][0]["verdict"] == "fail");
  CHECK(report::to_text(r).find("FAIL") != std::string::npos);
}

TEST_CASE("compute on the sample inputs") {
  const report::Report two = compute_file("two_term.json", verify::InputKind::Complex);
  CHECK(two.passed());
  CHECK(std::abs(value_of(two.entries[0], "degree0") + kLog2) <= 1e-9);

  const report::Report zero = compute_file("zero_complex.json", verify::InputKind::Complex);
  CHECK(std::abs(value_of(zero.entries[0], "degree0")) <= 1e-15);

  const report::Report circle = compute_file("circle_L2.json", verify::InputKind::Geometry);
  CHECK(std::abs(value_of(circle.entries[0], "zeta") + kLog2) <= 1e-12);

  const report::Report sc = compute_file("flagship.json", verify::InputKind::Scenario);
  CHECK(sc.passed());
  CHECK(std::abs(value_of(sc.entries[0], "T_H") + kLog2) <= 1e-12);

  // Holonomy i on a two-cell circle: -log|1 - i|.
  const report::Report m = compute_file("morse_circle.json", verify::InputKind::Morse);
  CHECK(std::abs(value_of(m.entries[0], "torsion") + 0.5 * kLog2) <= 1e-12);

  const report::Report d = compute_file("double_two_by_two.json", verify::InputKind::Double);
  CHECK(d.passed());
  CHECK(std::abs(value_of(d.entries[0], "torsion") - std::log(1.5)) <= 1e-12);
}

TEST_CASE("compute errors") {
  auto kind_of = [](const std::string& file, verify::InputKind k) {
    try {
      compute_file(file, k);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Construction;
  };
  CHECK(kind_of("bad_entry.json", verify::InputKind::Complex) == ErrorKind::Schema);
  CHECK(kind_of("not_a_complex.json", verify::InputKind::Complex) == ErrorKind::Data);
  CHECK(kind_of("morse_bad_d2.json", verify::InputKind::Morse) == ErrorKind::Data);
  CHECK(kind_of("two_term.json", verify::InputKind::Morse) == ErrorKind::Schema);
}

TEST_CASE("suites are consistent with single entries") {
  verify::Options opt;
  opt.seed = 11;
  const report::Report r = verify::run(verify::Suite::Spectral, opt);
  REQUIRE(r.entries.size() == 1);
  const report::Entry e = verify::run_entry("goette_identity", opt);
  CHECK(report::to_json(r)["checks"][0].dump() == [&] {
    report::Report one;
    one.entries.push_back(e);
    return report::to_json(one)["checks"][0].dump();
  }());
  CHECK(r.passed());
  CHECK(verify::entry_names(verify::Suite::All).size() == 10);
  CHECK_THROWS_AS(verify::suite_from_string("everything"), Error);
  opt.grid = 12;
  CHECK_THROWS_AS(verify::run_entry("transgression", opt), Error);
}
