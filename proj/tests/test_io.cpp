#include <string>

#include "doctest.h"
#include "torsion/errors.hpp"
#include "torsion/io.hpp"
#include "torsion/random.hpp"

using namespace torsion;

namespace {

// load -> save -> load is the identity on documents.
template <class Load>
void round_trip(const io::Json& doc, Load load) {
  const io::Json once = io::to_json(load(doc));
  const io::Json twice = io::to_json(load(once));
  CHECK(once.dump() == twice.dump());
}

ErrorKind kind_of(const std::string& text, auto load, std::string* msg = nullptr) {
  try {
    load(io::parse(text));
  } catch (const Error& e) {
    if (msg) *msg = e.what();
    return e.kind();
  }
  return ErrorKind::Construction;
}

}  // namespace

TEST_CASE("metric complexes round-trip") {
  rnd::Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const MetricComplex e = rnd::random_complex(rng, rnd::random_shape(rng, 4, 3, trial % 2 == 0));
    round_trip(io::to_json(e), io::complex_from_json);
    round_trip(io::to_json(rnd::with_random_germ(rng, e, 2)), io::complex_from_json);
    round_trip(io::to_json(rnd::with_random_family(rng, e, 16, 2.0)), io::complex_from_json);
  }
  // Exact values survive serialization.
  const MetricComplex e = rnd::random_complex(rng, {{1}, {0, 0}});
  const MetricComplex back = io::complex_from_json(io::parse(io::to_json(e).dump()));
  CHECK((back.v[0] - e.v[0]).norm() == 0.0);
  CHECK((back.h[1] - e.h[1]).norm() == 0.0);
}

TEST_CASE("short forms") {
  const MetricComplex e = io::complex_from_json(io::parse(R"({"dims": [1, 1], "v": [[[2]]]})"));
  CHECK(e.h[0](0, 0) == cplx(1.0));
  CHECK(std::holds_alternative<std::monostate>(e.base));
  const MetricComplex z = io::complex_from_json(io::parse(R"({"dims": [0, 0], "v": [[]]})"));
  CHECK(z.v[0].rows() == 0);
  const MetricComplex c = io::complex_from_json(io::parse(R"({"dims": [1], "v": [], "h": [[[[1, 0]]]]})"));
  CHECK(c.h[0](0, 0) == cplx(1.0));
}

TEST_CASE("other documents round-trip") {
  rnd::Rng rng(11);
  for (int trial = 0; trial < 5; ++trial)
    round_trip(io::to_json(spectral::random_three_column(rng)), io::double_from_json);
  round_trip(io::to_json(glue::morse_model(glue::GluingScenario::circle(2.0, 0.5, rnd::unitary(rng, 2)))),
             io::morse_from_json);
  round_trip(io::to_json(analytic::ModelGeometry::circle(2.0, rnd::unitary(rng, 2))), io::geometry_from_json);
  round_trip(io::to_json(analytic::ModelGeometry::interval(1.5, analytic::Bc::Rel, analytic::Bc::Abs, 2)),
             io::geometry_from_json);
  round_trip(io::to_json(glue::GluingScenario::circle(3.0, 0.25, rnd::unitary(rng, 1))), io::scenario_from_json);
  round_trip(io::to_json(glue::GluingScenario::interval(2.0, 0.5, 2)), io::scenario_from_json);
}

TEST_CASE("schema errors name the location") {
  std::string msg;
  CHECK(kind_of("{", io::complex_from_json) == ErrorKind::Schema);
  CHECK(kind_of(R"({"dims": [1, 1], "v": [[["x"]]]})", io::complex_from_json, &msg) == ErrorKind::Schema);
  CHECK(msg.find("/v/0/0/0") != std::string::npos);
  CHECK(kind_of(R"({"dims": [1, 1], "v": [[[1]]], "colour": 1})", io::complex_from_json, &msg) ==
        ErrorKind::Schema);
  CHECK(msg.find("/colour") != std::string::npos);
  CHECK(kind_of(R"({"dims": [1, 2], "v": [[[1, 2], [3]]]})", io::complex_from_json, &msg) == ErrorKind::Schema);
  CHECK(msg.find("/v/0/1") != std::string::npos);
  CHECK(kind_of(R"({"rank": 1, "points": [{"id": "a", "index": 0}], "instantons": []})", io::morse_from_json,
                &msg) == ErrorKind::Schema);
  CHECK(msg.find("/points/0/on_boundary") != std::string::npos);
  CHECK(kind_of(R"({"kind": "torus", "L": 1})", io::geometry_from_json) == ErrorKind::Schema);
}

TEST_CASE("invariants are checked after loading") {
  // d^2 != 0
  CHECK(kind_of(R"({"dims": [1, 1, 1], "v": [[[1]], [[1]]]})", io::complex_from_json) != ErrorKind::Schema);
  // wrong block shape
  CHECK(kind_of(R"({"dims": [1, 1], "v": [[[1, 2]]]})", io::complex_from_json) == ErrorKind::Dimension);
  CHECK(kind_of(R"({"circle": {"L": 2}, "split": 1.5})", io::scenario_from_json) == ErrorKind::Domain);
}
