#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "torsion/analytic.hpp"
#include "torsion/errors.hpp"

using namespace torsion;
using namespace torsion::analytic;
using oracles::hurwitz_oracle;
using oracles::oracle_log_det;

namespace {

constexpr double kPi = std::numbers::pi;

Mat phase(double theta) { return Mat::Constant(1, 1, std::polar(1.0, theta)); }

std::vector<ModelGeometry> zoo() {
  std::vector<ModelGeometry> g;
  for (double len : {0.5, 1.0, 3.0}) {
    g.push_back(ModelGeometry::circle(len, Mat::Identity(1, 1)));
    g.push_back(ModelGeometry::circle(len, phase(kPi / 3)));
    g.push_back(ModelGeometry::circle(len, phase(kPi)));
    g.push_back(ModelGeometry::interval(len, Bc::Abs, 2));
    g.push_back(ModelGeometry::interval(len, Bc::Rel, 1));
    g.push_back(ModelGeometry::interval(len, Bc::Abs, Bc::Rel, 1));
  }
  Mat u(2, 2);
  u << cplx(0, 1), 0, 0, cplx(-1, 0);
  g.push_back(ModelGeometry::circle(2.0, u));
  return g;
}

}  // namespace

TEST_CASE("Hurwitz derivative: closed form vs Euler-Maclaurin vs oracle") {
  for (double a : {0.05, 1.0 / 6, 0.25, 0.5, 0.75, 1.0}) {
    const double closed = hurwitz_zeta_prime0(a);
    ZetaOptions em;
    em.method = ZetaMethod::EulerMaclaurin;
    const double approx = hurwitz_zeta_prime0(a, em);
    const double oracle = static_cast<double>(hurwitz_oracle(a));
    CHECK(std::abs(closed - oracle) <= 1e-11);
    CHECK(std::abs(approx - oracle) <= 1e-10);
  }
  // zeta'(0) = -log(2 pi) / 2.
  CHECK(std::abs(hurwitz_zeta_prime0(1.0) + 0.5 * std::log(2 * kPi)) <= 1e-14);
}

TEST_CASE("Euler-Maclaurin remainder over tolerance is a precision error") {
  ZetaOptions em;
  em.method = ZetaMethod::EulerMaclaurin;
  em.terms = 2;
  em.tolerance = 1e-12;
  try {
    hurwitz_zeta_prime0(0.5, em);
    FAIL("expected an error");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::Precision);
  }
}

TEST_CASE("determinants of the standard models") {
  ZetaOptions em;
  em.method = ZetaMethod::EulerMaclaurin;
  for (double len : {0.5, 1.0, 2.0, 4.0}) {
    for (Bc bc : {Bc::Abs, Bc::Rel}) {
      const SpectrumData s = spectrum(ModelGeometry::interval(len, bc, 1));
      for (int q = 0; q < 2; ++q) {
        CHECK(std::abs(zeta_log_det(s, q) - std::log(2 * len)) <= 1e-12);
        CHECK(std::abs(zeta_log_det(s, q, em) - oracle_log_det(s, q)) <= 1e-9);
        CHECK(std::abs(oracle_log_det(s, q) - std::log(2 * len)) <= 1e-9);
      }
    }
    const SpectrumData c = spectrum(ModelGeometry::circle(len, Mat::Identity(1, 1)));
    CHECK(std::abs(zeta_log_det(c, 0) - 2 * std::log(len)) <= 1e-12);
    CHECK(std::abs(zeta_log_det(c, 1, em) - oracle_log_det(c, 1)) <= 1e-9);
    CHECK(std::abs(oracle_log_det(c, 1) - 2 * std::log(len)) <= 1e-9);
    const SpectrumData m = spectrum(ModelGeometry::interval(len, Bc::Abs, Bc::Rel, 1));
    CHECK(std::abs(zeta_log_det(m, 0) - std::log(2.0)) <= 1e-12);
  }
  for (double th : {0.3, kPi / 3, kPi / 2, kPi, 5.0}) {
    const SpectrumData s = spectrum(ModelGeometry::circle(1.7, phase(th)));
    const double expect = std::log(4 * std::pow(std::sin(th / 2), 2));
    CHECK(std::abs(zeta_log_det(s, 0) - expect) <= 1e-12);
    CHECK(std::abs(zeta_log_det(s, 1, em) - expect) <= 1e-9);
  }
}

TEST_CASE("scalar torsion from either degree") {
  for (const ModelGeometry& g : zoo()) {
    const SpectrumData s = spectrum(g);
    CHECK(std::abs(scalar_torsion(s) - scalar_torsion_from_degree0(s)) <= 1e-12);
  }
  CHECK(std::abs(scalar_torsion(ModelGeometry::interval(1.0, Bc::Abs, 1)) + 0.5 * std::log(2.0)) <= 1e-13);
}

TEST_CASE("heat integral equals the zeta torsion") {
  for (const ModelGeometry& g : zoo()) {
    const SpectrumData s = spectrum(g);
    const HeatIntegralResult r = torsion_via_heat_integral(s);
    CHECK(std::abs(r.value - scalar_torsion(s)) <= 1e-7);
  }
}

TEST_CASE("heat supertrace limits") {
  for (const ModelGeometry& g : zoo()) {
    const SpectrumData s = spectrum(g);
    const HeatCounterterms ct = heat_counterterms(s);
    CHECK(std::abs(heat_supertrace(s, 1e-7) - ct.small_t_limit()) <= 1e-4);
    CHECK(std::abs(heat_supertrace(s, 1e5) - ct.large_t_limit()) <= 1e-4);
  }
  // Boundary contribution: abs interval of rank 2 has chi_rank = 2.
  const HeatCounterterms ct = heat_counterterms(spectrum(ModelGeometry::interval(1.0, Bc::Abs, 2)));
  CHECK(ct.chi_rank == 2.0);
  CHECK(ct.chi_prime == 0.0);
}

TEST_CASE("heat supertrace: both summation branches agree") {
  // Direct summation of the same series as the oracle, far past the switch.
  for (double alpha : {0.25, 1.0}) {
    SpectrumData s;
    s.degree[1].families.push_back({1.0, alpha, 1.0});
    for (double sc : {0.15, 0.19, 0.21, 0.3}) {
      const double t = std::pow(2 * sc, 2);
      long double direct = 0;
      for (int n = 0; n < 100000; ++n) {
        const long double y = sc * (n + alpha);
        direct += (1 - 2 * y * y) * std::exp(-y * y);
      }
      CHECK(std::abs(heat_supertrace(s, t) + 0.5 * static_cast<double>(direct)) <= 1e-12);
    }
  }
}

TEST_CASE("doubles: parity decomposition and equivariant torsions") {
  for (double len : {0.5, 1.0, 2.0}) {
    for (int r : {1, 2}) {
      const ModelGeometry iv = ModelGeometry::interval(len, Bc::Abs, r);
      const SpectrumData a = spectrum(iv);
      const SpectrumData rel = spectrum(ModelGeometry::interval(len, Bc::Rel, r));
      for (bool reflect : {false, true}) {
        const SpectrumData d = double_spectrum(iv, reflect);
        const double sign = reflect ? -1 : 1;
        const double lmax = 400 / (len * len);
        for (int q = 0; q < 2; ++q) {
          // Weighted multiset: spec(abs) +/- spec(rel).
          SpectrumData expect;
          expect.degree[q] = a.degree[q];
          for (Family f : rel.degree[q].families) {
            f.weight *= sign;
            expect.degree[q].families.push_back(f);
          }
          expect.degree[q].zero_modes += sign * rel.degree[q].zero_modes;
          const auto got = eigenvalues_upto(d, q, lmax);
          const auto want = eigenvalues_upto(expect, q, lmax);
          REQUIRE(got.size() == want.size());
          for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK(std::abs(got[i].first - want[i].first) <= 1e-10);
            CHECK(got[i].second == doctest::Approx(want[i].second));
          }
        }
        const double tor = equivariant_scalar_torsion(iv, reflect);
        CHECK(std::abs(tor - (reflect ? 0.0 : -r * std::log(2 * len))) <= 1e-12);
        CHECK(std::abs(torsion_via_heat_integral(d).value - tor) <= 1e-7);
        if (reflect) CHECK(std::abs(heat_supertrace(d, 1e-7) - 0.5 * r) <= 1e-4);
      }
    }
  }
}

TEST_CASE("L2 cohomology") {
  const L2Cohomology c = l2_cohomology(ModelGeometry::circle(2.0, Mat::Identity(2, 2)));
  for (const auto& d : c.degree) {
    CHECK(d.sections.cols() == 2);
    CHECK(max_abs(d.gram - 2.0 * Mat::Identity(2, 2)) <= 1e-14);
  }
  Mat u = Mat::Identity(2, 2);
  u(1, 1) = std::polar(1.0, 1.0);
  const L2Cohomology h = l2_cohomology(ModelGeometry::circle(1.0, u));
  CHECK(h.degree[0].sections.cols() == 1);
  CHECK(max_abs(u * h.degree[0].sections - h.degree[0].sections) <= 1e-12);
  CHECK(spectrum(ModelGeometry::circle(1.0, u)).degree[0].zero_modes == 1.0);

  const L2Cohomology a = l2_cohomology(ModelGeometry::interval(3.0, Bc::Abs, 2));
  CHECK(a.degree[0].sections.cols() == 2);
  CHECK(a.degree[1].sections.cols() == 0);
  CHECK(max_abs(a.degree[0].gram - 3.0 * Mat::Identity(2, 2)) == 0.0);
  const L2Cohomology r = l2_cohomology(ModelGeometry::interval(3.0, Bc::Rel, 1));
  CHECK(r.degree[0].sections.cols() == 0);
  CHECK(r.degree[1].sections.cols() == 1);
  const L2Cohomology m = l2_cohomology(ModelGeometry::interval(3.0, Bc::Abs, Bc::Rel, 1));
  CHECK(m.degree[0].sections.cols() + m.degree[1].sections.cols() == 0);
}

TEST_CASE("invalid geometries") {
  auto kind_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Construction;
  };
  Mat nu = Mat::Identity(1, 1) * 2.0;
  CHECK(kind_of([&] { spectrum(ModelGeometry::circle(1.0, nu)); }) == ErrorKind::Unsupported);
  CHECK(kind_of([&] { spectrum(ModelGeometry::interval(-1.0, Bc::Abs, 1)); }) == ErrorKind::Domain);
  CHECK(kind_of([&] { spectrum(ModelGeometry::interval(1.0, Bc::Abs, 0)); }) == ErrorKind::Domain);
  CHECK(kind_of([&] { double_spectrum(ModelGeometry::circle(1.0, Mat::Identity(1, 1)), true); }) ==
        ErrorKind::Configuration);
}
