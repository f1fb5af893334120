#include <cmath>
#include <numbers>

#include "doctest.h"
#include "torsion/errors.hpp"
#include "torsion/flat_complex.hpp"
#include "torsion/hodge.hpp"
#include "torsion/random.hpp"

using namespace torsion;
using namespace torsion::forms;

namespace {

// Rank-1 two-term complex on a circle with h^0 = 1 and
// h^1(theta) = 1 + a cos(2 pi theta / L).
MetricComplex rank1_circle(double tau, double a, int grid, double length) {
  MetricComplex e = two_term(tau * Mat::Identity(1, 1));
  CircleFamily c;
  c.algebra = FormAlgebra::circle(grid, length);
  c.terms.resize(2);
  TrigTerm t;
  t.k = 1;
  t.cos_part = a * Mat::Identity(1, 1);
  t.sin_part = Mat::Zero(1, 1);
  c.terms[1].push_back(t);
  e.base = c;
  return e;
}

}  // namespace

TEST_CASE("omega") {
  MetricComplex e = rank1_circle(2.0, 0.0, 16, 1.0);
  CHECK(flat::omega(e).max_abs() == 0.0);
  CHECK_THROWS_AS(flat::omega(two_term(Mat::Identity(1, 1))), Error);

  const double a = 0.5, len = 3.0;
  e = rank1_circle(2.0, a, 32, len);
  const FormMatrix w = flat::omega(e);
  const double k = 2 * std::numbers::pi / len;
  for (int j = 0; j < 32; ++j) {
    const double th = w.algebra().theta(j);
    const double expect = -a * k * std::sin(k * th) / (1 + a * std::cos(k * th));
    CHECK(std::abs(w.block(32 + j)(1, 1) - expect) <= 1e-14);
    CHECK(std::abs(w.block(32 + j)(0, 0)) == 0.0);
  }
}

TEST_CASE("omega transforms as h^{-1} dh under frame changes") {
  rnd::Rng rng(8);
  MetricComplex e = rnd::with_random_germ(rng, rnd::random_complex(rng, {{2}, {0, 1}}), 2);
  const FormMatrix w = flat::omega(e);
  const auto& g = std::get<FormalGerm>(e.base);
  for (int j = 0; j < 2; ++j) {
    const int idx = g.algebra.generator_index(j);
    CHECK(max_abs(e.total_h() * w.block(idx) - block_diag({g.dh[0][j], g.dh[1][j]})) <= 1e-12);
  }
}

TEST_CASE("metric rescaling") {
  MetricComplex e = make_complex({1, 1});
  CHECK(max_abs(rescale_metric(e, 1.0).total_h() - e.total_h()) == 0.0);
  const MetricComplex e2 = rescale_metric(e, 2.0);
  CHECK(e2.h[0](0, 0) == cplx(1));
  CHECK(e2.h[1](0, 0) == cplx(2));
  CHECK_THROWS_AS(rescale_metric(e, 0.0), Error);

  // The h_t-adjoint is t^{-N} A'' t^N.
  rnd::Rng rng(9);
  const MetricComplex r = rnd::random_complex(rng, {{2, 1}, {1, 0, 1}});
  for (double t : {0.3, 1.0, 4.0}) {
    const MetricComplex rt = rescale_metric(r, t);
    const Mat direct = rt.total_h().inverse() * rt.total_v().adjoint() * rt.total_h();
    CHECK(max_abs(direct - adjoint_differential(r, t)) <= 1e-12);
  }
}

TEST_CASE("X_t for a two-term complex") {
  rnd::Rng rng(10);
  const Mat tau = rnd::well_conditioned(rng, 2, 2);
  const FormMatrix x = flat::x_t(two_term(tau), 0.7);
  Mat expect = Mat::Zero(4, 4);
  expect.block(2, 0, 2, 2) = -0.5 * tau;
  expect.block(0, 2, 2, 2) = 0.35 * tau.adjoint();
  CHECK(max_abs(x.block(0) - expect) <= 1e-15);
  CHECK(flat::x_t(make_complex({2, 1}), 2.0).max_abs() == 0.0);

  // Covariantly constant tau: X_t^2 = (omega^2 - t Delta) / 4.
  MetricComplex e = two_term(2.0 * Mat::Identity(2, 2));
  FormalGerm g;
  g.algebra = FormAlgebra::formal(2);
  const Mat d0 = rnd::hermitian(rng, 2, 0.5), d1 = rnd::hermitian(rng, 2, 0.5);
  g.dh = {{d0, d1}, {d0, d1}};
  e.base = g;
  const double t = 1.3;
  const FormMatrix xt = flat::x_t(e, t);
  const FormMatrix w = flat::omega(e);
  const hodge::HodgeData hd = hodge::hodge_decompose(e);
  FormMatrix rhs = wedge_mul(w, w);
  Mat lap = block_diag({hd.laplacian[0], hd.laplacian[1]});
  rhs.block(0) -= t * lap;
  rhs *= 0.25;
  CHECK((wedge_mul(xt, xt) - rhs).max_abs() <= 1e-12);
}

TEST_CASE("characteristic form") {
  CHECK(flat::char_form(rank1_circle(2.0, 0.0, 16, 1.0)).max_abs() <= 1e-15);
  const double a = 0.4, len = 2.0;
  const MetricComplex e = rank1_circle(2.0, a, 32, len);
  const Form f = flat::char_form(e);
  const double k = 2 * std::numbers::pi / len;
  CHECK(f.max_abs_of_degree(0) <= 1e-15);
  CHECK(f.max_abs_imag() <= 1e-15);
  for (int j = 0; j < 32; ++j) {
    const double th = f.algebra().theta(j);
    // -u'/2 with u = log h^1.
    const double expect = 0.5 * a * k * std::sin(k * th) / (1 + a * std::cos(k * th));
    CHECK(std::abs(f.dtheta_part()(j) - expect) <= 1e-14);
  }
  rnd::Rng rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    const MetricComplex g = rnd::with_random_germ(rng, rnd::random_complex(rng, rnd::random_shape(rng, 3, 3, false)), 3);
    const Form c = flat::char_form(g);
    CHECK(c.max_abs_imag() <= 1e-10);
    CHECK(c.max_abs_of_degree(0) <= 1e-12);
    CHECK(c.max_abs_of_degree(2) <= 1e-12);
  }
}

TEST_CASE("torsion form of two-term complexes") {
  for (int r = 1; r <= 3; ++r) {
    const flat::TorsionFormResult t = flat::torsion_form(two_term(2.0 * Mat::Identity(r, r)));
    CHECK(std::abs(t.degree0() + r * std::log(2.0)) <= 1e-9);
    CHECK(t.d_e == -r);
    CHECK(t.d_h == 0);
  }
  CHECK(std::abs(flat::torsion_form(make_complex({2, 1})).degree0()) <= 1e-12);
  rnd::Rng rng(14);
  for (int trial = 0; trial < 5; ++trial) {
    const Mat tau = rnd::well_conditioned(rng, 3, 3);
    CHECK(std::abs(flat::torsion_form(two_term(tau)).degree0() + log_abs_det(tau)) <= 1e-9);
  }
}

TEST_CASE("torsion form matches the eigenvalue torsion") {
  rnd::Rng rng(15);
  for (int trial = 0; trial < 10; ++trial) {
    const MetricComplex e = rnd::random_complex(rng, rnd::random_shape(rng, 4, 5, false));
    CHECK(std::abs(flat::torsion_form(e).degree0() - hodge::scalar_torsion_eigen(e)) <= 1e-9);
  }
}

TEST_CASE("torsion form over a formal point is even and real") {
  rnd::Rng rng(16);
  for (int trial = 0; trial < 4; ++trial) {
    const MetricComplex e =
        rnd::with_random_germ(rng, rnd::random_complex(rng, rnd::random_shape(rng, 3, 3, trial % 2 == 0)), 2);
    const flat::TorsionFormResult t = flat::torsion_form(e);
    CHECK(t.value.max_abs_imag() <= 1e-10);
    CHECK(t.value.max_abs_of_degree(1) <= 1e-10);
    CHECK(std::abs(t.degree0() - hodge::scalar_torsion_eigen(e)) <= 1e-9);
  }
}

TEST_CASE("a non-complex is caught by the decay diagnostic or validation") {
  MetricComplex e = make_complex({1, 1, 1});
  e.v[0](0, 0) = 1;
  e.v[1](0, 0) = 1;
  CHECK_THROWS_AS(flat::torsion_form(e), Error);
}

TEST_CASE("metric variation class") {
  rnd::Rng rng(17);
  const MetricComplex e = rnd::random_complex(rng, {{2}, {1, 0}});
  CHECK(flat::tilde_f(e, e).value.max_abs() <= 1e-14);

  MetricComplex a = make_complex({1}), b = make_complex({1});
  b.h[0] *= 3.0;
  CHECK(std::abs(flat::tilde_f(a, b).value[0] - 0.5 * std::log(3.0)) <= 1e-12);

  for (int trial = 0; trial < 5; ++trial) {
    const MetricComplex e0 = rnd::random_complex(rng, rnd::random_shape(rng, 3, 4, false));
    const MetricComplex e1 = rnd::with_random_metrics(rng, e0);
    const double lin = flat::tilde_f(e0, e1, flat::Path::Linear).value[0].real();
    const double log = flat::tilde_f(e0, e1, flat::Path::LogLinear).value[0].real();
    CHECK(std::abs(lin - log) <= 1e-9);
    CHECK(std::abs(lin - hodge::tilde_f_degree0(e0.h, e1.h)) <= 1e-9);
  }
}

TEST_CASE("anomaly formula at degree 0") {
  rnd::Rng rng(18);
  for (int trial = 0; trial < 5; ++trial) {
    const MetricComplex e0 = rnd::random_complex(rng, rnd::random_shape(rng, 4, 4, false));
    const MetricComplex e1 = rnd::with_random_metrics(rng, e0);
    const hodge::HodgeData hd = hodge::hodge_decompose(e0);
    std::vector<Mat> g0, g1;
    for (int q = 0; q < e0.length(); ++q) {
      g0.push_back(hodge::cohomology_gram(e0, q, hd.harmonic[q]));
      g1.push_back(hodge::cohomology_gram(e1, q, hd.harmonic[q]));
    }
    const double lhs = flat::torsion_form(e1).degree0() - flat::torsion_form(e0).degree0();
    const double rhs = flat::tilde_f(e0, e1).value[0].real() - hodge::tilde_f_degree0(g0, g1);
    CHECK(std::abs(lhs - rhs) <= 1e-8);
  }
}

TEST_CASE("transgression on the circle, acyclic case") {
  rnd::Rng rng(19);
  const MetricComplex base = rnd::random_complex(rng, {{2}, {0, 0}});
  const MetricComplex e = rnd::with_random_family(rng, base, 32, 2.0, 2, 0.4);
  const flat::TorsionFormResult t = flat::torsion_form(e);
  CHECK(t.value.max_abs_imag() <= 1e-10);
  CHECK(t.value.max_abs_of_degree(1) <= 1e-10);
  const Form dt = exterior_d(t.value.degree_part(0));
  const Form c = flat::char_form(e);
  CHECK((dt - c).max_abs() <= 1e-6);
}

TEST_CASE("d of the metric variation class on the circle") {
  rnd::Rng rng(20);
  const MetricComplex base = rnd::random_complex(rng, {{2}, {0, 1}});
  const MetricComplex e0 = rnd::with_random_family(rng, base, 64, 1.0, 2, 0.4);
  const MetricComplex e1 = rnd::with_random_family(rng, rnd::with_random_metrics(rng, base), 64, 1.0, 2, 0.4);
  const Form tf = flat::tilde_f(e0, e1).value;
  const Form lhs = exterior_d(tf.degree_part(0));
  const Form rhs = flat::char_form(e1) - flat::char_form(e0);
  CHECK((lhs - rhs).max_abs() <= 1e-8);
}
