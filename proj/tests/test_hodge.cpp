#include <cmath>

#include "doctest.h"
#include "torsion/errors.hpp"
#include "torsion/hodge.hpp"
#include "torsion/random.hpp"

using namespace torsion;

TEST_CASE("zero differential: everything is harmonic") {
  rnd::Rng rng(1);
  MetricComplex e = rnd::with_random_metrics(rng, make_complex({2, 3}));
  const hodge::HodgeData hd = hodge::hodge_decompose(e);
  CHECK(hd.betti == std::vector<int>{2, 3});
  for (int q = 0; q < 2; ++q) {
    CHECK(max_abs(hd.laplacian[q]) == 0.0);
    // Gram of the identity basis is h.
    const Mat z = Mat::Identity(e.dims[q], e.dims[q]);
    CHECK(max_abs(hodge::cohomology_gram(e, q, z) - e.h[q]) <= 1e-12);
  }
  CHECK(hodge::scalar_torsion_eigen(e) == 0.0);
  const hodge::EulerData eu = hodge::chi_primes(e);
  CHECK(eu.d_e == -3);
  CHECK(eu.d_h == -3);
}

TEST_CASE("two-term complex") {
  rnd::Rng rng(2);
  const Mat tau = rnd::well_conditioned(rng, 3, 3);
  const hodge::HodgeData hd = hodge::hodge_decompose(two_term(tau));
  const RVec e0 = Eigen::SelfAdjointEigenSolver<Mat>(tau.adjoint() * tau).eigenvalues();
  const RVec e1 = Eigen::SelfAdjointEigenSolver<Mat>(tau * tau.adjoint()).eigenvalues();
  CHECK((hd.eigenvalues[0] - e0).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((hd.eigenvalues[1] - e1).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(hd.betti == std::vector<int>{0, 0});
  CHECK(std::abs(hodge::scalar_torsion_eigen(two_term(tau)) + log_abs_det(tau)) <= 1e-12);
  CHECK(std::abs(hodge::scalar_torsion_eigen(two_term(2.0 * Mat::Identity(1, 1))) + std::log(2.0)) <= 1e-15);
  const hodge::EulerData eu = hodge::chi_primes(two_term(Mat::Identity(1, 1)));
  CHECK(eu.d_e == -1);
  CHECK(eu.d_h == 0);
  CHECK(eu.chi == 0);
}

TEST_CASE("planted kernel is recovered") {
  rnd::Rng rng(3);
  rnd::ComplexShape s{{1, 1}, {0, 1, 0}};
  const MetricComplex e = rnd::random_complex(rng, s);
  CHECK(e.dims == std::vector<int>{1, 3, 1});
  CHECK(hodge::hodge_decompose(e).betti == std::vector<int>{0, 1, 0});
}

TEST_CASE("harmonic projectors and Hodge orthogonality") {
  rnd::Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const MetricComplex e = rnd::random_complex(rng, rnd::random_shape(rng, 4, 5, false));
    const hodge::HodgeData hd = hodge::hodge_decompose(e);
    for (int q = 0; q < e.length(); ++q) {
      const Mat p = hd.harmonic_projector(q, e.h[q]);
      CHECK(max_abs(p * p - p) <= 1e-12);
      // h-self-adjoint: h P = (h P)^*.
      CHECK(max_abs(e.h[q] * p - (e.h[q] * p).adjoint()) <= 1e-12);
      CHECK(hd.betti[q] == e.dims[q] - (q > 0 ? numeric_rank(e.v[q - 1], 1e-9) : 0) -
                               (q + 1 < e.length() ? numeric_rank(e.v[q], 1e-9) : 0));
    }
    // im v, im v^*, ker Delta mutually orthogonal in orthonormal coordinates.
    for (int q = 1; q + 1 < e.length(); ++q) {
      const Mat im_v = hd.v_on[q - 1];
      const Mat im_vs = hd.v_on[q].adjoint();
      const Mat ker = hd.chol[q].adjoint() * hd.harmonic[q];
      CHECK(max_abs(im_v.adjoint() * im_vs) <= 1e-12);
      CHECK(max_abs(im_v.adjoint() * ker) <= 1e-12);
      CHECK(max_abs(im_vs.adjoint() * ker) <= 1e-12);
    }
  }
}

TEST_CASE("near-threshold spectrum is reported as ill-conditioned") {
  Mat tau = Mat::Identity(2, 2);
  tau(1, 1) = 1e-5;
  try {
    hodge::hodge_decompose(two_term(tau));
    FAIL("expected an error");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::IllConditioned);
  }
}

TEST_CASE("invalid complexes are rejected") {
  MetricComplex e = make_complex({1, 1, 1});
  e.v[0](0, 0) = 1;
  e.v[1](0, 0) = 1;
  CHECK_THROWS_AS(hodge::hodge_decompose(e), Error);
  MetricComplex f = make_complex({2});
  f.h[0](1, 1) = -1;
  CHECK_THROWS_AS(hodge::hodge_decompose(f), Error);
}

TEST_CASE("equivariant eigen torsion with the identity is the scalar torsion") {
  rnd::Rng rng(5);
  const MetricComplex e = rnd::random_complex(rng, rnd::random_shape(rng, 4, 4, false));
  std::vector<Mat> g;
  for (int d : e.dims) g.push_back(Mat::Identity(d, d));
  CHECK(std::abs(hodge::equivariant_torsion_eigen(e, g) - hodge::scalar_torsion_eigen(e)) <= 1e-12);
}

TEST_CASE("degree-0 metric variation class") {
  std::vector<Mat> g0 = {Mat::Identity(1, 1), Mat::Identity(1, 1)};
  std::vector<Mat> g1 = {3.0 * Mat::Identity(1, 1), 5.0 * Mat::Identity(1, 1)};
  CHECK(std::abs(hodge::tilde_f_degree0(g0, g1) - 0.5 * (std::log(3.0) - std::log(5.0))) <= 1e-15);
}
