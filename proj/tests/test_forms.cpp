#include <cmath>
#include <numbers>

#include "doctest.h"
#include "torsion/errors.hpp"
#include "torsion/forms.hpp"
#include "torsion/random.hpp"

using namespace torsion;
using namespace torsion::forms;

namespace {

// Random FormMatrix whose coefficient on each basis element of form degree
// d has matrix parity (parity - d) mod 2, so the whole element has total
// parity `parity`.
FormMatrix random_homogeneous(rnd::Rng& rng, const FormAlgebra& alg, const std::vector<int>& grading,
                              int parity, int form_degree = -1) {
  FormMatrix m(alg, grading);
  const int n = static_cast<int>(grading.size());
  for (int a = 0; a < alg.dim(); ++a) {
    if (form_degree >= 0 && alg.degree(a) != form_degree) continue;
    Mat b = rnd::gaussian(rng, n, n);
    const int want = ((parity - alg.degree(a)) % 2 + 2) % 2;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if ((grading[i] + grading[j]) % 2 != want) b(i, j) = 0;
    m.block(a) = b;
  }
  return m;
}

double diff(const FormMatrix& a, const FormMatrix& b) { return (a - b).max_abs(); }

}  // namespace

TEST_CASE("formal algebra: generators anticommute and square to zero") {
  const FormAlgebra alg = FormAlgebra::formal(3);
  CHECK(alg.dim() == 8);
  Form x1(alg), x2(alg);
  x1.coeffs()(alg.generator_index(0)) = 1;
  x2.coeffs()(alg.generator_index(1)) = 1;
  CHECK((wedge(x1, x2) + wedge(x2, x1)).max_abs() == 0.0);
  CHECK(wedge(x1, x1).max_abs() == 0.0);
  CHECK(wedge(x1, x2).max_abs_of_degree(2) == 1.0);
}

TEST_CASE("truncation kills high-degree products") {
  const FormAlgebra alg = FormAlgebra::formal(3, 1);
  Form x1(alg), x2(alg);
  x1.coeffs()(alg.generator_index(0)) = 1;
  x2.coeffs()(alg.generator_index(1)) = 1;
  CHECK(wedge(x1, x2).max_abs() == 0.0);
}

TEST_CASE("graded commutativity and associativity on random homogeneous forms") {
  rnd::Rng rng(11);
  for (const FormAlgebra& alg : {FormAlgebra::formal(4), FormAlgebra::circle(16, 3.0)}) {
    for (int da = 0; da <= alg.max_degree(); ++da)
      for (int db = 0; db <= alg.max_degree(); ++db) {
        Form a(alg), b(alg), c(alg);
        for (int i = 0; i < alg.dim(); ++i) {
          if (alg.degree(i) == da) a.coeffs()(i) = rnd::gaussian(rng, 1, 1)(0, 0);
          if (alg.degree(i) == db) b.coeffs()(i) = rnd::gaussian(rng, 1, 1)(0, 0);
          c.coeffs()(i) = rnd::gaussian(rng, 1, 1)(0, 0);
        }
        const double s = ((da * db) % 2) ? -1.0 : 1.0;
        CHECK((wedge(a, b) - s * wedge(b, a)).max_abs() <= 1e-12);
        CHECK((wedge(wedge(a, b), c) - wedge(a, wedge(b, c))).max_abs() <= 1e-12);
      }
  }
}

TEST_CASE("wedge_mul basics") {
  rnd::Rng rng(3);
  const FormAlgebra alg = FormAlgebra::formal(2);
  const std::vector<int> gr = {0, 1, 1};
  FormMatrix m = random_homogeneous(rng, alg, gr, 0);
  CHECK(diff(wedge_mul(FormMatrix::identity(alg, gr), m), m) == 0.0);

  FormMatrix x1(alg, gr), x2(alg, gr);
  x1.block(alg.generator_index(0)).setIdentity();
  x2.block(alg.generator_index(1)).setIdentity();
  CHECK(diff(wedge_mul(x1, x2), -1.0 * wedge_mul(x2, x1)) == 0.0);

  // Degree-0 matrices: plain product.
  const Mat a = rnd::gaussian(rng, 3, 3), b = rnd::gaussian(rng, 3, 3);
  const FormMatrix p = wedge_mul(FormMatrix::constant(alg, gr, a), FormMatrix::constant(alg, gr, b));
  Mat dense = Mat::Zero(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) dense(i, j) += a(i, k) * b(k, j);
  CHECK(max_abs(p.block(0) - dense) <= 1e-12);

  CHECK_THROWS_AS(wedge_mul(x1, FormMatrix::identity(alg, {0, 1})), Error);
}

TEST_CASE("wedge_mul is associative") {
  rnd::Rng rng(5);
  for (const FormAlgebra& alg : {FormAlgebra::formal(3), FormAlgebra::circle(8, 1.0)}) {
    const std::vector<int> gr = {0, 1, 1, 2};
    for (int pa = 0; pa < 2; ++pa)
      for (int pb = 0; pb < 2; ++pb) {
        FormMatrix a = random_homogeneous(rng, alg, gr, pa);
        FormMatrix b = random_homogeneous(rng, alg, gr, pb);
        FormMatrix c = random_homogeneous(rng, alg, gr, 1);
        CHECK(diff(wedge_mul(wedge_mul(a, b), c), wedge_mul(a, wedge_mul(b, c))) <= 1e-11);
      }
  }
}

TEST_CASE("supertrace") {
  const FormAlgebra pt;
  CHECK(supertrace(FormMatrix::identity(pt, {0, 0, 1})).scalar_part() == cplx(1));
  Mat d = Mat::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = 5.0;
  CHECK(supertrace(FormMatrix::constant(pt, {0, 1}, d)).scalar_part() == cplx(-2));
}

TEST_CASE("supertrace vanishes on supercommutators") {
  rnd::Rng rng(7);
  for (const FormAlgebra& alg : {FormAlgebra::formal(3), FormAlgebra::circle(8, 2.0)}) {
    const std::vector<int> gr = {0, 0, 1, 2, 2};
    for (int pa = 0; pa < 2; ++pa)
      for (int pb = 0; pb < 2; ++pb) {
        const FormMatrix a = random_homogeneous(rng, alg, gr, pa);
        const FormMatrix b = random_homogeneous(rng, alg, gr, pb);
        const double s = (pa == 1 && pb == 1) ? -1.0 : 1.0;
        const Form lhs = supertrace(wedge_mul(a, b));
        const Form rhs = supertrace(wedge_mul(b, a));
        CHECK((lhs - s * rhs).max_abs() <= 1e-12 * std::max(1.0, lhs.max_abs()));
      }
  }
}

TEST_CASE("phi rescaling and the branch of (2 i pi)^{1/2}") {
  const FormAlgebra alg = FormAlgebra::formal(2);
  Form w(alg);
  w.coeffs()(0) = 2.0;
  w.coeffs()(alg.generator_index(0)) = 3.0;
  w.coeffs()(alg.index_of_mask(3u)) = 5.0;
  const Form p = phi_rescale(w);
  const cplx two_i_pi(0, 2 * std::numbers::pi);
  CHECK(std::abs(p[0] - cplx(2.0)) == 0.0);
  CHECK(std::abs(p[alg.index_of_mask(3u)] - 5.0 / two_i_pi) <= 1e-15);
  const cplx root = std::sqrt(2 * std::numbers::pi) * std::exp(cplx(0, std::numbers::pi / 4));
  CHECK(std::abs(sqrt_2ipi() * sqrt_2ipi() - two_i_pi) <= 1e-14);
  CHECK(std::abs(p[alg.generator_index(0)] - 3.0 / root) <= 1e-15);
}

TEST_CASE("matrix functions") {
  const FormAlgebra pt;
  const std::vector<int> gr = {0, 1, 1};
  CHECK(diff(matrix_function(FormMatrix(pt, gr), MatrixFunction::FPrime), FormMatrix::identity(pt, gr)) == 0.0);

  Mat d = Mat::Zero(3, 3);
  d(0, 0) = 0.3;
  d(1, 1) = -1.2;
  d(2, 2) = 2.0;
  const FormMatrix f = matrix_function(FormMatrix::constant(pt, gr, d), MatrixFunction::F);
  for (int i = 0; i < 3; ++i) {
    const double a = d(i, i).real();
    CHECK(std::abs(f.block(0)(i, i) - a * std::exp(a * a)) <= 1e-12 * std::exp(a * a) * std::abs(a) + 1e-14);
  }

  // Nilpotent N with N^2 = 0.
  Mat n = Mat::Zero(3, 3);
  n(0, 2) = 4.0;
  n(1, 2) = -7.0;
  const FormMatrix e = matrix_exp(FormMatrix::constant(pt, gr, n));
  CHECK(max_abs(e.block(0) - (Mat::Identity(3, 3) + n)) == 0.0);

  FormMatrix bad = FormMatrix::constant(pt, gr, d);
  bad.block(0)(0, 1) = std::nan("");
  CHECK_THROWS_AS(matrix_exp(bad), Error);
}

TEST_CASE("matrix_exp agrees with an eigendecomposition oracle on normal matrices") {
  rnd::Rng rng(13);
  const FormAlgebra pt;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = rnd::uniform_int(rng, 1, 6);
    const Mat u = rnd::unitary(rng, n);
    const Mat g = rnd::gaussian(rng, n, 1) * 2.0;
    const Mat a = u * g.col(0).asDiagonal() * u.adjoint();
    Vec ex(n);
    for (int i = 0; i < n; ++i) ex(i) = std::exp(g(i, 0));
    const Mat oracle = u * ex.asDiagonal() * u.adjoint();
    const FormMatrix e = matrix_exp(FormMatrix::constant(pt, std::vector<int>(n, 0), a));
    CHECK(max_abs(e.block(0) - oracle) <= 1e-10 * std::max(1.0, max_abs(oracle)));
  }
}

TEST_CASE("matrix_exp over a Grassmann algebra matches the truncated series") {
  // exp(a + xi b) = e^a + xi * int_0^1 e^{(1-s)a} b e^{sa} ds; for
  // commuting a, b this is e^a (1 + xi b).
  const FormAlgebra alg = FormAlgebra::formal(1);
  Mat a = Mat::Zero(2, 2), b = Mat::Zero(2, 2);
  a(0, 0) = 0.7;
  a(1, 1) = -0.4;
  b(0, 0) = 2.0;
  b(1, 1) = 3.0;
  FormMatrix m(alg, {0, 0});
  m.block(0) = a;
  m.block(alg.generator_index(0)) = b;
  const FormMatrix e = matrix_exp(m);
  Mat ea = Mat::Zero(2, 2);
  ea(0, 0) = std::exp(0.7);
  ea(1, 1) = std::exp(-0.4);
  CHECK(max_abs(e.block(0) - ea) <= 1e-13);
  CHECK(max_abs(e.block(alg.generator_index(0)) - ea * b) <= 1e-13);
}

TEST_CASE("exterior derivative on the circle") {
  const double pi = std::numbers::pi;
  const FormAlgebra alg = FormAlgebra::circle(64, 2 * pi);
  Vec c = Vec::Constant(64, 2.5), s(64), cs(64);
  for (int j = 0; j < 64; ++j) {
    s(j) = std::sin(alg.theta(j));
    cs(j) = std::cos(alg.theta(j));
  }
  CHECK(exterior_d(circle_function(alg, c, 0)).max_abs() <= 1e-12);
  const Form ds = exterior_d(circle_function(alg, s, 0));
  CHECK((ds.dtheta_part() - cs).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(exterior_d(ds).max_abs() == 0.0);
  CHECK_THROWS_AS(exterior_d(Form(FormAlgebra::formal(2))), Error);
}
