#include "torsion/random.hpp"

#include <algorithm>

#include "torsion/errors.hpp"

namespace torsion::rnd {

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Mat gaussian(Rng& rng, int rows, int cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) {
      const double re = n(rng);
      const double im = n(rng);
      m(r, c) = cplx(re, im);
    }
  return m;
}

Mat unitary(Rng& rng, int n) {
  if (n == 0) return Mat(0, 0);
  Eigen::HouseholderQR<Mat> qr(gaussian(rng, n, n));
  Mat q = qr.householderQ();
  // Fix the phases so that the distribution does not depend on the QR sign
  // convention.
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    const double a = std::abs(r(i, i));
    if (a > 0) q.col(i) *= r(i, i) / a;
  }
  return q;
}

Mat well_conditioned(Rng& rng, int rows, int cols, double smin, double smax) {
  const int k = std::min(rows, cols);
  Mat s = Mat::Zero(rows, cols);
  for (int i = 0; i < k; ++i) s(i, i) = uniform(rng, smin, smax);
  return unitary(rng, rows) * s * unitary(rng, cols).adjoint();
}

Mat hpd(Rng& rng, int n, double lo, double hi) {
  const Mat u = unitary(rng, n);
  RVec d(n);
  for (int i = 0; i < n; ++i) d(i) = uniform(rng, lo, hi);
  Mat h = u * d.cast<cplx>().asDiagonal() * u.adjoint();
  return 0.5 * (h + h.adjoint());
}

Mat hermitian(Rng& rng, int n, double scale) {
  const Mat g = gaussian(rng, n, n);
  return 0.5 * scale * (g + g.adjoint()) / std::max(1.0, std::sqrt(2.0 * n));
}

ComplexShape random_shape(Rng& rng, int max_length, int max_dim, bool acyclic) {
  const int k = uniform_int(rng, 1, max_length);
  ComplexShape s;
  s.ranks.assign(std::max(0, k - 1), 0);
  s.betti.assign(k, 0);
  for (int attempt = 0; attempt < 100; ++attempt) {
    for (int i = 0; i + 1 < k; ++i) s.ranks[i] = uniform_int(rng, 0, std::min(2, max_dim));
    bool ok = true;
    for (int i = 0; i < k; ++i) {
      const int used = (i > 0 ? s.ranks[i - 1] : 0) + (i + 1 < k ? s.ranks[i] : 0);
      s.betti[i] = acyclic ? 0 : uniform_int(rng, 0, std::max(0, std::min(2, max_dim - used)));
      ok &= used + s.betti[i] <= max_dim;
    }
    if (ok) return s;
  }
  fail(ErrorKind::Configuration, "random_shape: could not fit ranks into max_dim");
}

MetricComplex random_complex(Rng& rng, const ComplexShape& shape) {
  const int k = static_cast<int>(shape.betti.size());
  std::vector<int> dims(k);
  for (int i = 0; i < k; ++i)
    dims[i] = (i > 0 ? shape.ranks[i - 1] : 0) + (i + 1 < k ? shape.ranks[i] : 0) + shape.betti[i];
  MetricComplex e = make_complex(dims);
  // Standard form: E^i = B^i (+) H^i (+) C^i with v_i: C^i -> B^{i+1}.
  std::vector<Mat> basis(k);
  for (int i = 0; i < k; ++i) basis[i] = well_conditioned(rng, dims[i], dims[i]);
  for (int i = 0; i + 1 < k; ++i) {
    Mat j = Mat::Zero(dims[i + 1], dims[i]);
    const int r = shape.ranks[i];
    const int src = dims[i] - r;  // C^i occupies the last r coordinates
    for (int a = 0; a < r; ++a) j(a, src + a) = uniform(rng, 0.5, 2.0);
    e.v[i] = basis[i + 1] * j * basis[i].inverse();
  }
  for (int i = 0; i < k; ++i) e.h[i] = hpd(rng, dims[i]);
  return e;
}

MetricComplex with_random_metrics(Rng& rng, const MetricComplex& e, double lo, double hi) {
  MetricComplex out = e;
  for (int i = 0; i < e.length(); ++i) out.h[i] = hpd(rng, e.dims[i], lo, hi);
  return out;
}

MetricComplex with_random_germ(Rng& rng, const MetricComplex& e, int generators, double scale) {
  MetricComplex out = e;
  FormalGerm g;
  g.algebra = forms::FormAlgebra::formal(generators);
  for (int i = 0; i < e.length(); ++i) {
    g.dh.emplace_back();
    for (int j = 0; j < generators; ++j) g.dh[i].push_back(hermitian(rng, e.dims[i], scale));
  }
  out.base = g;
  return out;
}

MetricComplex with_random_family(Rng& rng, const MetricComplex& e, int grid, double circumference,
                                 int max_k, double amp) {
  MetricComplex out = e;
  CircleFamily c;
  c.algebra = forms::FormAlgebra::circle(grid, circumference);
  for (int i = 0; i < e.length(); ++i) {
    c.terms.emplace_back();
    const int n = e.dims[i];
    if (n == 0) continue;
    const double lmin = Eigen::SelfAdjointEigenSolver<Mat>(e.h[i]).eigenvalues().minCoeff();
    for (int kk = 1; kk <= max_k; ++kk) {
      TrigTerm t;
      t.k = kk;
      t.cos_part = hermitian(rng, n, 1.0);
      t.sin_part = hermitian(rng, n, 1.0);
      // Total operator norm of all terms stays below amp * lmin.
      const double norm = t.cos_part.norm() + t.sin_part.norm();
      const double s = amp * lmin / (max_k * std::max(norm, 1e-12));
      t.cos_part *= s;
      t.sin_part *= s;
      c.terms[i].push_back(t);
    }
  }
  out.base = c;
  return out;
}

}  // namespace torsion::rnd
