#include "torsion/hodge.hpp"

#include <cmath>
#include <sstream>

#include "torsion/errors.hpp"

namespace torsion::hodge {

namespace {

Mat inv_adjoint_lower(const Mat& l) {
  // (L^*)^{-1}
  const Mat id = Mat::Identity(l.rows(), l.cols());
  return l.adjoint().triangularView<Eigen::Upper>().solve(id);
}

}  // namespace

Mat HodgeData::harmonic_projector(int q, const Mat& h) const {
  return harmonic[q] * harmonic[q].adjoint() * h;
}

HodgeData hodge_decompose(const MetricComplex& e) {
  validate(e);
  const int k = e.length();
  HodgeData hd;
  std::vector<Mat> linv(k);
  for (int i = 0; i < k; ++i) {
    hd.chol.push_back(cholesky_lower(e.h[i]));
    linv[i] = inv_adjoint_lower(hd.chol[i]);
  }
  for (int i = 0; i + 1 < k; ++i) hd.v_on.push_back(hd.chol[i + 1].adjoint() * e.v[i] * linv[i]);
  for (int q = 0; q < k; ++q) {
    Mat lap = Mat::Zero(e.dims[q], e.dims[q]);
    if (q + 1 < k) lap += hd.v_on[q].adjoint() * hd.v_on[q];
    if (q > 0) lap += hd.v_on[q - 1] * hd.v_on[q - 1].adjoint();
    hd.laplacian.push_back(lap);
    if (lap.rows() == 0) {
      hd.eigenvalues.push_back(RVec(0));
      hd.eigenvectors.push_back(Mat(0, 0));
      continue;
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(lap);
    hd.eigenvalues.push_back(es.eigenvalues());
    hd.eigenvectors.push_back(es.eigenvectors());
    hd.spectral_radius = std::max(hd.spectral_radius, es.eigenvalues().maxCoeff());
  }
  hd.threshold = kRankTol * hd.spectral_radius;
  for (int q = 0; q < k; ++q) {
    const RVec& ev = hd.eigenvalues[q];
    std::vector<int> kernel;
    double ldp = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      const double lam = ev(i);
      if (lam > 1e-2 * hd.threshold && lam < 1e2 * hd.threshold) {
        std::ostringstream os;
        os << "Laplacian eigenvalue " << lam << " in degree " << q
           << " is within two decades of the kernel threshold " << hd.threshold
           << " (spectral radius " << hd.spectral_radius << ")";
        fail(ErrorKind::IllConditioned, os.str());
      }
      if (lam <= hd.threshold)
        kernel.push_back(static_cast<int>(i));
      else
        ldp += std::log(lam);
    }
    Mat hb(e.dims[q], kernel.size());
    for (std::size_t c = 0; c < kernel.size(); ++c) hb.col(c) = hd.eigenvectors[q].col(kernel[c]);
    hd.harmonic.push_back(linv[q] * hb);
    hd.betti.push_back(static_cast<int>(kernel.size()));
    hd.log_det_prime.push_back(ldp);
  }
  return hd;
}

double scalar_torsion_eigen(const HodgeData& hd) {
  double t = 0;
  for (std::size_t q = 0; q < hd.log_det_prime.size(); ++q)
    t += ((q % 2) ? -1.0 : 1.0) * static_cast<double>(q) * hd.log_det_prime[q];
  return 0.5 * t;
}

double scalar_torsion_eigen(const MetricComplex& e) { return scalar_torsion_eigen(hodge_decompose(e)); }

EulerData chi_primes(const MetricComplex& e, const HodgeData& hd) {
  EulerData d;
  for (int i = 0; i < e.length(); ++i) {
    const int s = (i % 2) ? -1 : 1;
    d.chi += s * e.dims[i];
    d.d_e += s * i * e.dims[i];
    d.chi_prime += s * i * hd.betti[i];
  }
  d.d_h = d.chi_prime;
  return d;
}

EulerData chi_primes(const MetricComplex& e) { return chi_primes(e, hodge_decompose(e)); }

Mat cohomology_gram(const MetricComplex& e, int q, const Mat& z) {
  HodgeData hd = hodge_decompose(e);
  if (q + 1 < e.length()) {
    const double r = max_abs(e.v[q] * z);
    if (r > 1e-9 * std::max(1.0, max_abs(e.v[q]) * max_abs(z)))
      fail(ErrorKind::Data, "cohomology_gram: input vectors are not cocycles");
  }
  const Mat c = hd.harmonic[q].adjoint() * e.h[q] * z;
  return c.adjoint() * c;
}

double tilde_f_degree0(const std::vector<Mat>& g0, const std::vector<Mat>& g1) {
  if (g0.size() != g1.size()) fail(ErrorKind::Dimension, "tilde_f_degree0: degree count mismatch");
  double s = 0;
  for (std::size_t q = 0; q < g0.size(); ++q) {
    if (g0[q].rows() != g1[q].rows()) fail(ErrorKind::Dimension, "tilde_f_degree0: size mismatch");
    const double d = log_abs_det(g1[q]) - log_abs_det(g0[q]);
    s += ((q % 2) ? -0.5 : 0.5) * d;
  }
  return s;
}

double equivariant_torsion_eigen(const MetricComplex& e, const std::vector<Mat>& g) {
  HodgeData hd = hodge_decompose(e);
  const int k = e.length();
  if (static_cast<int>(g.size()) != k) fail(ErrorKind::Dimension, "one group element block per degree");
  std::vector<Mat> g_on(k);
  for (int q = 0; q < k; ++q) {
    if (g[q].rows() != e.dims[q] || g[q].cols() != e.dims[q])
      fail(ErrorKind::Dimension, "group element block shape");
    g_on[q] = hd.chol[q].adjoint() * g[q] * inv_adjoint_lower(hd.chol[q]);
    if (max_abs(g_on[q].adjoint() * g_on[q] - Mat::Identity(e.dims[q], e.dims[q])) > 1e-9)
      fail(ErrorKind::Data, "group element is not an isometry");
  }
  for (int q = 0; q + 1 < k; ++q)
    if (max_abs(g_on[q + 1] * hd.v_on[q] - hd.v_on[q] * g_on[q]) > 1e-9 * std::max(1.0, max_abs(hd.v_on[q])))
      fail(ErrorKind::Data, "group element does not commute with the differential");
  double t = 0;
  for (int q = 0; q < k; ++q) {
    const RVec& ev = hd.eigenvalues[q];
    const Mat& u = hd.eigenvectors[q];
    Eigen::Index i = 0;
    while (i < ev.size()) {
      Eigen::Index j = i + 1;
      while (j < ev.size() && ev(j) - ev(i) <= 1e-8 * std::max(1.0, ev(i))) ++j;
      if (ev(i) > hd.threshold) {
        const Mat uc = u.middleCols(i, j - i);
        const double tr = (uc.adjoint() * g_on[q] * uc).trace().real();
        t += ((q % 2) ? -1.0 : 1.0) * q * tr * std::log(0.5 * (ev(i) + ev(j - 1)));
      }
      i = j;
    }
  }
  return 0.5 * t;
}

}  // namespace torsion::hodge
