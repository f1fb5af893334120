#include "torsion/linalg.hpp"

#include <cmath>
#include <sstream>

#include "torsion/errors.hpp"

namespace torsion {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::Dimension: return "dimension error";
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Numeric: return "numeric error";
    case ErrorKind::Configuration: return "configuration error";
    case ErrorKind::Data: return "data error";
    case ErrorKind::Unsupported: return "unsupported operation";
    case ErrorKind::IllConditioned: return "ill-conditioned";
    case ErrorKind::Precision: return "precision error";
    case ErrorKind::Schema: return "schema error";
    case ErrorKind::Construction: return "construction error";
  }
  return "error";
}

void fail(ErrorKind kind, const std::string& msg) {
  throw Error(kind, std::string(to_string(kind)) + ": " + msg);
}

double max_abs(const Mat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const Mat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.adjoint()) <= tol * std::max(1.0, max_abs(m));
}

bool is_positive_definite(const Mat& h) {
  if (h.rows() != h.cols()) return false;
  if (h.rows() == 0) return true;
  if (!is_hermitian(h, 1e-10)) return false;
  Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
  const RVec& ev = es.eigenvalues();
  return ev(ev.size() - 1) > 0 && ev(0) > 1e-12 * ev(ev.size() - 1);
}

Mat cholesky_lower(const Mat& h) {
  if (!is_positive_definite(h)) {
    std::ostringstream os;
    os << "metric of size " << h.rows() << " is not Hermitian positive definite";
    fail(ErrorKind::Domain, os.str());
  }
  if (h.rows() == 0) return Mat(0, 0);
  Mat hs = 0.5 * (h + h.adjoint());
  Eigen::LLT<Mat> llt(hs);
  return llt.matrixL();
}

namespace {

struct Svd {
  Mat u, v;
  RVec s;
};

Svd full_svd(const Mat& a) {
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {svd.matrixU(), svd.matrixV(), svd.singularValues()};
}

}  // namespace

int numeric_rank(const Mat& a, double abs_tol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(a);
  int r = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > abs_tol) ++r;
  return r;
}

Mat range_basis(const Mat& a, double abs_tol) {
  if (a.rows() == 0 || a.cols() == 0) return Mat(a.rows(), 0);
  Svd s = full_svd(a);
  int r = 0;
  for (Eigen::Index i = 0; i < s.s.size(); ++i)
    if (s.s(i) > abs_tol) ++r;
  return s.u.leftCols(r);
}

Mat kernel_basis(const Mat& a, double abs_tol) {
  const Eigen::Index n = a.cols();
  if (n == 0) return Mat(0, 0);
  if (a.rows() == 0) return Mat::Identity(n, n);
  Svd s = full_svd(a);
  int r = 0;
  for (Eigen::Index i = 0; i < s.s.size(); ++i)
    if (s.s(i) > abs_tol) ++r;
  return s.v.rightCols(n - r);
}

Mat complement_in(const Mat& q, const Mat& b, double abs_tol) {
  const Eigen::Index k = q.cols();
  if (k == 0) return Mat(q.rows(), 0);
  if (b.cols() == 0) return q;
  Mat coords = q.adjoint() * b;  // b expressed inside span(q)
  Mat rb = range_basis(coords, abs_tol);
  if (rb.cols() == 0) return q;
  Mat perp = kernel_basis(rb.adjoint(), 0.5);
  return q * perp;
}

Mat solve_min_norm(const Mat& a, const Mat& b) {
  if (a.cols() == 0) return Mat::Zero(0, b.cols());
  if (a.rows() == 0) return Mat::Zero(a.cols(), b.cols());
  Eigen::CompleteOrthogonalDecomposition<Mat> cod;
  cod.setThreshold(kRankTol);
  cod.compute(a);
  return cod.solve(b);
}

double log_abs_det(const Mat& a) {
  if (a.rows() != a.cols()) fail(ErrorKind::Dimension, "log_abs_det of non-square matrix");
  if (a.rows() == 0) return 0.0;
  Eigen::PartialPivLU<Mat> lu(a);
  double s = 0;
  const Mat& m = lu.matrixLU();
  for (Eigen::Index i = 0; i < m.rows(); ++i) s += std::log(std::abs(m(i, i)));
  return s;
}

namespace {

template <class F>
Mat hpd_function(const Mat& h, F fn) {
  if (h.rows() == 0) return h;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (h + h.adjoint()));
  RVec ev = es.eigenvalues();
  if (ev(0) <= 0) fail(ErrorKind::Domain, "matrix function of a non-positive matrix");
  Vec f(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) f(i) = fn(ev(i));
  return es.eigenvectors() * f.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

Mat sqrt_hpd(const Mat& h) {
  return hpd_function(h, [](double x) { return std::sqrt(x); });
}
Mat inv_sqrt_hpd(const Mat& h) {
  return hpd_function(h, [](double x) { return 1.0 / std::sqrt(x); });
}
Mat pow_hpd(const Mat& h, double s) {
  return hpd_function(h, [s](double x) { return std::pow(x, s); });
}
Mat log_hpd(const Mat& h) {
  return hpd_function(h, [](double x) { return std::log(x); });
}

Mat block_diag(const std::vector<Mat>& blocks) {
  Eigen::Index r = 0, c = 0;
  for (const auto& b : blocks) {
    r += b.rows();
    c += b.cols();
  }
  Mat out = Mat::Zero(r, c);
  r = c = 0;
  for (const auto& b : blocks) {
    out.block(r, c, b.rows(), b.cols()) = b;
    r += b.rows();
    c += b.cols();
  }
  return out;
}

}  // namespace torsion
