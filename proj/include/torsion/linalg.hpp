#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace torsion {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

// Relative threshold below which singular values / eigenvalues count as zero.
inline constexpr double kRankTol = 1e-10;

double max_abs(const Mat& m);
bool is_hermitian(const Mat& m, double tol);

// Lower Cholesky factor L with h = L L^*. Throws Domain if h is not
// Hermitian positive definite (smallest eigenvalue <= 1e-12 * largest).
Mat cholesky_lower(const Mat& h);
bool is_positive_definite(const Mat& h);

// Orthonormal basis (columns) of the column space of a. Singular values
// below `abs_tol` are dropped.
Mat range_basis(const Mat& a, double abs_tol);
// Orthonormal basis of the null space of a (a has `cols` columns).
Mat kernel_basis(const Mat& a, double abs_tol);
int numeric_rank(const Mat& a, double abs_tol);

// Orthonormal basis of the orthogonal complement of span(b) inside
// span(q), where q has orthonormal columns. Result is expressed in the
// ambient coordinates.
Mat complement_in(const Mat& q, const Mat& b, double abs_tol);

// Minimum-norm least-squares solution of a x = b.
Mat solve_min_norm(const Mat& a, const Mat& b);

double log_abs_det(const Mat& a);

// Hermitian square root and inverse square root of a positive definite h.
Mat sqrt_hpd(const Mat& h);
Mat inv_sqrt_hpd(const Mat& h);
// h^s for real s.
Mat pow_hpd(const Mat& h, double s);
Mat log_hpd(const Mat& h);

Mat block_diag(const std::vector<Mat>& blocks);

}  // namespace torsion
