#pragma once

// Coefficient algebras for differential forms and matrices over them.
//
// An algebra has a finite basis {e_A}; every element is stored as its
// coefficient vector. Two kinds are supported:
//   FormalPoint(n, k): the exterior algebra on n anticommuting generators
//     xi_1..xi_n, truncated above degree k. Basis = subsets (bitmasks).
//   CircleBase(N, L): functions on a uniform grid of N points on a circle
//     of circumference L, plus functions times dtheta. Basis index j < N is
//     the indicator of grid point j in degree 0, index N + j the same in
//     degree 1.
// A FormMatrix is stored coefficient-major: M = sum_A e_A (x) M_A.

#include <cstddef>
#include <memory>
#include <vector>

#include "torsion/linalg.hpp"

namespace torsion::forms {

struct FormalPoint {
  int generators = 0;
  int truncation = -1;  // -1: full exterior algebra
};

struct CircleBase {
  int grid = 64;
  double circumference = 2.0 * 3.14159265358979323846;
};

struct Product {
  int a, b, c;
  double sign;
};

class FormAlgebra {
 public:
  FormAlgebra();  // the point: FormalPoint(0)
  static FormAlgebra formal(int generators, int truncation = -1);
  static FormAlgebra circle(int grid, double circumference);

  bool is_circle() const { return circle_; }
  int generators() const { return n_; }
  int truncation() const { return trunc_; }
  int grid() const { return grid_; }
  double circumference() const { return length_; }

  int dim() const { return static_cast<int>(degree_.size()); }
  int degree(int idx) const { return degree_[idx]; }
  int max_degree() const { return circle_ ? 1 : trunc_; }
  const std::vector<Product>& products() const { return *products_; }
  // Indices whose basis elements sum to the unit.
  const std::vector<int>& unit() const { return unit_; }

  // FormalPoint only: index of the basis monomial for a generator bitmask,
  // or -1 when truncated away.
  int index_of_mask(unsigned mask) const;
  unsigned mask_of_index(int idx) const { return masks_[idx]; }
  int generator_index(int j) const { return index_of_mask(1u << j); }

  // CircleBase only.
  double theta(int j) const { return length_ * j / grid_; }

  bool operator==(const FormAlgebra& o) const;
  bool operator!=(const FormAlgebra& o) const { return !(*this == o); }

 private:
  explicit FormAlgebra(std::nullptr_t) {}

  bool circle_ = false;
  int n_ = 0, trunc_ = 0, grid_ = 0;
  double length_ = 0;
  std::vector<int> degree_;
  std::vector<unsigned> masks_;
  std::vector<int> mask_to_index_;
  std::vector<int> unit_;
  std::shared_ptr<const std::vector<Product>> products_;
};

class Form {
 public:
  Form() = default;
  explicit Form(FormAlgebra alg);
  Form(FormAlgebra alg, Vec coeffs);
  static Form scalar(const FormAlgebra& alg, cplx c);

  const FormAlgebra& algebra() const { return alg_; }
  const Vec& coeffs() const { return c_; }
  Vec& coeffs() { return c_; }
  cplx operator[](int idx) const { return c_(idx); }

  Form& operator+=(const Form& o);
  Form& operator-=(const Form& o);
  Form& operator*=(cplx s);
  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }
  friend Form operator*(cplx s, Form a) { return a *= s; }
  friend Form operator*(Form a, cplx s) { return a *= s; }

  // Homogeneous component of the given form degree.
  Form degree_part(int k) const;
  // Grading automorphism: degree-k component times (-1)^k.
  Form twist() const;
  double max_abs() const;
  double max_abs_imag() const;
  double max_abs_of_degree(int k) const;
  bool homogeneous_degree(int* k) const;

  // Point case: the scalar coefficient. Circle case: not defined.
  cplx scalar_part() const;
  // Circle case: degree-0 / degree-1 coefficient functions on the grid.
  Vec function_part() const;
  Vec dtheta_part() const;

 private:
  FormAlgebra alg_;
  Vec c_;
};

Form wedge(const Form& a, const Form& b);

// phi: degree-k component times (2 i pi)^{-k/2}, with
// (2 i pi)^{1/2} = sqrt(2 pi) e^{i pi / 4}.
Form phi_rescale(const Form& w);
cplx sqrt_2ipi();

// CircleBase only; Fourier differentiation in theta.
Form exterior_d(const Form& w);
Form circle_function(const FormAlgebra& alg, const Vec& values, int degree);
Vec fourier_derivative(const Vec& samples, double circumference);

class FormMatrix {
 public:
  FormMatrix() = default;
  FormMatrix(FormAlgebra alg, std::vector<int> grading);
  static FormMatrix identity(const FormAlgebra& alg, const std::vector<int>& grading);
  // Constant degree-0 matrix (same at every grid point for circles).
  static FormMatrix constant(const FormAlgebra& alg, const std::vector<int>& grading,
                             const Mat& m);

  int size() const { return static_cast<int>(grading_.size()); }
  const FormAlgebra& algebra() const { return alg_; }
  const std::vector<int>& grading() const { return grading_; }
  Mat& block(int idx) { return blocks_[idx]; }
  const Mat& block(int idx) const { return blocks_[idx]; }
  // Entry (i, j) as an algebra element.
  Form entry(int i, int j) const;

  FormMatrix& operator+=(const FormMatrix& o);
  FormMatrix& operator-=(const FormMatrix& o);
  FormMatrix& operator*=(cplx s);
  friend FormMatrix operator+(FormMatrix a, const FormMatrix& b) { return a += b; }
  friend FormMatrix operator-(FormMatrix a, const FormMatrix& b) { return a -= b; }
  friend FormMatrix operator*(cplx s, FormMatrix a) { return a *= s; }

  // Left-multiply every coefficient block by a degree-0 constant matrix.
  // `pointwise` (circle) supplies one matrix per grid point.
  FormMatrix left_mul(const std::vector<Mat>& pointwise) const;

  double max_abs() const;
  // Largest 1-norm of the degree-0 part (max over grid points for circles)
  // and of the full element; used for scaling.
  double degree0_norm() const;
  double scaling_norm() const;

 private:
  FormAlgebra alg_;
  std::vector<int> grading_;
  std::vector<Mat> blocks_;
};

FormMatrix wedge_mul(const FormMatrix& a, const FormMatrix& b);
Form supertrace(const FormMatrix& m);
// tr_s[W M] for a constant degree-0 matrix W (the number operator, a group
// element, ...).
Form weighted_supertrace(const FormMatrix& m, const Mat& weight);

enum class MatrixFunction { Exp, F, FPrime };
FormMatrix matrix_function(const FormMatrix& m, MatrixFunction which);
FormMatrix matrix_exp(const FormMatrix& m);

}  // namespace torsion::forms
