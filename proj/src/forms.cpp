#include "torsion/forms.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include "torsion/errors.hpp"

namespace torsion::forms {

namespace {

constexpr double kPi = std::numbers::pi;

std::shared_ptr<const std::vector<Product>> formal_products(
    int n, int trunc, const std::vector<unsigned>& masks, const std::vector<int>& index) {
  auto out = std::make_shared<std::vector<Product>>();
  for (std::size_t ia = 0; ia < masks.size(); ++ia) {
    for (std::size_t ib = 0; ib < masks.size(); ++ib) {
      unsigned a = masks[ia], b = masks[ib];
      if (a & b) continue;
      if (std::popcount(a | b) > trunc) continue;
      int swaps = 0;
      for (int i = 0; i < n; ++i) {
        if (!(a >> i & 1u)) continue;
        for (int j = 0; j < i; ++j)
          if (b >> j & 1u) ++swaps;
      }
      out->push_back({static_cast<int>(ia), static_cast<int>(ib), index[a | b],
                      (swaps % 2) ? -1.0 : 1.0});
    }
  }
  return out;
}

}  // namespace

FormAlgebra::FormAlgebra() {
  degree_ = {0};
  masks_ = {0u};
  mask_to_index_ = {0};
  unit_ = {0};
  products_ = std::make_shared<const std::vector<Product>>(std::vector<Product>{{0, 0, 0, 1.0}});
}

FormAlgebra FormAlgebra::formal(int generators, int truncation) {
  if (generators < 0 || generators > 8)
    fail(ErrorKind::Configuration, "FormalPoint supports 0..8 generators");
  if (truncation < 0 || truncation > generators) truncation = generators;
  FormAlgebra a(nullptr);
  a.circle_ = false;
  a.n_ = generators;
  a.trunc_ = truncation;
  const unsigned full = 1u << generators;
  a.mask_to_index_.assign(full, -1);
  for (int d = 0; d <= truncation; ++d) {
    for (unsigned m = 0; m < full; ++m) {
      if (std::popcount(m) != d) continue;
      a.mask_to_index_[m] = static_cast<int>(a.masks_.size());
      a.masks_.push_back(m);
      a.degree_.push_back(d);
    }
  }
  a.unit_ = {0};
  a.products_ = formal_products(generators, truncation, a.masks_, a.mask_to_index_);
  return a;
}

FormAlgebra FormAlgebra::circle(int grid, double circumference) {
  if (grid < 4 || (grid & (grid - 1)) != 0)
    fail(ErrorKind::Configuration, "CircleBase grid size must be a power of two >= 4");
  if (!(circumference > 0)) fail(ErrorKind::Domain, "circumference must be positive");
  FormAlgebra a(nullptr);
  a.circle_ = true;
  a.grid_ = grid;
  a.length_ = circumference;
  a.degree_.assign(2 * grid, 0);
  auto prods = std::make_shared<std::vector<Product>>();
  for (int j = 0; j < grid; ++j) {
    a.degree_[grid + j] = 1;
    a.unit_.push_back(j);
    prods->push_back({j, j, j, 1.0});
    prods->push_back({j, grid + j, grid + j, 1.0});
    prods->push_back({grid + j, j, grid + j, 1.0});
  }
  a.products_ = prods;
  return a;
}

int FormAlgebra::index_of_mask(unsigned mask) const {
  if (circle_) fail(ErrorKind::Unsupported, "index_of_mask on CircleBase");
  if (mask >= mask_to_index_.size()) return -1;
  return mask_to_index_[mask];
}

bool FormAlgebra::operator==(const FormAlgebra& o) const {
  if (circle_ != o.circle_) return false;
  if (circle_) return grid_ == o.grid_ && length_ == o.length_;
  return n_ == o.n_ && trunc_ == o.trunc_;
}

// ---------------------------------------------------------------- Form

Form::Form(FormAlgebra alg) : alg_(std::move(alg)), c_(Vec::Zero(alg_.dim())) {}

Form::Form(FormAlgebra alg, Vec coeffs) : alg_(std::move(alg)), c_(std::move(coeffs)) {
  if (c_.size() != alg_.dim()) fail(ErrorKind::Dimension, "coefficient vector size mismatch");
}

Form Form::scalar(const FormAlgebra& alg, cplx c) {
  Form f(alg);
  for (int i : alg.unit()) f.c_(i) = c;
  return f;
}

Form& Form::operator+=(const Form& o) {
  if (alg_ != o.alg_) fail(ErrorKind::Dimension, "form algebra mismatch");
  c_ += o.c_;
  return *this;
}

Form& Form::operator-=(const Form& o) {
  if (alg_ != o.alg_) fail(ErrorKind::Dimension, "form algebra mismatch");
  c_ -= o.c_;
  return *this;
}

Form& Form::operator*=(cplx s) {
  c_ *= s;
  return *this;
}

Form Form::degree_part(int k) const {
  Form out(alg_);
  for (int i = 0; i < alg_.dim(); ++i)
    if (alg_.degree(i) == k) out.c_(i) = c_(i);
  return out;
}

Form Form::twist() const {
  Form out = *this;
  for (int i = 0; i < alg_.dim(); ++i)
    if (alg_.degree(i) % 2) out.c_(i) = -out.c_(i);
  return out;
}

double Form::max_abs() const { return c_.size() ? c_.cwiseAbs().maxCoeff() : 0.0; }

double Form::max_abs_imag() const {
  return c_.size() ? c_.imag().cwiseAbs().maxCoeff() : 0.0;
}

double Form::max_abs_of_degree(int k) const {
  double m = 0;
  for (int i = 0; i < alg_.dim(); ++i)
    if (alg_.degree(i) == k) m = std::max(m, std::abs(c_(i)));
  return m;
}

bool Form::homogeneous_degree(int* k) const {
  int found = -1;
  for (int i = 0; i < alg_.dim(); ++i) {
    if (c_(i) == cplx(0)) continue;
    if (found >= 0 && alg_.degree(i) != found) return false;
    found = alg_.degree(i);
  }
  if (k) *k = found < 0 ? 0 : found;
  return true;
}

cplx Form::scalar_part() const {
  if (alg_.is_circle()) fail(ErrorKind::Unsupported, "scalar_part of a CircleBase form");
  return c_(0);
}

Vec Form::function_part() const {
  if (!alg_.is_circle()) fail(ErrorKind::Unsupported, "function_part needs CircleBase");
  return c_.head(alg_.grid());
}

Vec Form::dtheta_part() const {
  if (!alg_.is_circle()) fail(ErrorKind::Unsupported, "dtheta_part needs CircleBase");
  return c_.tail(alg_.grid());
}

Form wedge(const Form& a, const Form& b) {
  if (a.algebra() != b.algebra()) fail(ErrorKind::Dimension, "form algebra mismatch");
  Form out(a.algebra());
  Vec& c = out.coeffs();
  for (const Product& p : a.algebra().products()) c(p.c) += p.sign * a[p.a] * b[p.b];
  return out;
}

cplx sqrt_2ipi() { return std::sqrt(2 * kPi) * std::polar(1.0, kPi / 4); }

Form phi_rescale(const Form& w) {
  Form out = w;
  const cplx inv = 1.0 / sqrt_2ipi();
  for (int i = 0; i < w.algebra().dim(); ++i)
    out.coeffs()(i) *= std::pow(inv, w.algebra().degree(i));
  return out;
}

Vec fourier_derivative(const Vec& f, double circumference) {
  const int n = static_cast<int>(f.size());
  Vec hat = Vec::Zero(n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) hat(k) += f(j) * std::polar(1.0, -2 * kPi * j * k / n);
  for (int k = 0; k < n; ++k) {
    int kk = k <= n / 2 ? k : k - n;
    if (2 * k == n) kk = 0;  // Nyquist mode has no odd derivative
    hat(k) *= cplx(0, 2 * kPi * kk / circumference);
  }
  Vec out = Vec::Zero(n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) out(j) += hat(k) * std::polar(1.0, 2 * kPi * j * k / n);
    out(j) /= n;
  }
  return out;
}

Form circle_function(const FormAlgebra& alg, const Vec& values, int degree) {
  if (!alg.is_circle()) fail(ErrorKind::Unsupported, "circle_function needs CircleBase");
  if (values.size() != alg.grid()) fail(ErrorKind::Dimension, "grid size mismatch");
  Form out(alg);
  out.coeffs().segment(degree == 0 ? 0 : alg.grid(), alg.grid()) = values;
  return out;
}

Form exterior_d(const Form& w) {
  const FormAlgebra& alg = w.algebra();
  if (!alg.is_circle()) fail(ErrorKind::Unsupported, "exterior_d is defined on CircleBase only");
  Form out(alg);
  out.coeffs().tail(alg.grid()) = fourier_derivative(w.function_part(), alg.circumference());
  return out;
}

// ---------------------------------------------------------------- FormMatrix

FormMatrix::FormMatrix(FormAlgebra alg, std::vector<int> grading)
    : alg_(std::move(alg)), grading_(std::move(grading)) {
  const int n = size();
  blocks_.assign(alg_.dim(), Mat::Zero(n, n));
}

FormMatrix FormMatrix::identity(const FormAlgebra& alg, const std::vector<int>& grading) {
  FormMatrix m(alg, grading);
  for (int i : alg.unit()) m.blocks_[i].setIdentity();
  return m;
}

FormMatrix FormMatrix::constant(const FormAlgebra& alg, const std::vector<int>& grading,
                                const Mat& c) {
  FormMatrix m(alg, grading);
  if (c.rows() != m.size() || c.cols() != m.size())
    fail(ErrorKind::Dimension, "constant matrix size mismatch");
  for (int i : alg.unit()) m.blocks_[i] = c;
  return m;
}

Form FormMatrix::entry(int i, int j) const {
  Form f(alg_);
  for (int a = 0; a < alg_.dim(); ++a) f.coeffs()(a) = blocks_[a](i, j);
  return f;
}

FormMatrix& FormMatrix::operator+=(const FormMatrix& o) {
  if (alg_ != o.alg_ || grading_ != o.grading_)
    fail(ErrorKind::Dimension, "FormMatrix shape or algebra mismatch");
  for (std::size_t a = 0; a < blocks_.size(); ++a) blocks_[a] += o.blocks_[a];
  return *this;
}

FormMatrix& FormMatrix::operator-=(const FormMatrix& o) {
  if (alg_ != o.alg_ || grading_ != o.grading_)
    fail(ErrorKind::Dimension, "FormMatrix shape or algebra mismatch");
  for (std::size_t a = 0; a < blocks_.size(); ++a) blocks_[a] -= o.blocks_[a];
  return *this;
}

FormMatrix& FormMatrix::operator*=(cplx s) {
  for (auto& b : blocks_) b *= s;
  return *this;
}

FormMatrix FormMatrix::left_mul(const std::vector<Mat>& w) const {
  FormMatrix out = *this;
  if (alg_.is_circle()) {
    const int n = alg_.grid();
    if (static_cast<int>(w.size()) != n) fail(ErrorKind::Dimension, "pointwise factor count");
    for (int j = 0; j < n; ++j) {
      out.blocks_[j] = w[j] * blocks_[j];
      out.blocks_[n + j] = w[j] * blocks_[n + j];
    }
  } else {
    if (w.size() != 1) fail(ErrorKind::Dimension, "pointwise factor count");
    for (auto& b : out.blocks_) b = w[0] * b;
  }
  return out;
}

double FormMatrix::max_abs() const {
  double m = 0;
  for (const auto& b : blocks_) m = std::max(m, torsion::max_abs(b));
  return m;
}

namespace {

double norm1(const Mat& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().colwise().sum().maxCoeff();
}

}  // namespace

double FormMatrix::degree0_norm() const {
  double m = 0;
  for (int a = 0; a < alg_.dim(); ++a)
    if (alg_.degree(a) == 0) m = std::max(m, norm1(blocks_[a]));
  return m;
}

double FormMatrix::scaling_norm() const {
  if (alg_.is_circle()) {
    const int n = alg_.grid();
    double m = 0;
    for (int j = 0; j < n; ++j) m = std::max(m, norm1(blocks_[j]) + norm1(blocks_[n + j]));
    return m;
  }
  double s = 0;
  for (const auto& b : blocks_) s += norm1(b);
  return s;
}

FormMatrix wedge_mul(const FormMatrix& a, const FormMatrix& b) {
  if (a.algebra() != b.algebra()) fail(ErrorKind::Dimension, "wedge_mul: algebra mismatch");
  if (a.grading() != b.grading()) fail(ErrorKind::Dimension, "wedge_mul: size/grading mismatch");
  const FormAlgebra& alg = a.algebra();
  const int n = a.size();
  // (MN)_{ik} = sum_j M_ij ^ tau^{p(i)+p(j)}(N_jk), tau the grading
  // automorphism of the coefficient algebra. On coefficient blocks this is
  // M_A N_B -> S^{|B|} M_A S^{|B|} N_B with S = diag((-1)^{p(i)}).
  RVec s(n);
  for (int i = 0; i < n; ++i) s(i) = (a.grading()[i] % 2) ? -1.0 : 1.0;
  std::vector<Mat> twisted;
  bool need_twist = false;
  for (int i = 0; i < alg.dim(); ++i) need_twist |= (alg.degree(i) % 2 != 0);
  if (need_twist) {
    twisted.resize(alg.dim());
    for (int i = 0; i < alg.dim(); ++i)
      twisted[i] = s.asDiagonal() * a.block(i) * s.asDiagonal();
  }
  FormMatrix out(alg, a.grading());
  for (const Product& p : alg.products()) {
    const Mat& ma = (alg.degree(p.b) % 2) ? twisted[p.a] : a.block(p.a);
    if (p.sign > 0)
      out.block(p.c).noalias() += ma * b.block(p.b);
    else
      out.block(p.c).noalias() -= ma * b.block(p.b);
  }
  return out;
}

Form weighted_supertrace(const FormMatrix& m, const Mat& w) {
  const int n = m.size();
  if (w.rows() != n || w.cols() != n) fail(ErrorKind::Dimension, "supertrace weight size");
  Vec s(n);
  for (int i = 0; i < n; ++i) s(i) = (m.grading()[i] % 2) ? -1.0 : 1.0;
  Mat sw = s.asDiagonal() * w;
  Form out(m.algebra());
  for (int a = 0; a < m.algebra().dim(); ++a)
    out.coeffs()(a) = (sw.cwiseProduct(m.block(a).transpose())).sum();
  return out;
}

Form supertrace(const FormMatrix& m) {
  return weighted_supertrace(m, Mat::Identity(m.size(), m.size()));
}

FormMatrix matrix_exp(const FormMatrix& m) {
  for (int a = 0; a < m.algebra().dim(); ++a)
    if (!m.block(a).allFinite()) fail(ErrorKind::Numeric, "matrix_exp: non-finite entries");
  const double norm = m.scaling_norm();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  FormMatrix x = m;
  x *= std::ldexp(1.0, -squarings);
  const FormMatrix id = FormMatrix::identity(m.algebra(), m.grading());
  constexpr int kOrder = 18;
  FormMatrix e = id;
  for (int k = kOrder; k >= 1; --k) {
    e = wedge_mul(x, e);
    e *= 1.0 / k;
    e += id;
  }
  for (int i = 0; i < squarings; ++i) e = wedge_mul(e, e);
  return e;
}

FormMatrix matrix_function(const FormMatrix& m, MatrixFunction which) {
  if (which == MatrixFunction::Exp) return matrix_exp(m);
  FormMatrix sq = wedge_mul(m, m);
  FormMatrix e = matrix_exp(sq);
  if (which == MatrixFunction::F) return wedge_mul(m, e);
  FormMatrix pre = FormMatrix::identity(m.algebra(), m.grading());
  sq *= 2.0;
  pre += sq;
  return wedge_mul(pre, e);
}

}  // namespace torsion::forms
