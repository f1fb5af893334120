#include "torsion/metric_complex.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "torsion/errors.hpp"

namespace torsion {

int MetricComplex::total_dim() const {
  int n = 0;
  for (int d : dims) n += d;
  return n;
}

std::vector<int> MetricComplex::offsets() const {
  std::vector<int> off(dims.size() + 1, 0);
  for (std::size_t i = 0; i < dims.size(); ++i) off[i + 1] = off[i] + dims[i];
  return off;
}

std::vector<int> MetricComplex::grading() const {
  std::vector<int> g;
  for (std::size_t i = 0; i < dims.size(); ++i) g.insert(g.end(), dims[i], static_cast<int>(i));
  return g;
}

Mat MetricComplex::total_v() const {
  const auto off = offsets();
  Mat out = Mat::Zero(total_dim(), total_dim());
  for (std::size_t i = 0; i + 1 < dims.size(); ++i)
    out.block(off[i + 1], off[i], dims[i + 1], dims[i]) = v[i];
  return out;
}

Mat MetricComplex::total_h() const { return block_diag(h); }

Mat MetricComplex::number_operator() const {
  const auto g = grading();
  Mat n = Mat::Zero(g.size(), g.size());
  for (std::size_t i = 0; i < g.size(); ++i) n(i, i) = g[i];
  return n;
}

forms::FormAlgebra MetricComplex::algebra() const {
  if (const auto* g = std::get_if<FormalGerm>(&base)) return g->algebra;
  if (const auto* c = std::get_if<CircleFamily>(&base)) return c->algebra;
  return forms::FormAlgebra();
}

Mat MetricComplex::metric_at(int i, double theta) const {
  const auto* c = std::get_if<CircleFamily>(&base);
  if (!c) return h[i];
  const double w = 2 * std::numbers::pi / c->algebra.circumference();
  Mat m = h[i];
  for (const TrigTerm& t : c->terms[i])
    m += std::cos(w * t.k * theta) * t.cos_part + std::sin(w * t.k * theta) * t.sin_part;
  return m;
}

Mat MetricComplex::metric_derivative_at(int i, double theta) const {
  const auto* c = std::get_if<CircleFamily>(&base);
  Mat m = Mat::Zero(dims[i], dims[i]);
  if (!c) return m;
  const double w = 2 * std::numbers::pi / c->algebra.circumference();
  for (const TrigTerm& t : c->terms[i])
    m += w * t.k * (-std::sin(w * t.k * theta) * t.cos_part + std::cos(w * t.k * theta) * t.sin_part);
  return m;
}

MetricComplex make_complex(const std::vector<int>& dims) {
  MetricComplex e;
  e.dims = dims;
  for (std::size_t i = 0; i + 1 < dims.size(); ++i) e.v.push_back(Mat::Zero(dims[i + 1], dims[i]));
  for (int d : dims) e.h.push_back(Mat::Identity(d, d));
  return e;
}

MetricComplex two_term(const Mat& tau) {
  if (tau.rows() != tau.cols()) fail(ErrorKind::Dimension, "two_term: tau must be square");
  const int r = static_cast<int>(tau.rows());
  MetricComplex e = make_complex({r, r});
  e.v[0] = tau;
  return e;
}

namespace {

std::string shape(const Mat& m) {
  std::ostringstream os;
  os << m.rows() << "x" << m.cols();
  return os.str();
}

}  // namespace

void validate(const MetricComplex& e, double tol) {
  const int k = e.length();
  for (int d : e.dims)
    if (d < 0) fail(ErrorKind::Dimension, "negative dimension");
  if (static_cast<int>(e.v.size()) != std::max(0, k - 1))
    fail(ErrorKind::Dimension, "expected one differential per consecutive pair of degrees");
  if (static_cast<int>(e.h.size()) != k) fail(ErrorKind::Dimension, "expected one metric per degree");
  for (int i = 0; i + 1 < k; ++i) {
    if (e.v[i].rows() != e.dims[i + 1] || e.v[i].cols() != e.dims[i]) {
      std::ostringstream os;
      os << "v[" << i << "] has shape " << shape(e.v[i]) << ", expected " << e.dims[i + 1] << "x"
         << e.dims[i];
      fail(ErrorKind::Dimension, os.str());
    }
    if (!e.v[i].allFinite()) fail(ErrorKind::Numeric, "non-finite differential");
  }
  for (int i = 0; i < k; ++i) {
    if (e.h[i].rows() != e.dims[i] || e.h[i].cols() != e.dims[i]) {
      std::ostringstream os;
      os << "h[" << i << "] has shape " << shape(e.h[i]) << ", expected " << e.dims[i] << "x"
         << e.dims[i];
      fail(ErrorKind::Dimension, os.str());
    }
    if (!is_positive_definite(e.h[i])) {
      std::ostringstream os;
      os << "h[" << i << "] is not Hermitian positive definite";
      fail(ErrorKind::Data, os.str());
    }
  }
  for (int i = 0; i + 2 < k; ++i) {
    const double scale = std::max(1.0, max_abs(e.v[i + 1]) * max_abs(e.v[i]));
    const double r = max_abs(e.v[i + 1] * e.v[i]);
    if (r > tol * scale) {
      std::ostringstream os;
      os << "v[" << i + 1 << "] v[" << i << "] != 0 (max entry " << r << ")";
      fail(ErrorKind::Data, os.str());
    }
  }
  if (const auto* g = std::get_if<FormalGerm>(&e.base)) {
    if (g->algebra.is_circle()) fail(ErrorKind::Configuration, "germ needs a FormalPoint algebra");
    if (static_cast<int>(g->dh.size()) != k) fail(ErrorKind::Dimension, "germ: one entry per degree");
    for (int i = 0; i < k; ++i) {
      if (static_cast<int>(g->dh[i].size()) != g->algebra.generators())
        fail(ErrorKind::Dimension, "germ: one derivative per generator");
      for (const Mat& d : g->dh[i]) {
        if (d.rows() != e.dims[i] || d.cols() != e.dims[i])
          fail(ErrorKind::Dimension, "germ derivative shape");
        if (!is_hermitian(d, 1e-10)) fail(ErrorKind::Data, "germ derivative is not Hermitian");
      }
    }
  }
  if (const auto* c = std::get_if<CircleFamily>(&e.base)) {
    if (!c->algebra.is_circle()) fail(ErrorKind::Configuration, "metric family needs CircleBase");
    if (static_cast<int>(c->terms.size()) != k) fail(ErrorKind::Dimension, "family: one entry per degree");
    for (int i = 0; i < k; ++i)
      for (const TrigTerm& t : c->terms[i]) {
        if (t.k < 1) fail(ErrorKind::Data, "trigonometric harmonic must be >= 1");
        if (t.cos_part.rows() != e.dims[i] || t.cos_part.cols() != e.dims[i] ||
            t.sin_part.rows() != e.dims[i] || t.sin_part.cols() != e.dims[i])
          fail(ErrorKind::Dimension, "family term shape");
        if (!is_hermitian(t.cos_part, 1e-10) || !is_hermitian(t.sin_part, 1e-10))
          fail(ErrorKind::Data, "family term is not Hermitian");
      }
    const int n = c->algebra.grid();
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < 2 * n; ++j) {
        const double th = c->algebra.circumference() * j / (2.0 * n);
        if (!is_positive_definite(e.metric_at(i, th))) {
          std::ostringstream os;
          os << "metric family of degree " << i << " leaves the positive cone at theta = " << th;
          fail(ErrorKind::Data, os.str());
        }
      }
    if (!c->holonomy.empty()) {
      if (static_cast<int>(c->holonomy.size()) != k) fail(ErrorKind::Dimension, "holonomy: one per degree");
      for (int i = 0; i < k; ++i) {
        const Mat& u = c->holonomy[i];
        if (u.rows() != e.dims[i] || u.cols() != e.dims[i]) fail(ErrorKind::Dimension, "holonomy shape");
        const Mat h0 = e.metric_at(i, 0.0);
        if (max_abs(u.adjoint() * h0 * u - h0) > 1e-9 * std::max(1.0, max_abs(h0)))
          fail(ErrorKind::Data, "holonomy does not preserve the metric at the cut");
      }
      for (int i = 0; i + 1 < k; ++i)
        if (max_abs(c->holonomy[i + 1] * e.v[i] - e.v[i] * c->holonomy[i]) > tol * std::max(1.0, max_abs(e.v[i])))
          fail(ErrorKind::Data, "differential is not flat: it does not commute with the holonomy");
    }
  }
}

MetricComplex rescale_metric(const MetricComplex& e, double t) {
  if (!(t > 0)) fail(ErrorKind::Domain, "rescale_metric needs t > 0");
  MetricComplex out = e;
  for (int i = 0; i < e.length(); ++i) {
    const double s = std::pow(t, i);
    out.h[i] *= s;
    if (auto* g = std::get_if<FormalGerm>(&out.base))
      for (Mat& d : g->dh[i]) d *= s;
    if (auto* c = std::get_if<CircleFamily>(&out.base))
      for (TrigTerm& tt : c->terms[i]) {
        tt.cos_part *= s;
        tt.sin_part *= s;
      }
  }
  return out;
}

Mat adjoint_differential(const MetricComplex& e, double t) {
  const Mat h = e.total_h();
  Mat vstar = h.inverse() * e.total_v().adjoint() * h;
  const auto g = e.grading();
  for (int r = 0; r < vstar.rows(); ++r)
    for (int c = 0; c < vstar.cols(); ++c) vstar(r, c) *= std::pow(t, g[c] - g[r]);
  return vstar;
}

}  // namespace torsion
