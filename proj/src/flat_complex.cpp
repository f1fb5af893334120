#include "torsion/flat_complex.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "torsion/errors.hpp"
#include "torsion/hodge.hpp"

namespace torsion::flat {

using forms::Form;
using forms::FormAlgebra;
using forms::FormMatrix;

namespace {

Mat inv_lower(const Mat& l) {
  return l.triangularView<Eigen::Lower>().solve(Mat::Identity(l.rows(), l.cols()));
}

// Per-point orthonormal-frame data. One point for a point base, one per
// grid point on a circle.
struct Frame {
  Mat v, v_adj;                 // v' and v'^*
  std::vector<Mat> omega;       // omega' per degree-1 basis direction
};

struct Frames {
  FormAlgebra alg;
  std::vector<int> grading;
  std::vector<Frame> points;
  std::vector<int> omega_index;  // algebra index of each degree-1 direction
};

std::vector<Mat> metrics_at(const MetricComplex& e, double theta) {
  std::vector<Mat> out;
  for (int i = 0; i < e.length(); ++i) out.push_back(e.metric_at(i, theta));
  return out;
}

Frame make_frame(const Mat& v, const Mat& h, const std::vector<Mat>& dh) {
  const Mat l = cholesky_lower(h);
  const Mat li = inv_lower(l);
  Frame f;
  f.v = l.adjoint() * v * li.adjoint();
  f.v_adj = f.v.adjoint();
  for (const Mat& d : dh) f.omega.push_back(li * d * li.adjoint());
  return f;
}

Frames make_frames(const MetricComplex& e) {
  validate(e);
  Frames fr;
  fr.alg = e.algebra();
  fr.grading = e.grading();
  const Mat v = e.total_v();
  if (const auto* g = std::get_if<FormalGerm>(&e.base)) {
    std::vector<Mat> dh;
    for (int j = 0; j < fr.alg.generators(); ++j) {
      std::vector<Mat> blocks;
      for (int i = 0; i < e.length(); ++i) blocks.push_back(g->dh[i][j]);
      dh.push_back(block_diag(blocks));
      fr.omega_index.push_back(fr.alg.generator_index(j));
    }
    fr.points.push_back(make_frame(v, e.total_h(), dh));
  } else if (e.on_circle()) {
    const int n = fr.alg.grid();
    for (int j = 0; j < n; ++j) {
      const double th = fr.alg.theta(j);
      std::vector<Mat> d;
      for (int i = 0; i < e.length(); ++i) d.push_back(e.metric_derivative_at(i, th));
      fr.points.push_back(make_frame(v, block_diag(metrics_at(e, th)), {block_diag(d)}));
    }
    fr.omega_index.push_back(-1);  // per point: index n + j
  } else {
    fr.points.push_back(make_frame(v, e.total_h(), {}));
  }
  return fr;
}

int omega_slot(const Frames& fr, int point, int dir) {
  if (fr.alg.is_circle()) return fr.alg.grid() + point;
  return fr.omega_index[dir];
}

// Degree-0 part a * v'^* - b * v'. X_t itself is (t, 1); the integrands use
// t^{N/2} X_t t^{-N/2} = 1/2 (omega' + sqrt(t) (v'^* - v')), which has the same
// supertraces and much smaller entries for large t.
FormMatrix x_from_frames(const Frames& fr, double a, double b) {
  FormMatrix x(fr.alg, fr.grading);
  for (std::size_t p = 0; p < fr.points.size(); ++p) {
    const Frame& f = fr.points[p];
    const int unit = fr.alg.is_circle() ? static_cast<int>(p) : 0;
    x.block(unit) = 0.5 * (a * f.v_adj - b * f.v);
    for (std::size_t d = 0; d < f.omega.size(); ++d) {
      const int idx = omega_slot(fr, static_cast<int>(p), static_cast<int>(d));
      if (idx >= 0) x.block(idx) += 0.5 * f.omega[d];
    }
  }
  return x;
}

// Smallest nonzero eigenvalue of the Laplacian over all frame points (0 if
// v = 0).
double smallest_positive_eigenvalue(const Frames& fr) {
  double best = 0;
  for (const Frame& f : fr.points) {
    const Mat d = f.v_adj - f.v;
    if (d.size() == 0) continue;
    const RVec ev = Eigen::SelfAdjointEigenSolver<Mat>(d.adjoint() * d).eigenvalues();
    if (ev.size() == 0) continue;
    const double thr = kRankTol * ev.maxCoeff();
    for (Eigen::Index i = 0; i < ev.size(); ++i)
      if (ev(i) > thr && (best == 0 || ev(i) < best)) best = ev(i);
  }
  return best;
}

Form f_hat_weighted(const Frames& fr, double t, const Mat& weight) {
  const double r = std::sqrt(t);
  const FormMatrix fp = forms::matrix_function(x_from_frames(fr, r, r), forms::MatrixFunction::FPrime);
  return forms::phi_rescale(forms::weighted_supertrace(fp, weight));
}

Mat half_number_operator(const std::vector<int>& grading) {
  Mat n = Mat::Zero(grading.size(), grading.size());
  for (std::size_t i = 0; i < grading.size(); ++i) n(i, i) = 0.5 * grading[i];
  return n;
}

// Integrates F(t) dt / t over (0, inf) through u = sqrt(t) on (0, 1] and
// u = 1/sqrt(t) on [1, inf).
// Beyond t = 200 / min(lambda_min, 1) both the supertrace part and the
// e^{-t/4} counterterm are below e^{-50}; only rounding noise is left there,
// so that range is dropped.
TorsionFormResult integrate_torsion(const Frames& fr, const std::function<Vec(double)>& integrand,
                                    const QuadratureSpec& quad) {
  const FormAlgebra& alg = fr.alg;
  const double lmin = smallest_positive_eigenvalue(fr);
  const double t_cut = lmin > 0 ? 200.0 / std::min(lmin, 1.0) : std::numeric_limits<double>::infinity();
  for (double t : {1e-8, 1e8}) {
    const Vec f = integrand(t);
    const double m = f.cwiseAbs().maxCoeff();
    if (!(m <= 1e-3)) {
      std::ostringstream os;
      os << "torsion integrand does not decay: |F(" << t << ")| = " << m
         << " (check v^2 = 0 and the counterterms d(E), d(H))";
      fail(ErrorKind::Numeric, os.str());
    }
  }
  auto g = [&](double u) -> Vec {
    Vec f = integrand(u * u);
    const double t = 1.0 / (u * u);
    if (t <= t_cut) f += integrand(t);
    return f * (2.0 / u);
  };
  QuadratureResult q = integrate(g, 0.0, 1.0, quad);
  TorsionFormResult r;
  r.value = Form(alg, -q.value);
  r.error = q.error;
  r.evaluations = q.evaluations;
  return r;
}

}  // namespace

FormMatrix omega(const MetricComplex& e) {
  if (!e.has_base()) fail(ErrorKind::Configuration, "omega needs a base (formal germ or circle family)");
  validate(e);
  const FormAlgebra alg = e.algebra();
  FormMatrix w(alg, e.grading());
  if (const auto* g = std::get_if<FormalGerm>(&e.base)) {
    const Mat hinv = e.total_h().inverse();
    for (int j = 0; j < alg.generators(); ++j) {
      std::vector<Mat> blocks;
      for (int i = 0; i < e.length(); ++i) blocks.push_back(g->dh[i][j]);
      w.block(alg.generator_index(j)) = hinv * block_diag(blocks);
    }
  } else {
    const int n = alg.grid();
    for (int j = 0; j < n; ++j) {
      const double th = alg.theta(j);
      std::vector<Mat> d;
      for (int i = 0; i < e.length(); ++i) d.push_back(e.metric_derivative_at(i, th));
      w.block(n + j) = block_diag(metrics_at(e, th)).inverse() * block_diag(d);
    }
  }
  return w;
}

FormMatrix x_t(const MetricComplex& e, double t) {
  if (!(t > 0)) fail(ErrorKind::Domain, "x_t needs t > 0");
  return x_from_frames(make_frames(e), t, 1.0);
}

Form char_form(const MetricComplex& e) {
  if (!e.has_base()) fail(ErrorKind::Configuration, "char_form needs a base");
  const Frames fr = make_frames(e);
  FormMatrix half_omega(fr.alg, fr.grading);
  for (std::size_t p = 0; p < fr.points.size(); ++p)
    for (std::size_t d = 0; d < fr.points[p].omega.size(); ++d)
      half_omega.block(omega_slot(fr, static_cast<int>(p), static_cast<int>(d))) =
          0.5 * fr.points[p].omega[d];
  const FormMatrix fm = forms::matrix_function(half_omega, forms::MatrixFunction::F);
  return forms::sqrt_2ipi() * forms::phi_rescale(forms::supertrace(fm));
}

double TorsionFormResult::degree0() const {
  if (value.algebra().is_circle()) fail(ErrorKind::Configuration, "degree0(): circle result, use degree0_function()");
  return value[0].real();
}

Vec TorsionFormResult::degree0_function() const {
  if (!value.algebra().is_circle()) return Vec::Constant(1, value[0]);
  return value.function_part();
}

Form f_hat(const MetricComplex& e, double t) {
  const Frames fr = make_frames(e);
  return f_hat_weighted(fr, t, half_number_operator(fr.grading));
}

TorsionFormResult torsion_form(const MetricComplex& e, const QuadratureSpec& quad) {
  const Frames fr = make_frames(e);
  const hodge::EulerData eu = hodge::chi_primes(e);
  const Mat half_n = half_number_operator(fr.grading);
  const std::vector<int>& unit = fr.alg.unit();
  const double dh = eu.d_h, de = eu.d_e;
  auto integrand = [&](double t) -> Vec {
    Vec f = f_hat_weighted(fr, t, half_n).coeffs();
    const double c = 0.5 * dh + 0.5 * (de - dh) * (1 - 0.5 * t) * std::exp(-0.25 * t);
    for (int i : unit) f(i) -= c;
    return f;
  };
  TorsionFormResult r = integrate_torsion(fr, integrand, quad);
  r.d_e = eu.d_e;
  r.d_h = eu.d_h;
  return r;
}

TorsionFormResult equivariant_torsion_form(const MetricComplex& e, const std::vector<Mat>& g,
                                           const QuadratureSpec& quad) {
  if (e.on_circle()) fail(ErrorKind::Unsupported, "equivariant torsion form: point base only");
  const Frames fr = make_frames(e);
  const hodge::HodgeData hd = hodge::hodge_decompose(e);
  if (static_cast<int>(g.size()) != e.length()) fail(ErrorKind::Dimension, "one group block per degree");
  double dge = 0, dgh = 0;
  for (int i = 0; i < e.length(); ++i) {
    const double s = (i % 2) ? -1.0 : 1.0;
    dge += s * i * g[i].trace().real();
    const Mat& hb = hd.harmonic[i];
    dgh += s * i * (hb.adjoint() * e.h[i] * g[i] * hb).trace().real();
  }
  const Mat l = cholesky_lower(e.total_h());
  const Mat g_on = l.adjoint() * block_diag(g) * inv_lower(l).adjoint();
  const Mat weight = g_on * half_number_operator(fr.grading);
  auto integrand = [&](double t) -> Vec {
    Vec f = f_hat_weighted(fr, t, weight).coeffs();
    f(0) -= 0.5 * dgh + 0.5 * (dge - dgh) * (1 - 0.5 * t) * std::exp(-0.25 * t);
    return f;
  };
  TorsionFormResult r = integrate_torsion(fr, integrand, quad);
  r.d_e = static_cast<int>(std::lround(dge));
  r.d_h = static_cast<int>(std::lround(dgh));
  return r;
}

Mat path_metric(const Mat& h0, const Mat& h1, double l, Path path) {
  if (path == Path::Linear) return (1 - l) * h0 + l * h1;
  const Mat s = sqrt_hpd(h0), si = inv_sqrt_hpd(h0);
  const Mat k = si * h1 * si;
  return s * pow_hpd(0.5 * (k + k.adjoint()), l) * s;
}

namespace {

Mat path_l_derivative(const Mat& h0, const Mat& h1, double l, Path path) {
  if (path == Path::Linear || h0.rows() == 0) return h1 - h0;
  const Mat s = sqrt_hpd(h0), si = inv_sqrt_hpd(h0);
  Mat k = si * h1 * si;
  k = 0.5 * (k + k.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(k);
  const RVec& ev = es.eigenvalues();
  RVec w(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) w(i) = std::pow(ev(i), l) * std::log(ev(i));
  return s * es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint() * s;
}


Mat total_path(const std::vector<Mat>& a, const std::vector<Mat>& b, double l, Path path,
               bool derivative) {
  std::vector<Mat> blocks;
  for (std::size_t i = 0; i < a.size(); ++i)
    blocks.push_back(derivative ? path_l_derivative(a[i], b[i], l, path) : path_metric(a[i], b[i], l, path));
  return block_diag(blocks);
}

// phi tr_s[1/2 h^{-1} dh/dl f'(omega / 2)] at one point, in the orthonormal
// frame of h: the integrand of f~.
void tilde_integrand_at(const Mat& h, const Mat& dl, const std::vector<Mat>& dbase,
                        const std::vector<int>& slots, int unit_slot, FormMatrix& a, FormMatrix& w) {
  const Mat li = inv_lower(cholesky_lower(h));
  a.block(unit_slot) = 0.5 * li * dl * li.adjoint();
  for (std::size_t d = 0; d < dbase.size(); ++d) w.block(slots[d]) = 0.5 * li * dbase[d] * li.adjoint();
}

}  // namespace

TildeFResult tilde_f(const MetricComplex& e0, const MetricComplex& e1, Path path, const QuadratureSpec& quad) {
  validate(e0);
  validate(e1);
  if (e0.dims != e1.dims || e0.base.index() != e1.base.index())
    fail(ErrorKind::Configuration, "tilde_f: endpoints must share dims and base kind");
  const FormAlgebra alg = e0.algebra();
  if (alg != e1.algebra()) fail(ErrorKind::Configuration, "tilde_f: endpoint algebras differ");
  const std::vector<int> grading = e0.grading();
  const int k = e0.length();

  auto integrand = [&](double l) -> Vec {
    FormMatrix a(alg, grading), w(alg, grading);
    if (e0.on_circle()) {
      const int n = alg.grid();
      std::vector<Mat> hs(n);
      for (int j = 0; j < n; ++j)
        hs[j] = total_path(metrics_at(e0, alg.theta(j)), metrics_at(e1, alg.theta(j)), l, path, false);
      // theta-derivative of h_l: analytic on the linear path, spectral
      // differentiation of the samples otherwise.
      std::vector<Mat> dth(n);
      if (path == Path::Linear) {
        for (int j = 0; j < n; ++j) {
          std::vector<Mat> d;
          for (int i = 0; i < k; ++i)
            d.push_back((1 - l) * e0.metric_derivative_at(i, alg.theta(j)) +
                        l * e1.metric_derivative_at(i, alg.theta(j)));
          dth[j] = block_diag(d);
        }
      } else {
        const int m = static_cast<int>(hs[0].rows());
        for (int j = 0; j < n; ++j) dth[j] = Mat::Zero(m, m);
        Vec samples(n);
        for (int r = 0; r < m; ++r)
          for (int c = 0; c < m; ++c) {
            for (int j = 0; j < n; ++j) samples(j) = hs[j](r, c);
            const Vec d = forms::fourier_derivative(samples, alg.circumference());
            for (int j = 0; j < n; ++j) dth[j](r, c) = d(j);
          }
      }
      for (int j = 0; j < n; ++j) {
        const Mat dl = total_path(metrics_at(e0, alg.theta(j)), metrics_at(e1, alg.theta(j)), l, path, true);
        tilde_integrand_at(hs[j], dl, {dth[j]}, {n + j}, j, a, w);
      }
    } else {
      const Mat h = total_path(e0.h, e1.h, l, path, false);
      const Mat dl = total_path(e0.h, e1.h, l, path, true);
      std::vector<Mat> dbase;
      std::vector<int> slots;
      if (e0.on_formal_point()) {
        const auto& g0 = std::get<FormalGerm>(e0.base);
        const auto& g1 = std::get<FormalGerm>(e1.base);
        for (int j = 0; j < alg.generators(); ++j) {
          std::vector<Mat> d0, d1;
          for (int i = 0; i < k; ++i) {
            d0.push_back(g0.dh[i][j]);
            d1.push_back(g1.dh[i][j]);
          }
          if (path == Path::Linear) {
            dbase.push_back((1 - l) * block_diag(d0) + l * block_diag(d1));
          } else {
            // Central difference of the path through the perturbed germs.
            constexpr double eps = 1e-5;
            std::vector<Mat> p0, p1, m0, m1;
            for (int i = 0; i < k; ++i) {
              p0.push_back(e0.h[i] + eps * d0[i]);
              p1.push_back(e1.h[i] + eps * d1[i]);
              m0.push_back(e0.h[i] - eps * d0[i]);
              m1.push_back(e1.h[i] - eps * d1[i]);
            }
            dbase.push_back((total_path(p0, p1, l, path, false) - total_path(m0, m1, l, path, false)) /
                            (2 * eps));
          }
          slots.push_back(alg.generator_index(j));
        }
      }
      tilde_integrand_at(h, dl, dbase, slots, 0, a, w);
    }
    const FormMatrix fp = forms::matrix_function(w, forms::MatrixFunction::FPrime);
    return forms::phi_rescale(forms::supertrace(forms::wedge_mul(a, fp))).coeffs();
  };
  QuadratureResult q = integrate(integrand, 0.0, 1.0, quad);
  return {Form(alg, q.value), q.error};
}

double degree0_torsion(const MetricComplex& e, TorsionMethod method, const QuadratureSpec& quad) {
  if (method == TorsionMethod::Eigen) return hodge::scalar_torsion_eigen(e);
  MetricComplex point = e;
  point.base = std::monostate{};
  return torsion_form(point, quad).degree0();
}

}  // namespace torsion::flat
