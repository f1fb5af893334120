#include "torsion/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "torsion/errors.hpp"
#include "torsion/quadrature.hpp"

namespace torsion::analytic {

namespace {

constexpr double kPi = std::numbers::pi;
// B_2, B_4, ..., B_20.
constexpr double kBernoulli[] = {1.0 / 6,         -1.0 / 30,  1.0 / 42,          -1.0 / 30,
                                 5.0 / 66,        -691.0 / 2730, 7.0 / 6,        -3617.0 / 510,
                                 43867.0 / 798,   -174611.0 / 330};

double factorial(int n) {
  double f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

ModelGeometry ModelGeometry::circle(double length, const Mat& holonomy) {
  ModelGeometry g;
  g.kind = Kind::Circle;
  g.length = length;
  g.holonomy = holonomy;
  return g;
}

ModelGeometry ModelGeometry::interval(double length, Bc bc, int rank) { return interval(length, bc, bc, rank); }

ModelGeometry ModelGeometry::interval(double length, Bc left, Bc right, int rank) {
  ModelGeometry g;
  g.kind = Kind::Interval;
  g.length = length;
  g.left = left;
  g.right = right;
  g.interval_rank = rank;
  return g;
}

int ModelGeometry::rank() const {
  return kind == Kind::Circle ? static_cast<int>(holonomy.rows()) : interval_rank;
}

void validate(const ModelGeometry& g) {
  if (!(g.length > 0) || !std::isfinite(g.length)) fail(ErrorKind::Domain, "model geometry needs L > 0");
  if (g.kind == ModelGeometry::Kind::Interval) {
    if (g.interval_rank < 1) fail(ErrorKind::Domain, "interval rank must be >= 1");
    return;
  }
  const Mat& u = g.holonomy;
  if (u.rows() == 0 || u.rows() != u.cols()) fail(ErrorKind::Dimension, "holonomy must be a nonempty square matrix");
  if (!u.allFinite()) fail(ErrorKind::Numeric, "non-finite holonomy");
  if (max_abs(u.adjoint() * u - Mat::Identity(u.rows(), u.cols())) > 1e-10)
    fail(ErrorKind::Unsupported, "non-unitary holonomy: model spectra need a unitary flat metric");
}

SpectrumData spectrum(const ModelGeometry& g) {
  validate(g);
  SpectrumData s;
  const double len = g.length;
  if (g.kind == ModelGeometry::Kind::Circle) {
    const double c = 2 * kPi / len;
    Eigen::ComplexEigenSolver<Mat> es(g.holonomy, false);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      double th = std::arg(es.eigenvalues()(i));
      if (th < 0) th += 2 * kPi;
      const double a = th / (2 * kPi);
      for (auto& d : s.degree) {
        if (a < 1e-12 || 1 - a < 1e-12) {
          d.zero_modes += 1;
          d.families.push_back({c, 1.0, 1.0});
          d.families.push_back({c, 1.0, 1.0});
        } else {
          d.families.push_back({c, a, 1.0});
          d.families.push_back({c, 1 - a, 1.0});
        }
      }
    }
    return s;
  }
  const double c = kPi / len;
  const double r = g.interval_rank;
  if (g.left != g.right) {
    for (auto& d : s.degree) d.families.push_back({c, 0.5, r});
    return s;
  }
  // abs = Neumann on functions, Dirichlet on the coefficient of dx; rel
  // the other way round.
  const int neumann = g.left == Bc::Abs ? 0 : 1;
  s.degree[neumann].zero_modes = r;
  for (auto& d : s.degree) d.families.push_back({c, 1.0, r});
  return s;
}

SpectrumData double_spectrum(const ModelGeometry& interval, bool reflect) {
  validate(interval);
  if (interval.kind != ModelGeometry::Kind::Interval) fail(ErrorKind::Configuration, "double_spectrum needs an interval");
  const double c = kPi / interval.length;  // circle of length 2L
  const double r = interval.interval_rank;
  const double odd = reflect ? -r : r;
  SpectrumData s;
  // Degree 0: cos (even), constants (even), sin (odd).
  s.degree[0].zero_modes = r;
  s.degree[0].families = {{c, 1.0, r}, {c, 1.0, odd}};
  // Degree 1: sin dx (even), cos dx (odd), dx (odd).
  s.degree[1].zero_modes = odd;
  s.degree[1].families = {{c, 1.0, r}, {c, 1.0, odd}};
  return s;
}

double hurwitz_zeta_prime0(double alpha, const ZetaOptions& opt) {
  if (!(alpha > 0)) fail(ErrorKind::Domain, "Hurwitz parameter must be positive");
  if (opt.method == ZetaMethod::ClosedForm) return std::lgamma(alpha) - 0.5 * std::log(2 * kPi);
  if (opt.terms < 1) fail(ErrorKind::Configuration, "Euler-Maclaurin needs at least one explicit term");
  // zeta'_H(0, a) = -sum_{n<N} log(n + a) + zeta'_H(0, a + N), with the
  // asymptotic expansion of the last term (four Bernoulli corrections).
  constexpr int kOrder = 4;
  double head = 0;
  for (int n = 0; n < opt.terms; ++n) head -= std::log(n + alpha);
  const double x = opt.terms + alpha;
  double tail = (x - 0.5) * std::log(x) - x;
  for (int k = 1; k <= kOrder; ++k) tail += kBernoulli[k - 1] / (2.0 * k * (2 * k - 1)) * std::pow(x, 1 - 2 * k);
  const int k = kOrder + 1;
  const double remainder = std::abs(kBernoulli[k - 1] / (2.0 * k * (2 * k - 1)) * std::pow(x, 1 - 2 * k));
  if (remainder > opt.tolerance) {
    std::ostringstream os;
    os << "Euler-Maclaurin remainder " << remainder << " exceeds tolerance " << opt.tolerance
       << " (increase the number of explicit terms)";
    fail(ErrorKind::Precision, os.str());
  }
  return head + tail;
}

double family_log_det(const Family& f, const ZetaOptions& opt) {
  if (!(f.c > 0) || !(f.alpha > 0) || f.alpha > 1) fail(ErrorKind::Domain, "family needs c > 0, alpha in (0, 1]");
  // zeta(s) = c^{-2s} zeta_H(2s, alpha), zeta_H(0, alpha) = 1/2 - alpha.
  return f.weight * (2 * std::log(f.c) * (0.5 - f.alpha) - 2 * hurwitz_zeta_prime0(f.alpha, opt));
}

double zeta_log_det(const SpectrumData& s, int q, const ZetaOptions& opt) {
  if (q < 0 || q > 1) fail(ErrorKind::Domain, "1-D models have degrees 0 and 1");
  double sum = 0;
  for (const Family& f : s.degree[q].families) sum += family_log_det(f, opt);
  return sum;
}

double scalar_torsion(const SpectrumData& s, const ZetaOptions& opt) { return -0.5 * zeta_log_det(s, 1, opt); }

double scalar_torsion(const ModelGeometry& g, const ZetaOptions& opt) { return scalar_torsion(spectrum(g), opt); }

double scalar_torsion_from_degree0(const SpectrumData& s, const ZetaOptions& opt) {
  return -0.5 * zeta_log_det(s, 0, opt);
}

double equivariant_scalar_torsion(const ModelGeometry& interval, bool reflect, const ZetaOptions& opt) {
  return scalar_torsion(double_spectrum(interval, reflect), opt);
}

namespace {

// sum_{n >= 0} Phi(s (n + alpha)), Phi(y) = (1 - 2 y^2) e^{-y^2}.
double family_heat_sum(double s, double alpha) {
  if (s >= 0.2) {
    double sum = 0;
    for (int n = 0;; ++n) {
      const double y = s * (n + alpha);
      if (y > 40) break;
      sum += (1 - 2 * y * y) * std::exp(-y * y);
    }
    return sum;
  }
  // Euler-Maclaurin: int_0^inf + g(0)/2 - sum_k B_2k / (2k)! g^{(2k-1)}(0),
  // with g^{(2k-1)}(0) = s^{2k-1} H_{2k+1}(y0) e^{-y0^2} / 2.
  const double y0 = s * alpha;
  const double e = std::exp(-y0 * y0);
  double sum = -alpha * e + 0.5 * (1 - 2 * y0 * y0) * e;
  double hm = 1, h = 2 * y0;  // H_0, H_1
  for (int n = 1; n <= 17; ++n) {
    const double hn = 2 * y0 * h - 2 * n * hm;  // H_{n+1}
    hm = h;
    h = hn;
    if ((n + 1) % 2 == 1) {
      const int k = n / 2;  // n + 1 = 2k + 1
      sum -= kBernoulli[k - 1] / factorial(2 * k) * std::pow(s, 2 * k - 1) * 0.5 * h * e;
    }
  }
  return sum;
}

}  // namespace

double heat_supertrace(const SpectrumData& s, double t) {
  if (!(t > 0)) fail(ErrorKind::Domain, "heat_supertrace needs t > 0");
  double sum = s.degree[1].zero_modes;
  for (const Family& f : s.degree[1].families)
    sum += f.weight * family_heat_sum(0.5 * f.c * std::sqrt(t), f.alpha);
  return -0.5 * sum;
}

HeatCounterterms heat_counterterms(const SpectrumData& s) {
  HeatCounterterms c;
  c.chi_rank = s.degree[0].zero_modes - s.degree[1].zero_modes;
  c.chi_prime = -s.degree[1].zero_modes;
  return c;
}

HeatIntegralResult torsion_via_heat_integral(const SpectrumData& s, double abs_tol) {
  const HeatCounterterms ct = heat_counterterms(s);
  auto f = [&](double t) {
    return heat_supertrace(s, t) - ct.large_t_limit() -
           (ct.small_t_limit() - ct.large_t_limit()) * (1 - 0.5 * t) * std::exp(-0.25 * t);
  };
  for (double t : {1e-8, 1e8}) {
    if (!(std::abs(f(t)) <= 1e-3)) {
      std::ostringstream os;
      os << "heat integrand does not decay at t = " << t << ": " << f(t);
      fail(ErrorKind::Numeric, os.str());
    }
  }
  auto g = [&](double u) -> Vec {
    Vec v(1);
    v(0) = (f(u * u) + f(1 / (u * u))) * (2 / u);
    return v;
  };
  QuadratureSpec spec;
  spec.abs_tol = abs_tol;
  const QuadratureResult q = integrate(g, 0.0, 1.0, spec);
  return {-q.value(0).real(), q.error, q.evaluations};
}

HeatIntegralResult torsion_via_heat_integral(const ModelGeometry& g, double abs_tol) {
  return torsion_via_heat_integral(spectrum(g), abs_tol);
}

L2Cohomology l2_cohomology(const ModelGeometry& g) {
  validate(g);
  L2Cohomology h;
  const int r = g.rank();
  if (g.kind == ModelGeometry::Kind::Circle) {
    const Mat s = kernel_basis(g.holonomy - Mat::Identity(r, r), 1e-9);
    for (auto& d : h.degree) {
      d.sections = s;
      d.gram = g.length * Mat::Identity(s.cols(), s.cols());
    }
    return h;
  }
  for (auto& d : h.degree) {
    d.sections = Mat(r, 0);
    d.gram = Mat(0, 0);
  }
  if (g.left == g.right) {
    auto& d = h.degree[g.left == Bc::Abs ? 0 : 1];
    d.sections = Mat::Identity(r, r);
    d.gram = g.length * Mat::Identity(r, r);
  }
  return h;
}

std::vector<std::pair<double, double>> eigenvalues_upto(const SpectrumData& s, int q, double lambda_max) {
  std::vector<std::pair<double, double>> all;
  if (s.degree[q].zero_modes != 0) all.push_back({0.0, s.degree[q].zero_modes});
  for (const Family& f : s.degree[q].families)
    for (int n = 0;; ++n) {
      const double lam = std::pow(f.c * (n + f.alpha), 2);
      if (lam > lambda_max) break;
      all.push_back({lam, f.weight});
    }
  std::sort(all.begin(), all.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& [lam, w] : all) {
    if (!merged.empty() && std::abs(merged.back().first - lam) <= 1e-12 * std::max(1.0, lam))
      merged.back().second += w;
    else
      merged.push_back({lam, w});
  }
  std::erase_if(merged, [](const auto& p) { return std::abs(p.second) < 1e-12; });
  return merged;
}

}  // namespace torsion::analytic
