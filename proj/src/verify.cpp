#include "torsion/verify.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "torsion/analytic.hpp"
#include "torsion/errors.hpp"
#include "torsion/flat_complex.hpp"
#include "torsion/glue.hpp"
#include "torsion/hodge.hpp"
#include "torsion/morse.hpp"
#include "torsion/random.hpp"
#include "torsion/spectral.hpp"

namespace torsion::verify {

using report::Entry;
using report::Report;

namespace {

constexpr double kLog2 = std::numbers::ln2;
constexpr double kPi = std::numbers::pi;
constexpr double kFinite = 1e-9;
constexpr double kAnalytic = 1e-7;
// Residuals below this count as converged when checking decrease with grid.
constexpr double kRoundoffFloor = 1e-10;

Entry entry(const std::string& name, double residual, double tolerance) {
  Entry e;
  e.name = name;
  e.residual = residual;
  e.tolerance = tolerance;
  e.judge();
  return e;
}

analytic::ZetaOptions euler_maclaurin(const Options& opt) {
  analytic::ZetaOptions z;
  z.method = analytic::ZetaMethod::EulerMaclaurin;
  if (opt.precision) z.tolerance = *opt.precision;
  return z;
}

Mat phase(double theta) { return Mat::Constant(1, 1, std::polar(1.0, theta)); }

// ---- finite ----

Entry two_term_torsion(rnd::Rng& rng) {
  double worst = 0;
  for (int i = 0; i < 50; ++i) {
    const int n = rnd::uniform_int(rng, 1, 4);
    const Mat tau = rnd::well_conditioned(rng, n, n);
    worst = std::max(worst, std::abs(flat::torsion_form(two_term(tau)).degree0() + log_abs_det(tau)));
  }
  Entry e = entry("two_term_torsion", worst, kFinite);
  e.value("instances", 50);
  return e;
}

Entry convention_lock(rnd::Rng& rng) {
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const MetricComplex c = rnd::random_complex(rng, rnd::random_shape(rng, 4, 5, false));
    worst = std::max(worst, std::abs(hodge::scalar_torsion_eigen(c) - flat::torsion_form(c).degree0()));
  }
  Entry e = entry("convention_lock", worst, kFinite);
  e.value("instances", 100);
  return e;
}

Entry anomaly_degree0(rnd::Rng& rng) {
  double worst = 0;
  for (int i = 0; i < 50; ++i) {
    const MetricComplex e0 = rnd::random_complex(rng, rnd::random_shape(rng, 4, 4, false));
    const MetricComplex e1 = rnd::with_random_metrics(rng, e0);
    const hodge::HodgeData hd = hodge::hodge_decompose(e0);
    std::vector<Mat> g0, g1;
    for (int q = 0; q < e0.length(); ++q) {
      g0.push_back(hodge::cohomology_gram(e0, q, hd.harmonic[q]));
      g1.push_back(hodge::cohomology_gram(e1, q, hd.harmonic[q]));
    }
    const double lhs = flat::torsion_form(e1).degree0() - flat::torsion_form(e0).degree0();
    const double rhs = flat::tilde_f(e0, e1).value[0].real() - hodge::tilde_f_degree0(g0, g1);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  Entry e = entry("anomaly_degree0", worst, 1e-8);
  e.value("instances", 50);
  return e;
}

double transgression_residual(const MetricComplex& e) {
  const flat::TorsionFormResult t = flat::torsion_form(e);
  return (forms::exterior_d(t.value.degree_part(0)) - flat::char_form(e)).max_abs();
}

Entry transgression(rnd::Rng& rng, int grid) {
  if (grid < 8 || (grid & (grid - 1)) != 0) fail(ErrorKind::Configuration, "--grid must be a power of two >= 8");
  double worst = 0, worst_ratio = 0;
  Entry e;
  for (int i = 0; i < 4; ++i) {
    const int r = 1 + i % 2;
    const double len = 1.0 + 0.5 * i;
    const MetricComplex base = rnd::random_complex(rng, {{r}, {0, 0}});
    // The same family at every grid: the draws do not depend on the grid.
    const rnd::Rng state = rng;
    double prev = -1;
    for (int g = 8; g <= grid; g *= 2) {
      rng = state;
      const double res = transgression_residual(rnd::with_random_family(rng, base, g, len, 2, 0.3));
      e.value("instance" + std::to_string(i) + "_grid" + std::to_string(g), res);
      if (prev > 0 && res > kRoundoffFloor) worst_ratio = std::max(worst_ratio, res / prev);
      prev = res;
      if (g == grid) worst = std::max(worst, res);
    }
  }
  e.name = "transgression";
  e.residual = worst;
  e.tolerance = 1e-6;
  e.bound("decrease_with_grid", worst_ratio, 1.0, true);
  e.note = "residual at the finest grid; decrease_with_grid is the largest ratio of consecutive residuals above 1e-10";
  return e;
}

// ---- spectral ----

Entry goette_identity(rnd::Rng& rng) {
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const spectral::DoubleComplexData dc = spectral::random_three_column(rng, 3, 2);
    for (auto f : {spectral::Filtration::Columns, spectral::Filtration::Rows})
      worst = std::max(worst, spectral::goette_identity_check(dc, f).residual);
  }
  double comp = 0;
  int pairs = 0;
  for (int i = 0; i < 50; ++i) {
    rnd::ComplexShape s;
    do {
      s = rnd::random_shape(rng, 5, 3, true);
    } while (s.betti.size() < 4);
    const MetricComplex c = rnd::random_complex(rng, s);
    for (int l = 1; l + 1 < c.length(); ++l) {
      const auto [a, b] = spectral::split_exact(c, l);
      comp = std::max(comp, std::abs(spectral::composition_residual(a, b)));
      ++pairs;
    }
  }
  double mv = 0;
  for (int i = 0; i < 50; ++i) {
    const spectral::DoubleComplexData dc = spectral::random_three_column(rng);
    spectral::SpectralPage e1 = spectral::pages(dc, spectral::Filtration::Columns, 1)[1];
    if (i % 2)
      for (int s = e1.s_min; s <= e1.s_max; ++s)
        for (int n = 0; n <= e1.n_max; ++n)
          if (e1.dim(s, n)) e1 = spectral::with_metric(e1, s, n, rnd::hpd(rng, e1.dim(s, n)));
    mv = std::max(mv, std::abs(spectral::mv_decomposition(dc, e1).residual));
  }
  Entry e = entry("goette_identity", worst, 1e-8);
  e.value("double_complexes", 100).value("split_compositions", pairs).value("mv_instances", 50);
  e.bound("composition_of_exact_sequences", comp, kFinite);
  e.bound("mv_decomposition", mv, kFinite);
  return e;
}

// ---- morse ----

double coboundary_squared(const MetricComplex& c) {
  double w = 0;
  for (std::size_t q = 0; q + 1 < c.v.size(); ++q) w = std::max(w, max_abs(c.v[q + 1] * c.v[q]));
  return w;
}

Entry morse_structure() {
  using morse::Region;
  using morse::Variant;
  double d2 = 0, psi = 0;
  std::map<std::string, double> worst;
  const std::vector<std::string> names{"rows_exact",         "total_torsion",    "page_identity",
                                       "psi2_isometric",     "boundary_log2_term", "plus_E1_torsion",
                                       "minus_row_torsion",  "minus_E1_torsion"};
  const auto sweep = glue::standard_sweep();
  for (const glue::GluingScenario& sc : sweep) {
    const morse::MorseData m = glue::morse_model(sc);
    for (Variant v : {Variant::Full, Variant::Absolute, Variant::Relative})
      d2 = std::max(d2, coboundary_squared(morse::thom_smale(m, v).complex));

    // psi_1^+ and psi_2^- commute with the differentials.
    const morse::MorseData side1 = morse::restrict_to_side(m, Region::Z1);
    const morse::Doubled dd1 = morse::double_along_boundary(side1);
    const morse::DoubledComplex dc1 = morse::doubled_complex(dd1);
    const morse::Z2Split s1 = morse::z2_split(dc1.z2);
    const morse::ThomSmale abs_side = morse::thom_smale(side1, Variant::Full);
    const std::vector<Mat> p1 = morse::psi1_plus(dd1, dc1, s1, abs_side);
    for (std::size_t q = 0; q + 1 < p1.size(); ++q)
      psi = std::max(psi, max_abs(p1[q + 1] * s1.plus.v[q] - abs_side.complex.v[q] * p1[q]));

    const morse::MorseData side2 = morse::restrict_to_side(m, Region::Z2);
    const morse::Doubled dd2 = morse::double_along_boundary(side2);
    const morse::DoubledComplex dc2 = morse::doubled_complex(dd2);
    const morse::Z2Split s2 = morse::z2_split(dc2.z2);
    const morse::ThomSmale rel_side = morse::thom_smale(side2, Variant::Relative);
    const std::vector<Mat> p2 = morse::psi2_minus(dd2, dc2, s2, rel_side);
    for (std::size_t q = 0; q + 1 < p2.size(); ++q)
      psi = std::max(psi, max_abs(p2[q + 1] * rel_side.complex.v[q] - s2.minus.v[q] * p2[q]));

    for (const glue::Check& c : glue::verify_morse_side(sc).checks)
      worst[c.name] = std::max(worst[c.name], std::abs(c.residual));
  }
  Entry e = entry("morse_structure", d2, 1e-12);
  e.value("scenarios", static_cast<double>(sweep.size()));
  e.bound("psi_commutes", psi, 1e-12);
  for (const std::string& n : names) e.bound(n, worst[n], 1e-12);
  e.note = "residual is the largest entry of the squared coboundary over all variants";
  return e;
}

// ---- analytic ----

Entry zeta_determinants(const Options& opt) {
  const analytic::ZetaOptions em = euler_maclaurin(opt);
  double closed = 0, approx = 0;
  auto compare = [&](const analytic::SpectrumData& s, int q, double target) {
    closed = std::max(closed, std::abs(analytic::zeta_log_det(s, q) - target));
    approx = std::max(approx, std::abs(analytic::zeta_log_det(s, q, em) - target));
  };
  for (double len : {0.5, 1.0, 2.0, 4.0}) {
    for (analytic::Bc bc : {analytic::Bc::Abs, analytic::Bc::Rel})
      for (int q = 0; q < 2; ++q) compare(analytic::spectrum(analytic::ModelGeometry::interval(len, bc, 1)), q, std::log(2 * len));
    for (int q = 0; q < 2; ++q)
      compare(analytic::spectrum(analytic::ModelGeometry::circle(len, Mat::Identity(1, 1))), q, 2 * std::log(len));
  }
  for (double len : {1.0, 1.7})
    for (double th : {0.3, kPi / 3, kPi / 2, kPi, 5.0})
      for (int q = 0; q < 2; ++q)
        compare(analytic::spectrum(analytic::ModelGeometry::circle(len, phase(th))), q,
                std::log(4 * std::pow(std::sin(th / 2), 2)));
  Entry e = entry("zeta_determinants", std::max(closed, approx), kFinite);
  e.value("closed_form_route", closed).value("euler_maclaurin_route", approx);
  e.note = "residuals of log det' against log 2L, log L^2 and log 4 sin^2(theta/2)";
  return e;
}

std::vector<analytic::ModelGeometry> model_geometries() {
  using analytic::Bc;
  using analytic::ModelGeometry;
  std::vector<ModelGeometry> g;
  for (double len : {0.5, 1.0, 3.0}) {
    g.push_back(ModelGeometry::circle(len, Mat::Identity(1, 1)));
    g.push_back(ModelGeometry::circle(len, phase(kPi / 3)));
    g.push_back(ModelGeometry::circle(len, phase(kPi)));
    g.push_back(ModelGeometry::interval(len, Bc::Abs, 2));
    g.push_back(ModelGeometry::interval(len, Bc::Rel, 1));
    g.push_back(ModelGeometry::interval(len, Bc::Abs, Bc::Rel, 1));
    g.push_back(ModelGeometry::interval(len, Bc::Rel, Bc::Abs, 2));
  }
  Mat u(2, 2);
  u << cplx(0, 1), 0, 0, cplx(-1, 0);
  g.push_back(ModelGeometry::circle(2.0, u));
  g.push_back(ModelGeometry::circle(2.0, Mat::Identity(2, 2)));
  return g;
}

// chi(bd) rk(F) and chi' = sum_q (-1)^q q b_q from the geometry alone.
std::pair<double, double> euler_data(const analytic::ModelGeometry& g) {
  using analytic::Bc;
  const int r = g.rank();
  if (g.kind == analytic::ModelGeometry::Kind::Circle) {
    const Mat a = g.holonomy - Mat::Identity(r, r);
    const int b1 = r - numeric_rank(a, 1e-12);
    return {0.0, -static_cast<double>(b1)};
  }
  const int b0 = g.left == Bc::Abs && g.right == Bc::Abs ? r : 0;
  const int b1 = g.left == Bc::Rel && g.right == Bc::Rel ? r : 0;
  return {static_cast<double>(b0 - b1), -static_cast<double>(b1)};
}

Entry heat_consistency() {
  double heat = 0, small = 0, large = 0;
  const auto geoms = model_geometries();
  for (const analytic::ModelGeometry& g : geoms) {
    const analytic::SpectrumData s = analytic::spectrum(g);
    heat = std::max(heat, std::abs(analytic::torsion_via_heat_integral(s).value - analytic::scalar_torsion(s)));
    const auto [chi_rank, chi_prime] = euler_data(g);
    small = std::max(small, std::abs(analytic::heat_supertrace(s, 1e-7) - 0.25 * chi_rank));
    large = std::max(large, std::abs(analytic::heat_supertrace(s, 1e5) - 0.5 * chi_prime));
  }
  Entry e = entry("heat_consistency", heat, kAnalytic);
  e.value("geometries", static_cast<double>(geoms.size()));
  e.bound("small_t_limit", small, 1e-4);
  e.bound("large_t_limit", large, 1e-4);
  e.note = "heat-integral torsion against the zeta torsion; limits of h(t) at t = 1e-7 and t = 1e5";
  return e;
}

// ---- gluing ----

Entry gluing_formula() {
  const auto sweep = glue::standard_sweep();
  double worst = 0, opposite = 1e300;
  for (const glue::GluingScenario& sc : sweep) {
    const glue::GluingReport r = glue::verify_gluing_degree0(sc);
    worst = std::max(worst, std::abs(r.residual));
    // The same identity with T(H) entering with the other sign.
    if (std::abs(r.t_mv) > 1e-6) opposite = std::min(opposite, std::abs(r.lhs - r.correction + r.t_mv));
  }
  const glue::GluingReport f = glue::verify_gluing_degree0(glue::GluingScenario::circle(2.0, 0.5, Mat::Identity(1, 1)));
  Entry e = entry("gluing_formula", worst, kAnalytic);
  e.value("scenarios", static_cast<double>(sweep.size()))
      .value("flagship_lhs", f.lhs)
      .value("flagship_correction", f.correction)
      .value("flagship_T_H", f.t_mv)
      .value("smallest_residual_with_opposite_sign_of_T_H", opposite);
  e.bound("flagship_lhs_is_0", f.lhs, kFinite);
  e.bound("flagship_correction_is_log2", f.correction - kLog2, kFinite);
  e.bound("flagship_T_H_is_minus_log2", f.t_mv + kLog2, kFinite);
  return e;
}

Entry double_formulas() {
  double an = 0, comb = 0;
  const auto sweep = glue::standard_sweep();
  for (const glue::GluingScenario& sc : sweep) {
    const glue::DoubleFormulaReport r = glue::verify_double_formula(sc);
    an = std::max(an, r.worst_analytic());
    comb = std::max(comb, r.worst_combinatorial());
  }
  Entry e = entry("double_formulas", an, kAnalytic);
  e.value("scenarios", static_cast<double>(sweep.size()));
  e.bound("combinatorial", comb, 1e-12);
  e.note = "g in {1, reflection}, both sides of every scenario";
  return e;
}

std::string options_digest(Suite s, const Options& opt) {
  std::ostringstream os;
  os.precision(17);
  os << "verify " << to_string(s) << " seed=" << opt.seed << " grid=" << opt.grid << " tolerance=";
  if (opt.tolerance) os << *opt.tolerance;
  os << " precision=";
  if (opt.precision) os << *opt.precision;
  return report::fnv1a_hex(os.str());
}

}  // namespace

Suite suite_from_string(const std::string& s) {
  if (s == "finite") return Suite::Finite;
  if (s == "spectral") return Suite::Spectral;
  if (s == "morse") return Suite::Morse;
  if (s == "analytic") return Suite::Analytic;
  if (s == "gluing") return Suite::Gluing;
  if (s == "all") return Suite::All;
  fail(ErrorKind::Configuration, "unknown suite '" + s + "'");
}

const char* to_string(Suite s) {
  switch (s) {
    case Suite::Finite: return "finite";
    case Suite::Spectral: return "spectral";
    case Suite::Morse: return "morse";
    case Suite::Analytic: return "analytic";
    case Suite::Gluing: return "gluing";
    case Suite::All: return "all";
  }
  return "?";
}

namespace {

struct Spec {
  const char* name;
  Suite suite;
  Entry (*run)(rnd::Rng&, const Options&);
};

// Fixed order; entry k draws from the k-th stream of the seed.
const std::vector<Spec>& specs() {
  static const std::vector<Spec> table{
      {"two_term_torsion", Suite::Finite, [](rnd::Rng& g, const Options&) { return two_term_torsion(g); }},
      {"convention_lock", Suite::Finite, [](rnd::Rng& g, const Options&) { return convention_lock(g); }},
      {"anomaly_degree0", Suite::Finite, [](rnd::Rng& g, const Options&) { return anomaly_degree0(g); }},
      {"transgression", Suite::Finite, [](rnd::Rng& g, const Options& o) { return transgression(g, o.grid); }},
      {"goette_identity", Suite::Spectral, [](rnd::Rng& g, const Options&) { return goette_identity(g); }},
      {"morse_structure", Suite::Morse, [](rnd::Rng&, const Options&) { return morse_structure(); }},
      {"zeta_determinants", Suite::Analytic, [](rnd::Rng&, const Options& o) { return zeta_determinants(o); }},
      {"heat_consistency", Suite::Analytic, [](rnd::Rng&, const Options&) { return heat_consistency(); }},
      {"gluing_formula", Suite::Gluing, [](rnd::Rng&, const Options&) { return gluing_formula(); }},
      {"double_formulas", Suite::Gluing, [](rnd::Rng&, const Options&) { return double_formulas(); }},
  };
  return table;
}

Entry run_spec(std::size_t k, const Options& opt) {
  rnd::Rng master(opt.seed);
  master.discard(k);
  rnd::Rng stream(master());
  Entry e = specs()[k].run(stream, opt);
  if (opt.tolerance) {
    Report tmp;
    tmp.entries.push_back(e);
    report::override_tolerance(tmp, *opt.tolerance);
    e = tmp.entries.front();
  }
  return e;
}

}  // namespace

std::vector<std::string> entry_names(Suite suite) {
  std::vector<std::string> out;
  for (const Spec& s : specs())
    if (suite == Suite::All || suite == s.suite) out.push_back(s.name);
  return out;
}

report::Entry run_entry(const std::string& name, const Options& opt) {
  for (std::size_t k = 0; k < specs().size(); ++k)
    if (specs()[k].name == name) return run_spec(k, opt);
  fail(ErrorKind::Configuration, "unknown check '" + name + "'");
}

Report run(Suite suite, const Options& opt) {
  Report r;
  r.command = std::string("verify ") + to_string(suite);
  r.digest = options_digest(suite, opt);
  for (std::size_t k = 0; k < specs().size(); ++k)
    if (suite == Suite::All || suite == specs()[k].suite) r.entries.push_back(run_spec(k, opt));
  return r;
}

InputKind kind_from_string(const std::string& s) {
  if (s == "complex") return InputKind::Complex;
  if (s == "morse") return InputKind::Morse;
  if (s == "double") return InputKind::Double;
  if (s == "geometry") return InputKind::Geometry;
  if (s == "scenario") return InputKind::Scenario;
  fail(ErrorKind::Configuration, "unknown input kind '" + s + "'");
}

namespace {

void compute_complex(Report& r, const MetricComplex& e) {
  const flat::TorsionFormResult t = flat::torsion_form(e);
  if (const auto* c = std::get_if<CircleFamily>(&e.base)) {
    const Vec f = t.degree0_function();
    Entry info;
    info.name = "torsion_form";
    info.tolerance = 0;
    info.value("degree0_min", f.real().minCoeff()).value("degree0_max", f.real().maxCoeff());
    for (int j = 0; j < f.size(); ++j) info.value("degree0(theta_" + std::to_string(j) + ")", f(j).real());
    r.entries.push_back(info);
    Entry tr = entry("transgression", transgression_residual(e), 1e-6);
    tr.value("grid", c->algebra.grid());
    r.entries.push_back(tr);
    return;
  }
  MetricComplex at_point = e;
  at_point.base = std::monostate{};
  const double eig = hodge::scalar_torsion_eigen(at_point);
  Entry en = entry("torsion_form", t.degree0() - eig, kFinite);
  en.value("degree0", t.degree0()).value("eigenvalue_torsion", eig);
  if (const auto* g = std::get_if<FormalGerm>(&e.base)) {
    const forms::FormAlgebra& alg = g->algebra;
    for (int i = 1; i < alg.dim(); ++i) {
      const cplx c = t.value[i];
      if (std::abs(c) < 1e-14) continue;
      std::string label;
      const unsigned mask = alg.mask_of_index(i);
      for (int b = 0; b < alg.generators(); ++b)
        if (mask & (1u << b)) label += (label.empty() ? "xi" : "^xi") + std::to_string(b + 1);
      en.value(label, c.real());
    }
    double odd_or_imag = t.value.max_abs_imag();
    for (int k = 1; k <= alg.max_degree(); k += 2) odd_or_imag = std::max(odd_or_imag, t.value.max_abs_of_degree(k));
    en.bound("even_and_real", odd_or_imag, 1e-10);
  }
  r.entries.push_back(en);
}

void compute_morse(Report& r, const morse::MorseData& m) {
  using morse::Variant;
  bool has_y = false, has_z2 = false;
  for (const auto& p : m.points) {
    has_y = has_y || p.region == morse::Region::Y;
    has_z2 = has_z2 || p.region == morse::Region::Z2;
  }
  std::vector<Variant> variants{Variant::Full};
  if (has_y || has_z2) variants.insert(variants.end(), {Variant::Absolute, Variant::Relative});
  for (Variant v : variants) {
    const morse::ThomSmale ts = morse::thom_smale(m, v);
    Entry e = entry(std::string("thom_smale_") + morse::to_string(v), coboundary_squared(ts.complex), 1e-12);
    for (int q = 0; q < ts.complex.length(); ++q) e.value("dim_" + std::to_string(q), ts.complex.dims[q]);
    e.value("torsion", flat::degree0_torsion(ts.complex));
    e.note = "residual: squared coboundary";
    r.entries.push_back(e);
  }
}

void compute_double(Report& r, const spectral::DoubleComplexData& dc) {
  const MetricComplex total = spectral::total_complex(dc);
  const hodge::HodgeData hd = hodge::hodge_decompose(total);
  int betti = 0;
  for (int b : hd.betti) betti += b;
  Entry t;
  t.name = "total_torsion";
  t.tolerance = 0;
  t.value("torsion", hodge::scalar_torsion_eigen(hd));
  r.entries.push_back(t);
  for (auto f : {spectral::Filtration::Columns, spectral::Filtration::Rows}) {
    const std::string tag = f == spectral::Filtration::Columns ? "columns" : "rows";
    const auto ps = spectral::pages(dc, f, spectral::last_page_index(dc, f));
    if (betti == 0) {
      const spectral::GoetteReport g = spectral::goette_identity_check(dc, f);
      Entry e = entry("page_identity_" + tag, g.residual, 1e-8);
      for (std::size_t k = 0; k < g.page_torsion.size(); ++k) e.value("E" + std::to_string(k), g.page_torsion[k]);
      r.entries.push_back(e);
    } else {
      Entry e;
      e.name = "page_torsions_" + tag;
      e.tolerance = 0;
      for (std::size_t k = 0; k < ps.size(); ++k) e.value("E" + std::to_string(k), spectral::page_torsion(ps[k]));
      e.note = "total complex is not acyclic";
      r.entries.push_back(e);
    }
  }
}

void compute_geometry(Report& r, const analytic::ModelGeometry& g, const Options& opt) {
  const analytic::SpectrumData s = analytic::spectrum(g);
  const double zeta = analytic::scalar_torsion(s);
  const analytic::HeatIntegralResult heat = analytic::torsion_via_heat_integral(s);
  Entry e = entry("scalar_torsion", heat.value - zeta, kAnalytic);
  e.value("zeta", zeta).value("heat_integral", heat.value);
  e.value("log_det_prime_0", analytic::zeta_log_det(s, 0)).value("log_det_prime_1", analytic::zeta_log_det(s, 1));
  if (opt.precision) {
    const double em = analytic::scalar_torsion(s, euler_maclaurin(opt));
    e.value("euler_maclaurin", em);
    e.bound("euler_maclaurin_route", em - zeta, kFinite);
  }
  e.note = "residual: heat-integral route minus zeta route";
  r.entries.push_back(e);
}

void compute_scenario(Report& r, const glue::GluingScenario& sc) {
  const glue::GluingReport g = glue::verify_gluing_degree0(sc);
  Entry e = entry("gluing_formula", g.residual, kAnalytic);
  e.value("T_Z", g.t_z).value("T_abs_Z1", g.t_abs).value("T_rel_Z2", g.t_rel).value("lhs", g.lhs);
  e.value("log2_correction", g.correction).value("T_H", g.t_mv);
  e.note = sc.describe();
  r.entries.push_back(e);
  for (const glue::Check& c : glue::verify_morse_side(sc).checks) {
    Entry m = entry("morse_side_" + c.name, c.residual, kFinite);
    m.value("value", c.value);
    r.entries.push_back(m);
  }
  const glue::DoubleFormulaReport d = glue::verify_double_formula(sc);
  for (const glue::Check& c : d.checks) {
    const bool analytic = c.name.rfind("analytic", 0) == 0;
    Entry m = entry("double_" + c.name, c.residual, analytic ? kAnalytic : 1e-12);
    m.value("value", c.value);
    r.entries.push_back(m);
  }
}

}  // namespace

Report compute(InputKind kind, const std::string& bytes, const Options& opt) {
  Report r;
  r.digest = report::fnv1a_hex(bytes);
  const io::Json doc = io::parse(bytes);
  switch (kind) {
    case InputKind::Complex:
      r.command = "compute complex";
      compute_complex(r, io::complex_from_json(doc));
      break;
    case InputKind::Morse:
      r.command = "compute morse";
      compute_morse(r, io::morse_from_json(doc));
      break;
    case InputKind::Double:
      r.command = "compute double";
      compute_double(r, io::double_from_json(doc));
      break;
    case InputKind::Geometry:
      r.command = "compute geometry";
      compute_geometry(r, io::geometry_from_json(doc), opt);
      break;
    case InputKind::Scenario:
      r.command = "compute scenario";
      compute_scenario(r, io::scenario_from_json(doc));
      break;
  }
  if (opt.tolerance) report::override_tolerance(r, *opt.tolerance);
  return r;
}

}  // namespace torsion::verify
