#include "torsion/spectral.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

#include "torsion/errors.hpp"
#include "torsion/hodge.hpp"

namespace torsion::spectral {

namespace {

struct Block {
  int p, q, fdeg, offset, size;
};

// The total complex in h-orthonormal coordinates, with the filtration data
// needed to build pages.
class Context {
 public:
  Context(const DoubleComplexData& dc, Filtration f) : dc_(dc), f_(f) {
    validate(dc);
    const int cols = dc.columns(), rows = dc.rows();
    n_max_ = cols + rows - 2;
    s_min_ = 0;
    s_max_ = (f == Filtration::Columns ? cols : rows) - 1;
    const MetricComplex tot = total_complex(dc);
    blocks_.resize(n_max_ + 1);
    std::vector<Mat> chol(n_max_ + 1);
    for (int n = 0; n <= n_max_; ++n) {
      int off = 0;
      for (int p = 0; p < cols; ++p) {
        const int q = n - p;
        if (q < 0 || q >= rows) continue;
        blocks_[n].push_back({p, q, f == Filtration::Columns ? p : q, off, dc.dims[p][q]});
        off += dc.dims[p][q];
      }
      dims_.push_back(off);
      chol[n] = tot.h[n].rows() ? cholesky_lower(tot.h[n]) : Mat(0, 0);
    }
    for (int n = 0; n < n_max_; ++n) {
      const Mat linv_adj = chol[n].adjoint().triangularView<Eigen::Upper>().solve(Mat::Identity(dims_[n], dims_[n]));
      d_.push_back(chol[n + 1].adjoint() * tot.v[n] * linv_adj);
    }
    double scale = 1;
    for (const Mat& m : d_) scale = std::max(scale, max_abs(m));
    tol_ = 1e-9 * scale;
  }

  int n_max() const { return n_max_; }
  int s_min() const { return s_min_; }
  int s_max() const { return s_max_; }
  double tol() const { return tol_; }
  int dim(int n) const { return n >= 0 && n <= n_max_ ? dims_[n] : 0; }
  const std::vector<Block>& blocks(int n) const { return blocks_[n]; }

  // D: C^n -> C^{n+1}.
  Mat D(int n) const {
    if (n < 0 || n >= n_max_) return Mat::Zero(dim(n + 1), dim(n));
    return d_[n];
  }

  // Coordinate basis of the blocks with fdeg >= s (fdeg == s if `only`).
  Mat selector(int n, int s, bool only = false) const {
    if (n < 0 || n > n_max_) return Mat(0, 0);
    int cnt = 0;
    for (const Block& b : blocks_[n])
      if (only ? b.fdeg == s : b.fdeg >= s) cnt += b.size;
    Mat out = Mat::Zero(dims_[n], cnt);
    int c = 0;
    for (const Block& b : blocks_[n])
      if (only ? b.fdeg == s : b.fdeg >= s)
        for (int i = 0; i < b.size; ++i) out(b.offset + i, c++) = 1;
    return out;
  }

  // Rows of the blocks with fdeg < s.
  Mat rows_below(int n, int s) const {
    const Mat sel = selector(n, s);
    const Mat all = Mat::Identity(dim(n), dim(n));
    return complement_in(all, sel, 0.5).adjoint();
  }

  // Z_r^{s,n} = {x in F^s C^n : D x in F^{s+r} C^{n+1}}; Z_{-1} = F.
  Mat z(int r, int s, int n) const {
    const auto key = std::make_tuple(r, s, n);
    if (auto it = z_cache_.find(key); it != z_cache_.end()) return it->second;
    Mat out;
    const Mat sel = selector(n, s);
    if (r < 0 || sel.cols() == 0 || n >= n_max_) {
      out = sel;
    } else {
      const Mat m = rows_below(n + 1, s + r) * D(n) * sel;
      out = m.rows() == 0 ? sel : Mat(sel * kernel_basis(m, tol_));
    }
    if (out.rows() != dim(n)) out = Mat(dim(n), 0);
    z_cache_[key] = out;
    return out;
  }

  // N_r^{s,n} = Z_{r-1}^{s+1,n} + D Z_{r-1}^{s-r+1,n-1}.
  Mat quotient(int r, int s, int n) const {
    const Mat a = z(r - 1, s + 1, n);
    Mat b = Mat(dim(n), 0);
    if (n > 0) b = D(n - 1) * z(r - 1, s - r + 1, n - 1);
    Mat both(dim(n), a.cols() + b.cols());
    both << a, b;
    return range_basis(both, tol_);
  }

 private:
  const DoubleComplexData& dc_;
  Filtration f_;
  int n_max_ = 0, s_min_ = 0, s_max_ = 0;
  double tol_ = 1e-9;
  std::vector<std::vector<Block>> blocks_;
  std::vector<int> dims_;
  std::vector<Mat> d_;
  mutable std::map<std::tuple<int, int, int>, Mat> z_cache_;
};

bool in_range(const SpectralPage& pg, int s, int n) {
  return s >= pg.s_min && s <= pg.s_max && n >= 0 && n <= pg.n_max;
}

// Coordinates of y (columns in Z_r) in the basis reps, modulo the quotient.
Mat page_coordinates(const PageEntry& e, const Mat& y, double tol, const char* what) {
  Mat basis(e.reps.rows(), e.reps.cols() + e.quotient.cols());
  basis << e.reps, e.quotient;
  const Mat sol = solve_min_norm(basis, y);
  const double res = max_abs(basis * sol - y);
  if (res > 1e3 * tol * std::max(1.0, max_abs(y))) {
    std::ostringstream os;
    os << what << ": vector not in the expected subspace (residual " << res << ")";
    fail(ErrorKind::Numeric, os.str());
  }
  return sol.topRows(e.reps.cols());
}

void compute_differentials(const Context& ctx, SpectralPage& pg) {
  const int ns = pg.s_max - pg.s_min + 1;
  pg.d.assign(ns, std::vector<Mat>(pg.n_max + 1));
  for (int s = pg.s_min; s <= pg.s_max; ++s)
    for (int n = 0; n <= pg.n_max; ++n) {
      const PageEntry& src = pg.at(s, n);
      const int k = static_cast<int>(src.reps.cols());
      Mat& out = pg.d[s - pg.s_min][n];
      if (!in_range(pg, s + pg.r, n + 1)) {
        out = Mat(0, k);
        continue;
      }
      const PageEntry& dst = pg.at(s + pg.r, n + 1);
      if (k == 0 || dst.reps.cols() == 0) {
        out = Mat::Zero(dst.reps.cols(), k);
        continue;
      }
      out = page_coordinates(dst, ctx.D(n) * src.reps, ctx.tol(), "page differential");
    }
}

SpectralPage first_page(const Context& ctx, Filtration f) {
  SpectralPage pg;
  pg.r = 0;
  pg.filtration = f;
  pg.s_min = ctx.s_min();
  pg.s_max = ctx.s_max();
  pg.n_max = ctx.n_max();
  pg.entry.assign(pg.s_max - pg.s_min + 1, std::vector<PageEntry>(pg.n_max + 1));
  for (int s = pg.s_min; s <= pg.s_max; ++s)
    for (int n = 0; n <= pg.n_max; ++n) {
      PageEntry& e = pg.entry[s - pg.s_min][n];
      e.s = s;
      e.n = n;
      e.reps = ctx.selector(n, s, true);
      if (e.reps.rows() != ctx.dim(n)) e.reps = Mat(ctx.dim(n), 0);
      e.metric = Mat::Identity(e.reps.cols(), e.reps.cols());
      e.quotient = ctx.quotient(0, s, n);
    }
  compute_differentials(ctx, pg);
  return pg;
}

SpectralPage advance(const Context& ctx, const SpectralPage& pg) {
  const int r = pg.r;
  SpectralPage nx;
  nx.r = r + 1;
  nx.filtration = pg.filtration;
  nx.s_min = pg.s_min;
  nx.s_max = pg.s_max;
  nx.n_max = pg.n_max;
  nx.entry.assign(nx.s_max - nx.s_min + 1, std::vector<PageEntry>(nx.n_max + 1));
  for (int s = pg.s_min; s <= pg.s_max; ++s)
    for (int n = 0; n <= pg.n_max; ++n) {
      const PageEntry& e = pg.at(s, n);
      const int k = static_cast<int>(e.reps.cols());
      PageEntry& out = nx.entry[s - nx.s_min][n];
      out.s = s;
      out.n = n;
      out.quotient = ctx.quotient(r + 1, s, n);
      if (k == 0) {
        out.reps = Mat(ctx.dim(n), 0);
        out.metric = Mat(0, 0);
        continue;
      }
      // Harmonic part of (E_r, d_r) for the metric G.
      const Mat& dout = pg.d[s - pg.s_min][n];
      Mat din_adj(0, k);
      if (in_range(pg, s - r, n - 1)) {
        const Mat& din = pg.d[s - r - pg.s_min][n - 1];
        din_adj = din.adjoint() * e.metric;
      }
      Mat cond(dout.rows() + din_adj.rows(), k);
      cond << dout, din_adj;
      const Mat kb = cond.rows() == 0 ? Mat(Mat::Identity(k, k)) : kernel_basis(cond, ctx.tol());
      if (kb.cols() == 0) {
        out.reps = Mat(ctx.dim(n), 0);
        out.metric = Mat(0, 0);
        continue;
      }
      Mat x = e.reps * kb;
      // Lift to Z_{r+1}: D x = a + D b with a in Z_{r-1}^{s+r+1}, b in Z_{r-1}^{s+1}.
      if (n < ctx.n_max()) {
        const Mat a = ctx.z(r - 1, s + r + 1, n + 1);
        const Mat b = ctx.z(r - 1, s + 1, n);
        const Mat db = ctx.D(n) * b;
        Mat sys(ctx.dim(n + 1), a.cols() + db.cols());
        sys << a, db;
        const Mat y = ctx.D(n) * x;
        const Mat sol = solve_min_norm(sys, y);
        if (max_abs(sys * sol - y) > 1e3 * ctx.tol() * std::max(1.0, max_abs(y)))
          fail(ErrorKind::Numeric, "page lift: d_r of a harmonic class is not zero");
        x -= b * sol.bottomRows(b.cols());
      }
      out.reps = x;
      out.metric = kb.adjoint() * e.metric * kb;
      // E_{r+1} = Z_{r+1} / N_{r+1}: dimension bookkeeping.
      const Mat zr = ctx.z(r + 1, s, n);
      if (zr.cols() != out.reps.cols() + out.quotient.cols()) {
        std::ostringstream os;
        os << "page " << r + 1 << " entry (" << s << ", " << n << "): dim Z = " << zr.cols()
           << " but harmonic part " << out.reps.cols() << " + quotient " << out.quotient.cols();
        fail(ErrorKind::Numeric, os.str());
      }
    }
  compute_differentials(ctx, nx);
  return nx;
}

}  // namespace

DoubleComplexData make_double_complex(const std::vector<std::vector<int>>& dims) {
  DoubleComplexData dc;
  dc.dims = dims;
  const int cols = dc.columns(), rows = dc.rows();
  for (const auto& c : dims)
    if (static_cast<int>(c.size()) != rows) fail(ErrorKind::Dimension, "ragged double complex dims");
  dc.h.assign(cols, {});
  dc.d.assign(cols, {});
  dc.v.assign(cols, {});
  for (int p = 0; p < cols; ++p)
    for (int q = 0; q < rows; ++q) {
      dc.h[p].push_back(Mat::Identity(dims[p][q], dims[p][q]));
      if (q + 1 < rows) dc.d[p].push_back(Mat::Zero(dims[p][q + 1], dims[p][q]));
      if (p + 1 < cols) dc.v[p].push_back(Mat::Zero(dims[p + 1][q], dims[p][q]));
    }
  return dc;
}

void validate(const DoubleComplexData& dc, double tol) {
  const int cols = dc.columns(), rows = dc.rows();
  if (cols == 0 || rows == 0) fail(ErrorKind::Dimension, "empty double complex");
  auto shape = [](const Mat& m, int r, int c, const char* what) {
    if (m.rows() != r || m.cols() != c) fail(ErrorKind::Dimension, std::string("double complex: bad shape of ") + what);
  };
  if (static_cast<int>(dc.h.size()) != cols || static_cast<int>(dc.d.size()) != cols ||
      static_cast<int>(dc.v.size()) != cols)
    fail(ErrorKind::Dimension, "double complex: one list of blocks per column");
  for (int p = 0; p < cols; ++p) {
    if (static_cast<int>(dc.dims[p].size()) != rows || static_cast<int>(dc.h[p].size()) != rows ||
        static_cast<int>(dc.d[p].size()) != rows - 1 || static_cast<int>(dc.v[p].size()) != (p + 1 < cols ? rows : 0))
      fail(ErrorKind::Dimension, "double complex: block counts");
    for (int q = 0; q < rows; ++q) {
      shape(dc.h[p][q], dc.dims[p][q], dc.dims[p][q], "h");
      if (!is_positive_definite(dc.h[p][q])) fail(ErrorKind::Data, "double complex: metric not positive definite");
      if (q + 1 < rows) shape(dc.d[p][q], dc.dims[p][q + 1], dc.dims[p][q], "d");
      if (p + 1 < cols) shape(dc.v[p][q], dc.dims[p + 1][q], dc.dims[p][q], "v");
    }
  }
  auto check = [&](const Mat& m, double scale, const std::string& what, int p, int q) {
    if (max_abs(m) > tol * std::max(1.0, scale)) {
      std::ostringstream os;
      os << "double complex: " << what << " fails at (" << p << ", " << q << ")";
      fail(ErrorKind::Data, os.str());
    }
  };
  for (int p = 0; p < cols; ++p)
    for (int q = 0; q < rows; ++q) {
      if (q + 2 < rows) check(dc.d[p][q + 1] * dc.d[p][q], max_abs(dc.d[p][q + 1]) * max_abs(dc.d[p][q]), "d^2 = 0", p, q);
      if (p + 2 < cols) check(dc.v[p + 1][q] * dc.v[p][q], max_abs(dc.v[p + 1][q]) * max_abs(dc.v[p][q]), "v^2 = 0", p, q);
      if (p + 1 < cols && q + 1 < rows) {
        const Mat ac = dc.d[p + 1][q] * dc.v[p][q] + dc.v[p][q + 1] * dc.d[p][q];
        check(ac, max_abs(dc.d[p + 1][q]) * max_abs(dc.v[p][q]) + max_abs(dc.v[p][q + 1]) * max_abs(dc.d[p][q]),
              "dv + vd = 0", p, q);
      }
    }
}

MetricComplex total_complex(const DoubleComplexData& dc) {
  validate(dc);
  const int cols = dc.columns(), rows = dc.rows();
  const int n_max = cols + rows - 2;
  std::vector<std::vector<int>> offset(cols, std::vector<int>(rows, 0));
  MetricComplex e;
  for (int n = 0; n <= n_max; ++n) {
    int off = 0;
    std::vector<Mat> hs;
    for (int p = 0; p < cols; ++p) {
      const int q = n - p;
      if (q < 0 || q >= rows) continue;
      offset[p][q] = off;
      off += dc.dims[p][q];
      hs.push_back(dc.h[p][q]);
    }
    e.dims.push_back(off);
    e.h.push_back(block_diag(hs));
  }
  for (int n = 0; n < n_max; ++n) {
    Mat m = Mat::Zero(e.dims[n + 1], e.dims[n]);
    for (int p = 0; p < cols; ++p) {
      const int q = n - p;
      if (q < 0 || q >= rows) continue;
      if (q + 1 < rows) m.block(offset[p][q + 1], offset[p][q], dc.dims[p][q + 1], dc.dims[p][q]) += dc.d[p][q];
      if (p + 1 < cols) m.block(offset[p + 1][q], offset[p][q], dc.dims[p + 1][q], dc.dims[p][q]) += dc.v[p][q];
    }
    e.v.push_back(m);
  }
  return e;
}

const PageEntry& SpectralPage::at(int s, int n) const { return entry.at(s - s_min).at(n); }

int SpectralPage::dim(int s, int n) const {
  if (s < s_min || s > s_max || n < 0 || n > n_max) return 0;
  return static_cast<int>(at(s, n).reps.cols());
}

int SpectralPage::total_dim() const {
  int t = 0;
  for (int s = s_min; s <= s_max; ++s)
    for (int n = 0; n <= n_max; ++n) t += dim(s, n);
  return t;
}

std::pair<int, int> SpectralPage::bidegree(int s, int n) const {
  return filtration == Filtration::Columns ? std::pair{s, n - s} : std::pair{n - s, s};
}

std::vector<SpectralPage> pages(const DoubleComplexData& dc, Filtration f, int r_max) {
  Context ctx(dc, f);
  std::vector<SpectralPage> out{first_page(ctx, f)};
  for (int r = 1; r <= r_max; ++r) out.push_back(advance(ctx, out.back()));
  return out;
}

SpectralPage next_page(const DoubleComplexData& dc, const SpectralPage& page) {
  Context ctx(dc, page.filtration);
  return advance(ctx, page);
}

SpectralPage with_metric(const SpectralPage& page, int s, int n, const Mat& metric) {
  SpectralPage out = page;
  PageEntry& e = out.entry.at(s - out.s_min).at(n);
  if (metric.rows() != e.reps.cols() || metric.cols() != e.reps.cols())
    fail(ErrorKind::Dimension, "with_metric: metric shape does not match the page entry");
  if (e.reps.cols() > 0 && !is_positive_definite(metric)) fail(ErrorKind::Data, "with_metric: metric not positive definite");
  e.metric = metric;
  return out;
}

Mat to_total(const DoubleComplexData& dc, int p, int q, const Mat& x) {
  if (p < 0 || p >= dc.columns() || q < 0 || q >= dc.rows()) fail(ErrorKind::Dimension, "to_total: block out of range");
  if (x.rows() != dc.dims[p][q]) fail(ErrorKind::Dimension, "to_total: vector size does not match the block");
  int off = 0, total = 0;
  for (int pp = 0; pp < dc.columns(); ++pp) {
    const int qq = p + q - pp;
    if (qq < 0 || qq >= dc.rows()) continue;
    if (pp < p) off += dc.dims[pp][qq];
    total += dc.dims[pp][qq];
  }
  Mat out = Mat::Zero(total, x.cols());
  if (x.rows() > 0) out.middleRows(off, x.rows()) = cholesky_lower(dc.h[p][q]).adjoint() * x;
  return out;
}

Mat page_coordinates(const SpectralPage& page, int s, int n, const Mat& y) {
  const PageEntry& e = page.at(s, n);
  if (y.rows() != e.reps.rows()) fail(ErrorKind::Dimension, "page_coordinates: vector size does not match the total degree");
  if (e.reps.cols() == 0) return Mat(0, y.cols());
  return page_coordinates(e, y, 1e-9, "page coordinates");
}

int last_page_index(const DoubleComplexData& dc, Filtration f) {
  return (f == Filtration::Columns ? dc.columns() : dc.rows()) - 1;
}

MetricComplex page_complex(const SpectralPage& pg) {
  MetricComplex e;
  std::vector<std::vector<int>> off(pg.s_max - pg.s_min + 1, std::vector<int>(pg.n_max + 1, 0));
  for (int n = 0; n <= pg.n_max; ++n) {
    int o = 0;
    std::vector<Mat> hs;
    for (int s = pg.s_min; s <= pg.s_max; ++s) {
      off[s - pg.s_min][n] = o;
      o += pg.dim(s, n);
      hs.push_back(pg.at(s, n).reps.cols() ? pg.at(s, n).metric : Mat(0, 0));
    }
    e.dims.push_back(o);
    e.h.push_back(block_diag(hs));
  }
  for (int n = 0; n < pg.n_max; ++n) {
    Mat m = Mat::Zero(e.dims[n + 1], e.dims[n]);
    for (int s = pg.s_min; s <= pg.s_max; ++s) {
      const int t = s + pg.r;
      if (t > pg.s_max) continue;
      const Mat& d = pg.d[s - pg.s_min][n];
      m.block(off[t - pg.s_min][n + 1], off[s - pg.s_min][n], d.rows(), d.cols()) += d;
    }
    e.v.push_back(m);
  }
  return e;
}

double page_torsion(const SpectralPage& page, flat::TorsionMethod method) {
  return flat::degree0_torsion(page_complex(page), method);
}

flat::TorsionFormResult page_torsion_form(const SpectralPage& page, const QuadratureSpec& quad) {
  return flat::torsion_form(page_complex(page), quad);
}

GoetteReport goette_identity_check(const DoubleComplexData& dc, Filtration f, flat::TorsionMethod method) {
  const int k0 = last_page_index(dc, f);
  const std::vector<SpectralPage> pg = pages(dc, f, k0 + 1);
  if (pg.back().total_dim() != 0)
    fail(ErrorKind::Unsupported, "Goette identity check needs an acyclic total complex");
  GoetteReport rep;
  rep.total = flat::degree0_torsion(total_complex(dc), method);
  double sum = 0;
  for (int k = 0; k <= k0; ++k) {
    rep.page_torsion.push_back(page_torsion(pg[k], method));
    sum += rep.page_torsion.back();
  }
  rep.residual = std::abs(rep.total - sum);
  return rep;
}

MetricComplex compose(const MetricComplex& e, const MetricComplex& e2) {
  validate(e);
  validate(e2);
  const int l = e.length() - 1;
  if (l < 1 || e2.length() < 2) fail(ErrorKind::Configuration, "compose: both sequences need at least two terms");
  if (e.dims[l] != e2.dims[0] || max_abs(e.h[l] - e2.h[0]) > 1e-12 * std::max(1.0, max_abs(e.h[l])))
    fail(ErrorKind::Configuration, "compose: junction spaces or metrics differ");
  MetricComplex out;
  for (int i = 0; i < l; ++i) {
    out.dims.push_back(e.dims[i]);
    out.h.push_back(e.h[i]);
  }
  for (int i = 1; i < e2.length(); ++i) {
    out.dims.push_back(e2.dims[i]);
    out.h.push_back(e2.h[i]);
  }
  for (int i = 0; i + 1 < l; ++i) out.v.push_back(e.v[i]);
  out.v.push_back(e2.v[0] * e.v[l - 1]);
  for (int i = 1; i + 1 < e2.length(); ++i) out.v.push_back(e2.v[i]);
  return out;
}

double composition_residual(const MetricComplex& e, const MetricComplex& e2, flat::TorsionMethod method) {
  const int l = e.length() - 1;
  const double sign = (l + 1) % 2 == 0 ? 1.0 : -1.0;
  return flat::degree0_torsion(compose(e, e2), method) - flat::degree0_torsion(e, method) -
         sign * flat::degree0_torsion(e2, method);
}

std::pair<MetricComplex, MetricComplex> split_exact(const MetricComplex& e, int l) {
  validate(e);
  if (l < 1 || l + 1 >= e.length()) fail(ErrorKind::Configuration, "split_exact: junction must be an inner degree");
  const double scale = std::max(1.0, max_abs(e.v[l - 1]));
  Mat r = range_basis(e.v[l - 1], 1e-9 * scale);
  const Mat b = r.cols() ? Mat(r * inv_sqrt_hpd(r.adjoint() * e.h[l] * r)) : r;
  const int k = static_cast<int>(b.cols());
  MetricComplex first, second;
  for (int i = 0; i < l; ++i) {
    first.dims.push_back(e.dims[i]);
    first.h.push_back(e.h[i]);
  }
  first.dims.push_back(k);
  first.h.push_back(Mat::Identity(k, k));
  for (int i = 0; i + 1 < l; ++i) first.v.push_back(e.v[i]);
  first.v.push_back(b.adjoint() * e.h[l] * e.v[l - 1]);
  second.dims.push_back(k);
  second.h.push_back(Mat::Identity(k, k));
  for (int i = l; i < e.length(); ++i) {
    second.dims.push_back(e.dims[i]);
    second.h.push_back(e.h[i]);
  }
  second.v.push_back(b);
  for (int i = l; i + 1 < e.length(); ++i) second.v.push_back(e.v[i]);
  return {first, second};
}

MetricComplex long_exact_sequence(const DoubleComplexData& dc, const SpectralPage& e1) {
  if (dc.columns() != 3) fail(ErrorKind::Configuration, "long exact sequence needs three columns");
  if (e1.r != 1 || e1.filtration != Filtration::Columns)
    fail(ErrorKind::Configuration, "long exact sequence is built from the column page E_1");
  Context ctx(dc, Filtration::Columns);
  const int rows = dc.rows();
  MetricComplex h;
  for (int q = 0; q < rows; ++q)
    for (int p = 0; p < 3; ++p) {
      const PageEntry& e = e1.at(p, p + q);
      h.dims.push_back(static_cast<int>(e.reps.cols()));
      h.h.push_back(e.reps.cols() ? e.metric : Mat(0, 0));
    }
  // Block of D from (p, q) to (p', q') in orthonormal coordinates.
  auto block = [&](int p, int q, int p2, int q2) {
    const int n = p + q;
    const Mat dn = ctx.D(n);
    const Block* src = nullptr;
    const Block* dst = nullptr;
    for (const Block& b : ctx.blocks(n))
      if (b.p == p && b.q == q) src = &b;
    for (const Block& b : ctx.blocks(n + 1))
      if (b.p == p2 && b.q == q2) dst = &b;
    return Mat(dn.block(dst->offset, src->offset, dst->size, src->size));
  };
  auto restrict_to = [&](const Mat& x, int p, int q) {
    for (const Block& b : ctx.blocks(p + q))
      if (b.p == p && b.q == q) return Mat(x.middleRows(b.offset, b.size));
    return Mat(0, x.cols());
  };
  for (int q = 0; q < rows; ++q) {
    for (int p = 0; p < 2; ++p) h.v.push_back(e1.d[p][p + q]);
    if (q + 1 == rows) break;
    // Connecting map H^q(c^2) -> H^{q+1}(c^0): v y = x, v z = d y, [x] -> [z].
    const PageEntry& src = e1.at(2, 2 + q);
    const PageEntry& dst = e1.at(0, q + 1);
    const int k = static_cast<int>(src.reps.cols());
    if (k == 0 || dst.reps.cols() == 0) {
      h.v.push_back(Mat::Zero(dst.reps.cols(), k));
      continue;
    }
    const Mat x = restrict_to(src.reps, 2, q);
    const Mat v12 = block(1, q, 2, q);
    const Mat y = solve_min_norm(v12, x);
    if (max_abs(v12 * y - x) > 1e-8 * std::max(1.0, max_abs(x)))
      fail(ErrorKind::Construction, "long exact sequence: row is not exact (v onto column 2)");
    const Mat dy = block(1, q, 1, q + 1) * y;
    const Mat v01 = block(0, q + 1, 1, q + 1);
    const Mat z = solve_min_norm(v01, dy);
    if (max_abs(v01 * z - dy) > 1e-8 * std::max(1.0, max_abs(dy)))
      fail(ErrorKind::Construction, "long exact sequence: row is not exact (d y outside the image of column 0)");
    Mat zfull = Mat::Zero(ctx.dim(q + 1), k);
    for (const Block& b : ctx.blocks(q + 1))
      if (b.p == 0) zfull.middleRows(b.offset, b.size) = z;
    h.v.push_back(page_coordinates(dst, zfull, ctx.tol(), "connecting map"));
  }
  validate(h, 1e-8);
  const hodge::HodgeData hd = hodge::hodge_decompose(h);
  for (std::size_t i = 0; i < hd.betti.size(); ++i)
    if (hd.betti[i] != 0) {
      std::ostringstream os;
      os << "long exact sequence is not exact at degree " << i << " (cohomology of dimension " << hd.betti[i] << ")";
      fail(ErrorKind::Construction, os.str());
    }
  return h;
}

MvDecomposition mv_decomposition(const DoubleComplexData& dc, const SpectralPage& e1, flat::TorsionMethod method) {
  MvDecomposition m;
  m.mv = flat::degree0_torsion(long_exact_sequence(dc, e1), method);
  m.e1 = page_torsion(e1, method);
  m.e2 = page_torsion(next_page(dc, e1), method);
  m.residual = m.mv - m.e1 - m.e2;
  return m;
}

DoubleComplexData from_commuting_columns(const std::vector<MetricComplex>& columns,
                                         const std::vector<std::vector<Mat>>& maps) {
  if (columns.empty()) fail(ErrorKind::Configuration, "no columns");
  const int rows = columns[0].length();
  std::vector<std::vector<int>> dims;
  for (const auto& c : columns) {
    validate(c);
    if (c.length() != rows) fail(ErrorKind::Configuration, "columns must have the same length");
    dims.push_back(c.dims);
  }
  if (maps.size() + 1 != columns.size()) fail(ErrorKind::Configuration, "one list of maps between consecutive columns");
  DoubleComplexData dc = make_double_complex(dims);
  for (std::size_t p = 0; p < columns.size(); ++p) {
    dc.h[p] = columns[p].h;
    dc.d[p] = columns[p].v;
    if (p + 1 < columns.size()) {
      if (static_cast<int>(maps[p].size()) != rows) fail(ErrorKind::Configuration, "one map per row");
      for (int q = 0; q < rows; ++q) dc.v[p][q] = (q % 2 ? -1.0 : 1.0) * maps[p][q];
    }
  }
  validate(dc, 1e-9);
  return dc;
}

DoubleComplexData random_three_column(rnd::Rng& rng, int max_rows, int max_side_dim) {
  const int rows = rnd::uniform_int(rng, 1, max_rows);
  auto side = [&]() {
    rnd::ComplexShape s;
    do {
      s = rnd::random_shape(rng, rows, max_side_dim, false);
    } while (static_cast<int>(s.betti.size()) != rows);
    return rnd::random_complex(rng, s);
  };
  const MetricComplex a = side(), b = side();
  MetricComplex mid;
  std::vector<Mat> twist(rows), ina(rows), prb(rows), k(rows);
  for (int q = 0; q < rows; ++q) {
    const int da = a.dims[q], db = b.dims[q];
    mid.dims.push_back(da + db);
    twist[q] = rnd::well_conditioned(rng, da + db, da + db);
    k[q] = rnd::gaussian(rng, da, db);
    ina[q] = Mat::Zero(da + db, da);
    ina[q].topRows(da) = Mat::Identity(da, da);
    prb[q] = Mat::Zero(db, da + db);
    prb[q].rightCols(db) = Mat::Identity(db, db);
  }
  for (int q = 0; q + 1 < rows; ++q) {
    // theta = d_A K - K d_B keeps the middle differential square-zero.
    const Mat theta = a.v[q] * k[q] - k[q + 1] * b.v[q];
    Mat m = Mat::Zero(mid.dims[q + 1], mid.dims[q]);
    const int da0 = a.dims[q], da1 = a.dims[q + 1], db0 = b.dims[q], db1 = b.dims[q + 1];
    m.block(0, 0, da1, da0) = a.v[q];
    m.block(0, da0, da1, db0) = theta;
    m.block(da1, da0, db1, db0) = b.v[q];
    mid.v.push_back(twist[q + 1] * m * twist[q].inverse());
  }
  for (int q = 0; q < rows; ++q) mid.h.push_back(rnd::hpd(rng, mid.dims[q]));
  std::vector<std::vector<Mat>> maps(2);
  for (int q = 0; q < rows; ++q) {
    maps[0].push_back(twist[q] * ina[q]);
    maps[1].push_back(prb[q] * twist[q].inverse());
  }
  return from_commuting_columns({a, mid, b}, maps);
}

}  // namespace torsion::spectral
