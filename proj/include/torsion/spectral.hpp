#pragma once

// Double complexes, the spectral sequences of their two filtrations and
// torsion bookkeeping along the pages.
//
// Pages are built iteratively: E_{r+1} is the harmonic part of (E_r, d_r)
// for the metric of E_r, lifted to the total complex. E_0 carries the
// metric of the blocks. A page metric can be replaced (e.g. by L^2
// metrics on E_1) before the next page is taken.

#include <utility>
#include <vector>

#include "torsion/flat_complex.hpp"
#include "torsion/metric_complex.hpp"
#include "torsion/random.hpp"

namespace torsion::spectral {

// Blocks c^{p,q}, p = 0..columns-1, q = 0..rows-1.
// d[p][q]: c^{p,q} -> c^{p,q+1} (q + 1 < rows), v[p][q]: c^{p,q} -> c^{p+1,q}
// (p + 1 < columns).
struct DoubleComplexData {
  std::vector<std::vector<int>> dims;
  std::vector<std::vector<Mat>> h, d, v;

  int columns() const { return static_cast<int>(dims.size()); }
  int rows() const { return dims.empty() ? 0 : static_cast<int>(dims[0].size()); }
};

// Zero maps, identity metrics.
DoubleComplexData make_double_complex(const std::vector<std::vector<int>>& dims);

// Shapes, d^2 = v^2 = 0 and dv + vd = 0.
void validate(const DoubleComplexData& dc, double tol = 1e-10);

// C^n = sum_{p+q=n} c^{p,q} (blocks ordered by p), D = d + v.
MetricComplex total_complex(const DoubleComplexData& dc);

enum class Filtration { Columns, Rows };  // by p, by q

struct PageEntry {
  int s = 0, n = 0;   // filtration degree, total degree
  Mat reps;           // representatives, columns in h-orthonormal total coordinates
  Mat metric;         // Gram matrix of the page metric on the coefficients
  Mat quotient;       // orthonormal basis of the subspace divided out
};

struct SpectralPage {
  int r = 0;
  Filtration filtration = Filtration::Columns;
  int s_min = 0, s_max = 0, n_max = 0;
  std::vector<std::vector<PageEntry>> entry;  // [s - s_min][n]
  // d[s - s_min][n]: E^{s,n} -> E^{s+r,n+1} in coefficient coordinates.
  std::vector<std::vector<Mat>> d;

  const PageEntry& at(int s, int n) const;
  int dim(int s, int n) const;
  int total_dim() const;
  // (p, q) of entry (s, n).
  std::pair<int, int> bidegree(int s, int n) const;
};

// E_0, ..., E_{r_max}.
std::vector<SpectralPage> pages(const DoubleComplexData& dc, Filtration f, int r_max);
// The page after `page` (uses the metric stored in `page`).
SpectralPage next_page(const DoubleComplexData& dc, const SpectralPage& page);
// Same page with the metric of entry (s, n) replaced.
SpectralPage with_metric(const SpectralPage& page, int s, int n, const Mat& metric);
// Column vectors x of c^{p,q} (block coordinates) as vectors of the total
// complex in h-orthonormal coordinates, the coordinates used by pages.
Mat to_total(const DoubleComplexData& dc, int p, int q, const Mat& x);
// Coefficients, in the representatives of entry (s, n), of the classes of
// y (columns in Z_r, total coordinates as above).
Mat page_coordinates(const SpectralPage& page, int s, int n, const Mat& y);
// r after which all differentials vanish.
int last_page_index(const DoubleComplexData& dc, Filtration f);

// (E_r, d_r) graded by total degree, blocks ordered by s.
MetricComplex page_complex(const SpectralPage& page);
double page_torsion(const SpectralPage& page, flat::TorsionMethod method = flat::TorsionMethod::Eigen);
flat::TorsionFormResult page_torsion_form(const SpectralPage& page, const QuadratureSpec& quad = {});

struct GoetteReport {
  double total = 0;                 // T(C)
  std::vector<double> page_torsion; // T(E_k), k = 0..k0
  double residual = 0;              // |T(C) - sum_k T(E_k)|
};
// Acyclic total complex only (Unsupported otherwise).
GoetteReport goette_identity_check(const DoubleComplexData& dc, Filtration f,
                                   flat::TorsionMethod method = flat::TorsionMethod::Eigen);

// Composition of exact sequences sharing the junction space (last space of
// e, first space of e2, same metric): the junction is removed and the
// maps through it are composed.
MetricComplex compose(const MetricComplex& e, const MetricComplex& e2);
// Residual of T(e2 o e) = T(e) + (-1)^{l+1} T(e2), l = e.length() - 1.
double composition_residual(const MetricComplex& e, const MetricComplex& e2,
                            flat::TorsionMethod method = flat::TorsionMethod::Eigen);
// Split an exact complex at degree l through K = im v[l-1] with the
// induced metric: e = second o first.
std::pair<MetricComplex, MetricComplex> split_exact(const MetricComplex& e, int l);

// The long exact sequence of a three-column double complex with exact rows
// (columns 0, 1, 2), built from E_1: H^q(c^0), H^q(c^1), H^q(c^2) in
// degrees 3q, 3q+1, 3q+2, maps d_1 and the connecting map. Spaces carry the
// metric stored in `e1`.
MetricComplex long_exact_sequence(const DoubleComplexData& dc, const SpectralPage& e1);

// T(H) - T('E_1) - T('E_2) with the metrics of `e1` (E_2 induced from it).
struct MvDecomposition {
  double mv = 0, e1 = 0, e2 = 0, residual = 0;
};
MvDecomposition mv_decomposition(const DoubleComplexData& dc, const SpectralPage& e1,
                                 flat::TorsionMethod method = flat::TorsionMethod::Eigen);

// Double complex from a commuting diagram of cochain complexes: columns
// are complexes, maps[p][q]: column p -> column p+1 commute with the
// differentials; v = (-1)^q maps.
DoubleComplexData from_commuting_columns(const std::vector<MetricComplex>& columns,
                                         const std::vector<std::vector<Mat>>& maps);

// Random three-column double complex with exact rows: column 1 is an
// extension of column 2 by column 0 in a twisted basis; random metrics.
DoubleComplexData random_three_column(rnd::Rng& rng, int max_rows = 3, int max_side_dim = 2);

}  // namespace torsion::spectral
