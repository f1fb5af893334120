#pragma once

// Thom-Smale cochain complexes of fiberwise Morse data on 1-D (or any
// finite) models, with the boundary-adapted variants, doubling along the
// boundary and the comparison maps between doubled and one-sided data.
//
// Conventions. A generator is a critical point x tensored with the fiber
// F_x (rank r, orthonormal). An instanton x -> x' (ind x' = ind x - 1)
// with sign n and transport tau (F_x' -> F_x) contributes the block
// n * tau at (x, x') of the coboundary C^{i-1} -> C^i.

#include <map>
#include <string>
#include <vector>

#include "torsion/metric_complex.hpp"

namespace torsion::morse {

enum class Region { Z1, Z2, Y };

struct CriticalPoint {
  std::string id;
  int index = 0;
  bool on_boundary = false;  // must agree with region == Y
  Region region = Region::Z1;
  // Geometry used by the de Rham pairing (index-1 points): length of the
  // unstable cell and its orientation relative to the base coordinate.
  double cell_length = 0;
  int orientation = 1;
};

struct Instanton {
  std::string from, to;
  int sign = 1;
  Mat transport;  // r x r; empty = identity
};

struct MorseData {
  int rank = 1;
  std::vector<CriticalPoint> points;
  std::vector<Instanton> instantons;

  int find(const std::string& id) const;  // -1 if absent
  int top_index() const;
};

enum class Variant { Full, Absolute, Relative, Boundary };

const char* to_string(Variant v);

// Throws Configuration / Data: index drop, sign, transport shape and
// invertibility, crossing the frontier Y, and the coboundary squaring to
// zero (the message names the offending pair of points).
void validate(const MorseData& m);

struct ThomSmale {
  MetricComplex complex;                     // degrees 0..top_index
  std::vector<std::vector<int>> generators;  // point indices per degree
  int rank = 1;

  // Row offset of point `p` inside degree `q`, or -1.
  int offset(int q, int p) const;
};

// Full: all points. Absolute (Z1): points of Z1 and Y. Relative (Z2 rel
// Y): points of Z2 off Y. Boundary: points on Y.
ThomSmale thom_smale(const MorseData& m, Variant variant);

// A chain of arcs [y_i, y_{i+1}] with a maximum x_i inside each, on an
// interval (closed = false) or a circle (closed = true, transport
// `holonomy` on the closing instanton x_{n-1} -> y_0). Minima between
// arcs of different regions (and at the closing point) lie on Y.
struct Arc {
  double length = 1;
  Region region = Region::Z1;
};
MorseData arc_chain(const std::vector<Arc>& arcs, bool closed, const Mat& holonomy, int rank);

// One side (all points in `side` or Y) of a datum, as its own datum.
MorseData restrict_to_side(const MorseData& m, Region side);

// Double along Y: interior points get a mirror copy (id + "'") with the
// pushed-forward orientation; instantons are mirrored with the same sign
// and transport. `mirror[p]` is the index of the image of point p.
struct Doubled {
  MorseData data;
  std::vector<int> mirror;
};
Doubled double_along_boundary(const MorseData& side);

// A complex with an isometric involution commuting with the differential.
struct Z2Complex {
  MetricComplex complex;
  std::vector<Mat> involution;  // per degree
};
void validate(const Z2Complex& c);

// Full Thom-Smale complex of the double with the reflection.
struct DoubledComplex {
  Z2Complex z2;
  ThomSmale ts;
};
DoubledComplex doubled_complex(const Doubled& d);

// Eigen-subcomplexes of the involution. basis_plus[q] has h-orthonormal
// columns in the coordinates of the ambient degree-q space.
struct Z2Split {
  MetricComplex plus, minus;
  std::vector<Mat> basis_plus, basis_minus;
};
Z2Split z2_split(const Z2Complex& c);

// psi_1^+ : C(double Z1)^+ -> C(Z1), per degree, in the orthonormal basis
// of the + part and the generator basis of C(Z1).
std::vector<Mat> psi1_plus(const Doubled& d, const DoubledComplex& dc, const Z2Split& split,
                           const ThomSmale& side);
// psi_2^- : C(Z2 rel Y) -> C(double Z2)^-, per degree, from the generator
// basis of the relative complex to the orthonormal basis of the - part.
std::vector<Mat> psi2_minus(const Doubled& d, const DoubledComplex& dc, const Z2Split& split,
                            const ThomSmale& side_rel);

// De Rham pairing of closed-form harmonic forms with the cells. Degree 0:
// the flat section with value s at the reference point (the first
// index-0 point) evaluated at every minimum. Degree 1: s dx integrated
// over every unstable cell, orientation * cell_length * s(x). Columns of
// `sections` are values at the reference point; rows of the result follow
// the generators of `ts` (points outside the variant are dropped).
Mat de_rham_cocycles(const MorseData& m, const ThomSmale& ts, int degree, const Mat& sections);

}  // namespace torsion::morse
