#include "torsion/morse.hpp"

#include <cmath>
#include <deque>
#include <set>
#include <sstream>

#include "torsion/errors.hpp"

namespace torsion::morse {

namespace {

Mat transport_of(const Instanton& g, int r) { return g.transport.size() == 0 ? Mat::Identity(r, r) : g.transport; }

bool in_variant(const CriticalPoint& p, Variant v) {
  switch (v) {
    case Variant::Full: return true;
    case Variant::Absolute: return p.region != Region::Z2;
    case Variant::Relative: return p.region == Region::Z2;
    case Variant::Boundary: return p.region == Region::Y;
  }
  return false;
}

ThomSmale build(const MorseData& m, Variant variant) {
  ThomSmale ts;
  ts.rank = m.rank;
  const int top = m.top_index();
  const int r = m.rank;
  ts.generators.assign(top + 1, {});
  for (std::size_t p = 0; p < m.points.size(); ++p)
    if (in_variant(m.points[p], variant)) ts.generators[m.points[p].index].push_back(static_cast<int>(p));
  MetricComplex& c = ts.complex;
  for (int q = 0; q <= top; ++q) {
    const int d = static_cast<int>(ts.generators[q].size()) * r;
    c.dims.push_back(d);
    c.h.push_back(Mat::Identity(d, d));
  }
  for (int q = 0; q < top; ++q) c.v.push_back(Mat::Zero(c.dims[q + 1], c.dims[q]));
  for (const Instanton& g : m.instantons) {
    const int x = m.find(g.from), y = m.find(g.to);
    const int q = m.points[y].index;
    const int ox = ts.offset(q + 1, x), oy = ts.offset(q, y);
    if (ox < 0 || oy < 0) continue;
    c.v[q].block(ox, oy, r, r) += static_cast<double>(g.sign) * transport_of(g, r);
  }
  return ts;
}

}  // namespace

int MorseData::find(const std::string& id) const {
  for (std::size_t i = 0; i < points.size(); ++i)
    if (points[i].id == id) return static_cast<int>(i);
  return -1;
}

int MorseData::top_index() const {
  int t = 0;
  for (const auto& p : points) t = std::max(t, p.index);
  return t;
}

const char* to_string(Variant v) {
  switch (v) {
    case Variant::Full: return "full";
    case Variant::Absolute: return "absolute";
    case Variant::Relative: return "relative";
    case Variant::Boundary: return "boundary";
  }
  return "?";
}

int ThomSmale::offset(int q, int p) const {
  if (q < 0 || q >= static_cast<int>(generators.size())) return -1;
  const auto& g = generators[q];
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g[i] == p) return static_cast<int>(i) * rank;
  return -1;
}

void validate(const MorseData& m) {
  if (m.rank < 1) fail(ErrorKind::Configuration, "Morse data: rank must be >= 1");
  std::set<std::string> ids;
  for (const auto& p : m.points) {
    if (!ids.insert(p.id).second) fail(ErrorKind::Configuration, "Morse data: duplicate point id '" + p.id + "'");
    if (p.index < 0) fail(ErrorKind::Configuration, "Morse data: negative index at '" + p.id + "'");
    if (p.on_boundary != (p.region == Region::Y))
      fail(ErrorKind::Configuration, "Morse data: on_boundary disagrees with region at '" + p.id + "'");
  }
  for (const Instanton& g : m.instantons) {
    const int x = m.find(g.from), y = m.find(g.to);
    if (x < 0 || y < 0)
      fail(ErrorKind::Configuration, "Morse data: instanton " + g.from + " -> " + g.to + " has an unknown end");
    const auto& px = m.points[x];
    const auto& py = m.points[y];
    const std::string name = "instanton " + g.from + " -> " + g.to;
    if (px.index != py.index + 1) fail(ErrorKind::Data, name + " does not drop the index by one");
    if (g.sign != 1 && g.sign != -1) fail(ErrorKind::Data, name + " has a sign other than +-1");
    if (g.transport.size() != 0) {
      if (g.transport.rows() != m.rank || g.transport.cols() != m.rank)
        fail(ErrorKind::Configuration, name + " has a transport of the wrong shape");
      Eigen::JacobiSVD<Mat> svd(g.transport);
      if (!(svd.singularValues().minCoeff() > 1e-12 * std::max(1.0, svd.singularValues().maxCoeff())))
        fail(ErrorKind::Data, name + " has a singular transport");
    }
    const bool crosses = (px.region == Region::Z1 && py.region == Region::Z2) ||
                         (px.region == Region::Z2 && py.region == Region::Z1) ||
                         (px.region == Region::Y && py.region != Region::Y);
    if (crosses) fail(ErrorKind::Data, name + " crosses the frontier Y");
  }
  const ThomSmale ts = build(m, Variant::Full);
  const MetricComplex& c = ts.complex;
  const int r = m.rank;
  for (std::size_t q = 0; q + 1 < c.v.size(); ++q) {
    const Mat sq = c.v[q + 1] * c.v[q];
    const double scale = std::max(1.0, max_abs(c.v[q + 1]) * max_abs(c.v[q]));
    for (std::size_t i = 0; i < ts.generators[q + 2].size(); ++i)
      for (std::size_t j = 0; j < ts.generators[q].size(); ++j)
        if (max_abs(sq.block(i * r, j * r, r, r)) > 1e-12 * scale) {
          std::ostringstream os;
          os << "Thom-Smale coboundary does not square to zero between '" << m.points[ts.generators[q + 2][i]].id
             << "' and '" << m.points[ts.generators[q][j]].id << "'";
          fail(ErrorKind::Data, os.str());
        }
  }
}

ThomSmale thom_smale(const MorseData& m, Variant variant) {
  validate(m);
  return build(m, variant);
}

MorseData arc_chain(const std::vector<Arc>& arcs, bool closed, const Mat& holonomy, int rank) {
  const int n = static_cast<int>(arcs.size());
  if (n == 0) fail(ErrorKind::Configuration, "arc_chain needs at least one arc");
  MorseData m;
  m.rank = rank;
  const int mins = closed ? n : n + 1;
  auto min_region = [&](int i) {
    if (!closed && i == 0) return arcs[0].region;
    if (!closed && i == n) return arcs[n - 1].region;
    const Region a = arcs[(i - 1 + n) % n].region, b = arcs[i % n].region;
    return a == b ? a : Region::Y;
  };
  for (int i = 0; i < mins; ++i) {
    CriticalPoint p;
    p.id = "y" + std::to_string(i);
    p.index = 0;
    p.region = min_region(i);
    p.on_boundary = p.region == Region::Y;
    m.points.push_back(p);
  }
  for (int i = 0; i < n; ++i) {
    if (!(arcs[i].length > 0)) fail(ErrorKind::Domain, "arc lengths must be positive");
    if (arcs[i].region == Region::Y) fail(ErrorKind::Configuration, "arcs lie in Z1 or Z2");
    CriticalPoint p;
    p.id = "x" + std::to_string(i);
    p.index = 1;
    p.region = arcs[i].region;
    p.cell_length = arcs[i].length;
    m.points.push_back(p);
    m.instantons.push_back({p.id, "y" + std::to_string(i), -1, Mat()});
    Instanton right{p.id, "y" + std::to_string((i + 1) % mins), 1, Mat()};
    if (closed && i == n - 1) right.transport = holonomy;
    m.instantons.push_back(right);
  }
  return m;
}

MorseData restrict_to_side(const MorseData& m, Region side) {
  MorseData out;
  out.rank = m.rank;
  for (const auto& p : m.points)
    if (p.region == side || p.region == Region::Y) out.points.push_back(p);
  for (const auto& g : m.instantons)
    if (out.find(g.from) >= 0 && out.find(g.to) >= 0) out.instantons.push_back(g);
  return out;
}

Doubled double_along_boundary(const MorseData& side) {
  validate(side);
  Doubled d;
  d.data = side;
  const int n = static_cast<int>(side.points.size());
  d.mirror.assign(n, -1);
  bool any_boundary = false;
  for (int p = 0; p < n; ++p) {
    if (side.points[p].region == Region::Y) {
      d.mirror[p] = p;
      any_boundary = true;
      continue;
    }
    CriticalPoint c = side.points[p];
    c.id += "'";
    c.orientation = -c.orientation;
    d.mirror[p] = static_cast<int>(d.data.points.size());
    d.data.points.push_back(c);
  }
  if (!any_boundary) fail(ErrorKind::Configuration, "double: no boundary points are marked");
  const std::size_t total = d.data.points.size();
  d.mirror.resize(total);
  for (int p = 0; p < n; ++p)
    if (d.mirror[p] != p) d.mirror[d.mirror[p]] = p;
  for (const auto& g : side.instantons) {
    const int x = side.find(g.from), y = side.find(g.to);
    if (d.mirror[x] == x && d.mirror[y] == y) continue;
    d.data.instantons.push_back(
        {d.data.points[d.mirror[x]].id, d.data.points[d.mirror[y]].id, g.sign, g.transport});
  }
  validate(d.data);
  return d;
}

void validate(const Z2Complex& c) {
  validate(c.complex);
  const MetricComplex& e = c.complex;
  if (static_cast<int>(c.involution.size()) != e.length()) fail(ErrorKind::Dimension, "one involution block per degree");
  for (int q = 0; q < e.length(); ++q) {
    const Mat& g = c.involution[q];
    if (g.rows() != e.dims[q] || g.cols() != e.dims[q]) fail(ErrorKind::Dimension, "involution block shape");
    const Mat id = Mat::Identity(e.dims[q], e.dims[q]);
    if (max_abs(g * g - id) > 1e-10) fail(ErrorKind::Data, "involution does not square to the identity");
    if (max_abs(g.adjoint() * e.h[q] * g - e.h[q]) > 1e-10 * std::max(1.0, max_abs(e.h[q])))
      fail(ErrorKind::Data, "involution is not an isometry");
    if (q + 1 < e.length() &&
        max_abs(c.involution[q + 1] * e.v[q] - e.v[q] * g) > 1e-10 * std::max(1.0, max_abs(e.v[q])))
      fail(ErrorKind::Data, "involution does not commute with the differential");
  }
}

DoubledComplex doubled_complex(const Doubled& d) {
  DoubledComplex dc;
  dc.ts = thom_smale(d.data, Variant::Full);
  const int r = d.data.rank;
  dc.z2.complex = dc.ts.complex;
  for (std::size_t q = 0; q < dc.ts.generators.size(); ++q) {
    const int dim = dc.ts.complex.dims[q];
    Mat g = Mat::Zero(dim, dim);
    for (int p : dc.ts.generators[q])
      g.block(dc.ts.offset(static_cast<int>(q), d.mirror[p]), dc.ts.offset(static_cast<int>(q), p), r, r) =
          Mat::Identity(r, r);
    dc.z2.involution.push_back(g);
  }
  validate(dc.z2);
  return dc;
}

Z2Split z2_split(const Z2Complex& c) {
  validate(c);
  const MetricComplex& e = c.complex;
  Z2Split s;
  for (int q = 0; q < e.length(); ++q) {
    const Mat id = Mat::Identity(e.dims[q], e.dims[q]);
    for (int sign : {1, -1}) {
      const Mat r = range_basis(0.5 * (id + static_cast<double>(sign) * c.involution[q]), 1e-9);
      Mat b = r;
      if (r.cols() > 0) b = r * inv_sqrt_hpd(r.adjoint() * e.h[q] * r);
      (sign > 0 ? s.basis_plus : s.basis_minus).push_back(b);
    }
  }
  for (auto [out, basis] : {std::pair{&s.plus, &s.basis_plus}, std::pair{&s.minus, &s.basis_minus}}) {
    for (int q = 0; q < e.length(); ++q) {
      const int d = static_cast<int>((*basis)[q].cols());
      out->dims.push_back(d);
      out->h.push_back(Mat::Identity(d, d));
      if (q + 1 < e.length()) out->v.push_back((*basis)[q + 1].adjoint() * e.h[q + 1] * e.v[q] * (*basis)[q]);
    }
  }
  return s;
}

std::vector<Mat> psi1_plus(const Doubled& d, const DoubledComplex& dc, const Z2Split& split, const ThomSmale& side) {
  const int r = d.data.rank;
  if (side.generators.size() != dc.ts.generators.size())
    fail(ErrorKind::Configuration, "psi1_plus: degree mismatch between the side and its double");
  std::vector<Mat> out;
  const double c = std::sqrt(0.5);
  for (std::size_t q = 0; q < side.generators.size(); ++q) {
    const int qi = static_cast<int>(q);
    Mat full = Mat::Zero(side.complex.dims[q], dc.ts.complex.dims[q]);
    for (int p : side.generators[q]) {
      if (p >= static_cast<int>(d.mirror.size())) fail(ErrorKind::Configuration, "psi1_plus: side point not in the double");
      const int o = side.offset(qi, p);
      full.block(o, dc.ts.offset(qi, p), r, r) += c * Mat::Identity(r, r);
      full.block(o, dc.ts.offset(qi, d.mirror[p]), r, r) += c * Mat::Identity(r, r);
    }
    out.push_back(full * split.basis_plus[q]);
  }
  return out;
}

std::vector<Mat> psi2_minus(const Doubled& d, const DoubledComplex& dc, const Z2Split& split,
                            const ThomSmale& side_rel) {
  const int r = d.data.rank;
  if (side_rel.generators.size() != dc.ts.generators.size())
    fail(ErrorKind::Configuration, "psi2_minus: degree mismatch between the side and its double");
  std::vector<Mat> out;
  const double c = std::sqrt(0.5);
  for (std::size_t q = 0; q < side_rel.generators.size(); ++q) {
    const int qi = static_cast<int>(q);
    Mat full = Mat::Zero(dc.ts.complex.dims[q], side_rel.complex.dims[q]);
    for (int p : side_rel.generators[q]) {
      if (d.mirror[p] == p) fail(ErrorKind::Configuration, "psi2_minus: relative generator on Y");
      const int o = side_rel.offset(qi, p);
      full.block(dc.ts.offset(qi, p), o, r, r) += c * Mat::Identity(r, r);
      full.block(dc.ts.offset(qi, d.mirror[p]), o, r, r) -= c * Mat::Identity(r, r);
    }
    out.push_back(split.basis_minus[q].adjoint() * dc.ts.complex.h[q] * full);
  }
  return out;
}

Mat de_rham_cocycles(const MorseData& m, const ThomSmale& ts, int degree, const Mat& sections) {
  if (degree < 0 || degree > 1) fail(ErrorKind::Unsupported, "de Rham pairing is implemented in degrees 0 and 1");
  const int r = m.rank;
  if (sections.rows() != r) fail(ErrorKind::Dimension, "sections must have one row per fiber dimension");
  const int k = static_cast<int>(sections.cols());
  const int n = static_cast<int>(m.points.size());
  int ref = -1;
  for (int p = 0; p < n && ref < 0; ++p)
    if (m.points[p].index == 0) ref = p;
  if (ref < 0) fail(ErrorKind::Construction, "de Rham pairing needs an index-0 point");
  // Propagate the flat section through the instanton graph.
  std::vector<Mat> value(n);
  std::vector<bool> known(n, false);
  value[ref] = sections;
  known[ref] = true;
  std::deque<int> queue{ref};
  auto assign = [&](int p, const Mat& v) {
    if (known[p]) {
      if (max_abs(value[p] - v) > 1e-9 * std::max(1.0, max_abs(v)))
        fail(ErrorKind::Data, "de Rham pairing: sections are not flat around '" + m.points[p].id + "'");
      return;
    }
    value[p] = v;
    known[p] = true;
    queue.push_back(p);
  };
  while (!queue.empty()) {
    const int p = queue.front();
    queue.pop_front();
    for (const Instanton& g : m.instantons) {
      const int x = m.find(g.from), y = m.find(g.to);
      if (m.points[x].index != 1) continue;
      const Mat t = transport_of(g, r);
      if (y == p) assign(x, t * value[p]);
      if (x == p) assign(y, t.partialPivLu().solve(value[p]));
    }
  }
  const auto& gens = ts.generators.at(degree);
  Mat out = Mat::Zero(static_cast<Eigen::Index>(gens.size()) * r, k);
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const int p = gens[i];
    if (!known[p]) fail(ErrorKind::Construction, "de Rham pairing: '" + m.points[p].id + "' is not connected to the reference point");
    double w = 1;
    if (degree == 1) {
      if (!(m.points[p].cell_length > 0))
        fail(ErrorKind::Configuration, "de Rham pairing: '" + m.points[p].id + "' has no cell length");
      w = m.points[p].orientation * m.points[p].cell_length;
    }
    out.middleRows(static_cast<Eigen::Index>(i) * r, r) = w * value[p];
  }
  return out;
}

}  // namespace torsion::morse
