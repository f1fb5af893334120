#include "torsion/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "torsion/errors.hpp"

namespace torsion::io {

namespace {

[[noreturn]] void schema(const std::string& where, const std::string& what) {
  fail(ErrorKind::Schema, (where.empty() ? std::string("/") : where) + ": " + what);
}

void only_keys(const Json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) schema(where, "expected an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, _] : j.items())
    if (!allowed.count(k)) schema(where + "/" + k, "unknown key");
}

const Json& need(const Json& j, const std::string& where, const char* key) {
  if (!j.contains(key)) schema(where + "/" + key, "missing");
  return j.at(key);
}

const Json& array_at(const Json& j, const std::string& where) {
  if (!j.is_array()) schema(where, "expected an array");
  return j;
}

int int_of(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) schema(where, "expected an integer");
  return j.get<int>();
}

double number_of(const Json& j, const std::string& where) {
  if (!j.is_number()) schema(where, "expected a number");
  return j.get<double>();
}

std::string string_of(const Json& j, const std::string& where) {
  if (!j.is_string()) schema(where, "expected a string");
  return j.get<std::string>();
}

std::vector<int> ints_of(const Json& j, const std::string& where) {
  std::vector<int> out;
  const Json& a = array_at(j, where);
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(int_of(a[i], where + "/" + std::to_string(i)));
  return out;
}

std::vector<Mat> matrices_of(const Json& j, const std::string& where) {
  std::vector<Mat> out;
  const Json& a = array_at(j, where);
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(matrix_from_json(a[i], where + "/" + std::to_string(i)));
  return out;
}

Json matrices_to_json(const std::vector<Mat>& ms) {
  Json a = Json::array();
  for (const Mat& m : ms) a.push_back(to_json(m));
  return a;
}

Json entry_to_json(cplx z) {
  if (z.imag() == 0) return z.real();
  return Json::array({z.real(), z.imag()});
}

const char* region_name(morse::Region r) {
  switch (r) {
    case morse::Region::Z1: return "Z1";
    case morse::Region::Z2: return "Z2";
    case morse::Region::Y: return "Y";
  }
  return "?";
}

const char* bc_name(analytic::Bc b) { return b == analytic::Bc::Abs ? "abs" : "rel"; }

analytic::Bc bc_of(const Json& j, const std::string& where) {
  const std::string s = string_of(j, where);
  if (s == "abs") return analytic::Bc::Abs;
  if (s == "rel") return analytic::Bc::Rel;
  schema(where, "expected \"abs\" or \"rel\"");
}

}  // namespace

Json to_json(const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(entry_to_json(m(i, k)));
    rows.push_back(row);
  }
  return rows;
}

Mat matrix_from_json(const Json& j, const std::string& where) {
  const Json& rows = array_at(j, where);
  if (rows.empty()) return Mat(0, 0);
  const std::size_t cols = array_at(rows[0], where + "/0").size();
  Mat m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string wi = where + "/" + std::to_string(i);
    const Json& row = array_at(rows[i], wi);
    if (row.size() != cols) schema(wi, "ragged matrix row");
    for (std::size_t k = 0; k < cols; ++k) {
      const std::string wk = wi + "/" + std::to_string(k);
      const Json& x = row[k];
      if (x.is_number()) {
        m(i, k) = x.get<double>();
      } else if (x.is_array() && x.size() == 2 && x[0].is_number() && x[1].is_number()) {
        m(i, k) = cplx(x[0].get<double>(), x[1].get<double>());
      } else {
        schema(wk, "expected a number or [re, im]");
      }
    }
  }
  return m;
}

Json to_json(const MetricComplex& e) {
  Json j;
  j["dims"] = e.dims;
  j["v"] = matrices_to_json(e.v);
  j["h"] = matrices_to_json(e.h);
  Json base;
  if (const auto* g = std::get_if<FormalGerm>(&e.base)) {
    base["kind"] = "formal";
    base["generators"] = g->algebra.generators();
    base["truncation"] = g->algebra.truncation();
    Json dh = Json::array();
    for (const auto& per_degree : g->dh) dh.push_back(matrices_to_json(per_degree));
    base["dh"] = dh;
  } else if (const auto* c = std::get_if<CircleFamily>(&e.base)) {
    base["kind"] = "circle";
    base["grid"] = c->algebra.grid();
    base["circumference"] = c->algebra.circumference();
    Json terms = Json::array();
    for (const auto& per_degree : c->terms) {
      Json ts = Json::array();
      for (const TrigTerm& t : per_degree) {
        Json tj;
        tj["k"] = t.k;
        tj["cos"] = to_json(t.cos_part);
        tj["sin"] = to_json(t.sin_part);
        ts.push_back(tj);
      }
      terms.push_back(ts);
    }
    base["terms"] = terms;
    base["holonomy"] = matrices_to_json(c->holonomy);
  } else {
    base["kind"] = "point";
  }
  j["base"] = base;
  return j;
}

MetricComplex complex_from_json(const Json& j) {
  only_keys(j, "", {"dims", "v", "h", "base"});
  MetricComplex e;
  e.dims = ints_of(need(j, "", "dims"), "/dims");
  for (std::size_t i = 0; i < e.dims.size(); ++i)
    if (e.dims[i] < 0) schema("/dims/" + std::to_string(i), "negative dimension");
  const int k = e.length();
  if (k == 0) schema("/dims", "a complex needs at least one degree");
  e.v = matrices_of(need(j, "", "v"), "/v");
  if (static_cast<int>(e.v.size()) != k - 1) schema("/v", "expected one matrix per consecutive pair of degrees");
  for (int i = 0; i + 1 < k; ++i)
    if (e.v[i].size() == 0) e.v[i] = Mat::Zero(e.dims[i + 1], e.dims[i]);
  if (j.contains("h")) {
    e.h = matrices_of(j.at("h"), "/h");
    if (static_cast<int>(e.h.size()) != k) schema("/h", "expected one matrix per degree");
  } else {
    for (int d : e.dims) e.h.push_back(Mat::Identity(d, d));
  }
  if (j.contains("base")) {
    const Json& b = j.at("base");
    const std::string kind = string_of(need(b, "/base", "kind"), "/base/kind");
    if (kind == "point") {
      only_keys(b, "/base", {"kind"});
    } else if (kind == "formal") {
      only_keys(b, "/base", {"kind", "generators", "truncation", "dh"});
      FormalGerm g;
      const int n = int_of(need(b, "/base", "generators"), "/base/generators");
      const int t = b.contains("truncation") ? int_of(b.at("truncation"), "/base/truncation") : -1;
      if (n < 0 || n > 16) schema("/base/generators", "expected 0..16 generators");
      g.algebra = forms::FormAlgebra::formal(n, t);
      const Json& dh = array_at(need(b, "/base", "dh"), "/base/dh");
      for (std::size_t i = 0; i < dh.size(); ++i) g.dh.push_back(matrices_of(dh[i], "/base/dh/" + std::to_string(i)));
      e.base = g;
    } else if (kind == "circle") {
      only_keys(b, "/base", {"kind", "grid", "circumference", "terms", "holonomy"});
      CircleFamily c;
      const int grid = int_of(need(b, "/base", "grid"), "/base/grid");
      if (grid < 4 || (grid & (grid - 1)) != 0) schema("/base/grid", "expected a power of two >= 4");
      const double len = number_of(need(b, "/base", "circumference"), "/base/circumference");
      if (!(len > 0)) schema("/base/circumference", "expected a positive number");
      c.algebra = forms::FormAlgebra::circle(grid, len);
      const Json& terms = array_at(need(b, "/base", "terms"), "/base/terms");
      for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string wi = "/base/terms/" + std::to_string(i);
        c.terms.emplace_back();
        const Json& ts = array_at(terms[i], wi);
        for (std::size_t m = 0; m < ts.size(); ++m) {
          const std::string wm = wi + "/" + std::to_string(m);
          only_keys(ts[m], wm, {"k", "cos", "sin"});
          TrigTerm t;
          t.k = int_of(need(ts[m], wm, "k"), wm + "/k");
          t.cos_part = matrix_from_json(need(ts[m], wm, "cos"), wm + "/cos");
          t.sin_part = matrix_from_json(need(ts[m], wm, "sin"), wm + "/sin");
          c.terms.back().push_back(t);
        }
      }
      if (b.contains("holonomy")) c.holonomy = matrices_of(b.at("holonomy"), "/base/holonomy");
      e.base = c;
    } else {
      schema("/base/kind", "expected point, formal or circle");
    }
  }
  validate(e);
  return e;
}

Json to_json(const morse::MorseData& m) {
  Json j;
  j["rank"] = m.rank;
  Json pts = Json::array();
  for (const auto& p : m.points) {
    Json pj;
    pj["id"] = p.id;
    pj["index"] = p.index;
    pj["on_boundary"] = p.on_boundary;
    pj["region"] = region_name(p.region);
    if (p.cell_length != 0) pj["cell_length"] = p.cell_length;
    if (p.orientation != 1) pj["orientation"] = p.orientation;
    pts.push_back(pj);
  }
  j["points"] = pts;
  Json ins = Json::array();
  for (const auto& g : m.instantons) {
    Json gj;
    gj["from"] = g.from;
    gj["to"] = g.to;
    gj["sign"] = g.sign;
    if (g.transport.size() != 0) gj["transport"] = to_json(g.transport);
    ins.push_back(gj);
  }
  j["instantons"] = ins;
  return j;
}

morse::MorseData morse_from_json(const Json& j) {
  only_keys(j, "", {"rank", "points", "instantons"});
  morse::MorseData m;
  m.rank = int_of(need(j, "", "rank"), "/rank");
  if (m.rank < 1) schema("/rank", "expected a rank >= 1");
  const Json& pts = array_at(need(j, "", "points"), "/points");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::string w = "/points/" + std::to_string(i);
    only_keys(pts[i], w, {"id", "index", "on_boundary", "region", "cell_length", "orientation"});
    morse::CriticalPoint p;
    p.id = string_of(need(pts[i], w, "id"), w + "/id");
    p.index = int_of(need(pts[i], w, "index"), w + "/index");
    const Json& ob = need(pts[i], w, "on_boundary");
    if (!ob.is_boolean()) schema(w + "/on_boundary", "expected a boolean");
    p.on_boundary = ob.get<bool>();
    if (pts[i].contains("region")) {
      const std::string r = string_of(pts[i].at("region"), w + "/region");
      if (r == "Z1") p.region = morse::Region::Z1;
      else if (r == "Z2") p.region = morse::Region::Z2;
      else if (r == "Y") p.region = morse::Region::Y;
      else schema(w + "/region", "expected Z1, Z2 or Y");
    } else {
      p.region = p.on_boundary ? morse::Region::Y : morse::Region::Z1;
    }
    if (pts[i].contains("cell_length")) p.cell_length = number_of(pts[i].at("cell_length"), w + "/cell_length");
    if (pts[i].contains("orientation")) {
      p.orientation = int_of(pts[i].at("orientation"), w + "/orientation");
      if (p.orientation != 1 && p.orientation != -1) schema(w + "/orientation", "expected +1 or -1");
    }
    m.points.push_back(p);
  }
  const Json& ins = array_at(need(j, "", "instantons"), "/instantons");
  for (std::size_t i = 0; i < ins.size(); ++i) {
    const std::string w = "/instantons/" + std::to_string(i);
    only_keys(ins[i], w, {"from", "to", "sign", "transport"});
    morse::Instanton g;
    g.from = string_of(need(ins[i], w, "from"), w + "/from");
    g.to = string_of(need(ins[i], w, "to"), w + "/to");
    g.sign = int_of(need(ins[i], w, "sign"), w + "/sign");
    if (ins[i].contains("transport")) g.transport = matrix_from_json(ins[i].at("transport"), w + "/transport");
    m.instantons.push_back(g);
  }
  morse::validate(m);
  return m;
}

Json to_json(const spectral::DoubleComplexData& dc) {
  Json j;
  j["dims"] = dc.dims;
  for (const char* key : {"h", "d", "v"}) {
    const auto& blocks = key[0] == 'h' ? dc.h : key[0] == 'd' ? dc.d : dc.v;
    Json a = Json::array();
    for (const auto& col : blocks) a.push_back(matrices_to_json(col));
    j[key] = a;
  }
  return j;
}

spectral::DoubleComplexData double_from_json(const Json& j) {
  only_keys(j, "", {"dims", "h", "d", "v"});
  const Json& dj = array_at(need(j, "", "dims"), "/dims");
  std::vector<std::vector<int>> dims;
  for (std::size_t p = 0; p < dj.size(); ++p) dims.push_back(ints_of(dj[p], "/dims/" + std::to_string(p)));
  if (dims.empty()) schema("/dims", "a double complex needs at least one column");
  for (std::size_t p = 0; p < dims.size(); ++p) {
    if (dims[p].size() != dims[0].size()) schema("/dims/" + std::to_string(p), "columns must have the same length");
    for (int d : dims[p])
      if (d < 0) schema("/dims/" + std::to_string(p), "negative dimension");
  }
  spectral::DoubleComplexData dc = spectral::make_double_complex(dims);
  for (const char* key : {"h", "d", "v"}) {
    if (!j.contains(key)) continue;
    auto& blocks = key[0] == 'h' ? dc.h : key[0] == 'd' ? dc.d : dc.v;
    const std::string w = std::string("/") + key;
    const Json& a = array_at(j.at(key), w);
    if (a.size() != blocks.size()) schema(w, "expected one list per column");
    for (std::size_t p = 0; p < a.size(); ++p) {
      const std::vector<Mat> ms = matrices_of(a[p], w + "/" + std::to_string(p));
      if (ms.size() != blocks[p].size()) schema(w + "/" + std::to_string(p), "wrong number of blocks");
      for (std::size_t q = 0; q < ms.size(); ++q)
        if (ms[q].size() != 0 || blocks[p][q].size() == 0) blocks[p][q] = ms[q];
    }
  }
  spectral::validate(dc);
  return dc;
}

Json to_json(const analytic::ModelGeometry& g) {
  Json j;
  if (g.kind == analytic::ModelGeometry::Kind::Circle) {
    j["kind"] = "circle";
    j["L"] = g.length;
    j["holonomy"] = to_json(g.holonomy);
  } else {
    j["kind"] = "interval";
    j["L"] = g.length;
    if (g.left == g.right) j["bc"] = bc_name(g.left);
    else j["bc"] = Json::array({bc_name(g.left), bc_name(g.right)});
    j["rank"] = g.interval_rank;
  }
  return j;
}

analytic::ModelGeometry geometry_from_json(const Json& j) {
  if (!j.is_object()) schema("", "expected an object");
  const std::string kind = string_of(need(j, "", "kind"), "/kind");
  const double len = number_of(need(j, "", "L"), "/L");
  analytic::ModelGeometry g;
  if (kind == "circle") {
    only_keys(j, "", {"kind", "L", "holonomy"});
    Mat u = j.contains("holonomy") ? matrix_from_json(j.at("holonomy"), "/holonomy") : Mat(Mat::Identity(1, 1));
    g = analytic::ModelGeometry::circle(len, u);
  } else if (kind == "interval") {
    only_keys(j, "", {"kind", "L", "bc", "rank"});
    const int rank = j.contains("rank") ? int_of(j.at("rank"), "/rank") : 1;
    const Json& bc = need(j, "", "bc");
    if (bc.is_array()) {
      if (bc.size() != 2) schema("/bc", "expected [left, right]");
      g = analytic::ModelGeometry::interval(len, bc_of(bc[0], "/bc/0"), bc_of(bc[1], "/bc/1"), rank);
    } else {
      g = analytic::ModelGeometry::interval(len, bc_of(bc, "/bc"), rank);
    }
  } else {
    schema("/kind", "expected circle or interval");
  }
  analytic::validate(g);
  return g;
}

Json to_json(const glue::GluingScenario& sc) {
  Json j;
  if (sc.kind == glue::GluingScenario::Kind::Circle) {
    Json c;
    c["L"] = sc.length;
    c["holonomy"] = to_json(sc.holonomy.size() ? sc.holonomy : Mat(Mat::Identity(sc.rank, sc.rank)));
    j["circle"] = c;
  } else {
    Json c;
    c["L"] = sc.length;
    j["interval"] = c;
  }
  j["split"] = sc.split;
  j["rank"] = sc.rank;
  return j;
}

glue::GluingScenario scenario_from_json(const Json& j) {
  only_keys(j, "", {"circle", "interval", "split", "rank"});
  const double split = number_of(need(j, "", "split"), "/split");
  glue::GluingScenario sc;
  if (j.contains("circle") == j.contains("interval")) schema("", "expected exactly one of circle or interval");
  if (j.contains("circle")) {
    const Json& c = j.at("circle");
    only_keys(c, "/circle", {"L", "holonomy"});
    const double len = number_of(need(c, "/circle", "L"), "/circle/L");
    int rank = j.contains("rank") ? int_of(j.at("rank"), "/rank") : 1;
    Mat u = c.contains("holonomy") ? matrix_from_json(c.at("holonomy"), "/circle/holonomy")
                                   : Mat(Mat::Identity(rank, rank));
    if (u.rows() != rank || u.cols() != rank) schema("/circle/holonomy", "expected a rank x rank matrix");
    sc = glue::GluingScenario::circle(len, split, u);
  } else {
    const Json& c = j.at("interval");
    only_keys(c, "/interval", {"L"});
    const int rank = j.contains("rank") ? int_of(j.at("rank"), "/rank") : 1;
    sc = glue::GluingScenario::interval(number_of(need(c, "/interval", "L"), "/interval/L"), split, rank);
  }
  glue::validate(sc);
  return sc;
}

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::Schema, std::string("JSON syntax error: ") + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Configuration, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace torsion::io
