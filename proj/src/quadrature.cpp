#include "torsion/quadrature.hpp"

#include <array>
#include <queue>

#include "torsion/errors.hpp"

namespace torsion {

namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights at kXgk[1], [3], [5], [7].
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
  double a, b;
  int level;
  Vec value;
  double error;
  bool operator<(const Piece& o) const { return error < o.error; }
};

Piece gk15(const std::function<Vec(double)>& f, double a, double b, int level, int* evals) {
  const double c = 0.5 * (a + b), r = 0.5 * (b - a);
  Vec fc = f(c);
  Vec k = kWgk[7] * fc;
  Vec g = kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    Vec s = f(c - r * kXgk[i]) + f(c + r * kXgk[i]);
    k += kWgk[i] * s;
    if (i % 2 == 1) g += kWg[i / 2] * s;
  }
  *evals += 15;
  k *= r;
  g *= r;
  const double err = (k - g).size() ? (k - g).cwiseAbs().maxCoeff() : 0.0;
  return {a, b, level, k, err};
}

}  // namespace

QuadratureResult integrate(const std::function<Vec(double)>& f, double a, double b,
                           const QuadratureSpec& spec) {
  if (!(spec.abs_tol > 0)) fail(ErrorKind::Configuration, "quadrature tolerance must be positive");
  QuadratureResult res;
  std::priority_queue<Piece> open;  // subdividable pieces, largest error first
  std::vector<Piece> done;          // pieces at the depth limit
  Piece root = gk15(f, a, b, 0, &res.evaluations);
  double total = root.error;
  open.push(std::move(root));
  while (total > spec.abs_tol && !open.empty() &&
         static_cast<int>(open.size() + done.size()) < spec.max_intervals) {
    Piece p = open.top();
    open.pop();
    if (p.level >= spec.max_levels) {
      done.push_back(std::move(p));
      continue;
    }
    const double m = 0.5 * (p.a + p.b);
    Piece l = gk15(f, p.a, m, p.level + 1, &res.evaluations);
    Piece r = gk15(f, m, p.b, p.level + 1, &res.evaluations);
    total += l.error + r.error - p.error;
    open.push(std::move(l));
    open.push(std::move(r));
  }
  res.converged = total <= spec.abs_tol;
  res.error = 0;
  bool first = true;
  auto add = [&](const Piece& p) {
    if (first) {
      res.value = p.value;
      first = false;
    } else {
      res.value += p.value;
    }
    res.error += p.error;
  };
  while (!open.empty()) {
    add(open.top());
    open.pop();
  }
  for (const Piece& p : done) add(p);
  return res;
}

}  // namespace torsion
