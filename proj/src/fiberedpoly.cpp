#include "semijulia/fiberedpoly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "semijulia/analysis.hpp"
#include "semijulia/errors.hpp"

namespace semijulia {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Generator j as a plain polynomial (numerator over the constant denominator).
std::vector<Polynomial> fiber_polys(const GeneratorSystem& G) {
  std::vector<Polynomial> out;
  for (const auto& h : G.generators()) {
    if (!h.is_polynomial() || h.degree() < 2)
      throw std::invalid_argument("fibered polynomial: every generator must be a polynomial of degree >= 2");
    out.push_back(h.numerator() * (1.0 / h.denominator().coeffs()[0]));
  }
  return out;
}

// One step of the orbit in either plain or log-polar form. Large values
// are carried as (log|q|, arg q), with p(q) = a_d q^d (rev(1/q) / a_d).
struct OrbitState {
  cplx q;
  double log_mag = 0.0;
  double phase = 0.0;
  bool large = false;

  void step(const Polynomial& p) {
    const int d = p.degree();
    if (!large) {
      const double m = std::abs(q);
      if (m > 1e100 || d * std::log(m) > 650.0) {
        large = true;
        log_mag = std::log(m);
        phase = std::arg(q);
      } else {
        q = p.eval(q);
        return;
      }
    }
    const auto& a = p.coeffs();
    const cplx u = std::polar(std::exp(-log_mag), -phase);
    cplx c = 0.0;
    for (int k = 0; k <= d; ++k) c = c * u + a[k];  // sum_k a_k u^(d-k)
    c /= a[d];
    log_mag = std::log(std::abs(a[d])) + d * log_mag + std::log(std::abs(c));
    phase = std::remainder(std::arg(a[d]) + d * phase + std::arg(c), 2.0 * std::numbers::pi);
  }
  double log_abs() const { return large ? log_mag : std::log(std::abs(q)); }
  bool beyond(double R) const { return large || std::abs(q) > R; }
};

// Bound on |G_x - log|q_n| / d_n| once |q_n| = e^L: every later step changes
// log|q| by log|a_j| + log|1 + eta| with |eta| <= eps_j(|q|), and the
// changes are divided by d_n * d_min^k.
double tail_bound(const std::vector<Polynomial>& P, double L, double d_n) {
  int d_min = std::numeric_limits<int>::max();
  double worst = 0.0;
  for (const auto& p : P) {
    const int d = p.degree();
    const auto& a = p.coeffs();
    double eps = 0.0;
    for (int k = 0; k < d; ++k)
      if (a[k] != cplx{}) eps += std::exp(std::log(std::abs(a[k])) + (k - d) * L);
    eps /= std::abs(a[d]);
    if (eps >= 1.0) return kInf;
    worst = std::max(worst, std::abs(std::log(std::abs(a[d]))) - std::log1p(-eps));
    d_min = std::min(d_min, d);
  }
  return worst / ((d_min - 1) * d_n);
}

GreenEval green_eval(const std::vector<Polynomial>& P, const Word& x, cplx y, double R, int n_max) {
  GreenEval out;
  OrbitState s{y};
  int n = 0;
  while (!s.beyond(R)) {
    if (n >= n_max) {
      out.n_used = n;
      out.degree = 1.0;
      for (int i = 0; i < n; ++i) out.degree *= P[x[i]].degree();
      return out;
    }
    if (n >= x.length()) {
      std::ostringstream msg;
      msg << "green_value: prefix of " << x.length() << " symbols exhausted before escape from |y| <= " << R;
      throw PrefixExhausted(msg.str());
    }
    s.step(P[x[n]]);
    out.degree *= P[x[n]].degree();
    ++n;
  }
  out.escaped = true;
  // One more iterate at least; stop once two consecutive estimates agree and
  // the coefficient bound on the remaining tail is below the same level.
  double est = s.log_abs() / out.degree;
  while (n < x.length()) {
    s.step(P[x[n]]);
    out.degree *= P[x[n]].degree();
    ++n;
    const double next = s.log_abs() / out.degree;
    const bool agree = std::abs(next - est) < 1e-9 && tail_bound(P, s.log_abs(), out.degree) < 1e-9;
    est = next;
    if (agree) {
      out.converged = true;
      break;
    }
  }
  out.value = est;
  out.n_used = n;
  return out;
}

}  // namespace

double escape_radius(const GeneratorSystem& G) {
  const auto P = fiber_polys(G);
  double s = 0.0;
  for (const auto& p : P) {
    double t = 0.0;
    for (const cplx& a : p.coeffs()) t += std::abs(a);
    s = std::max(s, t);
  }
  double R = std::max(4.0, 2.0 * s);
  for (int doubling = 0; doubling < 60; ++doubling) {
    bool ok = true;
    for (const auto& p : P)
      for (int k = 0; k < 64 && ok; ++k) {
        const cplx y = std::polar(R, 2.0 * std::numbers::pi * k / 64.0);
        ok = std::abs(p.eval(y)) >= 2.0 * R;
      }
    if (ok) return R;
    R *= 2.0;
  }
  throw NumericError("escape_radius: no radius with |h(y)| >= 2|y| found");
}

GreenEval green_value(const GeneratorSystem& G, const Word& x, cplx y, double R, int n_max) {
  x.validate(G.size());
  if (n_max < 0) throw std::invalid_argument("green_value: n_max must be nonnegative");
  if (!(R > 0.0)) throw std::invalid_argument("green_value: escape radius must be positive");
  return green_eval(fiber_polys(G), x, y, R, n_max);
}

double green_functional_check(const GeneratorSystem& G, const Word& x, cplx y, double R) {
  if (x.length() < 2) throw std::invalid_argument("green_functional_check: prefix too short");
  const auto P = fiber_polys(G);
  x.validate(G.size());
  const double gx = green_eval(P, x, y, R, x.length()).value;
  const Word sx = x.shifted();
  const double gs = green_eval(P, sx, P[x[0]].eval(y), R, sx.length()).value;
  return std::abs(gs - P[x[0]].degree() * gx);
}

double green_asymptotic_bound(const GeneratorSystem& G, double r) {
  const auto P = fiber_polys(G);
  int d_min = std::numeric_limits<int>::max();
  double worst = 0.0;
  for (const auto& p : P) {
    const int d = p.degree();
    const double ad = std::abs(p.coeffs()[d]);
    double eps = 0.0;
    for (int k = 0; k < d; ++k) eps += std::abs(p.coeffs()[k]) * std::pow(r, k - d);
    eps /= ad;
    if (eps >= 1.0 || ad * std::pow(r, d - 1) * (1.0 - eps) < 1.0) return kInf;
    worst = std::max(worst, std::abs(std::log(ad)) - std::log1p(-eps));
    d_min = std::min(d_min, d);
  }
  return worst / (d_min - 1);
}

double green_circle_deviation(const GeneratorSystem& G, const Word& x, double rho, int n_angles) {
  if (!(rho > 0.0) || n_angles < 1) throw std::invalid_argument("green_circle_deviation: bad sampling");
  x.validate(G.size());
  const auto P = fiber_polys(G);
  const double R = escape_radius(G);
  double worst = 0.0;
  for (int k = 0; k < n_angles; ++k) {
    const cplx y = std::polar(rho, 2.0 * std::numbers::pi * k / n_angles);
    worst = std::max(worst, std::abs(green_eval(P, x, y, R, x.length()).value - std::log(rho)));
  }
  return worst;
}

AsymptoticCheck green_asymptotic_check(const GeneratorSystem& G, const Word& x, double r, int n_radii, int n_angles) {
  if (!(r > 0.0) || n_radii < 2 || n_angles < 1) throw std::invalid_argument("green_asymptotic_check: bad sampling");
  AsymptoticCheck out;
  out.bound = green_asymptotic_bound(G, r);
  for (int i = 0; i < n_radii; ++i) {
    const double rho = r * std::pow(10.0, static_cast<double>(i) / (n_radii - 1));
    out.max_deviation = std::max(out.max_deviation, green_circle_deviation(G, x, rho, n_angles));
  }
  return out;
}

cplx GreenField::cell_center(int ix, int iy) const {
  return {bbox.re_min + (ix + 0.5) * bbox.width() / nx, bbox.im_min + (iy + 0.5) * bbox.height() / ny};
}

std::optional<double> GreenField::sample(cplx y) const {
  const double fx = (y.real() - bbox.re_min) / (bbox.width() / nx) - 0.5;
  const double fy = (y.imag() - bbox.im_min) / (bbox.height() / ny) - 0.5;
  if (!(fx >= 0.0 && fy >= 0.0 && fx <= nx - 1 && fy <= ny - 1)) return std::nullopt;
  const int ix = std::min(static_cast<int>(fx), nx - 2), iy = std::min(static_cast<int>(fy), ny - 2);
  const double tx = fx - ix, ty = fy - iy;
  return (1 - tx) * (1 - ty) * at(ix, iy) + tx * (1 - ty) * at(ix + 1, iy) + (1 - tx) * ty * at(ix, iy + 1) +
         tx * ty * at(ix + 1, iy + 1);
}

std::optional<cplx> GreenField::gradient(cplx y) const {
  const double hx = bbox.width() / nx, hy = bbox.height() / ny;
  const auto e = sample(y + cplx(hx, 0)), w = sample(y - cplx(hx, 0));
  const auto n = sample(y + cplx(0, hy)), s = sample(y - cplx(0, hy));
  if (!e || !w || !n || !s) return std::nullopt;
  return cplx((*e - *w) / (2 * hx), (*n - *s) / (2 * hy));
}

BasinResult basin_mask(const GeneratorSystem& G, const Word& x, const Box& bbox, int nx, int ny, double R, int n_max,
                       Exec exec) {
  x.validate(G.size());
  if (n_max < 1 || n_max > x.length())
    throw std::invalid_argument("basin_mask: n_max must be between 1 and the prefix length");
  const auto P = fiber_polys(G);
  BasinResult out{GridRaster(bbox, nx, ny), GridRaster(bbox, nx, ny), GreenField{}};
  GreenField& f = out.field;
  f.prefix = x;
  f.bbox = bbox;
  f.nx = nx;
  f.ny = ny;
  f.escape_radius = R;
  f.max_iters = n_max;
  f.values.assign(static_cast<std::size_t>(nx) * ny, 0.0);
  for_each_index(exec, ny, [&](std::int64_t iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const auto g = green_eval(P, x, out.mask.cell_center(ix, static_cast<int>(iy)), R, n_max);
      if (!g.escaped) continue;
      f.values[out.mask.index(ix, static_cast<int>(iy))] = g.value;
      out.mask.set(ix, static_cast<int>(iy));
    }
  });
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      if (!out.mask.at(ix, iy)) continue;
      const bool edge = (ix > 0 && !out.mask.at(ix - 1, iy)) || (ix + 1 < nx && !out.mask.at(ix + 1, iy)) ||
                        (iy > 0 && !out.mask.at(ix, iy - 1)) || (iy + 1 < ny && !out.mask.at(ix, iy + 1));
      if (edge) out.boundary.set(ix, iy);
    }
  return out;
}

double green_stop_level(const GreenField& field) {
  std::vector<double> layer;
  double smallest = kInf;
  auto zero = [&](int ix, int iy) { return ix >= 0 && iy >= 0 && ix < field.nx && iy < field.ny && field.at(ix, iy) == 0.0; };
  for (int iy = 0; iy < field.ny; ++iy)
    for (int ix = 0; ix < field.nx; ++ix) {
      const double v = field.at(ix, iy);
      if (v <= 0.0) continue;
      smallest = std::min(smallest, v);
      if (zero(ix - 1, iy) || zero(ix + 1, iy) || zero(ix, iy - 1) || zero(ix, iy + 1)) layer.push_back(v);
    }
  if (layer.empty()) return smallest == kInf ? 0.0 : 2.0 * smallest;
  auto mid = layer.begin() + layer.size() / 2;
  std::nth_element(layer.begin(), mid, layer.end());
  return 2.0 * *mid;
}

GreenLine green_line(const GreenField& field, cplx y0, double step, std::optional<double> g_stop) {
  if (!(step > 0.0)) throw std::invalid_argument("green_line: step must be positive");
  const auto g0 = field.sample(y0);
  if (!g0) throw std::invalid_argument("green_line: start point outside the field");
  if (!(*g0 > 0.0)) throw std::invalid_argument("green_line: start point is not in the escaping region");

  GreenLine line;
  line.start = y0;
  line.g_stop = g_stop ? *g_stop : green_stop_level(field);
  line.vertices.push_back(y0);
  line.g_values.push_back(*g0);
  const double h = step * std::min(field.bbox.width() / field.nx, field.bbox.height() / field.ny);
  const long max_steps = 8L * (field.nx + field.ny) * static_cast<long>(std::ceil(1.0 / step));

  cplx y = y0, heading = 0.0;
  double g = *g0;
  auto try_move = [&](cplx dir, double len) -> bool {
    const auto v = field.sample(y + len * dir);
    if (!v || !(*v < g)) return false;
    y += len * dir;
    g = *v;
    heading = dir;
    return true;
  };
  while (g >= line.g_stop) {
    if (static_cast<long>(line.vertices.size()) > max_steps) {
      line.stagnated = true;
      break;
    }
    const auto grad = field.gradient(y);
    if (!grad) {
      line.left_field = true;
      break;
    }
    bool moved = false;
    if (std::abs(*grad) >= 1e-12) {
      const cplx dir = -*grad / std::abs(*grad);
      for (double len = h; !moved && len >= h / 16.0; len *= 0.5) moved = try_move(dir, len);
    }
    if (!moved && heading != cplx{}) {
      // Stalled at a critical point of G: turn left consistently.
      moved = try_move(heading * cplx(0.0, 1.0), h);
      if (moved) ++line.deflections;
    }
    if (!moved) {
      line.stagnated = true;
      break;
    }
    line.vertices.push_back(y);
    line.g_values.push_back(g);
  }
  line.terminal_estimate = line.vertices.back();
  return line;
}

namespace {

// First vertex whose shrunken carrot disk meets a non-escaping cell, or -1.
int carrot_failure(const GridRaster& mask, const std::vector<double>& dist_blocked, const GreenLine& line, double c) {
  const double dx = mask.dx(), dy = mask.dy();
  const double slack = 2.0 * std::max(dx, dy);
  const cplx y = line.terminal_estimate;
  for (std::size_t k = 0; k + 1 < line.vertices.size(); ++k) {
    const cplx z = line.vertices[k];
    const double rho = std::abs(y - z) / c - slack;
    if (rho <= 0.0) continue;
    int ix, iy;
    double lower = 0.0, upper = kInf;
    if (mask.locate(z, ix, iy)) {
      const double off = std::abs(z - mask.cell_center(ix, iy));
      lower = dist_blocked[mask.index(ix, iy)] - off;
      upper = dist_blocked[mask.index(ix, iy)] + off;
    } else {
      lower = 0.0;  // outside the box: scan
    }
    if (rho < lower) continue;
    if (rho >= upper) return static_cast<int>(k);
    // Ambiguous: scan the cells whose centres fall in the disk.
    const int x0 = std::max(0, static_cast<int>(std::floor((z.real() - rho - mask.bbox.re_min) / dx - 0.5)));
    const int x1 = std::min(mask.nx - 1, static_cast<int>(std::ceil((z.real() + rho - mask.bbox.re_min) / dx - 0.5)));
    const int y0 = std::max(0, static_cast<int>(std::floor((z.imag() - rho - mask.bbox.im_min) / dy - 0.5)));
    const int y1 = std::min(mask.ny - 1, static_cast<int>(std::ceil((z.imag() + rho - mask.bbox.im_min) / dy - 0.5)));
    for (int jy = y0; jy <= y1; ++jy)
      for (int jx = x0; jx <= x1; ++jx)
        if (!mask.at(jx, jy) && std::abs(mask.cell_center(jx, jy) - z) <= rho) return static_cast<int>(k);
  }
  return -1;
}

}  // namespace

JohnReport john_carrot_test(const GridRaster& mask, const std::vector<GreenLine>& lines, double c, Exec exec) {
  if (!(c >= 1.0)) throw std::invalid_argument("john_carrot_test: c must be at least 1");
  GridRaster blocked(mask.bbox, mask.nx, mask.ny);
  for (std::size_t i = 0; i < mask.occupancy.size(); ++i) blocked.occupancy[i] = mask.occupancy[i] ? 0 : 1;
  const auto dist = distance_to_occupied(blocked, exec);

  auto failures_at = [&](double cc) {
    std::vector<int> f(lines.size());
    for_each_index(exec, static_cast<std::int64_t>(lines.size()),
                   [&](std::int64_t i) { f[i] = carrot_failure(mask, dist, lines[i], cc); });
    return f;
  };
  auto passes = [&](double cc) {
    const auto f = failures_at(cc);
    return std::all_of(f.begin(), f.end(), [](int k) { return k < 0; });
  };

  JohnReport rep;
  rep.tested_points = static_cast<int>(lines.size());
  rep.c = c;
  const auto f = failures_at(c);
  for (std::size_t i = 0; i < lines.size(); ++i)
    if (f[i] >= 0 && rep.failures.size() < 64) rep.failures.push_back({lines[i].terminal_estimate, lines[i].vertices[f[i]]});
  rep.passes = std::all_of(f.begin(), f.end(), [](int k) { return k < 0; });

  if (passes(1.0)) {
    rep.c_estimate = 1.0;
  } else if (!passes(64.0)) {
    rep.c_estimate = 64.0;
    rep.non_john = true;
  } else {
    double lo = 1.0, hi = 64.0;
    while (hi - lo > 1e-3 * hi) {
      const double mid = 0.5 * (lo + hi);
      (passes(mid) ? hi : lo) = mid;
    }
    rep.c_estimate = hi;
  }
  std::ostringstream prov;
  prov << "carrot test on a " << mask.nx << "x" << mask.ny << " escaping mask with " << lines.size()
       << " lines, 2-cell slack, centre infinity represented by the line starts; the uniform separation of J_x from "
          "critical points in A_x is checked on sampled prefixes only";
  rep.provenance = prov.str();
  return rep;
}

}  // namespace semijulia
