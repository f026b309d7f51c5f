#include "semijulia/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "semijulia/errors.hpp"
#include "semijulia/julia.hpp"

namespace semijulia {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

DimensionReport box_dimension(const std::vector<GridRaster>& raster_series) {
  if (raster_series.size() < 4) throw std::invalid_argument("box_dimension: need at least 4 resolutions");
  std::vector<std::pair<double, std::uint64_t>> pts;
  for (const auto& r : raster_series) {
    if (r.nx <= 0 || r.ny <= 0) throw std::invalid_argument("box_dimension: empty raster");
    pts.emplace_back(std::max(r.dx(), r.dy()), r.count());
  }
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (!(pts[i].first < pts[i - 1].first)) throw std::invalid_argument("box_dimension: repeated scale");
  if (pts.front().first / pts.back().first < 8.0 * (1.0 - 1e-12))
    throw std::invalid_argument("box_dimension: scales must span at least 3 octaves");

  DimensionReport rep;
  for (const auto& [s, c] : pts) {
    rep.scales.push_back(s);
    rep.counts.push_back(c);
  }
  const bool any_zero = std::find(rep.counts.begin(), rep.counts.end(), 0u) != rep.counts.end();
  const bool all_equal = std::adjacent_find(rep.counts.begin(), rep.counts.end(), std::not_equal_to<>()) == rep.counts.end();
  if (any_zero || all_equal) {
    rep.degenerate = true;
    rep.box_dim = 0.0;
    return rep;
  }

  const double n = static_cast<double>(pts.size());
  double mx = 0, my = 0;
  std::vector<double> xs, ys;
  for (const auto& [s, c] : pts) {
    xs.push_back(-std::log(s));
    ys.push_back(std::log(static_cast<double>(c)));
    mx += xs.back();
    my += ys.back();
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (my + slope * (xs[i] - mx));
    ss += e * e;
  }
  rep.fit_residual = std::sqrt(ss / n);
  rep.box_dim = std::clamp(slope, 0.0, 2.0);
  return rep;
}

std::vector<GridRaster> dyadic_rasters(const PointCloud& cloud, const Box& bbox, int coarsest, int levels, Exec exec) {
  std::vector<GridRaster> out;
  for (int k = 0; k < levels; ++k) {
    const int n = coarsest << k;
    out.push_back(rasterize(cloud, bbox, n, n, exec).raster);
  }
  return out;
}

namespace {

// Lower envelope of parabolas h^2 (p - q)^2 + f(q) along one line
// (Felzenszwalb-Huttenlocher); entries of f may be +inf.
void edt_line(const double* f, double* d, int n, std::ptrdiff_t stride, double h, std::vector<int>& v,
              std::vector<double>& z) {
  v.resize(n);
  z.resize(n + 1);
  const double h2 = h * h;
  int k = -1;
  for (int q = 0; q < n; ++q) {
    const double fq = f[q * stride];
    if (fq == kInf) continue;
    while (k >= 0) {
      const int p = v[k];
      const double s = ((fq + h2 * q * q) - (f[p * stride] + h2 * static_cast<double>(p) * p)) / (2.0 * h2 * (q - p));
      if (s <= z[k]) {
        --k;
      } else {
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kInf;
        break;
      }
    }
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -kInf;
      z[1] = kInf;
    }
  }
  if (k < 0) {
    for (int q = 0; q < n; ++q) d[q * stride] = kInf;
    return;
  }
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[j + 1] < q) ++j;
    const double t = static_cast<double>(q - v[j]);
    d[q * stride] = h2 * t * t + f[v[j] * stride];
  }
}

}  // namespace

std::vector<double> distance_to_occupied(const GridRaster& raster, Exec exec) {
  const int nx = raster.nx, ny = raster.ny;
  std::vector<double> f(static_cast<std::size_t>(nx) * ny), g(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = raster.occupancy[i] ? 0.0 : kInf;
  for_each_index(exec, ny, [&](std::int64_t iy) {
    std::vector<int> v;
    std::vector<double> z;
    edt_line(&f[iy * nx], &g[iy * nx], nx, 1, raster.dx(), v, z);
  });
  for_each_index(exec, nx, [&](std::int64_t ix) {
    std::vector<int> v;
    std::vector<double> z;
    edt_line(&g[ix], &f[ix], ny, nx, raster.dy(), v, z);
  });
  for (double& x : f) x = std::sqrt(x);
  return f;
}

PorosityReport porosity_estimate(const GridRaster& raster, const std::vector<double>& radii, int n_centers, Exec exec) {
  if (std::max(raster.nx, raster.ny) < 1024)
    throw std::invalid_argument("porosity_estimate: raster needs at least 1024 cells on its longest side");
  if (radii.empty() || n_centers <= 0) throw std::invalid_argument("porosity_estimate: no radii or centres");
  const double cell = std::max(raster.dx(), raster.dy());
  for (double r : radii)
    if (!(r >= 8.0 * cell)) {
      std::ostringstream msg;
      msg << "porosity_estimate: radius " << r << " is below 8 cells (" << 8.0 * cell << ")";
      throw std::invalid_argument(msg.str());
    }

  const auto dist = distance_to_occupied(raster, exec);
  const double dx = raster.dx(), dy = raster.dy();

  PorosityReport rep;
  rep.radii = radii;
  rep.k_by_radius.assign(radii.size(), kInf);
  for (std::size_t ri = 0; ri < radii.size(); ++ri) {
    const double r = radii[ri];
    const int rx = static_cast<int>(std::ceil(r / dx)), ry = static_cast<int>(std::ceil(r / dy));
    std::vector<std::size_t> eligible;
    for (int iy = ry; iy < raster.ny - ry; ++iy)
      for (int ix = rx; ix < raster.nx - rx; ++ix)
        if (raster.at(ix, iy)) eligible.push_back(raster.index(ix, iy));
    if (eligible.empty()) throw std::invalid_argument("porosity_estimate: no occupied cell at distance r from the edge");
    const std::size_t m = std::min<std::size_t>(eligible.size(), static_cast<std::size_t>(n_centers));
    std::vector<double> k(m);
    for_each_index(exec, static_cast<std::int64_t>(m), [&](std::int64_t c) {
      const std::size_t idx = eligible[c * eligible.size() / m];
      const int cx = static_cast<int>(idx % raster.nx), cy = static_cast<int>(idx / raster.nx);
      double best = 0.0;
      for (int oy = -ry; oy <= ry; ++oy)
        for (int ox = -rx; ox <= rx; ++ox) {
          const double off = std::hypot(ox * dx, oy * dy);
          if (off >= r) continue;
          const double e = std::min(dist[raster.index(cx + ox, cy + oy)], r - off);
          best = std::max(best, e);
        }
      k[c] = best / r;
    });
    rep.k_by_radius[ri] = *std::min_element(k.begin(), k.end());
    rep.centers_used = std::max(rep.centers_used, m);
    if (rep.k_by_radius[ri] * r < cell) rep.non_porous = true;
  }
  rep.k_estimate = *std::min_element(rep.k_by_radius.begin(), rep.k_by_radius.end());
  return rep;
}

UPReport uniform_perfectness_estimate(const PointCloud& cloud, int n_centers, const std::vector<double>& radius_grid,
                                      const UPOptions& opts, Exec exec) {
  if (n_centers <= 0 || radius_grid.empty()) throw std::invalid_argument("uniform_perfectness_estimate: empty search");
  std::vector<double> grid = radius_grid;
  std::sort(grid.begin(), grid.end());
  if (!(grid.front() > 0.0)) throw std::invalid_argument("uniform_perfectness_estimate: radii must be positive");

  std::vector<cplx> pts;
  bool has_infinity = false;
  for (const auto& p : cloud.points) {
    if (p.is_infinity())
      has_infinity = true;
    else
      pts.push_back(p.value());
  }
  UPReport rep;
  if (pts.size() < 2) return rep;
  rep.gap_floor = opts.gap_floor ? *opts.gap_floor : opts.gap_factor * resolution_scale(cloud, exec);

  const std::size_t nc = std::min(pts.size(), static_cast<std::size_t>(n_centers));
  std::vector<cplx> centers(nc);
  for (std::size_t k = 0; k < nc; ++k) centers[k] = pts[k * pts.size() / nc];
  // Midpoint of each chosen point and its nearest other chosen point.
  for (std::size_t k = 0; k < nc && nc > 1; ++k) {
    double best = kInf;
    cplx q = centers[k];
    for (std::size_t l = 0; l < nc; ++l) {
      const double d = std::abs(centers[l] - centers[k]);
      if (l != k && d > 0.0 && d < best) {
        best = d;
        q = centers[l];
      }
    }
    centers.push_back(0.5 * (centers[k] + q));
  }
  rep.centers_used = centers.size();

  const std::size_t g = grid.size();
  const double cap = std::ldexp(1.0, opts.max_doublings);
  std::vector<std::vector<Annulus>> found(centers.size());
  std::vector<char> capped(centers.size(), 0);
  for_each_index(exec, static_cast<std::int64_t>(centers.size()), [&](std::int64_t ci) {
    const cplx c = centers[ci];
    // bucket b holds distances d with exactly b grid radii below d.
    std::vector<double> min_in_bucket(g + 1, kInf);
    std::size_t lowest_bucket = g + 1;
    for (const cplx& p : pts) {
      const double d = std::abs(p - c);
      const std::size_t b = static_cast<std::size_t>(std::lower_bound(grid.begin(), grid.end(), d) - grid.begin());
      min_in_bucket[b] = std::min(min_in_bucket[b], d);
      lowest_bucket = std::min(lowest_bucket, b);
    }
    double beyond = kInf;  // smallest distance above grid[i]
    std::vector<double> outer(g);
    for (std::size_t i = g; i-- > 0;) {
      beyond = std::min(beyond, min_in_bucket[i + 1]);
      outer[i] = beyond;
    }
    for (std::size_t i = 0; i < g; ++i) {
      if (lowest_bucket > i) continue;  // inner disk holds no point
      const double r = grid[i];
      double R = outer[i];
      if (R == kInf && !has_infinity) continue;  // nothing outside
      if (R > cap * r) {
        R = cap * r;
        capped[ci] = 1;
      }
      if (R - r <= rep.gap_floor) continue;
      found[ci].push_back({c, r, R, std::log(R / r) / (2.0 * std::numbers::pi)});
    }
  });

  std::vector<Annulus> all;
  for (std::size_t ci = 0; ci < found.size(); ++ci) {
    all.insert(all.end(), found[ci].begin(), found[ci].end());
    if (capped[ci] && !found[ci].empty()) rep.hit_search_cap = true;
  }
  rep.annuli_count = all.size();
  std::stable_sort(all.begin(), all.end(), [](const Annulus& a, const Annulus& b) { return a.modulus > b.modulus; });
  if (!all.empty()) rep.max_modulus = all.front().modulus;
  if (all.size() > opts.max_reported) all.resize(opts.max_reported);
  rep.annuli_found = std::move(all);
  return rep;
}

namespace {

struct TreeNode {
  ExtComplex y;
  double log_norm;  // log ||g_w'(y)||
  int depth;
};

struct TreeAcc {
  std::vector<std::vector<double>> sums;  // [level][s]
  std::vector<double> min_step;
  std::vector<std::vector<double>> tail;  // log norms of the last four levels
  std::uint64_t leaves = 0;
  std::uint64_t dropped = 0;

  TreeAcc(int L, std::size_t ns) : sums(L, std::vector<double>(ns, 0.0)), min_step(L, kInf), tail(4) {}
};

constexpr double kCriticalNorm = 1e-300;

// Children of a node: preimages under every generator, with the chain rule.
template <class Fn>
void expand(const GeneratorSystem& G, const TreeNode& node, TreeAcc& acc, Fn&& emit) {
  for (int j = 0; j < G.size(); ++j)
    for (const auto& pre : preimages(G[j], node.y)) {
      const double step = spherical_deriv_norm(G[j], pre.point);
      if (!(step >= kCriticalNorm)) {
        acc.dropped += static_cast<std::uint64_t>(pre.multiplicity);
        continue;
      }
      for (int m = 0; m < pre.multiplicity; ++m) emit(TreeNode{pre.point, node.log_norm + std::log(step), node.depth + 1}, step);
    }
}

void record(const TreeNode& n, double step, int L, const std::vector<double>& s_grid, TreeAcc& acc) {
  const int lvl = n.depth - 1;
  for (std::size_t i = 0; i < s_grid.size(); ++i) acc.sums[lvl][i] += std::exp(-s_grid[i] * n.log_norm);
  acc.min_step[lvl] = std::min(acc.min_step[lvl], step);
  if (n.depth >= L - 3) acc.tail[n.depth - (L - 3)].push_back(n.log_norm);
  ++acc.leaves;
}

double level_sum(const std::vector<double>& logs, double s) {
  double t = 0.0;
  for (double l : logs) t += std::exp(-s * l);
  return t;
}

}  // namespace

PoincareReport poincare_series(const GeneratorSystem& G, const ExtComplex& x, const std::vector<double>& s_grid, int L,
                               const PoincareOptions& opts, Exec exec) {
  if (L < 4) throw std::invalid_argument("poincare_series: L must be at least 4");
  if (s_grid.empty()) throw std::invalid_argument("poincare_series: empty s grid");
  if (near_any(x, exceptional_candidates(G), 1e-6))
    throw std::invalid_argument("poincare_series: base point is an exceptional candidate");
  const double branching = static_cast<double>(G.total_degree());
  double total = 0.0, level = 1.0;
  for (int n = 1; n <= L; ++n) total += (level *= branching);
  if (total > static_cast<double>(opts.leaf_budget)) {
    std::ostringstream msg;
    msg << "poincare_series: " << total << " tree nodes exceed the budget " << opts.leaf_budget;
    throw BudgetExceeded(msg.str());
  }

  PoincareReport rep;
  rep.base_point = x;
  rep.s_grid = s_grid;
  rep.max_degree = G.max_degree();

  // Breadth-first to a frontier of independent subtrees, then depth-first
  // inside each subtree. The split depends only on G and L, so both
  // execution paths sum in the same order.
  TreeAcc head(L, s_grid.size());
  std::vector<TreeNode> frontier{TreeNode{x, 0.0, 0}};
  while (frontier.front().depth < L && frontier.size() < 256) {
    std::vector<TreeNode> next;
    for (const auto& n : frontier)
      expand(G, n, head, [&](const TreeNode& c, double step) {
        record(c, step, L, s_grid, head);
        next.push_back(c);
      });
    frontier.swap(next);
    if (frontier.empty()) break;
  }

  std::vector<TreeAcc> parts(frontier.size(), TreeAcc(L, s_grid.size()));
  for_each_index(exec, static_cast<std::int64_t>(frontier.size()), [&](std::int64_t f) {
    TreeAcc& acc = parts[f];
    std::vector<TreeNode> stack{frontier[f]};
    while (!stack.empty()) {
      const TreeNode n = stack.back();
      stack.pop_back();
      if (n.depth >= L) continue;
      expand(G, n, acc, [&](const TreeNode& c, double step) {
        record(c, step, L, s_grid, acc);
        stack.push_back(c);
      });
    }
  });

  rep.level_sums = head.sums;
  rep.min_step_norm = head.min_step;
  rep.leaves = head.leaves;
  rep.dropped_leaves = head.dropped;
  std::vector<std::vector<double>> tail = head.tail;
  for (const auto& p : parts) {
    for (int l = 0; l < L; ++l) {
      for (std::size_t i = 0; i < s_grid.size(); ++i) rep.level_sums[l][i] += p.sums[l][i];
      rep.min_step_norm[l] = std::min(rep.min_step_norm[l], p.min_step[l]);
    }
    for (int t = 0; t < 4; ++t) tail[t].insert(tail[t].end(), p.tail[t].begin(), p.tail[t].end());
    rep.leaves += p.leaves;
    rep.dropped_leaves += p.dropped;
  }

  auto excess = [&](double s) {
    double r = 0.0;
    for (int t = 0; t < 3; ++t) r += level_sum(tail[t + 1], s) / level_sum(tail[t], s);
    return r / 3.0 - 1.0;
  };
  double lo = *std::min_element(s_grid.begin(), s_grid.end());
  double hi = *std::max_element(s_grid.begin(), s_grid.end());
  if (tail[0].empty()) {
    rep.s0_estimate = lo;
    return rep;
  }
  const double f_lo = excess(lo), f_hi = excess(hi);
  if (!(f_lo > 0.0)) {
    rep.s0_estimate = lo;
  } else if (!(f_hi < 0.0)) {
    rep.s0_estimate = hi;
  } else {
    rep.bracketed = true;
    while (hi - lo > 1e-3) {
      const double mid = 0.5 * (lo + hi);
      (excess(mid) > 0.0 ? lo : hi) = mid;
    }
    rep.s0_estimate = 0.5 * (lo + hi);
  }
  rep.s0_estimate = std::max(rep.s0_estimate, 0.0);
  return rep;
}

PoincareReport poincare_min(const GeneratorSystem& G, const std::vector<ExtComplex>& xs,
                            const std::vector<double>& s_grid, int L, const PoincareOptions& opts, Exec exec) {
  if (xs.empty()) throw std::invalid_argument("poincare_min: no base points");
  PoincareReport best = poincare_series(G, xs.front(), s_grid, L, opts, exec);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    auto r = poincare_series(G, xs[i], s_grid, L, opts, exec);
    if (r.s0_estimate < best.s0_estimate) best = std::move(r);
  }
  return best;
}

DimensionBound verify_dimension_bound(const DimensionReport& dim, const PoincareReport& poincare, double margin) {
  DimensionBound out;
  std::ostringstream msg;
  if (dim.degenerate || dim.fit_residual > 0.1) {
    out.withheld = true;
    msg << "unreliable fit (residual " << dim.fit_residual << (dim.degenerate ? ", degenerate" : "")
        << "); no verdict";
    out.diagnostic = msg.str();
    return out;
  }
  out.holds = dim.box_dim <= poincare.s0_estimate + margin;
  out.applicable = poincare.max_degree >= 2;
  msg << "box_dim " << dim.box_dim << (out.holds ? " <= " : " > ") << "s0 " << poincare.s0_estimate << " + " << margin
      << "; box dimension bounds Hausdorff dimension from above, so a failure is evidence against the pipeline and a "
         "pass is consistency, not proof";
  if (!out.applicable) msg << "; degree-one system: outside the theorem's hypotheses, compared with the same formula";
  if (!poincare.bracketed) msg << "; s0 not bracketed by the s grid";
  out.diagnostic = msg.str();
  return out;
}

}  // namespace semijulia
