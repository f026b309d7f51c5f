#include "semijulia/julia.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "semijulia/errors.hpp"
#include "semijulia/rng.hpp"
#include "semijulia/spatial.hpp"

namespace semijulia {

SeedPoint find_seed_point(const GeneratorSystem& G, int max_word_length) {
  const auto exceptional = exceptional_candidates(G);
  std::ostringstream scanned;
  for (int len = 1; len <= max_word_length; ++len) {
    std::uint64_t count = 1;
    for (int i = 0; i < len; ++i) count *= static_cast<std::uint64_t>(G.size());
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      const Word w = Word::from_index(G.size(), len, idx);
      scanned << " [";
      for (int i = 0; i < w.length(); ++i) scanned << (i ? "," : "") << w[i] + 1;
      scanned << "]";
      std::vector<FixedPointInfo> fps;
      try {
        fps = fixed_points(word_map(G, w));
      } catch (const std::invalid_argument&) {
        continue;  // identity word
      }
      for (const auto& f : fps) {
        if (f.kind != FixedPointClass::Repelling) continue;
        if (near_any(f.location, exceptional, 1e-6)) continue;
        return {f.location, w, f.multiplier};
      }
    }
  }
  throw NumericError("no repelling fixed point outside the exceptional candidates among words:" + scanned.str());
}

namespace {

enum class Branch { Uniform, Multiplicity };

ExtComplex pick_preimage(const RationalMap& h, const ExtComplex& z, StreamRng& rng, Branch mode) {
  const auto pre = preimages(h, z);
  if (mode == Branch::Uniform) return pre[rng.below(pre.size())].point;
  std::uint64_t r = rng.below(static_cast<std::uint64_t>(h.degree()));
  for (const auto& p : pre) {
    if (r < static_cast<std::uint64_t>(p.multiplicity)) return p.point;
    r -= p.multiplicity;
  }
  return pre.back().point;
}

std::string word_text(const Word& x) {
  std::string s;
  for (int i = 0; i < x.length(); ++i) s += (i ? "," : "") + std::to_string(x[i] + 1);
  return s;
}

PointCloud pullback_cloud(const GeneratorSystem& G, const Word& x, std::size_t n_points, std::uint64_t seed,
                          Exec exec, Branch mode) {
  x.validate(G.size());
  PointCloud out;
  out.seed = seed;
  out.provenance = std::string(mode == Branch::Uniform ? "fiber-julia" : "equilibrium") + " x=[" + word_text(x) + "]";
  if (n_points == 0) return out;
  if (x.empty()) throw std::invalid_argument("fiber cloud: empty prefix");

  // Base points avoid the exceptional candidates of the generators in x.
  std::set<int> used(x.symbols().begin(), x.symbols().end());
  std::vector<RationalMap> sub;
  for (int j : used) sub.push_back(G[j]);
  const auto exceptional = exceptional_candidates(GeneratorSystem(sub));

  out.points.assign(n_points, ExtComplex());
  for_each_index(exec, static_cast<std::int64_t>(n_points), [&](std::int64_t i) {
    StreamRng rng(seed, static_cast<std::uint64_t>(i));
    ExtComplex y;
    do {
      const double r = 2.0 * std::sqrt(rng.uniform());
      const double t = 2.0 * 3.141592653589793 * rng.uniform();
      y = ExtComplex(r * std::cos(t), r * std::sin(t));
    } while (near_any(y, exceptional, 1e-3));
    for (int k = x.length() - 1; k >= 0; --k) y = pick_preimage(G[x[k]], y, rng, mode);
    out.points[i] = y;
  });
  return out;
}

}  // namespace

PointCloud backward_orbit_cloud(const GeneratorSystem& G, std::size_t n_points, int burn_in, std::uint64_t seed,
                                Exec exec) {
  PointCloud out;
  out.seed = seed;
  out.provenance = "backward-orbit n=" + std::to_string(n_points) + " burn_in=" + std::to_string(burn_in);
  if (n_points == 0) return out;
  const SeedPoint start = find_seed_point(G);
  out.points.assign(n_points, ExtComplex());
  const std::size_t streams = std::min<std::size_t>(kChaosStreams, n_points);
  for_each_index(exec, static_cast<std::int64_t>(streams), [&](std::int64_t s) {
    const std::size_t us = static_cast<std::size_t>(s);
    const std::size_t begin = n_points * us / streams;
    const std::size_t end = n_points * (us + 1) / streams;
    StreamRng rng(seed, us);
    ExtComplex z = start.point;
    for (int k = 0; k < burn_in; ++k)
      z = pick_preimage(G[static_cast<int>(rng.below(G.size()))], z, rng, Branch::Uniform);
    for (std::size_t i = begin; i < end; ++i) {
      z = pick_preimage(G[static_cast<int>(rng.below(G.size()))], z, rng, Branch::Uniform);
      out.points[i] = z;
    }
  });
  return out;
}

PointCloud fiber_julia_cloud(const GeneratorSystem& G, const Word& x, std::size_t n_points, std::uint64_t seed,
                             Exec exec) {
  return pullback_cloud(G, x, n_points, seed, exec, Branch::Uniform);
}

PointCloud equilibrium_sample(const GeneratorSystem& G, const Word& x, std::size_t n_points, std::uint64_t seed,
                              Exec exec) {
  return pullback_cloud(G, x, n_points, seed, exec, Branch::Multiplicity);
}

RasterResult rasterize(const PointCloud& cloud, const Box& bbox, int nx, int ny, Exec exec) {
  RasterResult res{GridRaster(bbox, nx, ny)};
  const std::int64_t n = static_cast<std::int64_t>(cloud.size());
  // -1: outside, -2: infinity.
  std::vector<std::int64_t> cell(cloud.size());
  for_each_index(exec, n, [&](std::int64_t i) {
    const ExtComplex& p = cloud.points[i];
    if (p.is_infinity()) {
      cell[i] = -2;
      return;
    }
    int ix, iy;
    cell[i] = res.raster.locate(p.value(), ix, iy) ? static_cast<std::int64_t>(res.raster.index(ix, iy)) : -1;
  });
  for (std::int64_t c : cell) {
    if (c >= 0)
      res.raster.occupancy[static_cast<std::size_t>(c)] = 1;
    else if (c == -1)
      ++res.outside;
    else
      ++res.at_infinity;
  }
  return res;
}

double hausdorff_distance(const PointCloud& a, const PointCloud& b, Exec exec) {
  return hausdorff_distance(a.points, b.points, exec);
}

double resolution_scale(const PointCloud& cloud, Exec exec) {
  if (cloud.size() < 2) throw std::invalid_argument("resolution_scale: need at least two points");
  const auto d = nearest_neighbor_distances(cloud.points, exec);
  return *std::max_element(d.begin(), d.end());
}

std::vector<ExtComplex> generator_preimages(const GeneratorSystem& G, const std::vector<ExtComplex>& pts,
                                            Exec exec) {
  const int m = G.size();
  const int d = G.max_degree();
  // Fixed slots of size d per (point, generator); unused slots stay empty.
  std::vector<std::vector<ExtComplex>> slots(pts.size() * m);
  for_each_index(exec, static_cast<std::int64_t>(slots.size()), [&](std::int64_t s) {
    const auto& h = G[static_cast<int>(s % m)];
    for (const auto& p : preimages(h, pts[s / m])) slots[s].push_back(p.point);
  });
  std::vector<ExtComplex> out;
  out.reserve(pts.size() * m * d);
  for (const auto& s : slots) out.insert(out.end(), s.begin(), s.end());
  return out;
}

Box bounding_box(const PointCloud& cloud, double margin) {
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& p : cloud.points) {
    if (p.is_infinity()) continue;
    x0 = std::min(x0, p.re());
    x1 = std::max(x1, p.re());
    y0 = std::min(y0, p.im());
    y1 = std::max(y1, p.im());
  }
  if (!(x1 >= x0)) return Box{};
  const double half = 0.5 * std::max({x1 - x0, y1 - y0, 1e-9}) * (1.0 + margin);
  return Box::square(half, {0.5 * (x0 + x1), 0.5 * (y0 + y1)});
}

}  // namespace semijulia
