#include "semijulia/checkers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "semijulia/errors.hpp"
#include "semijulia/spatial.hpp"

namespace semijulia {

// ---------------------------------------------------------------- regions

RegionSpec RegionSpec::disk(cplx center, double radius, Metric metric) {
  if (metric == Metric::Chordal) return chordal_disk(ExtComplex(center), radius);
  if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("RegionSpec: radius must be positive");
  RegionSpec r;
  r.kind_ = Kind::Disk;
  r.metric_ = Metric::Euclidean;
  r.center_ = ExtComplex(center);
  r.radius_ = radius;
  r.box_ = Box::square(radius, center);
  return r;
}

RegionSpec RegionSpec::chordal_disk(const ExtComplex& center, double radius) {
  if (!(radius > 0.0 && radius <= 2.0)) throw std::invalid_argument("RegionSpec: chordal radius must be in (0, 2]");
  RegionSpec r;
  r.kind_ = Kind::Disk;
  r.metric_ = Metric::Chordal;
  r.center_ = center;
  r.radius_ = radius;
  // Polar angle of the center seen from the point 0, and the cap half-angle.
  const double pi = std::acos(-1.0);
  const double alpha = center.is_infinity() ? pi : 2.0 * std::atan(center.abs());
  const double beta = 2.0 * std::asin(std::min(1.0, radius / 2.0));
  double a = alpha;
  cplx dir = 1.0;
  if (alpha + beta < pi) {
    if (!center.is_infinity() && center.abs() > 0.0) dir = center.value() / center.abs();
  } else if (alpha - beta > 0.0) {
    r.inverted_ = true;
    a = pi - alpha;
    if (!center.is_infinity() && center.abs() > 0.0) dir = std::conj(center.value()) / center.abs();
  } else {
    throw std::invalid_argument("RegionSpec: chordal disk contains both 0 and infinity");
  }
  // In the chosen chart the cap is a Euclidean disk symmetric about the ray
  // through the center; its diameter endpoints sit at angles a +- beta.
  const double t1 = std::tan(0.5 * (a + beta));
  const double t2 = std::tan(0.5 * (a - beta));
  const double half = 0.5 * (t1 - t2) * (1.0 + 1e-9);
  r.box_ = Box::square(half, dir * (0.5 * (t1 + t2)));
  return r;
}

RegionSpec RegionSpec::polygon(std::vector<cplx> vertices) {
  if (vertices.size() < 3) throw std::invalid_argument("RegionSpec: polygon needs at least 3 vertices");
  RegionSpec r;
  r.kind_ = Kind::Polygon;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const cplx& v : vertices) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::invalid_argument("RegionSpec: non-finite polygon vertex");
    x0 = std::min(x0, v.real());
    x1 = std::max(x1, v.real());
    y0 = std::min(y0, v.imag());
    y1 = std::max(y1, v.imag());
  }
  r.box_ = Box{x0, x1, y0, y1};
  if (r.box_.degenerate()) throw std::invalid_argument("RegionSpec: degenerate polygon");
  r.vertices_ = std::move(vertices);
  return r;
}

namespace {

double segment_distance(cplx p, cplx a, cplx b) {
  const cplx ab = b - a;
  const double len2 = std::norm(ab);
  double t = len2 > 0.0 ? std::real(std::conj(ab) * (p - a)) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

}  // namespace

bool RegionSpec::contains(const ExtComplex& z, double slack) const {
  if (kind_ == Kind::Disk) {
    if (metric_ == Metric::Chordal) return chordal_distance(z, center_) < radius_ * (1.0 + slack);
    if (z.is_infinity()) return false;
    return std::abs(z.value() - center_.value()) < radius_ * (1.0 + slack);
  }
  if (z.is_infinity()) return false;
  const cplx p = z.value();
  bool inside = false;
  double dist = INFINITY;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const cplx a = vertices_[i], b = vertices_[j];
    if ((a.imag() > p.imag()) != (b.imag() > p.imag())) {
      const double x = a.real() + (p.imag() - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag());
      if (p.real() < x) inside = !inside;
    }
    dist = std::min(dist, segment_distance(p, a, b));
  }
  const double scale = std::abs(slack) * std::max(box_.width(), box_.height());
  if (slack > 0.0) return inside || dist <= scale;
  if (slack < 0.0) return inside && dist > scale;
  return inside;
}

ExtComplex RegionSpec::from_chart(cplx w) const {
  if (!inverted_) return ExtComplex(w);
  if (w == cplx{}) return ExtComplex::infinity();
  return ExtComplex::from_complex(1.0 / w);
}

cplx RegionSpec::to_chart(const ExtComplex& z) const {
  if (!inverted_) {
    if (z.is_infinity()) throw std::domain_error("RegionSpec::to_chart: infinity in the plane chart");
    return z.value();
  }
  if (z.is_infinity()) return 0.0;
  if (z.value() == cplx{}) throw std::domain_error("RegionSpec::to_chart: zero in the inverted chart");
  return 1.0 / z.value();
}

std::string RegionSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (kind_ == Kind::Disk) {
    os << (metric_ == Metric::Chordal ? "chordal-disk(" : "disk(");
    if (center_.is_infinity())
      os << "inf";
    else
      os << center_.re() << "," << center_.im();
    os << ";" << radius_ << ")";
  } else {
    os << "polygon(";
    for (std::size_t i = 0; i < vertices_.size(); ++i)
      os << (i ? ";" : "") << vertices_[i].real() << "," << vertices_[i].imag();
    os << ")";
  }
  return os.str();
}

// -------------------------------------------------------------------- OSC

namespace {

constexpr double kOscSlack = 1e-12;
constexpr std::int64_t kOscBlock = 1 << 16;

cplx grid_point(const Box& b, int density, std::int64_t k) {
  const int i = static_cast<int>(k % density);
  const int j = static_cast<int>(k / density);
  return {b.re_min + (i + 0.5) * b.width() / density, b.im_min + (j + 0.5) * b.height() / density};
}

// Preimage of z under h outside U (with slack), if any.
std::optional<ExtComplex> escaping_preimage(const RationalMap& h, const ExtComplex& z, const RegionSpec& U) {
  for (const auto& p : preimages(h, z))
    if (!U.contains(p.point, kOscSlack)) return p.point;
  return std::nullopt;
}

// All generator pairs (i < j) that map w into U (with negative slack).
std::vector<std::pair<int, int>> overlapping_pairs(const GeneratorSystem& G, const ExtComplex& w,
                                                   const RegionSpec& U, std::vector<ExtComplex>& images) {
  std::vector<int> hit;
  images.assign(G.size(), ExtComplex());
  for (int j = 0; j < G.size(); ++j) {
    images[j] = G[j](w);
    if (U.contains(images[j], -kOscSlack)) hit.push_back(j);
  }
  std::vector<std::pair<int, int>> out;
  for (std::size_t a = 0; a < hit.size(); ++a)
    for (std::size_t b = a + 1; b < hit.size(); ++b) out.emplace_back(hit[a], hit[b]);
  return out;
}

void push_capped(std::vector<OscWitness>& v, const OscWitness& w, std::size_t cap) {
  if (v.size() >= cap) return;
  for (const auto& e : v)
    if (e.i == w.i && e.j == w.j && e.sample == w.sample) return;
  v.push_back(w);
}

}  // namespace

OscReport check_osc(const GeneratorSystem& G, const RegionSpec& U, int grid_density, const OscOptions& opts,
                    Exec exec) {
  if (grid_density < 2) throw std::invalid_argument("check_osc: grid_density must be >= 2");
  OscReport rep;

  // Prior witnesses are re-checked first.
  if (opts.prior) {
    for (const auto& w : opts.prior->containment_violations) {
      if (w.i >= G.size() || !U.contains(w.sample)) continue;
      if (auto p = escaping_preimage(G[w.i], w.sample, U)) {
        push_capped(rep.containment_violations, {w.i, -1, w.sample, *p}, opts.max_witnesses);
      }
    }
    std::vector<ExtComplex> images;
    for (const auto& w : opts.prior->disjointness_violations) {
      if (w.i >= G.size() || w.j >= G.size()) continue;
      for (const auto& [i, j] : overlapping_pairs(G, w.sample, U, images))
        if (i == w.i && j == w.j) push_capped(rep.disjointness_violations, {i, j, w.sample, images[i]}, opts.max_witnesses);
    }
  }

  const Box cbox = U.chart_box();
  const std::int64_t total = static_cast<std::int64_t>(grid_density) * grid_density;
  double x0 = cbox.re_min, x1 = cbox.re_max, y0 = cbox.im_min, y1 = cbox.im_max;

  // Containment.
  struct CSlot {
    bool inside = false;
    std::vector<OscWitness> bad;
    std::vector<cplx> chart_pre;
  };
  for (std::int64_t start = 0; start < total; start += kOscBlock) {
    const std::int64_t n = std::min(kOscBlock, total - start);
    std::vector<CSlot> slots(static_cast<std::size_t>(n));
    for_each_index(exec, n, [&](std::int64_t k) {
      CSlot& s = slots[k];
      const ExtComplex z = U.from_chart(grid_point(cbox, grid_density, start + k));
      if (!U.contains(z)) return;
      s.inside = true;
      for (int j = 0; j < G.size(); ++j) {
        for (const auto& p : preimages(G[j], z)) {
          if (!U.contains(p.point, kOscSlack)) {
            s.bad.push_back({j, -1, z, p.point});
            continue;
          }
          const bool unrepresentable =
              U.inverted() ? (!p.point.is_infinity() && p.point.value() == cplx{}) : p.point.is_infinity();
          if (!unrepresentable) s.chart_pre.push_back(U.to_chart(p.point));
        }
      }
    });
    for (const auto& s : slots) {
      if (!s.inside) continue;
      ++rep.samples_used;
      rep.containment_violation_count += s.bad.size();
      for (const auto& w : s.bad) push_capped(rep.containment_violations, w, opts.max_witnesses);
      for (const cplx& c : s.chart_pre) {
        x0 = std::min(x0, c.real());
        x1 = std::max(x1, c.real());
        y0 = std::min(y0, c.imag());
        y1 = std::max(y1, c.imag());
      }
    }
  }

  // Disjointness over a box enclosing U and the sampled preimages.
  if (G.size() > 1) {
    const Box dbox{x0, x1, y0, y1};
    for (std::int64_t start = 0; start < total; start += kOscBlock) {
      const std::int64_t n = std::min(kOscBlock, total - start);
      std::vector<std::vector<OscWitness>> slots(static_cast<std::size_t>(n));
      for_each_index(exec, n, [&](std::int64_t k) {
        const ExtComplex w = U.from_chart(grid_point(dbox, grid_density, start + k));
        std::vector<ExtComplex> images;
        for (const auto& [i, j] : overlapping_pairs(G, w, U, images)) slots[k].push_back({i, j, w, images[i]});
      });
      rep.samples_used += static_cast<std::size_t>(n);
      for (const auto& s : slots) {
        rep.disjointness_violation_count += s.size();
        for (const auto& w : s) push_capped(rep.disjointness_violations, w, opts.max_witnesses);
      }
    }
  }

  rep.holds = rep.containment_violations.empty() && rep.disjointness_violations.empty();
  return rep;
}

// ----------------------------------------------------------- hyperbolicity

std::string to_string(HyperbolicVerdict v) {
  switch (v) {
    case HyperbolicVerdict::HyperbolicEvidence: return "hyperbolic-evidence";
    case HyperbolicVerdict::NotHyperbolic: return "not-hyperbolic";
    case HyperbolicVerdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

HyperbolicityReport check_hyperbolic(const GeneratorSystem& G, int L, const PointCloud& julia, double threshold,
                                     Exec exec) {
  if (julia.empty()) throw std::invalid_argument("check_hyperbolic: empty Julia sample");
  if (!(threshold > 0.0)) throw std::invalid_argument("check_hyperbolic: threshold must be positive");
  HyperbolicityReport rep;
  rep.word_length_used = L;
  rep.threshold = threshold;
  const PointCloud pc = postcritical_sample(G, L);
  rep.postcritical_points = pc.size();
  double best = std::numeric_limits<double>::infinity();
  if (!pc.empty()) {
    const SphereIndex idx(julia.points);
    std::vector<double> d(pc.size());
    for_each_index(exec, static_cast<std::int64_t>(pc.size()),
                   [&](std::int64_t i) { d[i] = idx.nearest(pc.points[i]).distance; });
    for (double v : d) best = std::min(best, v);
  }
  rep.min_postcritical_julia_distance = best;
  if (best < threshold)
    rep.verdict = HyperbolicVerdict::NotHyperbolic;
  else if (best > 10.0 * threshold)
    rep.verdict = HyperbolicVerdict::HyperbolicEvidence;
  else
    rep.verdict = HyperbolicVerdict::Inconclusive;
  return rep;
}

// ------------------------------------------------------ semi-hyperbolicity

std::string to_string(SemiHypVerdict v) {
  switch (v) {
    case SemiHypVerdict::BoundedUpToL: return "bounded-up-to-L";
    case SemiHypVerdict::UnboundedTrend: return "unbounded-trend";
    case SemiHypVerdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

namespace {

struct WeightedPoint {
  ExtComplex p;
  int mult;
  int group;  // cluster of the image point for the shifted word
};

// Segment parameters k/16, k = 1..16, ordered from the middle out. The
// midpoint matters: for even maps the preimages come in pairs +-y whose
// segment passes through the critical point 0 exactly at t = 1/2.
constexpr int kSegmentOrder[16] = {8, 7, 9, 6, 10, 5, 11, 4, 12, 3, 13, 2, 14, 1, 15, 16};

ExtComplex apply_word(const GeneratorSystem& G, bool poly, const std::vector<int>& symbols, ExtComplex y) {
  if (poly && !y.is_infinity()) {
    // Plain Horner in the plane; huge values are infinity at chordal scale.
    cplx v = y.value();
    for (int s : symbols) {
      v = G[s].numerator().eval(v) / G[s].denominator()[0];
      if (!(std::norm(v) < 1e300)) return ExtComplex::infinity();
    }
    return ExtComplex(v);
  }
  for (int s : symbols) y = G[s](y);
  return y;
}

// Spherical derivative norm of the word map at y (chain rule over the steps).
double word_sph_deriv(const GeneratorSystem& G, const std::vector<int>& symbols, ExtComplex y) {
  double d = 1.0;
  for (int s : symbols) {
    d *= spherical_deriv_norm(G[s], y);
    y = G[s](y);
  }
  return d;
}

constexpr int kRefineDepth = 24;

bool segment_joins(const GeneratorSystem& G, bool poly, const std::vector<int>& symbols, const ExtComplex& a,
                   const ExtComplex& b, const ExtComplex& z, double radius) {
  // Plane chart unless an endpoint is infinity or both lie outside the unit disk.
  const bool inverted = a.is_infinity() || b.is_infinity() || (a.abs() > 1.0 && b.abs() > 1.0);
  cplx ua, ub;
  if (inverted) {
    if ((!a.is_infinity() && a.value() == cplx{}) || (!b.is_infinity() && b.value() == cplx{})) return false;
    ua = a.is_infinity() ? cplx{} : 1.0 / a.value();
    ub = b.is_infinity() ? cplx{} : 1.0 / b.value();
  } else {
    ua = a.value();
    ub = b.value();
  }
  auto at = [&](double t) {
    const cplx u = ua + (ub - ua) * t;
    if (!inverted) return ExtComplex(u);
    return u == cplx{} ? ExtComplex::infinity() : ExtComplex::from_complex(1.0 / u);
  };
  auto inside = [&](const ExtComplex& y) { return chordal_distance(apply_word(G, poly, symbols, y), z) < radius; };
  for (int i : kSegmentOrder)
    if (!inside(at(i / 16.0))) return false;

  // Continuity refinement: a fast-oscillating word map can leave the ball
  // between samples. Bisect every interval until the first-order image step
  // |g'| * |step| is below radius / 2 at both ends.
  struct Interval {
    double t0, t1, d0, d1;
    int depth;
  };
  std::vector<double> deriv(17);
  for (int k = 0; k <= 16; ++k) deriv[k] = word_sph_deriv(G, symbols, at(k / 16.0));
  std::vector<Interval> stack;
  for (int k = 0; k < 16; ++k) stack.push_back({k / 16.0, (k + 1) / 16.0, deriv[k], deriv[k + 1], 0});
  while (!stack.empty()) {
    const Interval iv = stack.back();
    stack.pop_back();
    const double step = chordal_distance(at(iv.t0), at(iv.t1));
    if (std::max(iv.d0, iv.d1) * step <= 0.5 * radius || iv.depth >= kRefineDepth) continue;
    const double tm = 0.5 * (iv.t0 + iv.t1);
    const ExtComplex ym = at(tm);
    if (!inside(ym)) return false;
    const double dm = word_sph_deriv(G, symbols, ym);
    stack.push_back({iv.t0, tm, iv.d0, dm, iv.depth + 1});
    stack.push_back({tm, iv.t1, dm, iv.d1, iv.depth + 1});
  }
  return true;
}

// Clusters one level of the pullback tree in place (pts[i].group becomes the
// cluster id) and returns the largest cluster multiplicity. Two preimages
// can share a component only if their images under the first-applied map
// do, so pairs are tested within a parent cluster only.
int cluster_level(const GeneratorSystem& G, bool poly, const std::vector<int>& symbols,
                  std::vector<WeightedPoint>& pts, const ExtComplex& z, double delta, std::uint64_t& pair_tests) {
  const std::size_t n = pts.size();
  std::vector<std::size_t> parent(n), order(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pts[a].group < pts[b].group; });
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t lo = 0; lo < n;) {
    std::size_t hi = lo;
    while (hi < n && pts[order[hi]].group == pts[order[lo]].group) ++hi;
    for (std::size_t a = lo; a < hi; ++a)
      for (std::size_t b = a + 1; b < hi; ++b) {
        const std::size_t ra = find(order[a]), rb = find(order[b]);
        if (ra == rb) continue;
        ++pair_tests;
        if (segment_joins(G, poly, symbols, pts[order[a]].p, pts[order[b]].p, z, 2.0 * delta)) parent[ra] = rb;
      }
    lo = hi;
  }
  std::vector<int> mass(n, 0);
  int best = 0;
  for (std::size_t a = 0; a < n; ++a) best = std::max(best, mass[find(a)] += pts[a].mult);
  for (std::size_t a = 0; a < n; ++a) pts[a].group = static_cast<int>(find(a));
  return best;
}

std::vector<WeightedPoint> pull_back(const RationalMap& h, const std::vector<WeightedPoint>& pts) {
  std::vector<WeightedPoint> out;
  for (const auto& q : pts)
    for (const auto& p : preimages(h, q.p)) out.push_back({p.point, q.mult * p.multiplicity, q.group});
  return out;
}

}  // namespace

int max_cluster_multiplicity(const GeneratorSystem& G, const Word& w, const ExtComplex& z, double delta) {
  w.validate(G.size());
  if (w.empty()) return 1;
  const bool poly = G.all_polynomial();
  std::vector<WeightedPoint> cur{{z, 1, 0}};
  std::uint64_t tests = 0;
  int best = 1;
  for (int k = w.length() - 1; k >= 0; --k) {
    cur = pull_back(G[w[k]], cur);
    const std::vector<int> suffix(w.symbols().begin() + k, w.symbols().end());
    best = cluster_level(G, poly, suffix, cur, z, delta, tests);
  }
  return best;
}

SemiHypReport check_semihyperbolic(const GeneratorSystem& G, double delta, int L, const PointCloud& samples,
                                   int n_cap, const SemiHypOptions& opts, Exec exec) {
  if (!(delta > 0.0 && delta < 0.5)) throw std::invalid_argument("check_semihyperbolic: delta must be in (0, 0.5)");
  if (L < 1) throw std::invalid_argument("check_semihyperbolic: L must be >= 1");
  if (samples.empty()) throw std::invalid_argument("check_semihyperbolic: no samples");
  SemiHypReport rep;
  rep.delta = delta;
  rep.max_word_length = L;
  rep.n_cap = n_cap;
  rep.samples_used = samples.size();

  struct Node {
    std::vector<int> symbols;  // word, first-applied symbol first
    std::vector<WeightedPoint> pts;
    double degree_product;
  };
  struct SampleResult {
    std::vector<int> hist;  // index n-1, complete levels only
    bool exhausted = false;
  };
  const int m = G.size();
  const bool poly = G.all_polynomial();
  std::vector<SampleResult> results(samples.size());
  for_each_index(exec, static_cast<std::int64_t>(samples.size()), [&](std::int64_t s) {
    const ExtComplex z = samples.points[s];
    SampleResult& res = results[s];
    std::uint64_t tests = 0;
    std::vector<Node> level{{{}, {{z, 1, 0}}, 1.0}};
    for (int n = 1; n <= L; ++n) {
      std::vector<Node> next;
      next.reserve(level.size() * m);
      int level_max = 0;
      for (const Node& node : level) {
        for (int j = 0; j < m; ++j) {
          Node child;
          // Pulling back through h_j makes j the last symbol applied.
          child.symbols.reserve(node.symbols.size() + 1);
          child.symbols.push_back(j);
          child.symbols.insert(child.symbols.end(), node.symbols.begin(), node.symbols.end());
          child.degree_product = node.degree_product * G[j].degree();
          child.pts = pull_back(G[j], node.pts);
          const int c = cluster_level(G, poly, child.symbols, child.pts, z, delta, tests);
          if (c > child.degree_product) throw NumericError("check_semihyperbolic: cluster exceeds degree product");
          level_max = std::max(level_max, c);
          if (tests > opts.pair_budget) {
            res.exhausted = true;
            return;
          }
          next.push_back(std::move(child));
        }
      }
      res.hist.push_back(level_max);
      level.swap(next);
    }
  });

  std::size_t complete = static_cast<std::size_t>(L);
  for (const auto& r : results) {
    rep.budget_exhausted = rep.budget_exhausted || r.exhausted;
    complete = std::min(complete, r.hist.size());
  }
  for (std::size_t n = 0; n < complete; ++n) {
    int v = 0;
    for (const auto& r : results) v = std::max(v, r.hist[n]);
    rep.degree_histogram[static_cast<int>(n) + 1] = v;
    rep.max_branch_degree_observed = std::max(rep.max_branch_degree_observed, v);
  }
  for (const auto& r : results)
    for (int v : r.hist) rep.max_branch_degree_observed = std::max(rep.max_branch_degree_observed, v);

  if (rep.budget_exhausted || complete == 0) {
    rep.verdict = SemiHypVerdict::Inconclusive;
    return rep;
  }
  std::vector<int> tail;
  for (std::size_t n = complete >= 3 ? complete - 3 : 0; n < complete; ++n)
    tail.push_back(rep.degree_histogram[static_cast<int>(n) + 1]);
  bool nonincreasing = true, increasing = tail.size() >= 2;
  for (std::size_t i = 1; i < tail.size(); ++i) {
    nonincreasing = nonincreasing && tail[i] <= tail[i - 1];
    increasing = increasing && tail[i] > tail[i - 1];
  }
  if (increasing)
    rep.verdict = SemiHypVerdict::UnboundedTrend;
  else if (rep.max_branch_degree_observed <= n_cap && nonincreasing)
    rep.verdict = SemiHypVerdict::BoundedUpToL;
  else
    rep.verdict = SemiHypVerdict::Inconclusive;
  return rep;
}

}  // namespace semijulia
