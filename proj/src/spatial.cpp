#include "semijulia/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace semijulia {

namespace {

double dist3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  const double x = a[0] - b[0], y = a[1] - b[1], z = a[2] - b[2];
  return std::sqrt(x * x + y * y + z * z);
}

}  // namespace

SphereIndex::SphereIndex(const std::vector<ExtComplex>& points) {
  pts_.reserve(points.size());
  for (const auto& p : points) pts_.push_back(p.embed());
  order_.resize(pts_.size());
  std::iota(order_.begin(), order_.end(), 0u);
  if (!pts_.empty()) build(0, static_cast<std::uint32_t>(pts_.size()));
}

std::int32_t SphereIndex::build(std::uint32_t begin, std::uint32_t end) {
  constexpr std::uint32_t kLeaf = 8;
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back({begin, end, -1, -1, 0, 0.0});
  if (end - begin <= kLeaf) return id;
  Vec3 lo = pts_[order_[begin]], hi = lo;
  for (std::uint32_t s = begin; s < end; ++s)
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], pts_[order_[s]][a]);
      hi[a] = std::max(hi[a], pts_[order_[s]][a]);
    }
  int axis = 0;
  for (int a = 1; a < 3; ++a)
    if (hi[a] - lo[a] > hi[axis] - lo[axis]) axis = a;
  if (!(hi[axis] > lo[axis])) return id;  // all points coincide
  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     return pts_[a][axis] < pts_[b][axis] || (pts_[a][axis] == pts_[b][axis] && a < b);
                   });
  const double split = pts_[order_[mid]][axis];
  const std::int32_t l = build(begin, mid);
  const std::int32_t r = build(mid, end);
  nodes_[id].left = l;
  nodes_[id].right = r;
  nodes_[id].axis = axis;
  nodes_[id].split = split;
  return id;
}

SphereIndex::Hit SphereIndex::nearest(const ExtComplex& q, std::size_t exclude) const {
  return nearest(q.embed(), exclude);
}

SphereIndex::Hit SphereIndex::nearest(const Vec3& q, std::size_t exclude) const {
  Hit best;
  if (nodes_.empty()) return best;
  // Left subtree holds coordinates <= split, right subtree >= split. A
  // subtree is skipped only when it is strictly farther than the best hit,
  // so equal-distance points are all seen and the tie-break is exact.
  struct Item {
    std::int32_t node;
    double bound;
  };
  Item stack[128];
  int top = 0;
  stack[top++] = {0, 0.0};
  while (top > 0) {
    const Item it = stack[--top];
    if (it.bound > best.distance) continue;
    const Node& n = nodes_[it.node];
    if (n.left < 0) {
      for (std::uint32_t s = n.begin; s < n.end; ++s) {
        const std::size_t idx = order_[s];
        if (idx == exclude) continue;
        const double d = dist3(q, pts_[idx]);
        if (d < best.distance || (d == best.distance && idx < best.index)) best = {d, idx};
      }
      continue;
    }
    const double diff = q[n.axis] - n.split;
    const std::int32_t near = diff <= 0.0 ? n.left : n.right;
    const std::int32_t far = diff <= 0.0 ? n.right : n.left;
    stack[top++] = {far, std::max(it.bound, std::abs(diff))};
    stack[top++] = {near, it.bound};
  }
  return best;
}

double directed_hausdorff(const std::vector<ExtComplex>& a, const SphereIndex& b, Exec exec) {
  std::vector<double> d(a.size());
  for_each_index(exec, static_cast<std::int64_t>(a.size()),
                 [&](std::int64_t i) { d[i] = b.nearest(a[i]).distance; });
  double m = 0.0;
  for (double x : d) m = std::max(m, x);
  return m;
}

double hausdorff_distance(const std::vector<ExtComplex>& a, const std::vector<ExtComplex>& b, Exec exec) {
  if (a.empty() || b.empty()) throw std::invalid_argument("hausdorff_distance: empty input");
  const SphereIndex ia(a), ib(b);
  return std::max(directed_hausdorff(a, ib, exec), directed_hausdorff(b, ia, exec));
}

std::vector<double> nearest_neighbor_distances(const std::vector<ExtComplex>& pts, Exec exec) {
  const SphereIndex idx(pts);
  std::vector<double> d(pts.size());
  for_each_index(exec, static_cast<std::int64_t>(pts.size()),
                 [&](std::int64_t i) { d[i] = idx.nearest(pts[i], static_cast<std::size_t>(i)).distance; });
  return d;
}

}  // namespace semijulia
