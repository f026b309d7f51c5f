#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

#include "semijulia/exec.hpp"
#include "semijulia/sphere.hpp"

namespace semijulia {

// Exact nearest-neighbour queries in the chordal metric. Points are embedded
// on the unit sphere (chordal distance = Euclidean distance in R^3) and held
// in a k-d tree. Ties go to the smallest stored index.
class SphereIndex {
 public:
  explicit SphereIndex(const std::vector<ExtComplex>& points);

  struct Hit {
    double distance = std::numeric_limits<double>::infinity();
    std::size_t index = static_cast<std::size_t>(-1);
  };

  // Nearest stored point, optionally skipping one stored index.
  Hit nearest(const ExtComplex& q, std::size_t exclude = static_cast<std::size_t>(-1)) const;
  Hit nearest(const std::array<double, 3>& q, std::size_t exclude = static_cast<std::size_t>(-1)) const;
  std::size_t size() const { return pts_.size(); }

 private:
  using Vec3 = std::array<double, 3>;
  struct Node {
    std::uint32_t begin = 0, end = 0;  // slots in order_
    std::int32_t left = -1, right = -1;
    int axis = 0;
    double split = 0.0;
  };
  std::int32_t build(std::uint32_t begin, std::uint32_t end);

  std::vector<Vec3> pts_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
};

// Symmetric Hausdorff distance (chordal) between two nonempty finite sets.
double hausdorff_distance(const std::vector<ExtComplex>& a, const std::vector<ExtComplex>& b,
                          Exec exec = Exec::Parallel);

// max_{x in a} min_{y in b} d(x, y)
double directed_hausdorff(const std::vector<ExtComplex>& a, const SphereIndex& b, Exec exec = Exec::Parallel);

// Chordal distance from each point to its nearest other point.
std::vector<double> nearest_neighbor_distances(const std::vector<ExtComplex>& pts, Exec exec = Exec::Parallel);

}  // namespace semijulia
