#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "semijulia/sphere.hpp"

namespace semijulia {

// Finite sample of a Julia set. Same parameters and seed give the same list.
struct PointCloud {
  std::vector<ExtComplex> points;
  std::uint64_t seed = 0;
  std::string provenance;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

struct Box {
  double re_min = -2.0;
  double re_max = 2.0;
  double im_min = -2.0;
  double im_max = 2.0;

  double width() const { return re_max - re_min; }
  double height() const { return im_max - im_min; }
  bool degenerate() const { return !(re_max > re_min && im_max > im_min); }
  static Box square(double half, cplx center = 0.0) {
    return {center.real() - half, center.real() + half, center.imag() - half, center.imag() + half};
  }
};

// Boolean occupancy grid; cell (ix, iy) covers
// [re_min + ix*dx, re_min + (ix+1)*dx) x [im_min + iy*dy, im_min + (iy+1)*dy).
// Row-major storage, iy = 0 is the bottom row.
struct GridRaster {
  Box bbox;
  int nx = 0;
  int ny = 0;
  std::vector<std::uint8_t> occupancy;

  GridRaster() = default;
  GridRaster(Box b, int nx, int ny);

  double dx() const { return bbox.width() / nx; }
  double dy() const { return bbox.height() / ny; }
  std::size_t index(int ix, int iy) const { return static_cast<std::size_t>(iy) * nx + ix; }
  bool at(int ix, int iy) const { return occupancy[index(ix, iy)] != 0; }
  void set(int ix, int iy, bool v = true) { occupancy[index(ix, iy)] = v ? 1 : 0; }
  cplx cell_center(int ix, int iy) const;
  // Cell containing z, or false when z is outside the box (the closed
  // upper edges belong to the last row/column).
  bool locate(cplx z, int& ix, int& iy) const;
  std::size_t count() const;
};

}  // namespace semijulia
