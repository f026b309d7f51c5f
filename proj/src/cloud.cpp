#include "semijulia/cloud.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace semijulia {

GridRaster::GridRaster(Box b, int nx_, int ny_) : bbox(b), nx(nx_), ny(ny_) {
  if (nx < 8 || ny < 8) throw std::invalid_argument("GridRaster: resolution must be at least 8x8");
  if (b.degenerate()) throw std::invalid_argument("GridRaster: degenerate bounding box");
  occupancy.assign(static_cast<std::size_t>(nx) * ny, 0);
}

cplx GridRaster::cell_center(int ix, int iy) const {
  return {bbox.re_min + (ix + 0.5) * dx(), bbox.im_min + (iy + 0.5) * dy()};
}

bool GridRaster::locate(cplx z, int& ix, int& iy) const {
  if (!(z.real() >= bbox.re_min && z.real() <= bbox.re_max && z.imag() >= bbox.im_min &&
        z.imag() <= bbox.im_max))
    return false;
  ix = std::min(nx - 1, static_cast<int>((z.real() - bbox.re_min) / dx()));
  iy = std::min(ny - 1, static_cast<int>((z.imag() - bbox.im_min) / dy()));
  return true;
}

std::size_t GridRaster::count() const {
  return static_cast<std::size_t>(std::count(occupancy.begin(), occupancy.end(), std::uint8_t{1}));
}

}  // namespace semijulia
