#pragma once

#include <cstdint>
#include <vector>

#include "semijulia/cloud.hpp"
#include "semijulia/exec.hpp"
#include "semijulia/semigroup.hpp"

namespace semijulia {

// Chaos-game chains per cloud; fixed so output does not depend on threads.
inline constexpr int kChaosStreams = 16;
inline constexpr int kDefaultBurnIn = 100;

// A repelling fixed point of a short word, away from the exceptional
// candidates: a point of J(G) \ E(G).
struct SeedPoint {
  ExtComplex point;
  Word word;
  cplx multiplier;
};

SeedPoint find_seed_point(const GeneratorSystem& G, int max_word_length = 3);

// Random backward orbit of a seed in J(G) \ E(G); the closure of the orbit
// is J(G). Branches are uniform over distinct preimages.
PointCloud backward_orbit_cloud(const GeneratorSystem& G, std::size_t n_points, int burn_in, std::uint64_t seed,
                                Exec exec = Exec::Parallel);

// Samples of the fiber Julia set J_x: random base points pulled back through
// h_{x[n-1]}^{-1}, then ..., then h_{x[0]}^{-1} (uniform over distinct branches).
PointCloud fiber_julia_cloud(const GeneratorSystem& G, const Word& x, std::size_t n_points, std::uint64_t seed,
                             Exec exec = Exec::Parallel);

// As fiber_julia_cloud with branches weighted by multiplicity, so the
// empirical measure approximates the fiber equilibrium measure.
PointCloud equilibrium_sample(const GeneratorSystem& G, const Word& x, std::size_t n_points, std::uint64_t seed,
                              Exec exec = Exec::Parallel);

struct RasterResult {
  GridRaster raster;
  std::size_t outside = 0;      // finite points outside the box
  std::size_t at_infinity = 0;  // dropped points at infinity
};

RasterResult rasterize(const PointCloud& cloud, const Box& bbox, int nx, int ny, Exec exec = Exec::Parallel);

double hausdorff_distance(const PointCloud& a, const PointCloud& b, Exec exec = Exec::Parallel);

// Largest nearest-neighbour distance: every point has a neighbour within it.
double resolution_scale(const PointCloud& cloud, Exec exec = Exec::Parallel);

// Union over generators of all preimages of the given points.
std::vector<ExtComplex> generator_preimages(const GeneratorSystem& G, const std::vector<ExtComplex>& pts,
                                            Exec exec = Exec::Parallel);

// Smallest box (with relative margin) containing the finite points.
Box bounding_box(const PointCloud& cloud, double margin = 0.05);

}  // namespace semijulia
