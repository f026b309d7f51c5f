#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "semijulia/cloud.hpp"
#include "semijulia/exec.hpp"
#include "semijulia/semigroup.hpp"

namespace semijulia {

struct DimensionReport {
  std::vector<double> scales;  // cell size, strictly decreasing
  std::vector<std::uint64_t> counts;
  double box_dim = 0.0;
  double fit_residual = 0.0;  // RMS residual of log(count) about the fit
  bool degenerate = false;    // all counts equal (or empty): slope not meaningful
};

// Least-squares slope of log(count) against log(1/scale). Needs at least 4
// rasters spanning at least 3 octaves; order does not matter.
DimensionReport box_dimension(const std::vector<GridRaster>& raster_series);

// Rasters of the cloud at n, 2n, 4n, ... cells per side over one box.
std::vector<GridRaster> dyadic_rasters(const PointCloud& cloud, const Box& bbox, int coarsest, int levels,
                                       Exec exec = Exec::Parallel);

// Euclidean distance (world units) from every cell centre to the nearest
// occupied cell centre; +inf everywhere if nothing is occupied.
std::vector<double> distance_to_occupied(const GridRaster& raster, Exec exec = Exec::Parallel);

struct PorosityReport {
  std::vector<double> radii;
  std::vector<double> k_by_radius;
  double k_estimate = 0.0;
  std::size_t centers_used = 0;
  // No empty ball larger than one cell was found at some radius.
  bool non_porous = false;
};

// For sampled occupied cells x and each r: the largest empty ball inside
// B(x, r) has radius max_y min(dist(y, J), r - |y - x|); k(x, r) is that
// radius over r. Centres closer than r to the raster edge are skipped.
PorosityReport porosity_estimate(const GridRaster& raster, const std::vector<double>& radii, int n_centers,
                                 Exec exec = Exec::Parallel);

struct Annulus {
  cplx center;
  double r = 0.0;
  double R = 0.0;
  double modulus = 0.0;
};

struct UPOptions {
  // An annulus counts only if R - r exceeds this many resolution scales of
  // the cloud; thinner gaps are sampling noise.
  double gap_factor = 4.0;
  // Absolute floor overriding gap_factor (e.g. 0 for an exact finite set).
  std::optional<double> gap_floor;
  // Outer radius search stops at R / r = 2^max_doublings.
  int max_doublings = 12;
  std::size_t max_reported = 64;
};

struct UPReport {
  std::vector<Annulus> annuli_found;  // the largest ones, by modulus
  double max_modulus = 0.0;
  std::size_t annuli_count = 0;
  std::size_t centers_used = 0;
  double gap_floor = 0.0;
  // Some annulus stayed empty up to the search cap.
  bool hit_search_cap = false;
};

// Round annuli A(c; r, R) with r from radius_grid, centred at cloud points
// and at midpoints of nearby pairs. A must hold no cloud point; the inner
// disk and the outside must both hold cloud points. max_modulus is a lower
// bound for the separating modulus over round annuli.
UPReport uniform_perfectness_estimate(const PointCloud& cloud, int n_centers, const std::vector<double>& radius_grid,
                                      const UPOptions& opts = {}, Exec exec = Exec::Parallel);

struct PoincareReport {
  ExtComplex base_point;
  std::vector<double> s_grid;
  // level_sums[n - 1][i] = sum over words of length n and their preimages y
  // of x of ||g_w'(y)||^(-s_grid[i]).
  std::vector<std::vector<double>> level_sums;
  // Per level, the smallest last-step factor ||h_j'(y)|| over its leaves.
  std::vector<double> min_step_norm;
  double s0_estimate = 0.0;
  bool bracketed = false;  // the ratio crosses 1 inside the s_grid hull
  std::uint64_t leaves = 0;
  std::uint64_t dropped_leaves = 0;  // critical leaves (||g'|| < 1e-300)
  int max_degree = 0;
};

struct PoincareOptions {
  std::uint64_t leaf_budget = 50'000'000;
};

// Preimage tree of x expanded to depth L (L >= 4). s0 is where the mean of
// the last three level ratios S_{n+1}/S_n crosses 1, bisected to 1e-2.
PoincareReport poincare_series(const GeneratorSystem& G, const ExtComplex& x, const std::vector<double>& s_grid, int L,
                               const PoincareOptions& opts = {}, Exec exec = Exec::Parallel);

// The report with the smallest s0 over several base points.
PoincareReport poincare_min(const GeneratorSystem& G, const std::vector<ExtComplex>& xs,
                            const std::vector<double>& s_grid, int L, const PoincareOptions& opts = {},
                            Exec exec = Exec::Parallel);

struct DimensionBound {
  bool holds = false;
  bool withheld = false;    // fit unreliable: no verdict
  bool applicable = true;   // false for degree-one systems
  std::string diagnostic;
};

DimensionBound verify_dimension_bound(const DimensionReport& dim, const PoincareReport& poincare, double margin);

}  // namespace semijulia
