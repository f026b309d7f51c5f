#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "semijulia/analysis.hpp"
#include "semijulia/errors.hpp"
#include "semijulia/julia.hpp"
#include "semijulia/rng.hpp"

using namespace semijulia;

namespace {

RationalMap poly(std::initializer_list<cplx> c) { return RationalMap::polynomial(Polynomial(c)); }

GeneratorSystem gasket() {
  const cplx p[3] = {cplx(0.0, 0.0), cplx(1.0, 0.0), cplx(0.5, std::sqrt(3.0) / 2.0)};
  std::vector<RationalMap> g;
  for (const cplx& q : p) g.push_back(poly({-q, 2.0}));
  return GeneratorSystem(g);
}

std::vector<double> s_grid() {
  std::vector<double> s;
  for (int i = 0; i <= 18; ++i) s.push_back(0.2 + 0.1 * i);
  return s;
}

PointCloud ring(double radius, int n, cplx center = 0.0) {
  PointCloud c;
  for (int k = 0; k < n; ++k) c.points.emplace_back(center + std::polar(radius, 2.0 * std::numbers::pi * k / n));
  return c;
}

}  // namespace

TEST_CASE("box dimension examples") {
  const GeneratorSystem sq{poly({0.0, 0.0, 1.0})};
  const auto circle = backward_orbit_cloud(sq, 100000, 100, 1);
  const auto d = box_dimension(dyadic_rasters(circle, Box::square(1.5), 64, 6));
  CHECK(d.box_dim == doctest::Approx(1.0).epsilon(0.05));
  CHECK_FALSE(d.degenerate);
  for (std::size_t i = 1; i < d.scales.size(); ++i) {
    CHECK(d.scales[i] < d.scales[i - 1]);
    CHECK(d.counts[i] >= d.counts[i - 1]);
  }

  // Dimension log 3 / log 2 of the self-similar attractor.
  const auto g = backward_orbit_cloud(gasket(), 1000000, 100, 2);
  const Box gb{-0.05, 1.05, 0.433 - 0.55, 0.433 + 0.55};
  const auto dg = box_dimension(dyadic_rasters(g, gb, 16, 5));
  CHECK(std::abs(dg.box_dim - std::log(3.0) / std::log(2.0)) <= 0.05);

  const PointCloud one{{ExtComplex(0.1, 0.2)}, 0, ""};
  const auto d1 = box_dimension(dyadic_rasters(one, Box::square(1.0), 16, 5));
  CHECK(d1.degenerate);
  CHECK(d1.box_dim == 0.0);

  // Union with a disjoint translate leaves the dimension unchanged.
  PointCloud both = circle;
  for (const auto& p : circle.points) both.points.emplace_back(p.value() + cplx(4.0, 0.0));
  const auto du = box_dimension(dyadic_rasters(both, Box{-1.5, 5.5, -3.5, 3.5}, 64, 6));
  CHECK(std::abs(du.box_dim - d.box_dim) <= 0.05);

  CHECK_THROWS(box_dimension(dyadic_rasters(circle, Box::square(1.5), 64, 3)));
  std::vector<GridRaster> narrow;
  for (int n : {64, 80, 96, 112}) narrow.push_back(rasterize(circle, Box::square(1.5), n, n).raster);
  CHECK_THROWS(box_dimension(narrow));
}

TEST_CASE("distance transform against brute force") {
  GridRaster r(Box{0.0, 2.0, 0.0, 1.0}, 37, 23);
  StreamRng rng(5, 0);
  for (int k = 0; k < 12; ++k) r.set(static_cast<int>(rng.below(37)), static_cast<int>(rng.below(23)));
  const auto d = distance_to_occupied(r, Exec::Serial);
  CHECK(d == distance_to_occupied(r, Exec::Parallel));
  for (int iy = 0; iy < r.ny; ++iy)
    for (int ix = 0; ix < r.nx; ++ix) {
      double best = INFINITY;
      for (int jy = 0; jy < r.ny; ++jy)
        for (int jx = 0; jx < r.nx; ++jx)
          if (r.at(jx, jy)) best = std::min(best, std::abs(r.cell_center(ix, iy) - r.cell_center(jx, jy)));
      REQUIRE(d[r.index(ix, iy)] == doctest::Approx(best).epsilon(1e-12));
    }
  const GridRaster empty(Box::square(1.0), 8, 8);
  for (double v : distance_to_occupied(empty)) CHECK(std::isinf(v));
}

TEST_CASE("porosity examples") {
  const std::vector<double> radii{0.05, 0.1, 0.2};
  // A straight line: the best empty ball in B(x, r) has radius r/2, up to
  // one cell of quantisation.
  GridRaster line(Box::square(1.5), 1024, 1024);
  for (int ix = 0; ix < line.nx; ++ix) line.set(ix, 512);
  const auto pl = porosity_estimate(line, radii, 200);
  for (std::size_t i = 0; i < radii.size(); ++i) CHECK(std::abs(pl.k_by_radius[i] - 0.5) <= line.dx() / radii[i]);

  const GeneratorSystem sq{poly({0.0, 0.0, 1.0})};
  const auto circle = backward_orbit_cloud(sq, 100000, 100, 1);
  const auto pc = porosity_estimate(rasterize(circle, Box::square(1.5), 2048, 2048).raster, radii, 300);
  CHECK(pc.k_estimate == doctest::Approx(0.5).epsilon(0.1));
  CHECK_FALSE(pc.non_porous);
  for (double k : pc.k_by_radius) {
    CHECK(k > 0.0);
    CHECK(k < 1.0);
  }
  CHECK(pc.k_estimate == *std::min_element(pc.k_by_radius.begin(), pc.k_by_radius.end()));

  GridRaster full(Box::square(1.0), 1024, 1024);
  std::fill(full.occupancy.begin(), full.occupancy.end(), 1);
  const auto pf = porosity_estimate(full, {0.1}, 50);
  CHECK(pf.k_estimate == 0.0);
  CHECK(pf.non_porous);

  CHECK_THROWS(porosity_estimate(line, {0.01}, 10));  // under 8 cells
  CHECK_THROWS(porosity_estimate(GridRaster(Box::square(1.0), 512, 512), radii, 10));
}

TEST_CASE("uniform perfectness examples") {
  std::vector<double> grid;
  for (int i = 0; i <= 30; ++i) grid.push_back(1e-3 * std::pow(10.0, i / 10.0));

  const GeneratorSystem sq{poly({0.0, 0.0, 1.0})};
  const auto c = uniform_perfectness_estimate(backward_orbit_cloud(sq, 20000, 100, 1), 200, grid);
  CHECK(c.annuli_found.empty());
  CHECK(c.max_modulus == 0.0);
  const GeneratorSystem cheb{poly({-2.0, 0.0, 1.0})};
  CHECK(uniform_perfectness_estimate(backward_orbit_cloud(cheb, 20000, 100, 1), 200, grid).max_modulus == 0.0);

  // Two points are separated at every scale: the search runs into its cap.
  const PointCloud two{{ExtComplex(0, 0), ExtComplex(1, 0)}, 0, ""};
  UPOptions exact;
  exact.gap_floor = 0.0;  // an exact finite set has no sampling floor
  const auto t = uniform_perfectness_estimate(two, 2, {1e-5, 1e-4}, exact);
  CHECK(t.hit_search_cap);
  CHECK(t.max_modulus == doctest::Approx(12.0 * std::log(2.0) / (2.0 * std::numbers::pi)));

  // Concentric circles of radii 0.01 and 1. From a centre on the small
  // circle the smallest grid radius enclosing it is 0.02 and the big circle
  // lies beyond 0.99; midpoint centres can reach radius 0.01 and 1.01.
  PointCloud cc = ring(0.01, 2000);
  const auto big = ring(1.0, 20000);
  cc.points.insert(cc.points.end(), big.points.begin(), big.points.end());
  const auto a = uniform_perfectness_estimate(cc, 400, {0.005, 0.01, 0.015, 0.02, 0.04, 0.08});
  const double two_pi = 2.0 * std::numbers::pi;
  CHECK(a.max_modulus >= std::log(0.99 / 0.02) / two_pi - 1e-3);
  CHECK(a.max_modulus <= std::log(1.01 / 0.01) / two_pi);
  for (const auto& an : a.annuli_found) {
    CHECK(an.r < an.R);
    CHECK(an.modulus == doctest::Approx(std::log(an.R / an.r) / two_pi));
  }
}

TEST_CASE("poincare series for z^2 on the circle") {
  const GeneratorSystem sq{poly({0.0, 0.0, 1.0})};
  const auto s = s_grid();
  const auto rep = poincare_series(sq, ExtComplex(std::polar(1.0, std::numbers::pi / 3.0)), s, 10);
  REQUIRE(rep.level_sums.size() == 10);
  for (int n = 1; n <= 10; ++n)
    for (std::size_t i = 0; i < s.size(); ++i)
      CHECK(rep.level_sums[n - 1][i] == doctest::Approx(std::pow(2.0, n * (1.0 - s[i]))).epsilon(1e-9));
  CHECK(rep.bracketed);
  CHECK(std::abs(rep.s0_estimate - 1.0) <= 0.05);
  CHECK(rep.dropped_leaves == 0);
  CHECK(rep.leaves == 2046);
}

TEST_CASE("poincare series properties") {
  const GeneratorSystem G{poly({2.0, 0.0, 1.0}), poly({-2.0, 0.0, 1.0})};
  const auto s = s_grid();
  const auto x = backward_orbit_cloud(G, 10, 100, 4).points[3];
  const auto rep = poincare_series(G, x, s, 8);
  CHECK(rep.s0_estimate > 0.0);
  CHECK(rep.s0_estimate <= 2.0);
  for (std::size_t n = 0; n < rep.level_sums.size(); ++n) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(rep.level_sums[n][i] >= 0.0);
      if (i > 0 && rep.level_sums[n][i] > 0.0) CHECK(rep.level_sums[n][i] <= rep.level_sums[n][i - 1] * (1 + 1e-12));
      if (n + 1 < rep.level_sums.size()) {
        // Each leaf has total_degree children, each shrinking the term by at
        // most the smallest last-step factor.
        const double envelope = rep.level_sums[n][i] * G.total_degree() * std::pow(rep.min_step_norm[n + 1], -s[i]);
        CHECK(rep.level_sums[n + 1][i] <= envelope * (1 + 1e-12));
      }
    }
  }
  const auto ser = poincare_series(G, x, s, 8, {}, Exec::Serial);
  CHECK(ser.level_sums == rep.level_sums);
  CHECK(ser.s0_estimate == rep.s0_estimate);

  PoincareOptions tight;
  tight.leaf_budget = 1000;
  CHECK_THROWS_AS(poincare_series(G, x, s, 8, tight), BudgetExceeded);
  CHECK_THROWS(poincare_series(G, ExtComplex::infinity(), s, 8));
  CHECK_THROWS(poincare_series(G, x, s, 3));

  const auto two = poincare_min(G, {x, backward_orbit_cloud(G, 10, 100, 5).points[7]}, s, 6);
  CHECK(two.s0_estimate <= poincare_series(G, x, s, 6).s0_estimate);
}

TEST_CASE("poincare series for the gasket maps") {
  // 3^n branches with derivative 2^n: critical exponent log 3 / log 2.
  const auto rep = poincare_series(gasket(), ExtComplex(0.3, 0.2), s_grid(), 10);
  CHECK(rep.max_degree == 1);
  CHECK(std::abs(rep.s0_estimate - std::log(3.0) / std::log(2.0)) <= 0.05);
}

TEST_CASE("dimension bound verdicts") {
  DimensionReport d;
  d.box_dim = 1.0;
  d.fit_residual = 0.01;
  PoincareReport p;
  p.s0_estimate = 1.0;
  p.max_degree = 2;
  p.bracketed = true;
  auto v = verify_dimension_bound(d, p, 0.1);
  CHECK(v.holds);
  CHECK(v.applicable);
  CHECK_FALSE(v.withheld);

  d.box_dim = 1.585;
  p.s0_estimate = std::log(3.0) / std::log(2.0);
  p.max_degree = 1;
  v = verify_dimension_bound(d, p, 0.1);
  CHECK_FALSE(v.applicable);
  CHECK(v.holds);

  d.box_dim = 1.4;
  p.s0_estimate = 1.0;
  p.max_degree = 2;
  CHECK_FALSE(verify_dimension_bound(d, p, 0.1).holds);

  d.fit_residual = 0.2;
  v = verify_dimension_bound(d, p, 0.1);
  CHECK(v.withheld);
  CHECK_FALSE(v.holds);
  CHECK(v.diagnostic.find("unreliable fit") != std::string::npos);
}
