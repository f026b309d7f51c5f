#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "semijulia/errors.hpp"
#include "semijulia/fiberedpoly.hpp"
#include "semijulia/rng.hpp"

using namespace semijulia;

namespace {

RationalMap poly(std::initializer_list<cplx> c) { return RationalMap::polynomial(Polynomial(c)); }

const GeneratorSystem& sq_cheb() {
  static const GeneratorSystem G{poly({0.0, 0.0, 1.0}), poly({-2.0, 0.0, 1.0})};
  return G;
}

// Green's function of z^2 - 2: y = w + 1/w with |w| > 1 gives G(y) = log|w|.
double chebyshev_green(cplx y) {
  cplx w = 0.5 * (y + std::sqrt(y * y - 4.0));
  if (std::abs(w) < 1.0) w = 1.0 / w;
  return std::log(std::abs(w));
}

double dist_to_segment(cplx y) {
  const double x = std::clamp(y.real(), -2.0, 2.0);
  return std::abs(y - cplx(x, 0.0));
}

// Mean-value excess (4-neighbour average minus centre) over escaping cells
// at least `layer` cells from any non-escaping cell; returns the minimum.
double min_mean_value_excess(const BasinResult& b, int layer) {
  double worst = INFINITY;
  const auto& f = b.field;
  for (int iy = layer; iy < f.ny - layer; ++iy)
    for (int ix = layer; ix < f.nx - layer; ++ix) {
      bool clear = true;
      for (int oy = -layer; oy <= layer && clear; ++oy)
        for (int ox = -layer; ox <= layer && clear; ++ox) clear = b.mask.at(ix + ox, iy + oy);
      if (!clear) continue;
      const double avg = 0.25 * (f.at(ix - 1, iy) + f.at(ix + 1, iy) + f.at(ix, iy - 1) + f.at(ix, iy + 1));
      worst = std::min(worst, avg - f.at(ix, iy));
    }
  return worst;
}

}  // namespace

TEST_CASE("green value examples") {
  const GeneratorSystem sq{poly({0.0, 0.0, 1.0})};
  const Word ones = Word::periodic({0}, 60);
  for (int k = 0; k < 8; ++k) {
    const auto g = green_value(sq, ones, std::polar(2.0, 0.7 * k), 4.0, 60);
    CHECK(g.escaped);
    CHECK(g.converged);
    CHECK(std::abs(g.value - std::log(2.0)) < 1e-9);
  }
  CHECK(green_value(sq, ones, cplx(0.6, -0.7), 4.0, 60).value == 0.0);
  CHECK_FALSE(green_value(sq, ones, cplx(0.6, -0.7), 4.0, 60).escaped);
  // Log-magnitude arithmetic far beyond double range of the iterates.
  CHECK(green_value(sq, ones, cplx(1e200, 0.0), 4.0, 60).value == doctest::Approx(200.0 * std::log(10.0)).epsilon(1e-12));

  StreamRng rng(8, 0);
  const Word twos = Word::periodic({1}, 60);
  for (int i = 0; i < 200; ++i) {
    const cplx y(6.0 * rng.uniform() - 3.0, 6.0 * rng.uniform() - 3.0);
    if (dist_to_segment(y) < 0.05) continue;
    CHECK(std::abs(green_value(sq_cheb(), twos, y, 6.0, 60).value - chebyshev_green(y)) < 1e-9);
  }

  // d_n(x) is the product of fiber degrees along the orbit record.
  const Word alt = Word::periodic({0, 1}, 60);
  const auto g = green_value(sq_cheb(), alt, cplx(1.5, 1.5), 6.0, 60);
  const auto rec = skew_orbit(sq_cheb(), alt, ExtComplex(1.5, 1.5));
  CHECK(g.degree == rec.degrees[g.n_used]);
  CHECK(g.n_used < 60);

  CHECK_THROWS_AS(green_value(sq, Word::periodic({0}, 5), cplx(0.5, 0.0), 4.0, 10), PrefixExhausted);
  CHECK(green_value(sq, Word::periodic({0}, 5), cplx(0.5, 0.0), 4.0, 5).value == 0.0);
  const GeneratorSystem rational{RationalMap(Polynomial{1.0, 0.0, 1.0}, Polynomial{0.0, 1.0})};
  CHECK_THROWS_AS(green_value(rational, Word{0, 0}, cplx(3.0, 0.0), 4.0, 2), std::invalid_argument);
  const GeneratorSystem affine{poly({1.0, 2.0})};
  CHECK_THROWS_AS(escape_radius(affine), std::invalid_argument);
}

TEST_CASE("escape radius") {
  CHECK(escape_radius(GeneratorSystem{poly({0.0, 0.0, 1.0})}) == 4.0);
  CHECK(escape_radius(sq_cheb()) == 6.0);
  // Small leading coefficient: the sampled check pushes R beyond the formula.
  const GeneratorSystem flat{poly({0.0, 0.0, 0.01})};
  const double R = escape_radius(flat);
  CHECK(R > 4.0);
  CHECK(0.01 * R * R >= 2.0 * R);
}

TEST_CASE("functional equation of the fiber Green's function") {
  const GeneratorSystem sq{poly({0.0, 0.0, 1.0})};
  CHECK(green_functional_check(sq, Word::periodic({0}, 60), cplx(3.0, 0.0), 4.0) < 1e-12);
  const Word alt = Word::periodic({0, 1}, 60);
  const double R = escape_radius(sq_cheb());
  StreamRng rng(11, 0);
  int tested = 0;
  double worst = 0.0;
  while (tested < 1000) {
    const cplx y(5.0 * rng.uniform() - 2.5, 5.0 * rng.uniform() - 2.5);
    if (!green_value(sq_cheb(), alt, y, R, 60).escaped) {
      CHECK(green_functional_check(sq_cheb(), alt, y, R) == 0.0);
      continue;
    }
    worst = std::max(worst, green_functional_check(sq_cheb(), alt, y, R));
    ++tested;
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("asymptotics of the fiber Green's function") {
  const GeneratorSystem sq{poly({0.0, 0.0, 1.0})};
  for (double r : {1.5, 3.0, 10.0}) CHECK(green_asymptotic_check(sq, Word::periodic({0}, 60), r).max_deviation < 1e-9);

  // |h(y)| in [|y|^2 / 2, 2 |y|^2] for |y| >= 10 gives deviation below log 2.
  const GeneratorSystem pm{poly({2.0, 0.0, 1.0}), poly({-2.0, 0.0, 1.0})};
  const Word alt = Word::periodic({0, 1}, 60);
  const auto a10 = green_asymptotic_check(pm, alt, 10.0);
  CHECK(a10.max_deviation < std::log(2.0));
  CHECK(a10.max_deviation <= a10.bound);
  const auto a20 = green_asymptotic_check(pm, alt, 20.0);
  CHECK(a20.max_deviation <= a10.max_deviation);
  CHECK(a20.max_deviation <= a20.bound);
  CHECK(std::isinf(green_asymptotic_bound(pm, 1.0)));

  double prev = std::numeric_limits<double>::infinity();
  for (double rho = 10.0; rho <= 100.0; rho += 10.0) {
    const double dev = green_circle_deviation(pm, alt, rho);
    CHECK(dev <= prev);
    CHECK(dev <= green_asymptotic_bound(pm, rho));
    prev = dev;
  }
}

TEST_CASE("basin masks") {
  const GeneratorSystem sq{poly({0.0, 0.0, 1.0})};
  const auto b = basin_mask(sq, Word::periodic({0}, 60), Box::square(1.5), 512, 512, 4.0, 60);
  const double cell = b.mask.dx();
  const double diag = std::hypot(cell, cell);
  for (int iy = 0; iy < 512; ++iy)
    for (int ix = 0; ix < 512; ++ix) {
      const double r = std::abs(b.mask.cell_center(ix, iy));
      if (r > 1.0 + diag) REQUIRE(b.mask.at(ix, iy));
      if (r < 1.0 - diag) REQUIRE_FALSE(b.mask.at(ix, iy));
      if (b.boundary.at(ix, iy)) REQUIRE(std::abs(r - 1.0) <= cell);
      const double v = b.field.at(ix, iy);
      REQUIRE(v >= 0.0);
      REQUIRE((v == 0.0) == !b.mask.at(ix, iy));
    }
  CHECK(b.boundary.count() > 0);
  CHECK(min_mean_value_excess(b, 4) >= -1e-6);

  // Filled set of z^2 - 2 is the segment [-2, 2]; odd grids put a row on it.
  const Word twos = Word::periodic({1}, 60);
  const auto coarse = basin_mask(sq_cheb(), twos, Box::square(2.5), 513, 513, 6.0, 60);
  const auto fine = basin_mask(sq_cheb(), twos, Box::square(2.5), 1025, 1025, 6.0, 60);
  REQUIRE(coarse.boundary.count() > 0);
  for (const auto* r : {&coarse, &fine})
    for (int iy = 0; iy < r->mask.ny; ++iy)
      for (int ix = 0; ix < r->mask.nx; ++ix)
        if (r->boundary.at(ix, iy)) REQUIRE(dist_to_segment(r->mask.cell_center(ix, iy)) <= 2.0 * r->mask.dx());
  // Refinement stability of the boundary set.
  auto cells = [](const BasinResult& r) {
    std::vector<ExtComplex> out;
    for (int iy = 0; iy < r.mask.ny; ++iy)
      for (int ix = 0; ix < r.mask.nx; ++ix)
        if (r.boundary.at(ix, iy)) out.emplace_back(r.mask.cell_center(ix, iy));
    return out;
  };
  double h = 0.0;
  for (const auto& a : cells(fine)) {
    double best = INFINITY;
    for (const auto& c : cells(coarse)) best = std::min(best, std::abs(a.value() - c.value()));
    h = std::max(h, best);
  }
  CHECK(h <= 2.0 * coarse.mask.dx());

  const auto serial = basin_mask(sq_cheb(), Word::periodic({0, 1}, 60), Box::square(2.0), 128, 128, 6.0, 60, Exec::Serial);
  const auto par = basin_mask(sq_cheb(), Word::periodic({0, 1}, 60), Box::square(2.0), 128, 128, 6.0, 60, Exec::Parallel);
  CHECK(serial.field.values == par.field.values);
  CHECK_THROWS(basin_mask(sq, Word::periodic({0}, 10), Box::square(1.5), 64, 64, 4.0, 20));
}

TEST_CASE("green lines") {
  const GeneratorSystem sq{poly({0.0, 0.0, 1.0})};
  const auto b = basin_mask(sq, Word::periodic({0}, 60), Box::square(2.5), 1024, 1024, 4.0, 60);
  const double cell = b.mask.dx();
  const auto line = green_line(b.field, cplx(2.0, 0.0), 0.5);
  CHECK_FALSE(line.stagnated);
  CHECK_FALSE(line.left_field);
  CHECK(std::abs(std::abs(line.terminal_estimate) - 1.0) <= 2.0 * cell);
  for (std::size_t i = 1; i < line.vertices.size(); ++i) {
    REQUIRE(line.g_values[i] < line.g_values[i - 1]);
    REQUIRE(std::abs(line.vertices[i].imag()) <= cell);  // radial
  }
  const auto half = green_line(b.field, cplx(2.0, 0.0), 0.25);
  CHECK(std::abs(half.terminal_estimate - line.terminal_estimate) <= 2.0 * cell);
  const auto diag = green_line(b.field, std::polar(1.8, 2.0), 0.5);
  CHECK(std::abs(std::arg(diag.terminal_estimate) - 2.0) <= 2.0 * cell);
  CHECK_THROWS_AS(green_line(b.field, cplx(0.5, 0.0), 0.5), std::invalid_argument);
  CHECK_THROWS_AS(green_line(b.field, cplx(5.0, 0.0), 0.5), std::invalid_argument);
}

TEST_CASE("john carrot test") {
  const GeneratorSystem sq{poly({0.0, 0.0, 1.0})};
  const auto b = basin_mask(sq, Word::periodic({0}, 60), Box::square(1.5), 1024, 1024, 4.0, 60);
  std::vector<GreenLine> lines;
  for (int k = 0; k < 32; ++k) lines.push_back(green_line(b.field, std::polar(1.45, 2.0 * std::numbers::pi * k / 32 + 0.01), 0.5));
  const auto j = john_carrot_test(b.mask, lines, 1.0);
  CHECK(j.passes);
  CHECK(j.failures.empty());
  CHECK(j.c_estimate == 1.0);
  CHECK(j.tested_points == 32);
  CHECK(john_carrot_test(b.mask, lines, 2.0).passes);

  // Exterior of a segment: a John domain with c above 1.
  const auto s = basin_mask(sq_cheb(), Word::periodic({1}, 60), Box::square(2.5), 1025, 1025, 6.0, 60);
  std::vector<GreenLine> slit;
  for (int k = 0; k < 32; ++k) slit.push_back(green_line(s.field, std::polar(2.4, 2.0 * std::numbers::pi * k / 32 + 0.01), 0.5));
  const auto js = john_carrot_test(s.mask, slit, 1.0);
  CHECK_FALSE(js.non_john);
  CHECK(js.c_estimate > 1.0);
  CHECK(js.c_estimate < 1.5);
  CHECK(john_carrot_test(s.mask, slit, js.c_estimate).passes);
  CHECK(john_carrot_test(s.mask, slit, 2.0 * js.c_estimate).passes);

  // Unit disk with an inward quadratic cusp: the channel narrows faster than
  // any carrot, so the test fails for every c up to 64.
  GridRaster cusp(Box::square(1.5), 1025, 1025);
  for (int iy = 0; iy < cusp.ny; ++iy)
    for (int ix = 0; ix < cusp.nx; ++ix) {
      const cplx z = cusp.cell_center(ix, iy);
      const bool channel = z.real() >= -0.9 && std::abs(z.imag()) <= 0.002 * (z.real() + 0.9) * (z.real() + 0.9);
      cusp.set(ix, iy, std::abs(z) > 1.0 || channel);
    }
  GreenLine core;
  for (double x = 1.4; x >= -0.85; x -= cusp.dx()) core.vertices.emplace_back(x, 0.0);
  core.start = core.vertices.front();
  core.terminal_estimate = core.vertices.back();
  const auto jc = john_carrot_test(cusp, {core}, 1.0);
  CHECK_FALSE(jc.passes);
  CHECK(jc.non_john);
  CHECK_FALSE(john_carrot_test(cusp, {core}, 64.0).passes);
  CHECK_THROWS(john_carrot_test(cusp, {core}, 0.5));
}
