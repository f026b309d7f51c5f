#pragma once

#include <optional>
#include <string>
#include <vector>

#include "semijulia/cloud.hpp"
#include "semijulia/exec.hpp"
#include "semijulia/semigroup.hpp"

namespace semijulia {

// Fibered polynomial dynamics over finite prefixes x of infinite words.
// Every generator must be a polynomial of degree >= 2.

// max(4, 2 max_j sum|coeffs of h_j|), doubled until |h_j(y)| >= 2|y| holds
// on 64 sample points of the circle |y| = R for every j.
double escape_radius(const GeneratorSystem& G);

struct GreenEval {
  double value = 0.0;
  int n_used = 0;       // iterates consumed (escape plus refinement)
  double degree = 1.0;  // d_n(x) at n_used
  bool escaped = false;
  bool converged = false;  // two consecutive estimates agree to 1e-9
};

// G_x(y) = lim log|q_x^(n)(y)| / d_n(x). Iterates until |q| > R, then
// refines until two consecutive estimates differ by < 1e-9 (using further
// prefix symbols). Returns 0 when the orbit stays in |q| <= R for n_max
// steps; throws PrefixExhausted when n_max exceeds the prefix and the
// prefix runs out first. Works in log-magnitude once |q| > 1e100.
GreenEval green_value(const GeneratorSystem& G, const Word& x, cplx y, double R, int n_max);

// |G_{sigma x}(h_{x_1}(y)) - d(x_1) G_x(y)|
double green_functional_check(const GeneratorSystem& G, const Word& x, cplx y, double R);

struct AsymptoticCheck {
  double max_deviation = 0.0;  // max |G_x(y) - log|y|| over the samples
  double bound = 0.0;          // coefficient bound M(r); +inf if r is too small
};

// Samples on a polar grid with |y| in [r, 10 r].
AsymptoticCheck green_asymptotic_check(const GeneratorSystem& G, const Word& x, double r, int n_radii = 16,
                                       int n_angles = 64);

// Largest |G_x(y) - log rho| over n_angles points of the circle |y| = rho.
// For monic generators G_x - log|y| is harmonic near infinity and vanishes
// there, so this is nonincreasing in rho outside the filled set.
double green_circle_deviation(const GeneratorSystem& G, const Word& x, double rho, int n_angles = 64);

// M(r) with |G_x(y) - log|y|| <= M(r) for |y| >= r: with eps_j the size of
// the lower-order terms of h_j relative to the leading one at |y| = r,
// M = max_j (|log|a_j|| - log(1 - eps_j)) / (d_min - 1). +inf unless every
// eps_j < 1 and |h_j(y)| >= |y| on |y| >= r.
double green_asymptotic_bound(const GeneratorSystem& G, double r);

struct GreenField {
  Word prefix;
  Box bbox;
  int nx = 0;
  int ny = 0;
  std::vector<double> values;  // row-major, iy = 0 bottom; 0 on non-escaping cells
  double escape_radius = 0.0;
  int max_iters = 0;

  double at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * nx + ix]; }
  cplx cell_center(int ix, int iy) const;
  // Bilinear interpolation between cell centres; nullopt outside their hull.
  std::optional<double> sample(cplx y) const;
  // Central differences of the interpolant with a one-cell step.
  std::optional<cplx> gradient(cplx y) const;
};

struct BasinResult {
  GridRaster mask;      // escaping cells
  GridRaster boundary;  // escaping cells with a non-escaping 4-neighbour
  GreenField field;
};

BasinResult basin_mask(const GeneratorSystem& G, const Word& x, const Box& bbox, int nx, int ny, double R, int n_max,
                       Exec exec = Exec::Parallel);

struct GreenLine {
  std::vector<cplx> vertices;
  std::vector<double> g_values;
  cplx start;
  cplx terminal_estimate;
  double g_stop = 0.0;
  int deflections = 0;      // +90 degree turns at stalled steps
  bool stagnated = false;   // stopped above g_stop with no descent direction
  bool left_field = false;  // stopped at the edge of the field
};

// Twice the median G over boundary-layer cells (escaping cells next to a
// non-escaping one); twice the smallest positive value if there are none.
double green_stop_level(const GreenField& field);

// Steepest descent of G from y0 with step `step` cells until G < g_stop.
// Throws std::invalid_argument if G(y0) = 0 or y0 is outside the field.
GreenLine green_line(const GreenField& field, cplx y0, double step, std::optional<double> g_stop = std::nullopt);

struct JohnFailure {
  cplx y;
  cplx disk_center;
};

struct JohnReport {
  int tested_points = 0;
  double c = 1.0;              // the c asked for
  double c_estimate = 1.0;     // smallest passing c in [1, 64] (64 if none)
  bool passes = false;         // no failure at c
  bool non_john = false;       // fails even at c = 64
  std::vector<JohnFailure> failures;  // at c, capped at 64
  std::string provenance;
};

// Carrot condition car(E, c, y, y0) inside the escaping mask for each line
// E: y is the line's terminal, the core runs back to its start (standing in
// for infinity), and every vertex z carries the disk D(z, |y - z| / c)
// shrunk by two cells. Cells outside the mask box count as escaping.
JohnReport john_carrot_test(const GridRaster& mask, const std::vector<GreenLine>& lines, double c,
                            Exec exec = Exec::Parallel);

}  // namespace semijulia
