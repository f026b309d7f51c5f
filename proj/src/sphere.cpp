#include "semijulia/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "semijulia/ratmap.hpp"

namespace semijulia {

ExtComplex::ExtComplex(double re, double im) : re_(re), im_(im) {
  if (!std::isfinite(re) || !std::isfinite(im))
    throw std::domain_error("ExtComplex: non-finite component; use infinity()");
}

ExtComplex::ExtComplex(cplx z) : ExtComplex(z.real(), z.imag()) {}

ExtComplex ExtComplex::from_complex(cplx z) {
  if (std::isnan(z.real()) || std::isnan(z.imag()))
    throw std::domain_error("ExtComplex: NaN");
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || !std::isfinite(std::abs(z)))
    return infinity();
  return ExtComplex(z);
}

double ExtComplex::abs() const {
  return inf_ ? std::numeric_limits<double>::infinity() : std::hypot(re_, im_);
}

ExtComplex ExtComplex::reciprocal() const {
  if (inf_) return ExtComplex(0.0, 0.0);
  if (re_ == 0.0 && im_ == 0.0) return infinity();
  return from_complex(1.0 / value());
}

std::array<double, 3> ExtComplex::embed() const {
  if (inf_) return {0.0, 0.0, 1.0};
  const double r = abs();
  if (r <= 1.0) {
    const double s = 1.0 + r * r;
    return {2.0 * re_ / s, 2.0 * im_ / s, (r * r - 1.0) / s};
  }
  // Inverted chart: u = 1/z, |u| < 1, and the point reflects through the equator.
  const cplx u = 1.0 / value();
  const double q = std::norm(u);
  const double s = 1.0 + q;
  return {2.0 * u.real() / s, -2.0 * u.imag() / s, (1.0 - q) / s};
}

SphericalDisk::SphericalDisk(ExtComplex c, double r) : center(c), radius(r) {
  if (!(r > 0.0 && r <= 2.0)) throw std::invalid_argument("SphericalDisk: radius must lie in (0, 2]");
}

double chordal_distance(const ExtComplex& z, const ExtComplex& w) {
  if (z.is_infinity() && w.is_infinity()) return 0.0;
  if (z.is_infinity() || w.is_infinity()) {
    const ExtComplex& f = z.is_infinity() ? w : z;
    const double a = f.abs();
    // 2 / sqrt(1 + a^2), written to avoid overflow for large a.
    return a <= 1.0 ? 2.0 / std::sqrt(1.0 + a * a) : 2.0 / (a * std::sqrt(1.0 + 1.0 / (a * a)));
  }
  const double a = z.abs();
  const double b = w.abs();
  if (a > 1.0 && b > 1.0) return chordal_distance(z.reciprocal(), w.reciprocal());
  if (a <= 1.0 && b <= 1.0)
    return 2.0 * std::abs(z.value() - w.value()) / std::sqrt((1.0 + a * a) * (1.0 + b * b));
  // One point outside the unit disk: divide through by its modulus.
  const ExtComplex& big = a > 1.0 ? z : w;
  const ExtComplex& small = a > 1.0 ? w : z;
  const double B = big.abs();
  const double s = small.abs();
  const double num = std::abs(1.0 - small.value() / big.value());
  return std::min(2.0, 2.0 * num / (std::sqrt(1.0 + 1.0 / (B * B)) * std::sqrt(1.0 + s * s)));
}

double spherical_deriv_norm(const RationalMap& g, const ExtComplex& z) {
  // In a source chart u the map is N/D; with the target chart absorbed,
  // ||g'|| = |N'D - ND'| (1+|u|^2) / (|N|^2 + |D|^2).
  const auto local = g.source_chart(z);
  const cplx N = local.num.eval(local.u);
  const cplx D = local.den.eval(local.u);
  const cplx dN = local.num.derivative_at(local.u);
  const cplx dD = local.den.derivative_at(local.u);
  const double w = std::abs(dN * D - N * dD);
  const double denom = std::norm(N) + std::norm(D);
  return w * (1.0 + std::norm(local.u)) / denom;
}

bool in_disk(const ExtComplex& z, const SphericalDisk& disk) {
  return chordal_distance(z, disk.center) < disk.radius;
}

}  // namespace semijulia
