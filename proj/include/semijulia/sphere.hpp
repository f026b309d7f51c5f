#pragma once

#include <array>
#include <complex>

namespace semijulia {

using cplx = std::complex<double>;

class RationalMap;

// A point of the Riemann sphere: a finite complex number or infinity.
// Infinity is stored canonically as (0, 0, true).
class ExtComplex {
 public:
  constexpr ExtComplex() = default;
  ExtComplex(double re, double im);
  ExtComplex(cplx z);  // NOLINT: implicit from finite complex values

  static constexpr ExtComplex infinity() {
    ExtComplex z;
    z.inf_ = true;
    return z;
  }
  // Non-finite magnitudes map to infinity; NaN is rejected.
  static ExtComplex from_complex(cplx z);

  bool is_infinity() const { return inf_; }
  double re() const { return re_; }
  double im() const { return im_; }
  cplx value() const { return {re_, im_}; }
  double abs() const;

  // 1/z on the sphere (0 <-> infinity).
  ExtComplex reciprocal() const;

  // Point on the unit sphere under inverse stereographic projection.
  // Euclidean distance between embeddings equals chordal distance.
  std::array<double, 3> embed() const;

  friend bool operator==(const ExtComplex&, const ExtComplex&) = default;

 private:
  double re_ = 0.0;
  double im_ = 0.0;
  bool inf_ = false;
};

// B(center, radius) in the chordal metric.
struct SphericalDisk {
  ExtComplex center;
  double radius;

  SphericalDisk(ExtComplex c, double r);
};

// 2|z-w| / sqrt((1+|z|^2)(1+|w|^2)); range [0, 2].
double chordal_distance(const ExtComplex& z, const ExtComplex& w);

// Derivative norm of g at z with respect to the spherical metric.
double spherical_deriv_norm(const RationalMap& g, const ExtComplex& z);

bool in_disk(const ExtComplex& z, const SphericalDisk& disk);

}  // namespace semijulia
