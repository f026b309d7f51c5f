#pragma once

#include <string>
#include <vector>

#include "semijulia/polynomial.hpp"
#include "semijulia/sphere.hpp"
#include "semijulia/tolerances.hpp"

namespace semijulia {

// g = P/Q on the Riemann sphere, degree max(deg P, deg Q) >= 1, P and Q
// numerically coprime. Immutable.
class RationalMap {
 public:
  RationalMap(Polynomial num, Polynomial den);

  static RationalMap polynomial(Polynomial p) { return RationalMap(std::move(p), Polynomial{1.0}); }
  static RationalMap identity() { return polynomial(Polynomial{0.0, 1.0}); }

  const Polynomial& numerator() const { return num_; }
  const Polynomial& denominator() const { return den_; }
  int degree() const { return degree_; }
  bool is_polynomial() const { return den_.degree() == 0; }

  ExtComplex operator()(const ExtComplex& z) const;

  // Euclidean derivative g'(z) at a finite non-pole point.
  cplx derivative(cplx z) const;

  // The map written as num(u)/den(u) in the chart u = z (|z| <= 1) or
  // u = 1/z (|z| > 1, infinity -> 0). The target chart is left implicit.
  struct LocalForm {
    cplx u;
    const Polynomial& num;
    const Polynomial& den;
  };
  LocalForm source_chart(const ExtComplex& z) const;

  std::string to_string() const;

 private:
  struct Trusted {};
  RationalMap(Polynomial num, Polynomial den, Trusted);
  friend RationalMap compose(const RationalMap&, const RationalMap&, int);

  Polynomial num_;
  Polynomial den_;
  Polynomial num_rev_;
  Polynomial den_rev_;
  int degree_ = 0;
};

ExtComplex evaluate(const RationalMap& g, const ExtComplex& z);

struct Preimage {
  ExtComplex point;
  int multiplicity;
};

// g^{-1}(z) with multiplicity; multiplicities sum to degree(g).
std::vector<Preimage> preimages(const RationalMap& g, const ExtComplex& z);

// Critical points with multiplicity (sum 2d - 2); empty for degree 1.
std::vector<Preimage> critical_points(const RationalMap& g);

enum class FixedPointClass { Superattracting, Attracting, Repelling, ParabolicCandidate, Indifferent };

std::string to_string(FixedPointClass c);

struct FixedPointInfo {
  ExtComplex location;
  cplx multiplier;
  FixedPointClass kind;
  int multiplicity = 1;
};

FixedPointClass classify_multiplier(cplx lambda);

std::vector<FixedPointInfo> fixed_points(const RationalMap& g);

// g o h, degree deg(g) * deg(h) <= cap.
RationalMap compose(const RationalMap& g, const RationalMap& h, int cap = Tolerances::degree_cap);

}  // namespace semijulia
