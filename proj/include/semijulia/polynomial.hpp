#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

namespace semijulia {

using cplx = std::complex<double>;

// Dense complex polynomial, coefficients in ascending degree. Trailing
// coefficients below Tolerances::coeff_strip relative to the largest are
// dropped on construction; the zero polynomial is stored as {0}.
class Polynomial {
 public:
  Polynomial() : coeffs_{0.0} {}
  explicit Polynomial(std::vector<cplx> coeffs);
  Polynomial(std::initializer_list<cplx> coeffs) : Polynomial(std::vector<cplx>(coeffs)) {}

  static Polynomial monomial(int degree, cplx c = 1.0);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == cplx{}; }
  const std::vector<cplx>& coeffs() const { return coeffs_; }
  cplx operator[](int k) const { return k <= degree() ? coeffs_[k] : cplx{}; }
  cplx leading() const { return coeffs_.back(); }
  double max_abs_coeff() const;

  cplx eval(cplx z) const;
  cplx derivative_at(cplx z) const;
  // Value and first derivative in one Horner pass.
  void eval_with_derivative(cplx z, cplx& value, cplx& deriv) const;
  // sum_k |a_k| r^k: the scale of rounding error when evaluating at |z| = r.
  double eval_scale(double r) const;

  Polynomial derivative() const;
  // u^d p(1/u) for d >= degree().
  Polynomial reversed(int d) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(cplx s) const;

 private:
  std::vector<cplx> coeffs_;
};

struct Root {
  cplx value;
  int multiplicity;
};

// All roots with multiplicity (sum == degree). Simultaneous Aberth iteration;
// clusters of numerically coincident roots are merged.
std::vector<Root> poly_roots(const Polynomial& p);

}  // namespace semijulia
