#include "semijulia/ratmap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "semijulia/errors.hpp"

namespace semijulia {

namespace {

bool vanishes(const Polynomial& p, cplx z, double tol) {
  const double s = p.eval_scale(std::abs(z));
  return s == 0.0 || std::abs(p.eval(z)) <= tol * s;
}

}  // namespace

RationalMap::RationalMap(Polynomial num, Polynomial den, Trusted)
    : num_(std::move(num)), den_(std::move(den)) {
  degree_ = std::max(num_.degree(), den_.degree());
  num_rev_ = num_.reversed(degree_);
  den_rev_ = den_.reversed(degree_);
}

RationalMap::RationalMap(Polynomial num, Polynomial den)
    : RationalMap(std::move(num), std::move(den), Trusted{}) {
  if (den_.is_zero()) throw std::invalid_argument("denominator identically zero");
  if (num_.is_zero() || degree_ < 1) throw std::invalid_argument("rational map is constant");
  // Coprimality: no root of the lower-degree side is a root of the other.
  const Polynomial* lo = &num_;
  const Polynomial* hi = &den_;
  if (lo->degree() > hi->degree() || lo->degree() == 0) std::swap(lo, hi);
  if (lo->degree() >= 1) {
    for (const Root& r : poly_roots(*lo))
      if (vanishes(*hi, r.value, Tolerances::common_root))
        throw std::invalid_argument("numerator and denominator share a root");
  }
}

RationalMap::LocalForm RationalMap::source_chart(const ExtComplex& z) const {
  if (z.is_infinity()) return {0.0, num_rev_, den_rev_};
  if (z.abs() > 1.0) return {1.0 / z.value(), num_rev_, den_rev_};
  return {z.value(), num_, den_};
}

ExtComplex RationalMap::operator()(const ExtComplex& z) const {
  const LocalForm f = source_chart(z);
  const cplx n = f.num.eval(f.u);
  const cplx d = f.den.eval(f.u);
  const double r = std::abs(f.u);
  if (std::abs(n) <= Tolerances::indeterminate * f.num.eval_scale(r) &&
      std::abs(d) <= Tolerances::indeterminate * f.den.eval_scale(r))
    throw IndeterminateError("evaluate: numerator and denominator both vanish");
  if (d == cplx{}) return ExtComplex::infinity();
  const cplx q = n / d;
  // A non-finite quotient can only come from overflow, since n and d do not
  // vanish together.
  if (!std::isfinite(q.real()) || !std::isfinite(q.imag())) return ExtComplex::infinity();
  return ExtComplex(q);
}

cplx RationalMap::derivative(cplx z) const {
  cplx p, dp, q, dq;
  num_.eval_with_derivative(z, p, dp);
  den_.eval_with_derivative(z, q, dq);
  return (dp * q - p * dq) / (q * q);
}

std::string RationalMap::to_string() const {
  auto poly = [](const Polynomial& p) {
    std::ostringstream os;
    os.precision(17);
    os << "[";
    for (int k = 0; k <= p.degree(); ++k) {
      if (k) os << ", ";
      os << "(" << p[k].real() << "," << p[k].imag() << ")";
    }
    os << "]";
    return os.str();
  };
  return poly(num_) + " / " + poly(den_);
}

ExtComplex evaluate(const RationalMap& g, const ExtComplex& z) { return g(z); }

std::vector<Preimage> preimages(const RationalMap& g, const ExtComplex& z) {
  const Polynomial& P = g.numerator();
  const Polynomial& Q = g.denominator();
  // Solve in the target chart where the right-hand side is bounded.
  Polynomial f;
  if (!z.is_infinity() && z.abs() <= 1.0) {
    f = P - Q * z.value();
  } else {
    const cplx w = z.is_infinity() ? cplx{} : 1.0 / z.value();
    f = (w == cplx{}) ? Q : Q - P * w;
  }
  std::vector<Preimage> out;
  if (f.degree() >= 1)
    for (const Root& r : poly_roots(f)) out.push_back({ExtComplex::from_complex(r.value), r.multiplicity});
  const int at_infinity = g.degree() - f.degree();
  if (at_infinity > 0) out.push_back({ExtComplex::infinity(), at_infinity});
  return out;
}

std::vector<Preimage> critical_points(const RationalMap& g) {
  std::vector<Preimage> out;
  if (g.degree() < 2) return out;
  const Polynomial& P = g.numerator();
  const Polynomial& Q = g.denominator();
  const Polynomial w = P.derivative() * Q - P * Q.derivative();
  int finite = 0;
  if (w.degree() >= 1) {
    for (const Root& r : poly_roots(w)) {
      out.push_back({ExtComplex::from_complex(r.value), r.multiplicity});
      finite += r.multiplicity;
    }
  }
  const int at_infinity = 2 * g.degree() - 2 - finite;
  if (at_infinity > 0) out.push_back({ExtComplex::infinity(), at_infinity});
  return out;
}

std::string to_string(FixedPointClass c) {
  switch (c) {
    case FixedPointClass::Superattracting: return "superattracting";
    case FixedPointClass::Attracting: return "attracting";
    case FixedPointClass::Repelling: return "repelling";
    case FixedPointClass::ParabolicCandidate: return "parabolic-candidate";
    case FixedPointClass::Indifferent: return "indifferent";
  }
  return "unknown";
}

FixedPointClass classify_multiplier(cplx lambda) {
  const double a = std::abs(lambda);
  if (a < Tolerances::superattracting) return FixedPointClass::Superattracting;
  if (a < 1.0 - Tolerances::neutral_band) return FixedPointClass::Attracting;
  if (a > 1.0 + Tolerances::neutral_band) return FixedPointClass::Repelling;
  const double turns = std::arg(lambda) / (2.0 * std::numbers::pi);
  for (int q = 1; q <= Tolerances::root_of_unity_max_order; ++q) {
    const double k = std::round(turns * q);
    const cplx root = std::polar(1.0, 2.0 * std::numbers::pi * k / q);
    if (std::abs(lambda - root) <= Tolerances::root_of_unity) return FixedPointClass::ParabolicCandidate;
  }
  return FixedPointClass::Indifferent;
}

std::vector<FixedPointInfo> fixed_points(const RationalMap& g) {
  const Polynomial& P = g.numerator();
  const Polynomial& Q = g.denominator();
  const Polynomial f = P - Q * Polynomial{0.0, 1.0};
  if (f.is_zero()) throw std::invalid_argument("fixed_points: identity map fixes every point");
  std::vector<FixedPointInfo> out;
  int finite = 0;
  if (f.degree() >= 1) {
    for (const Root& r : poly_roots(f)) {
      const cplx lambda = r.multiplicity > 1 ? cplx(1.0) : g.derivative(r.value);
      out.push_back({ExtComplex::from_complex(r.value), lambda, classify_multiplier(lambda), r.multiplicity});
      finite += r.multiplicity;
    }
  }
  const int at_infinity = g.degree() + 1 - finite;
  if (at_infinity > 0) {
    // In the chart u = 1/z the map is u -> Qrev(u)/Prev(u), fixing u = 0.
    const auto local = g.source_chart(ExtComplex::infinity());
    cplx n, dn, d, dd;
    local.den.eval_with_derivative(0.0, n, dn);
    local.num.eval_with_derivative(0.0, d, dd);
    cplx lambda = at_infinity > 1 ? cplx(1.0) : (dn * d - n * dd) / (d * d);
    out.push_back({ExtComplex::infinity(), lambda, classify_multiplier(lambda), at_infinity});
  }
  return out;
}

RationalMap compose(const RationalMap& g, const RationalMap& h, int cap) {
  const long long deg = static_cast<long long>(g.degree()) * h.degree();
  if (deg > cap) throw DegreeCapError("compose: composite degree " + std::to_string(deg) + " exceeds cap");
  const int d = g.degree();
  const Polynomial& P = h.numerator();
  const Polynomial& Q = h.denominator();
  std::vector<Polynomial> pp(d + 1), qp(d + 1);
  pp[0] = qp[0] = Polynomial{1.0};
  for (int i = 1; i <= d; ++i) {
    pp[i] = pp[i - 1] * P;
    qp[i] = qp[i - 1] * Q;
  }
  Polynomial num, den;
  for (int i = 0; i <= d; ++i) {
    const Polynomial term = pp[i] * qp[d - i];
    if (g.numerator()[i] != cplx{}) num = num + term * g.numerator()[i];
    if (g.denominator()[i] != cplx{}) den = den + term * g.denominator()[i];
  }
  return RationalMap(std::move(num), std::move(den), RationalMap::Trusted{});
}

}  // namespace semijulia
