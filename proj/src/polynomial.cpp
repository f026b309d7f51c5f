#include "semijulia/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "semijulia/errors.hpp"
#include "semijulia/tolerances.hpp"

namespace semijulia {

Polynomial::Polynomial(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
  double m = 0.0;
  for (const cplx& c : coeffs_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw std::domain_error("Polynomial: non-finite coefficient");
    m = std::max(m, std::abs(c));
  }
  const double cut = Tolerances::coeff_strip * m;
  while (!coeffs_.empty() && std::abs(coeffs_.back()) <= cut) coeffs_.pop_back();
  if (coeffs_.empty()) coeffs_.push_back(0.0);
}

Polynomial Polynomial::monomial(int degree, cplx c) {
  std::vector<cplx> v(static_cast<std::size_t>(degree) + 1, 0.0);
  v.back() = c;
  return Polynomial(std::move(v));
}

double Polynomial::max_abs_coeff() const {
  double m = 0.0;
  for (const cplx& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

cplx Polynomial::eval(cplx z) const {
  cplx v = coeffs_.back();
  for (int k = degree() - 1; k >= 0; --k) v = v * z + coeffs_[k];
  return v;
}

void Polynomial::eval_with_derivative(cplx z, cplx& value, cplx& deriv) const {
  cplx v = coeffs_.back();
  cplx d = 0.0;
  for (int k = degree() - 1; k >= 0; --k) {
    d = d * z + v;
    v = v * z + coeffs_[k];
  }
  value = v;
  deriv = d;
}

cplx Polynomial::derivative_at(cplx z) const {
  cplx v, d;
  eval_with_derivative(z, v, d);
  return d;
}

double Polynomial::eval_scale(double r) const {
  double s = std::abs(coeffs_.back());
  for (int k = degree() - 1; k >= 0; --k) s = s * r + std::abs(coeffs_[k]);
  return s;
}

Polynomial Polynomial::derivative() const {
  if (degree() == 0) return Polynomial();
  std::vector<cplx> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * static_cast<double>(k);
  return Polynomial(std::move(d));
}

Polynomial Polynomial::reversed(int d) const {
  if (d < degree()) throw std::invalid_argument("Polynomial::reversed: d below degree");
  std::vector<cplx> r(static_cast<std::size_t>(d) + 1, 0.0);
  for (int k = 0; k <= degree(); ++k) r[d - k] = coeffs_[k];
  return Polynomial(std::move(r));
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  std::vector<cplx> r(std::max(coeffs_.size(), o.coeffs_.size()), 0.0);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) r[k] += coeffs_[k];
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) r[k] += o.coeffs_[k];
  return Polynomial(std::move(r));
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o * cplx(-1.0); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  std::vector<cplx> r(coeffs_.size() + o.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j) r[i + j] += coeffs_[i] * o.coeffs_[j];
  return Polynomial(std::move(r));
}

Polynomial Polynomial::operator*(cplx s) const {
  std::vector<cplx> r(coeffs_);
  for (cplx& c : r) c *= s;
  return Polynomial(std::move(r));
}

namespace {

double relative_residual(const std::vector<cplx>& a, cplx z) {
  cplx v = a.back();
  double s = std::abs(a.back());
  const double r = std::abs(z);
  for (int k = static_cast<int>(a.size()) - 2; k >= 0; --k) {
    v = v * z + a[k];
    s = s * r + std::abs(a[k]);
  }
  return s > 0.0 ? std::abs(v) / s : 0.0;
}

// Stable closed form for a z^2 + b z + c.
void quadratic_roots(cplx a, cplx b, cplx c, cplx out[2]) {
  const cplx disc = std::sqrt(b * b - 4.0 * a * c);
  // Choose the sign that avoids cancellation.
  const cplx q = (std::real(std::conj(b) * disc) >= 0.0) ? -0.5 * (b + disc) : -0.5 * (b - disc);
  if (q == cplx{}) {
    out[0] = out[1] = 0.0;
    return;
  }
  out[0] = q / a;
  out[1] = c / q;
}

// Aberth-Ehrlich on the coefficient vector (degree n >= 1, a[n] != 0).
std::vector<cplx> aberth(const std::vector<cplx>& a) {
  const int n = static_cast<int>(a.size()) - 1;
  std::vector<cplx> b(a.size());
  for (int k = 0; k <= n; ++k) b[k] = a[k] / a[n];
  double radius = 0.0;
  for (int k = 0; k < n; ++k) radius = std::max(radius, std::abs(b[k]));
  radius += 1.0;

  std::vector<cplx> z(n);
  for (int i = 0; i < n; ++i)
    z[i] = std::polar(radius, 2.0 * std::numbers::pi * i / n + 0.4);

  std::vector<char> done(n, 0);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  int remaining = n;
  for (int iter = 0; iter < Tolerances::root_max_iter && remaining > 0; ++iter) {
    for (int i = 0; i < n; ++i) {
      if (done[i]) continue;
      cplx v = b[n], d = 0.0;
      double s = 1.0;
      const double r = std::abs(z[i]);
      for (int k = n - 1; k >= 0; --k) {
        d = d * z[i] + v;
        v = v * z[i] + b[k];
        s = s * r + std::abs(b[k]);
      }
      // Backward-error stop: the value is at rounding level.
      if (std::abs(v) <= 4.0 * eps * s) {
        done[i] = 1;
        --remaining;
        continue;
      }
      cplx sum = 0.0;
      for (int j = 0; j < n; ++j)
        if (j != i) sum += 1.0 / (z[i] - z[j]);
      cplx step;
      if (d == cplx{}) {
        step = std::polar(1e-8 * std::max(1.0, r), 0.7 * i + 0.3);
      } else {
        const cplx ratio = v / d;
        step = ratio / (1.0 - ratio * sum);
      }
      z[i] -= step;
      if (std::abs(step) < Tolerances::root_step * std::max(1.0, std::abs(z[i]))) {
        done[i] = 1;
        --remaining;
      }
    }
  }
  double worst = 0.0;
  for (const cplx& r : z) worst = std::max(worst, relative_residual(a, r));
  if (remaining > 0 && worst >= Tolerances::root_residual)
    throw RootFindError("poly_roots: no convergence within iteration cap", worst);
  return z;
}

struct DisjointSet {
  std::vector<int> parent;
  explicit DisjointSet(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int x, int y) { parent[find(x)] = find(y); }
};

}  // namespace

std::vector<Root> poly_roots(const Polynomial& p) {
  if (p.degree() < 1) throw std::invalid_argument("poly_roots: degree must be >= 1");
  const auto& all = p.coeffs();

  // Exact zero roots are split off first.
  int zeros = 0;
  while (all[zeros] == cplx{}) ++zeros;
  std::vector<cplx> a(all.begin() + zeros, all.end());
  const int n = static_cast<int>(a.size()) - 1;

  std::vector<cplx> approx;
  if (n == 1) {
    approx = {-a[0] / a[1]};
  } else if (n == 2) {
    cplx r[2];
    quadratic_roots(a[2], a[1], a[0], r);
    approx = {r[0], r[1]};
  } else if (n > 2) {
    approx = aberth(a);
  }

  std::vector<Root> out;
  if (zeros > 0) out.push_back({0.0, zeros});
  if (n == 0) return out;

  // Cluster radius per root: twice the Newton inclusion radius n|p/p'|, or
  // the merge floor. Overlapping disks form one cluster.
  const Polynomial reduced(a);
  std::vector<double> rad(n);
  for (int i = 0; i < n; ++i) {
    cplx v, d;
    reduced.eval_with_derivative(approx[i], v, d);
    const double floor = Tolerances::root_merge * std::max(1.0, std::abs(approx[i]));
    const double newton = (d == cplx{}) ? floor : 2.0 * n * std::abs(v / d);
    rad[i] = std::max(floor, newton);
  }
  DisjointSet ds(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(approx[i] - approx[j]) <= rad[i] + rad[j]) ds.unite(i, j);

  std::vector<std::vector<int>> groups(n);
  for (int i = 0; i < n; ++i) groups[ds.find(i)].push_back(i);

  double worst = 0.0;
  for (const auto& g : groups) {
    if (g.empty()) continue;
    const int k = static_cast<int>(g.size());
    cplx c = 0.0;
    for (int i : g) c += approx[i];
    c /= static_cast<double>(k);
    if (k > 1) {
      // The (k-1)-th derivative has a simple root at a k-fold root.
      Polynomial dk = reduced;
      for (int t = 0; t < k - 1; ++t) dk = dk.derivative();
      const auto& dc = dk.coeffs();
      for (int it = 0; it < 5; ++it) {
        cplx v, d;
        dk.eval_with_derivative(c, v, d);
        if (d == cplx{}) break;
        const cplx next = c - v / d;
        if (relative_residual(dc, next) >= relative_residual(dc, c)) break;
        c = next;
      }
    } else if (n > 2) {
      // One Newton polish on the simple root.
      cplx v, d;
      reduced.eval_with_derivative(c, v, d);
      if (d != cplx{}) {
        const cplx next = c - v / d;
        if (relative_residual(a, next) <= relative_residual(a, c)) c = next;
      }
    }
    worst = std::max(worst, relative_residual(a, c));
    out.push_back({c, k});
  }
  if (worst >= Tolerances::root_residual)
    throw RootFindError("poly_roots: residual above tolerance", worst);
  return out;
}

}  // namespace semijulia
