#include "semijulia/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <tuple>

namespace semijulia {

GeneratorSystem::GeneratorSystem(std::vector<RationalMap> generators) : gens_(std::move(generators)) {
  if (gens_.empty()) throw std::invalid_argument("GeneratorSystem: at least one generator required");
}

int GeneratorSystem::max_degree() const {
  int d = 0;
  for (const auto& g : gens_) d = std::max(d, g.degree());
  return d;
}

int GeneratorSystem::total_degree() const {
  int d = 0;
  for (const auto& g : gens_) d += g.degree();
  return d;
}

bool GeneratorSystem::all_polynomial() const {
  return std::all_of(gens_.begin(), gens_.end(), [](const RationalMap& g) { return g.is_polynomial(); });
}

Word Word::periodic(const std::vector<int>& pattern, int length) {
  if (pattern.empty()) throw std::invalid_argument("Word::periodic: empty pattern");
  std::vector<int> s(static_cast<std::size_t>(length));
  for (int i = 0; i < length; ++i) s[i] = pattern[i % pattern.size()];
  return Word(std::move(s));
}

Word Word::from_index(int m, int length, std::uint64_t index) {
  std::vector<int> s(static_cast<std::size_t>(length));
  for (int i = length - 1; i >= 0; --i) {
    s[i] = static_cast<int>(index % m);
    index /= m;
  }
  return Word(std::move(s));
}

Word Word::shifted(int n) const {
  if (n > length()) throw std::out_of_range("Word::shifted past end");
  return Word(std::vector<int>(symbols_.begin() + n, symbols_.end()));
}

Word Word::concat(const Word& o) const {
  std::vector<int> s = symbols_;
  s.insert(s.end(), o.symbols_.begin(), o.symbols_.end());
  return Word(std::move(s));
}

void Word::validate(int m) const {
  for (int s : symbols_)
    if (s < 0 || s >= m) throw std::out_of_range("Word: symbol out of range");
}

RationalMap word_map(const GeneratorSystem& G, const Word& w, int cap) {
  if (w.empty()) throw std::invalid_argument("word_map: empty word");
  w.validate(G.size());
  RationalMap g = G[w[0]];
  for (int i = 1; i < w.length(); ++i) g = compose(G[w[i]], g, cap);
  return g;
}

OrbitRecord skew_orbit(const GeneratorSystem& G, const Word& x, const ExtComplex& y) {
  x.validate(G.size());
  OrbitRecord rec;
  rec.points.reserve(x.length() + 1);
  rec.degrees.reserve(x.length() + 1);
  rec.points.push_back(y);
  rec.degrees.push_back(1.0);
  for (int i = 0; i < x.length(); ++i) {
    const RationalMap& h = G[x[i]];
    rec.points.push_back(h(rec.points.back()));
    rec.degrees.push_back(rec.degrees.back() * h.degree());
  }
  return rec;
}

namespace {

// Coarse key on the sphere embedding; nearby duplicates collapse.
std::tuple<long long, long long, long long> sphere_key(const ExtComplex& z) {
  const auto e = z.embed();
  constexpr double q = 1e11;
  return {std::llround(e[0] * q), std::llround(e[1] * q), std::llround(e[2] * q)};
}

}  // namespace

PointCloud postcritical_sample(const GeneratorSystem& G, int L) {
  if (L < 0) throw std::invalid_argument("postcritical_sample: L must be >= 0");
  PointCloud out;
  out.provenance = "postcritical truncation L=" + std::to_string(L);
  std::set<std::tuple<long long, long long, long long>> seen;
  std::vector<ExtComplex> layer;
  auto add = [&](const ExtComplex& z, std::vector<ExtComplex>& next) {
    if (seen.insert(sphere_key(z)).second) {
      out.points.push_back(z);
      next.push_back(z);
    }
  };
  for (const auto& h : G.generators())
    for (const auto& c : critical_points(h)) add(h(c.point), layer);
  for (int k = 1; k <= L && !layer.empty(); ++k) {
    std::vector<ExtComplex> next;
    for (const auto& z : layer)
      for (const auto& h : G.generators()) add(h(z), next);
    layer = std::move(next);
  }
  return out;
}

bool near_any(const ExtComplex& z, const std::vector<ExtComplex>& set, double tol) {
  return std::any_of(set.begin(), set.end(), [&](const ExtComplex& w) { return chordal_distance(z, w) < tol; });
}

namespace {

bool is_identity(const RationalMap& h) {
  return h.is_polynomial() && h.degree() == 1 && std::abs(h.numerator()[1] / h.denominator()[0] - 1.0) < 1e-15 &&
         std::abs(h.numerator()[0]) < 1e-15;
}

void add_unique(std::vector<ExtComplex>& v, const ExtComplex& z) {
  if (!near_any(z, v, Tolerances::same_point)) v.push_back(z);
}

}  // namespace

std::vector<ExtComplex> exceptional_candidates(const GeneratorSystem& G) {
  // A backward-invariant set T with |T| <= 2 is completely invariant under
  // every generator of degree d >= 2, so each of its points is a critical
  // point of multiplicity d - 1 there. Without such a generator, T is made of
  // fixed points or 2-cycles of the Moebius generators.
  std::vector<ExtComplex> pool;
  bool has_high_degree = false;
  for (const auto& h : G.generators()) {
    if (h.degree() < 2) continue;
    has_high_degree = true;
    for (const auto& c : critical_points(h))
      if (c.multiplicity == h.degree() - 1) add_unique(pool, c.point);
  }
  if (!has_high_degree) {
    for (const auto& h : G.generators()) {
      if (is_identity(h)) continue;
      for (const auto& f : fixed_points(h)) add_unique(pool, f.location);
      const RationalMap h2 = compose(h, h);
      if (!is_identity(h2))
        for (const auto& f : fixed_points(h2)) add_unique(pool, f.location);
    }
  }

  auto backward_invariant = [&](const std::vector<ExtComplex>& T) {
    for (const auto& h : G.generators())
      for (const auto& t : T)
        for (const auto& p : preimages(h, t))
          if (!near_any(p.point, T, Tolerances::same_point)) return false;
    return true;
  };

  std::vector<ExtComplex> members;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (backward_invariant({pool[i]})) add_unique(members, pool[i]);
    for (std::size_t j = i + 1; j < pool.size(); ++j)
      if (backward_invariant({pool[i], pool[j]})) {
        add_unique(members, pool[i]);
        add_unique(members, pool[j]);
      }
  }
  // Points whose every generator preimage lies in such a T.
  std::vector<ExtComplex> out = members;
  for (const auto& t : members)
    for (const auto& h : G.generators()) {
      const ExtComplex z = h(t);
      bool inside = true;
      for (const auto& g : G.generators())
        for (const auto& p : preimages(g, z))
          if (!near_any(p.point, members, Tolerances::same_point)) inside = false;
      if (inside) add_unique(out, z);
    }
  return out;
}

}  // namespace semijulia
