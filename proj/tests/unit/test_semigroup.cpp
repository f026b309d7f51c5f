#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "semijulia/semigroup.hpp"

using namespace semijulia;

namespace {

RationalMap poly(std::initializer_list<cplx> c) { return RationalMap::polynomial(Polynomial(c)); }

GeneratorSystem quad_pair() { return {poly({2.0, 0.0, 1.0}), poly({-2.0, 0.0, 1.0})}; }

GeneratorSystem gasket() {
  const cplx p[3] = {cplx(0.0, 0.0), cplx(1.0, 0.0), cplx(0.5, std::sqrt(3.0) / 2.0)};
  std::vector<RationalMap> g;
  for (const cplx& q : p) g.push_back(poly({-q, 2.0}));  // 2(z - p) + p
  return GeneratorSystem(g);
}

bool contains(const std::vector<ExtComplex>& v, ExtComplex z) {
  return std::any_of(v.begin(), v.end(), [&](const ExtComplex& w) { return chordal_distance(w, z) < 1e-9; });
}

}  // namespace

TEST_CASE("word_map examples") {
  const GeneratorSystem mono{poly({0.0, 0.0, 1.0}), poly({0.0, 0.0, 0.0, 1.0})};
  const auto z6 = word_map(mono, Word{0, 1});
  CHECK(z6.degree() == 6);
  CHECK(chordal_distance(z6(ExtComplex(1.1, 0)), ExtComplex(std::pow(1.1, 6), 0)) < 1e-14);

  const auto G = quad_pair();
  CHECK(chordal_distance(word_map(G, Word{0})(ExtComplex(1, 0)), ExtComplex(3, 0)) == 0.0);
  // first symbol applied first: (z^2 + 2)^2 - 2
  const auto w = word_map(G, Word{0, 1});
  for (double x : {-1.0, 0.25, 1.5}) {
    const cplx z(x, 0.5);
    const cplx inner = z * z + 2.0;
    CHECK(chordal_distance(w(ExtComplex(z)), ExtComplex(inner * inner - 2.0)) < 1e-12);
  }
  CHECK_THROWS(word_map(G, Word{}));
  CHECK_THROWS(word_map(G, Word{0, 2}));
}

TEST_CASE("word concatenation follows the fiber-iterate convention") {
  const GeneratorSystem G{poly({0.3, 0.0, 1.0}), RationalMap({0.0, 0.0, 1.0}, {-0.5, 1.0}), poly({-1.0, 1.0, 1.0})};
  const Word a{0, 2}, b{1, 0};
  const auto lhs = word_map(G, a.concat(b));
  const auto rhs = compose(word_map(G, b), word_map(G, a));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int t = 0; t < 300; ++t) {
    const ExtComplex z(u(rng), u(rng));
    REQUIRE(chordal_distance(lhs(z), rhs(z)) < 1e-8);
  }
}

TEST_CASE("skew_orbit examples") {
  const GeneratorSystem sq{poly({0.0, 0.0, 1.0})};
  const auto rec = skew_orbit(sq, Word{0, 0, 0}, ExtComplex(2, 0));
  REQUIRE(rec.points.size() == 4);
  CHECK(rec.points[3] == ExtComplex(256, 0));
  CHECK(rec.degrees == std::vector<double>{1, 2, 4, 8});

  const auto r2 = skew_orbit(quad_pair(), Word{1}, ExtComplex(0, 0));
  CHECK(r2.points[1] == ExtComplex(-2, 0));

  const auto r3 = skew_orbit(quad_pair(), Word{}, ExtComplex(0.5, 0.5));
  CHECK(r3.points.size() == 1);
}

TEST_CASE("orbit degrees multiply and derivatives follow the chain rule") {
  const GeneratorSystem G{poly({0.3, 0.0, 1.0}), RationalMap({0.0, 0.0, 0.0, 1.0}, {-0.5, 1.0})};
  const Word x{0, 1, 1, 0, 1};
  const ExtComplex y(0.4, 0.7);
  const auto rec = skew_orbit(G, x, y);
  double product = 1.0;
  for (int i = 0; i < x.length(); ++i) {
    CHECK(rec.degrees[i + 1] == rec.degrees[i] * G[x[i]].degree());
    product *= spherical_deriv_norm(G[x[i]], rec.points[i]);
  }
  const double direct = spherical_deriv_norm(word_map(G, x), y);
  CHECK(std::abs(direct - product) <= 1e-7 * product);
}

TEST_CASE("postcritical sample") {
  auto pc = postcritical_sample(quad_pair(), 0);
  CHECK(pc.size() == 3);
  CHECK(contains(pc.points, ExtComplex(2, 0)));
  CHECK(contains(pc.points, ExtComplex(-2, 0)));
  CHECK(contains(pc.points, ExtComplex::infinity()));

  CHECK(postcritical_sample(gasket(), 5).empty());

  pc = postcritical_sample(GeneratorSystem{poly({0.0, 0.0, 1.0})}, 1);
  CHECK(pc.size() == 2);
  CHECK(contains(pc.points, ExtComplex(0, 0)));
  CHECK(contains(pc.points, ExtComplex::infinity()));
}

TEST_CASE("exceptional candidates") {
  auto e = exceptional_candidates(GeneratorSystem{poly({0.0, 0.0, 1.0})});
  CHECK(e.size() == 2);
  CHECK(contains(e, ExtComplex(0, 0)));
  CHECK(contains(e, ExtComplex::infinity()));

  e = exceptional_candidates(quad_pair());
  CHECK(e.size() == 1);
  CHECK(contains(e, ExtComplex::infinity()));

  e = exceptional_candidates(gasket());
  CHECK(e.size() == 1);
  CHECK(contains(e, ExtComplex::infinity()));

  // <2z + z^2, z^3/(z-1)>: nothing survives
  e = exceptional_candidates(GeneratorSystem{poly({0.0, 2.0, 1.0}), RationalMap({0.0, 0.0, 0.0, 1.0}, {-1.0, 1.0})});
  CHECK(e.empty());
}

TEST_CASE("word indexing") {
  CHECK(Word::from_index(2, 3, 5) == Word{1, 0, 1});
  CHECK(Word::periodic({0, 1}, 5) == Word{0, 1, 0, 1, 0});
  CHECK(Word{0, 1, 1}.shifted() == Word{1, 1});
}
