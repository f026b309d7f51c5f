#include <cmath>
#include <random>

#include "doctest.h"
#include "semijulia/ratmap.hpp"
#include "semijulia/sphere.hpp"

using namespace semijulia;

namespace {

ExtComplex random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> scale(-3, 3);
  const double s = std::pow(10.0, scale(rng));
  return ExtComplex(s * u(rng), s * u(rng));
}

}  // namespace

TEST_CASE("chordal distance examples") {
  const ExtComplex zero(0.0, 0.0);
  CHECK(chordal_distance(zero, zero) == 0.0);
  CHECK(chordal_distance(zero, ExtComplex::infinity()) == doctest::Approx(2.0).epsilon(1e-15));
  // 2*2 / sqrt(2*2)
  CHECK(chordal_distance(ExtComplex(1, 0), ExtComplex(-1, 0)) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(chordal_distance(ExtComplex::infinity(), ExtComplex::infinity()) == 0.0);
  // far-out finite points do not overflow
  CHECK(chordal_distance(ExtComplex(1e200, 0), ExtComplex::infinity()) == doctest::Approx(2e-200).epsilon(1e-12));
  CHECK(chordal_distance(ExtComplex(1e200, 0), zero) == doctest::Approx(2.0));
}

TEST_CASE("ExtComplex invariants") {
  CHECK(ExtComplex::infinity().re() == 0.0);
  CHECK(ExtComplex::infinity().im() == 0.0);
  CHECK(ExtComplex::from_complex({INFINITY, 0.0}).is_infinity());
  CHECK_THROWS_AS(ExtComplex::from_complex({NAN, 0.0}), std::domain_error);
  CHECK(ExtComplex(0, 0).reciprocal().is_infinity());
  CHECK(ExtComplex::infinity().reciprocal() == ExtComplex(0, 0));
}

TEST_CASE("spherical derivative norm examples") {
  const auto id = RationalMap::identity();
  const auto sq = RationalMap::polynomial({0.0, 0.0, 1.0});
  CHECK(spherical_deriv_norm(id, ExtComplex(0.3, -2.0)) == doctest::Approx(1.0));
  CHECK(spherical_deriv_norm(id, ExtComplex::infinity()) == doctest::Approx(1.0));
  CHECK(spherical_deriv_norm(sq, ExtComplex(0, 0)) == 0.0);
  CHECK(spherical_deriv_norm(sq, ExtComplex(1, 0)) == doctest::Approx(2.0));
  CHECK(spherical_deriv_norm(sq, ExtComplex::infinity()) == 0.0);
}

TEST_CASE("in_disk examples") {
  CHECK(in_disk(ExtComplex(0, 0), SphericalDisk(ExtComplex(0, 0), 0.1)));
  CHECK_FALSE(in_disk(ExtComplex::infinity(), SphericalDisk(ExtComplex(0, 0), 2.0)));
  CHECK_FALSE(in_disk(ExtComplex(1, 0), SphericalDisk(ExtComplex(-1, 0), 1.0)));
  CHECK_THROWS(SphericalDisk(ExtComplex(0, 0), 2.5));
}

TEST_CASE("metric properties on random samples") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 10000; ++t) {
    const ExtComplex a = random_point(rng), b = random_point(rng), c = random_point(rng);
    const double ab = chordal_distance(a, b);
    REQUIRE(ab >= 0.0);
    REQUIRE(ab <= 2.0);
    REQUIRE(ab == chordal_distance(b, a));
    REQUIRE(chordal_distance(a, c) <= ab + chordal_distance(b, c) + 1e-12);
    // chart consistency
    if (a.abs() > 1.0) REQUIRE(std::abs(ab - chordal_distance(a.reciprocal(), b.reciprocal())) < 1e-12);
    // matches the embedding
    const auto ea = a.embed(), eb = b.embed();
    const double e = std::sqrt((ea[0] - eb[0]) * (ea[0] - eb[0]) + (ea[1] - eb[1]) * (ea[1] - eb[1]) +
                               (ea[2] - eb[2]) * (ea[2] - eb[2]));
    REQUIRE(std::abs(e - ab) < 1e-12);
  }
}

TEST_CASE("spherical derivative chain rule") {
  const auto g = RationalMap({0.5, 0.0, 0.0, 1.0}, {-1.0, 1.0});  // z^3/(z-1) + shifted numerator
  const auto h = RationalMap::polynomial({-0.3, 0.2, 1.0});
  const auto gh = compose(g, h);
  std::mt19937_64 rng(11);
  int checked = 0;
  for (int t = 0; t < 2000; ++t) {
    const ExtComplex z = random_point(rng);
    const double inner = spherical_deriv_norm(h, z);
    const double outer = spherical_deriv_norm(g, h(z));
    if (inner < 1e-6 || outer < 1e-6) continue;
    const double lhs = spherical_deriv_norm(gh, z);
    REQUIRE(std::abs(lhs - inner * outer) <= 1e-9 * std::max(lhs, inner * outer));
    ++checked;
  }
  CHECK(checked > 1000);
}
