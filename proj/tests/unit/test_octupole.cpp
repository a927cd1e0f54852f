#include <doctest.h>

#include <cmath>

#include "hopfbif/error.hpp"
#include "hopfbif/octupole.hpp"
#include "support.hpp"

using namespace hopfbif;
using doctest::Approx;

TEST_CASE("zero AMD drops the AMD terms") {
  SystemParams p = testing::load_fixture("params.json").params;
  p.AMD = 0;
  const auto c = octupole_coefficients(p);
  const double d1 = -15 * std::pow(p.a2, 11.0 / 4) * std::sqrt(p.G) * std::sqrt(p.m2) * std::sqrt(p.m3) /
                    (16 * std::pow(p.a3, 17.0 / 4) * std::sqrt(p.m0));
  CHECK(c.Delta1til == Approx(d1).epsilon(1e-14));
  const double d3 = 3 * std::pow(p.a2, 1.5) * std::sqrt(p.G) / (8 * std::pow(p.a3, 3.5) * std::sqrt(p.m0)) *
                    (std::sqrt(p.a2) * p.m2 - std::sqrt(p.a3) * p.m3);
  CHECK(c.Delta3til == Approx(d3).epsilon(1e-14));
  CHECK(c.Atil == 0);
  const double a = -3 * std::sqrt(p.G) / (4 * std::pow(p.a3, 3.5) * std::sqrt(p.m0)) *
                   (2 * std::pow(p.a2, 1.5) * std::sqrt(p.a3) * p.m3 + p.a2 * p.a2 * p.m2);
  CHECK(c.a == Approx(a).epsilon(1e-14));
}

TEST_CASE("secular frequencies are affine in AMD") {
  SystemParams p = testing::load_fixture("params.json").params;
  auto at = [&](double amd) {
    p.AMD = amd;
    return octupole_coefficients(p);
  };
  const auto c0 = at(0), c1 = at(1e-5), c2 = at(2e-5);
  CHECK(c2.a - 2 * c1.a + c0.a == Approx(0).scale(std::fabs(c0.a)).epsilon(1e-12));
  CHECK(c2.b - 2 * c1.b + c0.b == Approx(0).scale(std::fabs(c0.b)).epsilon(1e-12));
}

TEST_CASE("vanishing secular frequency is rejected") {
  SystemParams p = testing::load_fixture("params.json").params;
  p.AMD = 0;
  const double a0 = octupole_coefficients(p).a;
  p.AMD = 1e-5;
  const double a1 = octupole_coefficients(p).a;
  p.AMD = -a0 * 1e-5 / (a1 - a0);
  REQUIRE(p.AMD > 0);
  REQUIRE(p.AMD < p.Lambda2() + p.Lambda3());
  CHECK_THROWS_WITH_AS(octupole_coefficients(p), doctest::Contains("secular-frequency-degenerate"), Error);
}

TEST_CASE("structural copy into the quadratic model") {
  SystemParams p = testing::load_fixture("params.json").params;
  const auto c = octupole_coefficients(p);
  const auto q = octupole_to_quad(c);
  CHECK(q.A == c.Atil);
  CHECK(q.B == c.Btil);
  CHECK(q.C == c.Ctil);
  CHECK(q.D1 == c.D1til);
  CHECK(q.Delta1 == c.Delta1til);
  CHECK(q.D3 == c.D3til);
  CHECK(q.Delta3 == c.Delta3til);
  CHECK(q.F0 == 0);
}

TEST_CASE("fixture coefficients") {
  const auto raw = testing::load_fixture("octupole.json").quad;
  CHECK(conic_class(raw) == ConicClass::Hyperbola);
  const auto r = rotate_to_diagonal(raw).model;
  CHECK(r.A == Approx(0.00610734).epsilon(5e-6));
  CHECK(r.C == Approx(-0.0344709).epsilon(5e-6));
  const auto f = f1_roots(r, 0.012);
  const auto v = cpii_values(r);
  REQUIRE(f.roots.size() == 2);
  REQUIRE(v.sigma0.size() == 2);
  CHECK(std::fabs(f.roots[0] - 0.00489265) < 1e-6);
  CHECK(std::fabs(f.roots[1] - 0.00655611) < 1e-6);
  CHECK(std::fabs(v.sigma0[0] - 0.00497142) < 1e-6);
  CHECK(std::fabs(v.sigma0[1] - 0.00623676) < 1e-6);
}
