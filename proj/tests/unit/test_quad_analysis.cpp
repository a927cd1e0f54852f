#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "hopfbif/error.hpp"
#include "hopfbif/quad_analysis.hpp"
#include "support.hpp"

using namespace hopfbif;
using doctest::Approx;

namespace {

QuadHopfHamiltonian random_quad(std::mt19937_64& rng, bool diagonal) {
  std::uniform_real_distribution<double> u(-1, 1);
  QuadHopfHamiltonian q;
  q.A = 0.01 * u(rng);
  q.B = diagonal ? 0.0 : 0.01 * u(rng);
  q.C = 0.01 * u(rng);
  q.D1 = 0.1 * u(rng);
  q.Delta1 = 0.001 * u(rng);
  q.D3 = 0.1 * u(rng);
  q.Delta3 = 0.001 * u(rng);
  return q;
}

}  // namespace

TEST_CASE("conic classification") {
  CHECK(conic_class(testing::load_fixture("appendix_a.json").quad) == ConicClass::Ellipse);
  CHECK(conic_class(testing::load_fixture("appendix_b.json").quad) == ConicClass::Hyperbola);
  CHECK(conic_class(testing::load_fixture("octupole.json").quad) == ConicClass::Hyperbola);
  CHECK(conic_class({1, 0, 1, 0, 0, 0, 0, 0, 0, 0}) == ConicClass::Ellipse);
  CHECK(conic_class({1, 2, 1, 0, 0, 0, 0, 0, 0, 0}) == ConicClass::ParabolicDegenerate);
}

TEST_CASE("rotation to the diagonal form") {
  QuadHopfHamiltonian id{0.3, 0, 0.1, 1, 2, 3, 4, 0, 0, 0};
  const auto r0 = rotate_to_diagonal(id);
  CHECK(r0.rotation.alpha == 1);
  CHECK(r0.rotation.beta == 0);
  CHECK(r0.model.A == 0.3);

  const auto r = rotate_to_diagonal(testing::load_fixture("octupole.json").quad);
  CHECK(r.model.B == 0);
  CHECK(r.model.A == Approx(0.00610734).epsilon(5e-6));
  CHECK(r.model.C == Approx(-0.0344709).epsilon(5e-6));
  CHECK(r.model.D1 == Approx(-0.089863).epsilon(5e-6));
  CHECK(r.model.Delta1 == Approx(0.000492281).epsilon(5e-6));
  CHECK(r.model.D3 == Approx(-0.330852).epsilon(5e-6));
  CHECK(r.model.Delta3 == Approx(0.00187156).epsilon(5e-6));

  CHECK_THROWS_AS(rotate_to_diagonal({1, 0, 1, 0, 0, 0, 0, 0, 0, 0}), Error);

  std::mt19937_64 rng(11);
  for (int k = 0; k < 200; ++k) {
    const auto q = random_quad(rng, false);
    const auto rq = rotate_to_diagonal(q);
    const double sc = std::max({std::fabs(q.A), std::fabs(q.B), std::fabs(q.C)});
    CHECK(std::fabs(rq.model.B) <= 1e-12 * sc);
    CHECK(std::fabs(rq.model.A + rq.model.C - q.A - q.C) <= 1e-12 * sc);
    CHECK(std::fabs(rq.model.A * rq.model.C - (q.A * q.C - q.B * q.B / 4)) <= 1e-12 * sc * sc);
    // Energies agree point by point.
    const HopfState h = testing::random_on_sphere(rng, 0.01);
    const auto t = rq.rotation.to_rotated(h);
    CHECK(rq.model.value(0.01, t.sigma1, t.sigma3) == Approx(q.value(0.01, h.sigma1, h.sigma3)).epsilon(1e-12));
    const auto o = rq.rotation.to_original(t);
    CHECK(o.sigma1 == Approx(h.sigma1));
    CHECK(o.sigma3 == Approx(h.sigma3));
  }
}

TEST_CASE("CPI quartic roots on the octupole model") {
  const auto q = testing::octupole_quad();
  const auto r55 = cpi_quartic_roots(q, 0.0055);
  CHECK(r55.roots.size() == 4);
  const auto r10 = cpi_quartic_roots(q, 0.010);
  CHECK(r10.roots.size() == 2);
  for (const auto* set : {&r55, &r10}) {
    const double s0 = set == &r55 ? 0.0055 : 0.010;
    CHECK(std::is_sorted(set->roots.begin(), set->roots.end(),
                         [](const CpiRoot& a, const CpiRoot& b) { return a.mu < b.mu; }));
    for (const auto& r : set->roots) {
      CHECK(std::fabs(r.sigma1 * r.sigma1 + r.sigma3 * r.sigma3 - s0 * s0) <= 1e-10 * s0 * s0);
      CHECK(std::fabs(r.residual) < 1e-11);
    }
  }
  CHECK_THROWS_AS(cpi_quartic_roots({1, 0, 1, 1, 0, 1, 0, 0, 0, 0}, 1.0), Error);
  CHECK_THROWS_AS(cpi_quartic_roots({1, 0.5, 2, 1, 0, 1, 0, 0, 0, 0}, 1.0), Error);
}

TEST_CASE("CPI quartic symmetric branch") {
  // E(σ₀) = 0: the roots μ = C satisfy the stationarity with σ₃ free.
  QuadHopfHamiltonian q{0.5, 0, -1.0, 0.2, 0, 0, 0, 0, 0, 0};
  const auto r = cpi_quartic_roots(q, 1.0);
  CHECK(r.branch == CpiBranch::SymmetricSigma3);
  for (const auto& root : r.roots) CHECK(root.sigma1 * root.sigma1 + root.sigma3 * root.sigma3 == Approx(1.0));
  CHECK(r.roots.size() >= 2);
}

TEST_CASE("quartic coefficients evaluate the quartic") {
  const auto q = testing::octupole_quad();
  const auto c = cpi_quartic_coefficients(q, 0.006);
  const double T1 = q.T1(0.006), T3 = q.T3(0.006);
  for (double mu : {-0.04, -0.01, 0.0, 0.005, 0.02}) {
    const double a = (q.A - mu) * (q.A - mu), cc = (q.C - mu) * (q.C - mu);
    const double direct = 4 * a * cc - a * T3 - cc * T1;
    const double poly = c[0] + mu * (c[1] + mu * (c[2] + mu * (c[3] + mu * c[4])));
    CHECK(poly == Approx(direct).epsilon(1e-10).scale(1e-16));
  }
}

TEST_CASE("discriminant and f1") {
  const auto q = testing::octupole_quad();
  const auto qa = discriminant_q(q, 0.0045), qb = discriminant_q(q, 0.0055);
  CHECK((qa.value > 0) != (qb.value > 0));

  QuadHopfHamiltonian t = q;
  const double s_t1 = -q.Delta1 / q.D1;
  CHECK(discriminant_q(t, s_t1).artifact);

  const auto roots = f1_roots(q, 0.012);
  REQUIRE(roots.roots.size() == 2);
  CHECK(std::fabs(roots.roots[0] - 0.00489265) < 1e-6);
  CHECK(std::fabs(roots.roots[1] - 0.00655611) < 1e-6);
  for (double s : roots.roots) {
    const auto set = cpi_quartic_roots(q, s);
    double gap = INFINITY;
    for (std::size_t k = 1; k < set.roots.size(); ++k) gap = std::min(gap, set.roots[k].mu - set.roots[k - 1].mu);
    if (set.roots.size() < 4) gap = 0;
    double mu_scale = 0;
    for (const auto& r : set.roots) mu_scale = std::max(mu_scale, std::fabs(r.mu));
    CHECK(gap < 1e-5 * mu_scale);
  }

  QuadHopfHamiltonian flat = q;
  flat.Delta1 = flat.Delta3 = 0;
  const auto fr = f1_roots(flat, 0.012);
  CHECK(fr.constant_in_sigma0);
  CHECK(fr.roots.empty());
}

TEST_CASE("discriminant vanishes at the f1 roots of random models") {
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int k = 0; k < 300 && checked < 40; ++k) {
    const auto q = random_quad(rng, true);
    if (std::fabs(q.A - q.C) < 1e-4) continue;
    const auto roots = f1_roots(q, 0.05);
    for (double s : roots.roots) {
      const auto d = discriminant_q(q, s);
      if (d.artifact) continue;
      // Q relative to the sum of the magnitudes of its terms.
      const double dd = (q.A - q.C) * (q.A - q.C), T1 = q.T1(s), T3 = q.T3(s), u = 4 * dd - T1;
      const double scale = 64 * dd * T1 * T3 *
                           (std::fabs(u * u * u) + 3 * T3 * (16 * dd * dd + 28 * T1 * dd + T1 * T1) +
                            3 * T3 * T3 * std::fabs(u) + T3 * T3 * T3);
      CHECK(std::fabs(d.value) <= 1e-9 * scale);
      ++checked;
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("CPII values") {
  const auto q = testing::octupole_quad();
  const auto v = cpii_values(q);
  REQUIRE(v.sigma0.size() == 2);
  CHECK(std::fabs(v.sigma0[0] - 0.00497142) < 1e-6);
  CHECK(std::fabs(v.sigma0[1] - 0.00623676) < 1e-6);
  for (double s : v.sigma0) {
    const double s1 = -q.D(s) / (2 * q.A), s3 = -q.E(s) / (2 * q.C);
    CHECK(std::fabs(s1 * s1 + s3 * s3 - s * s) <= 1e-10 * s * s);
  }

  const auto none = cpii_values({1, 0, 1, 1, 0, 1, 0, 0, 0, 0});
  CHECK(none.sigma0.empty());
  CHECK(f2({1, 0, 1, 1, 0, 1, 0, 0, 0, 0}, 0.3) == Approx(-2));
  CHECK_THROWS_AS(cpii_values({0, 0, 1, 1, 0, 1, 0, 0, 0, 0}), Error);
}

TEST_CASE("CPII center and stability") {
  const auto q = testing::octupole_quad();
  const auto c55 = cpii_center_and_stability(q, 0.0055);
  CHECK(c55.exists);
  CHECK_FALSE(c55.stable);
  CHECK(cpii_center_and_stability(q, 0.0070).exists == false);

  // Elliptic model: inside its window the pair is stable.
  const auto qa = rotate_to_diagonal(testing::load_fixture("appendix_a.json").quad).model;
  CHECK(qa.A * qa.C > 0);
  const auto va = cpii_values(qa);
  REQUIRE(va.sigma0.size() == 2);
  const auto ca = cpii_center_and_stability(qa, 0.5 * (va.sigma0[0] + va.sigma0[1]));
  CHECK(ca.exists);
  CHECK(ca.stable);

  // General B: the center solves the linear system.
  const auto raw = testing::load_fixture("appendix_a.json").quad;
  const auto cr = cpii_center_and_stability(raw, 0.009);
  const double g1 = 2 * raw.A * cr.sigma1 + raw.B * cr.sigma3 + raw.D(0.009);
  const double g3 = raw.B * cr.sigma1 + 2 * raw.C * cr.sigma3 + raw.E(0.009);
  CHECK(std::fabs(g1) < 1e-15);
  CHECK(std::fabs(g3) < 1e-15);
}
