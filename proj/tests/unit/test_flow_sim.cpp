#include <doctest.h>

#include <cmath>
#include <random>

#include "hopfbif/error.hpp"
#include "hopfbif/flow_sim.hpp"
#include "hopfbif/portrait.hpp"
#include "support.hpp"

using namespace hopfbif;
using doctest::Approx;

TEST_CASE("dopri5 integrates a harmonic oscillator") {
  OdeRhs<2> f = [](double, const std::array<double, 2>& y) { return std::array<double, 2>{y[1], -y[0]}; };
  std::array<double, 2> last{};
  const auto st = dopri5<2>(f, {1.0, 0.0}, 0.0, kTwoPi, 1e-12, 1e-12,
                            [&](double, const std::array<double, 2>& y, const std::array<double, 2>&) {
                              last = y;
                              return true;
                            });
  CHECK(last[0] == Approx(1.0).epsilon(1e-9));
  CHECK(std::fabs(last[1]) < 1e-9);
  CHECK(st.accepted > 10);
}

TEST_CASE("rigid rotation under Z = sigma3") {
  const PolyHopfHamiltonian z(Polynomial<3>::variable(2));
  const auto tr = integrate_reduced(z, {1, 1, 0, 0}, kPi, 1e-12);
  const auto& end = tr.states.back();
  CHECK(end.sigma1 == Approx(1.0).epsilon(1e-9));
  CHECK(std::fabs(end.sigma2) < 1e-9);
  CHECK(std::fabs(end.sigma3) < 1e-12);
  // Quarter period: σ₂ = −1.
  const auto q = integrate_reduced(z, {1, 1, 0, 0}, kPi / 4, 1e-12);
  CHECK(q.states.back().sigma2 == Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("a tangency point is a fixed point of the flow") {
  const auto z = testing::octupole_quad().to_poly();
  const double T = 1e3, tol = 1e-10;
  for (const auto& cp : find_cpi(z, 0.0055)) {
    const auto tr = integrate_reduced(z, cp.location, T, tol);
    const auto& e = tr.states.back();
    const double d = std::hypot(e.sigma1 - cp.location.sigma1, e.sigma2 - cp.location.sigma2,
                                e.sigma3 - cp.location.sigma3);
    CHECK(d <= tol * T * 0.0055);
  }
}

TEST_CASE("conservation on the hyperbolic appendix model") {
  const auto z = testing::load_fixture("appendix_b.json").poly;
  std::mt19937_64 rng(17);
  for (int k = 0; k < 5; ++k) {
    const auto h = testing::random_on_sphere(rng, 0.0162044 * (0.2 + 0.16 * k));
    const auto tr = integrate_reduced(z, h, 1e4, 1e-10, {false, 0});
    CHECK(tr.max_casimir_drift < 1e-9);
    CHECK(tr.max_energy_drift < 1e-9);
    CHECK(tr.states.size() == 2);
  }
}

TEST_CASE("harmonic section crossings are spaced by 2 pi") {
  std::vector<PoincarePolyHamiltonian::Term> terms = {{2, 0, 0, 0, 0.5}, {0, 2, 0, 0, 0.5}, {0, 0, 2, 0, 0.5}, {0, 0, 0, 2, 0.5}};
  const PoincarePolyHamiltonian h{std::span<const PoincarePolyHamiltonian::Term>(terms)};
  const auto r = poincare_section(h, {0.3, 0.1, 0.5, -0.2}, 1000 * kTwoPi + 1, 1e-14);
  REQUIRE(r.points.size() >= 999);
  for (std::size_t k = 1; k < r.points.size(); ++k) {
    CHECK(r.points[k].t - r.points[k - 1].t == Approx(kTwoPi).epsilon(1e-8));
  }
  for (const auto& p : r.points) CHECK(std::fabs(p.energy_residual) < 1e-10);
  // Decoupled oscillators: the section is a single point repeated (a degenerate circle).
  CHECK(r.points.back().X2 == Approx(r.points.front().X2).epsilon(1e-7));
}

TEST_CASE("integrable section points lie on one level curve") {
  const auto z = testing::load_fixture("appendix_b.json").poly;
  const auto h = to_poincare(z);
  const PoincareState x0{0.06, 0.02, 0.1, 0.0};
  const double s0 = poincare_to_hopf(x0).sigma0;
  const double e0 = h.value(x0.as_array());
  const auto r = poincare_section(h, x0, 2e4, 1e-12);
  REQUIRE(r.points.size() > 5);
  const auto lim = energy_limits(z, s0);
  for (const auto& p : r.points) {
    CHECK(std::fabs(section_energy(z, s0, p.chart_X2(), p.chart_Y2()) - e0) <= 1e-8 * (lim.E_R - lim.E_L));
  }
}

TEST_CASE("section integration leaves the feasible domain") {
  const auto z = testing::load_fixture("appendix_b.json").poly;
  SectionOptions opt;
  SystemParams p = testing::load_fixture("params.json").params;
  p.AMD = 1e-12;
  opt.params = p;
  CHECK_THROWS_AS(poincare_section(to_poincare(z), {0.06, 0.02, 0.1, 0.0}, 10.0, 1e-10, opt), Error);
}

TEST_CASE("floquet confirmation") {
  const PolyHopfHamiltonian zs(Polynomial<3>::variable(2));
  CriticalPoint pole;
  pole.location = {1, 0, 0, 1};
  classify_cpi(zs, pole);
  const auto f = floquet_confirm(zs, pole);
  CHECK(f.agrees);
  CHECK(f.stability == Stability::Stable);
  CHECK(std::fabs(f.lambda1.imag()) == Approx(2.0).epsilon(1e-6));
  CHECK(std::fabs(f.lambda1.real()) < 1e-6);

  const auto z = testing::octupole_quad().to_poly();
  int unstable = 0;
  for (auto& cp : find_cpi(z, 0.0064)) {
    const auto fc = floquet_confirm(z, cp);
    CHECK(fc.agrees);
    if (fc.stability == Stability::Unstable) {
      ++unstable;
      CHECK(std::fabs(fc.lambda1.real()) > 0);
      CHECK(fc.lambda1.real() == Approx(-fc.lambda2.real()).epsilon(1e-4));
    }
  }
  CHECK(unstable == 1);
}
