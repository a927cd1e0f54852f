#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "hopfbif/error.hpp"
#include "hopfbif/flow_sim.hpp"
#include "hopfbif/geometry_scan.hpp"
#include "hopfbif/oracle.hpp"
#include "hopfbif/portrait.hpp"
#include "hopfbif/report.hpp"

using namespace hopfbif;

namespace {

constexpr double kAmd = 0.0162044;

Model fixture(const std::string& name) {
  return parse_model(read_text_file(std::string(HOPFBIF_FIXTURES_DIR) + "/" + name));
}

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double round_sig(double x, int digits) {
  if (x == 0) return 0;
  const double e = std::floor(std::log10(std::fabs(x))) + 1 - digits;
  return std::round(x / std::pow(10.0, e)) * std::pow(10.0, e);
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

Outcome ac1() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = rotate_to_diagonal(fixture("octupole.json").quad).model;
  const double got[] = {r.A, r.C, r.D1, r.Delta1, r.D3, r.Delta3};
  const double ref[] = {0.00610734, -0.0344709, -0.089863, 0.000492281, -0.330852, 0.00187156};
  const char* names[] = {"A", "C", "D1", "Delta1", "D3", "Delta3"};
  for (int k = 0; k < 6; ++k) {
    const double a = round_sig(got[k], 5), b = round_sig(ref[k], 5);
    o.require(std::fabs(a - b) <= 1e-9 * std::fabs(b), std::string(names[k]) + "=" + fmt(got[k]));
  }
  const auto f = f1_roots(r, 0.012).roots;
  const auto v = cpii_values(r).sigma0;
  o.require(f.size() == 2 && std::fabs(f[0] - 0.00489265) < 1e-6 && std::fabs(f[1] - 0.00655611) < 1e-6,
            "f1 roots");
  o.require(v.size() == 2 && std::fabs(v[0] - 0.00497142) < 1e-6 && std::fabs(v[1] - 0.00623676) < 1e-6,
            "CPII values");
  const double dt = seconds_since(t0);
  o.require(dt < 1.0, "runtime " + fmt(dt) + " s");
  if (o.pass && f.size() == 2 && v.size() == 2) {
    o.detail = "f1 {" + fmt(f[0]) + ", " + fmt(f[1]) + "}, f2 {" + fmt(v[0]) + ", " + fmt(v[1]) + "}, " + fmt(dt) + " s";
  }
  return o;
}

Outcome ac2() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto q = rotate_to_diagonal(fixture("octupole.json").quad).model;
  const auto seq = bifurcation_sequence(q.to_poly(), 0.004, 0.012, 1e-7);
  const auto f = f1_roots(q, 0.012).roots;
  const auto v = cpii_values(q).sigma0;
  o.require(seq.events.size() == 4, std::to_string(seq.events.size()) + " events");
  if (seq.events.size() == 4 && f.size() == 2 && v.size() == 2) {
    const EventType type[] = {EventType::SaddleNode, EventType::Pitchfork, EventType::InversePitchfork,
                              EventType::InverseSaddleNode};
    const double thr[] = {f[1], v[1], v[0], f[0]};
    for (int k = 0; k < 4; ++k) {
      const auto& e = seq.events[k];
      o.require(e.type == type[k], "event " + std::to_string(k) + " is " + std::string(to_string(e.type)));
      o.require(e.sigma0_high - e.sigma0_low <= 1e-7, "bracket width " + fmt(e.sigma0_high - e.sigma0_low));
      o.require(e.sigma0_low <= thr[k] && thr[k] <= e.sigma0_high, "bracket misses " + fmt(thr[k]));
    }
    const auto& sn = seq.events[0];
    o.require(sn.born.size() == 2, "saddle-node births two tangencies");
    const auto& pf = seq.events[1];
    o.require(pf.born.size() == 2 && pf.flipped.size() == 1 && pf.flipped[0].find("unstable->stable") != std::string::npos,
              "pitchfork stabilizes one tangency and births the F-pair");
    // The F-pair born at the pitchfork is unstable.
    const auto below = critical_census(q.to_poly(), pf.sigma0_low - 1e-6);
    o.require(below.cpii.size() == 2 && std::all_of(below.cpii.begin(), below.cpii.end(),
                                                    [](const CriticalPoint& c) { return c.stability == Stability::Unstable; }),
              "F-pair unstable");
    const auto& ipf = seq.events[2];
    o.require(ipf.died.size() == 2 && ipf.flipped.size() == 1 && ipf.flipped[0].find("stable->unstable") != std::string::npos,
              "inverse pitchfork destabilizes one tangency");
    o.require(seq.events[3].died.size() == 2, "inverse saddle-node annihilates two tangencies");
  }
  const double dt = seconds_since(t0);
  o.require(dt < 30.0, "runtime " + fmt(dt) + " s");
  if (o.pass) {
    std::string s;
    for (const auto& e : seq.events) s += std::string(to_string(e.type)) + "@" + fmt(e.sigma0_low) + " ";
    o.detail = s + fmt(dt) + " s";
  }
  return o;
}

Outcome ac3() {
  Outcome o;
  const auto a = fixture("appendix_a.json").quad;
  const auto b = fixture("appendix_b.json").quad;
  o.require(conic_class(a) == ConicClass::Ellipse, "Appendix A not an ellipse");
  o.require(conic_class(b) == ConicClass::Hyperbola, "Appendix B not a hyperbola");
  o.require(a.B * a.B < 4 * a.A * a.C, "B^2 < 4AC for A");
  o.require(b.B * b.B > 4 * b.A * b.C, "B^2 > 4AC for B");

  // Elliptic: the pitchfork births a stable, sign-definite F-pair.
  const auto seq = bifurcation_sequence(fixture("appendix_a.json").poly, 1e-4, kAmd, 1e-8);
  const auto pf = std::find_if(seq.events.begin(), seq.events.end(),
                               [](const BifurcationEvent& e) { return e.type == EventType::Pitchfork; });
  o.require(pf != seq.events.end(), "no pitchfork in the elliptic model");
  if (pf != seq.events.end()) {
    const double s = pf->sigma0_low - 1e-6;
    const auto c = critical_census(fixture("appendix_a.json").poly, s);
    o.require(c.cpii.size() == 2, "F-pair count");
    for (const auto& cp : c.cpii) o.require(cp.stability == Stability::Stable, "elliptic F-pair stable");
    const auto ctr = cpii_center_and_stability(a, s);
    o.require(ctr.exists && ctr.stable, "elliptic Hessian sign-definite");
  }

  // Hyperbolic: the Hessian is indefinite, so any F-pair is unstable. The
  // Appendix-B truncation has no real CPII values; the pair is observed on the
  // hyperbolic octupole fixture instead.
  const auto bq = rotate_to_diagonal(b).model;
  o.require(bq.A * bq.C < 0, "Appendix B Hessian indefinite");
  const auto bvals = cpii_values(bq);
  const auto oq = rotate_to_diagonal(fixture("octupole.json").quad).model;
  const auto ov = cpii_values(oq).sigma0;
  o.require(ov.size() == 2, "octupole CPII window");
  if (ov.size() == 2) {
    const auto c = critical_census(oq.to_poly(), 0.5 * (ov[0] + ov[1]));
    o.require(c.cpii.size() == 2, "hyperbolic F-pair count");
    for (const auto& cp : c.cpii) o.require(cp.stability == Stability::Unstable, "hyperbolic F-pair unstable");
  }
  if (o.pass) {
    o.detail = "A: ellipse, stable F-pair; B: hyperbola, indefinite Hessian (" + std::to_string(bvals.sigma0.size()) +
               " real CPII values), octupole F-pair unstable";
  }
  return o;
}

struct OracleStats {
  std::size_t samples = 0, skipped = 0, count_mismatch = 0, position_mismatch = 0;
};

void compare_at(const QuadHopfHamiltonian& q, double s0, std::size_t n, OracleStats& st, std::string& first_failure) {
  const auto z = q.to_poly();
  const auto cps = find_cpi(z, s0);
  const auto grid = grid_tangency_scan(z, s0, n);
  const auto roots = cpi_quartic_roots(q, s0);
  const auto brute = quartic_bruteforce(q, s0, n);
  ++st.samples;
  const bool counts = cps.size() == grid.size() && roots.roots.size() == brute.count && cps.size() == roots.roots.size();
  if (!counts) {
    ++st.count_mismatch;
    if (first_failure.empty()) {
      first_failure = "s0=" + fmt(s0) + " find_cpi " + std::to_string(cps.size()) + " grid " + std::to_string(grid.size()) +
                      " quartic " + std::to_string(roots.roots.size()) + " brute " + std::to_string(brute.count);
    }
    return;
  }
  const double h = kTwoPi / static_cast<double>(n);
  bool pos = true;
  for (const auto& cp : cps) {
    double best = INFINITY;
    for (const auto& g : grid) best = std::min(best, std::fabs(angle_diff(g.theta, cp.theta)));
    pos &= best <= h;
  }
  const double hmu = (brute.hi - brute.lo) / static_cast<double>(n - 1);
  for (std::size_t k = 0; k < brute.roots.size(); ++k) pos &= std::fabs(brute.roots[k] - roots.roots[k].mu) <= hmu;
  if (!pos) {
    ++st.position_mismatch;
    if (first_failure.empty()) first_failure = "position mismatch at s0=" + fmt(s0);
  }
}

Outcome ac4() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  constexpr std::size_t n = 100000;
  constexpr int per_model = 20;
  std::vector<std::pair<QuadHopfHamiltonian, double>> models;
  for (const char* name : {"octupole.json", "appendix_a.json", "appendix_b.json"}) {
    const auto m = fixture(name);
    models.emplace_back(rotate_to_diagonal(m.quad).model, m.sigma0_max.value_or(kAmd));
  }
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(-1, 1);
  while (models.size() < 103) {
    QuadHopfHamiltonian q{0.01 * u(rng), 0.01 * u(rng), 0.01 * u(rng), 0.2 * u(rng), 0.002 * u(rng),
                          0.2 * u(rng), 0.002 * u(rng), 0, 0, 0};
    if (std::fabs(q.A - q.C) < 1e-4 && std::fabs(q.B) < 1e-4) continue;
    models.emplace_back(rotate_to_diagonal(q).model, 0.02);
  }

  OracleStats st;
  std::string first_failure;
  for (const auto& [q, smax] : models) {
    // Event brackets: σ₀ within the oracle's grid resolution of a count change.
    const auto thr = f1_roots(q, smax).roots;
    const double window = 1e-3 * smax;
    for (int k = 1; k <= per_model; ++k) {
      const double s0 = smax * (k - 0.5) / per_model;
      if (std::any_of(thr.begin(), thr.end(), [&](double t) { return std::fabs(t - s0) < window; })) {
        ++st.skipped;
        continue;
      }
      compare_at(q, s0, n, st, first_failure);
    }
  }
  o.require(st.count_mismatch == 0, std::to_string(st.count_mismatch) + " count disagreements");
  o.require(st.position_mismatch == 0, std::to_string(st.position_mismatch) + " position disagreements");
  if (!first_failure.empty()) o.require(false, "first: " + first_failure);
  const double dt = seconds_since(t0);
  o.require(dt < 300, "runtime " + fmt(dt) + " s");
  if (o.pass) {
    o.detail = std::to_string(models.size()) + " models, " + std::to_string(st.samples) + " sigma0 samples, " +
               std::to_string(st.skipped) + " inside event windows, 0 disagreements, " + fmt(dt) + " s";
  }
  return o;
}

Outcome ac5() {
  Outcome o;
  const auto z = fixture("appendix_b.json").poly;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd(0, 1);
  std::uniform_real_distribution<double> us(0.1, 1.0);
  double casimir = 0, energy = 0;
  for (int k = 0; k < 20; ++k) {
    const double s0 = kAmd * us(rng);
    double x = nd(rng), y = nd(rng), w = nd(rng);
    const double r = std::sqrt(x * x + y * y + w * w);
    const HopfState h{s0, s0 * x / r, s0 * y / r, s0 * w / r};
    const auto tr = integrate_reduced(z, h, 1e4, 1e-10, {false, 0});
    casimir = std::max(casimir, tr.max_casimir_drift);
    energy = std::max(energy, tr.max_energy_drift);
  }
  o.require(casimir < 1e-8, "Casimir drift " + fmt(casimir));
  o.require(energy < 1e-8, "energy drift " + fmt(energy));

  double worst = 0;
  std::size_t points = 0;
  for (const char* name : {"appendix_a.json", "appendix_b.json", "octupole.json"}) {
    const auto m = fixture(name);
    const auto& zz = m.poly;
    for (int k = 1; k <= 20; ++k) {
      const double s0 = m.sigma0_max.value_or(kAmd) * k / 20.0;
      const auto c = critical_census(zz, s0);
      for (const auto* set : {&c.cpi, &c.cpii}) {
        for (const auto& cp : *set) {
          worst = std::max(worst, equilibrium_residual(zz, cp.location));
          ++points;
        }
      }
    }
  }
  o.require(worst < 1e-10, "equilibrium residual " + fmt(worst));
  if (o.pass) {
    o.detail = "Casimir " + fmt(casimir) + ", energy " + fmt(energy) + ", " + std::to_string(points) +
               " critical points with residual <= " + fmt(worst);
  }
  return o;
}

double point_segment(const std::array<double, 2>& p, const std::array<double, 2>& a, const std::array<double, 2>& b) {
  const double dx = b[0] - a[0], dy = b[1] - a[1];
  const double L = dx * dx + dy * dy;
  double t = L > 0 ? ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / L : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p[0] - a[0] - t * dx, p[1] - a[1] - t * dy);
}

Outcome ac6() {
  Outcome o;
  const auto z = fixture("appendix_b.json").poly;
  const auto h = to_poincare(z);
  const double s0 = 0.01;
  const double R = std::sqrt(2 * s0);
  std::vector<PoincareState> starts;
  std::vector<double> levels;
  for (int k = 0; k < 10; ++k) {
    const double ang = 0.7 * k + 0.3, rad = R * (0.1 + 0.085 * k);
    const auto x0 = section_plane_to_poincare(s0, rad * std::cos(ang), rad * std::sin(ang));
    starts.push_back(x0);
    levels.push_back(h.value(x0.as_array()));
  }
  PortraitOptions opt;
  opt.grid = 4096;
  opt.markers = false;
  const auto portrait = contour_portrait(z, s0, levels, opt);
  double worst = 0;
  std::size_t crossings = 0;
  for (int k = 0; k < 10; ++k) {
    const auto sec = poincare_section(h, starts[k], 2e4, 1e-12);
    for (const auto& p : sec.points) {
      const std::array<double, 2> q{p.chart_X2(), p.chart_Y2()};
      double best = INFINITY;
      for (const auto& c : portrait.curves) {
        if (c.level != levels[k]) continue;
        for (std::size_t i = 0; i + 1 < c.points.size(); ++i) best = std::min(best, point_segment(q, c.points[i], c.points[i + 1]));
        if (c.points.size() == 1) best = std::min(best, std::hypot(q[0] - c.points[0][0], q[1] - c.points[0][1]));
      }
      worst = std::max(worst, best);
      ++crossings;
    }
  }
  o.require(crossings >= 10, "too few crossings");
  o.require(worst <= 1e-6 * R, "Hausdorff distance " + fmt(worst) + " > " + fmt(1e-6 * R));
  if (o.pass) o.detail = std::to_string(crossings) + " crossings, max distance " + fmt(worst / R) + " * sqrt(2 sigma0)";
  return o;
}

Outcome ac7() {
  Outcome o;
  const auto z = fixture("appendix_a.json").poly;
  const auto d = domain_limits(z, kAmd, 128, 0);
  bool ordered = true, decreasing = true;
  for (std::size_t k = 0; k < d.sigma0.size(); ++k) {
    ordered &= d.E_L[k] < d.E_R[k];
    if (k > 0) decreasing &= d.E_L[k] < d.E_L[k - 1] && d.E_R[k] < d.E_R[k - 1];
  }
  o.require(ordered, "E_L < E_R");
  o.require(decreasing, "limits decrease with sigma0");
  // Apex: both limits shrink to zero with σ₀.
  const auto apex = energy_limits(z, 1e-7 * kAmd);
  o.require(std::fabs(apex.E_L) < 1e-5 * std::fabs(d.E_min) && std::fabs(apex.E_R) < 1e-5 * std::fabs(d.E_min),
            "apex at the origin");
  o.require(d.E_min == d.E_L.back(), "E_min attained at sigma0 = AMD");
  // σ₀,max(ℰ) = AMD on (E_min, E_23) and drops below it above E_23.
  // σ₀,min(ℰ) > 0 bounds the domain from below on the same interval.
  for (double t : {0.25, 0.5, 0.75}) {
    const double e = d.E_min + t * (d.E_23 - d.E_min);
    const auto lim = sigma0_limits(z, e, kAmd);
    o.require(lim.sigma0_max == kAmd, "sigma0_max = AMD below E_23");
    o.require(lim.sigma0_min > 0 && lim.sigma0_min < kAmd, "sigma0_min inside (0, AMD) below E_23");
  }
  // Above E_23, σ₀,max(ℰ) < AMD and decreases with ℰ.
  double prev = kAmd;
  for (double t : {0.9, 0.6, 0.3}) {
    const double smax = sigma0_limits(z, t * d.E_23, kAmd).sigma0_max;
    o.require(smax < prev, "sigma0_max decreasing above E_23");
    prev = smax;
  }
  if (o.pass) {
    o.detail = "wedge with sigma0_max = AMD = 0.0162044, E_min = " + fmt(d.E_min) + ", E_23 = " + fmt(d.E_23) +
               " (quadratic truncation); full-model portraits out of scope";
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"AC1 octupole thresholds", ac1},       {"AC2 hyperbolic sequence structure", ac2},
      {"AC3 conic classification", ac3},      {"AC4 analytic/oracle equivalence", ac4},
      {"AC5 conservation", ac5},              {"AC6 section/portrait equivalence", ac6},
      {"AC7 domain shape", ac7},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
