#include "hopfbif/flow_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hopfbif/error.hpp"
#include "hopfbif/numeric.hpp"

namespace hopfbif {

namespace {

// Dormand–Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;

}  // namespace

template <std::size_t N>
IntegratorStats dopri5(const OdeRhs<N>& f, std::array<double, N> y, double t0, double t1, double rtol, double atol,
                       const OdeObserver<N>& observer, double h0) {
  using V = std::array<double, N>;
  IntegratorStats st;
  st.min_step = std::numeric_limits<double>::infinity();
  const double dir = t1 >= t0 ? 1.0 : -1.0;
  const double span = std::fabs(t1 - t0);
  if (span == 0) return st;
  auto axpy = [](const V& base, double h, std::initializer_list<std::pair<double, const V*>> terms) {
    V out = base;
    for (std::size_t i = 0; i < N; ++i) {
      double s = 0;
      for (const auto& [c, k] : terms) s += c * (*k)[i];
      out[i] += h * s;
    }
    return out;
  };
  auto err_norm = [&](const V& a, const V& b, const V& e) {
    double m = 0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sc = atol + rtol * std::max(std::fabs(a[i]), std::fabs(b[i]));
      m = std::max(m, std::fabs(e[i]) / sc);
    }
    return m;
  };

  double t = t0;
  // Compensated (Kahan) accumulation of y and t over long runs.
  V comp{};
  double tcomp = 0;
  V k1 = f(t, y);
  double h = h0;
  if (!(h > 0)) {
    // Initial step from the usual two-norm estimate.
    double d0 = 0, d1 = 0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sc = atol + rtol * std::fabs(y[i]);
      d0 = std::max(d0, std::fabs(y[i]) / sc);
      d1 = std::max(d1, std::fabs(k1[i]) / sc);
    }
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 * span : 0.01 * d0 / d1;
    h = std::min(h, span);
  }
  const double h_floor = 1e-14 * std::max(std::fabs(t0), std::fabs(t1));
  while (dir * (t1 - t) > 0) {
    if (dir * (t + dir * h - t1) > 0) h = std::fabs(t1 - t);
    const double hs = dir * h;
    const V k2 = f(t + c2 * hs, axpy(y, hs, {{a21, &k1}}));
    const V k3 = f(t + c3 * hs, axpy(y, hs, {{a31, &k1}, {a32, &k2}}));
    const V k4 = f(t + c4 * hs, axpy(y, hs, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const V k5 = f(t + c5 * hs, axpy(y, hs, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const V k6 = f(t + hs, axpy(y, hs, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    V inc{}, yn{};
    for (std::size_t i = 0; i < N; ++i) {
      inc[i] = hs * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
      yn[i] = y[i] + inc[i];
    }
    const V k7 = f(t + hs, yn);
    V e{};
    for (std::size_t i = 0; i < N; ++i) {
      e[i] = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    }
    double err = err_norm(y, yn, e);
    if (!std::isfinite(err)) err = 1e10;
    if (err <= 1.0) {
      const double tn = t + (hs + tcomp);
      tcomp = (hs + tcomp) - (tn - t);
      t = tn;
      for (std::size_t i = 0; i < N; ++i) {
        const double d = inc[i] + comp[i];
        const double next = y[i] + d;
        comp[i] = d - (next - y[i]);
        y[i] = next;
      }
      k1 = k7;
      ++st.accepted;
      st.min_step = std::min(st.min_step, h);
      if (observer && !observer(t, y, k1)) break;
      const double fac = err == 0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)));
      h *= fac;
    } else {
      ++st.rejected;
      h *= std::max(0.1, 0.9 * std::pow(err, -0.25));
    }
    if (h < h_floor || h < std::numeric_limits<double>::min()) {
      throw Error(ErrorKind::StepFailure, "step size underflow at t = " + format_double(t));
    }
  }
  return st;
}

template IntegratorStats dopri5<4>(const OdeRhs<4>&, std::array<double, 4>, double, double, double, double,
                                   const OdeObserver<4>&, double);
template IntegratorStats dopri5<3>(const OdeRhs<3>&, std::array<double, 3>, double, double, double, double,
                                   const OdeObserver<3>&, double);
template IntegratorStats dopri5<2>(const OdeRhs<2>&, std::array<double, 2>, double, double, double, double,
                                   const OdeObserver<2>&, double);

ReducedTrajectory integrate_reduced(const PolyHopfHamiltonian& z, const HopfState& h0, double T, double tol,
                                    const ReducedOptions& opt) {
  if (!(tol > 0) || !std::isfinite(T)) throw Error(ErrorKind::InvalidArgument, "integrate_reduced requires tol > 0, finite T");
  if (!h0.on_sphere(1e-9, 0)) throw Error(ErrorKind::InvalidArgument, "initial state is not on the sphere");
  const double s0 = h0.sigma0;
  const auto lim = energy_limits(z, s0);
  ReducedTrajectory tr;
  const double z0 = z.value(s0, h0.sigma1, h0.sigma3);
  const double escale = std::max({std::fabs(lim.E_L), std::fabs(lim.E_R), std::fabs(z0), kScaleFloor});
  auto push = [&](double t, const HopfState& h) {
    tr.t.push_back(t);
    tr.states.push_back(h);
    tr.energy.push_back(z.value(s0, h.sigma1, h.sigma3));
  };
  push(0, h0);
  OdeRhs<3> rhs = [&](double, const std::array<double, 3>& y) {
    return reduced_flow_rhs(z, HopfState{s0, y[0], y[1], y[2]});
  };
  std::size_t count = 0;
  HopfState last = h0;
  double t_last = 0;
  OdeObserver<3> obs = [&](double t, const std::array<double, 3>& y, const std::array<double, 3>&) {
    HopfState h{s0, y[0], y[1], y[2]};
    tr.max_casimir_drift = std::max(tr.max_casimir_drift, std::fabs(h.sphere_residual()) / (s0 * s0));
    tr.max_energy_drift = std::max(tr.max_energy_drift, std::fabs(z.value(s0, h.sigma1, h.sigma3) - z0) / escale);
    last = h;
    t_last = t;
    ++count;
    if (opt.store_every > 0 && count % opt.store_every == 0) push(t, h);
    return true;
  };
  std::array<double, 3> y = {h0.sigma1, h0.sigma2, h0.sigma3};
  if (!opt.renormalize) {
    tr.stats = dopri5<3>(rhs, y, 0, T, tol, tol * s0, obs);
  } else {
    // Restart after every chunk with the state projected back onto the sphere.
    const std::size_t chunks = 64;
    double t = 0;
    for (std::size_t c = 0; c < chunks; ++c) {
      const double t1 = T * static_cast<double>(c + 1) / chunks;
      auto st = dopri5<3>(rhs, y, t, t1, tol, tol * s0, [&](double tt, const auto& yy, const auto& dy) {
        return obs(tt, yy, dy);
      });
      tr.stats.accepted += st.accepted;
      tr.stats.rejected += st.rejected;
      const double r = std::sqrt(last.sigma1 * last.sigma1 + last.sigma2 * last.sigma2 + last.sigma3 * last.sigma3);
      y = {last.sigma1 * s0 / r, last.sigma2 * s0 / r, last.sigma3 * s0 / r};
      t = t1;
    }
  }
  if (tr.t.back() != t_last) push(t_last, last);
  return tr;
}

std::array<double, 4> hamilton_rhs(const PoincarePolyHamiltonian& h, const std::array<double, 4>& x) {
  const auto g = h.gradient(x);
  return {g[1], -g[0], g[3], -g[2]};
}

SectionResult poincare_section(const PoincarePolyHamiltonian& h, const PoincareState& x0, double T, double tol,
                               const SectionOptions& opt) {
  if (!(tol > 0) || !(T > 0)) throw Error(ErrorKind::InvalidArgument, "poincare_section requires tol > 0 and T > 0");
  const auto y0 = x0.as_array();
  const double H0 = h.value(y0);
  const double hscale = std::max(std::fabs(H0), kScaleFloor);
  double amp = 0;
  for (double v : y0) amp = std::max(amp, std::fabs(v));
  const double atol = tol * std::max(amp, kScaleFloor);
  if (opt.params) opt.params->validate();

  SectionResult res;
  OdeRhs<4> rhs = [&](double, const std::array<double, 4>& y) { return hamilton_rhs(h, y); };

  // Hénon step: Y₃ becomes the independent variable, state (X₂, Y₂, X₃, t).
  OdeRhs<4> henon = [&](double y3, const std::array<double, 4>& s) {
    const std::array<double, 4> x = {s[0], s[1], s[2], y3};
    const auto d = hamilton_rhs(h, x);
    return std::array<double, 4>{d[0] / d[3], d[1] / d[3], d[2] / d[3], 1.0 / d[3]};
  };

  std::array<double, 4> prev = y0;
  double t_prev = 0;
  auto check_domain = [&](const std::array<double, 4>& y) {
    if (!opt.params) return;
    const double W2 = 0.5 * (y[0] * y[0] + y[1] * y[1]);
    const double W3 = 0.5 * (y[2] * y[2] + y[3] * y[3]);
    if (mutual_inclination_from_actions(W2, W3, *opt.params).clamped) {
      throw Error(ErrorKind::LeftDomain, "trajectory left the mutual-inclination feasible domain");
    }
  };
  check_domain(y0);
  OdeObserver<4> obs = [&](double t, const std::array<double, 4>& y, const std::array<double, 4>& dy) {
    res.max_energy_drift = std::max(res.max_energy_drift, std::fabs(h.value(y) - H0) / hscale);
    check_domain(y);
    if (prev[3] < 0 && y[3] >= 0 && dy[3] >= 0) {
      std::array<double, 4> s = {prev[0], prev[1], prev[2], t_prev};
      bool ok = true;
      dopri5<4>(henon, s, prev[3], 0.0, tol, atol, [&](double, const std::array<double, 4>& ss, const auto&) {
        s = ss;
        return true;
      });
      if (!std::isfinite(s[0]) || !std::isfinite(s[3])) ok = false;
      if (ok) {
        const std::array<double, 4> xc = {s[0], s[1], s[2], 0.0};
        res.points.push_back({s[0], s[1], s[2], s[3], (h.value(xc) - H0) / hscale});
      }
    }
    prev = y;
    t_prev = t;
    return opt.max_crossings == 0 || res.points.size() < opt.max_crossings;
  };
  res.stats = dopri5<4>(rhs, y0, 0, T, tol, atol, obs);
  return res;
}

std::vector<PoincareState> section_start_points(const PoincarePolyHamiltonian& h, double energy, double radius,
                                                std::size_t count, std::size_t m) {
  if (!(radius > 0) || m < 2) throw Error(ErrorKind::InvalidArgument, "section_start_points requires radius > 0, m >= 2");
  constexpr int kScan = 64;
  std::vector<PoincareState> found;
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      const double x = radius * (-1 + 2 * (i + 0.5) / static_cast<double>(m));
      const double y = radius * (-1 + 2 * (j + 0.5) / static_cast<double>(m));
      if (x * x + y * y >= radius * radius) continue;
      auto g = [&](double x3) { return h.value({x, y, x3, 0.0}) - energy; };
      double a = -radius, ga = g(a);
      for (int k = 1; k <= 2 * kScan; ++k) {
        const double b = radius * (k - kScan) / kScan, gb = g(b);
        if ((ga < 0) != (gb < 0) || gb == 0) {
          double lo = a, hi = b, glo = ga;
          for (int it = 0; it < 200 && hi - lo > 1e-15 * radius; ++it) {
            const double mid = 0.5 * (lo + hi), gm = g(mid);
            if ((gm < 0) == (glo < 0)) {
              lo = mid;
              glo = gm;
            } else {
              hi = mid;
            }
          }
          const double x3 = gb == 0 ? b : 0.5 * (lo + hi);
          if (hamilton_rhs(h, {x, y, x3, 0.0})[3] >= 0) {
            found.push_back({x, y, x3, 0});
            break;
          }
        }
        a = b;
        ga = gb;
      }
    }
  }
  if (found.size() <= count) return found;
  std::vector<PoincareState> out;
  for (std::size_t k = 0; k < count; ++k) out.push_back(found[k * found.size() / count]);
  return out;
}

FloquetResult floquet_confirm(const PolyHopfHamiltonian& z, const CriticalPoint& cp) {
  const auto& h = cp.location;
  using Vec3 = std::array<double, 3>;
  const Vec3 s = {h.sigma1, h.sigma2, h.sigma3};
  const double r = std::sqrt(s[0] * s[0] + s[1] * s[1] + s[2] * s[2]);
  const Vec3 n = {s[0] / r, s[1] / r, s[2] / r};
  Vec3 a = std::fabs(n[1]) < 0.9 ? Vec3{0, 1, 0} : Vec3{1, 0, 0};
  const double an = a[0] * n[0] + a[1] * n[1] + a[2] * n[2];
  Vec3 u = {a[0] - an * n[0], a[1] - an * n[1], a[2] - an * n[2]};
  const double un = std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
  for (double& x : u) x /= un;
  const Vec3 v = {n[1] * u[2] - n[2] * u[1], n[2] * u[0] - n[0] * u[2], n[0] * u[1] - n[1] * u[0]};

  // Central differences along the great circles through the point.
  const double eps = 1e-5;
  auto flow_at = [&](const Vec3& dir, double step) {
    const double c = std::cos(step), sn = std::sin(step);
    HopfState p{h.sigma0, r * (c * n[0] + sn * dir[0]), r * (c * n[1] + sn * dir[1]), r * (c * n[2] + sn * dir[2])};
    return reduced_flow_rhs(z, p);
  };
  auto dflow = [&](const Vec3& dir) {
    const auto fp = flow_at(dir, eps), fm = flow_at(dir, -eps);
    return Vec3{(fp[0] - fm[0]) / (2 * eps * r), (fp[1] - fm[1]) / (2 * eps * r), (fp[2] - fm[2]) / (2 * eps * r)};
  };
  auto dotv = [](const Vec3& x, const Vec3& y) { return x[0] * y[0] + x[1] * y[1] + x[2] * y[2]; };
  const Vec3 ju = dflow(u), jv = dflow(v);
  const double m11 = dotv(u, ju), m12 = dotv(u, jv), m21 = dotv(v, ju), m22 = dotv(v, jv);
  const double tr = m11 + m22, det = m11 * m22 - m12 * m21;
  const std::complex<double> disc = std::sqrt(std::complex<double>(0.25 * tr * tr - det, 0));
  FloquetResult out;
  out.lambda1 = 0.5 * tr + disc;
  out.lambda2 = 0.5 * tr - disc;
  const double scale = std::sqrt(m11 * m11 + m12 * m12 + m21 * m21 + m22 * m22);
  const double l2 = 0.25 * tr * tr - det;
  if (std::sqrt(std::fabs(l2)) < 1e-6 * std::max(scale, kScaleFloor)) {
    out.stability = Stability::Marginal;
  } else {
    out.stability = l2 < 0 ? Stability::Stable : Stability::Unstable;
  }
  out.agrees = out.stability == cp.stability;
  return out;
}

}  // namespace hopfbif
