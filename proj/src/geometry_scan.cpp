#include "hopfbif/geometry_scan.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>

#include "hopfbif/error.hpp"
#include "hopfbif/numeric.hpp"

namespace hopfbif {

std::string_view to_string(CpKind k) noexcept { return k == CpKind::CPI ? "CPI" : "CPII"; }

std::string_view to_string(Tangency t) noexcept {
  switch (t) {
    case Tangency::Inner: return "inner";
    case Tangency::Outer: return "outer";
    case Tangency::Degenerate: return "degenerate";
    case Tangency::None: return "none";
  }
  return "none";
}

std::string_view to_string(Stability s) noexcept {
  switch (s) {
    case Stability::Stable: return "stable";
    case Stability::Unstable: return "unstable";
    case Stability::Marginal: return "marginal";
  }
  return "marginal";
}

std::string_view to_string(EventType t) noexcept {
  switch (t) {
    case EventType::SaddleNode: return "saddle-node";
    case EventType::InverseSaddleNode: return "inverse-saddle-node";
    case EventType::Pitchfork: return "pitchfork";
    case EventType::InversePitchfork: return "inverse-pitchfork";
    case EventType::Unresolved: return "unresolved-event";
  }
  return "unresolved-event";
}

namespace {

using Vec3 = std::array<double, 3>;

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Vec3 mat_apply(const std::array<Vec3, 3>& m, const Vec3& x) { return {dot(m[0], x), dot(m[1], x), dot(m[2], x)}; }

/// g(θ) = σ₃ ∂Z/∂σ₁ − σ₁ ∂Z/∂σ₃ = −dZ/dθ on the meridian.
struct Meridian {
  const PolyHopfHamiltonian& z;
  double s0;
  double g(double th) const {
    const double s1 = s0 * std::cos(th), s3 = s0 * std::sin(th);
    const auto [z1, z3] = z.gradient(s0, s1, s3);
    return s3 * z1 - s1 * z3;
  }
  double grad_norm(double th) const {
    const auto [z1, z3] = z.gradient(s0, s0 * std::cos(th), s0 * std::sin(th));
    return std::hypot(z1, z3);
  }
};

std::vector<double> meridian_roots(const Meridian& m, std::size_t n, double& gscale) {
  std::vector<double> th(n + 1), g(n + 1);
  gscale = 0;
  for (std::size_t i = 0; i < n; ++i) {
    th[i] = kTwoPi * static_cast<double>(i) / static_cast<double>(n);
    g[i] = m.g(th[i]);
    gscale = std::max(gscale, m.s0 * m.grad_norm(th[i]));
  }
  th[n] = kTwoPi;
  g[n] = g[0];
  std::vector<double> roots;
  gscale = std::max(gscale, kScaleFloor);
  const double tol = 1e-11 * gscale;
  auto fn = [&](double t) { return m.g(t); };

  for (std::size_t i = 0; i < n; ++i) {
    if (g[i] == 0) {
      roots.push_back(th[i]);
      continue;
    }
    if (g[i + 1] != 0 && (g[i] > 0) != (g[i + 1] > 0)) roots.push_back(bisect(fn, th[i], th[i + 1], 0.0));
  }
  // Local minima of |g| without a sign change may hide a pair of close roots.
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t ip = (i + 1) % n, im = (i + n - 1) % n;
    const double a = g[im], b = g[i], c = g[ip];
    if (b == 0 || (a > 0) != (b > 0) || (c > 0) != (b > 0)) continue;
    if (!(std::fabs(b) < std::fabs(a) && std::fabs(b) <= std::fabs(c))) continue;
    const double sgn = b > 0 ? 1.0 : -1.0;
    const double lo = th[i] - kTwoPi / n, hi = th[i] + kTwoPi / n;
    auto [tmin, vmin] = boost::math::tools::brent_find_minima([&](double t) { return sgn * m.g(t); }, lo, hi, 52);
    if (vmin < 0) {
      roots.push_back(bisect(fn, lo, tmin, 0.0));
      roots.push_back(bisect(fn, tmin, hi, 0.0));
    } else if (vmin <= tol) {
      roots.push_back(tmin);
    }
  }
  for (double& r : roots) r = wrap_angle(r);
  std::sort(roots.begin(), roots.end());
  std::vector<double> out;
  for (double r : roots) {
    if (!out.empty() && r - out.back() < 1e-10) continue;
    out.push_back(r);
  }
  if (out.size() > 1 && out.front() + kTwoPi - out.back() < 1e-10) out.pop_back();
  return out;
}

}  // namespace

TangentSpectrum tangent_spectrum(const PolyHopfHamiltonian& z, const HopfState& h) {
  const Vec3 s = {h.sigma1, h.sigma2, h.sigma3};
  const double r = std::sqrt(dot(s, s));
  TangentSpectrum out;
  if (r == 0) return out;
  const Vec3 n = {s[0] / r, s[1] / r, s[2] / r};
  Vec3 a = std::fabs(n[1]) < 0.9 ? Vec3{0, 1, 0} : Vec3{1, 0, 0};
  const double an = dot(a, n);
  Vec3 u = {a[0] - an * n[0], a[1] - an * n[1], a[2] - an * n[2]};
  const double un = std::sqrt(dot(u, u));
  for (double& x : u) x /= un;
  const Vec3 v = cross(n, u);
  const auto jac = reduced_flow_jacobian(z, h);
  const Vec3 ju = mat_apply(jac, u), jv = mat_apply(jac, v);
  const double m11 = dot(u, ju), m12 = dot(u, jv), m21 = dot(v, ju), m22 = dot(v, jv);
  const double det = m11 * m22 - m12 * m21;
  out.trace = m11 + m22;
  out.lambda2 = 0.25 * out.trace * out.trace - det;
  out.scale = std::sqrt(m11 * m11 + m12 * m12 + m21 * m21 + m22 * m22);
  return out;
}

namespace {

Stability stability_from_spectrum(const TangentSpectrum& sp) {
  if (std::sqrt(std::fabs(sp.lambda2)) < 1e-8 * std::max(sp.scale, kScaleFloor)) return Stability::Marginal;
  return sp.lambda2 < 0 ? Stability::Stable : Stability::Unstable;
}

}  // namespace

void classify_cpi(const PolyHopfHamiltonian& z, CriticalPoint& cp) {
  const auto sp = tangent_spectrum(z, cp.location);
  cp.lambda2 = sp.lambda2;
  cp.spectral_scale = sp.scale;
  cp.stability = stability_from_spectrum(sp);
  if (cp.kind == CpKind::CPI) {
    cp.tangency = cp.stability == Stability::Stable     ? Tangency::Outer
                  : cp.stability == Stability::Unstable ? Tangency::Inner
                                                        : Tangency::Degenerate;
  } else {
    cp.tangency = Tangency::None;
  }
}

Tangency geometric_tangency(const PolyHopfHamiltonian& z, const CriticalPoint& cp) {
  const auto& h = cp.location;
  const double s0 = h.sigma0;
  const double c = h.sigma1 / s0, s = h.sigma3 / s0;
  const auto [z1, z3] = z.gradient(s0, h.sigma1, h.sigma3);
  const auto [z11, z13, z33] = z.hessian(s0, h.sigma1, h.sigma3);
  const double radial = z1 * h.sigma1 + z3 * h.sigma3;
  const double mu = radial / (2 * s0 * s0);
  const double zpp = s0 * s0 * (z11 * s * s - 2 * z13 * s * c + z33 * c * c) - radial;
  const double scale = s0 * s0 * (std::fabs(z11) + 2 * std::fabs(z13) + std::fabs(z33)) + std::fabs(radial);
  if (std::fabs(zpp) <= 1e-12 * std::max(scale, kScaleFloor) || mu == 0) return Tangency::Degenerate;
  return mu * zpp < 0 ? Tangency::Outer : Tangency::Inner;
}

std::vector<CriticalPoint> find_cpi(const PolyHopfHamiltonian& z, double s0, const CpiScanOptions& opt) {
  if (!(s0 > 0)) throw Error(ErrorKind::InvalidArgument, "find_cpi requires sigma0 > 0");
  if (z.is_sigma0_only()) throw Error(ErrorKind::DegenerateConstant, "Z is constant on the sphere");
  const Meridian m{z, s0};
  std::size_t n = std::max<std::size_t>(opt.samples, 16);
  std::vector<double> roots;
  double gscale = 0;
  while (true) {
    roots = meridian_roots(m, n, gscale);
    bool crowded = false;
    for (std::size_t i = 0; i + 1 < roots.size(); ++i) crowded |= roots[i + 1] - roots[i] < 2 * kTwoPi / n;
    if (roots.size() > 1) crowded |= roots.front() + kTwoPi - roots.back() < 2 * kTwoPi / n;
    if (!crowded || 2 * n > opt.max_samples) break;
    n *= 2;
  }
  double gmax = 0;
  for (std::size_t i = 0; i < 64; ++i) gmax = std::max(gmax, std::fabs(m.g(kTwoPi * i / 64.0)));
  if (gmax <= 1e-14 * gscale) throw Error(ErrorKind::DegenerateConstant, "Z is constant along the meridian");

  std::vector<CriticalPoint> out;
  for (double th : roots) {
    CriticalPoint cp;
    cp.kind = CpKind::CPI;
    cp.sigma0 = s0;
    cp.theta = th;
    cp.location = {s0, s0 * std::cos(th), 0.0, s0 * std::sin(th)};
    cp.energy = z.value(s0, cp.location.sigma1, cp.location.sigma3);
    classify_cpi(z, cp);
    out.push_back(cp);
  }
  return out;
}

std::vector<CriticalPoint> find_cpii(const PolyHopfHamiltonian& z, double s0, std::size_t seeds_per_axis) {
  if (!(s0 > 0)) throw Error(ErrorKind::InvalidArgument, "find_cpii requires sigma0 > 0");
  std::vector<std::array<double, 2>> centers;
  if (z.is_sigma0_only()) return {};
  const std::size_t k = std::max<std::size_t>(seeds_per_axis, 2);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      double x = s0 * (-1 + 2 * (i + 0.5) / k), y = s0 * (-1 + 2 * (j + 0.5) / k);
      bool ok = false;
      for (int it = 0; it < 60; ++it) {
        const auto [g1, g3] = z.gradient(s0, x, y);
        const auto [h11, h13, h33] = z.hessian(s0, x, y);
        const double det = h11 * h33 - h13 * h13;
        if (det == 0 || !std::isfinite(det)) break;
        const double dx = (h33 * g1 - h13 * g3) / det;
        const double dy = (h11 * g3 - h13 * g1) / det;
        x -= dx;
        y -= dy;
        if (!std::isfinite(x) || !std::isfinite(y) || std::hypot(x, y) > 100 * s0) break;
        if (std::hypot(dx, dy) <= 1e-15 * s0) {
          ok = true;
          break;
        }
      }
      if (!ok) {
        const auto [g1, g3] = z.gradient(s0, x, y);
        const auto [h11, h13, h33] = z.hessian(s0, x, y);
        const double hs = std::fabs(h11) + std::fabs(h13) + std::fabs(h33);
        ok = std::isfinite(x) && std::isfinite(y) && std::hypot(g1, g3) <= 1e-12 * std::max(hs * s0, kScaleFloor);
      }
      if (!ok) continue;
      bool dup = false;
      for (const auto& c : centers) dup |= std::hypot(c[0] - x, c[1] - y) <= 1e-9 * s0;
      if (!dup) centers.push_back({x, y});
    }
  }
  std::sort(centers.begin(), centers.end());
  std::vector<CriticalPoint> out;
  for (const auto& c : centers) {
    const double rem = s0 * s0 - c[0] * c[0] - c[1] * c[1];
    if (!(rem > 1e-14 * s0 * s0)) continue;
    const auto [h11, h13, h33] = z.hessian(s0, c[0], c[1]);
    const double det = h11 * h33 - h13 * h13;
    const double hs = h11 * h11 + 2 * h13 * h13 + h33 * h33;
    Stability st = Stability::Marginal;
    if (std::fabs(det) > 1e-12 * std::max(hs, kScaleFloor)) st = det > 0 ? Stability::Stable : Stability::Unstable;
    for (double sgn : {1.0, -1.0}) {
      CriticalPoint cp;
      cp.kind = CpKind::CPII;
      cp.sigma0 = s0;
      cp.location = {s0, c[0], sgn * std::sqrt(rem), c[1]};
      cp.theta = wrap_angle(std::atan2(c[1], c[0]));
      cp.energy = z.value(s0, c[0], c[1]);
      const auto sp = tangent_spectrum(z, cp.location);
      cp.lambda2 = sp.lambda2;
      cp.spectral_scale = sp.scale;
      cp.stability = st;
      cp.tangency = Tangency::None;
      out.push_back(cp);
    }
  }
  return out;
}

Census critical_census(const PolyHopfHamiltonian& z, double s0, const CpiScanOptions& opt) {
  return {s0, find_cpi(z, s0, opt), find_cpii(z, s0)};
}

EnergyLimits energy_limits(const PolyHopfHamiltonian& z, double s0) {
  if (z.is_sigma0_only()) {
    const double e = z.value(s0, 0, 0);
    return {e, e, {s0, s0, 0, 0}, {s0, s0, 0, 0}};
  }
  EnergyLimits out;
  out.E_L = std::numeric_limits<double>::infinity();
  out.E_R = -std::numeric_limits<double>::infinity();
  auto consider = [&](const CriticalPoint& cp) {
    if (cp.energy < out.E_L) {
      out.E_L = cp.energy;
      out.at_min = cp.location;
    }
    if (cp.energy > out.E_R) {
      out.E_R = cp.energy;
      out.at_max = cp.location;
    }
  };
  for (const auto& cp : find_cpi(z, s0)) consider(cp);
  for (const auto& cp : find_cpii(z, s0)) consider(cp);
  return out;
}

Sigma0Limits sigma0_limits(const PolyHopfHamiltonian& z, double energy, double sigma0_max, std::size_t grid) {
  if (!(sigma0_max > 0)) throw Error(ErrorKind::InvalidArgument, "sigma0_limits requires sigma0_max > 0");
  auto excess = [&](double s0) {
    const auto lim = energy_limits(z, s0);
    return std::max(lim.E_L - energy, energy - lim.E_R);
  };
  grid = std::max<std::size_t>(grid, 8);
  std::vector<double> s(grid + 1), h(grid + 1);
  s[0] = sigma0_max * 1e-12;
  for (std::size_t k = 1; k <= grid; ++k) s[k] = sigma0_max * static_cast<double>(k) / grid;
  for (std::size_t k = 0; k <= grid; ++k) h[k] = excess(s[k]);
  std::size_t first = grid + 1, last = 0;
  for (std::size_t k = 0; k <= grid; ++k) {
    if (h[k] <= 0) {
      first = std::min(first, k);
      last = k;
    }
  }
  if (first > grid) throw Error(ErrorKind::EmptyDomain, "no sigma0 in (0, sigma0_max] admits energy " + format_double(energy));
  auto feasible_edge = [&](double infeasible, double feasible) {
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (infeasible + feasible);
      if (mid == infeasible || mid == feasible) break;
      (excess(mid) <= 0 ? feasible : infeasible) = mid;
    }
    return feasible;
  };
  Sigma0Limits out;
  out.sigma0_min = first == 0 ? s[0] : feasible_edge(s[first - 1], s[first]);
  out.sigma0_max = last == grid ? sigma0_max : feasible_edge(s[last + 1], s[last]);
  return out;
}

DomainLimits domain_limits(const PolyHopfHamiltonian& z, double sigma0_amd, std::size_t grid, unsigned threads) {
  if (!(sigma0_amd > 0)) throw Error(ErrorKind::InvalidArgument, "domain_limits requires sigma0_AMD > 0");
  DomainLimits out;
  out.sigma0_AMD = sigma0_amd;
  out.sigma0.resize(grid);
  out.E_L.resize(grid);
  out.E_R.resize(grid);
  parallel_for(grid, threads, [&](std::size_t k) {
    const double s0 = sigma0_amd * static_cast<double>(k + 1) / grid;
    const auto lim = energy_limits(z, s0);
    out.sigma0[k] = s0;
    out.E_L[k] = lim.E_L;
    out.E_R[k] = lim.E_R;
  });
  out.E_min = *std::min_element(out.E_L.begin(), out.E_L.end());
  out.E_23 = out.E_R.back();
  return out;
}

double equilibrium_residual(const PolyHopfHamiltonian& z, const HopfState& h) {
  const auto v = reduced_flow_rhs(z, h);
  double g = 0;
  for (const auto& [e, c] : z.polynomial().terms()) {
    const int d = e[0] + e[1] + e[2];
    if (e[1] + e[2] > 0) g += std::fabs(c) * (e[1] + e[2]) * std::pow(h.sigma0, d - 1);
  }
  const double scale = std::max(h.sigma0 * g, kScaleFloor);
  return std::max({std::fabs(v[0]), std::fabs(v[1]), std::fabs(v[2])}) / scale;
}

namespace {

struct Signature {
  int cpi_stable = 0, cpi_unstable = 0, cpi_marginal = 0;
  int cpii_stable = 0, cpii_unstable = 0, cpii_marginal = 0;
  bool operator==(const Signature&) const = default;
};

Signature signature_of(const Census& c) {
  Signature s;
  for (const auto& p : c.cpi) {
    (p.stability == Stability::Stable     ? s.cpi_stable
     : p.stability == Stability::Unstable ? s.cpi_unstable
                                          : s.cpi_marginal)++;
  }
  for (const auto& p : c.cpii) {
    (p.stability == Stability::Stable     ? s.cpii_stable
     : p.stability == Stability::Unstable ? s.cpii_unstable
                                          : s.cpii_marginal)++;
  }
  return s;
}

struct Transition {
  Census high, low;
};

void refine(const PolyHopfHamiltonian& z, const CpiScanOptions& opt, Census high, Census low, double resolution,
            std::vector<Transition>& out, int depth = 0) {
  if (high.sigma0 - low.sigma0 <= resolution || depth > 80) {
    out.push_back({std::move(high), std::move(low)});
    return;
  }
  const double mid = 0.5 * (high.sigma0 + low.sigma0);
  Census cm = critical_census(z, mid, opt);
  const Signature sh = signature_of(high), sl = signature_of(low), sm = signature_of(cm);
  if (sm == sh) {
    refine(z, opt, std::move(cm), std::move(low), resolution, out, depth + 1);
  } else if (sm == sl) {
    refine(z, opt, std::move(high), std::move(cm), resolution, out, depth + 1);
  } else {
    refine(z, opt, std::move(high), cm, resolution, out, depth + 1);
    refine(z, opt, std::move(cm), std::move(low), resolution, out, depth + 1);
  }
}

double chord(const CriticalPoint& a, const CriticalPoint& b) {
  const double dx = a.location.sigma1 / a.sigma0 - b.location.sigma1 / b.sigma0;
  const double dy = a.location.sigma2 / a.sigma0 - b.location.sigma2 / b.sigma0;
  const double dz = a.location.sigma3 / a.sigma0 - b.location.sigma3 / b.sigma0;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

/// Greedy nearest matching; returns for each point of `next` the index in `prev` or −1.
std::vector<int> match(const std::vector<CriticalPoint>& prev, const std::vector<CriticalPoint>& next) {
  std::vector<std::tuple<double, int, int>> pairs;
  for (std::size_t i = 0; i < prev.size(); ++i) {
    for (std::size_t j = 0; j < next.size(); ++j) pairs.emplace_back(chord(prev[i], next[j]), int(i), int(j));
  }
  std::sort(pairs.begin(), pairs.end());
  std::vector<int> assign(next.size(), -1);
  std::vector<bool> used(prev.size(), false);
  std::size_t matched = 0, limit = std::min(prev.size(), next.size());
  for (const auto& [d, i, j] : pairs) {
    if (matched == limit) break;
    if (used[i] || assign[j] >= 0) continue;
    used[i] = true;
    assign[j] = i;
    ++matched;
  }
  return assign;
}

struct Labeler {
  int next_p = 1;
  int next_f = 1;

  void initial(Census& c) {
    auto& v = c.cpi;
    if (!v.empty()) {
      std::vector<std::size_t> idx(v.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a].energy < v[b].energy; });
      v[idx.front()].label = "A";
      if (idx.size() > 1) v[idx.back()].label = "B";
      for (std::size_t k = 1; k + 1 < idx.size(); ++k) v[idx[k]].label = "P" + std::to_string(next_p++);
    }
    label_new_cpii(c.cpii, std::vector<int>(c.cpii.size(), -1), {});
  }

  void label_new_cpi(std::vector<CriticalPoint>& v, const std::vector<int>& assign, const std::vector<CriticalPoint>& prev) {
    std::vector<std::size_t> fresh;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (assign[j] >= 0) {
        v[j].label = prev[assign[j]].label;
      } else {
        fresh.push_back(j);
      }
    }
    std::stable_sort(fresh.begin(), fresh.end(), [&](auto a, auto b) {
      return v[a].stability == Stability::Unstable && v[b].stability != Stability::Unstable;
    });
    for (auto j : fresh) v[j].label = "P" + std::to_string(next_p++);
  }

  void label_new_cpii(std::vector<CriticalPoint>& v, const std::vector<int>& assign, const std::vector<CriticalPoint>& prev) {
    std::vector<std::size_t> fresh;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (assign[j] >= 0) {
        v[j].label = prev[assign[j]].label;
      } else {
        fresh.push_back(j);
      }
    }
    std::stable_sort(fresh.begin(), fresh.end(), [&](auto a, auto b) { return v[a].location.sigma2 > v[b].location.sigma2; });
    for (auto j : fresh) v[j].label = "F" + std::to_string(next_f++);
  }

  void advance(const Census& prev, Census& next) {
    label_new_cpi(next.cpi, match(prev.cpi, next.cpi), prev.cpi);
    label_new_cpii(next.cpii, match(prev.cpii, next.cpii), prev.cpii);
  }
};

BifurcationEvent type_event(const Census& high, const Census& low) {
  BifurcationEvent ev;
  ev.sigma0_high = high.sigma0;
  ev.sigma0_low = low.sigma0;
  std::map<std::string, const CriticalPoint*> before, after;
  for (const auto* set : {&high.cpi, &high.cpii}) {
    for (const auto& p : *set) before[p.label] = &p;
  }
  for (const auto* set : {&low.cpi, &low.cpii}) {
    for (const auto& p : *set) after[p.label] = &p;
  }
  int born_cpi = 0, died_cpi = 0, born_cpii = 0, died_cpii = 0, flips = 0;
  int born_stable = 0, born_unstable = 0, died_stable = 0, died_unstable = 0;
  double e_sum = 0;
  int e_n = 0;
  for (const auto& [lab, p] : after) {
    if (before.count(lab)) continue;
    ev.born.push_back(lab);
    (p->kind == CpKind::CPI ? born_cpi : born_cpii)++;
    if (p->kind == CpKind::CPI) (p->stability == Stability::Stable ? born_stable : born_unstable)++;
    e_sum += p->energy;
    ++e_n;
  }
  for (const auto& [lab, p] : before) {
    if (after.count(lab)) continue;
    ev.died.push_back(lab);
    (p->kind == CpKind::CPI ? died_cpi : died_cpii)++;
    if (p->kind == CpKind::CPI) (p->stability == Stability::Stable ? died_stable : died_unstable)++;
    e_sum += p->energy;
    ++e_n;
  }
  for (const auto& [lab, p] : after) {
    auto it = before.find(lab);
    if (it == before.end() || it->second->stability == p->stability || p->kind != CpKind::CPI) continue;
    ev.flipped.push_back(lab + ":" + std::string(to_string(it->second->stability)) + "->" +
                         std::string(to_string(p->stability)));
    ++flips;
    e_sum += p->energy;
    ++e_n;
  }
  ev.energy = e_n ? e_sum / e_n : 0.0;
  const bool pure_cpi = born_cpii == 0 && died_cpii == 0 && flips == 0;
  if (pure_cpi && born_cpi == 2 && died_cpi == 0 && born_stable == 1 && born_unstable == 1) {
    ev.type = EventType::SaddleNode;
  } else if (pure_cpi && died_cpi == 2 && born_cpi == 0 && died_stable == 1 && died_unstable == 1) {
    ev.type = EventType::InverseSaddleNode;
  } else if (born_cpi == 0 && died_cpi == 0 && flips == 1 && born_cpii == 2 && died_cpii == 0) {
    ev.type = EventType::Pitchfork;
  } else if (born_cpi == 0 && died_cpi == 0 && flips == 1 && died_cpii == 2 && born_cpii == 0) {
    ev.type = EventType::InversePitchfork;
  } else {
    ev.type = EventType::Unresolved;
  }
  return ev;
}

}  // namespace

BifurcationSequence bifurcation_sequence(const PolyHopfHamiltonian& z, double lo, double hi, double resolution,
                                         const SequenceOptions& opt) {
  if (!(lo > 0 && hi > lo)) throw Error(ErrorKind::InvalidArgument, "bifurcation_sequence requires 0 < lo < hi");
  if (!(resolution > 0)) throw Error(ErrorKind::InvalidArgument, "bifurcation_sequence requires resolution > 0");
  const std::size_t steps = std::max<std::size_t>(opt.steps, 2);
  std::vector<Census> grid(steps + 1);
  parallel_for(steps + 1, opt.threads, [&](std::size_t k) {
    const double s0 = k == steps ? lo : hi - (hi - lo) * static_cast<double>(k) / steps;
    grid[k] = critical_census(z, s0, opt.cpi);
  });

  // Ordered node list: grid censuses with bracket endpoints spliced in.
  std::vector<Census> nodes;
  std::vector<std::pair<std::size_t, std::size_t>> brackets;
  nodes.push_back(grid[0]);
  for (std::size_t k = 0; k < steps; ++k) {
    if (!(signature_of(grid[k]) == signature_of(grid[k + 1]))) {
      std::vector<Transition> tr;
      refine(z, opt.cpi, grid[k], grid[k + 1], resolution, tr);
      for (auto& t : tr) {
        if (nodes.back().sigma0 != t.high.sigma0) nodes.push_back(std::move(t.high));
        const std::size_t ih = nodes.size() - 1;
        nodes.push_back(std::move(t.low));
        brackets.emplace_back(ih, nodes.size() - 1);
      }
    }
    if (nodes.back().sigma0 != grid[k + 1].sigma0) nodes.push_back(grid[k + 1]);
  }

  Labeler lab;
  lab.initial(nodes.front());
  for (std::size_t i = 1; i < nodes.size(); ++i) lab.advance(nodes[i - 1], nodes[i]);

  BifurcationSequence seq;
  for (const auto& [ih, il] : brackets) seq.events.push_back(type_event(nodes[ih], nodes[il]));
  seq.census = std::move(nodes);
  return seq;
}

Census labeled_census(const PolyHopfHamiltonian& z, double sigma0, double sigma0_top, const SequenceOptions& opt) {
  if (!(sigma0 > 0)) throw Error(ErrorKind::InvalidArgument, "labeled_census requires sigma0 > 0");
  if (sigma0 >= sigma0_top) {
    Census c = critical_census(z, sigma0, opt.cpi);
    Labeler lab;
    lab.initial(c);
    return c;
  }
  auto seq = bifurcation_sequence(z, sigma0, sigma0_top, 1e-6 * sigma0_top, opt);
  return std::move(seq.census.back());
}

}  // namespace hopfbif
