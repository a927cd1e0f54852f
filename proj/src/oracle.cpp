#include "hopfbif/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "hopfbif/error.hpp"
#include "hopfbif/numeric.hpp"

namespace hopfbif {

std::string_view to_string(DiskCriticalKind k) noexcept {
  switch (k) {
    case DiskCriticalKind::Minimum: return "minimum";
    case DiskCriticalKind::Maximum: return "maximum";
    case DiskCriticalKind::Saddle: return "saddle";
  }
  return "unknown";
}

std::vector<TangencyApprox> grid_tangency_scan(const PolyHopfHamiltonian& z, double s0, std::size_t n) {
  if (n < 64) throw Error(ErrorKind::InvalidArgument, "grid_tangency_scan requires n >= 64");
  if (!(s0 > 0)) throw Error(ErrorKind::InvalidArgument, "grid_tangency_scan requires sigma0 > 0");
  const double h = kTwoPi / static_cast<double>(n);
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double th = h * static_cast<double>(k);
    v[k] = z.value(s0, s0 * std::cos(th), s0 * std::sin(th));
  }
  std::vector<TangencyApprox> out;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = v[(k + n - 1) % n], b = v[k], c = v[(k + 1) % n];
    const bool mx = b > a && b >= c, mn = b < a && b <= c;
    if (!mx && !mn) continue;
    const double den = a - 2 * b + c;
    const double d = den != 0 ? std::clamp(0.5 * (a - c) / den, -0.5, 0.5) : 0.0;
    TangencyApprox t;
    t.theta = wrap_angle(h * (static_cast<double>(k) + d));
    t.sigma1 = s0 * std::cos(t.theta);
    t.sigma3 = s0 * std::sin(t.theta);
    t.energy = b - 0.25 * (a - c) * d;
    t.is_max = mx;
    out.push_back(t);
  }
  return out;
}

namespace {

struct Chart {
  std::vector<double> val;
  double vmin = INFINITY, vmax = -INFINITY;
};

// Hemisphere chart of S_σ₀ on the disk r² < 2σ₀: σ₁ = X·w, σ₂ = Y·w,
// σ₃ = pole·(r² − σ₀), w = √(2σ₀ − r²). pole = +1 centres the south pole.
HopfState chart_to_hopf(double s0, int pole, double x, double y) {
  const double r2 = x * x + y * y;
  const double w = std::sqrt(std::max(0.0, 2 * s0 - r2));
  return {s0, x * w, y * w, pole * (r2 - s0)};
}

}  // namespace

DiskScan disk_critical_scan(const PolyHopfHamiltonian& z, double s0, std::size_t n, unsigned threads) {
  if (n < 128) throw Error(ErrorKind::InvalidArgument, "disk_critical_scan requires n >= 128");
  if (!(s0 > 0)) throw Error(ErrorKind::InvalidArgument, "disk_critical_scan requires sigma0 > 0");
  const double R = std::sqrt(2 * s0);
  const double h = 2 * R / static_cast<double>(n - 1);
  auto coord = [&](std::size_t i) { return -R + h * static_cast<double>(i); };
  const double nan = std::nan("");

  Chart charts[2];
  for (int c = 0; c < 2; ++c) {
    const int pole = c == 0 ? 1 : -1;
    auto& ch = charts[c];
    ch.val.assign(n * n, nan);
    parallel_for(n, threads, [&](std::size_t j) {
      for (std::size_t i = 0; i < n; ++i) {
        const double x = coord(i), y = coord(j);
        if (x * x + y * y < R * R) {
          const auto s = chart_to_hopf(s0, pole, x, y);
          ch.val[j * n + i] = z.value(s0, s.sigma1, s.sigma3);
        }
      }
    });
    for (double x : ch.val) {
      if (std::isnan(x)) continue;
      ch.vmin = std::min(ch.vmin, x);
      ch.vmax = std::max(ch.vmax, x);
    }
  }

  DiskScan out;
  const double vmin = std::min(charts[0].vmin, charts[1].vmin), vmax = std::max(charts[0].vmax, charts[1].vmax);
  const double scale = std::max({std::fabs(vmin), std::fabs(vmax), kScaleFloor});
  if (!(vmax - vmin > 1e-13 * scale)) {
    out.degenerate = true;
    return out;
  }

  struct Candidate {
    DiskCriticalKind kind;
    std::size_t i, j;
    double grad;
    double dx = 0, dy = 0;
  };
  struct Found {
    DiskCritical point;
    double depth;
  };
  std::vector<Found> found;
  static constexpr int ring[8][2] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
  for (int c = 0; c < 2; ++c) {
    const int pole = c == 0 ? 1 : -1;
    const auto& val = charts[c].val;
    std::vector<Candidate> cand;
    std::mutex mu;
    parallel_for(n - 2, threads, [&](std::size_t jj) {
      const std::size_t j = jj + 1;
      std::vector<Candidate> local;
      for (std::size_t i = 1; i + 1 < n; ++i) {
        const double x = coord(i), y = coord(j);
        // Each chart owns its own hemisphere, well inside the rim.
        if (x * x + y * y > 0.75 * R * R) continue;
        const double v = val[j * n + i];
        double d[8];
        bool up[8];
        for (int k = 0; k < 8; ++k) {
          d[k] = val[(j + ring[k][1]) * n + (i + ring[k][0])] - v;
          // Exact ties (the grid is mirror-symmetric) are broken by node index.
          up[k] = d[k] > 0 || (d[k] == 0 && ring[k][1] * static_cast<int>(n) + ring[k][0] > 0);
        }
        const bool all_pos = std::all_of(up, up + 8, [](bool u) { return u; });
        const bool all_neg = std::none_of(up, up + 8, [](bool u) { return u; });
        int changes = 0;
        for (int k = 0; k < 8; ++k) {
          if (up[k] != up[(k + 1) % 8]) ++changes;
        }
        const double gx = 0.5 * (d[0] - d[4]) / h, gy = 0.5 * (d[2] - d[6]) / h;
        const double g = std::hypot(gx, gy);
        if (all_pos) local.push_back({DiskCriticalKind::Minimum, i, j, g, 0, 0});
        else if (all_neg) local.push_back({DiskCriticalKind::Maximum, i, j, g, 0, 0});
        else if (changes >= 4) local.push_back({DiskCriticalKind::Saddle, i, j, g, 0, 0});
      }
      std::lock_guard lock(mu);
      cand.insert(cand.end(), local.begin(), local.end());
    });
    // The local quadratic fit must agree with the sign pattern and put its
    // critical point inside the cell; otherwise the detection is a
    // discretization artifact of a nearly flat field.
    std::vector<Candidate> fitted;
    for (auto k : cand) {
      auto at = [&](int di, int dj) { return val[(k.j + dj) * n + (k.i + di)]; };
      const double fxx = at(1, 0) - 2 * at(0, 0) + at(-1, 0), fyy = at(0, 1) - 2 * at(0, 0) + at(0, -1);
      const double fx = 0.5 * (at(1, 0) - at(-1, 0)), fy = 0.5 * (at(0, 1) - at(0, -1));
      const double fxy = 0.25 * (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1));
      const double det = fxx * fyy - fxy * fxy;
      if (det == 0) continue;
      const bool saddle_fit = det < 0;
      if (saddle_fit != (k.kind == DiskCriticalKind::Saddle)) continue;
      if (!saddle_fit && (fxx > 0) != (k.kind == DiskCriticalKind::Minimum)) continue;
      k.dx = -(fyy * fx - fxy * fy) / det;
      k.dy = -(fxx * fy - fxy * fx) / det;
      if (std::fabs(k.dx) > 1 || std::fabs(k.dy) > 1) continue;
      fitted.push_back(k);
    }
    std::sort(fitted.begin(), fitted.end(), [](const Candidate& a, const Candidate& b) {
      return a.grad != b.grad ? a.grad < b.grad : (a.j != b.j ? a.j < b.j : a.i < b.i);
    });

    // Adjacent detections of one critical point are merged; the
    // smallest-gradient node represents the cluster.
    std::vector<Candidate> kept;
    for (const auto& k : fitted) {
      const bool dup = std::any_of(kept.begin(), kept.end(), [&](const Candidate& o) {
        const std::size_t di = o.i > k.i ? o.i - k.i : k.i - o.i, dj = o.j > k.j ? o.j - k.j : k.j - o.j;
        return o.kind == k.kind && std::max(di, dj) <= 2;
      });
      if (!dup) kept.push_back(k);
    }
    std::sort(kept.begin(), kept.end(), [](const Candidate& a, const Candidate& b) {
      return a.j != b.j ? a.j < b.j : a.i < b.i;
    });
    for (const auto& k : kept) {
      const auto loc = chart_to_hopf(s0, pole, coord(k.i) + k.dx * h, coord(k.j) + k.dy * h);
      // Charts overlap in a band around the equator; duplicates are resolved below.
      if (pole * loc.sigma3 > 0.25 * s0) continue;
      DiskCritical p;
      p.kind = k.kind;
      p.location = loc;
      p.energy = z.value(s0, loc.sigma1, loc.sigma3);
      try {
        const auto sp = hopf_to_section_plane(loc);
        p.X2 = sp.X2;
        p.Y2 = sp.Y2;
      } catch (const Error&) {
        p.X2 = loc.sigma3 > 0 ? R : 0.0;
        p.Y2 = 0;
      }
      found.push_back({p, pole * loc.sigma3});
    }
  }

  // A point seen by both charts is kept from the chart whose pole is nearer.
  std::stable_sort(found.begin(), found.end(), [](const Found& a, const Found& b) { return a.depth < b.depth; });
  const double merge = 4 * h * R;
  for (const auto& f : found) {
    const bool dup = std::any_of(out.points.begin(), out.points.end(), [&](const DiskCritical& o) {
      const auto& a = o.location;
      const auto& b = f.point.location;
      return o.kind == f.point.kind &&
             std::hypot(a.sigma1 - b.sigma1, a.sigma2 - b.sigma2, a.sigma3 - b.sigma3) < merge;
    });
    if (dup) continue;
    out.points.push_back(f.point);
    if (f.point.kind == DiskCriticalKind::Saddle) ++out.saddles;
    else ++out.extrema;
  }
  std::sort(out.points.begin(), out.points.end(), [](const DiskCritical& a, const DiskCritical& b) {
    const auto &p = a.location, &q = b.location;
    return p.sigma3 != q.sigma3 ? p.sigma3 < q.sigma3 : (p.sigma1 != q.sigma1 ? p.sigma1 < q.sigma1 : p.sigma2 < q.sigma2);
  });
  return out;
}

QuarticCount quartic_bruteforce(const QuadHopfHamiltonian& q, double s0, std::size_t n) {
  if (n < 1000) throw Error(ErrorKind::InvalidArgument, "quartic_bruteforce requires n >= 1000");
  if (q.B != 0) throw Error(ErrorKind::InvalidArgument, "quartic_bruteforce requires B = 0");
  const double A = q.A, C = q.C, T1 = q.T1(s0), T3 = q.T3(s0);
  auto p = [&](double mu) {
    const double a = (A - mu) * (A - mu), c = (C - mu) * (C - mu);
    return 4 * a * c - a * T3 - c * T1;
  };
  const double span = std::max({std::fabs(A - C), std::sqrt(std::fabs(T1)) + std::sqrt(std::fabs(T3)), kScaleFloor});
  QuarticCount out;
  out.lo = std::min(A, C) - 10 * span;
  out.hi = std::max(A, C) + 10 * span;
  const double h = (out.hi - out.lo) / static_cast<double>(n - 1);
  double prev = p(out.lo);
  for (std::size_t k = 1; k < n; ++k) {
    const double mu = out.lo + h * static_cast<double>(k);
    const double cur = p(mu);
    if (cur == 0) {
      ++out.count;
      out.roots.push_back(mu);
    } else if (prev != 0 && (prev > 0) != (cur > 0)) {
      ++out.count;
      out.roots.push_back(mu - 0.5 * h);
    }
    prev = cur;
  }
  return out;
}

}  // namespace hopfbif
