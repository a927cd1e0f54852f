#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "hopfbif/error.hpp"
#include "hopfbif/numeric.hpp"
#include "hopfbif/portrait.hpp"

namespace hopfbif {

double section_energy(const PolyHopfHamiltonian& z, double s0, double X2, double Y2) {
  const double r2 = X2 * X2 + Y2 * Y2;
  const double X3 = std::sqrt(std::max(0.0, 2 * s0 - r2));
  return z.value(s0, X2 * X3, r2 - s0);
}

PortraitMarker marker_for(const CriticalPoint& cp) {
  PortraitMarker m;
  m.label = cp.label;
  m.kind = cp.kind;
  m.stability = cp.stability;
  m.energy = cp.energy;
  try {
    const auto p = hopf_to_section_plane(cp.location);
    m.X2 = p.X2;
    m.Y2 = p.Y2;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::PoleDegenerate) throw;
    if (cp.location.sigma3 > 0) {
      m.on_rim = true;
      m.X2 = std::sqrt(2 * cp.location.sigma0);
    }
  }
  return m;
}

std::vector<double> auto_levels(const PolyHopfHamiltonian& z, double s0, std::size_t count, std::size_t grid) {
  if (count == 0) return {};
  const double R = std::sqrt(2 * s0);
  std::vector<double> vals;
  for (std::size_t i = 0; i < grid; ++i) {
    for (std::size_t j = 0; j < grid; ++j) {
      const double x = -R + 2 * R * (i + 0.5) / grid, y = -R + 2 * R * (j + 0.5) / grid;
      if (x * x + y * y < R * R) vals.push_back(section_energy(z, s0, x, y));
    }
  }
  std::sort(vals.begin(), vals.end());
  std::vector<double> out;
  for (std::size_t k = 0; k < count; ++k) {
    const double q = (k + 0.5) / count;
    out.push_back(vals[std::min(vals.size() - 1, static_cast<std::size_t>(q * vals.size()))]);
  }
  return out;
}

namespace {

using Pt = std::array<double, 2>;

struct Field {
  const PolyHopfHamiltonian& z;
  double s0, R;
  std::size_t n;
  std::vector<double> node;  // (n+1)² extended values, row-major in j

  double coord(std::size_t i) const { return -R + 2 * R * static_cast<double>(i) / n; }
  /// Section energy, continued radially (constant along rays) outside the disk.
  double ext(double x, double y) const {
    const double r = std::hypot(x, y);
    if (r > R) {
      x *= R / r;
      y *= R / r;
    }
    return section_energy(z, s0, x, y);
  }
  double at(std::size_t i, std::size_t j) const { return node[j * (n + 1) + i]; }
};

Pt edge_root(const Field& f, Pt a, Pt b, double fa, double fb, double level) {
  // Illinois-modified regula falsi on the segment.
  double ta = 0, tb = 1;
  fa -= level;
  fb -= level;
  double t = 0.5;
  for (int it = 0; it < 60; ++it) {
    t = (fa * tb - fb * ta) / (fa - fb);
    if (!(t > ta && t < tb)) t = 0.5 * (ta + tb);
    const double ft = f.ext(a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])) - level;
    if (ft == 0 || tb - ta < 1e-15) break;
    if ((ft > 0) == (fa > 0)) {
      ta = t;
      fa = ft;
      fb *= 0.5;
    } else {
      tb = t;
      fb = ft;
      fa *= 0.5;
    }
  }
  return {a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
}

Pt rim_point(const Field& f, Pt inside, Pt outside, double level) {
  // Segment/circle intersection, then a bracketed search along the rim.
  const double dx = outside[0] - inside[0], dy = outside[1] - inside[1];
  const double A = dx * dx + dy * dy, B = 2 * (inside[0] * dx + inside[1] * dy),
               C = inside[0] * inside[0] + inside[1] * inside[1] - f.R * f.R;
  const double disc = std::max(0.0, B * B - 4 * A * C);
  const double t = std::clamp((-B + std::sqrt(disc)) / (2 * A), 0.0, 1.0);
  const double phi0 = std::atan2(inside[1] + t * dy, inside[0] + t * dx);
  auto q = [&](double phi) { return section_energy(f.z, f.s0, f.R * std::cos(phi), f.R * std::sin(phi)) - level; };
  const double delta = 4.0 / f.n;
  double lo = phi0 - delta, hi = phi0 + delta;
  double qlo = q(lo), qhi = q(hi);
  double phi = phi0;
  if ((qlo > 0) != (qhi > 0)) {
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double qm = q(mid);
      if ((qm > 0) == (qlo > 0)) {
        lo = mid;
        qlo = qm;
      } else {
        hi = mid;
      }
    }
    phi = 0.5 * (lo + hi);
  }
  return {f.R * std::cos(phi), f.R * std::sin(phi)};
}

std::vector<PortraitCurve> trace_level(const Field& f, double level) {
  const std::size_t n = f.n;
  // Edge ids: horizontal (i,j)-(i+1,j) → j*n + i; vertical (i,j)-(i,j+1) → H + i*n + j.
  const std::size_t H = n * (n + 1);
  std::unordered_map<std::size_t, Pt> verts;
  std::unordered_map<std::size_t, std::array<long, 2>> adj;
  auto vertex = [&](std::size_t id) {
    auto it = verts.find(id);
    if (it != verts.end()) return;
    Pt a, b;
    double fa, fb;
    if (id < H) {
      const std::size_t j = id / n, i = id % n;
      a = {f.coord(i), f.coord(j)};
      b = {f.coord(i + 1), f.coord(j)};
      fa = f.at(i, j);
      fb = f.at(i + 1, j);
    } else {
      const std::size_t k = id - H, i = k / n, j = k % n;
      a = {f.coord(i), f.coord(j)};
      b = {f.coord(i), f.coord(j + 1)};
      fa = f.at(i, j);
      fb = f.at(i, j + 1);
    }
    verts[id] = edge_root(f, a, b, fa, fb, level);
  };
  auto link = [&](std::size_t e1, std::size_t e2) {
    vertex(e1);
    vertex(e2);
    for (auto [p, q] : {std::pair{e1, e2}, std::pair{e2, e1}}) {
      auto& s = adj.try_emplace(p, std::array<long, 2>{-1, -1}).first->second;
      (s[0] < 0 ? s[0] : s[1]) = static_cast<long>(q);
    }
  };

  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const double v0 = f.at(i, j) - level, v1 = f.at(i + 1, j) - level;
      const double v2 = f.at(i + 1, j + 1) - level, v3 = f.at(i, j + 1) - level;
      const int code = (v0 > 0) | ((v1 > 0) << 1) | ((v2 > 0) << 2) | ((v3 > 0) << 3);
      if (code == 0 || code == 15) continue;
      const std::size_t e0 = j * n + i, e2 = (j + 1) * n + i;
      const std::size_t e3 = H + i * n + j, e1 = H + (i + 1) * n + j;
      if (code == 5 || code == 10) {
        const double xc = f.coord(i) + f.R / n, yc = f.coord(j) + f.R / n;
        const bool center_pos = f.ext(xc, yc) - level > 0;
        const bool diag02 = (code == 5) == center_pos;
        if (diag02 == (code == 5)) {
          // Positive corners joined through the center: isolate the negative ones.
          if (code == 5) {
            link(e0, e1);
            link(e2, e3);
          } else {
            link(e3, e0);
            link(e1, e2);
          }
        } else if (code == 5) {
          link(e0, e3);
          link(e1, e2);
        } else {
          link(e0, e1);
          link(e2, e3);
        }
        continue;
      }
      std::vector<std::size_t> cut;
      if ((v0 > 0) != (v1 > 0)) cut.push_back(e0);
      if ((v1 > 0) != (v2 > 0)) cut.push_back(e1);
      if ((v3 > 0) != (v2 > 0)) cut.push_back(e2);
      if ((v0 > 0) != (v3 > 0)) cut.push_back(e3);
      if (cut.size() == 2) link(cut[0], cut[1]);
    }
  }

  // Chain edges into polylines: open chains first (from degree-one vertices), then cycles.
  std::vector<std::size_t> ids;
  ids.reserve(adj.size());
  for (const auto& [id, s] : adj) ids.push_back(id);
  std::sort(ids.begin(), ids.end());
  std::unordered_map<std::size_t, bool> seen;
  std::vector<std::pair<std::vector<Pt>, bool>> chains;
  auto walk = [&](std::size_t start, bool cyclic) {
    std::vector<Pt> pts;
    long prev = -1;
    long cur = static_cast<long>(start);
    while (cur >= 0 && !seen[cur]) {
      seen[cur] = true;
      pts.push_back(verts[cur]);
      const auto& s = adj[cur];
      long next = s[0] != prev ? s[0] : s[1];
      if (next == prev && s[0] == s[1]) next = -1;
      prev = cur;
      cur = next;
    }
    if (!pts.empty()) chains.emplace_back(std::move(pts), cyclic);
  };
  for (std::size_t id : ids) {
    const auto& s = adj[id];
    if ((s[0] < 0 || s[1] < 0) && !seen[id]) walk(id, false);
  }
  for (std::size_t id : ids) {
    if (!seen[id]) walk(id, true);
  }

  // Clip to the disk.
  std::vector<PortraitCurve> out;
  const double rlim = f.R * (1 + 1e-12);
  auto inside = [&](const Pt& p) { return std::hypot(p[0], p[1]) <= rlim; };
  for (auto& [pts, cyclic] : chains) {
    const bool all_in = std::all_of(pts.begin(), pts.end(), inside);
    if (all_in) {
      PortraitCurve c;
      c.points = pts;
      c.closed = cyclic;
      if (cyclic && pts.size() > 1) c.points.push_back(pts.front());
      c.level = level;
      c.sigma0 = f.s0;
      out.push_back(std::move(c));
      continue;
    }
    if (cyclic) {
      // Rotate so the chain starts outside; then treat it as open.
      const auto it = std::find_if(pts.begin(), pts.end(), [&](const Pt& p) { return !inside(p); });
      std::rotate(pts.begin(), it, pts.end());
      pts.push_back(pts.front());
    }
    PortraitCurve cur;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const bool in = inside(pts[k]);
      if (in) {
        if (cur.points.empty() && k > 0) cur.points.push_back(rim_point(f, pts[k], pts[k - 1], level));
        cur.points.push_back(pts[k]);
      } else if (!cur.points.empty()) {
        cur.points.push_back(rim_point(f, pts[k - 1], pts[k], level));
        cur.level = level;
        cur.sigma0 = f.s0;
        out.push_back(std::move(cur));
        cur = PortraitCurve{};
      }
    }
    if (!cur.points.empty()) {
      cur.level = level;
      cur.sigma0 = f.s0;
      out.push_back(std::move(cur));
    }
  }
  return out;
}

}  // namespace

Portrait contour_portrait(const PolyHopfHamiltonian& z, double s0, const std::vector<double>& levels,
                          const PortraitOptions& opt) {
  if (!(s0 > 0)) throw Error(ErrorKind::InvalidArgument, "contour_portrait requires sigma0 > 0");
  if (opt.grid < 8) throw Error(ErrorKind::InvalidArgument, "contour grid must have at least 8 cells");
  Portrait pt;
  pt.sigma0 = s0;
  pt.levels = levels;
  pt.grid = opt.grid;
  const auto lim = energy_limits(z, s0);
  pt.E_L = lim.E_L;
  pt.E_R = lim.E_R;
  const double range = std::max(lim.E_R - lim.E_L, kScaleFloor);
  const double ext_tol = 1e-12 * std::max(range, std::max(std::fabs(lim.E_L), std::fabs(lim.E_R)));
  for (double e : levels) {
    if (e < lim.E_L - ext_tol || e > lim.E_R + ext_tol) {
      throw Error(ErrorKind::EmptyLevel, "level " + format_double(e) + " outside [" + format_double(lim.E_L) + ", " +
                                             format_double(lim.E_R) + "]");
    }
  }

  Field f{z, s0, std::sqrt(2 * s0), opt.grid, {}};
  const std::size_t n = opt.grid;
  f.node.resize((n + 1) * (n + 1));
  parallel_for(n + 1, opt.threads, [&](std::size_t j) {
    for (std::size_t i = 0; i <= n; ++i) f.node[j * (n + 1) + i] = f.ext(f.coord(i), f.coord(j));
  });

  std::vector<std::vector<PortraitCurve>> per_level(levels.size());
  parallel_for(levels.size(), opt.threads, [&](std::size_t k) {
    const double e = levels[k];
    const bool at_min = std::fabs(e - lim.E_L) <= ext_tol, at_max = std::fabs(e - lim.E_R) <= ext_tol;
    if (at_min || at_max) {
      CriticalPoint cp;
      cp.location = at_min ? lim.at_min : lim.at_max;
      const auto m = marker_for(cp);
      PortraitCurve c;
      c.level = e;
      c.sigma0 = s0;
      c.point_curve = true;
      if (m.on_rim) {
        c.closed = true;
        for (std::size_t q = 0; q <= 4 * n; ++q) {
          const double phi = kTwoPi * q / (4 * n);
          c.points.push_back({f.R * std::cos(phi), f.R * std::sin(phi)});
        }
      } else {
        c.points.push_back({m.X2, m.Y2});
      }
      per_level[k].push_back(std::move(c));
      return;
    }
    per_level[k] = trace_level(f, e);
  });
  for (auto& v : per_level) {
    for (auto& c : v) pt.curves.push_back(std::move(c));
  }

  if (opt.markers) {
    auto census = critical_census(z, s0);
    for (const auto* set : {&census.cpi, &census.cpii}) {
      for (const auto& cp : *set) pt.markers.push_back(marker_for(cp));
    }
  }
  return pt;
}

}  // namespace hopfbif
