#include "hopfbif/quad_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <unsupported/Eigen/Polynomials>

#include "hopfbif/error.hpp"
#include "hopfbif/numeric.hpp"

namespace hopfbif {

double QuadHopfHamiltonian::T1(double s0) const {
  const double t = D1 + Delta1 / s0;
  return t * t;
}

double QuadHopfHamiltonian::T3(double s0) const {
  const double t = D3 + Delta3 / s0;
  return t * t;
}

void QuadHopfHamiltonian::validate() const {
  for (double v : {A, B, C, D1, Delta1, D3, Delta3, F0, F1, F2}) {
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "quadratic model coefficients must be finite");
  }
}

PolyHopfHamiltonian QuadHopfHamiltonian::to_poly() const {
  const std::array<PolyHopfHamiltonian::Term, 10> t = {{
      {0, 2, 0, A},
      {0, 1, 1, B},
      {0, 0, 2, C},
      {1, 1, 0, D1},
      {0, 1, 0, Delta1},
      {1, 0, 1, D3},
      {0, 0, 1, Delta3},
      {0, 0, 0, F0},
      {1, 0, 0, F1},
      {2, 0, 0, F2},
  }};
  return PolyHopfHamiltonian(std::span<const PolyHopfHamiltonian::Term>(t));
}

std::string_view to_string(ConicClass c) noexcept {
  switch (c) {
    case ConicClass::Ellipse: return "ellipse";
    case ConicClass::Hyperbola: return "hyperbola";
    case ConicClass::ParabolicDegenerate: return "parabolic-degenerate";
  }
  return "unknown";
}

ConicClass conic_class(const QuadHopfHamiltonian& q) {
  const double disc = q.B * q.B - 4 * q.A * q.C;
  if (disc < 0) return ConicClass::Ellipse;
  if (disc > 0) return ConicClass::Hyperbola;
  return ConicClass::ParabolicDegenerate;
}

HopfState Rotation::to_original(const HopfState& t) const {
  return {t.sigma0, alpha * t.sigma1 + beta * t.sigma3, t.sigma2, -beta * t.sigma1 + alpha * t.sigma3};
}

HopfState Rotation::to_rotated(const HopfState& o) const {
  return {o.sigma0, alpha * o.sigma1 - beta * o.sigma3, o.sigma2, beta * o.sigma1 + alpha * o.sigma3};
}

RotatedQuad rotate_to_diagonal(const QuadHopfHamiltonian& q) {
  q.validate();
  const double amc = q.A - q.C;
  if (amc == 0 && q.B == 0) {
    throw Error(ErrorKind::IsotropicDegenerate, "A = C and B = 0: rotation angle is indeterminate");
  }
  double theta = 0;
  if (q.B != 0) theta = (amc == 0) ? 0.25 * kPi : 0.5 * std::atan(-q.B / amc);
  const double a = std::cos(theta), b = std::sin(theta);
  RotatedQuad r;
  r.rotation = {a, b, theta};
  QuadHopfHamiltonian& m = r.model;
  m.A = q.A * a * a + q.C * b * b - q.B * a * b;
  m.C = q.A * b * b + q.C * a * a + q.B * a * b;
  m.B = 0.0;
  m.D1 = q.D1 * a - q.D3 * b;
  m.Delta1 = q.Delta1 * a - q.Delta3 * b;
  m.D3 = q.D1 * b + q.D3 * a;
  m.Delta3 = q.Delta1 * b + q.Delta3 * a;
  m.F0 = q.F0;
  m.F1 = q.F1;
  m.F2 = q.F2;
  return r;
}

namespace {

void require_diagonal(const QuadHopfHamiltonian& q, const char* who) {
  q.validate();
  const double scale = std::max({std::fabs(q.A), std::fabs(q.C), kScaleFloor});
  if (std::fabs(q.B) > 1e-12 * scale) {
    throw Error(ErrorKind::InvalidArgument, std::string(who) + " requires B = 0; call rotate_to_diagonal first");
  }
}

double linear_zero_tol(double slope, double offset, double s0) {
  return 1e-14 * (std::fabs(slope) * s0 + std::fabs(offset));
}

/// S(μ)/σ₀² = T₁/(4(A−μ)²) + T₃/(4(C−μ)²) − 1
struct ReducedConstraint {
  double A, C, T1, T3;
  double g(double mu) const {
    const double p = A - mu, r = C - mu;
    return T1 / (4 * p * p) + T3 / (4 * r * r) - 1;
  }
  double dg(double mu) const {
    const double p = A - mu, r = C - mu;
    return T1 / (2 * p * p * p) + T3 / (2 * r * r * r);
  }
};

/// Root of g in (lo, hi), g(lo) and g(hi) of opposite sign (either endpoint
/// may be a pole). Newton from `seed` when it lies inside, bisection otherwise.
double polish_root(const ReducedConstraint& rc, double lo, double hi, double seed) {
  double glo = rc.g(lo);
  double x = (seed > lo && seed < hi) ? seed : 0.5 * (lo + hi);
  for (int it = 0; it < 300; ++it) {
    const double gx = rc.g(x);
    if (gx == 0) return x;
    if ((gx > 0) == (glo > 0)) {
      lo = x;
      glo = gx;
    } else {
      hi = x;
    }
    const double d = rc.dg(x);
    double next = (d != 0) ? x - gx / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == x || hi - lo <= 4 * std::numeric_limits<double>::epsilon() * std::max(std::fabs(lo), std::fabs(hi))) {
      return next;
    }
    x = next;
  }
  return x;
}

CpiRoot make_root(const QuadHopfHamiltonian& q, double s0, double mu) {
  CpiRoot r;
  r.mu = mu;
  r.sigma1 = -q.D(s0) / (2 * (q.A - mu));
  r.sigma3 = -q.E(s0) / (2 * (q.C - mu));
  r.residual = r.sigma1 * r.sigma1 + r.sigma3 * r.sigma3 - s0 * s0;
  return r;
}

CpiRoot make_point(double mu, double s1, double s3, double s0) {
  return {mu, s1, s3, s1 * s1 + s3 * s3 - s0 * s0};
}

}  // namespace

std::array<double, 5> cpi_quartic_coefficients(const QuadHopfHamiltonian& q, double s0) {
  const double T1 = q.T1(s0), T3 = q.T3(s0);
  // p = A − μ, r = C − μ as coefficient vectors in μ
  const std::array<double, 3> p2 = {q.A * q.A, -2 * q.A, 1};
  const std::array<double, 3> r2 = {q.C * q.C, -2 * q.C, 1};
  std::array<double, 5> c{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) c[i + j] += 4 * p2[i] * r2[j];
  }
  for (int i = 0; i < 3; ++i) c[i] -= p2[i] * T3 + r2[i] * T1;
  return c;
}

CpiRootSet cpi_quartic_roots(const QuadHopfHamiltonian& q, double s0) {
  require_diagonal(q, "cpi_quartic_roots");
  if (!(s0 > 0)) throw Error(ErrorKind::InvalidArgument, "cpi_quartic_roots requires sigma0 > 0");
  if (q.A == q.C) throw Error(ErrorKind::IsotropicDegenerate, "A = C: the CPI quartic is degenerate");

  const double D = q.D(s0), E = q.E(s0);
  const bool d_zero = std::fabs(D) <= linear_zero_tol(q.D1, q.Delta1, s0);
  const bool e_zero = std::fabs(E) <= linear_zero_tol(q.D3, q.Delta3, s0);
  CpiRootSet out;

  if (d_zero || e_zero) {
    if (d_zero && e_zero) {
      out.branch = CpiBranch::SymmetricBoth;
      out.roots = {make_point(q.A, -s0, 0, s0), make_point(q.A, s0, 0, s0), make_point(q.C, 0, -s0, s0),
                   make_point(q.C, 0, s0, s0)};
    } else if (d_zero) {
      out.branch = CpiBranch::SymmetricSigma1;
      for (double s3 : {-s0, s0}) out.roots.push_back(make_point(q.C + E / (2 * s3), 0, s3, s0));
      const double s3 = -E / (2 * (q.C - q.A));
      if (s3 * s3 < s0 * s0) {
        const double s1 = std::sqrt(s0 * s0 - s3 * s3);
        out.roots.push_back(make_point(q.A, -s1, s3, s0));
        out.roots.push_back(make_point(q.A, s1, s3, s0));
      }
    } else {
      out.branch = CpiBranch::SymmetricSigma3;
      for (double s1 : {-s0, s0}) out.roots.push_back(make_point(q.A + D / (2 * s1), s1, 0, s0));
      const double s1 = -D / (2 * (q.A - q.C));
      if (s1 * s1 < s0 * s0) {
        const double s3 = std::sqrt(s0 * s0 - s1 * s1);
        out.roots.push_back(make_point(q.C, s1, -s3, s0));
        out.roots.push_back(make_point(q.C, s1, s3, s0));
      }
    }
    std::sort(out.roots.begin(), out.roots.end(),
              [](const CpiRoot& a, const CpiRoot& b) { return a.mu != b.mu ? a.mu < b.mu : a.sigma1 < b.sigma1; });
    return out;
  }

  // Seeds from the companion matrix of the shifted and scaled quartic.
  const double T1 = q.T1(s0), T3 = q.T3(s0);
  const double m = 0.5 * (q.A + q.C);
  const double s = std::max({0.5 * std::fabs(q.A - q.C), 0.5 * std::sqrt(T1), 0.5 * std::sqrt(T3), kScaleFloor});
  QuadHopfHamiltonian scaled = q;
  scaled.A = (q.A - m) / s;
  scaled.C = (q.C - m) / s;
  scaled.D1 = q.D1 / s;
  scaled.Delta1 = q.Delta1 / s;
  scaled.D3 = q.D3 / s;
  scaled.Delta3 = q.Delta3 / s;
  const auto c = cpi_quartic_coefficients(scaled, s0);
  Eigen::Matrix<double, 5, 1> coeffs;
  for (int i = 0; i < 5; ++i) coeffs[i] = c[i];
  Eigen::PolynomialSolver<double, 4> solver;
  solver.compute(coeffs);
  std::vector<double> seeds;
  for (const auto& z : solver.roots()) {
    if (std::fabs(z.imag()) < 1e-6 * (1 + std::fabs(z.real()))) seeds.push_back(m + s * z.real());
  }
  auto seed_in = [&](double lo, double hi) {
    for (double x : seeds) {
      if (x > lo && x < hi) return x;
    }
    return 0.5 * (lo + hi);
  };

  // g = S/σ₀² has poles at A and C, tends to −1 at ±∞ and is convex between
  // the poles, so it has one root on each outer branch and 0 or 2 inside.
  const ReducedConstraint rc{q.A, q.C, T1, T3};
  const double lo = std::min(q.A, q.C), hi = std::max(q.A, q.C);
  const double reach = std::sqrt(T1 + T3) + std::fabs(hi - lo) + kScaleFloor;
  const double gap = hi - lo;
  auto nudge = [&](double x, double dir) {
    double h = 1e-15 * std::max(std::fabs(x), gap);
    double y = x + dir * h;
    while (rc.g(y) <= 0) {
      h *= 0.5;
      const double z = x + dir * h;
      if (z == x) break;
      y = z;
    }
    return y;
  };
  std::vector<double> mus;
  {
    double left = lo - reach;
    while (rc.g(left) >= 0) left -= reach;
    mus.push_back(polish_root(rc, left, nudge(lo, -1), seed_in(left, lo)));
  }
  {
    const double k1 = std::cbrt(T1), k3 = std::cbrt(T3);
    const double mu_star = (k3 * q.A + k1 * q.C) / (k1 + k3);
    const double gmin = rc.g(mu_star);
    constexpr double kDoubleTol = 1e-12;
    if (std::fabs(gmin) <= kDoubleTol) out.near_double = true;
    if (gmin < -kDoubleTol) {
      mus.push_back(polish_root(rc, nudge(lo, +1), mu_star, seed_in(lo, mu_star)));
      mus.push_back(polish_root(rc, mu_star, nudge(hi, -1), seed_in(mu_star, hi)));
    } else if (std::fabs(gmin) <= kDoubleTol) {
      mus.push_back(mu_star);
      mus.push_back(mu_star);
    }
  }
  {
    double right = hi + reach;
    while (rc.g(right) >= 0) right += reach;
    mus.push_back(polish_root(rc, nudge(hi, +1), right, seed_in(hi, right)));
  }
  std::sort(mus.begin(), mus.end());
  for (double mu : mus) out.roots.push_back(make_root(q, s0, mu));
  return out;
}

DiscriminantValue discriminant_q(const QuadHopfHamiltonian& q, double s0) {
  require_diagonal(q, "discriminant_q");
  const double d = (q.A - q.C) * (q.A - q.C);
  const double T1 = q.T1(s0), T3 = q.T3(s0);
  const double u = 4 * d - T1;
  const double bracket = u * u * u - 3 * T3 * (16 * d * d + 28 * T1 * d + T1 * T1) + 3 * T3 * T3 * u - T3 * T3 * T3;
  DiscriminantValue out;
  out.value = 64 * d * T1 * T3 * bracket;
  const bool t1_zero = std::fabs(q.D(s0)) <= linear_zero_tol(q.D1, q.Delta1, s0);
  const bool t3_zero = std::fabs(q.E(s0)) <= linear_zero_tol(q.D3, q.Delta3, s0);
  out.artifact = t1_zero || t3_zero;
  return out;
}

double f1(const QuadHopfHamiltonian& q, double s0) {
  const double d = (q.A - q.C) * (q.A - q.C);
  const double T1 = q.T1(s0), T3 = q.T3(s0);
  return -4 * d + T1 + T3 - 3 * std::cbrt(4.0) * std::cbrt(d * T1 * T1) + 6 * std::cbrt(2.0) * std::cbrt(d * d * T1);
}

double f2(const QuadHopfHamiltonian& q, double s0) {
  return -4 + q.T1(s0) / (q.A * q.A) + q.T3(s0) / (q.C * q.C);
}

F1Roots f1_roots(const QuadHopfHamiltonian& q, double sigma0_max, unsigned threads) {
  require_diagonal(q, "f1_roots");
  if (q.A == q.C) throw Error(ErrorKind::IsotropicDegenerate, "A = C: f1 is undefined");
  if (!(sigma0_max > 0) || !std::isfinite(sigma0_max)) {
    throw Error(ErrorKind::InvalidArgument, "f1_roots requires a positive finite sigma0_max");
  }
  F1Roots out;
  const double d = (q.A - q.C) * (q.A - q.C);
  if (q.Delta1 == 0 && q.Delta3 == 0) {
    out.constant_in_sigma0 = true;
    out.all_sigma0_degenerate = std::fabs(f1(q, sigma0_max)) <= 1e-12 * std::max(1.0, 4 * d);
    return out;
  }

  constexpr std::size_t kUniform = 2048;
  constexpr std::size_t kLog = 256;
  std::vector<double> grid;
  grid.reserve(kUniform + kLog);
  const double first = sigma0_max / kUniform;
  const double log_lo = std::log(sigma0_max * 1e-6), log_hi = std::log(first);
  for (std::size_t k = 0; k < kLog; ++k) grid.push_back(std::exp(log_lo + (log_hi - log_lo) * k / kLog));
  for (std::size_t k = 1; k <= kUniform; ++k) grid.push_back(sigma0_max * static_cast<double>(k) / kUniform);

  std::vector<double> vals(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t i) { vals[i] = f1(q, grid[i]); });

  auto fn = [&](double s0) { return f1(q, s0); };
  std::vector<double> roots;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (vals[i] == 0) {
      roots.push_back(grid[i]);
      continue;
    }
    if ((vals[i] > 0) != (vals[i + 1] > 0) && vals[i + 1] != 0) roots.push_back(bisect(fn, grid[i], grid[i + 1], 0.0));
  }
  if (vals.back() == 0) roots.push_back(grid.back());

  for (double r : roots) {
    if (!out.roots.empty() && r - out.roots.back() < 1e-10) {
      out.possibly_tangent_root = true;
      continue;
    }
    out.roots.push_back(r);
    out.residuals.push_back(f1(q, r));
  }
  return out;
}

CpiiValues cpii_values(const QuadHopfHamiltonian& q) {
  require_diagonal(q, "cpii_values");
  if (q.A == 0 || q.C == 0) throw Error(ErrorKind::SecondKindDegenerate, "A*C = 0: no isolated CPII");
  const double A = q.A, C = q.C, D1 = q.D1, D3 = q.D3, d1 = q.Delta1, d3 = q.Delta3;
  const double A2 = A * A, C2 = C * C;
  const double lin = C2 * D1 * d1 + A2 * D3 * d3;
  const double cst = C2 * d1 * d1 + A2 * d3 * d3;
  const double den = C2 * D1 * D1 + A2 * (-4 * C2 + D3 * D3);
  const double den_scale = C2 * D1 * D1 + A2 * (4 * C2 + D3 * D3);
  CpiiValues out;
  std::vector<double> cand;

  if (std::fabs(den) > 1e-12 * den_scale) {
    const double rad = 4 * C2 * d1 * d1 - (D3 * d1 + 2 * A * d3 - D1 * d3) * (D3 * d1 - (2 * A + D1) * d3);
    if (rad < 0) {
      out.complex_roots = true;
      out.branch = CpiiBranch::None;
      return out;
    }
    out.branch = CpiiBranch::Generic;
    const double root = A * C * std::sqrt(rad);
    cand = {-(lin + root) / den, -(lin - root) / den};
  } else {
    const double w = 4 * C2 - D3 * D3;
    if (w < 0 || cst == 0) {
      out.branch = CpiiBranch::None;
      return out;
    }
    // Both pairings of the ± sign are evaluated; the one that zeroes f₂ wins.
    double best = 0, best_res = std::numeric_limits<double>::infinity();
    for (int sgn : {+1, -1}) {
      const double denom = 2 * (A2 * D3 * d3 * std::fabs(C) + sgn * C2 * d1 * std::fabs(A) * std::sqrt(w));
      if (denom == 0) continue;
      const double s0 = -cst * std::fabs(C) / denom;
      if (!(s0 != 0 && std::isfinite(s0))) continue;
      const double res = std::fabs(f2(q, s0));
      if (res < best_res) {
        best_res = res;
        best = s0;
        out.single_pairing = sgn;
      }
    }
    if (out.single_pairing == 0) {
      out.branch = CpiiBranch::None;
      return out;
    }
    out.branch = CpiiBranch::Single;
    cand = {best};
  }
  for (double s0 : cand) {
    if (s0 > 0) {
      out.sigma0.push_back(s0);
    } else {
      out.rejected_negative.push_back(s0);
    }
  }
  std::sort(out.sigma0.begin(), out.sigma0.end());
  out.sigma0.erase(std::unique(out.sigma0.begin(), out.sigma0.end()), out.sigma0.end());
  return out;
}

CpiiCenter cpii_center_and_stability(const QuadHopfHamiltonian& q, double s0) {
  q.validate();
  const double det = 4 * q.A * q.C - q.B * q.B;
  const double scale = std::max({q.A * q.A, q.B * q.B, q.C * q.C, kScaleFloor});
  if (q.A * q.C == 0 && q.B == 0) throw Error(ErrorKind::SecondKindDegenerate, "A*C = 0: no isolated CPII");
  if (std::fabs(det) <= 1e-14 * scale) throw Error(ErrorKind::SecondKindDegenerate, "quadratic form is singular");
  // 2Aσ₁ + Bσ₃ = −D, Bσ₁ + 2Cσ₃ = −E
  const double D = q.D(s0), E = q.E(s0);
  CpiiCenter out;
  out.sigma1 = (-D * 2 * q.C + E * q.B) / det;
  out.sigma3 = (-E * 2 * q.A + D * q.B) / det;
  const double rem = s0 * s0 - out.sigma1 * out.sigma1 - out.sigma3 * out.sigma3;
  out.exists = rem > 0;
  out.sigma2 = out.exists ? std::sqrt(rem) : 0.0;
  out.stable = det > 0;
  return out;
}

}  // namespace hopfbif
