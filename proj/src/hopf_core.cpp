#include "hopfbif/hopf_core.hpp"

#include <cmath>
#include <string>

#include "hopfbif/error.hpp"

namespace hopfbif {

void SystemParams::validate() const {
  const std::array<double, 6> pos = {m0, m2, m3, a2, a3, G};
  for (double v : pos) {
    if (!std::isfinite(v) || v <= 0) throw Error(ErrorKind::InvalidArgument, "masses, semi-major axes and G must be positive");
  }
  if (!(a2 < a3)) throw Error(ErrorKind::InvalidArgument, "require a2 < a3");
  if (!std::isfinite(AMD) || AMD < 0) throw Error(ErrorKind::InvalidArgument, "AMD must be non-negative");
  if (AMD >= Lambda2() + Lambda3()) throw Error(ErrorKind::InfeasibleAmd, "AMD must be below Lambda2 + Lambda3");
}

double SystemParams::Lambda2() const { return m2 * std::sqrt(G * m0 * a2); }
double SystemParams::Lambda3() const { return m3 * std::sqrt(G * m0 * a3); }

HopfState poincare_to_hopf(const PoincareState& p) {
  const double r2 = p.X2 * p.X2 + p.Y2 * p.Y2;
  const double r3 = p.X3 * p.X3 + p.Y3 * p.Y3;
  return {0.5 * (r2 + r3), p.X2 * p.X3 + p.Y2 * p.Y3, p.Y2 * p.X3 - p.Y3 * p.X2, 0.5 * (r2 - r3)};
}

ReducedActionAngle poincare_to_action_angle(const PoincareState& p) {
  // X = −√(2W) cos w, Y = √(2W) sin w
  const double W2 = 0.5 * (p.X2 * p.X2 + p.Y2 * p.Y2);
  const double W3 = 0.5 * (p.X3 * p.X3 + p.Y3 * p.Y3);
  const double w2 = std::atan2(p.Y2, -p.X2);
  const double w3 = std::atan2(p.Y3, -p.X3);
  return {w2 - w3, w2 + w3, 0.5 * (W2 - W3), 0.5 * (W2 + W3)};
}

PoincareState action_angle_to_poincare(const ReducedActionAngle& r) {
  if (r.J < 0 || std::fabs(r.Gamma) > r.J * (1 + 1e-15)) {
    throw Error(ErrorKind::InvalidArgument, "require J >= 0 and |Gamma| <= J");
  }
  const double W2 = std::max(0.0, r.J + r.Gamma);
  const double W3 = std::max(0.0, r.J - r.Gamma);
  const double w2 = 0.5 * (r.phi + r.psi);
  const double w3 = 0.5 * (r.phi - r.psi);
  return {-std::sqrt(2 * W2) * std::cos(w2), std::sqrt(2 * W2) * std::sin(w2), -std::sqrt(2 * W3) * std::cos(w3),
          std::sqrt(2 * W3) * std::sin(w3)};
}

HopfState action_angle_to_hopf(const ReducedActionAngle& r) {
  const double amp = 2 * std::sqrt(std::max(0.0, r.J + r.Gamma)) * std::sqrt(std::max(0.0, r.J - r.Gamma));
  return {2 * r.J, amp * std::cos(r.psi), -amp * std::sin(r.psi), 2 * r.Gamma};
}

SectionPlanePoint hopf_to_section_plane(const HopfState& h) {
  if (!(h.sigma0 > 0)) throw Error(ErrorKind::InvalidArgument, "hopf_to_section_plane requires sigma0 > 0");
  if (std::fabs(h.sigma3) > h.sigma0 * (1 + 1e-12)) {
    throw Error(ErrorKind::InvalidArgument, "hopf_to_section_plane requires |sigma3| <= sigma0");
  }
  const double rho2 = h.sigma0 * h.sigma0 - h.sigma3 * h.sigma3;
  if (rho2 <= 1e-28 * h.sigma0 * h.sigma0) {
    throw Error(ErrorKind::PoleDegenerate, "angle-undefined at pole");
  }
  const double rho = std::sqrt(rho2);
  const double cpsi = h.sigma1 / rho;
  const double spsi = -h.sigma2 / rho;
  const double r = std::sqrt(std::max(0.0, h.sigma0 + h.sigma3));
  // X₂ = −r cos(ψ−π), Y₂ = r sin(ψ−π)
  return {r * cpsi, -r * spsi};
}

PoincareState section_plane_to_poincare(double sigma0, double X2, double Y2) {
  const double rem = 2 * sigma0 - X2 * X2 - Y2 * Y2;
  if (rem < -1e-14 * std::max(sigma0, kScaleFloor)) {
    throw Error(ErrorKind::InvalidArgument, "section point outside the disk X2^2+Y2^2 <= 2 sigma0");
  }
  return {X2, Y2, std::sqrt(std::max(0.0, rem)), 0.0};
}

HopfState section_plane_to_hopf(double sigma0, double X2, double Y2) {
  return poincare_to_hopf(section_plane_to_poincare(sigma0, X2, Y2));
}

std::array<double, 3> reduced_flow_rhs(const PolyHopfHamiltonian& z, const HopfState& h) {
  const auto [z1, z3] = z.gradient(h.sigma0, h.sigma1, h.sigma3);
  return {2 * h.sigma2 * z3, 2 * (h.sigma3 * z1 - h.sigma1 * z3), -2 * h.sigma2 * z1};
}

std::array<std::array<double, 3>, 3> reduced_flow_jacobian(const PolyHopfHamiltonian& z, const HopfState& h) {
  const auto [z1, z3] = z.gradient(h.sigma0, h.sigma1, h.sigma3);
  const auto [z11, z13, z33] = z.hessian(h.sigma0, h.sigma1, h.sigma3);
  const double s1 = h.sigma1, s2 = h.sigma2, s3 = h.sigma3;
  return {{{2 * s2 * z13, 2 * z3, 2 * s2 * z33},
           {2 * (s3 * z11 - z3 - s1 * z13), 0.0, 2 * (z1 + s3 * z13 - s1 * z33)},
           {-2 * s2 * z11, -2 * z1, -2 * s2 * z13}}};
}

namespace {

InclinationResult inclination_from_G(double G2, double G3, double Lz, bool strict) {
  const double c = (Lz * Lz - G2 * G2 - G3 * G3) / (2 * G2 * G3);
  InclinationResult r{c, false};
  if (c > 1 || c < -1) {
    if (strict) throw Error(ErrorKind::InfeasibleGeometry, "cos i_mut = " + format_double(c) + " outside [-1, 1]");
    r.cos_i = std::clamp(c, -1.0, 1.0);
    r.clamped = true;
  }
  return r;
}

}  // namespace

InclinationResult mutual_inclination(double e2, double e3, const SystemParams& params, bool strict) {
  params.validate();
  if (!(e2 >= 0 && e2 < 1 && e3 >= 0 && e3 < 1)) {
    throw Error(ErrorKind::InvalidArgument, "eccentricities must lie in [0, 1)");
  }
  const double G2 = params.Lambda2() * std::sqrt(1 - e2 * e2);
  const double G3 = params.Lambda3() * std::sqrt(1 - e3 * e3);
  if (params.AMD == 0 && e2 == 0 && e3 == 0) return {1.0, false};
  return inclination_from_G(G2, G3, params.Lz(), strict);
}

InclinationResult mutual_inclination_from_actions(double W2, double W3, const SystemParams& params) {
  const double G2 = params.Lambda2() - W2;
  const double G3 = params.Lambda3() - W3;
  if (!(G2 > 0 && G3 > 0)) return {-1.0, true};
  return inclination_from_G(G2, G3, params.Lz(), false);
}

double i_max(const SystemParams& params) {
  params.validate();
  const double L2 = params.Lambda2(), L3 = params.Lambda3(), Lz = params.Lz();
  if (params.AMD == 0) return 0.0;
  const double c = (Lz * Lz - L2 * L2 - L3 * L3) / (2 * L2 * L3);
  if (c > 1 + 1e-15 || c < -1) throw Error(ErrorKind::InfeasibleAmd, "cos i_max = " + format_double(c) + " outside [-1, 1]");
  return std::acos(std::min(1.0, c));
}

}  // namespace hopfbif
