#pragma once

#include <array>

#include "hopfbif/numeric.hpp"
#include "hopfbif/polynomial.hpp"

namespace hopfbif {

struct PoincareState {
  double X2 = 0, Y2 = 0, X3 = 0, Y3 = 0;

  std::array<double, 4> as_array() const { return {X2, Y2, X3, Y3}; }
  static PoincareState from_array(const std::array<double, 4>& a) { return {a[0], a[1], a[2], a[3]}; }
};

struct ReducedActionAngle {
  double psi = 0, phi = 0, Gamma = 0, J = 0;
};

struct HopfState {
  double sigma0 = 0, sigma1 = 0, sigma2 = 0, sigma3 = 0;

  /// σ₁² + σ₂² + σ₃² − σ₀²
  double sphere_residual() const {
    return sigma1 * sigma1 + sigma2 * sigma2 + sigma3 * sigma3 - sigma0 * sigma0;
  }
  bool on_sphere(double rel = 1e-12, double abs = kDefaultAbsTol) const {
    return nearly_equal(sigma1 * sigma1 + sigma2 * sigma2 + sigma3 * sigma3, sigma0 * sigma0, rel, abs);
  }
};

struct SystemParams {
  double m0 = 0, m2 = 0, m3 = 0;
  double a2 = 0, a3 = 0;
  double G = 0;
  double AMD = 0;

  /// Throws InvalidArgument when the invariants are violated.
  void validate() const;
  double Lambda2() const;
  double Lambda3() const;
  double Lz() const { return Lambda2() + Lambda3() - AMD; }
};

HopfState poincare_to_hopf(const PoincareState& p);

ReducedActionAngle poincare_to_action_angle(const PoincareState& p);
PoincareState action_angle_to_poincare(const ReducedActionAngle& r);
HopfState action_angle_to_hopf(const ReducedActionAngle& r);

struct SectionPlanePoint {
  double X2 = 0, Y2 = 0;
};

/// Image of a Hopf point on the Y₃ = 0, X₃ > 0 section. Throws PoleDegenerate
/// at σ₃ = ±σ₀, where ψ is undefined.
SectionPlanePoint hopf_to_section_plane(const HopfState& h);

/// Inverse embedding: X₃ = +√(2σ₀ − X₂² − Y₂²), Y₃ = 0.
PoincareState section_plane_to_poincare(double sigma0, double X2, double Y2);
HopfState section_plane_to_hopf(double sigma0, double X2, double Y2);

/// (dσ₁/dt, dσ₂/dt, dσ₃/dt)
std::array<double, 3> reduced_flow_rhs(const PolyHopfHamiltonian& z, const HopfState& h);

/// Analytic Jacobian ∂(σ̇₁, σ̇₂, σ̇₃)/∂(σ₁, σ₂, σ₃) at fixed σ₀.
std::array<std::array<double, 3>, 3> reduced_flow_jacobian(const PolyHopfHamiltonian& z, const HopfState& h);

struct InclinationResult {
  double cos_i = 1.0;
  /// Raw value fell outside [−1, 1]; `cos_i` is clamped.
  bool clamped = false;
};

InclinationResult mutual_inclination(double e2, double e3, const SystemParams& params, bool strict = false);
double i_max(const SystemParams& params);

/// Mutual-inclination cosine from the Poincaré actions, Gⱼ = Λⱼ − Wⱼ.
InclinationResult mutual_inclination_from_actions(double W2, double W3, const SystemParams& params);

}  // namespace hopfbif
