#pragma once

#include <string>
#include <vector>

#include "hopfbif/hopf_core.hpp"
#include "hopfbif/polynomial.hpp"

namespace hopfbif {

/// Z = Aσ₁² + Bσ₁σ₃ + Cσ₃² + D(σ₀)σ₁ + E(σ₀)σ₃ + F(σ₀), with
/// D = D₁σ₀ + Δ₁, E = D₃σ₀ + Δ₃ and F = F₀ + F₁σ₀ + F₂σ₀².
struct QuadHopfHamiltonian {
  double A = 0, B = 0, C = 0;
  double D1 = 0, Delta1 = 0, D3 = 0, Delta3 = 0;
  double F0 = 0, F1 = 0, F2 = 0;

  double D(double s0) const { return D1 * s0 + Delta1; }
  double E(double s0) const { return D3 * s0 + Delta3; }
  double F(double s0) const { return F0 + (F1 + F2 * s0) * s0; }
  double value(double s0, double s1, double s3) const {
    return A * s1 * s1 + B * s1 * s3 + C * s3 * s3 + D(s0) * s1 + E(s0) * s3 + F(s0);
  }
  double T1(double s0) const;
  double T3(double s0) const;

  PolyHopfHamiltonian to_poly() const;
  void validate() const;
};

enum class ConicClass { Ellipse, Hyperbola, ParabolicDegenerate };
std::string_view to_string(ConicClass c) noexcept;

/// Sign of B² − 4AC; exact zero is parabolic-degenerate.
ConicClass conic_class(const QuadHopfHamiltonian& q);

struct Rotation {
  double alpha = 1, beta = 0;
  double angle = 0;

  /// σ (original frame) from σ̃ (rotated frame).
  HopfState to_original(const HopfState& tilde) const;
  HopfState to_rotated(const HopfState& orig) const;
};

struct RotatedQuad {
  QuadHopfHamiltonian model;
  Rotation rotation;
};

RotatedQuad rotate_to_diagonal(const QuadHopfHamiltonian& q);

enum class CpiBranch { Generic, SymmetricSigma1, SymmetricSigma3, SymmetricBoth };

struct CpiRoot {
  double mu = 0;
  double sigma1 = 0;
  double sigma3 = 0;
  double residual = 0;
};

struct CpiRootSet {
  std::vector<CpiRoot> roots;
  CpiBranch branch = CpiBranch::Generic;
  /// The middle pair sits within rounding of a double root.
  bool near_double = false;
};

/// Real roots of 4(A−μ)²(C−μ)² − (A−μ)²T₃ − (C−μ)²T₁, ascending in μ.
/// Requires B = 0 and A ≠ C. When D(σ₀) or E(σ₀) vanishes the symmetric
/// branch solutions μ = A or μ = C are returned instead and flagged.
CpiRootSet cpi_quartic_roots(const QuadHopfHamiltonian& q, double sigma0);

/// Coefficients c₀..c₄ of the CPI quartic in μ, increasing degree.
std::array<double, 5> cpi_quartic_coefficients(const QuadHopfHamiltonian& q, double sigma0);

struct DiscriminantValue {
  double value = 0;
  /// T₁ = 0 or T₃ = 0: Q vanishes without a root-count change.
  bool artifact = false;
};

DiscriminantValue discriminant_q(const QuadHopfHamiltonian& q, double sigma0);

double f1(const QuadHopfHamiltonian& q, double sigma0);
double f2(const QuadHopfHamiltonian& q, double sigma0);

struct F1Roots {
  std::vector<double> roots;
  std::vector<double> residuals;
  /// Δ₁ = Δ₃ = 0: f₁ does not depend on σ₀.
  bool constant_in_sigma0 = false;
  /// constant_in_sigma0 and f₁ ≡ 0.
  bool all_sigma0_degenerate = false;
  /// Two roots closer than 1e−10 were merged.
  bool possibly_tangent_root = false;
};

/// Real roots of f₁ on (0, sigma0_max], ascending.
F1Roots f1_roots(const QuadHopfHamiltonian& q, double sigma0_max, unsigned threads = 1);

enum class CpiiBranch { Generic, Single, None };

struct CpiiValues {
  std::vector<double> sigma0;
  CpiiBranch branch = CpiiBranch::None;
  /// Real roots discarded because σ₀ ≤ 0.
  std::vector<double> rejected_negative;
  /// Generic branch with a negative radicand.
  bool complex_roots = false;
  /// Single branch: +1 or −1 for the sign used in front of the square root.
  int single_pairing = 0;
};

/// Zeros of f₂ = −4 + T₁/A² + T₃/C², σ₀ > 0, ascending. Requires B = 0.
CpiiValues cpii_values(const QuadHopfHamiltonian& q);

struct CpiiCenter {
  double sigma1 = 0, sigma3 = 0;
  bool exists = false;
  bool stable = false;
  /// √(σ₀² − σ₁F² − σ₃F²) when the center lies inside the circle.
  double sigma2 = 0;
};

/// Center of the conic family and the resulting F-pair. Works for any B.
CpiiCenter cpii_center_and_stability(const QuadHopfHamiltonian& q, double sigma0);

}  // namespace hopfbif
