#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hopfbif/hopf_core.hpp"
#include "hopfbif/polynomial.hpp"

namespace hopfbif {

enum class CpKind { CPI, CPII };
enum class Tangency { Inner, Outer, Degenerate, None };
enum class Stability { Stable, Unstable, Marginal };

std::string_view to_string(CpKind k) noexcept;
std::string_view to_string(Tangency t) noexcept;
std::string_view to_string(Stability s) noexcept;

struct CriticalPoint {
  HopfState location;
  CpKind kind = CpKind::CPI;
  Tangency tangency = Tangency::None;
  Stability stability = Stability::Marginal;
  double energy = 0;
  double sigma0 = 0;
  /// Meridian angle atan2(σ₃, σ₁); for CPII the angle of the center.
  double theta = 0;
  /// Squared eigenvalue of the tangent-plane linearization (λ² < 0: elliptic).
  double lambda2 = 0;
  /// Spectral scale used for the marginal test.
  double spectral_scale = 0;
  std::string label;
};

struct CpiScanOptions {
  std::size_t samples = 4096;
  std::size_t max_samples = 65536;
};

/// Stationary points of Z on the meridian σ₁ = σ₀cosθ, σ₃ = σ₀sinθ, classified.
/// Throws DegenerateConstant when Z does not depend on σ₁, σ₃.
std::vector<CriticalPoint> find_cpi(const PolyHopfHamiltonian& z, double sigma0, const CpiScanOptions& opt = {});

/// Linearizes the reduced flow on the sphere's tangent plane at cp.location and
/// fills tangency, stability, lambda2 and spectral_scale.
void classify_cpi(const PolyHopfHamiltonian& z, CriticalPoint& cp);

/// Tangent-plane eigenvalue data at an arbitrary equilibrium.
struct TangentSpectrum {
  double lambda2 = 0;
  double scale = 0;
  double trace = 0;
};
TangentSpectrum tangent_spectrum(const PolyHopfHamiltonian& z, const HopfState& h);

/// Outer/inner from the level-set geometry: sign of μ·d²Z/dθ², where
/// ∇Z = 2μσ at the tangency. Independent of the eigenvalue route.
Tangency geometric_tangency(const PolyHopfHamiltonian& z, const CriticalPoint& cp);

/// Centers ∂Z/∂σ₁ = ∂Z/∂σ₃ = 0 strictly inside the circle, as mirror pairs.
std::vector<CriticalPoint> find_cpii(const PolyHopfHamiltonian& z, double sigma0, std::size_t seeds_per_axis = 12);

struct Census {
  double sigma0 = 0;
  std::vector<CriticalPoint> cpi;
  std::vector<CriticalPoint> cpii;
};

Census critical_census(const PolyHopfHamiltonian& z, double sigma0, const CpiScanOptions& opt = {});

struct EnergyLimits {
  double E_L = 0, E_R = 0;
  /// Location of the minimum and maximum.
  HopfState at_min, at_max;
};

/// Global extrema of Z over the sphere. These are attained at CPI points or at
/// CPII centers inside the disk.
EnergyLimits energy_limits(const PolyHopfHamiltonian& z, double sigma0);

struct Sigma0Limits {
  double sigma0_min = 0;
  double sigma0_max = 0;
};

/// σ₀ range on (0, sigma0_max] where E_L(σ₀) ≤ energy ≤ E_R(σ₀). Throws EmptyDomain.
Sigma0Limits sigma0_limits(const PolyHopfHamiltonian& z, double energy, double sigma0_max, std::size_t grid = 512);

struct DomainLimits {
  double E_min = 0;
  double E_23 = 0;
  double sigma0_AMD = 0;
  std::vector<double> sigma0;
  std::vector<double> E_L;
  std::vector<double> E_R;
};

/// Samples the permissible (ℰ, σ₀) domain on (0, sigma0_amd].
DomainLimits domain_limits(const PolyHopfHamiltonian& z, double sigma0_amd, std::size_t grid = 256, unsigned threads = 1);

enum class EventType { SaddleNode, InverseSaddleNode, Pitchfork, InversePitchfork, Unresolved };
std::string_view to_string(EventType t) noexcept;

struct BifurcationEvent {
  EventType type = EventType::Unresolved;
  /// σ₀ bracket, high > low. Census before the event is at `high`.
  double sigma0_high = 0, sigma0_low = 0;
  std::vector<std::string> born;
  std::vector<std::string> died;
  /// Labels whose stability changed, with "label:old->new".
  std::vector<std::string> flipped;
  double energy = 0;
};

struct BifurcationSequence {
  std::vector<BifurcationEvent> events;
  /// Census per swept σ₀, in descending σ₀ order, with labels assigned.
  std::vector<Census> census;
};

struct SequenceOptions {
  std::size_t steps = 400;
  unsigned threads = 0;
  CpiScanOptions cpi;
};

/// Sweeps σ₀ from hi down to lo, detecting census changes and bracketing each
/// one by bisection to `resolution`.
BifurcationSequence bifurcation_sequence(const PolyHopfHamiltonian& z, double sigma0_lo, double sigma0_hi,
                                         double resolution, const SequenceOptions& opt = {});

/// Census at sigma0 with labels continued down from sigma0_top, where the
/// extremal CPI are named A and B.
Census labeled_census(const PolyHopfHamiltonian& z, double sigma0, double sigma0_top, const SequenceOptions& opt = {});

/// Maximum of |σ̇| at the point, relative to σ₀ times the term-wise bound
/// Σ|c|·(e₁+e₃)·σ₀^(deg−1) on |∇Z| over the sphere.
double equilibrium_residual(const PolyHopfHamiltonian& z, const HopfState& h);

}  // namespace hopfbif
