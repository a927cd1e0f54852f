#pragma once

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "hopfbif/geometry_scan.hpp"
#include "hopfbif/hopf_core.hpp"
#include "hopfbif/polynomial.hpp"

namespace hopfbif {

struct IntegratorStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  double min_step = 0;
};

template <std::size_t N>
using OdeRhs = std::function<std::array<double, N>(double, const std::array<double, N>&)>;

template <std::size_t N>
using OdeObserver = std::function<bool(double, const std::array<double, N>&, const std::array<double, N>&)>;

/// Dormand–Prince 5(4) with a standard step-size controller, instantiated for
/// N = 2, 3, 4. The error of each accepted step satisfies
/// ‖err_i / (atol + rtol·|y_i|)‖∞ ≤ 1. The observer is called after every
/// accepted step with (t, y, ẏ); returning false stops the integration.
template <std::size_t N>
IntegratorStats dopri5(const OdeRhs<N>& f, std::array<double, N> y, double t0, double t1, double rtol, double atol,
                       const OdeObserver<N>& observer, double h0 = 0);

struct ReducedTrajectory {
  std::vector<double> t;
  std::vector<HopfState> states;
  std::vector<double> energy;
  /// max |σ·σ − σ₀²| / σ₀²
  double max_casimir_drift = 0;
  /// max |Z − Z₀| / max(|E_L|, |E_R|, |Z₀|)
  double max_energy_drift = 0;
  IntegratorStats stats;
};

struct ReducedOptions {
  bool renormalize = false;
  /// Store every n-th accepted step (0 stores only the endpoints).
  std::size_t store_every = 1;
};

ReducedTrajectory integrate_reduced(const PolyHopfHamiltonian& z, const HopfState& h0, double T, double tol,
                                    const ReducedOptions& opt = {});

struct SectionPoint {
  double X2 = 0, Y2 = 0;
  /// X₃ at the crossing; negative values are mapped into the X₃ > 0 chart by
  /// (X₂, Y₂) → (−X₂, −Y₂), which leaves every σ unchanged.
  double X3 = 0;
  double t = 0;
  double energy_residual = 0;
  double chart_X2() const { return X3 < 0 ? -X2 : X2; }
  double chart_Y2() const { return X3 < 0 ? -Y2 : Y2; }
};

struct SectionResult {
  std::vector<SectionPoint> points;
  /// max |H − H₀| / max(|H₀|, floor) over all accepted steps.
  double max_energy_drift = 0;
  IntegratorStats stats;
};

struct SectionOptions {
  std::size_t max_crossings = 0;
  std::optional<SystemParams> params;
};

/// Integrates Hamilton's equations Ẋ = ∂H/∂Y, Ẏ = −∂H/∂X and records the
/// Y₃ = 0, Ẏ₃ ≥ 0 crossings. Throws LeftDomain when params are supplied and the
/// mutual-inclination cosine leaves [−1, 1].
SectionResult poincare_section(const PoincarePolyHamiltonian& h, const PoincareState& x0, double T, double tol,
                               const SectionOptions& opt = {});

/// Initial conditions on H = energy with Y₃ = 0 and Ẏ₃ ≥ 0: an m×m grid over
/// X₂² + Y₂² < radius², X₃ ∈ [−radius, radius] found by sign scan and bisection,
/// thinned evenly to at most `count` points. Empty when the level misses the grid.
std::vector<PoincareState> section_start_points(const PoincarePolyHamiltonian& h, double energy, double radius,
                                                std::size_t count, std::size_t m = 64);

std::array<double, 4> hamilton_rhs(const PoincarePolyHamiltonian& h, const std::array<double, 4>& x);

struct FloquetResult {
  std::complex<double> lambda1, lambda2;
  Stability stability = Stability::Marginal;
  bool agrees = false;
};

/// Tangent-plane eigenvalues from a central-difference Jacobian of the flow,
/// compared against classify_cpi's verdict.
FloquetResult floquet_confirm(const PolyHopfHamiltonian& z, const CriticalPoint& cp);

}  // namespace hopfbif
