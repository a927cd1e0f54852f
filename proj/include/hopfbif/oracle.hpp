#pragma once

#include <vector>

#include "hopfbif/hopf_core.hpp"
#include "hopfbif/polynomial.hpp"
#include "hopfbif/quad_analysis.hpp"

namespace hopfbif {

struct TangencyApprox {
  double theta = 0;
  double sigma1 = 0, sigma3 = 0;
  double energy = 0;
  bool is_max = false;
};

/// Local extrema of Z(σ₀cosθ, σ₀sinθ) on n equally spaced meridian samples,
/// with parabolic sub-sample refinement. Requires n ≥ 64.
std::vector<TangencyApprox> grid_tangency_scan(const PolyHopfHamiltonian& z, double sigma0, std::size_t n);

enum class DiskCriticalKind { Minimum, Maximum, Saddle };
std::string_view to_string(DiskCriticalKind k) noexcept;

struct DiskCritical {
  DiskCriticalKind kind = DiskCriticalKind::Saddle;
  double X2 = 0, Y2 = 0;
  double energy = 0;
  HopfState location;
};

struct DiskScan {
  std::vector<DiskCritical> points;
  /// Z is constant on the sphere to rounding.
  bool degenerate = false;
  std::size_t extrema = 0;
  std::size_t saddles = 0;
};

/// Discrete critical points of Z on S_σ₀ from n×n grids over two hemisphere
/// charts (south pole and north pole at the disk centre). X₂, Y₂ are reported
/// in section-plane coordinates; the north pole maps to (√(2σ₀), 0). Requires n ≥ 128.
DiskScan disk_critical_scan(const PolyHopfHamiltonian& z, double sigma0, std::size_t n, unsigned threads = 1);

struct QuarticCount {
  std::size_t count = 0;
  /// Grid-resolution root locations.
  std::vector<double> roots;
  double lo = 0, hi = 0;
};

/// Sign changes of 4(A−μ)²(C−μ)² − (A−μ)²T₃ − (C−μ)²T₁ on an n-point μ grid
/// spanning [min(A,C) − 10·span, max(A,C) + 10·span]. Requires B = 0, n ≥ 1000.
QuarticCount quartic_bruteforce(const QuadHopfHamiltonian& q, double sigma0, std::size_t n);

}  // namespace hopfbif
