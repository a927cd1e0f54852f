#pragma once

#include <array>
#include <string>
#include <vector>

#include "hopfbif/geometry_scan.hpp"
#include "hopfbif/polynomial.hpp"

namespace hopfbif {

/// Z on the Y₃ = 0 section: X₃ = √(2σ₀ − X₂² − Y₂²).
double section_energy(const PolyHopfHamiltonian& z, double sigma0, double X2, double Y2);

struct PortraitCurve {
  std::vector<std::array<double, 2>> points;
  double level = 0;
  double sigma0 = 0;
  bool closed = false;
  /// Degenerate curve at an extremal level (a single point, or the rim for the north pole).
  bool point_curve = false;
};

struct PortraitMarker {
  std::string label;
  CpKind kind = CpKind::CPI;
  Stability stability = Stability::Marginal;
  double X2 = 0, Y2 = 0;
  double energy = 0;
  /// The point is the north pole, which maps to the whole rim.
  bool on_rim = false;
};

struct Portrait {
  double sigma0 = 0;
  double E_L = 0, E_R = 0;
  std::vector<double> levels;
  std::vector<PortraitCurve> curves;
  std::vector<PortraitMarker> markers;
  std::size_t grid = 0;
};

struct PortraitOptions {
  std::size_t grid = 1024;
  unsigned threads = 0;
  bool markers = true;
};

/// Levels at equal area fractions of the disk (quantiles of the section energy).
std::vector<double> auto_levels(const PolyHopfHamiltonian& z, double sigma0, std::size_t count, std::size_t grid = 256);

/// Marching-squares level curves of the section energy on the disk
/// X₂² + Y₂² ≤ 2σ₀. Throws EmptyLevel for levels outside [E_L, E_R].
Portrait contour_portrait(const PolyHopfHamiltonian& z, double sigma0, const std::vector<double>& levels,
                          const PortraitOptions& opt = {});

/// Section-plane image of a Hopf point; poles map to the origin (south) or the rim (north).
PortraitMarker marker_for(const CriticalPoint& cp);

}  // namespace hopfbif
