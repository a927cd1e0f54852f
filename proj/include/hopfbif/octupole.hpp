#pragma once

#include "hopfbif/hopf_core.hpp"
#include "hopfbif/quad_analysis.hpp"

namespace hopfbif {

/// Normal-form coefficients of the octupole, fourth-order-in-eccentricity
/// secular model, together with the secular frequencies a and b.
struct OctupoleCoefficients {
  double Atil = 0, Btil = 0, Ctil = 0;
  double D1til = 0, Delta1til = 0, D3til = 0, Delta3til = 0;
  double a = 0, b = 0;
};

/// Throws SecularFrequencyDegenerate when a = 0 or a + b = 0.
OctupoleCoefficients octupole_coefficients(const SystemParams& params);

/// Structural copy into the generic quadratic model; additive constants dropped.
QuadHopfHamiltonian octupole_to_quad(const OctupoleCoefficients& oc);

}  // namespace hopfbif
