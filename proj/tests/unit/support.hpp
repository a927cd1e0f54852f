#pragma once

#include <random>
#include <string>

#include "hopfbif/report.hpp"

namespace hopfbif::testing {

inline std::string fixture(const std::string& name) { return std::string(HOPFBIF_FIXTURES_DIR) + "/" + name; }

inline Model load_fixture(const std::string& name) { return parse_model(read_text_file(fixture(name))); }

/// The octupole-model fixture after diagonalization.
inline QuadHopfHamiltonian octupole_quad() { return rotate_to_diagonal(load_fixture("octupole.json").quad).model; }

inline HopfState random_on_sphere(std::mt19937_64& rng, double s0) {
  std::normal_distribution<double> n(0.0, 1.0);
  double x = n(rng), y = n(rng), z = n(rng);
  const double r = std::sqrt(x * x + y * y + z * z);
  return {s0, s0 * x / r, s0 * y / r, s0 * z / r};
}

}  // namespace hopfbif::testing
