#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hopfbif/flow_sim.hpp"
#include "hopfbif/geometry_scan.hpp"
#include "hopfbif/hopf_core.hpp"
#include "hopfbif/octupole.hpp"
#include "hopfbif/oracle.hpp"
#include "hopfbif/polynomial.hpp"
#include "hopfbif/portrait.hpp"
#include "hopfbif/quad_analysis.hpp"

namespace hopfbif {

enum class ModelKind { Params, Quad, Poly, Poincare };
std::string_view to_string(ModelKind k) noexcept;

/// A parsed input file. `poly` is always filled for Quad and Poly models.
struct Model {
  ModelKind kind = ModelKind::Quad;
  SystemParams params;
  QuadHopfHamiltonian quad;
  PolyHopfHamiltonian poly;
  PoincarePolyHamiltonian poincare;
  /// Optional "sigma0_max" (or "AMD") entry of a model file.
  std::optional<double> sigma0_max;
};

/// Throws Schema with "line L, column C" diagnostics on malformed JSON.
Model parse_model(std::string_view json_text);
SystemParams parse_system_params(std::string_view json_text);
std::string read_text_file(const std::string& path);

std::string system_params_json(const SystemParams& p);
std::string quad_model_json(const QuadHopfHamiltonian& q);
std::string octupole_json(const OctupoleCoefficients& oc);
std::string poly_model_json(const PolyHopfHamiltonian& z);

/// Columns: sigma0,label,kind,tangency,stability,sigma1,sigma2,sigma3,energy
std::string census_csv(const std::vector<Census>& census);
std::string census_json(const std::vector<Census>& census);
std::string events_json(const BifurcationSequence& seq);
std::string events_csv(const BifurcationSequence& seq);

std::string portrait_csv(const Portrait& p);
std::string portrait_json(const Portrait& p);
/// Static SVG of the curves, markers and a legend of the ℰ levels.
std::string portrait_svg(const Portrait& p);

std::string section_csv(const std::vector<SectionResult>& runs);

}  // namespace hopfbif
