#include "hopfbif/report.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hopfbif/error.hpp"
#include "hopfbif/numeric.hpp"

namespace hopfbif {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string_view to_string(ModelKind k) noexcept {
  switch (k) {
    case ModelKind::Params: return "params";
    case ModelKind::Quad: return "quad";
    case ModelKind::Poly: return "poly";
    case ModelKind::Poincare: return "poincare";
  }
  return "unknown";
}

namespace {

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorKind::Schema, "malformed JSON at line " + std::to_string(line) + ", column " +
                                       std::to_string(col) + ": " + e.what());
  }
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& what) {
  if (!j.is_object()) throw Error(ErrorKind::Schema, what + " must be a JSON object");
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) throw Error(ErrorKind::Schema, what + ": unknown key \"" + k + "\"");
  }
}

double num(const json& j, const std::string& key, const std::string& what, std::optional<double> fallback = {}) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    throw Error(ErrorKind::Schema, what + ": missing key \"" + key + "\"");
  }
  const auto& v = j.at(key);
  if (!v.is_number()) throw Error(ErrorKind::Schema, what + ": \"" + key + "\" must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw Error(ErrorKind::Schema, what + ": \"" + key + "\" must be finite");
  return x;
}

int exponent(const json& j, const std::string& key, const std::string& what) {
  if (!j.contains(key)) return 0;
  const auto& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<long long>() > 64) {
    throw Error(ErrorKind::Schema, what + ": \"" + key + "\" must be an integer in [0, 64]");
  }
  return v.get<int>();
}

SystemParams params_from(const json& j) {
  check_keys(j, {"m0", "m2", "m3", "a2", "a3", "G", "AMD"}, "system parameters");
  SystemParams p;
  p.m0 = num(j, "m0", "system parameters");
  p.m2 = num(j, "m2", "system parameters");
  p.m3 = num(j, "m3", "system parameters");
  p.a2 = num(j, "a2", "system parameters");
  p.a3 = num(j, "a3", "system parameters");
  p.G = num(j, "G", "system parameters");
  p.AMD = num(j, "AMD", "system parameters");
  try {
    p.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::Schema, e.what());
  }
  return p;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

ordered_json number(double x) {
  // NaN and infinities are not JSON; they are emitted as strings.
  if (!std::isfinite(x)) return format_double(x);
  return x;
}

ordered_json point_json(const CriticalPoint& cp) {
  ordered_json j;
  j["label"] = cp.label;
  j["kind"] = std::string(to_string(cp.kind));
  j["tangency"] = std::string(to_string(cp.tangency));
  j["stability"] = std::string(to_string(cp.stability));
  j["sigma1"] = number(cp.location.sigma1);
  j["sigma2"] = number(cp.location.sigma2);
  j["sigma3"] = number(cp.location.sigma3);
  j["energy"] = number(cp.energy);
  return j;
}

std::string csv_row(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  return out + "\n";
}

std::string join(const std::vector<std::string>& v, char sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += v[i];
  }
  return out;
}

}  // namespace

SystemParams parse_system_params(std::string_view text) { return params_from(parse_json(text)); }

Model parse_model(std::string_view text) {
  const json j = parse_json(text);
  if (!j.is_object()) throw Error(ErrorKind::Schema, "model file must contain a JSON object");
  Model m;
  if (j.contains("m0")) {
    m.kind = ModelKind::Params;
    m.params = params_from(j);
    m.sigma0_max = m.params.AMD;
    return m;
  }
  if (j.contains("terms")) {
    check_keys(j, {"terms", "sigma0_max", "AMD"}, "polynomial model");
    const auto& terms = j.at("terms");
    if (!terms.is_array()) throw Error(ErrorKind::Schema, "\"terms\" must be an array");
    bool poincare = false, hopf = false;
    for (const auto& t : terms) {
      if (!t.is_object()) throw Error(ErrorKind::Schema, "each term must be an object");
      for (const char* k : {"e2", "e2y", "e3", "e3y"}) poincare |= t.contains(k);
      for (const char* k : {"p0", "p1", "p3"}) hopf |= t.contains(k);
    }
    if (poincare && hopf) throw Error(ErrorKind::Schema, "terms mix Hopf (p*) and Poincaré (e*) exponents");
    try {
      if (poincare) {
        std::vector<PoincarePolyHamiltonian::Term> ts;
        for (const auto& t : terms) {
          check_keys(t, {"e2", "e2y", "e3", "e3y", "coef"}, "Poincaré term");
          ts.push_back({exponent(t, "e2", "Poincaré term"), exponent(t, "e2y", "Poincaré term"),
                        exponent(t, "e3", "Poincaré term"), exponent(t, "e3y", "Poincaré term"),
                        num(t, "coef", "Poincaré term")});
        }
        m.kind = ModelKind::Poincare;
        m.poincare = PoincarePolyHamiltonian(std::span<const PoincarePolyHamiltonian::Term>(ts));
      } else {
        std::vector<PolyHopfHamiltonian::Term> ts;
        for (const auto& t : terms) {
          check_keys(t, {"p0", "p1", "p3", "coef"}, "Hopf term");
          ts.push_back({exponent(t, "p0", "Hopf term"), exponent(t, "p1", "Hopf term"), exponent(t, "p3", "Hopf term"),
                        num(t, "coef", "Hopf term")});
        }
        m.kind = ModelKind::Poly;
        m.poly = PolyHopfHamiltonian(std::span<const PolyHopfHamiltonian::Term>(ts));
      }
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Schema) throw;
      throw Error(ErrorKind::Schema, e.what());
    }
  } else {
    check_keys(j, {"A", "B", "C", "D1", "Delta1", "D3", "Delta3", "F0", "F1", "F2", "sigma0_max", "AMD"},
               "quadratic model");
    auto& q = m.quad;
    q.A = num(j, "A", "quadratic model");
    q.B = num(j, "B", "quadratic model", 0.0);
    q.C = num(j, "C", "quadratic model");
    q.D1 = num(j, "D1", "quadratic model");
    q.Delta1 = num(j, "Delta1", "quadratic model");
    q.D3 = num(j, "D3", "quadratic model");
    q.Delta3 = num(j, "Delta3", "quadratic model");
    q.F0 = num(j, "F0", "quadratic model", 0.0);
    q.F1 = num(j, "F1", "quadratic model", 0.0);
    q.F2 = num(j, "F2", "quadratic model", 0.0);
    m.kind = ModelKind::Quad;
    m.poly = q.to_poly();
  }
  if (j.contains("sigma0_max")) m.sigma0_max = num(j, "sigma0_max", "model");
  else if (j.contains("AMD")) m.sigma0_max = num(j, "AMD", "model");
  if (m.sigma0_max && !(*m.sigma0_max > 0)) throw Error(ErrorKind::Schema, "sigma0_max must be positive");
  return m;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string system_params_json(const SystemParams& p) {
  ordered_json j;
  j["m0"] = p.m0;
  j["m2"] = p.m2;
  j["m3"] = p.m3;
  j["a2"] = p.a2;
  j["a3"] = p.a3;
  j["G"] = p.G;
  j["AMD"] = p.AMD;
  return dump(j);
}

std::string quad_model_json(const QuadHopfHamiltonian& q) {
  ordered_json j;
  j["A"] = q.A;
  j["B"] = q.B;
  j["C"] = q.C;
  j["D1"] = q.D1;
  j["Delta1"] = q.Delta1;
  j["D3"] = q.D3;
  j["Delta3"] = q.Delta3;
  j["F0"] = q.F0;
  j["F1"] = q.F1;
  j["F2"] = q.F2;
  return dump(j);
}

std::string octupole_json(const OctupoleCoefficients& oc) {
  ordered_json j;
  j["Atil"] = oc.Atil;
  j["Btil"] = oc.Btil;
  j["Ctil"] = oc.Ctil;
  j["D1til"] = oc.D1til;
  j["Delta1til"] = oc.Delta1til;
  j["D3til"] = oc.D3til;
  j["Delta3til"] = oc.Delta3til;
  j["a"] = oc.a;
  j["b"] = oc.b;
  return dump(j);
}

std::string poly_model_json(const PolyHopfHamiltonian& z) {
  ordered_json terms = ordered_json::array();
  for (const auto& t : z.terms()) {
    ordered_json o;
    o["p0"] = t.p0;
    o["p1"] = t.p1;
    o["p3"] = t.p3;
    o["coef"] = t.coef;
    terms.push_back(o);
  }
  ordered_json j;
  j["terms"] = terms;
  return dump(j);
}

std::string census_csv(const std::vector<Census>& census) {
  std::string out = "sigma0,label,kind,tangency,stability,sigma1,sigma2,sigma3,energy\n";
  for (const auto& c : census) {
    for (const auto* set : {&c.cpi, &c.cpii}) {
      for (const auto& cp : *set) {
        out += csv_row({format_double(c.sigma0), cp.label, std::string(to_string(cp.kind)),
                        std::string(to_string(cp.tangency)), std::string(to_string(cp.stability)),
                        format_double(cp.location.sigma1), format_double(cp.location.sigma2),
                        format_double(cp.location.sigma3), format_double(cp.energy)});
      }
    }
  }
  return out;
}

std::string census_json(const std::vector<Census>& census) {
  ordered_json arr = ordered_json::array();
  for (const auto& c : census) {
    ordered_json o;
    o["sigma0"] = c.sigma0;
    ordered_json pts = ordered_json::array();
    for (const auto* set : {&c.cpi, &c.cpii}) {
      for (const auto& cp : *set) pts.push_back(point_json(cp));
    }
    o["points"] = pts;
    arr.push_back(o);
  }
  return dump(arr);
}

std::string events_json(const BifurcationSequence& seq) {
  ordered_json arr = ordered_json::array();
  for (const auto& e : seq.events) {
    ordered_json o;
    o["type"] = std::string(to_string(e.type));
    o["sigma0_high"] = e.sigma0_high;
    o["sigma0_low"] = e.sigma0_low;
    o["born"] = e.born;
    o["died"] = e.died;
    o["flipped"] = e.flipped;
    o["energy"] = number(e.energy);
    arr.push_back(o);
  }
  ordered_json j;
  j["events"] = arr;
  return dump(j);
}

std::string events_csv(const BifurcationSequence& seq) {
  std::string out = "type,sigma0_high,sigma0_low,born,died,flipped,energy\n";
  for (const auto& e : seq.events) {
    out += csv_row({std::string(to_string(e.type)), format_double(e.sigma0_high), format_double(e.sigma0_low),
                    join(e.born, ';'), join(e.died, ';'), join(e.flipped, ';'), format_double(e.energy)});
  }
  return out;
}

std::string portrait_csv(const Portrait& p) {
  std::string out = "curve,level,closed,point_curve,X2,Y2\n";
  for (std::size_t k = 0; k < p.curves.size(); ++k) {
    const auto& c = p.curves[k];
    for (const auto& pt : c.points) {
      out += csv_row({std::to_string(k), format_double(c.level), c.closed ? "1" : "0", c.point_curve ? "1" : "0",
                      format_double(pt[0]), format_double(pt[1])});
    }
  }
  return out;
}

std::string portrait_json(const Portrait& p) {
  ordered_json j;
  j["sigma0"] = p.sigma0;
  j["E_L"] = p.E_L;
  j["E_R"] = p.E_R;
  j["levels"] = p.levels;
  ordered_json curves = ordered_json::array();
  for (const auto& c : p.curves) {
    ordered_json o;
    o["level"] = c.level;
    o["closed"] = c.closed;
    o["point_curve"] = c.point_curve;
    ordered_json pts = ordered_json::array();
    for (const auto& pt : c.points) pts.push_back({pt[0], pt[1]});
    o["points"] = pts;
    curves.push_back(o);
  }
  j["curves"] = curves;
  ordered_json markers = ordered_json::array();
  for (const auto& m : p.markers) {
    ordered_json o;
    o["label"] = m.label;
    o["kind"] = std::string(to_string(m.kind));
    o["stability"] = std::string(to_string(m.stability));
    o["X2"] = m.X2;
    o["Y2"] = m.Y2;
    o["energy"] = m.energy;
    o["on_rim"] = m.on_rim;
    markers.push_back(o);
  }
  j["markers"] = markers;
  return dump(j);
}

std::string portrait_svg(const Portrait& p) {
  const double size = 600, pad = 20, legend_w = 220;
  const double R = std::sqrt(2 * p.sigma0);
  const double s = (size - 2 * pad) / (2 * R);
  auto X = [&](double x) { return format_double(std::round((pad + (x + R) * s) * 100) / 100); };
  auto Y = [&](double y) { return format_double(std::round((pad + (R - y) * s) * 100) / 100); };
  auto color = [&](std::size_t k, std::size_t n) {
    // Blue (low) to red (high).
    const double t = n > 1 ? static_cast<double>(k) / static_cast<double>(n - 1) : 0.0;
    const int r = static_cast<int>(std::lround(40 + 200 * t)), b = static_cast<int>(std::lround(240 - 200 * t));
    return "rgb(" + std::to_string(r) + ",60," + std::to_string(b) + ")";
  };
  std::vector<double> levels = p.levels;
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size + legend_w << "\" height=\"" << size
    << "\" viewBox=\"0 0 " << size + legend_w << ' ' << size << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<circle cx=\"" << X(0) << "\" cy=\"" << Y(0) << "\" r=\"" << format_double(R * s)
    << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  auto level_index = [&](double e) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < levels.size(); ++k) {
      if (std::fabs(levels[k] - e) < std::fabs(levels[best] - e)) best = k;
    }
    return best;
  };
  for (const auto& c : p.curves) {
    const std::string col = color(level_index(c.level), levels.size());
    if (c.points.size() == 1) {
      o << "<circle cx=\"" << X(c.points[0][0]) << "\" cy=\"" << Y(c.points[0][1]) << "\" r=\"2\" fill=\"" << col
        << "\"/>\n";
      continue;
    }
    o << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1\" points=\"";
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      if (i) o << ' ';
      o << X(c.points[i][0]) << ',' << Y(c.points[i][1]);
    }
    o << "\"/>\n";
  }
  for (const auto& m : p.markers) {
    const char* fill = m.stability == Stability::Stable     ? "green"
                       : m.stability == Stability::Unstable ? "red"
                                                            : "gray";
    const double x = m.on_rim ? R : m.X2, y = m.on_rim ? 0.0 : m.Y2;
    o << "<circle cx=\"" << X(x) << "\" cy=\"" << Y(y) << "\" r=\"4\" fill=\"" << fill << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << X(x) << "\" y=\"" << Y(y) << "\" dx=\"6\" dy=\"-6\" font-size=\"12\" font-family=\"sans-serif\">"
      << m.label << "</text>\n";
  }
  o << "<text x=\"" << size << "\" y=\"" << pad + 4 << "\" font-size=\"13\" font-family=\"sans-serif\">σ₀ = "
    << format_double(p.sigma0) << "</text>\n";
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const double y = pad + 24 + 16 * static_cast<double>(k);
    o << "<line x1=\"" << size << "\" y1=\"" << y - 4 << "\" x2=\"" << size + 20 << "\" y2=\"" << y - 4
      << "\" stroke=\"" << color(k, levels.size()) << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << size + 26 << "\" y=\"" << y << "\" font-size=\"11\" font-family=\"sans-serif\">ℰ = "
      << format_double(levels[k]) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string section_csv(const std::vector<SectionResult>& runs) {
  std::string out = "run,t,X2,Y2,X3,chart_X2,chart_Y2,energy_residual\n";
  for (std::size_t r = 0; r < runs.size(); ++r) {
    for (const auto& p : runs[r].points) {
      out += csv_row({std::to_string(r), format_double(p.t), format_double(p.X2), format_double(p.Y2),
                      format_double(p.X3), format_double(p.chart_X2()), format_double(p.chart_Y2()),
                      format_double(p.energy_residual)});
    }
  }
  return out;
}

}  // namespace hopfbif
