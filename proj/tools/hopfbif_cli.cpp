#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hopfbif/error.hpp"
#include "hopfbif/numeric.hpp"
#include "hopfbif/report.hpp"

namespace {

using namespace hopfbif;
using ojson = nlohmann::ordered_json;

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::Schema: return 2;
    case ErrorKind::SecularFrequencyDegenerate: return 3;
    case ErrorKind::IsotropicDegenerate: return 4;
    case ErrorKind::InfeasibleAmd: return 5;
    case ErrorKind::EmptyDomain: return 6;
    default: return kExitFailure;
  }
}

struct Globals {
  double tol = 1e-12;
  unsigned threads = 0;
  std::string out;
  std::string format;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ojson num(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

std::string csv_row(const std::vector<std::string>& cells) {
  std::string s;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) s += ',';
    s += cells[i];
  }
  return s + '\n';
}

void flatten(const ojson& j, const std::string& prefix, std::string& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), out);
  } else if (j.is_number_float()) {
    out += csv_row({prefix, format_double(j.get<double>())});
  } else if (j.is_string()) {
    out += csv_row({prefix, j.get<std::string>()});
  } else {
    out += csv_row({prefix, j.dump()});
  }
}

std::string json_text(const ojson& j) { return j.dump(2) + "\n"; }

std::string json_or_csv(const ojson& j, const std::string& format) {
  if (format == "json") return json_text(j);
  std::string out = "key,value\n";
  flatten(j, "", out);
  return out;
}

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + g.out);
  f << text;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
  f << text;
}

std::string resolve_format(const Globals& g, const std::string& fallback, std::initializer_list<const char*> allowed,
                           const char* cmd) {
  const std::string f = g.format.empty() ? fallback : g.format;
  for (const char* a : allowed) {
    if (f == a) return f;
  }
  throw UsageError(std::string(cmd) + " does not support --format " + f);
}

struct LoadedModel {
  Model model;
  /// Quadratic form in the file's own frame, when the model is quadratic.
  std::optional<QuadHopfHamiltonian> quad;
  PolyHopfHamiltonian poly;
};

LoadedModel load(const std::string& path) {
  LoadedModel lm;
  lm.model = parse_model(read_text_file(path));
  switch (lm.model.kind) {
    case ModelKind::Params:
      lm.quad = octupole_to_quad(octupole_coefficients(lm.model.params));
      lm.poly = lm.quad->to_poly();
      break;
    case ModelKind::Quad:
      lm.quad = lm.model.quad;
      lm.poly = lm.model.poly;
      break;
    case ModelKind::Poly: lm.poly = lm.model.poly; break;
    case ModelKind::Poincare:
      throw UsageError("a Hopf-variable model is required; " + path + " is a Poincaré-variable model");
  }
  return lm;
}

double upper_sigma0(const LoadedModel& lm, std::optional<double> flag) {
  if (flag) return *flag;
  if (lm.model.sigma0_max) return *lm.model.sigma0_max;
  return 1.0;
}

void check_sigma0(const LoadedModel& lm, double s0) {
  if (!(s0 > 0)) throw Error(ErrorKind::InfeasibleAmd, "sigma0 must be positive, got " + format_double(s0));
  if (lm.model.sigma0_max && s0 > *lm.model.sigma0_max) {
    throw Error(ErrorKind::InfeasibleAmd, "sigma0 = " + format_double(s0) + " exceeds the AMD bound " +
                                              format_double(*lm.model.sigma0_max));
  }
}

// coeffs ----------------------------------------------------------------------

struct CoeffsArgs {
  std::string file;
  std::string from_coeffs;
};

int cmd_coeffs(const Globals& g, const CoeffsArgs& a) {
  const auto format = resolve_format(g, "json", {"json", "csv"}, "coeffs");
  ojson j;
  QuadHopfHamiltonian q;
  if (!a.from_coeffs.empty()) {
    const auto m = parse_model(read_text_file(a.from_coeffs));
    if (m.kind != ModelKind::Quad) throw Error(ErrorKind::Schema, "--from-coeffs expects a quadratic model file");
    q = m.quad;
  } else {
    if (a.file.empty()) throw UsageError("coeffs requires a params file or --from-coeffs");
    const auto p = parse_system_params(read_text_file(a.file));
    const auto oc = octupole_coefficients(p);
    j["params"] = ojson::parse(system_params_json(p));
    j["octupole"] = ojson::parse(octupole_json(oc));
    q = octupole_to_quad(oc);
  }
  const auto r = rotate_to_diagonal(q);
  j["model"] = ojson::parse(quad_model_json(q));
  j["rotated"] = ojson::parse(quad_model_json(r.model));
  j["rotation"] = {{"angle", num(r.rotation.angle)}, {"alpha", num(r.rotation.alpha)}, {"beta", num(r.rotation.beta)}};
  j["conic"] = std::string(to_string(conic_class(q)));
  emit(g, json_or_csv(j, format));
  return 0;
}

// critical --------------------------------------------------------------------

struct CriticalArgs {
  std::string file;
  bool scan = false;
  std::optional<double> sigma0_max, sigma0_min;
  double resolution = 1e-7;
  std::size_t steps = 400;
};

struct Threshold {
  std::string kind, event;
  double sigma0 = 0, residual = 0;
  std::string method;
};

int cmd_critical(const Globals& g, const CriticalArgs& a) {
  const auto format = resolve_format(g, "csv", {"csv", "json"}, "critical");
  const auto lm = load(a.file);
  const double hi = upper_sigma0(lm, a.sigma0_max);
  std::vector<Threshold> rows;
  std::vector<std::string> notes;
  ojson meta;
  meta["sigma0_max"] = num(hi);

  if (lm.quad) {
    const auto cls = conic_class(*lm.quad);
    meta["conic"] = std::string(to_string(cls));
    const auto r = rotate_to_diagonal(*lm.quad);
    const auto cpi = f1_roots(r.model, hi, g.threads);
    for (std::size_t k = 0; k < cpi.roots.size(); ++k) {
      rows.push_back({"CPI", "", cpi.roots[k], cpi.residuals[k], "analytic"});
    }
    const auto cpii = cpii_values(r.model);
    for (double s : cpii.sigma0) {
      if (s <= hi) rows.push_back({"CPII", "", s, std::fabs(f2(r.model, s)), "analytic"});
    }
    if (cpi.constant_in_sigma0) notes.push_back("f1 does not depend on sigma0 (Delta1 = Delta3 = 0)");
    if (cpi.possibly_tangent_root) notes.push_back("two f1 roots merged; possible tangent root");
    if (cpii.complex_roots) notes.push_back("f2 has complex roots; no CPII thresholds");
    if (cls == ConicClass::Ellipse) {
      notes.push_back(
          "elliptic ordering: B^2 < 4AC, so the level conics are ellipses and the F-pair born at a pitchfork "
          "is stable");
    } else if (cls == ConicClass::Hyperbola) {
      notes.push_back("hyperbolic ordering: B^2 > 4AC, so an F-pair born at a pitchfork is unstable");
    }
  } else if (!a.scan) {
    throw UsageError("model " + a.file + " is not quadratic; use --scan for numeric thresholds");
  }

  if (a.scan) {
    const double lo = a.sigma0_min.value_or(1e-3 * hi);
    SequenceOptions opt;
    opt.steps = a.steps;
    opt.threads = g.threads;
    const auto seq = bifurcation_sequence(lm.poly, lo, hi, a.resolution, opt);
    for (const auto& e : seq.events) {
      const bool cpi = e.type == EventType::SaddleNode || e.type == EventType::InverseSaddleNode;
      rows.push_back({cpi ? "CPI" : (e.type == EventType::Unresolved ? "unresolved" : "CPII"), std::string(to_string(e.type)),
                      0.5 * (e.sigma0_high + e.sigma0_low), e.sigma0_high - e.sigma0_low, "numeric"});
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Threshold& x, const Threshold& y) { return x.sigma0 < y.sigma0; });
  for (const auto& n : notes) std::cerr << "note: " << n << "\n";

  if (format == "json") {
    ojson j = meta;
    j["thresholds"] = ojson::array();
    for (const auto& t : rows) {
      ojson r;
      r["kind"] = t.kind;
      if (!t.event.empty()) r["event"] = t.event;
      r["sigma0"] = num(t.sigma0);
      r["residual"] = num(t.residual);
      r["method"] = t.method;
      j["thresholds"].push_back(r);
    }
    j["notes"] = notes;
    emit(g, json_text(j));
  } else {
    std::string out = "kind,event,sigma0,residual,method\n";
    for (const auto& t : rows) out += csv_row({t.kind, t.event, format_double(t.sigma0), format_double(t.residual), t.method});
    emit(g, out);
  }
  return 0;
}

// tangencies ------------------------------------------------------------------

struct TangencyArgs {
  std::string file;
  std::vector<double> sigma0;
  std::optional<double> sigma0_max;
};

int cmd_tangencies(const Globals& g, const TangencyArgs& a) {
  const auto format = resolve_format(g, "csv", {"csv", "json"}, "tangencies");
  const auto lm = load(a.file);
  std::vector<Census> out;
  SequenceOptions opt;
  opt.threads = g.threads;
  for (double s0 : a.sigma0) {
    check_sigma0(lm, s0);
    out.push_back(labeled_census(lm.poly, s0, upper_sigma0(lm, a.sigma0_max), opt));
  }
  emit(g, format == "json" ? census_json(out) : census_csv(out));
  return 0;
}

// sequence --------------------------------------------------------------------

struct SequenceArgs {
  std::string file;
  std::optional<double> sigma0_max, sigma0_min;
  double resolution = 1e-7;
  std::size_t steps = 400;
  std::string census;
};

int cmd_sequence(const Globals& g, const SequenceArgs& a) {
  const auto format = resolve_format(g, "json", {"json", "csv"}, "sequence");
  const auto lm = load(a.file);
  const double hi = upper_sigma0(lm, a.sigma0_max);
  const double lo = a.sigma0_min.value_or(1e-3 * hi);
  if (!(lo > 0) || !(lo < hi)) throw UsageError("sequence requires 0 < --sigma0-min < --sigma0-max");
  SequenceOptions opt;
  opt.steps = a.steps;
  opt.threads = g.threads;
  const auto seq = bifurcation_sequence(lm.poly, lo, hi, a.resolution, opt);
  emit(g, format == "json" ? events_json(seq) : events_csv(seq));
  if (!a.census.empty()) write_file(a.census, census_csv(seq.census));
  std::cerr << seq.events.size() << " events on [" << format_double(lo) << ", " << format_double(hi) << "]\n";
  return 0;
}

// portrait --------------------------------------------------------------------

struct PortraitArgs {
  std::string file;
  double sigma0 = 0;
  std::optional<double> sigma0_max;
  std::vector<double> levels;
  std::size_t auto_count = 9;
  std::size_t grid = 1024;
  bool no_markers = false;
  std::string csv;
};

int cmd_portrait(const Globals& g, const PortraitArgs& a) {
  const auto format = resolve_format(g, "svg", {"svg", "csv", "json"}, "portrait");
  const auto lm = load(a.file);
  check_sigma0(lm, a.sigma0);
  const auto levels = a.levels.empty() ? auto_levels(lm.poly, a.sigma0, a.auto_count) : a.levels;
  PortraitOptions opt;
  opt.grid = a.grid;
  opt.threads = g.threads;
  opt.markers = !a.no_markers;
  auto p = contour_portrait(lm.poly, a.sigma0, levels, opt);
  if (opt.markers) {
    SequenceOptions so;
    so.threads = g.threads;
    const auto c = labeled_census(lm.poly, a.sigma0, upper_sigma0(lm, a.sigma0_max), so);
    p.markers.clear();
    for (const auto* set : {&c.cpi, &c.cpii}) {
      for (const auto& cp : *set) p.markers.push_back(marker_for(cp));
    }
  }
  if (format == "svg") emit(g, portrait_svg(p));
  else if (format == "json") emit(g, portrait_json(p));
  else emit(g, portrait_csv(p));
  if (!a.csv.empty()) write_file(a.csv, portrait_csv(p));
  return 0;
}

// section ---------------------------------------------------------------------

struct SectionArgs {
  std::string file;
  std::optional<double> energy;
  std::vector<double> x0;
  std::size_t count = 10;
  double T = 1000;
  std::optional<double> radius;
  std::size_t max_crossings = 0;
};

int cmd_section(const Globals& g, const SectionArgs& a) {
  resolve_format(g, "csv", {"csv"}, "section");
  const auto m = parse_model(read_text_file(a.file));
  PoincarePolyHamiltonian h;
  std::optional<double> smax = m.sigma0_max;
  if (m.kind == ModelKind::Poincare) {
    h = m.poincare;
  } else if (m.kind == ModelKind::Params) {
    h = to_poincare(octupole_to_quad(octupole_coefficients(m.params)).to_poly());
  } else {
    h = to_poincare(m.poly);
  }
  std::vector<PoincareState> starts;
  if (!a.x0.empty()) {
    if (a.x0.size() != 4) throw UsageError("--x0 takes four values X2 Y2 X3 Y3");
    starts.push_back({a.x0[0], a.x0[1], a.x0[2], a.x0[3]});
  } else {
    if (!a.energy) throw UsageError("section requires --energy or --x0");
    const double radius = a.radius.value_or(std::sqrt(2 * smax.value_or(1.0)));
    starts = section_start_points(h, *a.energy, radius, a.count);
    if (starts.empty()) {
      throw Error(ErrorKind::EmptyDomain, "no feasible initial conditions at energy " + format_double(*a.energy));
    }
  }
  SectionOptions opt;
  opt.max_crossings = a.max_crossings;
  std::vector<SectionResult> runs;
  double drift = 0;
  for (const auto& s : starts) {
    runs.push_back(poincare_section(h, s, a.T, g.tol, opt));
    drift = std::max(drift, runs.back().max_energy_drift);
  }
  emit(g, section_csv(runs));
  std::cerr << runs.size() << " trajectories, max relative energy drift " << format_double(drift) << "\n";
  return 0;
}

// oracle ----------------------------------------------------------------------

struct OracleArgs {
  std::string file;
  std::optional<double> sigma0_max;
  std::size_t points = 20;
  std::size_t n = 100000;
  std::size_t disk = 256;
  std::string discrepancies;
};

struct OracleRow {
  std::string check;
  double sigma0 = 0;
  std::size_t analytic = 0, oracle = 0;
  bool pass = true;
};

int cmd_oracle(const Globals& g, const OracleArgs& a) {
  resolve_format(g, "csv", {"csv"}, "oracle");
  const auto lm = load(a.file);
  const double hi = upper_sigma0(lm, a.sigma0_max);
  std::optional<QuadHopfHamiltonian> rq;
  std::vector<double> events;
  if (lm.quad) {
    rq = rotate_to_diagonal(*lm.quad).model;
    events = f1_roots(*rq, hi, g.threads).roots;
    for (double s : cpii_values(*rq).sigma0) events.push_back(s);
  } else {
    SequenceOptions opt;
    opt.threads = g.threads;
    for (const auto& e : bifurcation_sequence(lm.poly, 1e-3 * hi, hi, 1e-7 * hi, opt).events) {
      events.push_back(0.5 * (e.sigma0_high + e.sigma0_low));
    }
  }
  std::vector<OracleRow> rows;
  std::size_t skipped = 0;
  for (std::size_t k = 1; k <= a.points; ++k) {
    const double s0 = hi * static_cast<double>(k) / static_cast<double>(a.points);
    const bool near_event = std::any_of(events.begin(), events.end(), [&](double e) { return std::fabs(e - s0) < 1e-3 * hi; });
    if (near_event) {
      ++skipped;
      continue;
    }
    const auto census = critical_census(lm.poly, s0);
    const auto scan = grid_tangency_scan(lm.poly, s0, a.n);
    rows.push_back({"tangency_count", s0, census.cpi.size(), scan.size(), census.cpi.size() == scan.size()});
    if (rq) {
      const auto roots = cpi_quartic_roots(*rq, s0).roots.size();
      const auto brute = quartic_bruteforce(*rq, s0, a.n).count;
      rows.push_back({"quartic_count", s0, roots, brute, roots == brute});
    }
    std::size_t saddles = 0;
    for (const auto& cp : census.cpi) saddles += cp.tangency == Tangency::Inner;
    for (const auto& cp : census.cpii) saddles += cp.stability == Stability::Unstable;
    const auto disk = disk_critical_scan(lm.poly, s0, a.disk, g.threads);
    rows.push_back({"disk_saddles", s0, saddles, disk.saddles, saddles == disk.saddles});
  }
  std::string out = "check,sigma0,analytic,oracle,status\n", bad = out;
  std::size_t failures = 0;
  for (const auto& r : rows) {
    const auto line = csv_row({r.check, format_double(r.sigma0), std::to_string(r.analytic), std::to_string(r.oracle),
                               r.pass ? "PASS" : "FAIL"});
    out += line;
    if (!r.pass) {
      bad += line;
      ++failures;
    }
  }
  emit(g, out);
  if (!a.discrepancies.empty()) write_file(a.discrepancies, bad);
  std::cerr << rows.size() << " checks, " << failures << " failures, " << skipped << " sigma0 samples inside event windows\n";
  return failures == 0 ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bifurcation sequences of integrable secular three-body models in Hopf variables"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--tol", g.tol, "Integrator relative tolerance")->check(CLI::PositiveNumber);
  app.add_option("--threads", g.threads, "Worker threads (0 = auto)");
  app.add_option("--out", g.out, "Write the primary output to FILE instead of stdout");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json", "svg"}));

  CoeffsArgs coeffs;
  auto* c_coeffs = app.add_subcommand("coeffs", "Octupole normal-form coefficients and the diagonalized quadratic model");
  c_coeffs->add_option("params", coeffs.file, "SystemParams JSON file")->check(CLI::ExistingFile);
  c_coeffs->add_option("--from-coeffs", coeffs.from_coeffs, "Quadratic model JSON to rotate instead")->check(CLI::ExistingFile);

  CriticalArgs critical;
  auto* c_critical = app.add_subcommand("critical", "CPI and CPII sigma0 thresholds");
  c_critical->add_option("model", critical.file, "Model JSON file")->required()->check(CLI::ExistingFile);
  c_critical->add_flag("--scan", critical.scan, "Bracket thresholds numerically with a census sweep");
  c_critical->add_option("--sigma0-max", critical.sigma0_max, "Upper end of the sigma0 search");
  c_critical->add_option("--sigma0-min", critical.sigma0_min, "Lower end of the numeric sweep");
  c_critical->add_option("--resolution", critical.resolution, "Bracket width of numeric thresholds");
  c_critical->add_option("--steps", critical.steps, "Sweep steps of the numeric path");

  TangencyArgs tang;
  auto* c_tang = app.add_subcommand("tangencies", "Classified critical points at given sigma0 values");
  c_tang->add_option("model", tang.file, "Model JSON file")->required()->check(CLI::ExistingFile);
  c_tang->add_option("--sigma0", tang.sigma0, "sigma0 values")->required();
  c_tang->add_option("--sigma0-max", tang.sigma0_max, "Top of the labelling continuation");

  SequenceArgs seq;
  auto* c_seq = app.add_subcommand("sequence", "Bifurcation sequence over a sigma0 range");
  c_seq->add_option("model", seq.file, "Model JSON file")->required()->check(CLI::ExistingFile);
  c_seq->add_option("--sigma0-max", seq.sigma0_max, "Upper end of the sweep");
  c_seq->add_option("--sigma0-min", seq.sigma0_min, "Lower end of the sweep");
  c_seq->add_option("--resolution", seq.resolution, "Event bracket width");
  c_seq->add_option("--steps", seq.steps, "Sweep steps");
  c_seq->add_option("--census", seq.census, "Write the per-step census CSV to FILE");

  PortraitArgs por;
  auto* c_por = app.add_subcommand("portrait", "sigma0-fixed phase portrait");
  c_por->add_option("model", por.file, "Model JSON file")->required()->check(CLI::ExistingFile);
  c_por->add_option("--sigma0", por.sigma0, "sigma0")->required();
  c_por->add_option("--sigma0-max", por.sigma0_max, "Top of the marker labelling continuation");
  c_por->add_option("--levels", por.levels, "Energy levels (default: automatic)");
  c_por->add_option("--auto", por.auto_count, "Number of automatic levels");
  c_por->add_option("--grid", por.grid, "Marching-squares grid size")->check(CLI::Range(8, 1 << 14));
  c_por->add_flag("--no-markers", por.no_markers, "Omit critical point markers");
  c_por->add_option("--csv", por.csv, "Also write the curves as CSV to FILE");

  SectionArgs sec;
  auto* c_sec = app.add_subcommand("section", "Poincaré surface of section Y3 = 0");
  c_sec->add_option("model", sec.file, "Model JSON file")->required()->check(CLI::ExistingFile);
  c_sec->add_option("--energy", sec.energy, "Energy level of the initial conditions");
  c_sec->add_option("--x0", sec.x0, "Explicit initial condition X2 Y2 X3 Y3")->expected(4);
  c_sec->add_option("--count", sec.count, "Number of trajectories");
  c_sec->add_option("--T", sec.T, "Integration time")->check(CLI::PositiveNumber);
  c_sec->add_option("--radius", sec.radius, "Search radius for initial conditions");
  c_sec->add_option("--max-crossings", sec.max_crossings, "Stop each run after this many crossings");

  OracleArgs ora;
  auto* c_ora = app.add_subcommand("oracle", "Cross-check analytic results against brute-force scans");
  c_ora->add_option("model", ora.file, "Model JSON file")->required()->check(CLI::ExistingFile);
  c_ora->add_option("--sigma0-max", ora.sigma0_max, "Upper end of the sigma0 grid");
  c_ora->add_option("--points", ora.points, "Number of sigma0 samples")->check(CLI::PositiveNumber);
  c_ora->add_option("--n", ora.n, "Meridian and quartic grid size");
  c_ora->add_option("--disk", ora.disk, "Disk scan grid size");
  c_ora->add_option("--discrepancies", ora.discrepancies, "Write failing rows as CSV to FILE");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*c_coeffs) return cmd_coeffs(g, coeffs);
    if (*c_critical) return cmd_critical(g, critical);
    if (*c_tang) return cmd_tangencies(g, tang);
    if (*c_seq) return cmd_sequence(g, seq);
    if (*c_por) return cmd_portrait(g, por);
    if (*c_sec) return cmd_section(g, sec);
    if (*c_ora) return cmd_oracle(g, ora);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
