#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <span>

#include "hopfbif/error.hpp"
#include "hopfbif/report.hpp"

namespace py = pybind11;
using namespace hopfbif;

namespace {

PolyHopfHamiltonian poly_from_terms(const std::vector<std::tuple<int, int, int, double>>& terms) {
  std::vector<PolyHopfHamiltonian::Term> t;
  for (const auto& [p0, p1, p3, c] : terms) t.push_back({p0, p1, p3, c});
  return PolyHopfHamiltonian(std::span<const PolyHopfHamiltonian::Term>(t));
}

PoincarePolyHamiltonian poincare_from_terms(const std::vector<std::tuple<int, int, int, int, double>>& terms) {
  std::vector<PoincarePolyHamiltonian::Term> t;
  for (const auto& [e2, e2y, e3, e3y, c] : terms) t.push_back({e2, e2y, e3, e3y, c});
  return PoincarePolyHamiltonian(std::span<const PoincarePolyHamiltonian::Term>(t));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bifurcation sequences of integrable secular models in Hopf variables";

  static py::exception<Error> exc(m, "HopfbifError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object type = py::reinterpret_borrow<py::object>(exc);
      py::object inst = type(e.what());
      inst.attr("kind") = std::string(to_string(e.kind()));
      PyErr_SetObject(type.ptr(), inst.ptr());
    }
  });

  py::class_<HopfState>(m, "HopfState")
      .def(py::init<>())
      .def(py::init([](double s0, double s1, double s2, double s3) { return HopfState{s0, s1, s2, s3}; }),
           py::arg("sigma0"), py::arg("sigma1"), py::arg("sigma2"), py::arg("sigma3"))
      .def_readwrite("sigma0", &HopfState::sigma0)
      .def_readwrite("sigma1", &HopfState::sigma1)
      .def_readwrite("sigma2", &HopfState::sigma2)
      .def_readwrite("sigma3", &HopfState::sigma3)
      .def("sphere_residual", &HopfState::sphere_residual)
      .def("__repr__", [](const HopfState& h) {
        return "HopfState(" + format_double(h.sigma0) + ", " + format_double(h.sigma1) + ", " +
               format_double(h.sigma2) + ", " + format_double(h.sigma3) + ")";
      });

  py::class_<PoincareState>(m, "PoincareState")
      .def(py::init<>())
      .def(py::init([](double x2, double y2, double x3, double y3) { return PoincareState{x2, y2, x3, y3}; }),
           py::arg("X2"), py::arg("Y2"), py::arg("X3"), py::arg("Y3"))
      .def_readwrite("X2", &PoincareState::X2)
      .def_readwrite("Y2", &PoincareState::Y2)
      .def_readwrite("X3", &PoincareState::X3)
      .def_readwrite("Y3", &PoincareState::Y3);

  m.def("poincare_to_hopf", &poincare_to_hopf);
  m.def("hopf_to_section_plane", [](const HopfState& h) {
    const auto p = hopf_to_section_plane(h);
    return py::make_tuple(p.X2, p.Y2);
  });
  m.def("section_plane_to_hopf", &section_plane_to_hopf, py::arg("sigma0"), py::arg("X2"), py::arg("Y2"));
  m.def("reduced_flow_rhs", &reduced_flow_rhs);

  py::class_<SystemParams>(m, "SystemParams")
      .def(py::init<>())
      .def_readwrite("m0", &SystemParams::m0)
      .def_readwrite("m2", &SystemParams::m2)
      .def_readwrite("m3", &SystemParams::m3)
      .def_readwrite("a2", &SystemParams::a2)
      .def_readwrite("a3", &SystemParams::a3)
      .def_readwrite("G", &SystemParams::G)
      .def_readwrite("AMD", &SystemParams::AMD)
      .def("validate", &SystemParams::validate);

  py::class_<PolyHopfHamiltonian>(m, "PolyHopfHamiltonian")
      .def(py::init(&poly_from_terms), py::arg("terms"), "terms: list of (p0, p1, p3, coef)")
      .def("terms",
           [](const PolyHopfHamiltonian& z) {
             std::vector<std::tuple<int, int, int, double>> out;
             for (const auto& t : z.terms()) out.emplace_back(t.p0, t.p1, t.p3, t.coef);
             return out;
           })
      .def_property_readonly("degree", &PolyHopfHamiltonian::degree)
      .def("value", &PolyHopfHamiltonian::value, py::arg("sigma0"), py::arg("sigma1"), py::arg("sigma3"))
      .def("gradient", &PolyHopfHamiltonian::gradient);

  py::class_<PoincarePolyHamiltonian>(m, "PoincarePolyHamiltonian")
      .def(py::init(&poincare_from_terms), py::arg("terms"), "terms: list of (e2, e2y, e3, e3y, coef)")
      .def_property_readonly("degree", &PoincarePolyHamiltonian::degree)
      .def("value", &PoincarePolyHamiltonian::value);
  m.def("to_poincare", &to_poincare);

  py::class_<QuadHopfHamiltonian>(m, "QuadHopfHamiltonian")
      .def(py::init<>())
      .def(py::init([](double A, double B, double C, double D1, double Delta1, double D3, double Delta3, double F0,
                       double F1, double F2) {
             QuadHopfHamiltonian q{A, B, C, D1, Delta1, D3, Delta3, F0, F1, F2};
             q.validate();
             return q;
           }),
           py::arg("A"), py::arg("B"), py::arg("C"), py::arg("D1"), py::arg("Delta1"), py::arg("D3"),
           py::arg("Delta3"), py::arg("F0") = 0.0, py::arg("F1") = 0.0, py::arg("F2") = 0.0)
      .def_readwrite("A", &QuadHopfHamiltonian::A)
      .def_readwrite("B", &QuadHopfHamiltonian::B)
      .def_readwrite("C", &QuadHopfHamiltonian::C)
      .def_readwrite("D1", &QuadHopfHamiltonian::D1)
      .def_readwrite("Delta1", &QuadHopfHamiltonian::Delta1)
      .def_readwrite("D3", &QuadHopfHamiltonian::D3)
      .def_readwrite("Delta3", &QuadHopfHamiltonian::Delta3)
      .def_readwrite("F0", &QuadHopfHamiltonian::F0)
      .def_readwrite("F1", &QuadHopfHamiltonian::F1)
      .def_readwrite("F2", &QuadHopfHamiltonian::F2)
      .def("value", &QuadHopfHamiltonian::value)
      .def("T1", &QuadHopfHamiltonian::T1)
      .def("T3", &QuadHopfHamiltonian::T3)
      .def("to_poly", &QuadHopfHamiltonian::to_poly);

  py::class_<OctupoleCoefficients>(m, "OctupoleCoefficients")
      .def_readonly("Atil", &OctupoleCoefficients::Atil)
      .def_readonly("Btil", &OctupoleCoefficients::Btil)
      .def_readonly("Ctil", &OctupoleCoefficients::Ctil)
      .def_readonly("D1til", &OctupoleCoefficients::D1til)
      .def_readonly("Delta1til", &OctupoleCoefficients::Delta1til)
      .def_readonly("D3til", &OctupoleCoefficients::D3til)
      .def_readonly("Delta3til", &OctupoleCoefficients::Delta3til)
      .def_readonly("a", &OctupoleCoefficients::a)
      .def_readonly("b", &OctupoleCoefficients::b);
  m.def("octupole_coefficients", &octupole_coefficients);
  m.def("octupole_to_quad", &octupole_to_quad);

  m.def("conic_class", [](const QuadHopfHamiltonian& q) { return std::string(to_string(conic_class(q))); });
  m.def("rotate_to_diagonal", [](const QuadHopfHamiltonian& q) {
    const auto r = rotate_to_diagonal(q);
    return py::make_tuple(r.model, r.rotation.angle);
  });
  m.def("cpi_quartic_roots", [](const QuadHopfHamiltonian& q, double s0) {
    py::list out;
    for (const auto& r : cpi_quartic_roots(q, s0).roots) {
      py::dict d;
      d["mu"] = r.mu;
      d["sigma1"] = r.sigma1;
      d["sigma3"] = r.sigma3;
      d["residual"] = r.residual;
      out.append(d);
    }
    return out;
  });
  m.def("discriminant_q", [](const QuadHopfHamiltonian& q, double s0) { return discriminant_q(q, s0).value; });
  m.def("f1", &f1);
  m.def("f2", &f2);
  m.def("f1_roots", [](const QuadHopfHamiltonian& q, double smax, unsigned threads) { return f1_roots(q, smax, threads).roots; },
        py::arg("q"), py::arg("sigma0_max"), py::arg("threads") = 1);
  m.def("cpii_values", [](const QuadHopfHamiltonian& q) { return cpii_values(q).sigma0; });

  py::class_<CriticalPoint>(m, "CriticalPoint")
      .def_readonly("location", &CriticalPoint::location)
      .def_property_readonly("kind", [](const CriticalPoint& c) { return std::string(to_string(c.kind)); })
      .def_property_readonly("tangency", [](const CriticalPoint& c) { return std::string(to_string(c.tangency)); })
      .def_property_readonly("stability", [](const CriticalPoint& c) { return std::string(to_string(c.stability)); })
      .def_readonly("energy", &CriticalPoint::energy)
      .def_readonly("sigma0", &CriticalPoint::sigma0)
      .def_readonly("theta", &CriticalPoint::theta)
      .def_readonly("label", &CriticalPoint::label);

  py::class_<Census>(m, "Census")
      .def_readonly("sigma0", &Census::sigma0)
      .def_readonly("cpi", &Census::cpi)
      .def_readonly("cpii", &Census::cpii);

  m.def("find_cpi", [](const PolyHopfHamiltonian& z, double s0) { return find_cpi(z, s0); });
  m.def("critical_census", [](const PolyHopfHamiltonian& z, double s0) { return critical_census(z, s0); });
  m.def("labeled_census", [](const PolyHopfHamiltonian& z, double s0, double top) { return labeled_census(z, s0, top); },
        py::arg("z"), py::arg("sigma0"), py::arg("sigma0_top"));
  m.def("energy_limits", [](const PolyHopfHamiltonian& z, double s0) {
    const auto e = energy_limits(z, s0);
    return py::make_tuple(e.E_L, e.E_R);
  });
  m.def("equilibrium_residual", &equilibrium_residual);

  py::class_<BifurcationEvent>(m, "BifurcationEvent")
      .def_property_readonly("type", [](const BifurcationEvent& e) { return std::string(to_string(e.type)); })
      .def_readonly("sigma0_high", &BifurcationEvent::sigma0_high)
      .def_readonly("sigma0_low", &BifurcationEvent::sigma0_low)
      .def_readonly("born", &BifurcationEvent::born)
      .def_readonly("died", &BifurcationEvent::died)
      .def_readonly("flipped", &BifurcationEvent::flipped)
      .def_readonly("energy", &BifurcationEvent::energy);
  m.def(
      "bifurcation_sequence",
      [](const PolyHopfHamiltonian& z, double lo, double hi, double resolution, std::size_t steps, unsigned threads) {
        SequenceOptions opt;
        opt.steps = steps;
        opt.threads = threads;
        return bifurcation_sequence(z, lo, hi, resolution, opt).events;
      },
      py::arg("z"), py::arg("sigma0_lo"), py::arg("sigma0_hi"), py::arg("resolution") = 1e-7, py::arg("steps") = 400,
      py::arg("threads") = 0);

  m.def("auto_levels", &auto_levels, py::arg("z"), py::arg("sigma0"), py::arg("count"), py::arg("grid") = 256);
  m.def(
      "portrait_svg",
      [](const PolyHopfHamiltonian& z, double s0, const std::vector<double>& levels, std::size_t grid) {
        PortraitOptions opt;
        opt.grid = grid;
        return portrait_svg(contour_portrait(z, s0, levels, opt));
      },
      py::arg("z"), py::arg("sigma0"), py::arg("levels"), py::arg("grid") = 1024);
  m.def(
      "contour_curves",
      [](const PolyHopfHamiltonian& z, double s0, const std::vector<double>& levels, std::size_t grid) {
        PortraitOptions opt;
        opt.grid = grid;
        opt.markers = false;
        py::list out;
        for (const auto& c : contour_portrait(z, s0, levels, opt).curves) {
          py::dict d;
          d["level"] = c.level;
          d["closed"] = c.closed;
          d["points"] = c.points;
          out.append(d);
        }
        return out;
      },
      py::arg("z"), py::arg("sigma0"), py::arg("levels"), py::arg("grid") = 1024);

  m.def(
      "integrate_reduced",
      [](const PolyHopfHamiltonian& z, const HopfState& h0, double T, double tol) {
        const auto tr = integrate_reduced(z, h0, T, tol, {false, 0});
        py::dict d;
        d["final"] = tr.states.back();
        d["casimir_drift"] = tr.max_casimir_drift;
        d["energy_drift"] = tr.max_energy_drift;
        return d;
      },
      py::arg("z"), py::arg("h0"), py::arg("T"), py::arg("tol") = 1e-10);
  m.def(
      "poincare_section",
      [](const PoincarePolyHamiltonian& h, const PoincareState& x0, double T, double tol) {
        const auto r = poincare_section(h, x0, T, tol);
        py::list pts;
        for (const auto& p : r.points) pts.append(py::make_tuple(p.t, p.chart_X2(), p.chart_Y2(), p.energy_residual));
        py::dict d;
        d["points"] = pts;
        d["energy_drift"] = r.max_energy_drift;
        return d;
      },
      py::arg("h"), py::arg("x0"), py::arg("T"), py::arg("tol") = 1e-12);
  m.def("section_start_points", &section_start_points, py::arg("h"), py::arg("energy"), py::arg("radius"),
        py::arg("count"), py::arg("m") = 64);

  m.def("grid_tangency_scan_count",
        [](const PolyHopfHamiltonian& z, double s0, std::size_t n) { return grid_tangency_scan(z, s0, n).size(); });
  m.def("quartic_bruteforce_count",
        [](const QuadHopfHamiltonian& q, double s0, std::size_t n) { return quartic_bruteforce(q, s0, n).count; });
  m.def("disk_saddle_count", [](const PolyHopfHamiltonian& z, double s0, std::size_t n) {
    const auto s = disk_critical_scan(z, s0, n);
    return py::make_tuple(s.saddles, s.extrema);
  });

  m.def("load_model", [](const std::string& path) {
    const auto mdl = parse_model(read_text_file(path));
    py::dict d;
    d["kind"] = std::string(to_string(mdl.kind));
    if (mdl.kind == ModelKind::Params) {
      d["params"] = mdl.params;
      const auto q = octupole_to_quad(octupole_coefficients(mdl.params));
      d["quad"] = q;
      d["poly"] = q.to_poly();
    } else if (mdl.kind == ModelKind::Quad) {
      d["quad"] = mdl.quad;
      d["poly"] = mdl.poly;
    } else if (mdl.kind == ModelKind::Poly) {
      d["poly"] = mdl.poly;
    } else {
      d["poincare"] = mdl.poincare;
    }
    d["sigma0_max"] = mdl.sigma0_max ? py::cast(*mdl.sigma0_max) : py::none();
    return d;
  });
  m.def("census_csv", [](const Census& c) { return census_csv({c}); });
}
