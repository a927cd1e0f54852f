#include <doctest.h>

#include "hopfbif/error.hpp"
#include "hopfbif/report.hpp"
#include "support.hpp"

using namespace hopfbif;
using doctest::Approx;

namespace {

ErrorKind kind_of(const std::string& text) {
  try {
    parse_model(text);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("model detection") {
  CHECK(testing::load_fixture("params.json").kind == ModelKind::Params);
  CHECK(testing::load_fixture("octupole.json").kind == ModelKind::Quad);
  CHECK(testing::load_fixture("sextic_poly.json").kind == ModelKind::Poly);
  CHECK(testing::load_fixture("oscillator_poincare.json").kind == ModelKind::Poincare);
  const auto a = testing::load_fixture("appendix_a.json");
  CHECK(a.quad.F2 == -0.108446);
  REQUIRE(a.sigma0_max.has_value());
  CHECK(*a.sigma0_max == 0.0162044);
  CHECK(a.poly.value(0.01, 0.002, -0.003) == Approx(a.quad.value(0.01, 0.002, -0.003)));
}

TEST_CASE("schema errors") {
  try {
    parse_model(read_text_file(testing::fixture("malformed.json")));
    FAIL("expected a schema error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Schema);
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
    CHECK(std::string(e.what()).find("column") != std::string::npos);
  }
  CHECK(kind_of(R"({"A": 1, "C": 2})") == ErrorKind::Schema);
  CHECK(kind_of(R"({"A": 1, "C": 2, "D1": 0, "Delta1": 0, "D3": 0, "Delta3": "x"})") == ErrorKind::Schema);
  CHECK(kind_of(R"({"A": 1, "C": 2, "D1": 0, "Delta1": 0, "D3": 0, "Delta3": 0, "Q": 1})") == ErrorKind::Schema);
  CHECK(kind_of(R"({"terms": [{"p1": -1, "coef": 1}]})") == ErrorKind::Schema);
  CHECK(kind_of(R"({"terms": [{"p1": 1, "e2": 1, "coef": 1}]})") == ErrorKind::Schema);
  CHECK(kind_of(R"({"m0": 1, "m2": 1, "m3": 1, "a2": 2, "a3": 1, "G": 1, "AMD": 0})") == ErrorKind::Schema);
  CHECK(kind_of("[1, 2]") == ErrorKind::Schema);
}

TEST_CASE("JSON round trips") {
  const auto q = testing::load_fixture("appendix_b.json").quad;
  const auto back = parse_model(quad_model_json(q)).quad;
  CHECK(back.A == q.A);
  CHECK(back.B == q.B);
  CHECK(back.Delta3 == q.Delta3);
  CHECK(back.F2 == q.F2);
  const auto p = testing::load_fixture("params.json").params;
  const auto pb = parse_system_params(system_params_json(p));
  CHECK(pb.a3 == p.a3);
  CHECK(pb.AMD == p.AMD);
  const auto z = testing::load_fixture("sextic_poly.json").poly;
  const auto zb = parse_model(poly_model_json(z)).poly;
  CHECK(zb.value(0.01, 0.003, 0.004) == z.value(0.01, 0.003, 0.004));
}

TEST_CASE("reports are deterministic") {
  const auto z = testing::octupole_quad().to_poly();
  const auto c1 = critical_census(z, 0.0055), c2 = critical_census(z, 0.0055);
  CHECK(census_csv({c1}) == census_csv({c2}));
  CHECK(census_csv({c1}).rfind("sigma0,label,kind,tangency,stability,sigma1,sigma2,sigma3,energy\n", 0) == 0);
  CHECK(census_json({c1}) == census_json({c2}));
  const auto p = contour_portrait(z, 0.0055, auto_levels(z, 0.0055, 5), {128, 2, true});
  const auto svg = portrait_svg(p);
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("ℰ = ") != std::string::npos);
  CHECK(svg == portrait_svg(contour_portrait(z, 0.0055, auto_levels(z, 0.0055, 5), {128, 1, true})));
  CHECK(portrait_csv(p).rfind("curve,level,closed,point_curve,X2,Y2\n", 0) == 0);
}
