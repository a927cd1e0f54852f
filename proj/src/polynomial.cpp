#include "hopfbif/polynomial.hpp"

namespace hopfbif {

PolyHopfHamiltonian::PolyHopfHamiltonian(Polynomial<3> poly) : poly_(std::move(poly)) { build_derivatives(); }

PolyHopfHamiltonian::PolyHopfHamiltonian(std::span<const Term> terms) {
  for (const auto& t : terms) poly_.add_term({t.p0, t.p1, t.p3}, t.coef);
  build_derivatives();
}

void PolyHopfHamiltonian::build_derivatives() {
  d0_ = poly_.derivative(0);
  d1_ = poly_.derivative(1);
  d3_ = poly_.derivative(2);
  d11_ = d1_.derivative(1);
  d13_ = d1_.derivative(2);
  d33_ = d3_.derivative(2);
}

std::vector<PolyHopfHamiltonian::Term> PolyHopfHamiltonian::terms() const {
  std::vector<Term> out;
  for (const auto& [e, c] : poly_.terms()) out.push_back({e[0], e[1], e[2], c});
  return out;
}

std::array<double, 2> PolyHopfHamiltonian::gradient(double s0, double s1, double s3) const {
  return {d1_.evaluate({s0, s1, s3}), d3_.evaluate({s0, s1, s3})};
}

std::array<double, 3> PolyHopfHamiltonian::hessian(double s0, double s1, double s3) const {
  return {d11_.evaluate({s0, s1, s3}), d13_.evaluate({s0, s1, s3}), d33_.evaluate({s0, s1, s3})};
}

bool PolyHopfHamiltonian::is_sigma0_only() const { return d1_.empty() && d3_.empty(); }

PoincarePolyHamiltonian::PoincarePolyHamiltonian(Polynomial<4> poly) : poly_(std::move(poly)) {
  for (std::size_t v = 0; v < 4; ++v) grad_[v] = poly_.derivative(v);
}

PoincarePolyHamiltonian::PoincarePolyHamiltonian(std::span<const Term> terms) {
  for (const auto& t : terms) poly_.add_term({t.e2, t.e2y, t.e3, t.e3y}, t.coef);
  for (std::size_t v = 0; v < 4; ++v) grad_[v] = poly_.derivative(v);
}

std::vector<PoincarePolyHamiltonian::Term> PoincarePolyHamiltonian::terms() const {
  std::vector<Term> out;
  for (const auto& [e, c] : poly_.terms()) out.push_back({e[0], e[1], e[2], e[3], c});
  return out;
}

std::array<double, 4> PoincarePolyHamiltonian::gradient(const std::array<double, 4>& x) const {
  return {grad_[0].evaluate(x), grad_[1].evaluate(x), grad_[2].evaluate(x), grad_[3].evaluate(x)};
}

PoincarePolyHamiltonian to_poincare(const PolyHopfHamiltonian& z) {
  using P4 = Polynomial<4>;
  const P4 x2 = P4::variable(0), y2 = P4::variable(1), x3 = P4::variable(2), y3 = P4::variable(3);
  const P4 s0 = 0.5 * (x2 * x2 + y2 * y2 + x3 * x3 + y3 * y3);
  const P4 s1 = x2 * x3 + y2 * y3;
  const P4 s3 = 0.5 * (x2 * x2 + y2 * y2 + (-1.0) * (x3 * x3) + (-1.0) * (y3 * y3));
  P4 h;
  for (const auto& [e, c] : z.polynomial().terms()) {
    h += c * (s0.pow(e[0]) * s1.pow(e[1]) * s3.pow(e[2]));
  }
  return PoincarePolyHamiltonian(std::move(h));
}

}  // namespace hopfbif
