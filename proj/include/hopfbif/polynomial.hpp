#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "hopfbif/error.hpp"

namespace hopfbif {

/// Sparse real polynomial in N variables. Terms are keyed by their exponent
/// vector, so duplicate monomials are merged on insertion and iteration order
/// is deterministic.
template <std::size_t N>
class Polynomial {
 public:
  using Exponents = std::array<int, N>;

  Polynomial() = default;

  static Polynomial constant(double c) {
    Polynomial p;
    p.add_term(Exponents{}, c);
    return p;
  }

  static Polynomial variable(std::size_t index, double coef = 1.0) {
    Exponents e{};
    e.at(index) = 1;
    Polynomial p;
    p.add_term(e, coef);
    return p;
  }

  void add_term(const Exponents& exps, double coef) {
    for (int e : exps) {
      if (e < 0) throw Error(ErrorKind::InvalidArgument, "negative exponent in polynomial term");
    }
    if (!std::isfinite(coef)) throw Error(ErrorKind::InvalidArgument, "non-finite polynomial coefficient");
    if (coef == 0.0) return;
    for (std::size_t v = 0; v < N; ++v) max_exp_[v] = std::max(max_exp_[v], exps[v]);
    auto [it, inserted] = terms_.emplace(exps, coef);
    if (!inserted) {
      it->second += coef;
      if (it->second == 0.0) terms_.erase(it);
    }
  }

  const std::map<Exponents, double>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }

  int degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) {
      int s = 0;
      for (int k : e) s += k;
      d = std::max(d, s);
    }
    return d;
  }

  int max_exponent(std::size_t var) const {
    int m = 0;
    for (const auto& [e, c] : terms_) m = std::max(m, e[var]);
    return m;
  }

  double evaluate(const std::array<double, N>& x) const {
    // Small power tables on the stack; large exponents fall back to std::pow.
    constexpr int kTable = 16;
    std::array<std::array<double, kTable>, N> pw;
    for (std::size_t v = 0; v < N; ++v) {
      const int m = std::min(max_exp_[v], kTable - 1);
      pw[v][0] = 1.0;
      for (int k = 1; k <= m; ++k) pw[v][k] = pw[v][k - 1] * x[v];
    }
    double sum = 0.0;
    for (const auto& [e, c] : terms_) {
      double t = c;
      for (std::size_t v = 0; v < N; ++v) t *= e[v] < kTable ? pw[v][e[v]] : std::pow(x[v], e[v]);
      sum += t;
    }
    return sum;
  }

  Polynomial derivative(std::size_t var) const {
    Polynomial d;
    for (const auto& [e, c] : terms_) {
      if (e[var] == 0) continue;
      Exponents de = e;
      de[var] -= 1;
      d.add_term(de, c * e[var]);
    }
    return d;
  }

  Polynomial& operator+=(const Polynomial& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }

  Polynomial& operator*=(double s) {
    if (s == 0.0) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial r;
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        Exponents e{};
        for (std::size_t v = 0; v < N; ++v) e[v] = ea[v] + eb[v];
        r.add_term(e, ca * cb);
      }
    }
    return r;
  }

  Polynomial pow(int k) const {
    Polynomial r = constant(1.0);
    for (int i = 0; i < k; ++i) r = r * *this;
    return r;
  }

 private:
  std::map<Exponents, double> terms_;
  Exponents max_exp_{};
};

/// Integrable model Z(σ₀, σ₁, σ₃) in Hopf variables. Variables are indexed
/// 0 → σ₀, 1 → σ₁, 2 → σ₃; there is deliberately no σ₂ slot, the reduced
/// Hamiltonians considered here are even in ψ and hence σ₂-free.
class PolyHopfHamiltonian {
 public:
  struct Term {
    int p0 = 0;
    int p1 = 0;
    int p3 = 0;
    double coef = 0.0;
  };

  PolyHopfHamiltonian() = default;
  explicit PolyHopfHamiltonian(Polynomial<3> poly);
  explicit PolyHopfHamiltonian(std::span<const Term> terms);

  const Polynomial<3>& polynomial() const noexcept { return poly_; }
  std::vector<Term> terms() const;
  int degree() const { return poly_.degree(); }

  double value(double s0, double s1, double s3) const { return poly_.evaluate({s0, s1, s3}); }
  double d_sigma0(double s0, double s1, double s3) const { return d0_.evaluate({s0, s1, s3}); }
  /// (∂Z/∂σ₁, ∂Z/∂σ₃)
  std::array<double, 2> gradient(double s0, double s1, double s3) const;
  /// {∂²Z/∂σ₁², ∂²Z/∂σ₁∂σ₃, ∂²Z/∂σ₃²}
  std::array<double, 3> hessian(double s0, double s1, double s3) const;

  /// True when no term depends on σ₁ or σ₃ (the reduced flow is then trivial).
  bool is_sigma0_only() const;

 private:
  void build_derivatives();

  Polynomial<3> poly_;
  Polynomial<3> d0_, d1_, d3_, d11_, d13_, d33_;
};

/// Full two-degree-of-freedom Hamiltonian in Poincaré variables, indexed
/// 0 → X₂, 1 → Y₂, 2 → X₃, 3 → Y₃.
class PoincarePolyHamiltonian {
 public:
  struct Term {
    int e2 = 0;
    int e2y = 0;
    int e3 = 0;
    int e3y = 0;
    double coef = 0.0;
  };

  PoincarePolyHamiltonian() = default;
  explicit PoincarePolyHamiltonian(Polynomial<4> poly);
  explicit PoincarePolyHamiltonian(std::span<const Term> terms);

  const Polynomial<4>& polynomial() const noexcept { return poly_; }
  std::vector<Term> terms() const;
  int degree() const { return poly_.degree(); }

  double value(const std::array<double, 4>& x) const { return poly_.evaluate(x); }
  /// (∂H/∂X₂, ∂H/∂Y₂, ∂H/∂X₃, ∂H/∂Y₃)
  std::array<double, 4> gradient(const std::array<double, 4>& x) const;

 private:
  Polynomial<4> poly_;
  std::array<Polynomial<4>, 4> grad_;
};

/// Substitutes σ₀, σ₁, σ₃ by their quadratic expressions in (X₂, Y₂, X₃, Y₃).
PoincarePolyHamiltonian to_poincare(const PolyHopfHamiltonian& z);

}  // namespace hopfbif
