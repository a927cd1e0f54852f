#include "hopfbif/octupole.hpp"

#include <cmath>

#include "hopfbif/error.hpp"

namespace hopfbif {

OctupoleCoefficients octupole_coefficients(const SystemParams& p) {
  p.validate();
  using std::pow;
  using std::sqrt;
  const double a2 = p.a2, a3 = p.a3, m0 = p.m0, m2 = p.m2, m3 = p.m3, G = p.G, amd = p.AMD;
  const double sG = sqrt(G), sm0 = sqrt(m0);
  const double M = sqrt(a2) * m2 + sqrt(a3) * m3;
  const double ratio = sqrt(a2 / a3);

  OctupoleCoefficients c;
  const double a_grav = -3 * sG / (4 * pow(a3, 3.5) * sm0);
  const double a_amd = 3 * a2 * amd / (4 * pow(a3, 4) * m0 * m2 * m3);
  c.a = a_grav * (2 * pow(a2, 1.5) * sqrt(a3) * m3 + a2 * a2 * m2) +
        a_amd * (6 * sqrt(a2 * a3) * m2 * m3 + a2 * m2 * m2 + 5 * a3 * m3 * m3);
  c.b = a_grav * (pow(a2, 1.5) * sqrt(a3) * m3 + 2 * a2 * a2 * m2) +
        a_amd * (6 * sqrt(a2 * a3) * m2 * m3 + 5 * a2 * m2 * m2 + a3 * m3 * m3);

  const double fscale = std::fabs(a_grav) * (pow(a2, 1.5) * sqrt(a3) * m3 + a2 * a2 * m2) +
                        std::fabs(a_amd) * (6 * sqrt(a2 * a3) * m2 * m3 + a2 * m2 * m2 + a3 * m3 * m3);
  if (std::fabs(c.a) <= 1e-14 * fscale) {
    throw Error(ErrorKind::SecularFrequencyDegenerate, "secular frequency a vanishes");
  }
  if (std::fabs(c.a + c.b) <= 1e-14 * fscale) {
    throw Error(ErrorKind::SecularFrequencyDegenerate, "secular frequencies satisfy a + b = 0");
  }
  const double a = c.a, apb = c.a + c.b, boa3 = c.b / c.a + 3;

  const double P = ratio * m3 / m2 + a2 / (2 * a3) + m3 * m3 / (2 * m2 * m2);
  const double mixed = pow(a2, 13.0 / 4) * M * M / (256 * pow(a3, 33.0 / 4) * m0 * m0 * pow(m2, 1.5) * sqrt(m3) * apb);
  const double q23 = sqrt(a2 * m2 / (a3 * m3));
  const double q32 = sqrt(m3 / m2);
  const double lead94 = pow(a2, 9.0 / 4) / (128 * pow(a3, 17.0 / 4) * m0);

  c.Atil = 0.0;

  c.Ctil = -2025 * pow(a2, 4.5) * amd * M * M / (256 * pow(a3, 9.5) * m2 * m3 * m0 * m0 * apb) +
           225 * a2 * a2 * amd / (64 * pow(a3, 6) * m0 * m0 * a) * P +
           3 * a2 / (8 * pow(a3, 3) * m0) * (1.5 * ratio - a2 * m2 / (a3 * m3) + m3 / (4 * m2));

  c.Btil = 675 * amd * mixed * boa3 + 5 * lead94 * (57 * q23 - 15 * q32);

  c.D1til = 2025 * amd * mixed * boa3 - 105 * lead94 * (9 * q23 + 7 * q32);

  c.Delta1til = -675 * amd * amd * mixed * boa3 +
                165 * pow(a2, 9.0 / 4) * amd * M / (32 * pow(a3, 19.0 / 4) * m0 * sqrt(m2) * sqrt(m3)) -
                15 * pow(a2, 11.0 / 4) * sG * sqrt(m2) * sqrt(m3) / (16 * pow(a3, 17.0 / 4) * sm0);

  c.D3til = 675 * a2 * a2 * amd / (32 * pow(a3, 6) * m0 * m0 * a) * P +
            3 * a2 / (4 * pow(a3, 3) * m0) * (3 * a2 * m2 / (a3 * m3) - 7 * m3 / (4 * m2));

  c.Delta3til = 3 * pow(a2, 1.5) * sG / (8 * pow(a3, 3.5) * sm0) * (sqrt(a2) * m2 - sqrt(a3) * m3) -
                225 * a2 * a2 * amd * amd / (32 * pow(a3, 6) * m0 * m0 * a) * P +
                3 * a2 * amd / (2 * pow(a3, 3) * m0) * (m3 / m2 - a2 * m2 / (a3 * m3));
  return c;
}

QuadHopfHamiltonian octupole_to_quad(const OctupoleCoefficients& oc) {
  QuadHopfHamiltonian q;
  q.A = oc.Atil;
  q.B = oc.Btil;
  q.C = oc.Ctil;
  q.D1 = oc.D1til;
  q.Delta1 = oc.Delta1til;
  q.D3 = oc.D3til;
  q.Delta3 = oc.Delta3til;
  return q;
}

}  // namespace hopfbif
