#pragma once

// Mixed spin-(1/2, 1) Heisenberg dimer: parameters, Hamiltonian and its
// closed-form spectrum.
//
// Basis ordering is the qubit (x) qutrit product order, index 3a + b with
// qubit a in {+1/2, -1/2} and qutrit b in {+1, 0, -1}:
//   0 |1/2,1>  1 |1/2,0>  2 |1/2,-1>  3 |-1/2,1>  4 |-1/2,0>  5 |-1/2,-1>
// In this order the Hamiltonian diagonal reads (A-, B-, C+, C-, B+, A+) and
// the exchange coherences sit at (1,3) and (2,4) (0-indexed).

#include <array>
#include <cmath>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>

#include "spindimer/error.hpp"
#include "spindimer/matrix.hpp"

namespace spindimer {

enum class UnitMode { dimensionless, physical };

inline std::string_view to_string(UnitMode m) {
  return m == UnitMode::physical ? "physical" : "dimensionless";
}

/// Dimensionless mode measures energies in units of J with k_B = mu_B = 1, so
/// the field parameter is mu_B B and the temperature is k_B T. Physical mode
/// measures energies in Kelvin (E / k_B), fields in Tesla and temperatures in
/// Kelvin.
struct UnitSystem {
  UnitMode mode = UnitMode::dimensionless;
  double k_b = 1.0;   // J/K in physical mode
  double mu_b = 1.0;  // J/T in physical mode

  static constexpr UnitSystem dimensionless() { return {}; }
  static constexpr UnitSystem physical() {
    return {UnitMode::physical, 1.380649e-23, 9.2740100783e-24};
  }

  /// Zeeman energy per unit g-factor and unit field, in the active energy unit.
  [[nodiscard]] constexpr double field_to_energy() const { return mu_b / k_b; }
};

struct DimerParams {
  double j = 1.0;      // exchange coupling
  double delta = 1.0;  // XXZ anisotropy
  double d = 0.0;      // single-ion anisotropy on the spin-1 site
  double g1 = 2.0;     // spin-1/2 Lande factor
  double g2 = 2.0;     // spin-1 Lande factor
  double b = 0.0;      // magnetic field
  UnitSystem units{};

  void validate() const {
    const bool finite = std::isfinite(j) && std::isfinite(delta) && std::isfinite(d) &&
                        std::isfinite(g1) && std::isfinite(g2) && std::isfinite(b);
    if (!finite) throw InvalidParameter("dimer parameters must be finite");
    if (j == 0.0) throw InvalidParameter("exchange coupling J must be nonzero");
    if (!(g1 > 0.0) || !(g2 > 0.0)) throw InvalidParameter("g-factors must be positive");
  }

  /// CuNi heterodinuclear complex: J/k_B = 141 K, g1 = 2.20, g2 = 2.29, D = 0.
  static DimerParams cuni(double field_tesla = 0.0) {
    DimerParams p;
    p.j = 141.0;
    p.delta = 1.0;
    p.d = 0.0;
    p.g1 = 2.20;
    p.g2 = 2.29;
    p.b = field_tesla;
    p.units = UnitSystem::physical();
    return p;
  }
};

struct ZeemanFields {
  double h1 = 0.0;
  double h2 = 0.0;
};

inline ZeemanFields zeeman_fields(const DimerParams& p) {
  const double scale = p.units.field_to_energy() * p.b;
  return {p.g1 * scale, p.g2 * scale};
}

inline constexpr std::array<std::string_view, 6> kBasisLabels = {
    "|1/2,1>", "|1/2,0>", "|1/2,-1>", "|-1/2,1>", "|-1/2,0>", "|-1/2,-1>"};

/// Spin operators. Spin-1/2 uses S = sigma / 2, spin-1 uses the m = +1, 0, -1 order.
namespace spin {

inline ComplexMatrix half_x() { return {{0.0, 0.5}, {0.5, 0.0}}; }
inline ComplexMatrix half_y() { return {{0.0, cplx{0.0, -0.5}}, {cplx{0.0, 0.5}, 0.0}}; }
inline ComplexMatrix half_z() { return {{0.5, 0.0}, {0.0, -0.5}}; }

inline ComplexMatrix one_x() {
  const double r = 1.0 / std::sqrt(2.0);
  return {{0.0, r, 0.0}, {r, 0.0, r}, {0.0, r, 0.0}};
}
inline ComplexMatrix one_y() {
  const double r = 1.0 / std::sqrt(2.0);
  const cplx mi{0.0, -r};
  const cplx pi{0.0, r};
  return {{0.0, mi, 0.0}, {pi, 0.0, mi}, {0.0, pi, 0.0}};
}
inline ComplexMatrix one_z() { return {{1.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, -1.0}}; }

}  // namespace spin

/// Real-symmetric 6x6 Hamiltonian assembled from its diagonal elements and
/// the exchange coherence nu = J Delta / sqrt(2).
inline ComplexMatrix build_hamiltonian(const DimerParams& p) {
  p.validate();
  const auto [h1, h2] = zeeman_fields(p);
  const double J = p.j;
  const double D = p.d;
  const double a_minus = 0.5 * (J + 2 * D - (h1 + 2 * h2));
  const double a_plus = 0.5 * (J + 2 * D + (h1 + 2 * h2));
  const double b_minus = -0.5 * h1;
  const double b_plus = 0.5 * h1;
  const double c_plus = -0.5 * (J - 2 * D + (h1 - 2 * h2));
  const double c_minus = -0.5 * (J - 2 * D - (h1 - 2 * h2));
  const double nu = J * p.delta / std::sqrt(2.0);

  const std::array<double, 6> diag = {a_minus, b_minus, c_plus, c_minus, b_plus, a_plus};
  ComplexMatrix h = ComplexMatrix::diagonal(diag);
  h(1, 3) = h(3, 1) = nu;
  h(2, 4) = h(4, 2) = nu;
  return h;
}

using StateVector = std::array<cplx, 6>;

struct AnalyticSpectrum {
  std::array<double, 6> energies{};          // E1..E6, closed-form order
  std::array<StateVector, 6> eigenvectors{};  // |phi_1> .. |phi_6>
  double eta_plus = 0.0;
  double eta_minus = 0.0;
  double c1_plus = 0.0;
  double c1_minus = 0.0;
  double c2_plus = 0.0;
  double c2_minus = 0.0;
  // Set when eta < 1e-12: the 2x2 block is proportional to the identity and
  // the mixing coefficients fall back to 1/sqrt(2).
  bool degenerate_minus = false;
  bool degenerate_plus = false;

  [[nodiscard]] double min_energy() const {
    double m = energies[0];
    for (double e : energies) m = std::min(m, e);
    return m;
  }
};

namespace detail {

/// Mixing coefficients (c+, c-) with c+- = sqrt((1 +- r/eta)/2), where
/// eta = sqrt(r^2 + 8 (J Delta)^2). The smaller coefficient is evaluated in
/// the cancellation-free form 2|J Delta| / sqrt(eta (eta + |r|)).
inline std::pair<double, double> mixing(double r, double eta, double jd) {
  const double big = std::sqrt((eta + std::abs(r)) / (2.0 * eta));
  const double small = 2.0 * std::abs(jd) / std::sqrt(eta * (eta + std::abs(r)));
  return r >= 0.0 ? std::pair{big, small} : std::pair{small, big};
}

}  // namespace detail

inline AnalyticSpectrum analytic_spectrum(const DimerParams& p) {
  p.validate();
  const auto [h1, h2] = zeeman_fields(p);
  const double J = p.j;
  const double D = p.d;
  const double jd = J * p.delta;
  const double r_minus = J - 2 * D - 2 * (h1 - h2);
  const double r_plus = J - 2 * D + 2 * (h1 - h2);

  AnalyticSpectrum s;
  s.eta_minus = std::sqrt(r_minus * r_minus + 8 * jd * jd);
  s.eta_plus = std::sqrt(r_plus * r_plus + 8 * jd * jd);

  s.energies[0] = 0.5 * (J + 2 * D - (h1 + 2 * h2));
  s.energies[1] = 0.5 * (J + 2 * D + (h1 + 2 * h2));
  s.energies[2] = -0.25 * (J - 2 * D + 2 * h2) - 0.25 * s.eta_minus;
  s.energies[3] = -0.25 * (J - 2 * D + 2 * h2) + 0.25 * s.eta_minus;
  s.energies[4] = -0.25 * (J - 2 * D - 2 * h2) - 0.25 * s.eta_plus;
  s.energies[5] = -0.25 * (J - 2 * D - 2 * h2) + 0.25 * s.eta_plus;

  constexpr double kEtaFloor = 1e-12;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  s.degenerate_minus = s.eta_minus < kEtaFloor;
  s.degenerate_plus = s.eta_plus < kEtaFloor;
  std::tie(s.c1_plus, s.c1_minus) =
      s.degenerate_minus ? std::pair{inv_sqrt2, inv_sqrt2} : detail::mixing(r_minus, s.eta_minus, jd);
  std::tie(s.c2_plus, s.c2_minus) =
      s.degenerate_plus ? std::pair{inv_sqrt2, inv_sqrt2} : detail::mixing(r_plus, s.eta_plus, jd);

  // A negative coherence J Delta flips the relative sign inside each doublet.
  const double sg = jd < 0.0 ? -1.0 : 1.0;
  auto& v = s.eigenvectors;
  v = {};
  v[0][0] = 1.0;                        // |1/2,1>
  v[1][5] = 1.0;                        // |-1/2,-1>
  v[2][1] = s.c1_minus;                 // c1- |1/2,0> - c1+ |-1/2,1>
  v[2][3] = -sg * s.c1_plus;
  v[3][1] = s.c1_plus;                  // c1+ |1/2,0> + c1- |-1/2,1>
  v[3][3] = sg * s.c1_minus;
  v[4][2] = s.c2_plus;                  // c2+ |1/2,-1> - c2- |-1/2,0>
  v[4][4] = -sg * s.c2_minus;
  v[5][2] = s.c2_minus;                 // c2- |1/2,-1> + c2+ |-1/2,0>
  v[5][4] = sg * s.c2_plus;
  return s;
}

}  // namespace spindimer
