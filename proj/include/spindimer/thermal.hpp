#pragma once

// Gibbs state of the dimer, built from the closed-form matrix elements and,
// independently, from the spectral sum over the analytic eigenpairs.
//
// All Boltzmann factors are evaluated relative to the ground energy, i.e.
// exp(-beta (E - E_min)), so low temperatures in Kelvin never overflow. The
// partition function itself is carried as log Z.

#include <cmath>
#include <string>

#include "spindimer/error.hpp"
#include "spindimer/matrix.hpp"
#include "spindimer/model.hpp"

namespace spindimer {

struct ThermalState {
  ComplexMatrix rho;
  double log_partition = 0.0;
  double beta = 0.0;
  DimerParams params;

  /// Z itself; +inf when log Z exceeds the double range.
  [[nodiscard]] double partition() const { return std::exp(log_partition); }
  [[nodiscard]] double purity() const { return hs_inner(rho, rho); }
};

inline double inverse_temperature(double temperature) {
  if (!(temperature > 0.0) || !std::isfinite(temperature))
    throw NonPositiveTemperature("temperature must be positive and finite, got " +
                                 std::to_string(temperature));
  return 1.0 / temperature;
}

namespace detail {

/// Shift-stabilized exponential: exp(x + beta E_min).
struct ShiftedExp {
  double shift;
  double operator()(double x) const { return std::exp(x + shift); }
};

/// sinh(y)/eta, continuous through eta = 0 where it tends to beta/4.
/// Extreme parameters can overflow intermediate energies even though the
/// Boltzmann factors themselves are shifted.
inline void require_finite(const ThermalState& ts) {
  bool finite = std::isfinite(ts.log_partition);
  for (const cplx& v : ts.rho.entries()) finite = finite && std::isfinite(v.real()) && std::isfinite(v.imag());
  if (!finite) throw NotAState("thermal state overflowed; parameters out of representable range");
}

inline double sinh_over_eta(double y, double eta, double beta) {
  return eta < 1e-12 ? beta / 4.0 : std::sinh(y) / eta;
}

/// r/eta, where |r| <= eta; defined as 0 on a degenerate block.
inline double ratio_over_eta(double r, double eta) { return eta < 1e-12 ? 0.0 : r / eta; }

/// Z exp(beta E_min) from the closed-form partition function
///   Z = 2 [ e^{-b(J+2D)/2} cosh(b(h1+2h2)/2)
///           + e^{b(J-2D)/4} ( e^{b h2/2} cosh(b eta-/4) + e^{-b h2/2} cosh(b eta+/4) ) ],
/// with each cosh expanded into shifted exponentials.
inline double shifted_partition(const DimerParams& p, double beta, const AnalyticSpectrum& s) {
  const auto [h1, h2] = zeeman_fields(p);
  const double J = p.j;
  const double D = p.d;
  const ShiftedExp e{beta * s.min_energy()};
  auto cosh_term = [&](double prefactor_exponent, double y) {
    return 0.5 * (e(prefactor_exponent + y) + e(prefactor_exponent - y));
  };
  const double a = -beta * (J + 2 * D) / 2.0;
  const double c = beta * (J - 2 * D) / 4.0;
  return 2.0 * (cosh_term(a, beta * (h1 + 2 * h2) / 2.0) +
                cosh_term(c + beta * h2 / 2.0, beta * s.eta_minus / 4.0) +
                cosh_term(c - beta * h2 / 2.0, beta * s.eta_plus / 4.0));
}

}  // namespace detail

/// log Z from the closed-form partition function.
inline double log_partition_function(const DimerParams& p, double temperature) {
  const double beta = inverse_temperature(temperature);
  const AnalyticSpectrum s = analytic_spectrum(p);
  return std::log(detail::shifted_partition(p, beta, s)) - beta * s.min_energy();
}

inline double partition_function(const DimerParams& p, double temperature) {
  return std::exp(log_partition_function(p, temperature));
}

/// Gibbs state populated element by element from the closed-form entries
/// rho_11 .. rho_66, rho_24, rho_35 (1-indexed), each already carrying 1/Z.
inline ThermalState gibbs_state_analytic(const DimerParams& p, double temperature) {
  const double beta = inverse_temperature(temperature);
  const AnalyticSpectrum s = analytic_spectrum(p);
  const auto [h1, h2] = zeeman_fields(p);
  const double J = p.j;
  const double D = p.d;
  const double jd = J * p.delta;
  const double r_minus = J - 2 * D - 2 * (h1 - h2);
  const double r_plus = J - 2 * D + 2 * (h1 - h2);

  const detail::ShiftedExp e{beta * s.min_energy()};
  const double z = detail::shifted_partition(p, beta, s);

  // e^{x} cosh(y) and e^{x} sinh(y), shifted.
  auto ecosh = [&](double x, double y) { return 0.5 * (e(x + y) + e(x - y)); };
  auto esinh = [&](double x, double y) { return 0.5 * (e(x + y) - e(x - y)); };

  const double x_minus = beta / 4.0 * (J - 2 * D + 2 * h2);
  const double x_plus = beta / 4.0 * (J - 2 * D - 2 * h2);
  const double y_minus = beta * s.eta_minus / 4.0;
  const double y_plus = beta * s.eta_plus / 4.0;
  const double q_minus = detail::ratio_over_eta(r_minus, s.eta_minus);
  const double q_plus = detail::ratio_over_eta(r_plus, s.eta_plus);

  const double r11 = e(-beta / 2.0 * (J + 2 * D - (h1 + 2 * h2)));
  const double r66 = e(-beta / 2.0 * (J + 2 * D + (h1 + 2 * h2)));
  const double r22 = ecosh(x_minus, y_minus) - q_minus * esinh(x_minus, y_minus);
  const double r44 = ecosh(x_minus, y_minus) + q_minus * esinh(x_minus, y_minus);
  const double r33 = ecosh(x_plus, y_plus) + q_plus * esinh(x_plus, y_plus);
  const double r55 = ecosh(x_plus, y_plus) - q_plus * esinh(x_plus, y_plus);
  // sqrt(8) J Delta sinh(y) / eta, with sinh(y)/eta regular at eta -> 0.
  auto coherence = [&](double x, double y, double eta) {
    const double esinh_over_eta =
        eta < 1e-12 ? e(x) * detail::sinh_over_eta(y, eta, beta) : esinh(x, y) / eta;
    return -std::sqrt(8.0) * jd * esinh_over_eta;
  };
  const double r24 = coherence(x_minus, y_minus, s.eta_minus);
  const double r35 = coherence(x_plus, y_plus, s.eta_plus);

  ThermalState ts;
  ts.rho = ComplexMatrix(6, 6);
  ts.rho(0, 0) = r11 / z;
  ts.rho(1, 1) = r22 / z;
  ts.rho(2, 2) = r33 / z;
  ts.rho(3, 3) = r44 / z;
  ts.rho(4, 4) = r55 / z;
  ts.rho(5, 5) = r66 / z;
  ts.rho(1, 3) = ts.rho(3, 1) = r24 / z;
  ts.rho(2, 4) = ts.rho(4, 2) = r35 / z;
  ts.log_partition = std::log(z) - beta * s.min_energy();
  ts.beta = beta;
  ts.params = p;
  detail::require_finite(ts);
  return ts;
}

/// Gibbs state as Z^{-1} sum_i e^{-beta E_i} |phi_i><phi_i|.
inline ThermalState gibbs_state_spectral(const DimerParams& p, double temperature) {
  const double beta = inverse_temperature(temperature);
  const AnalyticSpectrum s = analytic_spectrum(p);
  const double e_min = s.min_energy();

  double z = 0.0;
  ComplexMatrix rho(6, 6);
  for (std::size_t k = 0; k < 6; ++k) {
    const double w = std::exp(-beta * (s.energies[k] - e_min));
    z += w;
    rho += w * outer(s.eigenvectors[k]);
  }
  rho *= 1.0 / z;

  ThermalState ts;
  ts.rho = std::move(rho);
  ts.log_partition = std::log(z) - beta * e_min;
  ts.beta = beta;
  ts.params = p;
  detail::require_finite(ts);
  return ts;
}

}  // namespace spindimer
