#pragma once

// Cross-check suites behind `spindimer selftest`: closed-form spectrum and
// Gibbs state against their numerical counterparts, and the closed MIN
// formulas against the measurement-based definitions.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "spindimer/matrix.hpp"
#include "spindimer/measures.hpp"
#include "spindimer/model.hpp"
#include "spindimer/thermal.hpp"

namespace spindimer {

/// Random dimensionless draw: J in [0.1, 2], Delta in [0, 2], D/J in [-2, 2],
/// g in [1.8, 2.4], mu_B B in [b_lo, b_hi].
inline DimerParams random_params(std::mt19937_64& rng, double b_lo = 0.0, double b_hi = 3.0) {
  auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  DimerParams p;
  p.j = u(0.1, 2.0);
  p.delta = u(0.0, 2.0);
  p.d = u(-2.0, 2.0) * p.j;
  p.g1 = u(1.8, 2.4);
  p.g2 = u(1.8, 2.4);
  p.b = b_hi > b_lo ? u(b_lo, b_hi) : b_lo;
  return p;
}

inline double random_temperature(std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(0.05, 5.0)(rng);
}

struct SuiteResult {
  std::string name;
  std::size_t passed = 0;
  std::size_t total = 0;
  double worst = 0.0;  // largest observed deviation
  double tolerance = 0.0;

  [[nodiscard]] bool ok() const { return passed == total; }
  void record(double deviation) {
    ++total;
    worst = std::max(worst, deviation);
    if (deviation <= tolerance) ++passed;
  }
};

struct SelftestReport {
  std::vector<SuiteResult> suites;
  [[nodiscard]] bool ok() const {
    return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.ok(); });
  }
};

inline SelftestReport run_selftest(GridResolution grid = {}, std::uint64_t seed = 20240501) {
  std::mt19937_64 rng(seed);
  SelftestReport rep;

  SuiteResult spectrum{"spectrum: closed form vs Jacobi", 0, 0, 0.0, 1e-10};
  SuiteResult gibbs{"gibbs: closed-form elements vs spectral sum", 0, 0, 0.0, 1e-10};
  SuiteResult zsum{"partition function vs spectral sum (relative)", 0, 0, 0.0, 1e-10};
  for (int k = 0; k < 1000; ++k) {
    const DimerParams p = random_params(rng);
    const double t = random_temperature(rng);
    const AnalyticSpectrum s = analytic_spectrum(p);
    std::vector<double> e(s.energies.begin(), s.energies.end());
    std::sort(e.begin(), e.end());
    const std::vector<double> num = hermitian_eig(build_hamiltonian(p)).eigenvalues;
    double dev = 0.0;
    for (std::size_t i = 0; i < 6; ++i) dev = std::max(dev, std::abs(e[i] - num[i]));
    spectrum.record(dev);

    gibbs.record(max_abs_diff(gibbs_state_analytic(p, t).rho, gibbs_state_spectral(p, t).rho));

    double direct = 0.0;
    for (double ei : s.energies) direct += std::exp(-ei / t);
    zsum.record(std::abs(partition_function(p, t) - direct) / direct);
  }
  rep.suites.push_back(spectrum);
  rep.suites.push_back(gibbs);
  rep.suites.push_back(zsum);

  SuiteResult hs_x{"hs_min closed form vs definition, x != 0", 0, 0, 0.0, 1e-10};
  SuiteResult f_x{"f_min closed form vs definition, x != 0", 0, 0, 0.0, 1e-10};
  for (int k = 0; k < 200; ++k) {
    const DimerParams p = random_params(rng, 0.05, 3.0);
    const ComplexMatrix rho = gibbs_state_analytic(p, random_temperature(rng)).rho;
    hs_x.record(std::abs(hs_min_closed_form(rho) - hs_min(rho)));
    f_x.record(std::abs(f_min_closed_form(rho) - f_min(rho, grid)));
  }
  rep.suites.push_back(hs_x);
  rep.suites.push_back(f_x);

  SuiteResult hs_0{"hs_min eigenvalue branch vs grid oracle, x = 0", 0, 0, 0.0, 1e-6};
  SuiteResult f_0{"f_min eigenvalue branch vs grid oracle, x = 0", 0, 0, 0.0, 1e-6};
  for (int k = 0; k < 50; ++k) {
    const DimerParams p = random_params(rng, 0.0, 0.0);
    const ComplexMatrix rho = gibbs_state_analytic(p, random_temperature(rng)).rho;
    hs_0.record(std::abs(hs_min_closed_form(rho) - brute_force_measurement_oracle(rho, Objective::hs, grid).value));
    f_0.record(std::abs(f_min_closed_form(rho) -
                        (1.0 - brute_force_measurement_oracle(rho, Objective::fidelity, grid).value)));
  }
  rep.suites.push_back(hs_0);
  rep.suites.push_back(f_0);
  return rep;
}

}  // namespace spindimer
