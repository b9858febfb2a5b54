#pragma once

// Measurement-induced nonlocality on qubit-qutrit states.
//
// Measurements act on the qubit. For a state whose qubit marginal has a
// nonzero Bloch vector x the only marginal-preserving projective measurement
// is along x, so both MIN variants are evaluated directly at that
// measurement. When x = 0 every qubit measurement preserves the marginal and
// the extremum over the Bloch sphere is taken.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spindimer/error.hpp"
#include "spindimer/matrix.hpp"

namespace spindimer {

/// ||x|| at or below this value selects the x = 0 branch.
inline constexpr double kZeroBlochTol = 1e-9;
inline constexpr double kTraceTol = 1e-10;

namespace basis {

inline ComplexMatrix pauli(std::size_t k) {
  switch (k) {
    case 0: return ComplexMatrix::identity(2);
    case 1: return {{0.0, 1.0}, {1.0, 0.0}};
    case 2: return {{0.0, cplx{0.0, -1.0}}, {cplx{0.0, 1.0}, 0.0}};
    case 3: return {{1.0, 0.0}, {0.0, -1.0}};
    default: throw DimensionMismatch("pauli index out of range");
  }
}

/// Standard Gell-Mann matrices lambda_1 .. lambda_8.
inline const std::array<ComplexMatrix, 8>& gell_mann() {
  static const std::array<ComplexMatrix, 8> lambda = [] {
    const cplx i{0.0, 1.0};
    const double r3 = 1.0 / std::sqrt(3.0);
    return std::array<ComplexMatrix, 8>{
        ComplexMatrix{{0, 1, 0}, {1, 0, 0}, {0, 0, 0}},
        ComplexMatrix{{0, -i, 0}, {i, 0, 0}, {0, 0, 0}},
        ComplexMatrix{{1, 0, 0}, {0, -1, 0}, {0, 0, 0}},
        ComplexMatrix{{0, 0, 1}, {0, 0, 0}, {1, 0, 0}},
        ComplexMatrix{{0, 0, -i}, {0, 0, 0}, {i, 0, 0}},
        ComplexMatrix{{0, 0, 0}, {0, 0, 1}, {0, 1, 0}},
        ComplexMatrix{{0, 0, 0}, {0, 0, -i}, {0, i, 0}},
        ComplexMatrix{{r3, 0, 0}, {0, r3, 0}, {0, 0, -2 * r3}},
    };
  }();
  return lambda;
}

}  // namespace basis

/// {I, sigma_x, sigma_y, sigma_z} / sqrt(2).
inline const std::array<ComplexMatrix, 4>& operator_basis_qubit() {
  static const std::array<ComplexMatrix, 4> xs = [] {
    std::array<ComplexMatrix, 4> r;
    for (std::size_t k = 0; k < 4; ++k) r[k] = basis::pauli(k) * (1.0 / std::sqrt(2.0));
    return r;
  }();
  return xs;
}

/// Y_0 = I/sqrt(3), Y_k = lambda_k / sqrt(2): orthonormal under Tr(Y_i Y_j).
inline const std::array<ComplexMatrix, 9>& operator_basis_qutrit() {
  static const std::array<ComplexMatrix, 9> ys = [] {
    std::array<ComplexMatrix, 9> r;
    r[0] = ComplexMatrix::identity(3) * (1.0 / std::sqrt(3.0));
    for (std::size_t k = 0; k < 8; ++k) r[k + 1] = basis::gell_mann()[k] * (1.0 / std::sqrt(2.0));
    return r;
  }();
  return ys;
}

namespace detail {

inline const std::array<std::array<ComplexMatrix, 9>, 4>& product_basis() {
  static const auto prods = [] {
    std::array<std::array<ComplexMatrix, 9>, 4> r;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 9; ++j) r[i][j] = kron(operator_basis_qubit()[i], operator_basis_qutrit()[j]);
    return r;
  }();
  return prods;
}

}  // namespace detail

/// Gate for density-matrix inputs: 6x6, Hermitian, unit trace.
inline void require_state(const ComplexMatrix& rho, std::string_view what) {
  if (rho.rows() != kPairDim || rho.cols() != kPairDim)
    throw NotAState(std::string(what) + ": expected a 6x6 density matrix");
  for (const cplx& v : rho.entries())
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw NotAState(std::string(what) + ": density matrix has non-finite entries");
  if (!rho.is_hermitian()) throw NotAState(std::string(what) + ": density matrix is not Hermitian");
  if (std::abs(rho.trace() - cplx{1.0, 0.0}) > kTraceTol)
    throw NotAState(std::string(what) + ": density matrix does not have unit trace");
}

/// Expansion rho = sum_ij gamma_ij X_i (x) Y_j over the orthonormal bases above.
///
/// x_i = Tr(rho sigma_i (x) I) and y_j = Tr(rho I (x) lambda_j) are the usual
/// unnormalized Bloch vectors. The correlation block t is taken in the
/// orthonormal scaling, t_ij = gamma_ij (i = 1..3, j = 1..8), which makes
/// ||rho - Pi(rho)||^2 = Tr(t t^T) - n^T t t^T n with no extra prefactor.
struct BlochDecomposition {
  std::array<double, 3> x{};
  std::array<double, 8> y{};
  std::array<std::array<double, 8>, 3> t{};
  std::array<std::array<double, 9>, 4> gamma{};

  [[nodiscard]] double x_norm() const { return std::hypot(x[0], x[1], x[2]); }

  /// t t^T as a 3x3 real symmetric matrix.
  [[nodiscard]] std::array<std::array<double, 3>, 3> ttt() const {
    std::array<std::array<double, 3>, 3> m{};
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b)
        for (std::size_t j = 0; j < 8; ++j) m[a][b] += t[a][j] * t[b][j];
    return m;
  }

  [[nodiscard]] ComplexMatrix reconstruct() const {
    ComplexMatrix r(kPairDim, kPairDim);
    const auto& prods = detail::product_basis();
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 9; ++j) r += prods[i][j] * gamma[i][j];
    return r;
  }
};

inline BlochDecomposition bloch_decomposition(const ComplexMatrix& rho) {
  require_state(rho, "bloch_decomposition");
  BlochDecomposition b;
  const auto& prods = detail::product_basis();
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 9; ++j) b.gamma[i][j] = hs_inner(rho, prods[i][j]);
  const double x_scale = std::sqrt(6.0);  // X_i (x) Y_0 = sigma_i (x) I / sqrt(6)
  for (std::size_t i = 0; i < 3; ++i) b.x[i] = x_scale * b.gamma[i + 1][0];
  for (std::size_t j = 0; j < 8; ++j) b.y[j] = 2.0 * b.gamma[0][j + 1];  // X_0 (x) Y_j = I (x) lambda / 2
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 8; ++j) b.t[i][j] = b.gamma[i + 1][j + 1];
  return b;
}

/// Two-outcome projective qubit measurement {(I + n.sigma)/2, (I - n.sigma)/2}.
struct ProjectiveMeasurement {
  std::array<double, 3> n{0.0, 0.0, 1.0};

  static ProjectiveMeasurement along(std::array<double, 3> v) {
    const double len = std::hypot(v[0], v[1], v[2]);
    if (!(len > 0.0)) throw InvalidParameter("measurement direction must be nonzero");
    return {{v[0] / len, v[1] / len, v[2] / len}};
  }

  static ProjectiveMeasurement from_angles(double theta, double phi) {
    return {{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)}};
  }

  /// Projector for outcome sign = +1 or -1.
  [[nodiscard]] ComplexMatrix projector(int sign) const {
    const double s = sign >= 0 ? 0.5 : -0.5;
    return {{0.5 + s * n[2], s * cplx{n[0], -n[1]}}, {s * cplx{n[0], n[1]}, 0.5 - s * n[2]}};
  }
};

enum class Branch { x_nonzero, x_zero };

inline std::string_view to_string(Branch b) { return b == Branch::x_zero ? "x_zero" : "x_nonzero"; }

/// Marginal-preserving measurements on the qubit. x_nonzero carries the single
/// admissible measurement; x_zero stands for the whole Bloch sphere.
struct MeasurementFamily {
  Branch branch = Branch::x_zero;
  std::optional<ProjectiveMeasurement> unique;
};

inline MeasurementFamily locally_invariant_measurements(const ComplexMatrix& rho,
                                                        double tol = kZeroBlochTol) {
  const BlochDecomposition b = bloch_decomposition(rho);
  if (b.x_norm() > tol) return {Branch::x_nonzero, ProjectiveMeasurement::along(b.x)};
  return {Branch::x_zero, std::nullopt};
}

/// sum_k (P_k (x) I) rho (P_k (x) I), evaluated on 3x3 blocks.
inline ComplexMatrix apply_measurement(const ComplexMatrix& rho, const ProjectiveMeasurement& m) {
  require_pair_operator(rho, "apply_measurement");
  ComplexMatrix out(kPairDim, kPairDim);
  for (int sign : {+1, -1}) {
    const ComplexMatrix p = m.projector(sign);
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t c = 0; c < 2; ++c) {
        // block(a, c) += sum_{a', c'} P(a, a') rho_block(a', c') P(c', c)
        for (std::size_t ap = 0; ap < 2; ++ap)
          for (std::size_t cp = 0; cp < 2; ++cp) {
            const cplx w = p(a, ap) * p(cp, c);
            if (w == cplx{}) continue;
            for (std::size_t b = 0; b < 3; ++b)
              for (std::size_t d = 0; d < 3; ++d) out(3 * a + b, 3 * c + d) += w * rho(3 * ap + b, 3 * cp + d);
          }
      }
  }
  return out;
}

/// Tr(rho sigma)^2 / (Tr rho^2 Tr sigma^2).
inline double fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  require_state(rho, "fidelity");
  require_state(sigma, "fidelity");
  const double overlap = hs_inner(rho, sigma);
  const double f = overlap * overlap / (hs_inner(rho, rho) * hs_inner(sigma, sigma));
  return std::clamp(f, 0.0, 1.0);
}

inline double hs_distance_squared(const ComplexMatrix& a, const ComplexMatrix& b) {
  const double n = (a - b).frobenius_norm();
  return n * n;
}

enum class Objective { hs, fidelity };

struct GridResolution {
  std::size_t phi = 360;
  std::size_t theta = 180;
};

struct OracleResult {
  double value = 0.0;  // max ||rho - Pi(rho)||^2, or min F(rho, Pi(rho))
  ProjectiveMeasurement best;
  std::vector<double> history;  // running optimum after the grid and after each refinement pass
};

/// Brute-force extremization of a measurement objective over marginal-
/// preserving measurements. On the x = 0 branch a (theta, phi) grid covers a
/// hemisphere (n and -n define the same measurement) at the stated angular
/// spacing, followed by golden-section passes along two tangent directions
/// at the running optimum.
inline OracleResult brute_force_measurement_oracle(const ComplexMatrix& rho, Objective objective,
                                                   GridResolution grid = {}) {
  require_state(rho, "brute_force_measurement_oracle");
  const double purity = hs_inner(rho, rho);
  // Larger score is better for both objectives.
  auto score = [&](const ProjectiveMeasurement& m) {
    const ComplexMatrix post = apply_measurement(rho, m);
    if (objective == Objective::hs) return hs_distance_squared(rho, post);
    const double overlap = hs_inner(rho, post);
    return -(overlap * overlap) / (purity * hs_inner(post, post));
  };
  auto to_value = [&](double s) { return objective == Objective::hs ? s : -s; };

  OracleResult res;
  const MeasurementFamily family = locally_invariant_measurements(rho);
  if (family.branch == Branch::x_nonzero) {
    res.best = *family.unique;
    res.value = to_value(score(res.best));
    res.history.push_back(res.value);
    return res;
  }

  if (grid.phi < 1 || grid.theta < 2) throw InvalidParameter("oracle grid resolution too small");
  const double pi = std::numbers::pi;
  const std::size_t n_theta = grid.theta / 2;
  const double d_theta = pi / static_cast<double>(grid.theta);
  const double d_phi = 2.0 * pi / static_cast<double>(grid.phi);

  ProjectiveMeasurement best = ProjectiveMeasurement::from_angles(0.0, 0.0);
  double best_score = score(best);
  for (std::size_t it = 1; it <= n_theta; ++it) {
    const double theta = d_theta * static_cast<double>(it);
    for (std::size_t ip = 0; ip < grid.phi; ++ip) {
      const auto m = ProjectiveMeasurement::from_angles(theta, d_phi * static_cast<double>(ip));
      const double s = score(m);
      if (s > best_score) {
        best_score = s;
        best = m;
      }
    }
  }
  res.history.push_back(to_value(best_score));

  // Golden-section line maximization over u in [-h, h] along direction e.
  auto along = [](const std::array<double, 3>& n0, const std::array<double, 3>& e, double u) {
    return ProjectiveMeasurement::along({n0[0] + u * e[0], n0[1] + u * e[1], n0[2] + u * e[2]});
  };
  auto golden = [&](const std::array<double, 3>& n0, const std::array<double, 3>& e, double h) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = -h, hi = h;
    double u1 = hi - inv_phi * (hi - lo), u2 = lo + inv_phi * (hi - lo);
    double s1 = score(along(n0, e, u1)), s2 = score(along(n0, e, u2));
    while (hi - lo > 1e-11) {
      if (s1 < s2) {
        lo = u1;
        u1 = u2;
        s1 = s2;
        u2 = lo + inv_phi * (hi - lo);
        s2 = score(along(n0, e, u2));
      } else {
        hi = u2;
        u2 = u1;
        s2 = s1;
        u1 = hi - inv_phi * (hi - lo);
        s1 = score(along(n0, e, u1));
      }
    }
    return s1 >= s2 ? std::pair{u1, s1} : std::pair{u2, s2};
  };

  double h = std::max(d_theta, d_phi);
  constexpr int kMaxPasses = 40;
  for (int pass = 0; pass < kMaxPasses; ++pass) {
    const auto& n0 = best.n;
    // Orthonormal tangent frame at n0.
    std::array<double, 3> ref = std::abs(n0[2]) < 0.9 ? std::array<double, 3>{0, 0, 1}
                                                       : std::array<double, 3>{1, 0, 0};
    std::array<double, 3> e1{n0[1] * ref[2] - n0[2] * ref[1], n0[2] * ref[0] - n0[0] * ref[2],
                             n0[0] * ref[1] - n0[1] * ref[0]};
    const double l1 = std::hypot(e1[0], e1[1], e1[2]);
    for (double& c : e1) c /= l1;
    const std::array<double, 3> e2{n0[1] * e1[2] - n0[2] * e1[1], n0[2] * e1[0] - n0[0] * e1[2],
                                   n0[0] * e1[1] - n0[1] * e1[0]};
    double moved = 0.0;
    for (const auto& e : {e1, e2}) {
      const auto start = best.n;
      const auto [u, s] = golden(start, e, h);
      if (s > best_score) {
        best_score = s;
        best = along(start, e, u);
        moved = std::max(moved, std::abs(u));
      }
    }
    res.history.push_back(to_value(best_score));
    if (moved < 1e-10) break;
    h = std::max(4.0 * moved, 1e-8);
  }

  res.best = best;
  res.value = to_value(best_score);
  return res;
}

/// Hilbert-Schmidt MIN.
inline double hs_min(const ComplexMatrix& rho) {
  const BlochDecomposition b = bloch_decomposition(rho);
  if (b.x_norm() > kZeroBlochTol) {
    const auto m = ProjectiveMeasurement::along(b.x);
    return hs_distance_squared(rho, apply_measurement(rho, m));
  }
  // Every qubit measurement preserves the marginal: maximize
  // Tr(t t^T) - n^T t t^T n over unit n.
  const auto m = b.ttt();
  ComplexMatrix mm(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) mm(i, j) = m[i][j];
  const double lambda_min = hermitian_eig(mm).eigenvalues.front();
  return std::max(0.0, m[0][0] + m[1][1] + m[2][2] - lambda_min);
}

/// Fidelity-based MIN, 1 - min F(rho, Pi(rho)).
inline double f_min(const ComplexMatrix& rho, GridResolution grid = {}) {
  const MeasurementFamily family = locally_invariant_measurements(rho);
  if (family.branch == Branch::x_nonzero)
    return std::clamp(1.0 - fidelity(rho, apply_measurement(rho, *family.unique)), 0.0, 1.0);
  return std::clamp(1.0 - brute_force_measurement_oracle(rho, Objective::fidelity, grid).value, 0.0, 1.0);
}

/// Closed formula for HS-MIN in terms of x and t:
///   Tr(t t^T) - x^T t t^T x / ||x||^2   (x != 0)
///   Tr(t t^T) - lambda_min(t t^T)        (x = 0)
inline double hs_min_closed_form(const ComplexMatrix& rho) {
  const BlochDecomposition b = bloch_decomposition(rho);
  const auto m = b.ttt();
  const double tr = m[0][0] + m[1][1] + m[2][2];
  const double xn = b.x_norm();
  if (xn > kZeroBlochTol) {
    double q = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) q += b.x[i] * m[i][j] * b.x[j];
    return tr - q / (xn * xn);
  }
  ComplexMatrix mm(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) mm(i, j) = m[i][j];
  return tr - hermitian_eig(mm).eigenvalues.front();
}

/// Closed formula for F-MIN with Gamma = gamma / sqrt(Tr rho^2) (4x9):
///   Tr(Gamma Gamma^T) - Tr(A Gamma Gamma^T A^T),
///     A = [[1, n^T], [1, -n^T]] / sqrt(2), n = x/||x||   (x != 0)
///   Tr(Gc Gc^T) - tau_min(Gc Gc^T), Gc = rows 1..3, columns 1..8 of Gamma   (x = 0)
inline double f_min_closed_form(const ComplexMatrix& rho) {
  const BlochDecomposition b = bloch_decomposition(rho);
  const double purity = hs_inner(rho, rho);
  std::array<std::array<double, 9>, 4> g{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 9; ++j) g[i][j] = b.gamma[i][j] / std::sqrt(purity);

  const double xn = b.x_norm();
  if (xn > kZeroBlochTol) {
    double tr = 0.0;
    for (const auto& row : g)
      for (double v : row) tr += v * v;
    const std::array<double, 3> n{b.x[0] / xn, b.x[1] / xn, b.x[2] / xn};
    double tr_a = 0.0;
    for (double sign : {1.0, -1.0}) {
      // Row of A Gamma: (Gamma_0j + sign * n . Gamma_{1..3,j}) / sqrt(2).
      for (std::size_t j = 0; j < 9; ++j) {
        double v = g[0][j];
        for (std::size_t i = 0; i < 3; ++i) v += sign * n[i] * g[i + 1][j];
        tr_a += 0.5 * v * v;
      }
    }
    return tr - tr_a;
  }
  ComplexMatrix gg(3, 3);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t c = 0; c < 3; ++c) {
      double s = 0.0;
      for (std::size_t j = 1; j < 9; ++j) s += g[a + 1][j] * g[c + 1][j];
      gg(a, c) = s;
    }
  return gg.trace().real() - hermitian_eig(gg).eigenvalues.front();
}

/// (||rho^{T_a}||_1 - 1) / 2, clamped at zero.
inline double negativity(const ComplexMatrix& rho) {
  require_state(rho, "negativity");
  const double n = 0.5 * (trace_norm(partial_transpose_qubit(rho)) - 1.0);
  return std::max(0.0, n);
}

struct MeasureSet {
  bool hs_min = true;
  bool f_min = true;
  bool negativity = true;
};

struct MeasureReport {
  std::optional<double> hs_min;
  std::optional<double> f_min;
  std::optional<double> negativity;
  double purity = 0.0;
  double marginal_bloch_norm = 0.0;
  Branch branch = Branch::x_zero;
};

inline MeasureReport measure_state(const ComplexMatrix& rho, MeasureSet which = {},
                                   GridResolution grid = {}) {
  require_state(rho, "measure_state");
  MeasureReport r;
  r.purity = hs_inner(rho, rho);
  r.marginal_bloch_norm = bloch_decomposition(rho).x_norm();
  r.branch = r.marginal_bloch_norm > kZeroBlochTol ? Branch::x_nonzero : Branch::x_zero;
  if (which.hs_min) r.hs_min = hs_min(rho);
  if (which.f_min) r.f_min = f_min(rho, grid);
  if (which.negativity) r.negativity = negativity(rho);
  return r;
}

}  // namespace spindimer
