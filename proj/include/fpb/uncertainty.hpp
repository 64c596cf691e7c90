#pragma once

// Entropic uncertainty bounds for the three-outcome discrimination POVM,
// obtained by applying two-basis relations to pairs of Naimark extensions.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fpb/discrimination.hpp"
#include "fpb/entropy.hpp"
#include "fpb/linalg.hpp"

namespace fpb {

/// Orthonormal basis of C^3 whose projections onto the first two coordinates
/// realize the POVM at angle gamma. The phase acts on the ancilla coordinate.
struct NaimarkExtension {
  double gamma;
  double phase;
  std::array<ComplexVec, 3> basis;  // order: +, -, ?

  double eta() const { return std::max(0.0, std::cos(2.0 * gamma)); }
};

inline NaimarkExtension naimark_basis(double gamma, double phase) {
  if (!(gamma >= 0.0 && gamma <= kQuarterPi + 1e-12)) {
    throw std::invalid_argument("gamma must lie in [0, pi/4], got " + std::to_string(gamma));
  }
  gamma = std::min(gamma, kQuarterPi);
  const double eta = std::max(0.0, std::cos(2.0 * gamma));
  const double norm = 1.0 / std::sqrt(1.0 + eta);
  const double s = std::sin(gamma) * norm;
  const double c = std::cos(gamma) * norm;
  const Complex ancilla = std::polar(norm, phase);
  return NaimarkExtension{
      .gamma = gamma,
      .phase = phase,
      .basis = {ComplexVec{s, c, std::sqrt(eta) * ancilla}, ComplexVec{s, -c, std::sqrt(eta) * ancilla},
                ComplexVec{std::sqrt(2.0 * eta) * norm, 0.0, -std::sqrt(1.0 - eta) * ancilla}},
  };
}

inline double gamma_from_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in [0, 1], got " + std::to_string(eta));
  return 0.5 * std::acos(eta);
}

/// W_ij = <e1_i | e2_j>.
inline ComplexMat overlap_matrix(const NaimarkExtension& e1, const NaimarkExtension& e2) {
  if (std::abs(e1.gamma - e2.gamma) > 1e-12) throw std::invalid_argument("overlap_matrix requires equal gamma");
  ComplexMat w(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) w(i, j) = inner_product(e1.basis[i], e2.basis[j]);
  return w;
}

namespace detail {

inline std::vector<double> sorted_moduli(const ComplexMat& w) {
  std::vector<double> m;
  for (std::size_t r = 0; r < w.rows(); ++r)
    for (std::size_t c = 0; c < w.cols(); ++c) m.push_back(std::abs(w(r, c)));
  std::sort(m.begin(), m.end(), std::greater<>());
  return m;
}

}  // namespace detail

inline double s_max(const ComplexMat& w) { return max_abs_entry(w); }

/// Second element of the descending multiset of entry moduli.
inline double s_second(const ComplexMat& w) {
  if (w.rows() * w.cols() < 2) throw std::invalid_argument("s_second needs at least two entries");
  return detail::sorted_moduli(w)[1];
}

/// Largest entry modulus strictly below s_max (beyond a relative tolerance);
/// equals s_max when all moduli coincide.
inline double s_second_distinct(const ComplexMat& w, double rel_tol = 1e-9) {
  const auto m = detail::sorted_moduli(w);
  for (double x : m) {
    if (x < m.front() * (1.0 - rel_tol)) return x;
  }
  return m.front();
}

/// Optimized inverse overlap f(eta): three branches joined at 0.2 and 0.5.
inline double overlap_factor(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in [0, 1]");
  if (eta <= 0.2) return (1.0 + eta) / (1.0 - eta);
  if (eta <= 0.5) return std::sqrt((2.0 - eta) / (1.0 - eta));
  return std::sqrt((2.0 - eta) / eta);
}

/// Closed form of zeta_2 at the optimal extensions.
inline double zeta2_closed_form(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in [0, 1]");
  if (eta <= 0.2) return std::sqrt(1.0 + 2.0 * eta - 3.0 * eta * eta) / (1.0 + eta);
  if (eta <= 0.5) return std::sqrt((2.0 - 2.0 * eta) / (2.0 - eta));
  return 1.0 / std::sqrt(2.0 - eta);
}

/// Maassen-Uffink bound 2 log f(eta) on R_alpha(M) + R_beta(M), 1/alpha + 1/beta = 2.
inline double mu_bound(double eta) { return 2.0 * std::log2(overlap_factor(eta)); }

/// Coles-Piani improvement for two bases: -2 log s_max + (1 - s_max) log(s_max / s2).
inline double coles_piani_pair_bound(double smax, double s2) {
  return -2.0 * std::log2(smax) + (1.0 - smax) * std::log2(smax / s2);
}

/// Lower bound on H(M; rho) from the Coles-Piani relation. The correction
/// term is active only for 0 < eta < 0.2 and vanishes at both ends.
inline double coles_piani_bound(double eta) {
  double correction = 0.0;
  if (eta > 0.0 && eta < 0.2) {
    correction = eta / (2.0 * (1.0 + eta)) * std::log2((1.0 - eta) / (4.0 * eta));
  }
  return std::log2(overlap_factor(eta)) + correction;
}

struct PhaseSearch {
  int grid_points = 720;
  double tolerance = 1e-8;
};

struct PhaseOptimum {
  double s_max;
  double phase_a;
  double phase_b;
};

/// Minimizes s_max of the overlap between two Naimark extensions over both
/// phases: exhaustive grid, then compass search from the best grid point
/// until the step falls below the tolerance.
inline PhaseOptimum optimize_s_max(double eta, const PhaseSearch& search = {}) {
  if (search.grid_points < 4) throw std::invalid_argument("phase grid needs at least 4 points");
  const double gamma = gamma_from_eta(eta);
  const double step0 = 2.0 * std::numbers::pi / search.grid_points;
  auto objective = [gamma](double a, double b) {
    return s_max(overlap_matrix(naimark_basis(gamma, a), naimark_basis(gamma, b)));
  };

  std::vector<NaimarkExtension> grid;
  grid.reserve(static_cast<std::size_t>(search.grid_points));
  for (int i = 0; i < search.grid_points; ++i) grid.push_back(naimark_basis(gamma, step0 * i));

  PhaseOptimum best{std::numeric_limits<double>::infinity(), 0.0, 0.0};
  for (int i = 0; i < search.grid_points; ++i) {
    for (int j = 0; j < search.grid_points; ++j) {
      const double v = s_max(overlap_matrix(grid[static_cast<std::size_t>(i)], grid[static_cast<std::size_t>(j)]));
      if (v < best.s_max) best = {v, step0 * i, step0 * j};
    }
  }

  double step = step0;
  while (step >= search.tolerance) {
    bool improved = false;
    const std::array<std::array<double, 2>, 4> moves{{{step, 0.0}, {-step, 0.0}, {0.0, step}, {0.0, -step}}};
    for (const auto& mv : moves) {
      const double v = objective(best.phase_a + mv[0], best.phase_b + mv[1]);
      if (v < best.s_max) {
        best = {v, best.phase_a + mv[0], best.phase_b + mv[1]};
        improved = true;
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

/// zeta_k: largest spectral norm over submatrices with r + r' = k + 1, k = 1..d.
inline std::vector<double> zeta_coefficients(const ComplexMat& w) {
  if (!w.is_square() || !is_unitary(w, 1e-8)) throw std::invalid_argument("zeta_coefficients requires a unitary matrix");
  const std::size_t d = w.rows();
  auto indices = [](unsigned mask) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < kMaxDim; ++i)
      if (mask & (1u << i)) idx.push_back(i);
    return idx;
  };

  std::vector<double> zeta(d, 0.0);
  const unsigned full = 1u << d;
  for (unsigned rmask = 1; rmask < full; ++rmask) {
    const auto rows = indices(rmask);
    for (unsigned cmask = 1; cmask < full; ++cmask) {
      const auto cols = indices(cmask);
      const std::size_t k = rows.size() + cols.size() - 1;
      if (k > d) continue;
      const double norm = k == 1 ? std::abs(w(rows[0], cols[0])) : spectral_norm(w.submatrix(rows, cols));
      zeta[k - 1] = std::max(zeta[k - 1], norm);
    }
  }
  return zeta;
}

/// omega = (zeta_1, zeta_2 - zeta_1, ...) majorizes p (+) q after prepending 1;
/// omega' built from xi_k = (1 + zeta_k)^2 / 4 majorizes p (x) q.
struct MajorizationData {
  std::vector<double> zeta;
  Distribution omega;
  Distribution omega_prime;
};

inline MajorizationData majorization_data(std::span<const double> zeta) {
  if (zeta.empty()) throw std::invalid_argument("empty zeta vector");
  if (std::abs(zeta.back() - 1.0) > 1e-8) throw std::invalid_argument("last zeta coefficient must equal 1");
  for (std::size_t k = 0; k < zeta.size(); ++k) {
    if (!(zeta[k] > 0.0 && zeta[k] <= 1.0 + 1e-8)) throw std::invalid_argument("zeta coefficients must lie in (0, 1]");
    if (k > 0 && zeta[k] < zeta[k - 1] - 1e-12) throw std::invalid_argument("zeta coefficients must be nondecreasing");
  }
  std::vector<double> z(zeta.begin(), zeta.end());
  z.back() = 1.0;
  for (std::size_t k = 1; k < z.size(); ++k) z[k] = std::max(z[k], z[k - 1]);

  std::vector<double> omega(z.size());
  std::vector<double> omega_prime(z.size());
  double prev = 0.0;
  double prev_xi = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    const double xi = 0.25 * (1.0 + z[k]) * (1.0 + z[k]);
    omega[k] = z[k] - prev;
    omega_prime[k] = xi - prev_xi;
    prev = z[k];
    prev_xi = xi;
  }
  return MajorizationData{std::move(z), Distribution(std::move(omega)), Distribution(std::move(omega_prime))};
}

/// Majorization data with zeta = (1/f(eta), zeta_2 closed form, 1).
inline MajorizationData closed_form_majorization(double eta) {
  const std::array<double, 3> zeta{1.0 / overlap_factor(eta), zeta2_closed_form(eta), 1.0};
  return majorization_data(zeta);
}

/// Tensor-product bound: R_alpha(M) >= R_alpha(omega') / 2.
inline double majorization_bound_tensor(const MajorizationData& md, const Order& order) {
  return 0.5 * renyi_entropy(md.omega_prime, order);
}

/// Direct-sum bound: R_alpha(omega) / 2 for alpha <= 1, and
/// log(1/2 + sum omega_i^alpha / 2) / (1 - alpha) for alpha > 1, whose
/// alpha -> infinity limit is 0.
inline double majorization_bound_direct_sum(const MajorizationData& md, const Order& order) {
  if (order.is_shannon() || (order.is_finite() && order.value() <= 1.0)) {
    return 0.5 * renyi_entropy(md.omega, order);
  }
  if (order.is_infinite()) return 0.0;
  const double alpha = order.value();
  return std::log2(0.5 + 0.5 * detail::power_sum(md.omega.probs(), alpha)) / (1.0 - alpha);
}

/// Best majorization lower bound on R_alpha(M; rho). For alpha > 1 both the
/// tensor-product and direct-sum forms apply and the larger is returned; at
/// infinite order this is R_inf(omega') / 2.
inline double majorization_entropy_bound(const MajorizationData& md, const Order& order) {
  if (order.is_shannon() || (order.is_finite() && order.value() <= 1.0)) {
    return majorization_bound_direct_sum(md, order);
  }
  return std::max(majorization_bound_tensor(md, order), majorization_bound_direct_sum(md, order));
}

/// Upper bound on I(B'; E'): H(E') minus the best Shannon lower bound on
/// H(E' | b') from the Coles-Piani and direct-sum majorization relations.
inline double mutual_info_upper_bound(const OutcomeProbs& q, double eta) {
  const double lower = std::max(coles_piani_bound(eta),
                                majorization_entropy_bound(closed_form_majorization(eta), Order::shannon()));
  return eve_outcome_entropy(q) - lower;
}

}  // namespace fpb
