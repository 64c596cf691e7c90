#pragma once

// Three-outcome POVM interpolating between unambiguous (IDP) and Helstrom
// discrimination of |theta_+-> = (cos theta, +-sin theta) with equal priors.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fpb/linalg.hpp"

namespace fpb {

inline constexpr double kQuarterPi = std::numbers::pi / 4.0;

/// Discrimination angles: theta of the input states and the offset phi,
/// with gamma = theta + phi in [theta, pi/4].
///
/// theta = 0 (identical inputs) is accepted; all formulas stay finite there.
class DiscriminationConfig {
 public:
  DiscriminationConfig(double theta, double phi) : theta_(theta), phi_(phi) {
    if (!(theta >= 0.0 && theta <= kQuarterPi + 1e-12)) {
      throw std::invalid_argument("theta must lie in [0, pi/4], got " + std::to_string(theta));
    }
    theta_ = std::min(theta, kQuarterPi);
    const double phi_max = kQuarterPi - theta_;
    if (!(phi >= 0.0 && phi <= phi_max + 1e-12)) {
      throw std::invalid_argument("phi must lie in [0, pi/4 - theta], got " + std::to_string(phi));
    }
    phi_ = std::min(phi, phi_max);
  }

  double theta() const { return theta_; }
  double phi() const { return phi_; }
  double gamma() const { return theta_ + phi_; }
  /// cos 2 gamma, in [0, cos 2 theta].
  double eta() const { return std::max(0.0, std::cos(2.0 * gamma())); }

 private:
  double theta_;
  double phi_;
};

/// phi = xi * (pi/4 - theta); xi = 0 is IDP, xi = 1 is Helstrom.
inline double xi_to_phi(double xi, double theta) {
  if (!(xi >= 0.0 && xi <= 1.0)) throw std::invalid_argument("xi must lie in [0, 1], got " + std::to_string(xi));
  return xi * (kQuarterPi - theta);
}

inline DiscriminationConfig config_from_xi(double theta, double xi) {
  return DiscriminationConfig(theta, xi_to_phi(xi, theta));
}

enum class Outcome { plus = 0, minus = 1, inconclusive = 2 };

struct Povm {
  ComplexMat m_plus{2, 2};
  ComplexMat m_minus{2, 2};
  ComplexMat m_inconclusive{2, 2};

  const ComplexMat& operator[](Outcome o) const {
    switch (o) {
      case Outcome::plus: return m_plus;
      case Outcome::minus: return m_minus;
      default: return m_inconclusive;
    }
  }
};

struct OutcomeProbs {
  double q_success;
  double q_error;
  double q_inconclusive;
};

/// Prior probabilities of |theta_+> and |theta_->. Only 1/2, 1/2 is supported.
struct Priors {
  double plus = 0.5;
  double minus = 0.5;
};

/// Unit kets |gamma_+>, |gamma_->, |gamma_?> = |+> spanning the POVM elements.
inline std::array<ComplexVec, 3> povm_kets(double gamma) {
  const double s = std::sin(gamma);
  const double c = std::cos(gamma);
  return {ComplexVec{s, c}, ComplexVec{s, -c}, ComplexVec{1.0, 0.0}};
}

inline Povm build_povm(const DiscriminationConfig& cfg) {
  const double eta = cfg.eta();
  const double norm = 1.0 / (1.0 + eta);
  const auto kets = povm_kets(cfg.gamma());
  return Povm{
      .m_plus = outer_product(kets[0], kets[0]).scaled(norm),
      .m_minus = outer_product(kets[1], kets[1]).scaled(norm),
      .m_inconclusive = outer_product(kets[2], kets[2]).scaled(2.0 * eta * norm),
  };
}

/// Square roots of the POVM elements, used as measurement (Kraus) operators.
inline Povm povm_kraus(const DiscriminationConfig& cfg) {
  const double eta = cfg.eta();
  const double amp = 1.0 / std::sqrt(1.0 + eta);
  const auto kets = povm_kets(cfg.gamma());
  return Povm{
      .m_plus = outer_product(kets[0], kets[0]).scaled(amp),
      .m_minus = outer_product(kets[1], kets[1]).scaled(amp),
      .m_inconclusive = outer_product(kets[2], kets[2]).scaled(std::sqrt(2.0 * eta) * amp),
  };
}

/// Average success, error and inconclusive probabilities.
inline OutcomeProbs outcome_probs(const DiscriminationConfig& cfg, const Priors& priors = {}) {
  if (std::abs(priors.plus - 0.5) > 1e-12 || std::abs(priors.minus - 0.5) > 1e-12) {
    throw std::invalid_argument("only equal priors are supported");
  }
  const double theta = cfg.theta();
  const double phi = cfg.phi();
  const double eta = cfg.eta();
  const double denom = 1.0 + eta;
  const double s = std::sin(2.0 * theta + phi);
  const double e = std::sin(phi);
  const double c = std::cos(theta);
  return OutcomeProbs{
      .q_success = s * s / denom,
      .q_error = e * e / denom,
      .q_inconclusive = 2.0 * eta * c * c / denom,
  };
}

/// Minimum error probability attainable at a given inconclusive rate.
inline double error_lower_bound(double theta, double q_inconclusive) {
  const double c = std::cos(theta);
  const double radicand = 1.0 - q_inconclusive / (c * c);
  if (radicand < -1e-12 || q_inconclusive < -1e-12) {
    throw std::domain_error("inconclusive rate " + std::to_string(q_inconclusive) + " is not attainable at theta " +
                            std::to_string(theta));
  }
  return 0.5 * (1.0 - q_inconclusive - std::sin(2.0 * theta) * std::sqrt(std::max(radicand, 0.0)));
}

/// Outcome probabilities tr(M_i rho) for a qubit density matrix.
inline std::array<double, 3> born_probs(const Povm& povm, const ComplexMat& rho) {
  if (rho.rows() != 2 || rho.cols() != 2) throw std::invalid_argument("density matrix must be 2x2");
  if (!is_hermitian(rho) || !is_psd(rho) || std::abs(rho.trace() - 1.0) > kStructuralTol) {
    throw std::invalid_argument("invalid density matrix");
  }
  std::array<double, 3> out{};
  for (int i = 0; i < 3; ++i) {
    out[i] = std::max(0.0, (povm[static_cast<Outcome>(i)] * rho).trace().real());
  }
  return out;
}

}  // namespace fpb
