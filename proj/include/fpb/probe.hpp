#pragma once

// Fuchs-Peres-Brandt probe: Eve's target-qubit states and the CNOT action.
//
// Probe kets live in the {|+>, |->} basis of the target qubit. Two-qubit kets
// are carrier (x) probe with the carrier expressed in the sending basis:
// index = 2 * carrier + probe, carrier 0 = |h> or |r>, carrier 1 = |v> or |l>.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fpb/linalg.hpp"

namespace fpb {

inline constexpr double kMaxErrorRate = 1.0 / 3.0;

/// Induced bit error rate P_E of the probe, validated to [0, 1/3].
class ProbeConfig {
 public:
  explicit ProbeConfig(double error_rate) : error_rate_(error_rate) {
    if (!(error_rate >= 0.0 && error_rate <= kMaxErrorRate + 1e-12)) {
      throw std::invalid_argument("error rate must lie in [0, 1/3], got " + std::to_string(error_rate));
    }
    error_rate_ = std::min(error_rate, kMaxErrorRate);
  }

  double error_rate() const { return error_rate_; }

  /// Amplitude of |+> in the initial probe state.
  double c() const { return std::sqrt(1.0 - 2.0 * error_rate_); }
  /// Amplitude of |-> in the initial probe state.
  double s() const { return std::sqrt(2.0 * error_rate_); }

 private:
  double error_rate_;
};

enum class Basis { rectilinear, diagonal };

struct ProbeGeometry {
  double theta;  // radians, in [0, pi/4]
  double overlap;  // cos 2 theta = <t+|t-> / (1 - P_E)
  ComplexVec t_plus;
  ComplexVec t_minus;
  ComplexVec t_err;
};

/// Initial probe ket c|+> + s|->.
inline ComplexVec probe_input(const ProbeConfig& cfg) { return ComplexVec{cfg.c(), cfg.s()}; }

/// Half the angle between the normalized probe outputs t_+ and t_-.
inline double theta_from_error_rate(const ProbeConfig& cfg) {
  const double pe = cfg.error_rate();
  const double cos2 = (1.0 - 3.0 * pe) / (1.0 - pe);
  const double sin2 = std::sqrt(4.0 * pe * (1.0 - 2.0 * pe)) / (1.0 - pe);
  return std::clamp(0.5 * std::atan2(sin2, cos2), 0.0, std::numbers::pi / 4.0);
}

inline ProbeGeometry probe_geometry(const ProbeConfig& cfg) {
  const double c = cfg.c();
  const double half = cfg.s() / std::numbers::sqrt2;
  const double theta = theta_from_error_rate(cfg);
  return ProbeGeometry{
      .theta = theta,
      .overlap = std::cos(2.0 * theta),
      .t_plus = ComplexVec{c, half},
      .t_minus = ComplexVec{c, -half},
      .t_err = ComplexVec{0.0, half},
  };
}

/// Two-qubit output of Eve's CNOT for Alice's carrier (basis, bit).
///
///   rectilinear 0: |h>|t+> + |v>|tE>     diagonal 0: |r>|t+> - |l>|tE>
///   rectilinear 1: |v>|t-> + |h>|tE>     diagonal 1: |l>|t-> - |r>|tE>
inline ComplexVec cnot_action(Basis basis, int bit, const ProbeConfig& cfg) {
  if (bit != 0 && bit != 1) throw std::invalid_argument("bit must be 0 or 1");
  const ProbeGeometry g = probe_geometry(cfg);
  const double flip_sign = basis == Basis::rectilinear ? 1.0 : -1.0;
  const ComplexVec& kept = bit == 0 ? g.t_plus : g.t_minus;
  const ComplexVec flipped = g.t_err.scaled(flip_sign);
  const int other = 1 - bit;
  ComplexVec out(4);
  for (std::size_t k = 0; k < 2; ++k) {
    out[2 * static_cast<std::size_t>(bit) + k] = kept[k];
    out[2 * static_cast<std::size_t>(other) + k] = flipped[k];
  }
  return out;
}

}  // namespace fpb
