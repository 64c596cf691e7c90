#pragma once

// Seeded Monte-Carlo BB84 session with the FPB probe and generalized
// discrimination on Eve's side.
//
// Each round draws from its own SplitMix64 substream keyed by (seed, round),
// so a tally does not depend on how rounds are split across threads.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "fpb/discrimination.hpp"
#include "fpb/entropy.hpp"
#include "fpb/probe.hpp"
#include "fpb/rng.hpp"

namespace fpb {

enum class MeasurementOrder { bob_then_eve, eve_then_bob };

struct SessionConfig {
  std::uint64_t rounds = 1'000'000;
  double error_rate = 0.15;
  double xi = 0.5;
  std::uint64_t seed = 42;
  unsigned threads = 1;
  MeasurementOrder order = MeasurementOrder::bob_then_eve;

  void validate() const {
    if (rounds < 1) throw std::invalid_argument("rounds must be at least 1");
    if (threads < 1) throw std::invalid_argument("threads must be at least 1");
    if (!(xi >= 0.0 && xi <= 1.0)) throw std::invalid_argument("xi must lie in [0, 1]");
    ProbeConfig{error_rate};
  }
};

/// Round counts indexed by (basis match, Bob correct, Alice's bit, Eve's outcome).
class SessionTally {
 public:
  std::uint64_t count(bool basis_match, bool bob_correct, int alice_bit, Outcome eve) const {
    return counts_[index(basis_match, bob_correct, alice_bit, eve)];
  }

  void record(bool basis_match, bool bob_correct, int alice_bit, Outcome eve, std::uint64_t n = 1) {
    counts_[index(basis_match, bob_correct, alice_bit, eve)] += n;
  }

  std::uint64_t rounds() const {
    std::uint64_t n = 0;
    for (auto c : counts_) n += c;
    return n;
  }

  /// Rounds with matching bases, optionally restricted by Bob's correctness.
  std::uint64_t sifted() const { return sum_matching(true, true) + sum_matching(true, false); }
  std::uint64_t sifted_errors() const { return sum_matching(true, false); }
  std::uint64_t sifted_correct() const { return sum_matching(true, true); }

  SessionTally& operator+=(const SessionTally& other) {
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
    return *this;
  }

  friend bool operator==(const SessionTally&, const SessionTally&) = default;

 private:
  static std::size_t index(bool basis_match, bool bob_correct, int alice_bit, Outcome eve) {
    if (alice_bit != 0 && alice_bit != 1) throw std::invalid_argument("bit must be 0 or 1");
    return ((static_cast<std::size_t>(basis_match) * 2 + static_cast<std::size_t>(bob_correct)) * 2 +
            static_cast<std::size_t>(alice_bit)) * 3 +
           static_cast<std::size_t>(eve);
  }

  std::uint64_t sum_matching(bool basis_match, bool bob_correct) const {
    std::uint64_t n = 0;
    for (int bit = 0; bit < 2; ++bit)
      for (int e = 0; e < 3; ++e) n += count(basis_match, bob_correct, bit, static_cast<Outcome>(e));
    return n;
  }

  std::array<std::uint64_t, 24> counts_{};
};

/// Measurement statistics for one (Alice basis, bit, Bob basis) case, laid
/// out for sequential sampling: the first measurement's marginal, then the
/// second measurement conditioned on the first.
struct RoundStatistics {
  std::array<double, 2> bob;                        // bob-first: p(k)
  std::array<std::array<double, 3>, 2> eve_given_bob;  // p(i | k)
  std::array<double, 3> eve;                        // eve-first: p(i)
  std::array<std::array<double, 2>, 3> bob_given_eve;  // p(k | i)

  /// Joint p(k, i) from either order.
  double joint_bob_first(int k, int i) const { return bob[k] * eve_given_bob[k][i]; }
  double joint_eve_first(int k, int i) const { return eve[i] * bob_given_eve[i][k]; }
};

namespace detail {

// Carrier amplitudes in the other BB84 basis, with r = (h + v)/sqrt2 and
// l = (-h + v)/sqrt2.
inline ComplexVec change_carrier_basis(const ComplexVec& psi, Basis from) {
  const double k = 1.0 / std::numbers::sqrt2;
  ComplexVec out(4);
  for (std::size_t p = 0; p < 2; ++p) {
    const Complex a0 = psi[p];
    const Complex a1 = psi[2 + p];
    if (from == Basis::rectilinear) {
      out[p] = k * (a0 + a1);
      out[2 + p] = k * (-a0 + a1);
    } else {
      out[p] = k * (a0 - a1);
      out[2 + p] = k * (a0 + a1);
    }
  }
  return out;
}

inline double norm2(const ComplexVec& v) {
  const double n = v.norm();
  return n * n;
}

}  // namespace detail

/// Outcome statistics of Bob's carrier measurement and Eve's POVM on the
/// post-CNOT state.
///
/// Bob first: select the carrier branch in Bob's basis, renormalize the
/// probe, apply Eve's POVM. Eve first: apply the Kraus operator sqrt(M_i)
/// to the probe in every branch, then Bob's projective measurement.
inline RoundStatistics round_statistics(Basis alice_basis, int bit, Basis bob_basis, const ProbeConfig& probe,
                                        const DiscriminationConfig& disc) {
  ComplexVec psi = cnot_action(alice_basis, bit, probe);
  if (bob_basis != alice_basis) psi = detail::change_carrier_basis(psi, alice_basis);
  const std::array<ComplexVec, 2> branch{ComplexVec{psi[0], psi[1]}, ComplexVec{psi[2], psi[3]}};

  const Povm povm = build_povm(disc);
  const Povm kraus = povm_kraus(disc);
  RoundStatistics st{};
  for (int k = 0; k < 2; ++k) {
    st.bob[k] = detail::norm2(branch[k]);
    if (st.bob[k] > 0.0) {
      const ComplexVec probe_state = branch[k].normalized();
      for (int i = 0; i < 3; ++i) {
        st.eve_given_bob[k][i] =
            std::max(0.0, inner_product(probe_state, povm[static_cast<Outcome>(i)] * probe_state).real());
      }
    }
  }
  for (int i = 0; i < 3; ++i) {
    std::array<double, 2> w{};
    for (int k = 0; k < 2; ++k) w[k] = detail::norm2(kraus[static_cast<Outcome>(i)] * branch[k]);
    st.eve[i] = w[0] + w[1];
    if (st.eve[i] > 0.0) {
      for (int k = 0; k < 2; ++k) st.bob_given_eve[i][k] = w[k] / st.eve[i];
    }
  }
  return st;
}

namespace detail {

template <std::size_t N>
int sample_index(const std::array<double, N>& probs, double u) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < N; ++i) {
    acc += probs[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(N - 1);
}

struct SessionModel {
  // Indexed [alice_basis][bit][bob_basis].
  std::array<std::array<std::array<RoundStatistics, 2>, 2>, 2> stats;
  MeasurementOrder order;

  explicit SessionModel(const SessionConfig& cfg) : order(cfg.order) {
    const ProbeConfig probe(cfg.error_rate);
    const double theta = theta_from_error_rate(probe);
    const DiscriminationConfig disc = config_from_xi(theta, cfg.xi);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int m = 0; m < 2; ++m)
          stats[a][b][m] = round_statistics(static_cast<Basis>(a), b, static_cast<Basis>(m), probe, disc);
  }

  void play(std::uint64_t seed, std::uint64_t round, SessionTally& tally) const {
    SplitMix64 rng = substream(seed, round);
    const std::uint64_t choices = rng.next();
    const int alice_basis = static_cast<int>(choices >> 63);
    const int bit = static_cast<int>((choices >> 62) & 1U);
    const int bob_basis = static_cast<int>((choices >> 61) & 1U);
    const RoundStatistics& st = stats[alice_basis][bit][bob_basis];
    const double u1 = rng.uniform();
    const double u2 = rng.uniform();
    int bob = 0;
    int eve = 0;
    if (order == MeasurementOrder::bob_then_eve) {
      bob = sample_index(st.bob, u1);
      eve = sample_index(st.eve_given_bob[bob], u2);
    } else {
      eve = sample_index(st.eve, u1);
      bob = sample_index(st.bob_given_eve[eve], u2);
    }
    tally.record(alice_basis == bob_basis, bob == bit, bit, static_cast<Outcome>(eve));
  }
};

}  // namespace detail

/// Runs `cfg.rounds` rounds. Per round: Alice draws a basis and bit, Eve's
/// CNOT entangles the probe, Bob measures in a random basis and Eve applies
/// her POVM to the probe.
inline SessionTally run_session(const SessionConfig& cfg) {
  cfg.validate();
  const detail::SessionModel model(cfg);
  const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(cfg.threads, cfg.rounds));
  std::vector<SessionTally> partial(workers);
  auto work = [&](unsigned w) {
    const std::uint64_t begin = cfg.rounds * w / workers;
    const std::uint64_t end = cfg.rounds * (w + 1) / workers;
    for (std::uint64_t r = begin; r < end; ++r) model.play(cfg.seed, r, partial[w]);
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  SessionTally total;
  for (const auto& t : partial) total += t;
  return total;
}

/// Joint table over error-free sifted rounds: rows Alice's (= Bob's) bit,
/// columns Eve's guess (+ -> 0, - -> 1) or inconclusive.
inline JointDistribution empirical_joint(const SessionTally& t) {
  const std::uint64_t n = t.sifted_correct();
  if (n == 0) throw std::invalid_argument("no error-free sifted rounds in tally");
  std::vector<double> table(6);
  for (int bit = 0; bit < 2; ++bit)
    for (int e = 0; e < 3; ++e)
      table[static_cast<std::size_t>(bit * 3 + e)] =
          static_cast<double>(t.count(true, true, bit, static_cast<Outcome>(e))) / static_cast<double>(n);
  return JointDistribution(2, 3, std::move(table));
}

/// Plug-in mutual information of the empirical joint table.
inline double empirical_mutual_information(const SessionTally& t) { return mutual_information(empirical_joint(t)); }

/// Delta-method standard error of the plug-in mutual information from n
/// samples of `j`.
inline double mutual_information_std_error(const JointDistribution& j, std::uint64_t n) {
  const auto px = j.row_marginal();
  const auto py = j.column_marginal();
  const double info = mutual_information(j);
  double second = 0.0;
  for (std::size_t r = 0; r < j.rows(); ++r)
    for (std::size_t c = 0; c < j.cols(); ++c) {
      const double p = j(r, c);
      if (p <= 0.0) continue;
      const double l = std::log2(p / (px[r] * py[c]));
      second += p * l * l;
    }
  return std::sqrt(std::max(0.0, second - info * info) / static_cast<double>(n));
}

/// Leading-order bias of the plug-in mutual information estimate, in bits.
inline double mutual_information_bias(const JointDistribution& j, std::uint64_t n) {
  return static_cast<double>((j.rows() - 1) * (j.cols() - 1)) / (2.0 * static_cast<double>(n) * std::numbers::ln2);
}

}  // namespace fpb
