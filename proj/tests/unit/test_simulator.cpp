#include <catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <vector>

#include "fpb/discrimination.hpp"
#include "fpb/entropy.hpp"
#include "fpb/probe.hpp"
#include "fpb/rng.hpp"
#include "fpb/simulator.hpp"
#include "support/oracles.hpp"

using Catch::Approx;
using fpb::Basis;
using fpb::MeasurementOrder;
using fpb::Outcome;
using fpb::SessionConfig;
using fpb::SessionTally;

namespace {

SessionConfig config(double pe, double xi, std::uint64_t rounds, std::uint64_t seed = 42) {
  SessionConfig c;
  c.error_rate = pe;
  c.xi = xi;
  c.rounds = rounds;
  c.seed = seed;
  return c;
}

fpb::OutcomeProbs analytic(double pe, double xi) {
  const double theta = fpb::theta_from_error_rate(fpb::ProbeConfig(pe));
  return fpb::outcome_probs(fpb::config_from_xi(theta, xi));
}

// |observed - expected| within 4 binomial standard deviations.
bool within_4_sigma(double observed_fraction, double p, std::uint64_t n) {
  const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  return std::abs(observed_fraction - p) <= 4.0 * sigma + 1e-15;
}

std::uint64_t eve_count(const SessionTally& t, Outcome o) {
  std::uint64_t n = 0;
  for (int match = 0; match < 2; ++match)
    for (int correct = 0; correct < 2; ++correct)
      for (int bit = 0; bit < 2; ++bit) n += t.count(match == 1, correct == 1, bit, o);
  return n;
}

}  // namespace

TEST_CASE("SplitMix64 reference output and substreams") {
  fpb::SplitMix64 g(0);
  CHECK(g.next() == 0xE220A8397B1DCDAFULL);
  CHECK(g.next() == 0x6E789E6AA1B965F4ULL);
  auto a = fpb::substream(42, 7);
  auto b = fpb::substream(42, 7);
  auto c = fpb::substream(42, 8);
  const auto x = a.next();
  CHECK(x == b.next());
  CHECK(x != c.next());
  fpb::SplitMix64 u(1);
  for (int i = 0; i < 10000; ++i) {
    const double v = u.uniform();
    REQUIRE(v >= 0.0);
    REQUIRE(v < 1.0);
  }
}

TEST_CASE("session config validation") {
  CHECK_THROWS_AS(fpb::run_session(config(0.1, 0.5, 0)), std::invalid_argument);
  CHECK_THROWS_AS(fpb::run_session(config(0.4, 0.5, 10)), std::invalid_argument);
  CHECK_THROWS_AS(fpb::run_session(config(0.1, 1.5, 10)), std::invalid_argument);
  auto c = config(0.1, 0.5, 10);
  c.threads = 0;
  CHECK_THROWS_AS(fpb::run_session(c), std::invalid_argument);
}

TEST_CASE("tallies are reproducible and independent of thread count") {
  auto c = config(0.2, 0.5, 100'003, 7);
  const auto serial = fpb::run_session(c);
  CHECK(serial == fpb::run_session(c));
  for (unsigned threads : {2u, 3u, 8u}) {
    c.threads = threads;
    CHECK(serial == fpb::run_session(c));
  }
  c.seed = 8;
  CHECK_FALSE(serial == fpb::run_session(c));
  CHECK(serial.rounds() == 100'003);
}

TEST_CASE("tally merge is associative and commutative") {
  const auto a = fpb::run_session(config(0.1, 0.0, 1000, 1));
  const auto b = fpb::run_session(config(0.2, 0.5, 1000, 2));
  const auto c = fpb::run_session(config(0.3, 1.0, 1000, 3));
  SessionTally ab = a;
  ab += b;
  SessionTally ba = b;
  ba += a;
  CHECK(ab == ba);
  SessionTally left = ab;
  left += c;
  SessionTally bc = b;
  bc += c;
  SessionTally right = a;
  right += bc;
  CHECK(left == right);
  CHECK(left.rounds() == 3000);
}

TEST_CASE("zero error rate produces no sifted errors") {
  const auto t = fpb::run_session(config(0.0, 1.0, 50'000));
  CHECK(t.sifted_errors() == 0);
  CHECK(t.sifted() > 0);
}

TEST_CASE("sift fraction and error fraction") {
  for (double pe : {0.05, 0.15, 0.3}) {
    const auto t = fpb::run_session(config(pe, 0.5, 400'000, 11));
    CHECK(within_4_sigma(static_cast<double>(t.sifted()) / 400'000.0, 0.5, 400'000));
    CHECK(within_4_sigma(static_cast<double>(t.sifted_errors()) / static_cast<double>(t.sifted()), pe, t.sifted()));
  }
}

TEST_CASE("IDP never puts mass on Eve-wrong cells") {
  const auto t = fpb::run_session(config(0.25, 0.0, 200'000));
  CHECK(t.count(true, true, 0, Outcome::minus) == 0);
  CHECK(t.count(true, true, 1, Outcome::plus) == 0);
  const auto j = fpb::empirical_joint(t);
  CHECK(j(0, 1) == 0.0);
  CHECK(j(1, 0) == 0.0);
}

TEST_CASE("empirical joint matches the analytic table within 4 sigma") {
  for (double pe : {0.05, 0.2, 1.0 / 3.0}) {
    for (double xi : {0.0, 0.5, 1.0}) {
      const auto t = fpb::run_session(config(pe, xi, 300'000, 5));
      const auto emp = fpb::empirical_joint(t);
      const auto ana = fpb::joint_from_outcome_probs(analytic(pe, xi));
      const auto n = t.sifted_correct();
      for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 3; ++c) CHECK(within_4_sigma(emp(r, c), ana(r, c), n));
      // Inconclusive fraction and p(b' | e' = ?) = 1/2.
      const double q_inc = emp(0, 2) + emp(1, 2);
      CHECK(within_4_sigma(q_inc, analytic(pe, xi).q_inconclusive, n));
      if (q_inc > 0.0) {
        const auto n_inc = static_cast<std::uint64_t>(std::llround(q_inc * static_cast<double>(n)));
        CHECK(within_4_sigma(emp(0, 2) / q_inc, 0.5, n_inc));
      }
    }
  }
  CHECK_THROWS_AS(fpb::empirical_joint(SessionTally{}), std::invalid_argument);
}

TEST_CASE("measurement order does not change the joint statistics") {
  for (double pe : {0.0, 0.1, 0.25, 1.0 / 3.0}) {
    for (double xi : {0.0, 0.4, 1.0}) {
      const fpb::ProbeConfig probe(pe);
      const auto disc = fpb::config_from_xi(fpb::theta_from_error_rate(probe), xi);
      for (Basis a : {Basis::rectilinear, Basis::diagonal})
        for (int bit : {0, 1})
          for (Basis m : {Basis::rectilinear, Basis::diagonal}) {
            const auto st = fpb::round_statistics(a, bit, m, probe, disc);
            for (int k = 0; k < 2; ++k)
              for (int i = 0; i < 3; ++i) CHECK(std::abs(st.joint_bob_first(k, i) - st.joint_eve_first(k, i)) <= 1e-12);
          }
    }
  }
  auto c = config(0.2, 0.5, 300'000, 9);
  const auto bob_first = fpb::empirical_joint(fpb::run_session(c));
  c.order = MeasurementOrder::eve_then_bob;
  const auto eve_run = fpb::run_session(c);
  const auto eve_first = fpb::empirical_joint(eve_run);
  const auto ana = fpb::joint_from_outcome_probs(analytic(0.2, 0.5));
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t col = 0; col < 3; ++col) {
      CHECK(within_4_sigma(eve_first(r, col), ana(r, col), eve_run.sifted_correct()));
      // Two independent estimates: their difference has twice the variance.
      CHECK(std::abs(eve_first(r, col) - bob_first(r, col)) <=
            4.0 * std::sqrt(2.0 * ana(r, col) * (1.0 - ana(r, col)) / static_cast<double>(eve_run.sifted_correct())));
    }
}

TEST_CASE("Eve's marginal equals the Born probabilities of the reduced probe state") {
  const double pe = 0.15;
  const double xi = 0.6;
  const fpb::ProbeConfig probe(pe);
  const auto disc = fpb::config_from_xi(fpb::theta_from_error_rate(probe), xi);
  const auto povm = oracle::povm_elements(disc.gamma());
  std::array<double, 3> expected{};
  for (Basis a : {Basis::rectilinear, Basis::diagonal})
    for (int bit : {0, 1})
      for (Basis m : {Basis::rectilinear, Basis::diagonal}) {
        const auto psi = fpb::cnot_action(a, bit, probe);
        // Partial trace over the carrier (basis-independent).
        oracle::Mat2 rho{};
        for (std::size_t k = 0; k < 2; ++k)
          for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) rho[i][j] += psi[2 * k + i] * std::conj(psi[2 * k + j]);
        const auto st = fpb::round_statistics(a, bit, m, probe, disc);
        for (std::size_t i = 0; i < 3; ++i) {
          const double born = oracle::born(povm[i], rho);
          CHECK(st.joint_bob_first(0, static_cast<int>(i)) + st.joint_bob_first(1, static_cast<int>(i)) ==
                Approx(born).margin(1e-12));
          expected[i] += 0.125 * born;
        }
      }
  const std::uint64_t rounds = 300'000;
  const auto t = fpb::run_session(config(pe, xi, rounds, 13));
  for (int i = 0; i < 3; ++i) {
    const double f = static_cast<double>(eve_count(t, static_cast<Outcome>(i))) / static_cast<double>(rounds);
    CHECK(within_4_sigma(f, expected[static_cast<std::size_t>(i)], rounds));
  }
}

TEST_CASE("empirical mutual information: limits") {
  const auto perfect = fpb::run_session(config(1.0 / 3.0, 1.0, 100'000));
  CHECK(fpb::empirical_mutual_information(perfect) == Approx(1.0).margin(1e-3));
  const auto blind = fpb::run_session(config(0.0, 1.0, 100'000));
  CHECK(fpb::empirical_mutual_information(blind) == Approx(0.0).margin(1e-3));
}

TEST_CASE("empirical mutual information agrees across ten seeds") {
  for (double pe : {0.05, 0.15, 0.25}) {
    for (double xi : {0.0, 0.5, 1.0}) {
      const double truth = fpb::closed_form_I_std(analytic(pe, xi));
      std::vector<double> est;
      std::uint64_t n = 0;
      for (std::uint64_t seed = 100; seed < 110; ++seed) {
        const auto t = fpb::run_session(config(pe, xi, 100'000, seed));
        est.push_back(fpb::empirical_mutual_information(t));
        n = t.sifted_correct();
      }
      const double mean = std::accumulate(est.begin(), est.end(), 0.0) / 10.0;
      double var = 0.0;
      for (double e : est) var += (e - mean) * (e - mean);
      const double sd = std::sqrt(var / 9.0);
      for (double e : est) CHECK(std::abs(e - truth) <= 3.0 * sd + fpb::mutual_information_bias(fpb::joint_from_outcome_probs(analytic(pe, xi)), n) + 1e-12);
      CHECK(std::abs(mean - truth) <= 3.0 * sd);
      // Delta-method standard error is of the observed size.
      const double se = fpb::mutual_information_std_error(fpb::joint_from_outcome_probs(analytic(pe, xi)), n);
      CHECK(sd <= 3.0 * se + 1e-12);
      CHECK(sd >= se / 3.0);
    }
  }
}
