#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "fpb/discrimination.hpp"
#include "fpb/entropy.hpp"
#include "fpb/numerics.hpp"
#include "fpb/probe.hpp"
#include "fpb/uncertainty.hpp"
#include "support/oracles.hpp"

using Catch::Approx;
using fpb::ComplexMat;
using fpb::Order;

namespace {

constexpr double kPi = std::numbers::pi;

ComplexMat optimal_overlap(double eta, const fpb::PhaseOptimum& opt) {
  const double g = fpb::gamma_from_eta(eta);
  return fpb::overlap_matrix(fpb::naimark_basis(g, opt.phase_a), fpb::naimark_basis(g, opt.phase_b));
}

std::vector<double> povm_probs(double eta, const oracle::Mat2& rho) {
  const auto m = oracle::povm_elements(fpb::gamma_from_eta(eta));
  return {oracle::born(m[0], rho), oracle::born(m[1], rho), oracle::born(m[2], rho)};
}

ComplexMat to_mat3(const oracle::Mat3& a) {
  ComplexMat m(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) m(i, j) = a[i][j];
  return m;
}

// Branch expressions of f evaluated on both sides of a knot.
double f_low(double e) { return (1.0 + e) / (1.0 - e); }
double f_mid(double e) { return std::sqrt((2.0 - e) / (1.0 - e)); }
double f_high(double e) { return std::sqrt((2.0 - e) / e); }

}  // namespace

TEST_CASE("Naimark basis is orthonormal and realizes the POVM") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const double gamma = u(rng) * kPi / 4.0;
    const auto e = fpb::naimark_basis(gamma, 2.0 * kPi * u(rng));
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        const auto ip = fpb::inner_product(e.basis[i], e.basis[j]);
        CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) <= 1e-12);
      }
    const auto ref = oracle::povm_elements(gamma);
    for (std::size_t k = 0; k < 3; ++k)
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) {
          const auto m = e.basis[k][a] * std::conj(e.basis[k][b]);
          CHECK(std::abs(m - ref[k][a][b]) <= 1e-12);
        }
  }
}

TEST_CASE("Naimark phase enters only the ancilla coordinate") {
  const auto a = fpb::naimark_basis(0.5, 0.0);
  const auto b = fpb::naimark_basis(0.5, 1.3);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(a.basis[k][0] == b.basis[k][0]);
    CHECK(a.basis[k][1] == b.basis[k][1]);
    CHECK(std::abs(a.basis[k][2]) == Approx(std::abs(b.basis[k][2])).margin(1e-15));
  }
  // eta = 0: the inconclusive vector lives entirely in the ancilla.
  const auto e0 = fpb::naimark_basis(kPi / 4.0, 0.7);
  CHECK(std::abs(e0.basis[2][2]) == Approx(1.0).margin(1e-12));
  CHECK_THROWS_AS(fpb::naimark_basis(-0.1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(fpb::naimark_basis(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("overlap matrix: identity, unitarity, mismatch, lower bound") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto e = fpb::naimark_basis(0.4, 0.9);
  CHECK(fpb::max_abs_entry(fpb::overlap_matrix(e, e) - ComplexMat::identity(3)) <= 1e-14);
  CHECK_THROWS_AS(fpb::overlap_matrix(e, fpb::naimark_basis(0.3, 0.9)), std::invalid_argument);
  for (int t = 0; t < 200; ++t) {
    const double eta = u(rng);
    const double g = fpb::gamma_from_eta(eta);
    const auto w = fpb::overlap_matrix(fpb::naimark_basis(g, 2 * kPi * u(rng)), fpb::naimark_basis(g, 2 * kPi * u(rng)));
    CHECK(fpb::is_unitary(w, 1e-10));
    CHECK(fpb::s_max(w) >= 1.0 / fpb::overlap_factor(eta) - 1e-12);
  }
}

TEST_CASE("overlap moduli depend only on the phase difference") {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
  for (int t = 0; t < 50; ++t) {
    const double g = 0.3;
    const double a = u(rng), b = u(rng), shift = u(rng);
    const auto w1 = fpb::overlap_matrix(fpb::naimark_basis(g, a), fpb::naimark_basis(g, b));
    const auto w2 = fpb::overlap_matrix(fpb::naimark_basis(g, a + shift), fpb::naimark_basis(g, b + shift));
    CHECK(fpb::s_max(w1) == Approx(fpb::s_max(w2)).margin(1e-12));
    CHECK(fpb::s_second(w1) == Approx(fpb::s_second(w2)).margin(1e-12));
  }
}

TEST_CASE("s_max and s_second") {
  const auto id = ComplexMat::identity(3);
  CHECK(fpb::s_max(id) == 1.0);
  CHECK(fpb::s_second(id) == 1.0);
  const double r = 1.0 / std::sqrt(3.0);
  const auto w = std::polar(1.0, 2.0 * kPi / 3.0);
  const ComplexMat dft{{r, r, r}, {r, r * w, r * w * w}, {r, r * w * w, r * w}};
  CHECK(fpb::s_max(dft) == Approx(r));
  CHECK(fpb::s_second(dft) == Approx(r));
  CHECK(fpb::s_second_distinct(dft) == Approx(r));
  const ComplexMat m{{0.9, 0.1}, {0.2, 0.9}};
  CHECK(fpb::s_second(m) == Approx(0.9));
  CHECK(fpb::s_second_distinct(m) == Approx(0.2));
  CHECK_THROWS_AS(fpb::s_second(ComplexMat(1, 1)), std::invalid_argument);
}

TEST_CASE("f and c2 are continuous at the branch knots") {
  CHECK(f_low(0.2) == Approx(1.5).margin(1e-15));
  CHECK(f_mid(0.2) == Approx(1.5).margin(1e-15));
  CHECK(std::abs(f_mid(0.5) - std::sqrt(3.0)) <= 1e-12);
  CHECK(std::abs(f_high(0.5) - std::sqrt(3.0)) <= 1e-12);
  CHECK(fpb::overlap_factor(0.0) == 1.0);
  CHECK(fpb::overlap_factor(1.0) == 1.0);
  CHECK(fpb::mu_bound(1.0) == 0.0);
  CHECK(fpb::mu_bound(0.2) == Approx(2.0 * std::log2(1.5)));
  const double c2_02_low = std::sqrt(1.0 + 0.4 - 3.0 * 0.04) / 1.2;
  const double c2_02_mid = std::sqrt(1.6 / 1.8);
  CHECK(std::abs(c2_02_low - c2_02_mid) <= 1e-12);
  CHECK(c2_02_low == Approx(0.94281).margin(1e-5));
  const double c2_05_mid = std::sqrt(1.0 / 1.5);
  const double c2_05_high = 1.0 / std::sqrt(1.5);
  CHECK(std::abs(c2_05_mid - c2_05_high) <= 1e-12);
  CHECK(c2_05_mid == Approx(0.81650).margin(1e-5));
  for (double k : {0.2, 0.5}) {
    CHECK(std::abs(fpb::overlap_factor(k - 1e-12) - fpb::overlap_factor(k + 1e-12)) <= 1e-10);
    CHECK(std::abs(fpb::zeta2_closed_form(k - 1e-12) - fpb::zeta2_closed_form(k + 1e-12)) <= 1e-10);
  }
  CHECK_THROWS_AS(fpb::overlap_factor(1.5), std::invalid_argument);
}

TEST_CASE("phase optimization reproduces 1/f at the knots and near eta = 0") {
  const fpb::PhaseSearch search{180, 1e-9};
  CHECK(fpb::optimize_s_max(0.2, search).s_max == Approx(2.0 / 3.0).margin(1e-6));
  CHECK(fpb::optimize_s_max(0.5, search).s_max == Approx(1.0 / std::sqrt(3.0)).margin(1e-6));
  // The oracle settles the eta -> 0 limit: the optimum tends to 1, not 1/2.
  CHECK(fpb::optimize_s_max(1e-6, search).s_max == Approx(1.0 / fpb::overlap_factor(1e-6)).margin(1e-6));
  CHECK(fpb::optimize_s_max(1e-6, search).s_max > 0.99);
}

TEST_CASE("phase optimum is invariant under a global phase shift") {
  const double eta = 0.35;
  const auto opt = fpb::optimize_s_max(eta, {120, 1e-9});
  const double g = fpb::gamma_from_eta(eta);
  for (double shift : {0.3, 1.7, 4.0}) {
    const auto w =
        fpb::overlap_matrix(fpb::naimark_basis(g, opt.phase_a + shift), fpb::naimark_basis(g, opt.phase_b + shift));
    CHECK(fpb::s_max(w) == Approx(opt.s_max).margin(1e-12));
  }
  CHECK(fpb::optimize_s_max(eta, {240, 1e-9}).s_max == Approx(opt.s_max).margin(1e-7));
}

TEST_CASE("zeta coefficients") {
  const auto id = fpb::zeta_coefficients(ComplexMat::identity(3));
  for (double z : id) CHECK(z == Approx(1.0));
  CHECK_THROWS_AS(fpb::zeta_coefficients(ComplexMat::identity(3).scaled(0.5)), std::invalid_argument);

  std::mt19937_64 rng(14);
  for (int t = 0; t < 50; ++t) {
    const auto w = to_mat3(oracle::haar_unitary<3>(rng));
    const auto z = fpb::zeta_coefficients(w);
    CHECK(z[0] == fpb::s_max(w));
    CHECK(z[0] <= z[1] + 1e-12);
    CHECK(z[1] <= z[2] + 1e-12);
    CHECK(z[2] == Approx(1.0).margin(1e-8));
    // zeta_2 from power iteration over every 1x2 and 2x1 block.
    double ref = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = a + 1; b < 3; ++b) {
          ref = std::max(ref, oracle::spectral_norm_power({{w(i, a), w(i, b)}}));
          ref = std::max(ref, oracle::spectral_norm_power({{w(a, i)}, {w(b, i)}}));
        }
    CHECK(z[1] == Approx(ref).margin(1e-9));
  }
}

TEST_CASE("optimized overlap reproduces the zeta_2 closed form") {
  for (double eta : {0.05, 0.15, 0.3, 0.45, 0.7, 0.95}) {
    const auto opt = fpb::optimize_s_max(eta, {180, 1e-9});
    const auto z = fpb::zeta_coefficients(optimal_overlap(eta, opt));
    CHECK(z[0] == Approx(1.0 / fpb::overlap_factor(eta)).margin(1e-6));
    CHECK(z[1] == Approx(fpb::zeta2_closed_form(eta)).margin(1e-5));
  }
}

TEST_CASE("Coles-Piani bound") {
  CHECK(fpb::coles_piani_bound(0.3) == std::log2(fpb::overlap_factor(0.3)));
  CHECK(fpb::coles_piani_bound(0.2) == std::log2(fpb::overlap_factor(0.2)));
  CHECK(fpb::coles_piani_bound(0.1) > std::log2(fpb::overlap_factor(0.1)));
  CHECK(fpb::coles_piani_bound(0.0) == 0.0);
  // Generic two-basis relation at the optimizing phases, halved because both
  // measurements are the same POVM. Above eta = 0.118 the distinct second
  // largest modulus is |w_{+?}| and the closed form is reproduced.
  for (double eta : {0.13, 0.15, 0.18, 0.3, 0.6}) {
    const auto opt = fpb::optimize_s_max(eta, {180, 1e-10});
    const auto w = optimal_overlap(eta, opt);
    const double s2 = eta < 0.2 ? fpb::s_second_distinct(w, 1e-6) : fpb::s_second(w);
    CHECK(0.5 * fpb::coles_piani_pair_bound(fpb::s_max(w), s2) == Approx(fpb::coles_piani_bound(eta)).margin(1e-6));
  }
  // Below it |w_??| = (1 - 3 eta)/(1 + eta) overtakes |w_{+?}| = 2 sqrt(eta (1 - eta))/(1 + eta);
  // the closed form keeps using |w_{+?}| and exceeds the generic value.
  for (double eta : {0.02, 0.05, 0.1}) {
    const auto opt = fpb::optimize_s_max(eta, {180, 1e-10});
    const auto w = optimal_overlap(eta, opt);
    const double w_pq = 2.0 * std::sqrt(eta * (1.0 - eta)) / (1.0 + eta);
    const double w_qq = (1.0 - 3.0 * eta) / (1.0 + eta);
    CHECK(fpb::s_second_distinct(w, 1e-6) == Approx(w_qq).margin(1e-6));
    CHECK(0.5 * fpb::coles_piani_pair_bound(fpb::s_max(w), w_pq) ==
          Approx(fpb::coles_piani_bound(eta)).margin(1e-6));
    CHECK(fpb::coles_piani_bound(eta) > 0.5 * fpb::coles_piani_pair_bound(fpb::s_max(w), fpb::s_second_distinct(w)));
  }
}

TEST_CASE("majorization data arithmetic") {
  const std::vector<double> ones{1.0, 1.0, 1.0};
  const auto md1 = fpb::majorization_data(ones);
  CHECK(md1.omega[0] == 1.0);
  CHECK(md1.omega[1] == 0.0);
  for (Order o : {Order::shannon(), Order::finite(0.5), Order::finite(2.0), Order::infinity()}) {
    CHECK(fpb::majorization_entropy_bound(md1, o) == Approx(0.0).margin(1e-15));
  }
  const std::vector<double> z{0.5, 0.75, 1.0};
  const auto md = fpb::majorization_data(z);
  CHECK(md.omega[0] == Approx(0.5));
  CHECK(md.omega[1] == Approx(0.25));
  CHECK(md.omega[2] == Approx(0.25));
  CHECK(md.omega_prime[0] == Approx(9.0 / 16.0));
  CHECK(md.omega_prime[1] == Approx(49.0 / 64.0 - 9.0 / 16.0));
  CHECK(md.omega_prime[2] == Approx(1.0 - 49.0 / 64.0));
  CHECK_THROWS_AS(fpb::majorization_data(std::vector<double>{0.5, 0.4, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(fpb::majorization_data(std::vector<double>{0.5, 0.7, 0.9}), std::invalid_argument);
  CHECK_THROWS_AS(fpb::majorization_data(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("majorization bound selection and limits") {
  for (double eta : fpb::linspace(0.0, 1.0, 21)) {
    const auto md = fpb::closed_form_majorization(eta);
    const Order two = Order::finite(2.0);
    CHECK(fpb::majorization_entropy_bound(md, two) ==
          std::max(fpb::majorization_bound_tensor(md, two), fpb::majorization_bound_direct_sum(md, two)));
    CHECK(fpb::majorization_entropy_bound(md, Order::shannon()) == Approx(0.5 * fpb::shannon_entropy(md.omega)));
    for (double a : {0.3, 0.5, 0.9}) {
      CHECK(fpb::renyi_entropy(md.omega, Order::finite(a)) >=
            fpb::renyi_entropy(md.omega_prime, Order::finite(a)) - 1e-12);
    }
    const Order huge = Order::finite(1e6);
    CHECK(fpb::majorization_entropy_bound(md, Order::infinity()) ==
          Approx(fpb::majorization_entropy_bound(md, huge)).margin(1e-5));
    CHECK(fpb::majorization_bound_direct_sum(md, Order::infinity()) ==
          Approx(fpb::majorization_bound_direct_sum(md, huge)).margin(1e-5));
    CHECK(fpb::majorization_entropy_bound(md, Order::infinity()) ==
          Approx(0.5 * fpb::renyi_entropy(md.omega_prime, Order::infinity())).margin(1e-15));
  }
}

TEST_CASE("bounds hold for random qubit states") {
  std::mt19937_64 rng(30);
  const std::vector<std::pair<double, double>> conjugate{
      {1.0, 1.0}, {2.0, 2.0 / 3.0}, {std::numeric_limits<double>::infinity(), 0.5}, {4.0, 4.0 / 7.0}};
  for (double eta : fpb::linspace(0.0, 1.0, 11)) {
    const auto md = fpb::closed_form_majorization(eta);
    for (int t = 0; t < 200; ++t) {
      const auto p = povm_probs(eta, oracle::random_qubit_density(rng));
      for (auto [a, b] : conjugate) {
        CHECK(oracle::renyi(p, a) + oracle::renyi(p, b) >= fpb::mu_bound(eta) - 1e-9);
      }
      const double h = oracle::renyi(p, 1.0);
      CHECK(h >= fpb::coles_piani_bound(eta) - 1e-9);
      CHECK(h >= fpb::majorization_entropy_bound(md, Order::shannon()) - 1e-9);
      CHECK(oracle::renyi(p, 2.0) >= fpb::majorization_entropy_bound(md, Order::finite(2.0)) - 1e-9);
      CHECK(oracle::renyi(p, 0.5) >= fpb::majorization_entropy_bound(md, Order::finite(0.5)) - 1e-9);
    }
  }
}

TEST_CASE("majorization relations on random bases") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 40; ++t) {
    const auto u = oracle::haar_unitary<3>(rng);
    const auto md = fpb::majorization_data(fpb::zeta_coefficients(to_mat3(u)));
    std::vector<double> one_omega{1.0};
    for (double x : md.omega.probs()) one_omega.push_back(x);
    const std::vector<double> omega_prime(md.omega_prime.probs().begin(), md.omega_prime.probs().end());
    for (int s = 0; s < 50; ++s) {
      const auto psi = oracle::random_pure_state<3>(rng);
      std::vector<double> p(3), q(3, 0.0);
      for (std::size_t i = 0; i < 3; ++i) p[i] = std::norm(psi[i]);
      for (std::size_t j = 0; j < 3; ++j) {
        oracle::cplx amp = 0.0;
        for (std::size_t i = 0; i < 3; ++i) amp += std::conj(u[i][j]) * psi[i];
        q[j] = std::norm(amp);
      }
      std::vector<double> tensor;
      for (double x : p)
        for (double y : q) tensor.push_back(x * y);
      std::vector<double> sum = p;
      sum.insert(sum.end(), q.begin(), q.end());
      CHECK(oracle::majorized_by(tensor, omega_prime));
      CHECK(oracle::majorized_by(sum, one_omega));
    }
  }
}

TEST_CASE("mutual-information upper bound dominates the standard information") {
  for (double pe : fpb::linspace(0.0, 1.0 / 3.0, 60)) {
    const double theta = fpb::theta_from_error_rate(fpb::ProbeConfig(pe));
    for (double xi : fpb::linspace(0.0, 1.0, 11)) {
      const auto cfg = fpb::config_from_xi(theta, xi);
      const auto q = fpb::outcome_probs(cfg);
      CHECK(fpb::mutual_info_upper_bound(q, cfg.eta()) >= fpb::closed_form_I_std(q) - 1e-10);
    }
  }
  const auto blind = fpb::config_from_xi(0.0, 1.0);
  CHECK(fpb::mutual_info_upper_bound(fpb::outcome_probs(blind), blind.eta()) >= 0.0);
}

TEST_CASE("Coles-Piani wins at small eta, the direct-sum bound above 0.6") {
  bool cp_wins_somewhere = false;
  for (double eta : fpb::linspace(0.01, 0.2, 20)) {
    const double half_h = fpb::majorization_entropy_bound(fpb::closed_form_majorization(eta), Order::shannon());
    if (fpb::coles_piani_bound(eta) > half_h) cp_wins_somewhere = true;
  }
  CHECK(cp_wins_somewhere);
  for (double eta : fpb::linspace(0.61, 0.99, 20)) {
    const double half_h = fpb::majorization_entropy_bound(fpb::closed_form_majorization(eta), Order::shannon());
    CHECK(half_h > fpb::coles_piani_bound(eta));
  }
}
