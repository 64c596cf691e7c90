#pragma once

// Sweep and report generation behind the `fpb` command-line tool. Output is
// long-format CSV or JSON, byte-identical for identical inputs.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fpb/discrimination.hpp"
#include "fpb/entropy.hpp"
#include "fpb/numerics.hpp"
#include "fpb/probe.hpp"
#include "fpb/simulator.hpp"
#include "fpb/uncertainty.hpp"

namespace fpb::cli {

enum ExitCode : int { kOk = 0, kArgumentError = 2, kIoError = 3 };

/// 17 significant digits, C locale.
inline std::string format_number(double x) {
  if (x == std::numeric_limits<double>::infinity()) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string order_label(const Order& o) {
  if (o.is_shannon()) return "1";
  if (o.is_infinite()) return "inf";
  return format_number(o.value());
}

/// Accepts "1", "inf" / "infinity", or a positive real.
inline Order parse_order(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return Order::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid order '" + text + "'");
  }
  if (used != text.size()) throw std::invalid_argument("invalid order '" + text + "'");
  return Order::from_real(v);
}

enum class Measure { standard, v1, v2, v4, v1_inf, cond_prob };

inline std::string to_string(Measure m) {
  switch (m) {
    case Measure::standard: return "std";
    case Measure::v1: return "v1";
    case Measure::v2: return "v2";
    case Measure::v4: return "v4";
    case Measure::v1_inf: return "v1_inf";
    case Measure::cond_prob: return "cond_prob";
  }
  return "?";
}

inline Measure parse_measure(const std::string& text) {
  for (Measure m : {Measure::standard, Measure::v1, Measure::v2, Measure::v4, Measure::v1_inf, Measure::cond_prob}) {
    if (text == to_string(m)) return m;
  }
  throw std::invalid_argument("unknown measure '" + text + "'");
}

enum class SweepVariable { error_rate, eta };

struct SweepSpec {
  SweepVariable variable = SweepVariable::error_rate;
  double min = 0.001;
  double max = kMaxErrorRate;
  std::size_t steps = 334;
  std::vector<double> xi_values{0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<Order> orders{Order::finite(2.0), Order::finite(10.0)};
  std::vector<Measure> measures{Measure::standard, Measure::v1, Measure::v2, Measure::v4, Measure::v1_inf};

  void validate() const {
    if (steps < 2) throw std::invalid_argument("steps must be at least 2");
    if (!(min < max)) throw std::invalid_argument("sweep minimum must be below maximum");
    if (variable == SweepVariable::error_rate) {
      if (min < 0.0 || max > kMaxErrorRate + 1e-12) throw std::invalid_argument("error rate range must lie in [0, 1/3]");
    } else if (min < 0.0 || max > 1.0) {
      throw std::invalid_argument("eta range must lie in [0, 1]");
    }
    if (xi_values.empty()) throw std::invalid_argument("at least one xi value is required");
    for (double xi : xi_values) {
      if (!(xi >= 0.0 && xi <= 1.0)) throw std::invalid_argument("xi values must lie in [0, 1]");
    }
  }
};

/// Outcome probabilities of Eve's POVM at error rate p_e and ratio xi.
inline OutcomeProbs scenario_probs(double p_e, double xi) {
  const double theta = theta_from_error_rate(ProbeConfig(p_e));
  return outcome_probs(config_from_xi(theta, xi));
}

inline double scenario_eta(double p_e, double xi) {
  const double theta = theta_from_error_rate(ProbeConfig(p_e));
  return config_from_xi(theta, xi).eta();
}

/// CSV `p_e,xi,measure,order,value`: p_e outer, xi inner, measures in the
/// requested order, orders innermost.
inline void write_curves(const SweepSpec& spec, std::ostream& out) {
  spec.validate();
  if (spec.variable != SweepVariable::error_rate) throw std::invalid_argument("curves sweep the error rate only");
  for (Measure m : spec.measures) {
    if (m != Measure::v2 && m != Measure::v4) continue;
    for (const Order& o : spec.orders) {
      if (o.is_infinite()) throw std::invalid_argument("measure " + to_string(m) + " is undefined at infinite order");
    }
  }

  out << "p_e,xi,measure,order,value\n";
  for (double p_e : linspace(spec.min, spec.max, spec.steps)) {
    for (double xi : spec.xi_values) {
      const OutcomeProbs q = scenario_probs(p_e, xi);
      const JointDistribution joint = joint_from_outcome_probs(q);
      const std::string prefix = format_number(p_e) + "," + format_number(xi) + ",";
      auto row = [&](Measure m, const std::string& order, double value) {
        out << prefix << to_string(m) << "," << order << "," << format_number(value) << "\n";
      };
      for (Measure m : spec.measures) {
        switch (m) {
          case Measure::standard: row(m, "1", mutual_information(joint)); break;
          case Measure::v1_inf:
            row(m, "inf",
                alpha_mutual_information(joint, Order::infinity(), Variant::first, Direction::rows_given_columns));
            break;
          case Measure::cond_prob: row(m, "na", conditional_success(q)); break;
          default: {
            const Variant v = m == Measure::v1 ? Variant::first : m == Measure::v2 ? Variant::second : Variant::fourth;
            for (const Order& o : spec.orders) {
              row(m, order_label(o), alpha_mutual_information(joint, o, v, Direction::rows_given_columns));
            }
          }
        }
      }
    }
  }
}

struct BoundsSpec {
  SweepVariable variable = SweepVariable::eta;
  double min = 0.0;
  double max = 1.0;
  std::size_t steps = 501;
  double xi = 1.0;  // discrimination scheme for error-rate sweeps

  static BoundsSpec error_rate_defaults() {
    return BoundsSpec{.variable = SweepVariable::error_rate, .min = 0.001, .max = kMaxErrorRate, .steps = 334};
  }
};

/// Entropy lower bounds at a given eta plus completely-mixed-state entropies.
struct BoundRow {
  double mu_bound;
  double coles_piani;
  double maj_shannon;
  double maj_alpha2_a;
  double maj_alpha2_b;
  double rho_star_H;
  double rho_star_R2;
};

inline BoundRow bound_row(double eta) {
  const MajorizationData md = closed_form_majorization(eta);
  const Order two = Order::finite(2.0);
  const Povm povm = build_povm(DiscriminationConfig(0.0, gamma_from_eta(eta)));
  const ComplexMat mixed = ComplexMat::identity(2).scaled(0.5);
  const auto p = born_probs(povm, mixed);
  const Distribution mixed_probs({p[0], p[1], p[2]});
  return BoundRow{
      .mu_bound = mu_bound(eta),
      .coles_piani = coles_piani_bound(eta),
      .maj_shannon = majorization_bound_direct_sum(md, Order::shannon()),
      .maj_alpha2_a = majorization_bound_tensor(md, two),
      .maj_alpha2_b = majorization_bound_direct_sum(md, two),
      .rho_star_H = shannon_entropy(mixed_probs),
      .rho_star_R2 = renyi_entropy(mixed_probs, two),
  };
}

/// CSV of uncertainty bounds. Eta sweeps emit
/// `x,mu_bound,coles_piani,maj_shannon,maj_alpha2_a,maj_alpha2_b,rho_star_H,rho_star_R2`;
/// error-rate sweeps (at a single xi) append `i_std,i_upper`.
inline void write_bounds(const BoundsSpec& spec, std::ostream& out) {
  SweepSpec range{.variable = spec.variable, .min = spec.min, .max = spec.max, .steps = spec.steps, .xi_values = {spec.xi}};
  range.validate();
  const bool by_rate = spec.variable == SweepVariable::error_rate;
  out << "x,mu_bound,coles_piani,maj_shannon,maj_alpha2_a,maj_alpha2_b,rho_star_H,rho_star_R2";
  out << (by_rate ? ",i_std,i_upper\n" : "\n");
  for (double x : linspace(spec.min, spec.max, spec.steps)) {
    const double eta = by_rate ? scenario_eta(x, spec.xi) : x;
    const BoundRow b = bound_row(eta);
    out << format_number(x) << "," << format_number(b.mu_bound) << "," << format_number(b.coles_piani) << ","
        << format_number(b.maj_shannon) << "," << format_number(b.maj_alpha2_a) << "," << format_number(b.maj_alpha2_b)
        << "," << format_number(b.rho_star_H) << "," << format_number(b.rho_star_R2);
    if (by_rate) {
      const OutcomeProbs q = scenario_probs(x, spec.xi);
      out << "," << format_number(mutual_information(joint_from_outcome_probs(q))) << ","
          << format_number(mutual_info_upper_bound(q, eta));
    }
    out << "\n";
  }
}

namespace detail {

inline nlohmann::json matrix_json(const ComplexMat& m) {
  auto rows = nlohmann::json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = nlohmann::json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

inline nlohmann::json table_json(const JointDistribution& j) {
  auto rows = nlohmann::json::array();
  for (std::size_t r = 0; r < j.rows(); ++r) {
    auto row = nlohmann::json::array();
    for (std::size_t c = 0; c < j.cols(); ++c) row.push_back(j(r, c));
    rows.push_back(row);
  }
  return rows;
}

inline const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::plus: return "+";
    case Outcome::minus: return "-";
    default: return "?";
  }
}

}  // namespace detail

/// Simulation report: config echo, tally, empirical and analytic joint tables
/// with multinomial standard errors, and a 4-sigma agreement flag.
inline nlohmann::json simulate_report(const SessionConfig& cfg) {
  cfg.validate();
  const SessionTally tally = run_session(cfg);
  const OutcomeProbs q = scenario_probs(cfg.error_rate, cfg.xi);
  const JointDistribution analytic = joint_from_outcome_probs(q);

  nlohmann::json report;
  report["config"] = {
      {"rounds", cfg.rounds},
      {"error_rate", cfg.error_rate},
      {"xi", cfg.xi},
      {"seed", cfg.seed},
      {"measurement_order", cfg.order == MeasurementOrder::bob_then_eve ? "bob-first" : "eve-first"},
      {"rng", "splitmix64-substream-v" + std::to_string(kSubstreamVersion)},
  };

  auto counts = nlohmann::json::array();
  for (int match = 1; match >= 0; --match)
    for (int correct = 1; correct >= 0; --correct)
      for (int bit = 0; bit < 2; ++bit)
        for (int e = 0; e < 3; ++e) {
          const auto o = static_cast<Outcome>(e);
          counts.push_back({{"basis_match", match == 1},
                            {"bob_correct", correct == 1},
                            {"alice_bit", bit},
                            {"eve_outcome", detail::outcome_name(o)},
                            {"count", tally.count(match == 1, correct == 1, bit, o)}});
        }
  const double rounds = static_cast<double>(tally.rounds());
  const double sifted = static_cast<double>(tally.sifted());
  report["tally"] = {{"rounds", tally.rounds()},
                     {"sifted", tally.sifted()},
                     {"sifted_errors", tally.sifted_errors()},
                     {"counts", counts}};

  const double sift_sigma = std::sqrt(0.25 / rounds);
  const double sift_fraction = sifted / rounds;
  bool agree = std::abs(sift_fraction - 0.5) <= 4.0 * sift_sigma;
  report["sift_fraction"] = {{"value", sift_fraction}, {"expected", 0.5}, {"std_error", sift_sigma}};
  if (tally.sifted() > 0) {
    const double err = static_cast<double>(tally.sifted_errors()) / sifted;
    const double err_sigma = std::sqrt(cfg.error_rate * (1.0 - cfg.error_rate) / sifted);
    agree = agree && std::abs(err - cfg.error_rate) <= 4.0 * err_sigma + 1e-15;
    report["error_fraction"] = {{"value", err}, {"expected", cfg.error_rate}, {"std_error", err_sigma}};
  }

  report["analytic"] = {{"q_success", q.q_success},
                        {"q_error", q.q_error},
                        {"q_inconclusive", q.q_inconclusive},
                        {"joint", detail::table_json(analytic)},
                        {"mutual_information", closed_form_I_std(q)}};

  if (tally.sifted_correct() == 0) {
    report["agreement_4sigma"] = false;
    return report;
  }
  const std::uint64_t n = tally.sifted_correct();
  const JointDistribution empirical = empirical_joint(tally);
  auto se = nlohmann::json::array();
  double max_z = 0.0;
  for (std::size_t r = 0; r < 2; ++r) {
    auto row = nlohmann::json::array();
    for (std::size_t c = 0; c < 3; ++c) {
      const double p = analytic(r, c);
      const double s = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
      row.push_back(s);
      const double dev = std::abs(empirical(r, c) - p);
      if (s > 0.0) {
        max_z = std::max(max_z, dev / s);
      } else if (dev > 0.0) {
        max_z = std::numeric_limits<double>::infinity();
      }
    }
    se.push_back(row);
  }
  const double mi_emp = mutual_information(empirical);
  const double mi_true = mutual_information(analytic);
  const double mi_se = mutual_information_std_error(analytic, n);
  const double mi_bias = mutual_information_bias(analytic, n);
  const bool mi_agree = std::abs(mi_emp - mi_true) <= 4.0 * mi_se + mi_bias;
  agree = agree && max_z <= 4.0 && mi_agree;

  report["empirical"] = {{"samples", n},
                         {"joint", detail::table_json(empirical)},
                         {"joint_std_error", se},
                         {"max_cell_z", std::isfinite(max_z) ? nlohmann::json(max_z) : nlohmann::json("inf")}};
  report["mutual_information"] = {
      {"empirical", mi_emp}, {"analytic", mi_true}, {"std_error", mi_se}, {"plug_in_bias", mi_bias}};
  report["agreement_4sigma"] = agree;
  return report;
}

/// POVM matrices, outcome probabilities, the error lower bound and the
/// completeness residual max|M_+ + M_- + M_? - 1|.
inline nlohmann::json povm_report(double theta, double xi) {
  const DiscriminationConfig cfg = config_from_xi(theta, xi);
  const Povm p = build_povm(cfg);
  const OutcomeProbs q = outcome_probs(cfg);
  const double residual = max_abs_entry(p.m_plus + p.m_minus + p.m_inconclusive - ComplexMat::identity(2));
  return nlohmann::json{
      {"theta", cfg.theta()},
      {"xi", xi},
      {"phi", cfg.phi()},
      {"gamma", cfg.gamma()},
      {"eta", cfg.eta()},
      {"povm",
       {{"plus", detail::matrix_json(p.m_plus)},
        {"minus", detail::matrix_json(p.m_minus)},
        {"inconclusive", detail::matrix_json(p.m_inconclusive)}}},
      {"outcome_probs", {{"q_success", q.q_success}, {"q_error", q.q_error}, {"q_inconclusive", q.q_inconclusive}}},
      {"error_lower_bound", error_lower_bound(cfg.theta(), q.q_inconclusive)},
      {"completeness_residual", residual},
  };
}

/// Writes `content` to `path`, or to `stdout_stream` when path is empty or "-".
inline int emit(const std::string& content, const std::string& path, std::ostream& stdout_stream, std::ostream& diag) {
  if (path.empty() || path == "-") {
    stdout_stream << content;
    stdout_stream.flush();
    return stdout_stream ? kOk : kIoError;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    diag << "error: cannot open '" << path << "' for writing\n";
    return kIoError;
  }
  file << content;
  file.close();
  if (!file) {
    diag << "error: failed writing '" << path << "'\n";
    return kIoError;
  }
  return kOk;
}

namespace detail {

template <typename Produce>
int run_command(Produce&& produce, const std::string& path, std::ostream& out, std::ostream& diag) {
  std::string content;
  try {
    content = produce();
  } catch (const std::invalid_argument& e) {
    diag << "error: " << e.what() << "\n";
    return kArgumentError;
  } catch (const std::domain_error& e) {
    diag << "error: " << e.what() << "\n";
    return kArgumentError;
  }
  return emit(content, path, out, diag);
}

}  // namespace detail

inline int cmd_curves(const SweepSpec& spec, const std::string& path, std::ostream& out = std::cout,
                      std::ostream& diag = std::cerr) {
  return detail::run_command(
      [&] {
        std::ostringstream s;
        write_curves(spec, s);
        return s.str();
      },
      path, out, diag);
}

inline int cmd_bounds(const BoundsSpec& spec, const std::string& path, std::ostream& out = std::cout,
                      std::ostream& diag = std::cerr) {
  return detail::run_command(
      [&] {
        std::ostringstream s;
        write_bounds(spec, s);
        return s.str();
      },
      path, out, diag);
}

inline int cmd_simulate(const SessionConfig& cfg, const std::string& path, std::ostream& out = std::cout,
                        std::ostream& diag = std::cerr) {
  return detail::run_command([&] { return simulate_report(cfg).dump(2) + "\n"; }, path, out, diag);
}

inline int cmd_povm(double theta, double xi, const std::string& path, std::ostream& out = std::cout,
                    std::ostream& diag = std::cerr) {
  return detail::run_command([&] { return povm_report(theta, xi).dump(2) + "\n"; }, path, out, diag);
}

}  // namespace fpb::cli
