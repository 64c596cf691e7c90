// fpb: sweeps, bounds, simulation and POVM reports for the FPB attack on BB84.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "fpb/cli.hpp"

namespace {

using fpb::cli::kArgumentError;
using fpb::cli::kIoError;

struct ConfigError {
  int code;
  std::string message;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool given_on_command_line(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(),
                     [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

// Expands `--config FILE` into `--key value` pairs. Lines are `key = value`;
// `#` starts a comment; a repeated key adds another value. Keys already given
// on the command line are skipped so that flags win over the file.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw ConfigError{kArgumentError, "--config requires a file"};
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (path.empty()) return args;

  std::ifstream in(path);
  if (!in) throw ConfigError{kIoError, "cannot read config file '" + path + "'"};
  std::vector<std::string> injected;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError{kArgumentError, path + ":" + std::to_string(lineno) + ": expected key=value"};
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError{kArgumentError, path + ":" + std::to_string(lineno) + ": empty key"};
    const std::string flag = "--" + key;
    if (given_on_command_line(args, flag)) continue;
    injected.push_back(flag);
    injected.push_back(value);
  }
  // Insert right after the subcommand name so the options bind to it.
  const std::size_t at = args.empty() ? 0 : 1;
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(at), injected.begin(), injected.end());
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = expand_config(std::move(args));
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  }

  CLI::App app{"FPB attack on BB84 under generalized discrimination"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");
  std::string config_doc;
  app.add_option("--config", config_doc, "key=value file applied to the subcommand; flags take precedence");

  std::string out;
  auto add_out = [&](CLI::App* sub) { sub->add_option("--out", out, "output file (default: standard output)"); };

  // curves
  auto* curves = app.add_subcommand("curves", "mutual-information curves versus P_E (long CSV)");
  fpb::cli::SweepSpec sweep;
  std::vector<double> curve_xi;
  std::vector<std::string> orders;
  std::vector<std::string> measures;
  curves->add_option("--p-e-min", sweep.min, "smallest error rate");
  curves->add_option("--p-e-max", sweep.max, "largest error rate");
  curves->add_option("--steps", sweep.steps, "grid points (>= 2)");
  curves->add_option("--xi", curve_xi, "discrimination ratio, repeatable");
  curves->add_option("--order", orders, "Renyi order: 1, a positive real, or inf; repeatable");
  curves->add_option("--measure", measures, "std, v1, v2, v4, v1_inf or cond_prob; repeatable");
  add_out(curves);

  // bounds
  auto* bounds = app.add_subcommand("bounds", "entropic uncertainty bounds versus eta or P_E (CSV)");
  std::string variable = "eta";
  double eta_min = 0.0;
  double eta_max = 1.0;
  double pe_min = 0.001;
  double pe_max = fpb::kMaxErrorRate;
  std::size_t bound_steps = 0;
  std::vector<double> bound_xi;
  bounds->add_option("--variable", variable, "sweep variable: eta or p_e")->check(CLI::IsMember({"eta", "p_e"}));
  auto* opt_eta_min = bounds->add_option("--eta-min", eta_min, "smallest eta");
  auto* opt_eta_max = bounds->add_option("--eta-max", eta_max, "largest eta");
  auto* opt_pe_min = bounds->add_option("--p-e-min", pe_min, "smallest error rate");
  auto* opt_pe_max = bounds->add_option("--p-e-max", pe_max, "largest error rate");
  bounds->add_option("--steps", bound_steps, "grid points (default 501 for eta, 334 for p_e)");
  bounds->add_option("--xi", bound_xi, "discrimination ratio for p_e sweeps (single value)");
  add_out(bounds);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo session report (JSON)");
  fpb::SessionConfig session;
  std::string measurement_order = "bob-first";
  simulate->add_option("--p-e", session.error_rate, "probe error rate");
  simulate->add_option("--xi", session.xi, "discrimination ratio");
  simulate->add_option("--seed", session.seed, "random seed");
  simulate->add_option("--rounds", session.rounds, "number of rounds");
  simulate->add_option("--threads", session.threads, "worker threads (does not change the tally)");
  simulate->add_option("--measurement-order", measurement_order, "bob-first or eve-first")
      ->check(CLI::IsMember({"bob-first", "eve-first"}));
  add_out(simulate);

  // povm
  auto* povm = app.add_subcommand("povm", "POVM matrices and outcome probabilities (JSON)");
  double theta = 0.0;
  double povm_xi = 0.0;
  double povm_pe = 0.0;
  auto* opt_theta = povm->add_option("--theta", theta, "input-state angle in [0, pi/4]");
  auto* opt_pe = povm->add_option("--p-e", povm_pe, "derive theta from this error rate");
  opt_theta->excludes(opt_pe);
  povm->add_option("--xi", povm_xi, "discrimination ratio");
  add_out(povm);

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kArgumentError;
  }

  try {
    if (curves->parsed()) {
      if (!curve_xi.empty()) sweep.xi_values = curve_xi;
      if (!orders.empty()) {
        sweep.orders.clear();
        for (const auto& o : orders) sweep.orders.push_back(fpb::cli::parse_order(o));
      }
      if (!measures.empty()) {
        sweep.measures.clear();
        for (const auto& m : measures) sweep.measures.push_back(fpb::cli::parse_measure(m));
      }
      return fpb::cli::cmd_curves(sweep, out);
    }
    if (bounds->parsed()) {
      fpb::cli::BoundsSpec spec;
      if (variable == "p_e") {
        if (opt_eta_min->count() + opt_eta_max->count() > 0) {
          throw std::invalid_argument("--eta-min/--eta-max apply to eta sweeps only");
        }
        spec = fpb::cli::BoundsSpec::error_rate_defaults();
        spec.min = pe_min;
        spec.max = pe_max;
        if (bound_xi.size() > 1) throw std::invalid_argument("p_e sweeps take a single --xi");
        if (!bound_xi.empty()) spec.xi = bound_xi.front();
      } else {
        if (opt_pe_min->count() + opt_pe_max->count() > 0 || !bound_xi.empty()) {
          throw std::invalid_argument("--p-e-min/--p-e-max/--xi apply to p_e sweeps only");
        }
        spec.min = eta_min;
        spec.max = eta_max;
      }
      if (bound_steps != 0) spec.steps = bound_steps;
      return fpb::cli::cmd_bounds(spec, out);
    }
    if (simulate->parsed()) {
      session.order = measurement_order == "eve-first" ? fpb::MeasurementOrder::eve_then_bob
                                                       : fpb::MeasurementOrder::bob_then_eve;
      return fpb::cli::cmd_simulate(session, out);
    }
    if (opt_pe->count() > 0) theta = fpb::theta_from_error_rate(fpb::ProbeConfig(povm_pe));
    return fpb::cli::cmd_povm(theta, povm_xi, out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kArgumentError;
  }
}
