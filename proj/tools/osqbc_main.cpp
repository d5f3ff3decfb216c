#include <cmath>
#include <fstream>
#include <numbers>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "osqbc/harness.hpp"
#include "osqbc/nogo.hpp"
#include "osqbc/qot.hpp"
#include "osqbc/rng.hpp"

namespace {

using osqbc::harness::ExperimentConfig;
using osqbc::harness::Report;

struct CommonOpts {
  std::string config_path;
  std::string out_path;
  std::string format = "json";
  std::uint64_t seed = 0;
  int trials = 0;
  bool seed_set = false;
  bool trials_set = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "key=value config file");
  cmd->add_option("--out", opts.out_path, "output path (default stdout)");
  cmd->add_option("--format", opts.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--seed", opts.seed, "master seed")
      ->each([&](const std::string&) { opts.seed_set = true; });
  cmd->add_option("--trials", opts.trials, "trial count")
      ->each([&](const std::string&) { opts.trials_set = true; });
}

ExperimentConfig load_config(const CommonOpts& opts, const std::string& scenario) {
  ExperimentConfig config;
  if (!opts.config_path.empty()) config = osqbc::harness::parse_config_file(opts.config_path);
  if (!scenario.empty()) config.scenario = scenario;
  if (opts.seed_set) config.seed = opts.seed;
  if (opts.trials_set) config.trials = opts.trials;
  return config;
}

void emit(const std::string& text, const CommonOpts& opts) {
  if (opts.out_path.empty()) {
    std::cout << text << '\n';
    return;
  }
  std::ofstream out(opts.out_path);
  if (!out) throw std::runtime_error("cannot open output file: " + opts.out_path);
  out << text << '\n';
}

void emit_report(const Report& report, const CommonOpts& opts) {
  emit(opts.format == "csv" ? report.to_csv() : report.to_json(), opts);
}

// Pure-state family |0>(cos t|0> + sin t|1>) against |0>|0>: sweeps the
// reduced states from identical to orthogonal.
std::string nogo_sweep_csv(int points) {
  std::ostringstream os;
  os.precision(12);
  os << "theta,trace_distance,fidelity,cheat_success\n";
  auto psi1 = osqbc::nogo::make_joint_state(
      (Eigen::VectorXcd(4) << 1, 0, 0, 0).finished(), 2, 2);
  for (int i = 0; i < points; ++i) {
    double theta = (points == 1) ? 0.0 : (std::numbers::pi / 2) * i / (points - 1);
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(4);
    amps[0] = std::cos(theta);
    amps[1] = std::sin(theta);
    auto psi0 = osqbc::nogo::make_joint_state(std::move(amps), 2, 2);
    auto rho0 = osqbc::nogo::reduced_density(psi0, osqbc::nogo::Keep::B);
    auto rho1 = osqbc::nogo::reduced_density(psi1, osqbc::nogo::Keep::B);
    os << theta << ',' << osqbc::nogo::trace_distance(rho0, rho1) << ','
       << osqbc::nogo::uhlmann_fidelity(rho0, rho1) << ','
       << osqbc::nogo::cheat_success(psi0, psi1) << '\n';
  }
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"orthogonal-state bit commitment laboratory"};
  app.require_subcommand(1);

  CommonOpts honest_opts, estimate_opts, attack_opts, nogo_opts, qot_opts, coin_opts, sweep_opts;

  auto* honest = app.add_subcommand("honest", "honest commit/unveil runs");
  add_common(honest, honest_opts);

  auto* estimate = app.add_subcommand("estimate-alpha", "intercept-rate estimator study");
  add_common(estimate, estimate_opts);

  auto* attack = app.add_subcommand("attack", "adversarial scenarios");
  add_common(attack, attack_opts);
  std::string attack_kind = "alice_flip";
  attack->add_option("--kind", attack_kind, "attack scenario")
      ->check(CLI::IsMember({"alice_flip", "alice_superpose", "bob_intercept", "counterfactual"}));

  auto* nogo = app.add_subcommand("nogo", "reduced-state indistinguishability sweep");
  add_common(nogo, nogo_opts);
  int nogo_points = 9;
  nogo->add_option("--points", nogo_points, "sweep resolution")->check(CLI::PositiveNumber);

  auto* qot = app.add_subcommand("qot", "oblivious transfer runs");
  std::string qot_mode = "honest";
  int qot_n = 16;
  qot->add_option("--mode", qot_mode, "honest or curious")
      ->check(CLI::IsMember({"honest", "curious"}));
  qot->add_option("--n", qot_n, "string length")->check(CLI::PositiveNumber);
  add_common(qot, qot_opts);

  auto* coin = app.add_subcommand("coin-toss", "commitment-backed coin toss");
  add_common(coin, coin_opts);

  auto* sweep = app.add_subcommand("sweep", "run a scenario across parameter values");
  add_common(sweep, sweep_opts);
  std::string sweep_scenario = "honest";
  std::string sweep_param;
  std::vector<std::string> sweep_values;
  sweep->add_option("--scenario", sweep_scenario, "scenario to sweep");
  sweep->add_option("--param", sweep_param, "parameter name")->required();
  sweep->add_option("--values", sweep_values, "parameter values")->required()->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (honest->parsed()) {
      emit_report(osqbc::harness::run_experiment(load_config(honest_opts, "honest")),
                  honest_opts);
    } else if (estimate->parsed()) {
      emit_report(osqbc::harness::run_experiment(load_config(estimate_opts, "estimate_alpha")),
                  estimate_opts);
    } else if (attack->parsed()) {
      emit_report(osqbc::harness::run_experiment(load_config(attack_opts, attack_kind)),
                  attack_opts);
    } else if (nogo->parsed()) {
      if (nogo_opts.format == "csv") {
        emit(nogo_sweep_csv(nogo_points), nogo_opts);
      } else {
        emit_report(osqbc::harness::run_experiment(load_config(nogo_opts, "nogo")), nogo_opts);
      }
    } else if (qot->parsed()) {
      auto config = load_config(qot_opts, "qot");
      config.qot_mode = qot_mode;
      config.qot_n = qot_n;
      auto report = osqbc::harness::run_experiment(config);
      const auto& m = report.metrics.at("correct_rate");
      nlohmann::json j;
      j["mean"] = m.mean;
      j["stderr"] = m.stderr_;
      j["trials"] = m.count;
      emit(j.dump(2), qot_opts);
    } else if (coin->parsed()) {
      emit_report(osqbc::harness::run_experiment(load_config(coin_opts, "coin_toss")), coin_opts);
    } else if (sweep->parsed()) {
      auto config = load_config(sweep_opts, sweep_scenario);
      auto reports = osqbc::harness::sweep(config, sweep_param, sweep_values);
      if (sweep_opts.format == "csv") {
        std::ostringstream os;
        for (std::size_t i = 0; i < reports.size(); ++i) {
          os << "# " << sweep_param << " = " << sweep_values[i] << '\n'
             << reports[i].to_csv();
        }
        emit(os.str(), sweep_opts);
      } else {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : reports) arr.push_back(nlohmann::json::parse(r.to_json()));
        emit(arr.dump(2), sweep_opts);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
