#include "osqbc/harness.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "osqbc/adversary.hpp"
#include "osqbc/codes.hpp"
#include "osqbc/nogo.hpp"
#include "osqbc/protocol.hpp"
#include "osqbc/qot.hpp"
#include "osqbc/rng.hpp"

namespace osqbc::harness {

const char* kVersion = "0.1.0";

void apply_config_line(ExperimentConfig& config, const std::string& key,
                       const std::string& value) {
  if (key == "scenario") config.scenario = value;
  else if (key == "code") config.code = value;
  else if (key == "n") config.n = std::stoi(value);
  else if (key == "s") config.s = std::stoi(value);
  else if (key == "alpha") config.alpha = std::stod(value);
  else if (key == "eps_dephase") config.eps_dephase = std::stod(value);
  else if (key == "eps_loss") config.eps_loss = std::stod(value);
  else if (key == "alpha_attack") config.alpha_attack = std::stod(value);
  else if (key == "target_b") config.target_b = std::stoi(value);
  else if (key == "defense") config.defense = (value == "on" || value == "true" || value == "1");
  else if (key == "qot_mode") config.qot_mode = value;
  else if (key == "qot_n") config.qot_n = std::stoi(value);
  else if (key == "trials") config.trials = std::stoi(value);
  else if (key == "seed") config.seed = std::stoull(value);
  else throw std::invalid_argument("unknown config key: " + key);
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  ExperimentConfig config;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("malformed config line: " + line);
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t");
      auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    apply_config_line(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return config;
}

Metric summarize(double sum, double sum_sq, long count) {
  Metric m;
  m.count = count;
  if (count <= 0) return m;
  m.mean = sum / double(count);
  double var = sum_sq / double(count) - m.mean * m.mean;
  if (var < 0.0) var = 0.0;
  m.stderr_ = std::sqrt(var / double(count));
  m.ci95_low = m.mean - 1.96 * m.stderr_;
  m.ci95_high = m.mean + 1.96 * m.stderr_;
  return m;
}

namespace {

// Streaming accumulator so merge order cannot affect the report.
struct Accum {
  double sum = 0.0, sum_sq = 0.0;
  long count = 0;
  void add(double x) {
    sum += x;
    sum_sq += x * x;
    ++count;
  }
  Metric metric() const { return summarize(sum, sum_sq, count); }
};

std::map<std::string, std::string> echo_params(const ExperimentConfig& c) {
  std::map<std::string, std::string> p;
  auto num = [](double v) {
    std::ostringstream os;
    os << v;
    return os.str();
  };
  p["code"] = c.code;
  p["n"] = std::to_string(c.n);
  p["s"] = std::to_string(c.s);
  p["alpha"] = num(c.alpha);
  p["eps_dephase"] = num(c.eps_dephase);
  p["eps_loss"] = num(c.eps_loss);
  p["alpha_attack"] = num(c.alpha_attack);
  p["target_b"] = std::to_string(c.target_b);
  p["defense"] = c.defense ? "on" : "off";
  p["qot_mode"] = c.qot_mode;
  p["qot_n"] = std::to_string(c.qot_n);
  p["trials"] = std::to_string(c.trials);
  return p;
}

std::string verdict_key(const protocol::Transcript& t, const protocol::Verdict* v) {
  if (t.aborted)
    return t.aborted == protocol::AbortReason::abort_alpha ? "abort_alpha" : "timing_mismatch";
  if (!v) return "pending";
  return v->accept ? "accept" : "reject_" + protocol::to_string(*v->reason);
}

protocol::ProtocolParams protocol_params(const ExperimentConfig& c,
                                         const codes::LinearCode& code) {
  auto p = protocol::params_for_code(code, c.s, c.alpha);
  p.eps_dephase = c.eps_dephase;
  p.eps_loss = c.eps_loss;
  return p;
}

void run_honest(const ExperimentConfig& c, Report& report) {
  auto code = codes::make_code(c.code);
  auto params = protocol_params(c, code);
  protocol::validate_params(params);
  Accum accept, n_prime, alpha_est;
  for (int trial = 0; trial < c.trials; ++trial) {
    Rng rng = make_stream(c.seed, trial);
    auto key = codes::draw_partition_key(code, rng);
    auto alice = protocol::honest_alice(flip(rng, 0.5));
    auto t = protocol::run_commit(params, alice, protocol::honest_bob(params), code, key, rng);
    n_prime.add(t.n_prime);
    alpha_est.add(t.alpha_estimate);
    if (t.aborted) {
      accept.add(0.0);
      ++report.verdicts[verdict_key(t, nullptr)];
      continue;
    }
    auto ann = protocol::make_announcement(t, key, rng);
    auto v = protocol::run_unveil(t, ann, code, key,
                                  std::max(params.eps_dephase, params.eps_loss));
    accept.add(v.accept ? 1.0 : 0.0);
    ++report.verdicts[verdict_key(t, &v)];
  }
  report.metrics["accept_rate"] = accept.metric();
  report.metrics["n_prime"] = n_prime.metric();
  report.metrics["alpha_estimate"] = alpha_est.metric();
}

void run_estimate_alpha(const ExperimentConfig& c, Report& report) {
  int n = c.n > 0 ? c.n : codes::make_code(c.code).n;
  int s = c.s > 0 ? c.s : 50 * n;
  Accum est;
  for (int trial = 0; trial < c.trials; ++trial) {
    Rng rng = make_stream(c.seed, trial);
    int n_prime =
        protocol::estimate_alpha_trial(n, s, c.alpha, c.eps_dephase, c.eps_loss, rng);
    est.add(protocol::estimate_alpha(n_prime, n, s));
  }
  report.metrics["alpha_estimate"] = est.metric();
}

void run_alice_flip(const ExperimentConfig& c, Report& report) {
  auto code = codes::make_code(c.code);
  auto params = protocol_params(c, code);
  Accum escape, distance, analytic;
  for (int trial = 0; trial < c.trials; ++trial) {
    Rng rng = make_stream(c.seed, trial);
    auto key = codes::draw_partition_key(code, rng);
    auto alice = protocol::honest_alice(1 - c.target_b);
    alice.apply_abort_rule = false;  // a cheating Alice has no reason to abort
    auto t = protocol::run_commit(params, alice, protocol::honest_bob(params), code, key, rng);
    if (t.aborted) {  // Bob-side timing abort, impossible at eps = 0
      ++report.verdicts[verdict_key(t, nullptr)];
      continue;
    }
    auto ann = adversary::alice_flip_attack(t.committed, code, key, c.target_b);
    int dist = codes::hamming_distance(ann.c, t.committed);
    distance.add(dist);
    analytic.add(std::pow(1.0 - params.alpha, dist));
    auto v = protocol::run_unveil(t, ann, code, key,
                                  std::max(params.eps_dephase, params.eps_loss));
    escape.add(v.accept ? 1.0 : 0.0);
    ++report.verdicts[verdict_key(t, &v)];
  }
  report.metrics["escape_rate"] = escape.metric();
  report.metrics["flip_distance"] = distance.metric();
  report.metrics["analytic_escape"] = analytic.metric();
}

void run_alice_superpose(const ExperimentConfig& c, Report& report) {
  auto code = codes::make_code(c.code);
  auto params = protocol_params(c, code);
  Accum accept, unveiled_one;
  for (int trial = 0; trial < c.trials; ++trial) {
    Rng rng = make_stream(c.seed, trial);
    auto key = codes::draw_partition_key(code, rng);
    auto alice = protocol::superposed_alice(adversary::uniform_commitment(code));
    auto t = protocol::run_commit(params, alice, protocol::honest_bob(params), code, key, rng);
    if (t.aborted) {
      ++report.verdicts[verdict_key(t, nullptr)];
      continue;
    }
    auto ann = protocol::make_announcement(t, key, rng);
    auto v = protocol::run_unveil(t, ann, code, key,
                                  std::max(params.eps_dephase, params.eps_loss));
    accept.add(v.accept ? 1.0 : 0.0);
    unveiled_one.add(ann.b);
    ++report.verdicts[verdict_key(t, &v)];
  }
  report.metrics["accept_rate"] = accept.metric();
  report.metrics["unveiled_one_rate"] = unveiled_one.metric();
}

void run_bob_intercept(const ExperimentConfig& c, Report& report) {
  auto code = codes::make_code(c.code);
  auto params = protocol_params(c, code);
  Accum abort, learned, alpha_est;
  for (int trial = 0; trial < c.trials; ++trial) {
    Rng rng = make_stream(c.seed, trial);
    auto key = codes::draw_partition_key(code, rng);
    auto alice = protocol::honest_alice(flip(rng, 0.5));
    protocol::BobStrategy bob{c.alpha_attack, c.defense};
    auto t = protocol::run_commit(params, alice, bob, code, key, rng);
    abort.add(t.aborted == protocol::AbortReason::abort_alpha ? 1.0 : 0.0);
    alpha_est.add(t.alpha_estimate);
    int known = 0;
    for (std::size_t i = 0; i < t.send_times.size(); ++i) {
      int slot = t.send_times[i];
      if (t.bob_modes[slot - 1] == protocol::BobMode::intercept &&
          t.bob_observations[slot - 1] != protocol::Observation::nothing)
        ++known;
    }
    learned.add(known);
    ++report.verdicts[verdict_key(t, nullptr)];
  }
  report.metrics["abort_rate"] = abort.metric();
  report.metrics["learned_bits"] = learned.metric();
  report.metrics["alpha_estimate"] = alpha_est.metric();
}

void run_counterfactual(const ExperimentConfig& c, Report& report) {
  adversary::DefenseConfig defense{c.defense};
  Accum dc_given_bypass, identify;
  long bypass_trials = 0;
  for (int trial = 0; trial < c.trials; ++trial) {
    Rng rng = make_stream(c.seed, trial);
    auto mode = flip(rng, c.alpha) ? adversary::BobMode::intercept : adversary::BobMode::bypass;
    auto probe = adversary::counterfactual_probe(mode, defense, rng);
    if (mode == adversary::BobMode::bypass) {
      ++bypass_trials;
      dc_given_bypass.add(probe.result == adversary::ProbeOutcome::Result::dc ? 1.0 : 0.0);
    }
    auto post = adversary::infer_mode(probe, c.alpha, defense);
    bool guess_intercept = post.p_intercept > post.p_bypass;
    identify.add((guess_intercept == (mode == adversary::BobMode::intercept)) ? 1.0 : 0.0);
  }
  report.metrics["dc_given_bypass"] = dc_given_bypass.metric();
  report.metrics["identify_accuracy"] = identify.metric();
  (void)bypass_trials;
}

void run_coin_toss(const ExperimentConfig& c, Report& report) {
  auto code = codes::make_code(c.code);
  auto params = protocol_params(c, code);
  Accum y_mean, accept;
  for (int trial = 0; trial < c.trials; ++trial) {
    Rng rng = make_stream(c.seed, trial);
    auto key = codes::draw_partition_key(code, rng);
    auto alice = protocol::honest_alice(flip(rng, 0.5));
    auto result = protocol::run_coin_toss(params, alice, code, key, rng);
    if (result.aborted) {
      ++report.verdicts["abort"];
      continue;
    }
    accept.add(result.verdict.accept ? 1.0 : 0.0);
    if (result.verdict.accept) y_mean.add(result.y);
    ++report.verdicts[result.verdict.accept ? "accept" : "reject"];
  }
  report.metrics["y_mean"] = y_mean.metric();
  report.metrics["accept_rate"] = accept.metric();
}

void run_nogo(const ExperimentConfig& c, Report& report) {
  double cheat_equal = nogo::cheat_success(nogo::bb84_style_state(0), nogo::bb84_style_state(1));
  auto code = codes::make_code("repetition(2)");
  codes::PartitionKey key{0b01, 2};
  double cheat_orth = nogo::cheat_success(nogo::commitment_state(code, key, 0),
                                          nogo::commitment_state(code, key, 1));
  report.metrics["cheat_equal_reduced"] = summarize(cheat_equal, cheat_equal * cheat_equal, 1);
  report.metrics["cheat_orthogonal"] = summarize(cheat_orth, cheat_orth * cheat_orth, 1);
  (void)c;
}

void run_qot(const ExperimentConfig& c, Report& report) {
  Accum correct;
  for (int trial = 0; trial < c.trials; ++trial) {
    Rng rng = make_stream(c.seed, trial);
    bool ok;
    if (c.qot_mode == "curious")
      ok = qot::run_qot_curious(c.qot_n, rng).correct;
    else
      ok = qot::run_qot_honest(c.qot_n, rng).correct;
    correct.add(ok ? 1.0 : 0.0);
  }
  report.metrics["correct_rate"] = correct.metric();
  report.metrics["povm_reliability"] =
      summarize(qot::povm_reliability(qot::optimal_povm()), 0.0, 1);
}

}  // namespace

Report run_experiment(const ExperimentConfig& config) {
  if (config.trials < 1) throw std::invalid_argument("run_experiment: trials >= 1 required");
  Report report;
  report.scenario = config.scenario;
  report.params = echo_params(config);
  report.seed = config.seed;
  report.version = kVersion;

  if (config.scenario == "honest") run_honest(config, report);
  else if (config.scenario == "estimate_alpha") run_estimate_alpha(config, report);
  else if (config.scenario == "alice_flip") run_alice_flip(config, report);
  else if (config.scenario == "alice_superpose") run_alice_superpose(config, report);
  else if (config.scenario == "bob_intercept") run_bob_intercept(config, report);
  else if (config.scenario == "counterfactual") run_counterfactual(config, report);
  else if (config.scenario == "coin_toss") run_coin_toss(config, report);
  else if (config.scenario == "nogo") run_nogo(config, report);
  else if (config.scenario == "qot") run_qot(config, report);
  else throw std::invalid_argument("run_experiment: unknown scenario " + config.scenario);
  return report;
}

std::vector<Report> sweep(const ExperimentConfig& config, const std::string& parameter,
                          const std::vector<std::string>& values) {
  std::vector<Report> out;
  std::uint64_t master = config.seed;
  for (std::size_t i = 0; i < values.size(); ++i) {
    ExperimentConfig c = config;
    const std::string& v = values[i];
    if (parameter == "alpha") c.alpha = std::stod(v);
    else if (parameter == "d" || parameter == "n") c.code = "repetition(" + v + ")";
    else if (parameter == "s") c.s = std::stoi(v);
    else if (parameter == "eps") { c.eps_dephase = std::stod(v); c.eps_loss = std::stod(v); }
    else if (parameter == "trials") c.trials = std::stoi(v);
    else throw std::invalid_argument("sweep: unknown parameter " + parameter);
    c.seed = mix64(master) ^ mix64(i + 1);
    out.push_back(run_experiment(c));
  }
  return out;
}

std::string Report::to_json() const {
  nlohmann::json j;
  j["scenario"] = scenario;
  j["params"] = params;
  nlohmann::json jm;
  for (const auto& [name, m] : metrics) {
    jm[name] = {{"mean", m.mean},
                {"stderr", m.stderr_},
                {"count", m.count},
                {"ci95_low", m.ci95_low},
                {"ci95_high", m.ci95_high}};
  }
  j["metrics"] = jm;
  j["verdicts"] = verdicts;
  j["seed"] = seed;
  j["version"] = version;
  return j.dump(2);
}

std::string Report::to_csv() const {
  std::ostringstream os;
  os << "metric,mean,stderr,count,ci95_low,ci95_high\n";
  os.precision(12);
  for (const auto& [name, m] : metrics)
    os << name << ',' << m.mean << ',' << m.stderr_ << ',' << m.count << ',' << m.ci95_low
       << ',' << m.ci95_high << '\n';
  return os.str();
}

}  // namespace osqbc::harness
