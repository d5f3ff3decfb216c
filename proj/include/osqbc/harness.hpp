#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace osqbc::harness {

// Flat key/value experiment description. Every run is a pure function of
// (config, seed): no implicit entropy anywhere.
struct ExperimentConfig {
  std::string scenario = "honest";  // honest, estimate_alpha, alice_flip,
                                    // alice_superpose, bob_intercept,
                                    // counterfactual, coin_toss, nogo, qot
  std::string code = "hamming7";
  int n = 0;             // estimate_alpha only: overrides the code length
  int s = 0;             // 0 -> 50*n
  double alpha = 0.2;
  double eps_dephase = 0.0;
  double eps_loss = 0.0;
  double alpha_attack = 0.5;  // bob_intercept scenario
  int target_b = 1;           // alice_flip scenario
  bool defense = false;
  std::string qot_mode = "honest";  // honest | curious
  int qot_n = 16;
  int trials = 1000;
  std::uint64_t seed = 1;
};

ExperimentConfig parse_config_file(const std::string& path);
void apply_config_line(ExperimentConfig& config, const std::string& key,
                       const std::string& value);

struct Metric {
  double mean = 0.0;
  double stderr_ = 0.0;
  long count = 0;
  double ci95_low = 0.0;
  double ci95_high = 0.0;
};

Metric summarize(double sum, double sum_sq, long count);

struct Report {
  std::string scenario;
  std::map<std::string, std::string> params;  // config echo
  std::map<std::string, Metric> metrics;
  std::map<std::string, long> verdicts;
  std::uint64_t seed = 0;
  std::string version;

  std::string to_json() const;  // fixed keys, deterministic byte-for-byte
  std::string to_csv() const;
};

extern const char* kVersion;

Report run_experiment(const ExperimentConfig& config);

// One report per value; shared master seed, per-value derived streams.
std::vector<Report> sweep(const ExperimentConfig& config, const std::string& parameter,
                          const std::vector<std::string>& values);

}  // namespace osqbc::harness
