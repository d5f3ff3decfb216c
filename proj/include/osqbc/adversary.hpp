#pragma once

#include <complex>
#include <vector>

#include "osqbc/codes.hpp"
#include "osqbc/optics.hpp"
#include "osqbc/rng.hpp"

namespace osqbc::adversary {

constexpr double kAmplitudeTolerance = 1e-12;

// Unveil announcement: the claimed bit and codeword.
struct Announcement {
  int b = 0;
  codes::Word c = 0;
};

// Amplitude distribution over codewords for an entangled commitment. All
// branch states are mutually orthogonal products, so every in-protocol
// measurement is diagonal in the branch basis and |lambda_c|^2 statistics
// are exact.
struct SuperposedCommitment {
  std::vector<codes::Word> support;          // subset of the code, sorted
  std::vector<std::complex<double>> lambdas;  // matching amplitudes, unit norm
  int n = 0;
};

SuperposedCommitment superposed_commit(const codes::LinearCode& code,
                                       const std::vector<codes::Word>& support,
                                       const std::vector<std::complex<double>>& lambdas);

// Uniform amplitudes over one partition subset.
SuperposedCommitment uniform_commitment(const codes::LinearCode& code,
                                        const codes::PartitionKey& r, int b);

// Uniform amplitudes over the whole code.
SuperposedCommitment uniform_commitment(const codes::LinearCode& code);

// Posterior after Bob observed bit `outcome` at codeword position (0-based).
SuperposedCommitment collapse_on_intercept(const SuperposedCommitment& sc, int position,
                                           int outcome);

// Marginal probability that position carries bit 1.
double marginal_one(const SuperposedCommitment& sc, int position);

// (p0, p1): unveil probabilities for b = 0 and b = 1.
std::pair<double, double> unveil_probabilities(const SuperposedCommitment& sc,
                                               const codes::PartitionKey& r);

// Alice's final measurement: a codeword sampled with weight |lambda_c|^2.
codes::Word sample_unveil(const SuperposedCommitment& sc, Rng& rng);

// Codeword-flip attack: announce the member of C_(target_b) nearest in
// Hamming distance to the committed codeword.
Announcement alice_flip_attack(codes::Word committed, const codes::LinearCode& code,
                               const codes::PartitionKey& r, int target_b);

enum class BobMode { intercept, bypass };

struct ProbeOutcome {
  enum class Result { dc, dd, none } result = Result::none;
  int slot = 1;
};

struct DefenseConfig {
  bool enabled = false;  // random phase, same on both channels, per bypass slot
};

// Counterfactual probe against Bob's per-slot mode under the ideal-FBS
// model. In bypass mode the probe packet returns from Bob's channel and
// interferes; the interference law comes from the optics module with the
// defense phase applied to the returning packet.
ProbeOutcome counterfactual_probe(BobMode bob_mode, const DefenseConfig& defense, Rng& rng,
                                  int slot = 1);

// Probability that the Dc detector fires given bypass mode and a fixed
// defense phase, computed through the optics module.
double bypass_dc_probability(double defense_phase);

struct ModePosterior {
  double p_intercept = 0.0;
  double p_bypass = 0.0;
};

// Exact Bayes posterior over Bob's mode for one probed slot under the
// declared probe model.
ModePosterior infer_mode(const ProbeOutcome& observation, double prior_intercept,
                         const DefenseConfig& defense);

}  // namespace osqbc::adversary
