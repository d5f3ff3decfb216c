#pragma once

#include <optional>
#include <string>
#include <vector>

#include "osqbc/adversary.hpp"
#include "osqbc/codes.hpp"
#include "osqbc/optics.hpp"
#include "osqbc/rng.hpp"

namespace osqbc::protocol {

using adversary::Announcement;
using adversary::BobMode;

struct ProtocolParams {
  int n = 0;
  int k = 0;
  int d = 0;
  int s = 0;                 // time slots, default picked as 50*n by the harness
  double alpha = 0.0;        // Bob's agreed intercept probability
  double eps_dephase = 0.0;  // channel noise per leg
  double eps_loss = 0.0;
  int tau_slots = 1;         // fixed delay of the b packet
};

ProtocolParams params_for_code(const codes::LinearCode& code, int s, double alpha);

// Strict parameter ordering required of honest runs: s > n, n > k > d,
// continue threshold 1 - d/n inside (0,1). Attack scenarios may run with
// codes that violate it (a cheater has no reason to respect the ordering).
void validate_params(const ProtocolParams& params);

struct AliceStrategy {
  enum class Kind { honest, superposed } kind = Kind::honest;
  int commit_bit = 0;
  bool apply_abort_rule = true;  // step-(6) continue rule
  adversary::SuperposedCommitment initial;  // used when kind == superposed
};

AliceStrategy honest_alice(int commit_bit);
AliceStrategy superposed_alice(adversary::SuperposedCommitment initial);

struct BobStrategy {
  double alpha = 0.0;
  bool defense = false;  // randomized equal phase on both channels in bypass
};

BobStrategy honest_bob(const ProtocolParams& params);

enum class AbortReason { abort_alpha, timing_mismatch };

enum class Observation { psi0, psi1, nothing };

struct Transcript {
  std::vector<int> send_times;                       // n strictly increasing slots (1-based)
  std::vector<BobMode> bob_modes;                    // per slot
  std::vector<Observation> bob_observations;         // per slot, meaningful when intercepting
  std::vector<optics::Detection> alice_detections;   // per slot
  int n_prime = 0;
  double alpha_estimate = 0.0;
  codes::Word committed = 0;
  int committed_b = 0;
  bool quantum_commitment = false;
  adversary::SuperposedCommitment posterior;  // when quantum_commitment
  std::optional<AbortReason> aborted;
};

// Uniformly random n-subset of {1..s}, ascending.
std::vector<int> schedule_send_times(int n, int s, Rng& rng);

// 2(n' - n)/(s - n), clamped to [0,1].
double estimate_alpha(int n_prime, int n, int s);

// Click-count process of the send/intercept slot loop alone. The count does
// not depend on codeword content, so this runs without a code and supports
// any n < s. Returns n_prime.
int estimate_alpha_trial(int n, int s, double alpha, double eps_dephase, double eps_loss,
                         Rng& rng);

// One-sided 3-sigma binomial allowance for mismatches at error rate eps
// over `checked` positions.
double mismatch_allowance(double eps, int checked);

Transcript run_commit(const ProtocolParams& params, const AliceStrategy& alice,
                      const BobStrategy& bob, const codes::LinearCode& code,
                      const codes::PartitionKey& r, Rng& rng);

enum class RejectReason { not_codeword, parity_mismatch, state_mismatch, abort_alpha,
                          timing_mismatch };

struct Verdict {
  bool accept = false;
  std::optional<RejectReason> reason;
};

std::string to_string(RejectReason reason);

Verdict run_unveil(const Transcript& transcript, const Announcement& announcement,
                   const codes::LinearCode& code, const codes::PartitionKey& r,
                   double eps_tolerance);

// Honest-case announcement; a superposed Alice completes her deferred
// measurement here.
Announcement make_announcement(Transcript& transcript, const codes::PartitionKey& r, Rng& rng);

struct CoinTossResult {
  int y = 0;  // b XOR x on accept
  int x = 0;
  int b = 0;
  Verdict verdict;
  bool aborted = false;
};

CoinTossResult run_coin_toss(const ProtocolParams& params, const AliceStrategy& alice,
                             const codes::LinearCode& code, const codes::PartitionKey& r,
                             Rng& rng);

struct InstanceResult {
  Transcript transcript;
  Verdict verdict;
  int bit = 0;
};

// m independent commit/unveil instances with per-instance RNG streams
// derived from the master seed.
std::vector<InstanceResult> run_bit_string_commit(int m, const ProtocolParams& params,
                                                  const codes::LinearCode& code,
                                                  std::uint64_t master_seed);

// Fixed-key JSON rendering of a transcript (send_times, bob_modes,
// detections, n_prime, alpha_estimate, verdict).
std::string transcript_to_json(const Transcript& transcript, const Verdict* verdict);

}  // namespace osqbc::protocol
