#include "osqbc/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "json.hpp"

namespace osqbc::protocol {

using codes::Word;
using optics::Detection;
using optics::ModeKind;
using optics::ModeLabel;
using optics::PhotonState;

ProtocolParams params_for_code(const codes::LinearCode& code, int s, double alpha) {
  ProtocolParams p;
  p.n = code.n;
  p.k = code.k;
  p.d = code.d;
  p.s = (s > 0) ? s : 50 * code.n;  // s >> n, constant is ours
  p.alpha = alpha;
  return p;
}

void validate_params(const ProtocolParams& params) {
  if (!(params.s > params.n)) throw std::invalid_argument("params: requires s > n");
  if (!(params.n > params.k && params.k > params.d))
    throw std::invalid_argument("params: requires n > k > d");
  if (params.alpha < 0.0 || params.alpha > 1.0)
    throw std::invalid_argument("params: alpha out of [0,1]");
  double threshold = 1.0 - double(params.d) / double(params.n);
  if (!(threshold > 0.0 && threshold < 1.0))
    throw std::invalid_argument("params: continue threshold outside (0,1)");
  if (params.tau_slots != 1) throw std::invalid_argument("params: tau is fixed at one slot");
}

AliceStrategy honest_alice(int commit_bit) {
  AliceStrategy a;
  a.kind = AliceStrategy::Kind::honest;
  a.commit_bit = commit_bit;
  return a;
}

AliceStrategy superposed_alice(adversary::SuperposedCommitment initial) {
  AliceStrategy a;
  a.kind = AliceStrategy::Kind::superposed;
  a.initial = std::move(initial);
  return a;
}

BobStrategy honest_bob(const ProtocolParams& params) { return {params.alpha, false}; }

std::vector<int> schedule_send_times(int n, int s, Rng& rng) {
  if (n > s) throw std::invalid_argument("schedule_send_times: n > s");
  std::vector<int> times;
  times.reserve(n);
  int need = n;
  for (int t = 1; t <= s && need > 0; ++t) {
    int left = s - t + 1;
    if (std::uniform_int_distribution<int>(0, left - 1)(rng) < need) {
      times.push_back(t);
      --need;
    }
  }
  return times;
}

double estimate_alpha(int n_prime, int n, int s) {
  if (s <= n) throw std::invalid_argument("estimate_alpha: requires s > n");
  double est = 2.0 * double(n_prime - n) / double(s - n);
  return std::clamp(est, 0.0, 1.0);
}

double mismatch_allowance(double eps, int checked) {
  return eps * checked + 3.0 * std::sqrt(eps * (1.0 - eps) * checked);
}

int estimate_alpha_trial(int n, int s, double alpha, double eps_dephase, double eps_loss,
                         Rng& rng) {
  auto send_times = schedule_send_times(n, s, rng);
  std::vector<char> is_send(s + 1, 0);
  for (int t : send_times) is_send[t] = 1;
  int n_prime = 0;
  for (int slot = 1; slot <= s; ++slot) {
    PhotonState returning;
    if (flip(rng, alpha)) {
      PhotonState incoming = optics::vacuum_state();
      if (is_send[slot]) {
        incoming = optics::encode_qubit(0, slot);
        incoming = optics::apply_channel_noise(incoming, eps_dephase, eps_loss, rng);
      }
      auto det = optics::sample_detection(incoming, rng);
      if (det == Detection::no_click) {
        returning.amplitudes[{ModeKind::channel_a, slot}] = 1.0 / std::numbers::sqrt2;
        returning.amplitudes[{ModeKind::discarded, slot}] = 1.0 / std::numbers::sqrt2;
      } else {
        returning = optics::encode_qubit(det == Detection::d1 ? 1 : 0, slot);
        returning = optics::apply_channel_noise(returning, eps_dephase, eps_loss, rng);
      }
    } else {
      if (!is_send[slot]) continue;
      returning = optics::encode_qubit(0, slot);
      returning = optics::apply_channel_noise(returning, eps_dephase, eps_loss, rng);
      returning = optics::apply_channel_noise(returning, eps_dephase, eps_loss, rng);
    }
    if (optics::sample_detection(returning, rng) != Detection::no_click) ++n_prime;
  }
  return n_prime;
}

namespace {

// Bob's intercept-mode measurement of whatever Alice put on the channels
// during one slot: the standard MZ readout.
Observation intercept_measure(const PhotonState& incoming, Rng& rng) {
  switch (optics::sample_detection(incoming, rng)) {
    case Detection::d0: return Observation::psi0;
    case Detection::d1: return Observation::psi1;
    default: return Observation::nothing;
  }
}

// The returning state Alice measures when Bob found nothing and discarded
// his delayed b packet: only Bob's a packet is present.
PhotonState lone_probe_packet(int slot) {
  PhotonState s;
  s.amplitudes[{ModeKind::channel_a, slot}] = 1.0 / std::numbers::sqrt2;
  s.amplitudes[{ModeKind::discarded, slot}] = 1.0 / std::numbers::sqrt2;
  return s;
}

}  // namespace

Transcript run_commit(const ProtocolParams& params, const AliceStrategy& alice,
                      const BobStrategy& bob, const codes::LinearCode& code,
                      const codes::PartitionKey& r, Rng& rng) {
  if (code.n != params.n) throw std::invalid_argument("run_commit: code length mismatch");
  if (r.n != code.n) throw std::invalid_argument("run_commit: key length mismatch");

  Transcript t;
  t.send_times = schedule_send_times(params.n, params.s, rng);
  t.bob_modes.assign(params.s, BobMode::bypass);
  t.bob_observations.assign(params.s, Observation::nothing);
  t.alice_detections.assign(params.s, Detection::no_click);

  if (alice.kind == AliceStrategy::Kind::honest) {
    t.committed_b = alice.commit_bit;
    t.committed = codes::sample_codeword(code, r, alice.commit_bit, rng);
  } else {
    t.quantum_commitment = true;
    t.posterior = alice.initial;
  }

  std::vector<int> slot_to_index(params.s + 1, -1);
  for (int i = 0; i < params.n; ++i) slot_to_index[t.send_times[i]] = i;

  for (int slot = 1; slot <= params.s; ++slot) {
    const int idx = slot_to_index[slot];
    const bool sent = idx >= 0;
    const BobMode mode = flip(rng, bob.alpha) ? BobMode::intercept : BobMode::bypass;
    t.bob_modes[slot - 1] = mode;

    // The bit carried by this slot's qubit, resolved lazily for a quantum
    // commitment: a measurement in the encoding basis collapses the
    // codeword distribution at this position.
    auto resolve_bit = [&]() -> int {
      if (!t.quantum_commitment) return int((t.committed >> idx) & 1);
      int outcome = flip(rng, adversary::marginal_one(t.posterior, idx));
      t.posterior = adversary::collapse_on_intercept(t.posterior, idx, outcome);
      return outcome;
    };

    if (mode == BobMode::intercept) {
      // Bob launches his probe a packet toward Alice and holds the b packet.
      PhotonState incoming = optics::vacuum_state();
      if (sent) {
        incoming = optics::encode_qubit(resolve_bit(), slot);
        incoming = optics::apply_channel_noise(incoming, params.eps_dephase, params.eps_loss, rng);
      }
      Observation obs = intercept_measure(incoming, rng);
      t.bob_observations[slot - 1] = obs;

      PhotonState returning;
      if (obs == Observation::nothing) {
        returning = lone_probe_packet(slot);  // b packet discarded
      } else {
        // He forwards his held b packet, phase-flipped on psi1, rebuilding
        // the observed state toward Alice.
        returning = optics::encode_qubit(obs == Observation::psi1 ? 1 : 0, slot);
        returning = optics::apply_channel_noise(returning, params.eps_dephase, params.eps_loss, rng);
      }
      t.alice_detections[slot - 1] = optics::sample_detection(returning, rng);
    } else {
      if (sent) {
        PhotonState state = optics::encode_qubit(resolve_bit(), slot);
        state = optics::apply_channel_noise(state, params.eps_dephase, params.eps_loss, rng);
        if (bob.defense) {
          // Same random phase on both channels; a global phase for honest
          // states, but it scrambles interference against an FBS probe.
          double phi = std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng);
          state = optics::phase_shift(state, {ModeKind::channel_a, slot}, phi);
          state = optics::phase_shift(state, {ModeKind::channel_b, slot}, phi);
        }
        state = optics::apply_channel_noise(state, params.eps_dephase, params.eps_loss, rng);
        t.alice_detections[slot - 1] = optics::sample_detection(state, rng);
      }
    }
  }

  t.n_prime = 0;
  for (auto det : t.alice_detections)
    if (det != Detection::no_click) ++t.n_prime;
  t.alpha_estimate = estimate_alpha(t.n_prime, params.n, params.s);

  // Step-(6) continue rule, applied to the clamped estimator with no margin.
  double threshold = 1.0 - double(params.d) / double(params.n);
  if (alice.apply_abort_rule && t.alpha_estimate >= threshold) {
    t.aborted = AbortReason::abort_alpha;
    return t;
  }

  // Step (7): Alice announces the send slots; Bob cross-checks against his
  // intercept-mode observations. Photon loss is the only honest source of
  // a missing observation at an announced slot.
  int checked = 0, missing = 0;
  for (int slot = 1; slot <= params.s; ++slot) {
    if (t.bob_modes[slot - 1] != BobMode::intercept) continue;
    bool announced = slot_to_index[slot] >= 0;
    bool observed = t.bob_observations[slot - 1] != Observation::nothing;
    if (announced) {
      ++checked;
      if (!observed) ++missing;
    } else if (observed) {
      t.aborted = AbortReason::timing_mismatch;  // detection at an unannounced slot
      return t;
    }
  }
  if (missing > mismatch_allowance(params.eps_loss, checked)) {
    t.aborted = AbortReason::timing_mismatch;
    return t;
  }
  return t;
}

std::string to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::not_codeword: return "not_codeword";
    case RejectReason::parity_mismatch: return "parity_mismatch";
    case RejectReason::state_mismatch: return "state_mismatch";
    case RejectReason::abort_alpha: return "abort_alpha";
    case RejectReason::timing_mismatch: return "timing_mismatch";
  }
  return "unknown";
}

Verdict run_unveil(const Transcript& transcript, const Announcement& announcement,
                   const codes::LinearCode& code, const codes::PartitionKey& r,
                   double eps_tolerance) {
  if (transcript.aborted)
    throw std::runtime_error("run_unveil: transcript was aborted before unveil");
  if (!codes::is_codeword(code, announcement.c))
    return {false, RejectReason::not_codeword};
  if (codes::dot_parity(announcement.c, r.r) != announcement.b)
    return {false, RejectReason::parity_mismatch};

  int checked = 0, mismatched = 0;
  for (std::size_t i = 0; i < transcript.send_times.size(); ++i) {
    int slot = transcript.send_times[i];
    if (transcript.bob_modes[slot - 1] != BobMode::intercept) continue;
    Observation obs = transcript.bob_observations[slot - 1];
    if (obs == Observation::nothing) continue;
    ++checked;
    int observed_bit = (obs == Observation::psi1) ? 1 : 0;
    if (int((announcement.c >> i) & 1) != observed_bit) ++mismatched;
  }
  if (mismatched > mismatch_allowance(eps_tolerance, checked))
    return {false, RejectReason::state_mismatch};
  return {true, std::nullopt};
}

Announcement make_announcement(Transcript& transcript, const codes::PartitionKey& r, Rng& rng) {
  if (!transcript.quantum_commitment) return {transcript.committed_b, transcript.committed};
  Word c = adversary::sample_unveil(transcript.posterior, rng);
  return {codes::dot_parity(c, r.r), c};
}

CoinTossResult run_coin_toss(const ProtocolParams& params, const AliceStrategy& alice,
                             const codes::LinearCode& code, const codes::PartitionKey& r,
                             Rng& rng) {
  CoinTossResult result;
  BobStrategy bob = honest_bob(params);
  Transcript t = run_commit(params, alice, bob, code, r, rng);
  if (t.aborted) {
    result.aborted = true;
    return result;
  }
  result.x = flip(rng, 0.5);  // Bob's classical bit, announced after commit
  Announcement ann = make_announcement(t, r, rng);
  result.b = ann.b;
  result.verdict = run_unveil(t, ann, code, r, std::max(params.eps_dephase, params.eps_loss));
  if (result.verdict.accept) result.y = result.b ^ result.x;
  return result;
}

std::vector<InstanceResult> run_bit_string_commit(int m, const ProtocolParams& params,
                                                  const codes::LinearCode& code,
                                                  std::uint64_t master_seed) {
  if (m < 1) throw std::invalid_argument("run_bit_string_commit: m >= 1 required");
  std::vector<InstanceResult> out;
  out.reserve(m);
  for (int i = 0; i < m; ++i) {
    Rng rng = make_stream(master_seed, std::uint64_t(i));
    codes::PartitionKey r = codes::draw_partition_key(code, rng);
    int bit = flip(rng, 0.5);
    AliceStrategy alice = honest_alice(bit);
    Transcript t = run_commit(params, alice, honest_bob(params), code, r, rng);
    InstanceResult inst;
    inst.bit = bit;
    if (t.aborted) {
      inst.verdict = {false,
                      t.aborted == AbortReason::abort_alpha ? RejectReason::abort_alpha
                                                            : RejectReason::timing_mismatch};
    } else {
      Announcement ann = make_announcement(t, r, rng);
      inst.verdict = run_unveil(t, ann, code, r, std::max(params.eps_dephase, params.eps_loss));
    }
    inst.transcript = std::move(t);
    out.push_back(std::move(inst));
  }
  return out;
}

std::string transcript_to_json(const Transcript& transcript, const Verdict* verdict) {
  nlohmann::json j;
  j["send_times"] = transcript.send_times;
  std::vector<std::string> modes;
  for (auto m : transcript.bob_modes)
    modes.push_back(m == BobMode::intercept ? "intercept" : "bypass");
  j["bob_modes"] = modes;
  std::vector<std::string> dets;
  for (auto d : transcript.alice_detections) {
    switch (d) {
      case Detection::d0: dets.push_back("D0"); break;
      case Detection::d1: dets.push_back("D1"); break;
      default: dets.push_back("none"); break;
    }
  }
  j["detections"] = dets;
  j["n_prime"] = transcript.n_prime;
  j["alpha_estimate"] = transcript.alpha_estimate;
  if (transcript.aborted) {
    j["verdict"] = transcript.aborted == AbortReason::abort_alpha ? "abort_alpha"
                                                                  : "timing_mismatch";
  } else if (verdict) {
    j["verdict"] = verdict->accept ? "accept" : "reject:" + to_string(*verdict->reason);
  } else {
    j["verdict"] = "pending";
  }
  return j.dump();
}

}  // namespace osqbc::protocol
