#include "osqbc/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace osqbc::adversary {

using codes::Word;

SuperposedCommitment superposed_commit(const codes::LinearCode& code,
                                       const std::vector<Word>& support,
                                       const std::vector<std::complex<double>>& lambdas) {
  if (support.size() != lambdas.size() || support.empty())
    throw std::invalid_argument("superposed_commit: support/amplitude size mismatch");
  double norm = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (!codes::is_codeword(code, support[i]))
      throw std::invalid_argument("superposed_commit: support outside the code");
    norm += std::norm(lambdas[i]);
  }
  if (std::abs(norm - 1.0) > kAmplitudeTolerance)
    throw std::invalid_argument("superposed_commit: amplitudes not normalized");
  SuperposedCommitment sc{support, lambdas, code.n};
  return sc;
}

SuperposedCommitment uniform_commitment(const codes::LinearCode& code,
                                        const codes::PartitionKey& r, int b) {
  auto subset = codes::partition_subset(code, r, b);
  if (subset.empty()) throw std::runtime_error("uniform_commitment: empty subset");
  std::vector<std::complex<double>> lambdas(subset.size(),
                                            1.0 / std::sqrt(double(subset.size())));
  return superposed_commit(code, subset, lambdas);
}

SuperposedCommitment uniform_commitment(const codes::LinearCode& code) {
  std::vector<std::complex<double>> lambdas(code.codewords.size(),
                                            1.0 / std::sqrt(double(code.codewords.size())));
  return superposed_commit(code, code.codewords, lambdas);
}

SuperposedCommitment collapse_on_intercept(const SuperposedCommitment& sc, int position,
                                           int outcome) {
  if (position < 0 || position >= sc.n)
    throw std::invalid_argument("collapse_on_intercept: position out of range");
  SuperposedCommitment post;
  post.n = sc.n;
  double norm = 0.0;
  for (std::size_t i = 0; i < sc.support.size(); ++i) {
    int bit = int((sc.support[i] >> position) & 1);
    if (bit != outcome) continue;
    post.support.push_back(sc.support[i]);
    post.lambdas.push_back(sc.lambdas[i]);
    norm += std::norm(sc.lambdas[i]);
  }
  if (post.support.empty())
    throw std::runtime_error("collapse_on_intercept: empty posterior, impossible transcript");
  double scale = 1.0 / std::sqrt(norm);
  for (auto& amp : post.lambdas) amp *= scale;
  return post;
}

double marginal_one(const SuperposedCommitment& sc, int position) {
  double p = 0.0;
  for (std::size_t i = 0; i < sc.support.size(); ++i)
    if ((sc.support[i] >> position) & 1) p += std::norm(sc.lambdas[i]);
  return p;
}

std::pair<double, double> unveil_probabilities(const SuperposedCommitment& sc,
                                               const codes::PartitionKey& r) {
  double p1 = 0.0;
  for (std::size_t i = 0; i < sc.support.size(); ++i)
    if (codes::dot_parity(sc.support[i], r.r) == 1) p1 += std::norm(sc.lambdas[i]);
  return {1.0 - p1, p1};
}

Word sample_unveil(const SuperposedCommitment& sc, Rng& rng) {
  double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < sc.support.size(); ++i) {
    acc += std::norm(sc.lambdas[i]);
    if (u < acc) return sc.support[i];
  }
  return sc.support.back();
}

Announcement alice_flip_attack(Word committed, const codes::LinearCode& code,
                               const codes::PartitionKey& r, int target_b) {
  auto subset = codes::partition_subset(code, r, target_b);
  if (subset.empty()) throw std::runtime_error("alice_flip_attack: target subset empty");
  Word best = subset.front();
  int best_dist = code.n + 1;
  for (Word c : subset) {
    int dist = codes::hamming_distance(c, committed);
    if (dist < best_dist) {
      best_dist = dist;
      best = c;
    }
  }
  return {target_b, best};
}

double bypass_dc_probability(double defense_phase) {
  using namespace optics;
  // The probe packet splits over the FBS paths; the packet through Bob's
  // channel picks up his bypass phase before recombination.
  ModeLabel path_a{ModeKind::channel_a, 1};
  ModeLabel path_b{ModeKind::channel_b, 1};
  PhotonState s;
  s.amplitudes[path_a] = 1.0 / std::numbers::sqrt2;
  s.amplitudes[path_b] = 1.0 / std::numbers::sqrt2;
  s = phase_shift(s, path_b, defense_phase);
  s = beam_splitter(s, path_a, path_b, {ModeKind::detector_d0, 1}, {ModeKind::detector_d1, 1});
  return std::norm(s.amplitude({ModeKind::detector_d0, 1}));
}

ProbeOutcome counterfactual_probe(BobMode bob_mode, const DefenseConfig& defense, Rng& rng,
                                  int slot) {
  if (bob_mode == BobMode::intercept) {
    // Path b is blocked; an ideal FBS passes the photon into path d.
    return {ProbeOutcome::Result::dd, slot};
  }
  double phi = 0.0;
  if (defense.enabled)
    phi = std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng);
  double p_dc = bypass_dc_probability(phi);
  return {flip(rng, p_dc) ? ProbeOutcome::Result::dc : ProbeOutcome::Result::dd, slot};
}

ModePosterior infer_mode(const ProbeOutcome& observation, double prior_intercept,
                         const DefenseConfig& defense) {
  double p_dc_bypass = defense.enabled ? 0.5 : 1.0;  // cos^2 averaged over uniform phase
  double p_dc_intercept = 0.0;
  double like_intercept, like_bypass;
  switch (observation.result) {
    case ProbeOutcome::Result::dc:
      like_intercept = p_dc_intercept;
      like_bypass = p_dc_bypass;
      break;
    case ProbeOutcome::Result::dd:
      like_intercept = 1.0 - p_dc_intercept;
      like_bypass = 1.0 - p_dc_bypass;
      break;
    default:
      like_intercept = like_bypass = 1.0;  // uninformative
      break;
  }
  double num_i = like_intercept * prior_intercept;
  double num_b = like_bypass * (1.0 - prior_intercept);
  double z = num_i + num_b;
  if (z <= 0.0) throw std::runtime_error("infer_mode: observation impossible under priors");
  return {num_i / z, num_b / z};
}

}  // namespace osqbc::adversary
