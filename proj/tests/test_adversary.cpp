#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "osqbc/adversary.hpp"
#include "osqbc/protocol.hpp"

using namespace osqbc;
using adversary::BobMode;
using adversary::ProbeOutcome;
using codes::Word;

namespace {

adversary::SuperposedCommitment random_commitment(const codes::LinearCode& code, Rng& rng) {
  std::vector<Word> support;
  std::vector<std::complex<double>> lambdas;
  double norm2 = 0.0;
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (Word c : code.codewords) {
    if (!flip(rng, 0.6)) continue;
    std::complex<double> amp(gauss(rng), gauss(rng));
    support.push_back(c);
    lambdas.push_back(amp);
    norm2 += std::norm(amp);
  }
  if (support.empty()) {
    support.push_back(code.codewords[0]);
    lambdas.push_back(1.0);
    norm2 = 1.0;
  }
  for (auto& l : lambdas) l /= std::sqrt(norm2);
  return adversary::superposed_commit(code, support, lambdas);
}

}  // namespace

TEST_CASE("superposed_commit validation") {
  auto code = codes::make_code("hamming7");
  CHECK_THROWS(adversary::superposed_commit(code, {code.codewords[1]}, {0.5}));
  CHECK_THROWS(adversary::superposed_commit(code, {codes::word_from_string("1100000")}, {1.0}));
  CHECK_NOTHROW(adversary::superposed_commit(code, {code.codewords[1]}, {1.0}));
}

TEST_CASE("single-codeword commitment behaves honestly") {
  auto code = codes::make_code("hamming7");
  codes::PartitionKey key{codes::word_from_string("1110000"), 7};
  Word c = code.codewords[3];
  auto sc = adversary::superposed_commit(code, {c}, {1.0});
  auto [p0, p1] = adversary::unveil_probabilities(sc, key);
  int b = codes::dot_parity(c, key.r);
  CHECK(p0 == doctest::Approx(b == 0 ? 1.0 : 0.0).epsilon(1e-12));
  CHECK(p1 == doctest::Approx(b == 1 ? 1.0 : 0.0).epsilon(1e-12));
}

TEST_CASE("uniform commitment over the whole code gives even odds") {
  Rng rng = make_stream(40, 0);
  auto code = codes::make_code("hamming7");
  auto key = codes::draw_partition_key(code, rng);
  auto sc = adversary::uniform_commitment(code);
  auto [p0, p1] = adversary::unveil_probabilities(sc, key);
  CHECK(p0 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p1 == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("normalization survives collapses") {
  Rng rng = make_stream(41, 0);
  auto code = codes::make_code("hamming7");
  auto key = codes::draw_partition_key(code, rng);
  for (int t = 0; t < 50; ++t) {
    auto sc = random_commitment(code, rng);
    auto [p0, p1] = adversary::unveil_probabilities(sc, key);
    CHECK(std::abs(p0 + p1 - 1.0) < 1e-12);
    for (int round = 0; round < 3; ++round) {
      int pos = int(rng() % 7);
      int outcome = flip(rng, adversary::marginal_one(sc, pos));
      sc = adversary::collapse_on_intercept(sc, pos, outcome);
      for (Word c : sc.support) CHECK(int((c >> pos) & 1) == outcome);
      auto [q0, q1] = adversary::unveil_probabilities(sc, key);
      CHECK(std::abs(q0 + q1 - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("collapsing every position pins a single codeword") {
  Rng rng = make_stream(42, 0);
  auto code = codes::make_code("hamming7");
  auto key = codes::draw_partition_key(code, rng);
  auto sc = adversary::uniform_commitment(code);
  for (int pos = 0; pos < 7; ++pos) {
    int outcome = flip(rng, adversary::marginal_one(sc, pos));
    sc = adversary::collapse_on_intercept(sc, pos, outcome);
  }
  REQUIRE(sc.support.size() == 1);
  auto [p0, p1] = adversary::unveil_probabilities(sc, key);
  CHECK((p0 == 1.0 || p1 == 1.0));
}

TEST_CASE("impossible collapse throws") {
  auto code = codes::make_code("repetition(3)");
  auto sc = adversary::superposed_commit(code, {0}, {1.0});
  CHECK_THROWS(adversary::collapse_on_intercept(sc, 0, 1));
}

TEST_CASE("empirical unveil frequencies match the amplitude weights") {
  Rng rng = make_stream(43, 0);
  auto code = codes::make_code("hamming7");
  auto key = codes::draw_partition_key(code, rng);
  auto sc = random_commitment(code, rng);
  auto [p0, p1] = adversary::unveil_probabilities(sc, key);
  const int samples = 10000;
  int ones = 0;
  for (int t = 0; t < samples; ++t) {
    Word c = adversary::sample_unveil(sc, rng);
    ones += codes::dot_parity(c, key.r);
  }
  double sigma = std::sqrt(samples * p0 * p1);
  CHECK(std::abs(ones - samples * p1) <= 3 * sigma + 1);
}

TEST_CASE("flip attack picks the nearest opposite codeword") {
  Rng rng = make_stream(44, 0);
  auto code = codes::make_code("hamming7");
  auto key = codes::draw_partition_key(code, rng);
  for (Word c : code.codewords) {
    int b = codes::dot_parity(c, key.r);
    auto ann = adversary::alice_flip_attack(c, code, key, 1 - b);
    CHECK(codes::dot_parity(ann.c, key.r) == 1 - b);
    CHECK(ann.b == 1 - b);
    int dist = codes::hamming_distance(c, ann.c);
    for (Word other : codes::partition_subset(code, key, 1 - b))
      CHECK(codes::hamming_distance(c, other) >= dist);
  }
}

TEST_CASE("flip attack escape rate follows (1-alpha)^dist") {
  Rng rng = make_stream(45, 0);
  auto code = codes::make_code("hamming7");
  const double alpha = 0.5;
  auto params = protocol::params_for_code(code, 0, alpha);
  const int trials = 4000;
  int escapes = 0;
  double expected = 0.0;
  for (int t = 0; t < trials; ++t) {
    auto key = codes::draw_partition_key(code, rng);
    auto alice = protocol::honest_alice(0);
    alice.apply_abort_rule = false;
    auto tr = protocol::run_commit(params, alice, protocol::honest_bob(params), code, key, rng);
    REQUIRE_FALSE(tr.aborted);
    auto ann = adversary::alice_flip_attack(tr.committed, code, key, 1);
    expected += std::pow(1.0 - alpha, codes::hamming_distance(ann.c, tr.committed));
    if (protocol::run_unveil(tr, ann, code, key, 0.0).accept) ++escapes;
  }
  expected /= trials;
  double sigma = std::sqrt(expected * (1 - expected) / trials);
  CHECK(std::abs(double(escapes) / trials - expected) < 3 * sigma);
  CHECK(expected <= std::pow(1.0 - alpha, code.d) + 1e-12);
}

TEST_CASE("flip attack extremes") {
  Rng rng = make_stream(46, 0);
  auto code = codes::make_code("hamming7");
  for (int t = 0; t < 30; ++t) {
    auto key = codes::draw_partition_key(code, rng);
    auto alice = protocol::honest_alice(0);
    alice.apply_abort_rule = false;
    auto params0 = protocol::params_for_code(code, 0, 0.0);
    auto tr0 = protocol::run_commit(params0, alice, protocol::honest_bob(params0), code, key, rng);
    auto ann0 = adversary::alice_flip_attack(tr0.committed, code, key, 1);
    CHECK(protocol::run_unveil(tr0, ann0, code, key, 0.0).accept);

    auto params1 = protocol::params_for_code(code, 0, 1.0);
    auto tr1 = protocol::run_commit(params1, alice, protocol::honest_bob(params1), code, key, rng);
    auto ann1 = adversary::alice_flip_attack(tr1.committed, code, key, 1);
    CHECK_FALSE(protocol::run_unveil(tr1, ann1, code, key, 0.0).accept);
  }
}

TEST_CASE("position views reveal b exactly at the key's revealing threshold") {
  // For a view S of j known positions, the posterior on b is unbiased iff
  // the key's parity functional is not determined by S. The smallest
  // revealing view has size w*(r) = min weight over the coset of r modulo
  // the dual code; exhaustively, w*(r) <= 3 < n - d for hamming7.
  auto code = codes::make_code("hamming7");
  std::vector<Word> dual;
  for (Word r = 0; r < 128; ++r) {
    bool orth = true;
    for (Word c : code.codewords)
      if (codes::dot_parity(c, r)) { orth = false; break; }
    if (orth) dual.push_back(r);
  }
  CHECK(dual.size() == 8);

  for (Word r = 1; r < 128; ++r) {
    codes::PartitionKey key{r, 7};
    if (codes::partition_subset(code, key, 1).empty()) continue;
    int w_star = 7;
    for (Word x : dual) w_star = std::min(w_star, codes::hamming_weight(r ^ x));
    CHECK(w_star <= 3);

    int first_biased = 8;
    for (int j = 0; j <= 4 && first_biased == 8; ++j) {
      for (Word mask = 0; mask < 128; ++mask) {
        if (codes::hamming_weight(mask) != j) continue;
        for (Word c : code.codewords) {
          Word view = c & mask;
          int n0 = 0, n1 = 0;
          for (Word x : code.codewords)
            if ((x & mask) == view) (codes::dot_parity(x, r) ? n1 : n0)++;
          if (n0 != n1) { first_biased = j; break; }
        }
        if (first_biased != 8) break;
      }
    }
    CHECK(first_biased == w_star);
  }
}

TEST_CASE("fewer than n-d known positions never identify the codeword") {
  auto code = codes::make_code("hamming7");
  for (Word mask = 0; mask < 128; ++mask) {
    int j = codes::hamming_weight(mask);
    if (j >= code.n - code.d) continue;
    for (Word c : code.codewords) {
      int consistent = 0;
      for (Word x : code.codewords)
        if ((x & mask) == (c & mask)) ++consistent;
      CHECK(consistent == (1 << (code.k - j)));
    }
  }
  // at j = n - d some view pins the codeword uniquely
  bool unique_found = false;
  for (Word mask = 0; mask < 128 && !unique_found; ++mask) {
    if (codes::hamming_weight(mask) != code.n - code.d) continue;
    for (Word c : code.codewords) {
      int consistent = 0;
      for (Word x : code.codewords)
        if ((x & mask) == (c & mask)) ++consistent;
      if (consistent == 1) { unique_found = true; break; }
    }
  }
  CHECK(unique_found);
}

TEST_CASE("counterfactual probe outcomes") {
  Rng rng = make_stream(47, 0);
  adversary::DefenseConfig off{false}, on{true};
  for (int t = 0; t < 200; ++t) {
    CHECK(adversary::counterfactual_probe(BobMode::bypass, off, rng).result ==
          ProbeOutcome::Result::dc);
    CHECK(adversary::counterfactual_probe(BobMode::intercept, off, rng).result ==
          ProbeOutcome::Result::dd);
    CHECK(adversary::counterfactual_probe(BobMode::intercept, on, rng).result ==
          ProbeOutcome::Result::dd);
  }
  const int trials = 10000;
  int dc = 0;
  for (int t = 0; t < trials; ++t)
    if (adversary::counterfactual_probe(BobMode::bypass, on, rng).result ==
        ProbeOutcome::Result::dc)
      ++dc;
  CHECK(std::abs(dc - trials * 0.5) < 3 * std::sqrt(trials * 0.25));
}

TEST_CASE("bypass interference law comes out as cos^2(phi/2)") {
  for (double phi : {0.0, 0.5, 1.0, std::numbers::pi / 2, 2.0, std::numbers::pi}) {
    double expected = std::cos(phi / 2) * std::cos(phi / 2);
    CHECK(adversary::bypass_dc_probability(phi) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("mode inference is exact Bayes") {
  adversary::DefenseConfig off{false}, on{true};
  ProbeOutcome dc{ProbeOutcome::Result::dc, 1};
  ProbeOutcome dd{ProbeOutcome::Result::dd, 1};

  auto post = adversary::infer_mode(dc, 0.5, off);
  CHECK(post.p_bypass == doctest::Approx(1.0).epsilon(1e-12));
  post = adversary::infer_mode(dd, 0.5, off);
  CHECK(post.p_intercept == doctest::Approx(1.0).epsilon(1e-12));
  post = adversary::infer_mode(dc, 0.5, on);
  CHECK(post.p_bypass == doctest::Approx(1.0).epsilon(1e-12));
  post = adversary::infer_mode(dd, 0.5, on);
  CHECK(post.p_intercept == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  post = adversary::infer_mode(dd, 0.2, on);
  CHECK(post.p_intercept == doctest::Approx(0.2 / (0.2 + 0.8 * 0.5)).epsilon(1e-12));
}
