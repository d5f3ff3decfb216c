#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "osqbc/rng.hpp"

namespace osqbc::codes {

// A codeword is kept as a bitmask, bit i = c_{i+1}. Code lengths are capped
// at 64 which is far beyond the desk-scale exhaustive enumeration bound.
using Word = std::uint64_t;

constexpr int kMaxDimension = 20;  // exhaustive enumeration bound on k

struct LinearCode {
  int n = 0;  // code length
  int k = 0;  // dimension
  int d = 0;  // minimum distance, verified at construction
  std::vector<Word> generator;  // k rows, linearly independent over GF(2)
  std::vector<Word> codewords;  // full row space, 2^k words, sorted
};

struct PartitionKey {
  Word r = 0;
  int n = 0;
};

int hamming_weight(Word w);
int hamming_distance(Word a, Word b);

// Parity of the bitwise AND of the two strings.
int dot_parity(Word c, Word r);

// Minimum Hamming weight over nonzero codewords; exhaustive over the row
// space, refuses k beyond kMaxDimension rather than approximating.
int min_distance(const std::vector<Word>& generator, int n);

// Builds a code from a row-independent generator, enumerating the row space
// and computing the true minimum distance.
LinearCode from_generator(std::vector<Word> generator, int n);

// Stock families: "repetition(n)", "hamming7", "extended_hamming8",
// "random(n,k,seed)". A random code is retried until the realized distance
// satisfies n > k > d.
LinearCode make_code(const std::string& family);
LinearCode repetition_code(int n);
LinearCode hamming7();
LinearCode extended_hamming8();
LinearCode random_code(int n, int k, std::uint64_t seed);

bool is_codeword(const LinearCode& code, Word c);

// Members of C_(b) = { c in C : dot_parity(c, r) == b }.
std::vector<Word> partition_subset(const LinearCode& code, const PartitionKey& r, int b);

// Uniform member of C_(b); throws if r is orthogonal to the code (one subset
// empty), instructing the caller to re-draw the key.
Word sample_codeword(const LinearCode& code, const PartitionKey& r, int b, Rng& rng);

// Nonzero key with both subsets nonempty (i.e. r not in the dual code).
PartitionKey draw_partition_key(const LinearCode& code, Rng& rng);

// Generator rows as lines of '0'/'1' characters (config-file format).
std::string generator_to_lines(const LinearCode& code);
std::vector<Word> generator_from_lines(const std::string& text, int& n_out);

std::string word_to_string(Word c, int n);
Word word_from_string(const std::string& bits);

}  // namespace osqbc::codes
