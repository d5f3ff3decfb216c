#include "osqbc/codes.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>

namespace osqbc::codes {

int hamming_weight(Word w) { return std::popcount(w); }

int hamming_distance(Word a, Word b) { return std::popcount(a ^ b); }

int dot_parity(Word c, Word r) { return std::popcount(c & r) & 1; }

namespace {

// Row space of a generator; returns empty if the rows are dependent.
std::vector<Word> enumerate_row_space(const std::vector<Word>& generator) {
  const int k = static_cast<int>(generator.size());
  std::vector<Word> words;
  words.reserve(std::size_t{1} << k);
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << k); ++m) {
    Word c = 0;
    for (int j = 0; j < k; ++j)
      if (m & (std::uint64_t{1} << j)) c ^= generator[j];
    words.push_back(c);
  }
  std::sort(words.begin(), words.end());
  if (std::adjacent_find(words.begin(), words.end()) != words.end()) return {};
  return words;
}

}  // namespace

int min_distance(const std::vector<Word>& generator, int n) {
  const int k = static_cast<int>(generator.size());
  if (k > kMaxDimension)
    throw std::invalid_argument("min_distance: k exceeds exhaustive enumeration bound");
  auto words = enumerate_row_space(generator);
  if (words.empty())
    throw std::invalid_argument("min_distance: generator rows are linearly dependent");
  int best = n + 1;
  for (Word c : words)
    if (c != 0) best = std::min(best, hamming_weight(c));
  if (best > n) throw std::invalid_argument("min_distance: code has no nonzero codeword");
  return best;
}

LinearCode from_generator(std::vector<Word> generator, int n) {
  const int k = static_cast<int>(generator.size());
  if (n < 1 || n > 64) throw std::invalid_argument("from_generator: n out of range");
  if (k < 1 || k > kMaxDimension)
    throw std::invalid_argument("from_generator: k out of range");
  for (Word row : generator)
    if (n < 64 && (row >> n) != 0)
      throw std::invalid_argument("from_generator: generator row wider than n");
  auto words = enumerate_row_space(generator);
  if (words.empty())
    throw std::invalid_argument("from_generator: generator rows are linearly dependent");
  LinearCode code;
  code.n = n;
  code.k = k;
  code.generator = std::move(generator);
  code.codewords = std::move(words);
  code.d = n + 1;
  for (Word c : code.codewords)
    if (c != 0) code.d = std::min(code.d, hamming_weight(c));
  return code;
}

LinearCode repetition_code(int n) {
  if (n < 1 || n > 64) throw std::invalid_argument("repetition_code: n out of range");
  Word all = (n == 64) ? ~Word{0} : ((Word{1} << n) - 1);
  return from_generator({all}, n);
}

LinearCode hamming7() {
  // [I_4 | P] form; bit i of a row is position i+1 of the codeword.
  auto row = [](const char* bits) { return word_from_string(bits); };
  return from_generator(
      {row("1000110"), row("0100101"), row("0010011"), row("0001111")}, 7);
}

LinearCode extended_hamming8() {
  LinearCode h = hamming7();
  std::vector<Word> rows;
  for (Word g : h.generator) {
    Word ext = g;
    if (hamming_weight(g) & 1) ext |= (Word{1} << 7);
    rows.push_back(ext);
  }
  return from_generator(rows, 8);
}

LinearCode random_code(int n, int k, std::uint64_t seed) {
  if (k >= n) throw std::invalid_argument("random_code: requires n > k");
  Rng rng = make_stream(seed, 0xc0de);
  constexpr int kAttempts = 1000;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    std::vector<Word> rows(k);
    std::uniform_int_distribution<Word> dist(0, (n == 64) ? ~Word{0} : ((Word{1} << n) - 1));
    for (auto& row : rows) row = dist(rng);
    auto words = enumerate_row_space(rows);
    if (words.empty()) continue;  // dependent rows, retry
    LinearCode code = from_generator(std::move(rows), n);
    if (code.d < k) return code;  // n > k > d
  }
  throw std::runtime_error("random_code: no code with n > k > d found within retry bound");
}

LinearCode make_code(const std::string& family) {
  auto open = family.find('(');
  std::string name = family.substr(0, open);
  std::vector<long long> args;
  if (open != std::string::npos) {
    auto close = family.find(')', open);
    if (close == std::string::npos)
      throw std::invalid_argument("make_code: malformed family string: " + family);
    std::stringstream ss(family.substr(open + 1, close - open - 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) args.push_back(std::stoll(tok));
  }
  if (name == "repetition" && args.size() == 1) return repetition_code(static_cast<int>(args[0]));
  if (name == "hamming7" && args.empty()) return hamming7();
  if (name == "extended_hamming8" && args.empty()) return extended_hamming8();
  if (name == "random" && args.size() == 3)
    return random_code(static_cast<int>(args[0]), static_cast<int>(args[1]),
                       static_cast<std::uint64_t>(args[2]));
  throw std::invalid_argument("make_code: unknown code family: " + family);
}

bool is_codeword(const LinearCode& code, Word c) {
  return std::binary_search(code.codewords.begin(), code.codewords.end(), c);
}

std::vector<Word> partition_subset(const LinearCode& code, const PartitionKey& key, int b) {
  if (key.n != code.n) throw std::invalid_argument("partition_subset: length mismatch");
  std::vector<Word> out;
  for (Word c : code.codewords)
    if (dot_parity(c, key.r) == b) out.push_back(c);
  return out;
}

Word sample_codeword(const LinearCode& code, const PartitionKey& key, int b, Rng& rng) {
  auto subset = partition_subset(code, key, b);
  if (subset.empty())
    throw std::runtime_error(
        "sample_codeword: C_(b) is empty (r orthogonal to the code), re-draw the key");
  std::uniform_int_distribution<std::size_t> pick(0, subset.size() - 1);
  return subset[pick(rng)];
}

PartitionKey draw_partition_key(const LinearCode& code, Rng& rng) {
  Word mask = (code.n == 64) ? ~Word{0} : ((Word{1} << code.n) - 1);
  std::uniform_int_distribution<Word> dist(1, mask);
  for (;;) {
    PartitionKey key{dist(rng), code.n};
    // Reject keys in the dual code: the parity functional must be balanced.
    bool constant = true;
    for (Word c : code.codewords)
      if (dot_parity(c, key.r) == 1) { constant = false; break; }
    if (!constant) return key;
  }
}

std::string word_to_string(Word c, int n) {
  std::string s(n, '0');
  for (int i = 0; i < n; ++i)
    if (c & (Word{1} << i)) s[i] = '1';
  return s;
}

Word word_from_string(const std::string& bits) {
  if (bits.size() > 64) throw std::invalid_argument("word_from_string: too long");
  Word c = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') c |= (Word{1} << i);
    else if (bits[i] != '0') throw std::invalid_argument("word_from_string: bad character");
  }
  return c;
}

std::string generator_to_lines(const LinearCode& code) {
  std::string out;
  for (Word row : code.generator) {
    out += word_to_string(row, code.n);
    out += '\n';
  }
  return out;
}

std::vector<Word> generator_from_lines(const std::string& text, int& n_out) {
  std::vector<Word> rows;
  std::stringstream ss(text);
  std::string line;
  n_out = 0;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    if (n_out == 0) n_out = static_cast<int>(line.size());
    else if (static_cast<int>(line.size()) != n_out)
      throw std::invalid_argument("generator_from_lines: ragged rows");
    rows.push_back(word_from_string(line));
  }
  if (rows.empty()) throw std::invalid_argument("generator_from_lines: no rows");
  return rows;
}

}  // namespace osqbc::codes
