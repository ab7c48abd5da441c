#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "onequery/algebra.hpp"
#include "onequery/errors.hpp"
#include "onequery/rng.hpp"

namespace onequery {

/// Item probabilities p_1..p_n: nonnegative, unit total.
class SourceDistribution {
 public:
  explicit SourceDistribution(std::vector<double> probabilities) : p_(std::move(probabilities)) {
    if (p_.empty()) throw std::domain_error("SourceDistribution: at least one item required");
    long double total = 0.0L;
    for (double p : p_) {
      if (!(p >= 0.0)) throw std::domain_error("SourceDistribution: probabilities must be nonnegative");
      total += p;
    }
    if (std::abs(static_cast<double>(total - 1.0L)) > 1e-10)
      throw std::domain_error("SourceDistribution: probabilities must sum to 1");
  }

  static SourceDistribution uniform(std::size_t n) {
    if (n == 0) throw std::domain_error("SourceDistribution::uniform: n must be >= 1");
    return SourceDistribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }

  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  const std::vector<double>& probabilities() const { return p_; }

  double entropy_bits() const {
    long double h = 0.0L;
    for (double p : p_)
      if (p > 0.0) h -= static_cast<long double>(p) * std::log2(p);
    return static_cast<double>(h);
  }

 private:
  std::vector<double> p_;
};

/// A prefix-free binary code whose average length sits within one bit of the
/// source entropy.
class HuffmanCode {
 public:
  HuffmanCode(SourceDistribution source, std::vector<DigitString> codewords)
      : source_(std::move(source)), codewords_(std::move(codewords)) {
    if (codewords_.size() != source_.size())
      throw std::invalid_argument("HuffmanCode: one codeword per item required");
    for (const auto& c : codewords_)
      if (c.modulus() != 2) throw std::invalid_argument("HuffmanCode: codewords must be binary");
    check_prefix_free();
    long double kraft = 0.0L;
    long double mean = 0.0L;
    for (std::size_t i = 0; i < codewords_.size(); ++i) {
      kraft += std::ldexp(1.0L, -static_cast<int>(codewords_[i].size()));
      mean += static_cast<long double>(source_[i]) * codewords_[i].size();
    }
    if (static_cast<double>(kraft) > 1.0 + 1e-9)
      throw std::invalid_argument("HuffmanCode: Kraft sum exceeds 1");
    const double h = source_.entropy_bits();
    const double average = static_cast<double>(mean);
    if (average + 1e-9 < h || average > h + 1.0 + 1e-9)
      throw std::invalid_argument("HuffmanCode: average length outside [H, H+1]");
  }

  const SourceDistribution& source() const { return source_; }
  const std::vector<DigitString>& codewords() const { return codewords_; }

  std::vector<std::size_t> lengths() const {
    std::vector<std::size_t> out(codewords_.size());
    for (std::size_t i = 0; i < codewords_.size(); ++i) out[i] = codewords_[i].size();
    return out;
  }

  std::size_t max_length() const {
    std::size_t m = 0;
    for (const auto& c : codewords_) m = std::max(m, c.size());
    return m;
  }

  double mean_length() const {
    long double mean = 0.0L;
    for (std::size_t i = 0; i < codewords_.size(); ++i)
      mean += static_cast<long double>(source_[i]) * codewords_[i].size();
    return static_cast<double>(mean);
  }

  /// Zero-padded codeword read: finished items contribute 0 past their length.
  std::uint32_t code_bit(std::size_t item, std::size_t position) const {
    const DigitString& c = codewords_[item];
    return position < c.size() ? c[position] : 0;
  }

 private:
  void check_prefix_free() const {
    std::vector<std::string> words;
    words.reserve(codewords_.size());
    for (const auto& c : codewords_) words.push_back(c.str());
    std::sort(words.begin(), words.end());
    for (std::size_t i = 0; i + 1 < words.size(); ++i)
      if (words[i + 1].compare(0, words[i].size(), words[i]) == 0)
        throw std::invalid_argument("HuffmanCode: codewords are not prefix-free");
  }

  SourceDistribution source_;
  std::vector<DigitString> codewords_;
};

/// Bottom-up Huffman merge with deterministic ties: equal-probability nodes pop
/// in creation order, the lower-probability child takes bit 0, and probability
/// ties give bit 0 to the child holding the smallest item index.
inline HuffmanCode build_huffman(const SourceDistribution& source) {
  const std::size_t n = source.size();
  if (n < 2) throw std::domain_error("build_huffman: at least two items required");

  struct Node {
    double prob;
    std::size_t created;
    std::size_t min_item;
    int zero_child;
    int one_child;
  };
  std::vector<Node> nodes;
  nodes.reserve(2 * n - 1);
  for (std::size_t i = 0; i < n; ++i) nodes.push_back({source[i], i, i, -1, -1});

  auto later = [&nodes](std::size_t a, std::size_t b) {
    if (nodes[a].prob != nodes[b].prob) return nodes[a].prob > nodes[b].prob;
    return nodes[a].created > nodes[b].created;
  };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(later)> heap(later);
  for (std::size_t i = 0; i < n; ++i) heap.push(i);

  while (heap.size() > 1) {
    const std::size_t a = heap.top();
    heap.pop();
    const std::size_t b = heap.top();
    heap.pop();
    std::size_t zero = a, one = b;  // a popped first, so prob[a] <= prob[b]
    if (nodes[b].prob == nodes[a].prob && nodes[b].min_item < nodes[a].min_item) std::swap(zero, one);
    nodes.push_back({nodes[a].prob + nodes[b].prob, nodes.size(),
                     std::min(nodes[a].min_item, nodes[b].min_item), static_cast<int>(zero),
                     static_cast<int>(one)});
    heap.push(nodes.size() - 1);
  }

  std::vector<std::vector<std::uint32_t>> bits(n);
  std::vector<std::pair<std::size_t, std::vector<std::uint32_t>>> stack;
  stack.push_back({heap.top(), {}});
  while (!stack.empty()) {
    auto [id, path] = std::move(stack.back());
    stack.pop_back();
    if (nodes[id].zero_child < 0) {
      bits[id] = std::move(path);
      continue;
    }
    std::vector<std::uint32_t> zero_path = path;
    zero_path.push_back(0);
    path.push_back(1);
    stack.push_back({static_cast<std::size_t>(nodes[id].zero_child), std::move(zero_path)});
    stack.push_back({static_cast<std::size_t>(nodes[id].one_child), std::move(path)});
  }

  std::vector<DigitString> codewords;
  codewords.reserve(n);
  for (std::size_t i = 0; i < n; ++i) codewords.emplace_back(std::move(bits[i]), 2);
  return HuffmanCode(source, std::move(codewords));
}

/// Query k (1-based) carries bit k of every item's codeword; items shorter than
/// k contribute 0 and drop out of the parity.
inline std::vector<DigitString> huffman_queries(const HuffmanCode& code, std::size_t m) {
  if (m == 0) throw std::invalid_argument("huffman_queries: m must be >= 1");
  const std::size_t n = code.codewords().size();
  std::vector<DigitString> queries;
  queries.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    std::vector<std::uint32_t> row(n);
    for (std::size_t i = 0; i < n; ++i) row[i] = code.code_bit(i, k);
    queries.emplace_back(std::move(row), 2);
  }
  return queries;
}

/// Probability mass of items whose zero-padded m-bit codeword prefix is shared
/// with another item. Zero once m reaches the longest codeword.
inline double truncation_error_probability(const HuffmanCode& code, std::size_t m) {
  if (m == 0) throw std::invalid_argument("truncation_error_probability: m must be >= 1");
  std::map<std::string, std::pair<double, std::size_t>> groups;
  for (std::size_t i = 0; i < code.codewords().size(); ++i) {
    std::string key(m, '0');
    for (std::size_t k = 0; k < m; ++k) key[k] = static_cast<char>('0' + code.code_bit(i, k));
    auto& group = groups[key];
    group.first += code.source()[i];
    group.second += 1;
  }
  long double error = 0.0L;
  for (const auto& [key, group] : groups)
    if (group.second >= 2) error += group.first;
  return static_cast<double>(error);
}

/// z_k = g_k . y (mod A): the compressed representation of y.
inline DigitString encode(std::span<const DigitString> generators, const DigitString& y) {
  if (generators.empty()) throw std::invalid_argument("encode: empty generator list");
  std::vector<std::uint32_t> z(generators.size());
  for (std::size_t k = 0; k < generators.size(); ++k) z[k] = dot_mod(generators[k], y);
  return DigitString(std::move(z), generators[0].modulus());
}

inline DigitString encode(const GeneratorSet& generators, const DigitString& y) {
  return encode(std::span<const DigitString>(generators.generators()), y);
}

/// encode(G, e_position), read off as a column of the generator matrix.
inline DigitString encode_unit(std::span<const DigitString> generators, std::size_t position) {
  if (generators.empty()) throw std::invalid_argument("encode_unit: empty generator list");
  std::vector<std::uint32_t> z(generators.size());
  for (std::size_t k = 0; k < generators.size(); ++k) {
    if (position >= generators[k].size())
      throw std::invalid_argument("encode_unit: position out of range");
    z[k] = generators[k][position];
  }
  return DigitString(std::move(z), generators[0].modulus());
}

inline DigitString encode_unit(const GeneratorSet& generators, std::size_t position) {
  return encode_unit(std::span<const DigitString>(generators.generators()), position);
}

/// 1 - (1 - A^{-m})^{k-1}: chance that some other candidate shares y's codeword
/// under a random linear code of length m.
inline double collision_probability(std::uint32_t alphabet, std::size_t m, std::size_t k) {
  if (alphabet < 2) throw std::domain_error("collision_probability: alphabet must be >= 2");
  if (k == 0) throw std::domain_error("collision_probability: k must be >= 1");
  if (k == 1) return 0.0;
  const double per_candidate = std::pow(static_cast<double>(alphabet), -static_cast<double>(m));
  if (per_candidate >= 1.0) return 1.0;
  return -std::expm1(static_cast<double>(k - 1) * std::log1p(-per_candidate));
}

/// Small-2^{-l} form 2^{-l} (1 - 1/k). Tracks collision_probability(2, log2 k + l, k)
/// to O(2^{-2l}) when k is a power of two.
inline double collision_probability_approx(std::size_t k, std::size_t l) {
  if (k == 0) throw std::domain_error("collision_probability_approx: k must be >= 1");
  return std::ldexp(1.0 - 1.0 / static_cast<double>(k), -static_cast<int>(l));
}

/// Smallest t with base^t >= value.
inline std::size_t ceil_log(std::uint32_t base, std::uint64_t value) {
  if (base < 2) throw std::domain_error("ceil_log: base must be >= 2");
  std::size_t t = 0;
  std::uint64_t acc = 1;
  while (acc < value) {
    ++t;
    if (acc > std::numeric_limits<std::uint64_t>::max() / base) break;
    acc *= base;
  }
  return t;
}

/// Seeded search for generators whose encoding is injective on the candidates.
/// m grows from the birthday-problem length ceil(2 log_A k) until max_m.
inline GeneratorSet find_collision_free_generators(const std::vector<DigitString>& candidates,
                                                   std::uint32_t modulus, std::size_t max_m,
                                                   std::uint64_t seed) {
  if (candidates.empty())
    throw std::invalid_argument("find_collision_free_generators: candidates must be nonempty");
  const std::size_t n = candidates[0].size();
  for (const auto& c : candidates)
    if (c.size() != n || c.modulus() != modulus)
      throw std::invalid_argument("find_collision_free_generators: candidate shape mismatch");
  {
    std::set<std::vector<std::uint32_t>> unique;
    for (const auto& c : candidates) unique.insert(c.digits());
    if (unique.size() != candidates.size())
      throw std::invalid_argument("find_collision_free_generators: candidates must be distinct");
  }
  if (max_m > n)
    throw std::invalid_argument("find_collision_free_generators: max_m must be <= n");

  const std::uint64_t k = candidates.size();
  std::size_t m = std::max<std::size_t>(1, ceil_log(modulus, k * k));
  for (; m <= max_m; ++m) {
    for (std::uint64_t attempt = 0; attempt < 32; ++attempt) {
      GeneratorSet generators = random_generators(n, m, modulus, rng::derive_seed(seed, m, attempt));
      std::set<std::vector<std::uint32_t>> seen;
      bool injective = true;
      for (const auto& c : candidates)
        if (!seen.insert(encode(generators, c).digits()).second) {
          injective = false;
          break;
        }
      if (injective) return generators;
    }
  }
  throw search_failure("find_collision_free_generators: exhausted max_m without an injective code");
}

}  // namespace onequery
