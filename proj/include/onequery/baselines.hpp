#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "onequery/algorithms.hpp"
#include "onequery/codes.hpp"
#include "onequery/oracle.hpp"

namespace onequery {

/// Query each Walsh generator once classically; exactly log2(n) oracle calls.
inline Transcript classical_bisection(const OracleSpec& spec) {
  if (spec.kind() != AnswerKind::parity)
    throw std::invalid_argument("classical_bisection: parity oracle required");
  if (spec.contents().weight() != 1)
    throw std::invalid_argument("classical_bisection: weight-1 contents required");
  const std::size_t n = spec.length();
  const GeneratorSet generators = walsh_generators(n);

  QueryCounter counter;
  std::vector<std::uint32_t> z(generators.count());
  for (std::size_t k = 0; k < generators.count(); ++k)
    z[k] = classical_answer(spec, generators[k], counter);
  const DigitString encoding(std::move(z), 2);

  std::unordered_map<std::uint64_t, std::size_t> table;
  for (std::size_t i = 0; i < n; ++i) table[encode_unit(generators, i).to_index()] = i;
  const std::size_t item = table.at(encoding.to_index());

  Transcript t;
  t.recovered = DigitString::unit(n, item, 2);
  t.recovered_item = item;
  t.oracle_calls = counter.calls;
  t.success = (*t.recovered == spec.contents());
  t.final_outcome_probability = 1.0;
  return t;
}

/// Query every singleton e_i; n oracle calls recover y digit by digit.
inline Transcript classical_parity_readout(const OracleSpec& spec) {
  if (spec.kind() == AnswerKind::za_dot)
    throw std::invalid_argument("classical_parity_readout: parity or spring-scale oracle required");
  const std::size_t n = spec.length();
  QueryCounter counter;
  std::vector<std::uint32_t> bits(n);
  for (std::size_t i = 0; i < n; ++i)
    bits[i] = classical_answer(spec, DigitString::unit(n, i, 2), counter);  // w_H(e_i AND y) = y_i
  Transcript t;
  t.recovered = DigitString(std::move(bits), 2);
  t.oracle_calls = counter.calls;
  t.success = (*t.recovered == spec.contents());
  t.final_outcome_probability = 1.0;
  return t;
}

/// Ask Huffman queries in order until the observed bits form a complete
/// codeword; prefix-freeness makes the first hit the marked item, after
/// exactly l_marked calls.
inline Transcript classical_huffman_search(const OracleSpec& spec, const HuffmanCode& code) {
  if (spec.kind() != AnswerKind::parity)
    throw std::invalid_argument("classical_huffman_search: parity oracle required");
  if (spec.contents().weight() != 1)
    throw std::invalid_argument("classical_huffman_search: weight-1 contents required");
  const std::size_t n = code.codewords().size();
  if (spec.length() != n)
    throw std::invalid_argument("classical_huffman_search: oracle length must match the code");

  std::unordered_map<std::string, std::size_t> complete;
  complete.reserve(n);
  for (std::size_t i = 0; i < n; ++i) complete[code.codewords()[i].str()] = i;

  QueryCounter counter;
  std::string observed;
  std::optional<std::size_t> item;
  const std::size_t depth = code.max_length();
  for (std::size_t k = 0; k < depth && !item; ++k) {
    std::vector<std::uint32_t> row(n);
    for (std::size_t i = 0; i < n; ++i) row[i] = code.code_bit(i, k);
    const std::uint32_t answer = classical_answer(spec, DigitString(std::move(row), 2), counter);
    observed.push_back(static_cast<char>('0' + answer));
    const auto it = complete.find(observed);
    if (it != complete.end()) item = it->second;
  }

  Transcript t;
  t.oracle_calls = counter.calls;
  t.final_outcome_probability = 1.0;
  if (item) {
    t.recovered = DigitString::unit(n, *item, 2);
    t.recovered_item = item;
    t.success = (*t.recovered == spec.contents());
  }
  return t;
}

/// Query each generator once classically and decode through the same candidate
/// table as the quantum run; the success statistics match run by run.
inline Transcript classical_random_code(const OracleSpec& spec, const GeneratorSet& generators,
                                        const std::vector<DigitString>& candidates) {
  if (spec.kind() != AnswerKind::za_dot)
    throw std::invalid_argument("classical_random_code: Z_A dot oracle required");
  detail::validate_candidates(candidates);
  if (generators.length() != spec.length() || generators.modulus() != spec.contents().modulus())
    throw std::invalid_argument("classical_random_code: generator shape mismatch");
  if (candidates[0].size() != spec.length() || candidates[0].modulus() != spec.contents().modulus())
    throw std::invalid_argument("classical_random_code: candidate shape mismatch");

  QueryCounter counter;
  std::vector<std::uint32_t> z(generators.count());
  for (std::size_t k = 0; k < generators.count(); ++k)
    z[k] = classical_answer(spec, generators[k], counter);
  const std::uint64_t key = DigitString(std::move(z), generators.modulus()).to_index();

  const detail::DecodeTable table = detail::candidate_decode_table(generators, candidates);
  Transcript t;
  t.oracle_calls = counter.calls;
  t.final_outcome_probability = 1.0;
  const auto it = table.find(key);
  if (it != table.end() && it->second.first == 1) {
    t.recovered = candidates[it->second.second];
    t.recovered_item = it->second.second;
    t.success = (*t.recovered == spec.contents());
  }
  return t;
}

}  // namespace onequery
