#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "onequery/codes.hpp"
#include "onequery/errors.hpp"
#include "onequery/oracle.hpp"
#include "onequery/quantum.hpp"

namespace onequery {

inline constexpr std::size_t simulator_dimension_cap = std::size_t(1) << 20;

/// One algorithm run: what was recovered, at what oracle cost, and how surely.
struct Transcript {
  std::optional<DigitString> recovered;       // database contents, when decoding resolved them
  std::optional<std::size_t> recovered_item;  // marked-item offset for the search problems
  std::uint64_t oracle_calls = 0;
  bool success = false;
  double final_outcome_probability = 0.0;
};

/// Pipeline snapshots for analysis; the plain run_* entry points skip them.
struct PipelineTrace {
  Transcript transcript;
  std::optional<QuantumState> prepared;
  std::optional<QuantumState> queried;
  std::optional<QuantumState> transformed;
  double answer_register_fidelity = std::numeric_limits<double>::quiet_NaN();
};

/// Codeword length of the random-coding scheme: ceil(log_A k) + l, at least 1.
inline std::size_t random_code_length(std::uint32_t alphabet, std::size_t candidates, std::size_t slack) {
  return std::max<std::size_t>(1, ceil_log(alphabet, candidates) + slack);
}

/// Drops all-zero and duplicate rows, then requires the remainder independent
/// over Z_2. Dependent rows would change the number of distinguishable states,
/// so they are rejected rather than silently deduplicated.
inline void ensure_independent_query_rows(std::span<const DigitString> queries) {
  std::vector<DigitString> filtered;
  std::set<std::vector<std::uint32_t>> seen;
  for (const auto& q : queries) {
    if (q.weight() == 0) continue;
    if (seen.insert(q.digits()).second) filtered.push_back(q);
  }
  if (filtered.empty()) return;
  if (!is_linearly_independent(filtered, 2))
    throw std::invalid_argument(
        "degenerate query set: rows stay linearly dependent after dropping zero and duplicate rows");
}

namespace detail {

struct DecodeResult {
  std::optional<DigitString> recovered;
  std::optional<std::size_t> item;
};

// Prepare uniform query index x phase eigenstate, query once, transform back,
// measure, decode. All four algorithms are instances of this pipeline.
inline PipelineTrace run_single_query(const OracleSpec& spec, const QueryBasis& basis, Complex omega,
                                      std::uint32_t transform_base, bool trace,
                                      const std::function<DecodeResult(std::uint64_t)>& decode) {
  if (basis.dimension() > simulator_dimension_cap)
    throw resource_error("query register dimension exceeds the simulator cap of 2^20");
  const std::string& query_register = basis.register_name();
  QuantumState query_part =
      fourier_all(QuantumState::basis(RegisterLayout({{query_register, basis.dimension()}}), {0}),
                  query_register, transform_base);
  QuantumState answer_part = phase_eigenstate(spec.answer_alphabet(), omega, "b");
  QuantumState prepared = tensor_product(query_part, answer_part);

  QueryCounter counter;
  QuantumState queried = trace ? apply_quantum_query(prepared, spec, basis, counter)
                               : apply_quantum_query(std::move(prepared), spec, basis, counter);

  PipelineTrace out;
  if (trace) out.answer_register_fidelity = fidelity_with(queried, "b", answer_part);

  QuantumState transformed = trace ? fourier_all(queried, query_register, transform_base)
                                   : fourier_all(std::move(queried), query_register, transform_base);
  const Measurement measurement = measure_register(transformed, query_register);
  const DecodeResult decoded = decode(measurement.outcome);

  Transcript transcript;
  transcript.recovered = decoded.recovered;
  transcript.recovered_item = decoded.item;
  transcript.oracle_calls = counter.calls;
  transcript.final_outcome_probability = measurement.probability;
  transcript.success = decoded.recovered.has_value() && *decoded.recovered == spec.contents();
  out.transcript = std::move(transcript);
  if (trace) {
    out.prepared = std::move(prepared);
    out.queried = std::move(queried);
    out.transformed = std::move(transformed);
  }
  return out;
}

using DecodeTable = std::unordered_map<std::uint64_t, std::pair<std::size_t, std::size_t>>;

// encoding index -> (multiplicity, candidate offset); multiplicity > 1 marks a
// collision, which decoders report as ambiguous.
inline DecodeTable candidate_decode_table(const GeneratorSet& generators,
                                          const std::vector<DigitString>& candidates) {
  DecodeTable table;
  table.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    auto& entry = table[encode(generators, candidates[i]).to_index()];
    entry.first += 1;
    entry.second = i;
  }
  return table;
}

inline void validate_candidates(const std::vector<DigitString>& candidates) {
  if (candidates.empty()) throw std::invalid_argument("candidate list must not be empty");
  const std::size_t n = candidates[0].size();
  const std::uint32_t a = candidates[0].modulus();
  std::set<std::vector<std::uint32_t>> unique;
  for (const auto& c : candidates) {
    if (c.size() != n || c.modulus() != a)
      throw std::invalid_argument("candidates must share length and modulus");
    if (!unique.insert(c.digits()).second) throw std::invalid_argument("candidates must be distinct");
  }
}

inline PipelineTrace run_bv(const OracleSpec& spec, bool trace) {
  if (spec.kind() != AnswerKind::spring_scale && spec.kind() != AnswerKind::parity)
    throw std::invalid_argument("coin weighing requires a spring-scale or parity oracle");
  const std::size_t n = spec.length();
  if (n >= 64 || (std::size_t(1) << n) > simulator_dimension_cap)
    throw resource_error("coin weighing needs 2^n within the simulator cap of 2^20");
  const QueryBasis basis = QueryBasis::direct("x", n, 2);
  return run_single_query(spec, basis, Complex(-1.0, 0.0), 2, trace, [n](std::uint64_t outcome) {
    return DecodeResult{DigitString::from_index(outcome, n, 2), std::nullopt};
  });
}

inline PipelineTrace run_walsh(const OracleSpec& spec, bool trace) {
  if (spec.kind() != AnswerKind::parity)
    throw std::invalid_argument("walsh search requires a parity oracle");
  if (spec.contents().weight() != 1)
    throw std::invalid_argument("walsh search requires database contents of Hamming weight 1");
  const std::size_t n = spec.length();
  const GeneratorSet generators = walsh_generators(n);
  auto table = std::make_shared<std::unordered_map<std::uint64_t, std::size_t>>();
  for (std::size_t i = 0; i < n; ++i)
    (*table)[encode_unit(generators, i).to_index()] = i;
  const QueryBasis basis = QueryBasis::generated("s", generators.generators());
  return run_single_query(spec, basis, Complex(-1.0, 0.0), 2, trace,
                          [table, n](std::uint64_t outcome) -> DecodeResult {
                            const auto it = table->find(outcome);
                            if (it == table->end()) return {std::nullopt, std::nullopt};
                            return {DigitString::unit(n, it->second, 2), it->second};
                          });
}

inline PipelineTrace run_huffman(const SourceDistribution& source, std::size_t m,
                                 const OracleSpec& spec, bool trace) {
  if (spec.kind() != AnswerKind::parity)
    throw std::invalid_argument("huffman search requires a parity oracle");
  if (spec.contents().weight() != 1)
    throw std::invalid_argument("huffman search requires database contents of Hamming weight 1");
  if (spec.length() != source.size())
    throw std::invalid_argument("oracle length must match the source size");
  if (m == 0) throw std::invalid_argument("huffman search needs m >= 1");
  if (m >= 64 || (std::size_t(1) << m) > simulator_dimension_cap)
    throw resource_error("huffman search needs 2^m within the simulator cap of 2^20");

  const HuffmanCode code = build_huffman(source);
  const std::vector<DigitString> queries = huffman_queries(code, m);
  ensure_independent_query_rows(queries);

  const std::size_t n = source.size();
  auto table = std::make_shared<std::unordered_map<std::uint64_t, std::pair<std::size_t, std::size_t>>>();
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t key = 0;
    for (std::size_t k = 0; k < m; ++k) key |= std::uint64_t(code.code_bit(i, k)) << k;
    auto& entry = (*table)[key];
    entry.first += 1;
    entry.second = i;
  }
  const QueryBasis basis = QueryBasis::generated("s", queries);
  return run_single_query(spec, basis, Complex(-1.0, 0.0), 2, trace,
                          [table, n](std::uint64_t outcome) -> DecodeResult {
                            const auto it = table->find(outcome);
                            if (it == table->end() || it->second.first != 1)
                              return {std::nullopt, std::nullopt};
                            return {DigitString::unit(n, it->second.second, 2), it->second.second};
                          });
}

inline PipelineTrace run_random(const std::vector<DigitString>& candidates, std::size_t slack,
                                std::uint64_t seed, const OracleSpec& spec, bool trace) {
  if (spec.kind() != AnswerKind::za_dot)
    throw std::invalid_argument("random coding requires a Z_A dot oracle");
  validate_candidates(candidates);
  const std::size_t n = candidates[0].size();
  const std::uint32_t a = candidates[0].modulus();
  if (spec.length() != n || spec.contents().modulus() != a)
    throw std::invalid_argument("oracle contents incompatible with the candidates");
  bool listed = false;
  for (const auto& c : candidates) listed = listed || c == spec.contents();
  if (!listed) throw std::invalid_argument("oracle contents must be one of the candidates");

  const std::size_t m = random_code_length(a, candidates.size(), slack);
  if (m > n) throw std::invalid_argument("infeasible: code length m exceeds the string length n");
  std::size_t dimension = 1;
  for (std::size_t i = 0; i < m; ++i) {
    if (dimension > simulator_dimension_cap / a)
      throw resource_error("A^m exceeds the simulator cap of 2^20");
    dimension *= a;
  }

  const GeneratorSet generators = random_generators(n, m, a, seed);
  auto table = std::make_shared<DecodeTable>(candidate_decode_table(generators, candidates));
  auto pool = std::make_shared<std::vector<DigitString>>(candidates);
  const QueryBasis basis = QueryBasis::generated("s", generators.generators());
  return run_single_query(spec, basis, root_of_unity(a, 1), a, trace,
                          [table, pool](std::uint64_t outcome) -> DecodeResult {
                            const auto it = table->find(outcome);
                            if (it == table->end() || it->second.first != 1)
                              return {std::nullopt, std::nullopt};
                            return {(*pool)[it->second.second], it->second.second};
                          });
}

}  // namespace detail

/// Weigh every subset in superposition once; the whole database comes back out
/// of the phases after a second round of Hadamards.
inline Transcript run_bv_coin_weighing(const OracleSpec& spec) {
  return detail::run_bv(spec, false).transcript;
}
inline PipelineTrace run_bv_coin_weighing_traced(const OracleSpec& spec) {
  return detail::run_bv(spec, true);
}

/// Single-query binary search over the Walsh function group.
inline Transcript run_walsh_search(const OracleSpec& spec) {
  return detail::run_walsh(spec, false).transcript;
}
inline PipelineTrace run_walsh_search_traced(const OracleSpec& spec) {
  return detail::run_walsh(spec, true);
}

/// Walsh pipeline with the first m Huffman queries standing in for the
/// generators; items with unique truncated codewords decode with certainty.
inline Transcript run_huffman_search(const SourceDistribution& source, std::size_t m,
                                     const OracleSpec& spec) {
  return detail::run_huffman(source, m, spec, false).transcript;
}
inline PipelineTrace run_huffman_search_traced(const SourceDistribution& source, std::size_t m,
                                               const OracleSpec& spec) {
  return detail::run_huffman(source, m, spec, true);
}

/// Single-query retrieval over Z_A with a seeded random linear code; collisions
/// in the code leave the run ambiguous and unsuccessful.
inline Transcript run_random_coding(const std::vector<DigitString>& candidates, std::size_t slack,
                                    std::uint64_t seed, const OracleSpec& spec) {
  return detail::run_random(candidates, slack, seed, spec, false).transcript;
}
inline PipelineTrace run_random_coding_traced(const std::vector<DigitString>& candidates,
                                              std::size_t slack, std::uint64_t seed,
                                              const OracleSpec& spec) {
  return detail::run_random(candidates, slack, seed, spec, true);
}

}  // namespace onequery
