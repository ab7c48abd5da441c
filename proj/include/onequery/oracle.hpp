#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "onequery/algebra.hpp"
#include "onequery/quantum.hpp"

namespace onequery {

/// Smallest odd integer >= n, i.e. 2 ceil((n+1)/2) - 1. Makes n'+1 even so a
/// (-1)^b answer register works for the spring scale.
inline std::size_t n_prime(std::size_t n) {
  if (n == 0) throw std::domain_error("n_prime: n must be >= 1");
  return 2 * ((n + 2) / 2) - 1;
}

enum class AnswerKind { parity, spring_scale, za_dot };

inline std::string_view answer_kind_name(AnswerKind kind) {
  switch (kind) {
    case AnswerKind::parity: return "parity";
    case AnswerKind::spring_scale: return "spring_scale";
    case AnswerKind::za_dot: return "za_dot";
  }
  throw std::logic_error("answer_kind_name: bad enum");
}

/// The database: contents y plus the answer map a(x, y).
///   parity        a = x.y mod 2          (alphabet 2)
///   spring_scale  a = w_H(x AND y)       (alphabet n'+1, even by construction)
///   za_dot        a = x.y mod A          (alphabet A)
class OracleSpec {
 public:
  static OracleSpec parity(DigitString contents) {
    require_binary(contents, "parity");
    return OracleSpec(std::move(contents), AnswerKind::parity, 2);
  }

  static OracleSpec spring_scale(DigitString contents) {
    require_binary(contents, "spring_scale");
    const auto alphabet = static_cast<std::uint32_t>(n_prime(contents.size()) + 1);
    return OracleSpec(std::move(contents), AnswerKind::spring_scale, alphabet);
  }

  static OracleSpec za_dot(DigitString contents) {
    const std::uint32_t alphabet = contents.modulus();
    return OracleSpec(std::move(contents), AnswerKind::za_dot, alphabet);
  }

  AnswerKind kind() const { return kind_; }
  std::uint32_t answer_alphabet() const { return answer_alphabet_; }
  std::size_t length() const { return contents_.size(); }
  std::uint32_t query_modulus() const {
    return kind_ == AnswerKind::za_dot ? contents_.modulus() : 2;
  }

  /// Database contents. Recovery paths must not read this; it exists for
  /// oracle evaluation and for grading a finished run.
  const DigitString& contents() const { return contents_; }

 private:
  OracleSpec(DigitString contents, AnswerKind kind, std::uint32_t alphabet)
      : contents_(std::move(contents)), kind_(kind), answer_alphabet_(alphabet) {}

  static void require_binary(const DigitString& contents, const char* what) {
    if (contents.modulus() != 2)
      throw std::invalid_argument(std::string(what) + " oracle requires binary contents");
  }

  DigitString contents_;
  AnswerKind kind_;
  std::uint32_t answer_alphabet_;
};

/// One tick per oracle use, classical or quantum; superposition width does not
/// change the count.
struct QueryCounter {
  std::uint64_t calls = 0;
};

inline std::uint32_t classical_answer(const OracleSpec& spec, const DigitString& query,
                                      QueryCounter& counter) {
  if (query.size() != spec.length()) throw std::invalid_argument("classical_answer: query length mismatch");
  if (query.modulus() != spec.query_modulus())
    throw std::invalid_argument("classical_answer: query modulus mismatch");
  ++counter.calls;
  switch (spec.kind()) {
    case AnswerKind::parity: return dot_mod(query, spec.contents());
    case AnswerKind::spring_scale:
      return static_cast<std::uint32_t>(hamming_and_weight(query, spec.contents()));
    case AnswerKind::za_dot: return dot_mod(query, spec.contents());
  }
  throw std::logic_error("classical_answer: bad enum");
}

/// How the query register's basis values map to database query strings.
///   direct:    value digits (little-endian base A) are the query itself
///   generated: value digits form an index string s; the query is sum_k s_k g_k
class QueryBasis {
 public:
  static QueryBasis direct(std::string register_name, std::size_t length, std::uint32_t modulus) {
    return QueryBasis(std::move(register_name), length, modulus, {});
  }

  static QueryBasis generated(std::string register_name, std::vector<DigitString> generators) {
    if (generators.empty()) throw std::invalid_argument("QueryBasis: at least one generator required");
    const std::size_t n = generators[0].size();
    const std::uint32_t a = generators[0].modulus();
    for (const auto& g : generators)
      if (g.size() != n || g.modulus() != a)
        throw std::invalid_argument("QueryBasis: generators must share length and modulus");
    return QueryBasis(std::move(register_name), n, a, std::move(generators));
  }

  const std::string& register_name() const { return register_name_; }
  std::uint32_t modulus() const { return modulus_; }
  std::size_t query_length() const { return query_length_; }
  bool is_generated() const { return !generators_.empty(); }
  const std::vector<DigitString>& generators() const { return generators_; }
  std::size_t index_length() const { return is_generated() ? generators_.size() : query_length_; }

  std::size_t dimension() const {
    std::size_t d = 1;
    for (std::size_t i = 0; i < index_length(); ++i) {
      if (d > (std::size_t(1) << 40) / modulus_)
        throw resource_error("QueryBasis: register dimension too large");
      d *= modulus_;
    }
    return d;
  }

  DigitString query_for(std::size_t value) const {
    const DigitString digits = DigitString::from_index(value, index_length(), modulus_);
    if (!is_generated()) return digits;
    return expand_member(std::span<const DigitString>(generators_), digits);
  }

 private:
  QueryBasis(std::string name, std::size_t length, std::uint32_t modulus,
             std::vector<DigitString> generators)
      : register_name_(std::move(name)),
        query_length_(length),
        modulus_(modulus),
        generators_(std::move(generators)) {
    if (register_name_.empty()) throw std::invalid_argument("QueryBasis: register name required");
    if (query_length_ == 0) throw std::invalid_argument("QueryBasis: query length must be >= 1");
    if (modulus_ < 2) throw std::domain_error("QueryBasis: modulus must be >= 2");
  }

  std::string register_name_;
  std::size_t query_length_;
  std::uint32_t modulus_;
  std::vector<DigitString> generators_;
};

namespace detail {

// a(query(v), y) for every basis value v. Parity and Z_A answers are linear in
// the index digits, so a digit odometer with per-digit weights covers both the
// direct and the generated basis in one pass. The spring scale is linear over
// the integers for the direct basis only; generated spring queries fall back
// to expanding each group member.
inline std::vector<std::uint32_t> oracle_answer_table(const OracleSpec& spec, const QueryBasis& basis) {
  const std::size_t dim = basis.dimension();
  const std::uint32_t digit_base = basis.modulus();
  const std::size_t index_length = basis.index_length();
  std::vector<std::uint32_t> answers(dim);

  if (spec.kind() == AnswerKind::spring_scale && basis.is_generated()) {
    for (std::size_t v = 0; v < dim; ++v)
      answers[v] = static_cast<std::uint32_t>(hamming_and_weight(basis.query_for(v), spec.contents()));
    return answers;
  }

  if (spec.kind() == AnswerKind::spring_scale) {
    const DigitString& y = spec.contents();
    std::vector<std::uint32_t> odometer(index_length, 0);
    std::uint32_t acc = 0;
    for (std::size_t v = 0;;) {
      answers[v] = acc;
      if (++v == dim) break;
      std::size_t j = 0;
      while (odometer[j] + 1 == digit_base) {
        odometer[j] = 0;
        acc -= (digit_base - 1) * y[j];
        ++j;
      }
      ++odometer[j];
      acc += y[j];
    }
    return answers;
  }

  const std::uint32_t out_mod = spec.answer_alphabet();
  std::vector<std::uint32_t> weight(index_length);
  if (basis.is_generated()) {
    for (std::size_t k = 0; k < index_length; ++k)
      weight[k] = dot_mod(basis.generators()[k], spec.contents());
  } else {
    for (std::size_t k = 0; k < index_length; ++k) weight[k] = spec.contents()[k] % out_mod;
  }
  std::vector<std::uint32_t> odometer(index_length, 0);
  std::uint32_t acc = 0;
  for (std::size_t v = 0;;) {
    answers[v] = acc;
    if (++v == dim) break;
    std::size_t j = 0;
    while (odometer[j] + 1 == digit_base) {
      odometer[j] = 0;
      const auto drop = static_cast<std::uint32_t>(std::uint64_t(digit_base - 1) * weight[j] % out_mod);
      acc = (acc + out_mod - drop) % out_mod;
      ++j;
    }
    ++odometer[j];
    acc = (acc + weight[j]) % out_mod;
  }
  return answers;
}

}  // namespace detail

/// The reversible database query: the amplitude of |x, b> moves to
/// |x, (b + a(x, y)) mod A'>. A permutation of basis states, so the norm is
/// preserved exactly. Counts as one oracle call however wide the superposition.
inline QuantumState apply_quantum_query(QuantumState state, const OracleSpec& spec,
                                        const QueryBasis& basis, QueryCounter& counter,
                                        std::string_view answer_register = "b") {
  const RegisterLayout layout = state.layout();
  const std::size_t query_pos = layout.position(basis.register_name());
  const std::size_t answer_pos = layout.position(answer_register);
  if (query_pos == answer_pos)
    throw std::invalid_argument("apply_quantum_query: query and answer registers must differ");
  if (layout.registers()[query_pos].dimension != basis.dimension())
    throw std::invalid_argument("apply_quantum_query: query register dimension mismatch");
  const std::size_t answer_dim = layout.registers()[answer_pos].dimension;
  if (answer_dim != spec.answer_alphabet())
    throw std::invalid_argument(
        "apply_quantum_query: answer register dimension must equal the answer alphabet");
  if (basis.query_length() != spec.length())
    throw std::invalid_argument("apply_quantum_query: query length mismatch");
  if (basis.modulus() != spec.query_modulus())
    throw std::invalid_argument("apply_quantum_query: query modulus mismatch");

  const std::vector<std::uint32_t> answers = detail::oracle_answer_table(spec, basis);

  const std::size_t query_stride = layout.stride(query_pos);
  const std::size_t query_dim = layout.registers()[query_pos].dimension;
  const std::size_t answer_stride = layout.stride(answer_pos);

  std::vector<Complex> in = std::move(state).take();
  std::vector<Complex> out(in.size());
  if (layout.registers().size() == 2 && query_pos == 0) {
    // [query, answer] layout: contiguous blocks, no per-index divisions
    for (std::size_t qv = 0; qv < query_dim; ++qv) {
      const std::size_t base = qv * answer_dim;
      const std::uint32_t a = answers[qv];
      for (std::size_t b = 0; b < answer_dim; ++b)
        out[base + (b + a) % answer_dim] = in[base + b];
    }
  } else {
    for (std::size_t i = 0; i < in.size(); ++i) {
      const std::size_t qv = (i / query_stride) % query_dim;
      const std::size_t b = (i / answer_stride) % answer_dim;
      const std::size_t b_new = (b + answers[qv]) % answer_dim;
      out[i - b * answer_stride + b_new * answer_stride] = in[i];
    }
  }
  counter.calls += 1;
  return QuantumState::from_normalized(layout, std::move(out));
}

}  // namespace onequery
