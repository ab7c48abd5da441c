#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace onequery {

enum class XorMode { serial_xor, parallel_xor };
enum class CostAlgorithm { coin_weighing, walsh_search, huffman_search, random_coding };

inline std::string_view xor_mode_name(XorMode mode) {
  return mode == XorMode::serial_xor ? "serial" : "parallel-xor";
}

inline std::string_view cost_algorithm_name(CostAlgorithm algorithm) {
  switch (algorithm) {
    case CostAlgorithm::coin_weighing: return "coin_weighing";
    case CostAlgorithm::walsh_search: return "walsh_search";
    case CostAlgorithm::huffman_search: return "huffman_search";
    case CostAlgorithm::random_coding: return "random_coding";
  }
  throw std::logic_error("cost_algorithm_name: bad enum");
}

/// Modeled run times in units of one elementary register operation, with the
/// database circuit entering as a black-box cost T(n).
struct CostReport {
  std::string algorithm;
  double quantum_time = 0.0;
  double classical_time = 0.0;
  double bound_queries = 0.0;
  XorMode mode = XorMode::serial_xor;
  // the parallel multi-bit XOR trick is stated for the Walsh circuit; applying
  // it to the m-query schemes is an extrapolation and is flagged as such
  bool parallel_extrapolated = false;
};

using TimeFunction = std::function<double(std::size_t)>;

/// M >= H(Y) / log2(A): queries needed classically to learn H bits from
/// A-valued answers.
inline double info_bound(double entropy_bits, std::uint32_t answers) {
  if (entropy_bits < 0.0) throw std::domain_error("info_bound: entropy must be nonnegative");
  if (answers < 2) throw std::domain_error("info_bound: answer alphabet must be >= 2");
  return entropy_bits / std::log2(static_cast<double>(answers));
}

/// n / log2(n+1): lower bound on classical spring-scale weighings.
inline double coin_bound(std::size_t n) {
  if (n == 0) throw std::domain_error("coin_bound: n must be >= 1");
  return static_cast<double>(n) / std::log2(static_cast<double>(n) + 1.0);
}

/// 2n / log2(n): large-n query count of the best predetermined weighing
/// strategy, reported as an asymptotic reference.
inline double predetermined_limit(std::size_t n) {
  if (n < 2) throw std::domain_error("predetermined_limit: n must be >= 2");
  return 2.0 * static_cast<double>(n) / std::log2(static_cast<double>(n));
}

inline TimeFunction t_preset(std::string_view name) {
  if (name == "log") return [](std::size_t n) { return std::log2(static_cast<double>(n)); };
  if (name == "linear") return [](std::size_t n) { return static_cast<double>(n); };
  if (name == "quadratic") {
    return [](std::size_t n) { return static_cast<double>(n) * static_cast<double>(n); };
  }
  throw std::invalid_argument("t_preset: expected log, linear or quadratic");
}

/// Closed-form run times per algorithm.
///   coin weighing   quantum 2 + T(n)               classical n T(n) / log2(n+1)
///   walsh search    quantum 2 + n log2 n + T(n)    classical log2(n)/2 + T(n) log2 n
///                   (parallel XOR: 2 + log2 n + T(n))
///   m-query schemes quantum 2 + m n + T(n)         classical m/2 + m T(n)
///                   (parallel XOR: 2 + m + T(n), extrapolated)
inline CostReport runtime(CostAlgorithm algorithm, std::size_t n, std::optional<std::size_t> m,
                          const TimeFunction& T, XorMode mode,
                          std::optional<double> entropy_bits = std::nullopt,
                          std::optional<std::uint32_t> answer_alphabet = std::nullopt) {
  if (n == 0) throw std::domain_error("runtime: n must be >= 1");
  const double tn = T(n);
  CostReport report;
  report.algorithm = std::string(cost_algorithm_name(algorithm));
  report.mode = mode;
  switch (algorithm) {
    case CostAlgorithm::coin_weighing: {
      report.quantum_time = 2.0 + tn;
      report.classical_time =
          static_cast<double>(n) * tn / std::log2(static_cast<double>(n) + 1.0);
      report.bound_queries = info_bound(entropy_bits.value_or(static_cast<double>(n)),
                                        answer_alphabet.value_or(static_cast<std::uint32_t>(n + 1)));
      break;
    }
    case CostAlgorithm::walsh_search: {
      if (n < 2) throw std::domain_error("runtime: walsh search needs n >= 2");
      const double logn = std::log2(static_cast<double>(n));
      report.quantum_time = (mode == XorMode::parallel_xor)
                                ? 2.0 + logn + tn
                                : 2.0 + static_cast<double>(n) * logn + tn;
      report.classical_time = logn / 2.0 + tn * logn;
      report.bound_queries = info_bound(entropy_bits.value_or(logn), answer_alphabet.value_or(2));
      break;
    }
    case CostAlgorithm::huffman_search:
    case CostAlgorithm::random_coding: {
      if (!m) throw std::invalid_argument("runtime: m is required for the m-query schemes");
      const double md = static_cast<double>(*m);
      if (mode == XorMode::parallel_xor) {
        report.quantum_time = 2.0 + md + tn;
        report.parallel_extrapolated = true;
      } else {
        report.quantum_time = 2.0 + md * static_cast<double>(n) + tn;
      }
      report.classical_time = md / 2.0 + md * tn;
      if (algorithm == CostAlgorithm::huffman_search) {
        report.bound_queries = info_bound(entropy_bits.value_or(std::log2(static_cast<double>(n))),
                                          answer_alphabet.value_or(2));
      } else {
        const std::uint32_t a = answer_alphabet.value_or(2);
        report.bound_queries =
            info_bound(entropy_bits.value_or(md * std::log2(static_cast<double>(a))), a);
      }
      break;
    }
  }
  return report;
}

/// Smallest n0 <= n_max past which the quantum pipeline beats the classical
/// one for every admissible n; nullopt when no such point exists in range.
inline std::optional<std::size_t> crossover_n(CostAlgorithm algorithm, std::optional<std::size_t> m,
                                              const TimeFunction& T, XorMode mode,
                                              std::size_t n_max) {
  const std::size_t n_min = (algorithm == CostAlgorithm::coin_weighing) ? 1 : 2;
  const auto admissible = [&](std::size_t n) {
    return algorithm != CostAlgorithm::walsh_search || std::has_single_bit(n);
  };
  std::optional<std::size_t> first;
  std::optional<std::size_t> last_losing;
  for (std::size_t n = n_min; n <= n_max && n != 0; ++n) {
    if (!admissible(n)) continue;
    if (!first) first = n;
    const CostReport r = runtime(algorithm, n, m, T, mode);
    if (!(r.quantum_time < r.classical_time)) last_losing = n;
  }
  if (!first) return std::nullopt;
  if (!last_losing) return first;
  for (std::size_t n = *last_losing + 1; n <= n_max && n != 0; ++n)
    if (admissible(n)) return n;
  return std::nullopt;
}

}  // namespace onequery
