#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "onequery/errors.hpp"
#include "onequery/rng.hpp"

namespace onequery {

inline bool is_prime(std::uint32_t value) {
  if (value < 2) return false;
  for (std::uint32_t d = 2; d <= value / d; ++d)
    if (value % d == 0) return false;
  return true;
}

/// A fixed-length string of digits over Z_A (A=2 gives bit strings).
/// Position i of 1..n lives at offset i-1, prints first, and is the least
/// significant digit of to_index().
class DigitString {
 public:
  DigitString(std::vector<std::uint32_t> digits, std::uint32_t modulus)
      : digits_(std::move(digits)), modulus_(modulus) {
    if (modulus_ < 2) throw std::domain_error("DigitString: modulus must be at least 2");
    if (digits_.empty()) throw std::invalid_argument("DigitString: length must be at least 1");
    for (std::uint32_t d : digits_)
      if (d >= modulus_) throw std::invalid_argument("DigitString: digit out of range for modulus");
  }

  static DigitString zeros(std::size_t length, std::uint32_t modulus) {
    return DigitString(std::vector<std::uint32_t>(length, 0), modulus);
  }

  static DigitString unit(std::size_t length, std::size_t position, std::uint32_t modulus) {
    if (position >= length) throw std::invalid_argument("DigitString::unit: position out of range");
    std::vector<std::uint32_t> digits(length, 0);
    digits[position] = 1;
    return DigitString(std::move(digits), modulus);
  }

  static DigitString from_index(std::uint64_t value, std::size_t length, std::uint32_t modulus) {
    if (modulus < 2) throw std::domain_error("DigitString::from_index: modulus must be at least 2");
    std::vector<std::uint32_t> digits(length, 0);
    for (std::size_t i = 0; i < length; ++i) {
      digits[i] = static_cast<std::uint32_t>(value % modulus);
      value /= modulus;
    }
    if (value != 0) throw std::invalid_argument("DigitString::from_index: value needs more digits");
    return DigitString(std::move(digits), modulus);
  }

  /// Accepts "00110011" for A <= 10 and "(1,2,0)" for any modulus.
  static DigitString parse(std::string_view text, std::uint32_t modulus) {
    std::vector<std::uint32_t> digits;
    if (!text.empty() && text.front() == '(') {
      if (text.back() != ')') throw std::invalid_argument("DigitString::parse: unbalanced parentheses");
      std::stringstream in{std::string(text.substr(1, text.size() - 2))};
      std::string token;
      while (std::getline(in, token, ','))
        digits.push_back(static_cast<std::uint32_t>(std::stoul(token)));
    } else {
      for (char c : text) {
        if (c < '0' || c > '9') throw std::invalid_argument("DigitString::parse: invalid digit character");
        digits.push_back(static_cast<std::uint32_t>(c - '0'));
      }
    }
    return DigitString(std::move(digits), modulus);
  }

  std::size_t size() const { return digits_.size(); }
  std::uint32_t modulus() const { return modulus_; }
  std::uint32_t operator[](std::size_t i) const { return digits_[i]; }
  const std::vector<std::uint32_t>& digits() const { return digits_; }

  std::size_t weight() const {
    return static_cast<std::size_t>(
        std::count_if(digits_.begin(), digits_.end(), [](std::uint32_t d) { return d != 0; }));
  }

  std::uint64_t to_index() const {
    std::uint64_t acc = 0;
    for (std::size_t i = digits_.size(); i-- > 0;) {
      if (acc > (std::numeric_limits<std::uint64_t>::max() - digits_[i]) / modulus_)
        throw std::overflow_error("DigitString::to_index: value does not fit in 64 bits");
      acc = acc * modulus_ + digits_[i];
    }
    return acc;
  }

  std::string str() const {
    if (modulus_ <= 10) {
      std::string out;
      out.reserve(digits_.size());
      for (std::uint32_t d : digits_) out.push_back(static_cast<char>('0' + d));
      return out;
    }
    std::string out = "(";
    for (std::size_t i = 0; i < digits_.size(); ++i) {
      if (i) out.push_back(',');
      out += std::to_string(digits_[i]);
    }
    out.push_back(')');
    return out;
  }

  friend bool operator==(const DigitString&, const DigitString&) = default;

 private:
  std::vector<std::uint32_t> digits_;
  std::uint32_t modulus_;
};

/// (x . y) mod A for strings of matching length and modulus.
inline std::uint32_t dot_mod(const DigitString& x, const DigitString& y) {
  if (x.size() != y.size()) throw std::invalid_argument("dot_mod: length mismatch");
  if (x.modulus() != y.modulus()) throw std::invalid_argument("dot_mod: modulus mismatch");
  const std::uint64_t mod = x.modulus();
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) acc = (acc + std::uint64_t(x[i]) * y[i]) % mod;
  return static_cast<std::uint32_t>(acc);
}

/// Hamming weight of the bitwise AND; its parity equals dot_mod(x, y) over Z_2.
inline std::size_t hamming_and_weight(const DigitString& x, const DigitString& y) {
  if (x.modulus() != 2 || y.modulus() != 2)
    throw std::invalid_argument("hamming_and_weight: binary strings required");
  if (x.size() != y.size()) throw std::invalid_argument("hamming_and_weight: length mismatch");
  std::size_t count = 0;
  for (std::size_t i = 0; i < x.size(); ++i) count += (x[i] & y[i]);
  return count;
}

inline DigitString add_mod(const DigitString& x, const DigitString& y) {
  if (x.size() != y.size() || x.modulus() != y.modulus())
    throw std::invalid_argument("add_mod: shape mismatch");
  std::vector<std::uint32_t> digits(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    digits[i] = static_cast<std::uint32_t>((std::uint64_t(x[i]) + y[i]) % x.modulus());
  return DigitString(std::move(digits), x.modulus());
}

inline DigitString scale_mod(const DigitString& x, std::uint32_t factor) {
  std::vector<std::uint32_t> digits(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    digits[i] = static_cast<std::uint32_t>(std::uint64_t(x[i]) * factor % x.modulus());
  return DigitString(std::move(digits), x.modulus());
}

namespace detail {

inline std::uint32_t mod_pow(std::uint64_t base, std::uint64_t exponent, std::uint64_t modulus) {
  std::uint64_t acc = 1 % modulus;
  base %= modulus;
  while (exponent) {
    if (exponent & 1) acc = acc * base % modulus;
    base = base * base % modulus;
    exponent >>= 1;
  }
  return static_cast<std::uint32_t>(acc);
}

inline std::uint32_t mod_inverse(std::uint32_t value, std::uint32_t prime) {
  return mod_pow(value, prime - 2, prime);
}

}  // namespace detail

/// Full row rank over the field Z_A (A prime), by Gaussian elimination.
inline bool is_linearly_independent(std::span<const DigitString> rows, std::uint32_t modulus) {
  if (!is_prime(modulus))
    throw std::domain_error("is_linearly_independent: composite modulus unsupported, Z_A must be a field");
  if (rows.empty()) return true;
  const std::size_t n = rows[0].size();
  for (const auto& row : rows)
    if (row.size() != n || row.modulus() != modulus)
      throw std::invalid_argument("is_linearly_independent: mixed lengths or moduli");
  if (rows.size() > n) return false;

  std::vector<std::vector<std::uint32_t>> mat;
  mat.reserve(rows.size());
  for (const auto& row : rows) mat.push_back(row.digits());
  const std::uint64_t p = modulus;
  std::size_t pivot = 0;
  for (std::size_t col = 0; col < n && pivot < mat.size(); ++col) {
    std::size_t sel = pivot;
    while (sel < mat.size() && mat[sel][col] == 0) ++sel;
    if (sel == mat.size()) continue;
    std::swap(mat[sel], mat[pivot]);
    const std::uint64_t inv = detail::mod_inverse(mat[pivot][col], modulus);
    for (std::size_t j = col; j < n; ++j)
      mat[pivot][j] = static_cast<std::uint32_t>(mat[pivot][j] * inv % p);
    for (std::size_t r = pivot + 1; r < mat.size(); ++r) {
      const std::uint64_t factor = mat[r][col];
      if (factor == 0) continue;
      for (std::size_t j = col; j < n; ++j)
        mat[r][j] = static_cast<std::uint32_t>((mat[r][j] + (p - factor) * mat[pivot][j]) % p);
    }
    ++pivot;
  }
  return pivot == mat.size();
}

inline bool is_linearly_independent(const std::vector<DigitString>& rows, std::uint32_t modulus) {
  return is_linearly_independent(std::span<const DigitString>(rows), modulus);
}

/// m linearly independent strings over a prime modulus, defining y -> z.
class GeneratorSet {
 public:
  explicit GeneratorSet(std::vector<DigitString> generators) : generators_(std::move(generators)) {
    if (generators_.empty()) throw std::invalid_argument("GeneratorSet: at least one generator required");
    const std::size_t n = generators_[0].size();
    const std::uint32_t a = generators_[0].modulus();
    for (const auto& g : generators_)
      if (g.size() != n || g.modulus() != a)
        throw std::invalid_argument("GeneratorSet: generators must share length and modulus");
    if (generators_.size() > n) throw std::invalid_argument("GeneratorSet: more generators than positions");
    if (!is_linearly_independent(generators_, a))
      throw std::invalid_argument("GeneratorSet: generators are linearly dependent");
  }

  std::size_t count() const { return generators_.size(); }
  std::size_t length() const { return generators_[0].size(); }
  std::uint32_t modulus() const { return generators_[0].modulus(); }
  const DigitString& operator[](std::size_t k) const { return generators_[k]; }
  const std::vector<DigitString>& generators() const { return generators_; }

 private:
  std::vector<DigitString> generators_;
};

/// g_k is 2^{k-1} zeros alternating with 2^{k-1} ones: 0101..., 0011..., 00001111...
/// Requires n a power of two; smaller databases are padded up by the caller.
inline GeneratorSet walsh_generators(std::size_t n) {
  if (n < 2 || !std::has_single_bit(n))
    throw std::domain_error("walsh_generators: n must be a power of two (pad the database up to one)");
  const std::size_t m = static_cast<std::size_t>(std::countr_zero(n));
  std::vector<DigitString> generators;
  generators.reserve(m);
  for (std::size_t k = 1; k <= m; ++k) {
    std::vector<std::uint32_t> digits(n);
    for (std::size_t j = 0; j < n; ++j) digits[j] = static_cast<std::uint32_t>((j >> (k - 1)) & 1);
    generators.emplace_back(std::move(digits), 2);
  }
  return GeneratorSet(std::move(generators));
}

/// Digit-wise sum_k s_k g_k (mod A): the group member selected by index string s.
inline DigitString expand_member(std::span<const DigitString> generators, const DigitString& index) {
  if (generators.empty()) throw std::invalid_argument("expand_member: empty generator list");
  const std::size_t n = generators[0].size();
  const std::uint32_t a = generators[0].modulus();
  for (const auto& g : generators)
    if (g.size() != n || g.modulus() != a)
      throw std::invalid_argument("expand_member: generators must share length and modulus");
  if (index.size() != generators.size() || index.modulus() != a)
    throw std::invalid_argument("expand_member: index string incompatible with generators");
  std::vector<std::uint64_t> acc(n, 0);
  for (std::size_t k = 0; k < generators.size(); ++k) {
    const std::uint64_t s = index[k];
    if (s == 0) continue;
    for (std::size_t j = 0; j < n; ++j) acc[j] += s * generators[k][j];
  }
  std::vector<std::uint32_t> digits(n);
  for (std::size_t j = 0; j < n; ++j) digits[j] = static_cast<std::uint32_t>(acc[j] % a);
  return DigitString(std::move(digits), a);
}

inline DigitString expand_member(const GeneratorSet& generators, const DigitString& index) {
  return expand_member(std::span<const DigitString>(generators.generators()), index);
}

/// Uniformly sampled independent generators; whole sets are rejection-sampled,
/// capped at 1000 attempts.
inline GeneratorSet random_generators(std::size_t n, std::size_t m, std::uint32_t modulus,
                                      std::uint64_t seed) {
  if (!is_prime(modulus)) throw std::domain_error("random_generators: modulus must be prime");
  if (m == 0 || m > n) throw std::invalid_argument("random_generators: infeasible, need 1 <= m <= n");
  std::mt19937_64 gen(seed);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<DigitString> rows;
    rows.reserve(m);
    for (std::size_t r = 0; r < m; ++r) {
      std::vector<std::uint32_t> digits(n);
      for (auto& d : digits) d = rng::uniform_digit(gen, modulus);
      rows.emplace_back(std::move(digits), modulus);
    }
    if (is_linearly_independent(rows, modulus)) return GeneratorSet(std::move(rows));
  }
  throw search_failure("random_generators: no independent set after 1000 attempts");
}

}  // namespace onequery
