#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "onequery/errors.hpp"
#include "onequery/rng.hpp"

namespace onequery {

using Complex = std::complex<double>;

/// omega_base^exponent with exact values on the axes, so A=2 transforms are
/// bit-identical to real Hadamards.
inline Complex root_of_unity(std::uint64_t base, std::uint64_t exponent) {
  if (base == 0) throw std::domain_error("root_of_unity: base must be positive");
  const std::uint64_t e = exponent % base;
  if (e == 0) return {1.0, 0.0};
  if (2 * e == base) return {-1.0, 0.0};
  if (4 * e == base) return {0.0, 1.0};
  if (4 * e == 3 * base) return {0.0, -1.0};
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(e) / static_cast<double>(base);
  return {std::cos(angle), std::sin(angle)};
}

/// Named registers in mixed-radix order; the first-listed register is the most
/// significant part of a basis index.
class RegisterLayout {
 public:
  struct Register {
    std::string name;
    std::size_t dimension;
    friend bool operator==(const Register&, const Register&) = default;
  };

  explicit RegisterLayout(std::vector<Register> registers) : registers_(std::move(registers)) {
    if (registers_.empty()) throw std::invalid_argument("RegisterLayout: at least one register");
    for (const auto& reg : registers_) {
      if (reg.dimension < 2) throw std::invalid_argument("RegisterLayout: dimensions must be >= 2");
      if (reg.name.empty()) throw std::invalid_argument("RegisterLayout: register names must be nonempty");
      if (total_ > (std::size_t(1) << 40) / reg.dimension)
        throw resource_error("RegisterLayout: total dimension too large");
      total_ *= reg.dimension;
    }
    for (std::size_t i = 0; i < registers_.size(); ++i)
      for (std::size_t j = i + 1; j < registers_.size(); ++j)
        if (registers_[i].name == registers_[j].name)
          throw std::invalid_argument("RegisterLayout: duplicate register name");
  }

  const std::vector<Register>& registers() const { return registers_; }
  std::size_t total_dimension() const { return total_; }

  std::size_t position(std::string_view name) const {
    for (std::size_t i = 0; i < registers_.size(); ++i)
      if (registers_[i].name == name) return i;
    throw std::invalid_argument("RegisterLayout: unknown register '" + std::string(name) + "'");
  }

  std::size_t dimension(std::string_view name) const { return registers_[position(name)].dimension; }

  std::size_t stride(std::size_t position_index) const {
    std::size_t s = 1;
    for (std::size_t i = registers_.size(); i-- > position_index + 1;) s *= registers_[i].dimension;
    return s;
  }

  friend bool operator==(const RegisterLayout&, const RegisterLayout&) = default;

 private:
  std::vector<Register> registers_;
  std::size_t total_ = 1;
};

/// Dense complex amplitude vector over a register layout. Immutable value;
/// transforms hand back new states.
class QuantumState {
 public:
  QuantumState(RegisterLayout layout, std::vector<Complex> amplitudes)
      : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != layout_.total_dimension())
      throw std::invalid_argument("QuantumState: amplitude count does not match layout");
    if (norm_error(amplitudes_) > 1e-10)
      throw std::invalid_argument("QuantumState: state is not normalized");
  }

  static QuantumState basis(RegisterLayout layout, std::span<const std::size_t> values) {
    if (values.size() != layout.registers().size())
      throw std::invalid_argument("QuantumState::basis: one value per register required");
    std::size_t index = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i] >= layout.registers()[i].dimension)
        throw std::invalid_argument("QuantumState::basis: value out of range");
      index += values[i] * layout.stride(i);
    }
    std::vector<Complex> amplitudes(layout.total_dimension(), Complex(0.0, 0.0));
    amplitudes[index] = Complex(1.0, 0.0);
    return from_normalized(std::move(layout), std::move(amplitudes));
  }

  static QuantumState basis(RegisterLayout layout, std::initializer_list<std::size_t> values) {
    return basis(std::move(layout), std::span<const std::size_t>(values.begin(), values.size()));
  }

  // For transforms that provably preserve the norm; skips the O(dim) scan.
  static QuantumState from_normalized(RegisterLayout layout, std::vector<Complex> amplitudes) {
    if (amplitudes.size() != layout.total_dimension())
      throw std::invalid_argument("QuantumState: amplitude count does not match layout");
    return QuantumState(unchecked_t{}, std::move(layout), std::move(amplitudes));
  }

  const RegisterLayout& layout() const { return layout_; }
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  Complex amplitude(std::size_t index) const { return amplitudes_.at(index); }
  std::vector<Complex> take() && { return std::move(amplitudes_); }

  static double norm_error(std::span<const Complex> amplitudes) {
    long double sum = 0.0L;
    for (const Complex& a : amplitudes)
      sum += static_cast<long double>(a.real()) * a.real() +
             static_cast<long double>(a.imag()) * a.imag();
    return static_cast<double>(std::abs(sum - 1.0L));
  }

 private:
  struct unchecked_t {};
  QuantumState(unchecked_t, RegisterLayout layout, std::vector<Complex> amplitudes)
      : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {}

  RegisterLayout layout_;
  std::vector<Complex> amplitudes_;
};

inline QuantumState tensor_product(const QuantumState& left, const QuantumState& right) {
  std::vector<RegisterLayout::Register> registers = left.layout().registers();
  for (const auto& reg : right.layout().registers()) registers.push_back(reg);
  RegisterLayout layout(std::move(registers));
  const auto la = left.amplitudes();
  const auto ra = right.amplitudes();
  std::vector<Complex> amplitudes;
  amplitudes.reserve(la.size() * ra.size());
  for (const Complex& x : la)
    for (const Complex& y : ra) amplitudes.push_back(x * y);
  return QuantumState::from_normalized(std::move(layout), std::move(amplitudes));
}

/// (1/sqrt(D)) sum_b omega^b |b>: eigenstate of modular increment-by-a with
/// eigenvalue omega^{-a}, which is what turns query answers into phases.
inline QuantumState phase_eigenstate(std::size_t dimension, Complex omega,
                                     std::string register_name = "b") {
  if (dimension < 2) throw std::domain_error("phase_eigenstate: dimension must be >= 2");
  if (std::abs(std::abs(omega) - 1.0) > 1e-9)
    throw std::domain_error("phase_eigenstate: omega must lie on the unit circle");
  std::vector<Complex> amplitudes(dimension);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dimension));
  Complex power(1.0, 0.0);
  for (std::size_t b = 0; b < dimension; ++b) {
    amplitudes[b] = power * scale;
    power *= omega;
  }
  if (std::abs(power - Complex(1.0, 0.0)) > 1e-9)
    throw std::domain_error("phase_eigenstate: omega is not a root of unity for this dimension");
  return QuantumState::from_normalized(RegisterLayout({{std::move(register_name), dimension}}),
                                       std::move(amplitudes));
}

namespace detail {

inline void fourier_register_in_place(std::vector<Complex>& amplitudes, std::size_t stride,
                                      std::size_t dimension, std::uint32_t base) {
  std::size_t digit_count = 0;
  std::size_t power = 1;
  while (power < dimension) {
    power *= base;
    ++digit_count;
  }
  if (power != dimension)
    throw std::invalid_argument("fourier_all: register dimension is not a power of the base");

  const double scale = 1.0 / std::sqrt(static_cast<double>(base));
  const std::size_t total = amplitudes.size();
  std::size_t digit_stride = stride;

  if (base == 2) {
    for (std::size_t t = 0; t < digit_count; ++t) {
      const std::size_t block = digit_stride * 2;
      for (std::size_t start = 0; start < total; start += block)
        for (std::size_t off = 0; off < digit_stride; ++off) {
          Complex& lo = amplitudes[start + off];
          Complex& hi = amplitudes[start + off + digit_stride];
          const Complex a = lo;
          const Complex b = hi;
          lo = (a + b) * scale;
          hi = (a - b) * scale;
        }
      digit_stride *= 2;
    }
    return;
  }

  std::vector<Complex> kernel(base);
  for (std::uint32_t j = 0; j < base; ++j) kernel[j] = root_of_unity(base, j);
  std::vector<Complex> scratch(base);
  for (std::size_t t = 0; t < digit_count; ++t) {
    const std::size_t block = digit_stride * base;
    for (std::size_t start = 0; start < total; start += block)
      for (std::size_t off = 0; off < digit_stride; ++off) {
        const std::size_t anchor = start + off;
        for (std::uint32_t v = 0; v < base; ++v) scratch[v] = amplitudes[anchor + v * digit_stride];
        for (std::uint32_t u = 0; u < base; ++u) {
          Complex acc(0.0, 0.0);
          for (std::uint32_t v = 0; v < base; ++v)
            acc += kernel[static_cast<std::size_t>(u) * v % base] * scratch[v];
          amplitudes[anchor + u * digit_stride] = acc * scale;
        }
      }
    digit_stride *= base;
  }
}

}  // namespace detail

/// |s> -> (1/sqrt(A^m)) sum_z omega_A^{s.z} |z> on one register of dimension A^m,
/// applied digit by digit. Coincides with hadamard_all for A=2.
inline QuantumState fourier_all(QuantumState state, std::string_view register_name, std::uint32_t base) {
  if (base < 2) throw std::domain_error("fourier_all: base must be >= 2");
  RegisterLayout layout = state.layout();
  const std::size_t pos = layout.position(register_name);
  const std::size_t dimension = layout.registers()[pos].dimension;
  const std::size_t stride = layout.stride(pos);
  std::vector<Complex> amplitudes = std::move(state).take();
  detail::fourier_register_in_place(amplitudes, stride, dimension, base);
  return QuantumState::from_normalized(std::move(layout), std::move(amplitudes));
}

/// Parallel one-bit Hadamards on a 2^p register: |x> -> 2^{-p/2} sum_z (-1)^{x.z} |z>.
inline QuantumState hadamard_all(QuantumState state, std::string_view register_name) {
  if (!std::has_single_bit(state.layout().dimension(register_name)))
    throw std::invalid_argument("hadamard_all: register dimension must be a power of two");
  return fourier_all(std::move(state), register_name, 2);
}

struct Measurement {
  std::size_t outcome;
  double probability;
};

namespace detail {

inline std::vector<double> register_marginal(const QuantumState& state, std::string_view register_name) {
  const auto& layout = state.layout();
  const std::size_t pos = layout.position(register_name);
  const std::size_t dimension = layout.registers()[pos].dimension;
  const std::size_t stride = layout.stride(pos);
  const auto amplitudes = state.amplitudes();
  std::vector<long double> acc(dimension, 0.0L);
  const std::size_t block = stride * dimension;
  for (std::size_t start = 0; start < amplitudes.size(); start += block)
    for (std::size_t v = 0; v < dimension; ++v)
      for (std::size_t off = 0; off < stride; ++off) {
        const Complex& a = amplitudes[start + v * stride + off];
        acc[v] += static_cast<long double>(a.real()) * a.real() +
                  static_cast<long double>(a.imag()) * a.imag();
      }
  std::vector<double> probabilities(dimension);
  for (std::size_t v = 0; v < dimension; ++v) probabilities[v] = static_cast<double>(acc[v]);
  return probabilities;
}

}  // namespace detail

/// Most probable outcome on one register; ties resolve to the smallest value.
inline Measurement measure_register(const QuantumState& state, std::string_view register_name) {
  const std::vector<double> probabilities = detail::register_marginal(state, register_name);
  std::size_t best = 0;
  for (std::size_t v = 1; v < probabilities.size(); ++v)
    if (probabilities[v] > probabilities[best]) best = v;
  return {best, probabilities[best]};
}

/// Born-rule draw with an explicit seed.
inline Measurement sample_register(const QuantumState& state, std::string_view register_name,
                                   std::uint64_t seed) {
  const std::vector<double> probabilities = detail::register_marginal(state, register_name);
  std::mt19937_64 gen(seed);
  const double r = rng::canonical(gen);
  double cumulative = 0.0;
  for (std::size_t v = 0; v < probabilities.size(); ++v) {
    cumulative += probabilities[v];
    if (r < cumulative) return {v, probabilities[v]};
  }
  return {probabilities.size() - 1, probabilities.back()};
}

inline Complex inner_product(const QuantumState& left, const QuantumState& right) {
  if (!(left.layout() == right.layout())) throw std::invalid_argument("inner_product: layouts differ");
  const auto la = left.amplitudes();
  const auto ra = right.amplitudes();
  long double re = 0.0L, im = 0.0L;
  for (std::size_t i = 0; i < la.size(); ++i) {
    const Complex& a = la[i];
    const Complex& b = ra[i];
    re += static_cast<long double>(a.real()) * b.real() + static_cast<long double>(a.imag()) * b.imag();
    im += static_cast<long double>(a.real()) * b.imag() - static_cast<long double>(a.imag()) * b.real();
  }
  return {static_cast<double>(re), static_cast<double>(im)};
}

/// <phi| rho |phi> where rho is the reduced state of one register and |phi| a
/// pure single-register reference of the same dimension.
inline double fidelity_with(const QuantumState& state, std::string_view register_name,
                            const QuantumState& pure_reference) {
  const auto& layout = state.layout();
  const std::size_t pos = layout.position(register_name);
  const std::size_t dimension = layout.registers()[pos].dimension;
  if (pure_reference.layout().registers().size() != 1 ||
      pure_reference.layout().total_dimension() != dimension)
    throw std::invalid_argument("fidelity_with: reference must be a single register of equal dimension");
  const std::size_t stride = layout.stride(pos);
  const auto amplitudes = state.amplitudes();
  const auto phi = pure_reference.amplitudes();
  long double fidelity = 0.0L;
  const std::size_t block = stride * dimension;
  for (std::size_t start = 0; start < amplitudes.size(); start += block)
    for (std::size_t off = 0; off < stride; ++off) {
      long double re = 0.0L, im = 0.0L;
      for (std::size_t v = 0; v < dimension; ++v) {
        const Complex& a = amplitudes[start + v * stride + off];
        const Complex& p = phi[v];
        re += static_cast<long double>(p.real()) * a.real() + static_cast<long double>(p.imag()) * a.imag();
        im += static_cast<long double>(p.real()) * a.imag() - static_cast<long double>(p.imag()) * a.real();
      }
      fidelity += re * re + im * im;
    }
  return static_cast<double>(fidelity);
}

/// -Tr(rho log2 rho) in bits for rho = sum_i p_i |psi_i><psi_i|. Uses the Gram
/// matrix of the ensemble when it is smaller than the Hilbert space, since both
/// share the nonzero spectrum.
inline double von_neumann_entropy(const std::vector<std::pair<double, QuantumState>>& ensemble) {
  if (ensemble.empty()) throw std::domain_error("von_neumann_entropy: empty ensemble");
  const RegisterLayout& layout = ensemble.front().second.layout();
  long double total = 0.0L;
  for (const auto& [p, state] : ensemble) {
    if (p < -1e-12) throw std::domain_error("von_neumann_entropy: negative probability");
    if (!(state.layout() == layout)) throw std::invalid_argument("von_neumann_entropy: mixed layouts");
    total += p;
  }
  if (std::abs(static_cast<double>(total - 1.0L)) > 1e-10)
    throw std::domain_error("von_neumann_entropy: probabilities must sum to 1");
  const std::size_t dimension = layout.total_dimension();
  if (dimension > 4096)
    throw resource_error("von_neumann_entropy: total dimension above the dense cap of 4096");

  const std::size_t k = ensemble.size();
  Eigen::MatrixXcd herm;
  if (k <= dimension) {
    herm.resize(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i; j < k; ++j) {
        const Complex overlap = inner_product(ensemble[i].second, ensemble[j].second);
        const double w =
            std::sqrt(std::max(0.0, ensemble[i].first) * std::max(0.0, ensemble[j].first));
        herm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = w * overlap;
        herm(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) =
            std::conj(w * overlap);
      }
  } else {
    herm = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dimension),
                                  static_cast<Eigen::Index>(dimension));
    for (const auto& [p, state] : ensemble) {
      Eigen::Map<const Eigen::VectorXcd> v(state.amplitudes().data(),
                                           static_cast<Eigen::Index>(dimension));
      herm.noalias() += p * (v * v.adjoint());
    }
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
  double entropy = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double lambda = solver.eigenvalues()[i];
    if (lambda > 1e-12) entropy -= lambda * std::log2(lambda);
  }
  return entropy;
}

}  // namespace onequery
