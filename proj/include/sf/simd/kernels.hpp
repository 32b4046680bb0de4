#pragma once

#include <cstddef>
#include <span>

// Dense double-precision inner loops used by the convolution and dense
// layers. Each kernel has a scalar reference and, on x86-64, an AVX2/FMA
// variant. The active variant is chosen once at startup from CPUID and can be
// overridden for equivalence testing.

namespace sf::simd {

enum class Isa { Scalar, Avx2 };

const char* isa_name(Isa isa) noexcept;

/// True when the binary carries AVX2 kernels and the CPU can run them.
bool avx2_available() noexcept;

Isa active_isa() noexcept;

/// Selects the kernel family. Requesting Avx2 on a machine without it falls
/// back to Scalar. Returns the previously active ISA.
Isa set_isa(Isa isa) noexcept;

/// RAII override, restores the previous ISA on scope exit.
class ScopedIsa {
 public:
  explicit ScopedIsa(Isa isa) noexcept : previous_(set_isa(isa)) {}
  ~ScopedIsa() { set_isa(previous_); }
  ScopedIsa(const ScopedIsa&) = delete;
  ScopedIsa& operator=(const ScopedIsa&) = delete;

 private:
  Isa previous_;
};

double dot(const double* a, const double* b, std::size_t n) noexcept;

/// y += alpha * x
void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept;

inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
  return dot(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) noexcept {
  axpy(alpha, x.data(), y.data(), x.size() < y.size() ? x.size() : y.size());
}

namespace scalar {
double dot(const double* a, const double* b, std::size_t n) noexcept;
void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept;
}  // namespace scalar

namespace avx2 {
double dot(const double* a, const double* b, std::size_t n) noexcept;
void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept;
}  // namespace avx2

}  // namespace sf::simd
