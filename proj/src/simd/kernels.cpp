#include "sf/simd/kernels.hpp"

#include <atomic>

namespace sf::simd {

namespace {

using DotFn = double (*)(const double*, const double*, std::size_t) noexcept;
using AxpyFn = void (*)(double, const double*, double*, std::size_t) noexcept;

struct Table {
  Isa isa;
  DotFn dot;
  AxpyFn axpy;
};

constexpr Table kScalar{Isa::Scalar, &scalar::dot, &scalar::axpy};
#if defined(SF_HAVE_AVX2)
constexpr Table kAvx2{Isa::Avx2, &avx2::dot, &avx2::axpy};
#endif

bool detect_avx2() noexcept {
#if defined(SF_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Table* table_for(Isa isa) noexcept {
#if defined(SF_HAVE_AVX2)
  if (isa == Isa::Avx2 && avx2_available()) return &kAvx2;
#else
  (void)isa;
#endif
  return &kScalar;
}

std::atomic<const Table*>& current() noexcept {
  static std::atomic<const Table*> t{table_for(detect_avx2() ? Isa::Avx2 : Isa::Scalar)};
  return t;
}

}  // namespace

const char* isa_name(Isa isa) noexcept { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool avx2_available() noexcept {
  static const bool ok = detect_avx2();
  return ok;
}

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed)->isa; }

Isa set_isa(Isa isa) noexcept {
  return current().exchange(table_for(isa), std::memory_order_relaxed)->isa;
}

double dot(const double* a, const double* b, std::size_t n) noexcept {
  return current().load(std::memory_order_relaxed)->dot(a, b, n);
}

void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept {
  current().load(std::memory_order_relaxed)->axpy(alpha, x, y, n);
}

#if !defined(SF_HAVE_AVX2)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n) noexcept { return scalar::dot(a, b, n); }
void axpy(double alpha, const double* x, double* y, std::size_t n) noexcept {
  scalar::axpy(alpha, x, y, n);
}
}  // namespace avx2
#endif

}  // namespace sf::simd
