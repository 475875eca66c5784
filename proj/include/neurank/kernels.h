#pragma once

// Dense inner loops shared by the network, the trainer and the uncertainty
// state. Each kernel has a scalar reference implementation and, on x86-64,
// an AVX2+FMA variant selected once at runtime from CPUID. The environment
// variable NEURANK_KERNELS=scalar|avx2 overrides the choice.

#include <cstddef>
#include <span>
#include <string_view>

namespace neurank::kernels {

enum class Backend { kScalar, kAvx2 };

struct KernelTable {
  Backend backend;
  // sum_k a[k] * b[k]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y[k] += alpha * x[k]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // sum_k (a[k] - b[k])^2
  double (*sq_dist)(const double* a, const double* b, std::size_t n);
  // sum_k w[k] * (a[k] - b[k])^2
  double (*weighted_sq_dist)(const double* a, const double* b, const double* w,
                             std::size_t n);
  // acc[k] += s * (a[k] - b[k])^2
  void (*add_scaled_sq_diff)(double s, const double* a, const double* b,
                             double* acc, std::size_t n);
};

const KernelTable& scalar_table();
// Null when the variant is not compiled in or the CPU lacks the features.
const KernelTable* avx2_table();

bool cpu_supports(Backend backend);

// The table used by the library. Resolved on first use.
const KernelTable& active();

// Forces a backend for subsequent calls to active(). Throws
// neurank::ValidationError if the backend is unavailable on this machine.
// Not thread-safe against concurrent kernel use.
void set_backend(Backend backend);

std::string_view backend_name(Backend backend);

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}

inline double sq_dist(std::span<const double> a, std::span<const double> b) {
  return active().sq_dist(a.data(), b.data(), a.size());
}

inline double weighted_sq_dist(std::span<const double> a,
                               std::span<const double> b,
                               std::span<const double> w) {
  return active().weighted_sq_dist(a.data(), b.data(), w.data(), a.size());
}

inline void add_scaled_sq_diff(double s, std::span<const double> a,
                               std::span<const double> b,
                               std::span<double> acc) {
  active().add_scaled_sq_diff(s, a.data(), b.data(), acc.data(), a.size());
}

}  // namespace neurank::kernels
