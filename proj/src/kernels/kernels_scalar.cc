#include "kernels/kernels_internal.h"

namespace neurank::kernels::detail {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += a[k] * b[k];
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) y[k] += alpha * x[k];
}

double sq_dist_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

double weighted_sq_dist_scalar(const double* a, const double* b,
                               const double* w, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double d = a[k] - b[k];
    s += w[k] * d * d;
  }
  return s;
}

void add_scaled_sq_diff_scalar(double s, const double* a, const double* b,
                               double* acc, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    const double d = a[k] - b[k];
    acc[k] += s * d * d;
  }
}

}  // namespace

const KernelTable kScalarTable{
    Backend::kScalar,      dot_scalar,
    axpy_scalar,           sq_dist_scalar,
    weighted_sq_dist_scalar, add_scaled_sq_diff_scalar,
};

}  // namespace neurank::kernels::detail
