#include "neurank/uncertainty.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "neurank/error.h"
#include "neurank/kernels.h"

namespace neurank {

UncertaintyState::UncertaintyState(std::size_t dim, std::size_t width, double alpha,
                                   double lambda_reg, double epsilon_offset,
                                   UncertaintyMode mode)
    : m_(width),
      alpha_(alpha),
      lambda_(lambda_reg),
      epsilon_offset_(epsilon_offset),
      mode_(mode),
      a_diag_(dim, lambda_reg) {
  if (dim == 0 || width == 0) throw ValidationError("uncertainty state needs p, m >= 1");
  if (!(alpha >= 0.0)) throw ValidationError("alpha must be >= 0");
  if (!(lambda_reg > 0.0)) throw ValidationError("lambda must be > 0");
  if (!(epsilon_offset >= 0.0)) throw ValidationError("epsilon offset must be >= 0");
  inv_m_a_diag_.assign(dim, 1.0 / (static_cast<double>(width) * lambda_reg));
  if (mode == UncertaintyMode::kDense) {
    if (dim > kMaxDenseDim) {
      throw ValidationError("dense uncertainty is limited to p <= " +
                            std::to_string(kMaxDenseDim) + " (got " +
                            std::to_string(dim) + ")");
    }
    a_inv_.assign(dim * dim, 0.0);
    for (std::size_t k = 0; k < dim; ++k) a_inv_[k * dim + k] = 1.0 / lambda_reg;
    scratch_.resize(2 * dim);
  }
}

void UncertaintyState::check_dim(std::size_t n) const {
  if (n != a_diag_.size()) {
    throw ValidationError("tangent vector length " + std::to_string(n) +
                          " does not match p = " + std::to_string(a_diag_.size()));
  }
}

double UncertaintyState::confidence_width(std::span<const double> g_i,
                                          std::span<const double> g_j) const {
  check_dim(g_i.size());
  check_dim(g_j.size());
  double quad = 0.0;
  if (mode_ == UncertaintyMode::kDiagonal) {
    quad = kernels::weighted_sq_dist(g_i, g_j, inv_m_a_diag_);
  } else {
    const std::size_t p = a_diag_.size();
    const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(m_));
    auto u = std::span<double>(scratch_).first(p);
    for (std::size_t k = 0; k < p; ++k) u[k] = (g_i[k] - g_j[k]) * inv_sqrt_m;
    for (std::size_t r = 0; r < p; ++r) {
      quad += u[r] * kernels::dot(std::span<const double>(a_inv_).subspan(r * p, p), u);
    }
  }
  return std::max(0.0, alpha_ * std::sqrt(std::max(0.0, quad)) - epsilon_offset_);
}

void UncertaintyState::add_pair(std::span<const double> g_i,
                                std::span<const double> g_j) {
  check_dim(g_i.size());
  check_dim(g_j.size());
  const std::size_t p = a_diag_.size();
  const double inv_m = 1.0 / static_cast<double>(m_);
  kernels::add_scaled_sq_diff(inv_m, g_i, g_j, a_diag_);
  for (std::size_t k = 0; k < p; ++k) {
    inv_m_a_diag_[k] = 1.0 / (static_cast<double>(m_) * a_diag_[k]);
  }
  if (mode_ != UncertaintyMode::kDense) return;

  // Sherman-Morrison: (A + u u^T)^{-1} = A^{-1} - (A^{-1}u)(A^{-1}u)^T / (1 + u^T A^{-1} u).
  const double inv_sqrt_m = std::sqrt(inv_m);
  auto u = std::span<double>(scratch_).first(p);
  auto v = std::span<double>(scratch_).subspan(p, p);
  for (std::size_t k = 0; k < p; ++k) u[k] = (g_i[k] - g_j[k]) * inv_sqrt_m;
  for (std::size_t r = 0; r < p; ++r) {
    v[r] = kernels::dot(std::span<const double>(a_inv_).subspan(r * p, p), u);
  }
  const double denom = 1.0 + kernels::dot(u, v);
  for (std::size_t r = 0; r < p; ++r) {
    kernels::axpy(-v[r] / denom, v, std::span<double>(a_inv_).subspan(r * p, p));
  }
}

void UncertaintyState::add_difference(std::span<const double> g_ij) {
  const std::vector<double> zero(g_ij.size(), 0.0);
  add_pair(g_ij, zero);
}

double confidence_width(std::span<const double> g_i, std::span<const double> g_j,
                        const UncertaintyState& state) {
  return state.confidence_width(g_i, g_j);
}

UncertaintyState update_state(UncertaintyState state,
                              std::span<const TangentVector> pair_diffs) {
  for (const auto& g : pair_diffs) state.add_difference(g);
  return state;
}

}  // namespace neurank
