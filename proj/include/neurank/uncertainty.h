#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "neurank/network.h"

namespace neurank {

enum class UncertaintyMode {
  kDiagonal,  // only diag(A_t) is kept
  kDense,     // full A_t^{-1} via Sherman-Morrison, for small p
};

inline constexpr std::size_t kMaxDenseDim = 200;

/// Regularized design matrix over tangent-feature differences,
///   A_t = lambda I + sum_pairs g_ij g_ij^T / m,
/// and the confidence width it induces,
///   CB_ij = alpha |g_ij / sqrt(m)|_{A_t^{-1}} - epsilon_offset, clamped at 0.
class UncertaintyState {
 public:
  UncertaintyState(std::size_t dim, std::size_t width, double alpha,
                   double lambda_reg, double epsilon_offset = 0.0,
                   UncertaintyMode mode = UncertaintyMode::kDiagonal);

  double confidence_width(std::span<const double> g_i,
                          std::span<const double> g_j) const;

  /// Absorbs one pair difference g_ij = g_i - g_j.
  void add_pair(std::span<const double> g_i, std::span<const double> g_j);
  void add_difference(std::span<const double> g_ij);

  std::size_t dim() const noexcept { return a_diag_.size(); }
  std::size_t width() const noexcept { return m_; }
  double alpha() const noexcept { return alpha_; }
  double lambda_reg() const noexcept { return lambda_; }
  double epsilon_offset() const noexcept { return epsilon_offset_; }
  UncertaintyMode mode() const noexcept { return mode_; }

  /// diag(A_t). Entries start at lambda and never decrease.
  std::span<const double> diagonal() const noexcept { return a_diag_; }
  /// Row-major A_t^{-1}; empty in diagonal mode.
  std::span<const double> dense_inverse() const noexcept { return a_inv_; }

 private:
  void check_dim(std::size_t n) const;

  std::size_t m_;
  double alpha_;
  double lambda_;
  double epsilon_offset_;
  UncertaintyMode mode_;
  std::vector<double> a_diag_;
  std::vector<double> inv_m_a_diag_;  // 1 / (m * A_kk)
  std::vector<double> a_inv_;
  mutable std::vector<double> scratch_;
};

double confidence_width(std::span<const double> g_i, std::span<const double> g_j,
                        const UncertaintyState& state);

/// Returns a copy of `state` with every difference in `pair_diffs` absorbed.
UncertaintyState update_state(UncertaintyState state,
                              std::span<const TangentVector> pair_diffs);

}  // namespace neurank
