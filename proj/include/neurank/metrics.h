#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace neurank {

// A ranking lists document indices best-first: ranking[r] is the document
// served at position r (0-based).

/// Exponential gain, log2 discount: sum_{r<k} (2^label - 1) / log2(r + 2).
double dcg_at_k(std::span<const std::size_t> ranking, std::span<const int> labels,
                std::size_t k);

/// DCG of the label-sorted ideal list.
double ideal_dcg_at_k(std::span<const int> labels, std::size_t k);

/// DCG / IDCG; 0 when every label is 0.
double ndcg_at_k(std::span<const std::size_t> ranking, std::span<const int> labels,
                 std::size_t k);

/// sum_t per_round[t] * gamma^t. Requires gamma in (0, 1].
double cumulative_ndcg(std::span<const double> per_round, double gamma);

/// Pairs with label_i > label_j served with j ahead of i. Equal labels never
/// count.
std::uint64_t kendall_regret(std::span<const std::size_t> ranking,
                             std::span<const int> labels);

/// Number of pairs with distinct labels, the regret of the worst ordering.
std::uint64_t strict_label_pairs(std::span<const int> labels);

/// Validates that `ranking` is a permutation of 0..n-1.
bool is_permutation_of(std::span<const std::size_t> ranking, std::size_t n);

}  // namespace neurank
