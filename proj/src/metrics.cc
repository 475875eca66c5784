#include "neurank/metrics.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "neurank/dataset.h"
#include "neurank/error.h"

namespace neurank {
namespace {

double gain(int label) { return std::exp2(static_cast<double>(label)) - 1.0; }

double discount(std::size_t position) {
  return 1.0 / std::log2(static_cast<double>(position) + 2.0);
}

}  // namespace

double dcg_at_k(std::span<const std::size_t> ranking, std::span<const int> labels,
                std::size_t k) {
  const std::size_t n = std::min(k, ranking.size());
  double dcg = 0.0;
  for (std::size_t r = 0; r < n; ++r) dcg += gain(labels[ranking[r]]) * discount(r);
  return dcg;
}

double ideal_dcg_at_k(std::span<const int> labels, std::size_t k) {
  std::vector<int> sorted(labels.begin(), labels.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const std::size_t n = std::min(k, sorted.size());
  double dcg = 0.0;
  for (std::size_t r = 0; r < n; ++r) dcg += gain(sorted[r]) * discount(r);
  return dcg;
}

double ndcg_at_k(std::span<const std::size_t> ranking, std::span<const int> labels,
                 std::size_t k) {
  if (k == 0) throw ValidationError("NDCG cutoff must be >= 1");
  const double ideal = ideal_dcg_at_k(labels, k);
  if (ideal <= 0.0) return 0.0;
  return dcg_at_k(ranking, labels, k) / ideal;
}

double cumulative_ndcg(std::span<const double> per_round, double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw ValidationError("gamma must lie in (0, 1]");
  }
  double total = 0.0;
  double weight = 1.0;
  for (double v : per_round) {
    total += v * weight;
    weight *= gamma;
  }
  return total;
}

std::uint64_t kendall_regret(std::span<const std::size_t> ranking,
                             std::span<const int> labels) {
  // Walk the list top-down; every earlier document with a strictly lower
  // label is a mis-ordered pair.
  if (!is_permutation_of(ranking, labels.size())) {
    throw ValidationError("kendall_regret: ranking is not a permutation of the documents");
  }
  std::array<std::uint64_t, kNumGrades> seen{};
  std::uint64_t regret = 0;
  for (std::size_t doc : ranking) {
    const int label = labels[doc];
    if (label < 0 || label > kMaxRelevance) throw ValidationError("kendall_regret: label out of range");
    for (int g = 0; g < label; ++g) regret += seen[g];
    ++seen[label];
  }
  return regret;
}

std::uint64_t strict_label_pairs(std::span<const int> labels) {
  std::array<std::uint64_t, kNumGrades> counts{};
  for (int l : labels) {
    if (l < 0 || l > kMaxRelevance) throw ValidationError("strict_label_pairs: label out of range");
    ++counts[l];
  }
  std::uint64_t strict = 0, below = 0;
  for (auto c : counts) {
    strict += c * below;
    below += c;
  }
  return strict;
}

bool is_permutation_of(std::span<const std::size_t> ranking, std::size_t n) {
  if (ranking.size() != n) return false;
  std::vector<bool> seen(n, false);
  for (std::size_t d : ranking) {
    if (d >= n || seen[d]) return false;
    seen[d] = true;
  }
  return true;
}

}  // namespace neurank
