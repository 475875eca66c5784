#include "neurank/metrics.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "neurank/error.h"
#include "test_oracles.h"

namespace neurank {
namespace {

using Ranking = std::vector<std::size_t>;

TEST(Ndcg, IdealOrderIsOne) {
  const std::vector<int> labels{4, 3, 3, 1, 0};
  EXPECT_NEAR(ndcg_at_k(Ranking{0, 1, 2, 3, 4}, labels, 10), 1.0, 1e-15);
}

TEST(Ndcg, AllZeroLabelsIsZero) {
  const std::vector<int> labels{0, 0, 0};
  EXPECT_EQ(ndcg_at_k(Ranking{2, 0, 1}, labels, 3), 0.0);
}

TEST(Ndcg, TwoDocExample) {
  const std::vector<int> labels{0, 3};
  EXPECT_NEAR(dcg_at_k(Ranking{0, 1}, labels, 2), 7.0 / std::log2(3.0), 1e-14);
  EXPECT_NEAR(ideal_dcg_at_k(labels, 2), 7.0, 1e-14);
  EXPECT_NEAR(ndcg_at_k(Ranking{0, 1}, labels, 2), 1.0 / std::log2(3.0), 1e-14);
}

TEST(Ndcg, ZeroCutoffRejected) {
  const std::vector<int> labels{1};
  EXPECT_THROW(ndcg_at_k(Ranking{0}, labels, 0), ValidationError);
}

TEST(Ndcg, InvariantWithinEqualLabelGroups) {
  const std::vector<int> labels{2, 1, 2, 0, 1};
  EXPECT_NEAR(ndcg_at_k(Ranking{0, 2, 1, 4, 3}, labels, 4), ndcg_at_k(Ranking{2, 0, 4, 1, 3}, labels, 4),
              1e-15);
}

TEST(Cumulative, Examples) {
  const std::vector<double> v{1.0, 0.5};
  EXPECT_NEAR(cumulative_ndcg(v, 0.5), 1.25, 1e-15);
  EXPECT_NEAR(cumulative_ndcg(v, 1.0), 1.5, 1e-15);
  EXPECT_EQ(cumulative_ndcg(std::vector<double>{0.3}, 0.9), 0.3);
  EXPECT_THROW(cumulative_ndcg(v, 0.0), ValidationError);
  EXPECT_THROW(cumulative_ndcg(v, 1.1), ValidationError);
}

TEST(Kendall, Examples) {
  const std::vector<int> distinct{3, 2, 1, 0};
  EXPECT_EQ(kendall_regret(Ranking{0, 1, 2, 3}, distinct), 0u);
  EXPECT_EQ(kendall_regret(Ranking{3, 2, 1, 0}, distinct), 6u);
  const std::vector<int> tied{2, 2, 1};
  EXPECT_EQ(kendall_regret(Ranking{2, 0, 1}, tied), 2u);
  EXPECT_EQ(strict_label_pairs(tied), 2u);
}

TEST(Kendall, RejectsNonPermutation) {
  const std::vector<int> labels{1, 0};
  EXPECT_THROW(kendall_regret(Ranking{0, 0}, labels), ValidationError);
  EXPECT_FALSE(is_permutation_of(Ranking{0, 2}, 2));
  EXPECT_TRUE(is_permutation_of(Ranking{1, 0}, 2));
}

TEST(Metrics, MatchBruteForceOnRandomInstances) {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t v = 1 + rng() % 6;
    std::vector<int> labels(v);
    for (auto& l : labels) l = static_cast<int>(rng() % 5);
    Ranking r(v);
    std::iota(r.begin(), r.end(), std::size_t{0});
    std::shuffle(r.begin(), r.end(), rng);
    const std::size_t k = 1 + rng() % 6;
    EXPECT_EQ(kendall_regret(r, labels), testing::oracle_kendall(r, labels));
    EXPECT_NEAR(ndcg_at_k(r, labels, k), testing::oracle_ndcg(r, labels, k), 1e-12);
    Ranking rev(r.rbegin(), r.rend());
    EXPECT_EQ(kendall_regret(r, labels) + kendall_regret(rev, labels), strict_label_pairs(labels));
  }
}

}  // namespace
}  // namespace neurank
