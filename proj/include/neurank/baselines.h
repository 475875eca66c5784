#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "neurank/random.h"

namespace neurank {

enum class PolicyKind { kOlRankNet, kOlLambdaRank, kEpsilonGreedy, kExploitOnly };

struct RankerPolicy {
  PolicyKind kind = PolicyKind::kOlRankNet;
  std::optional<double> epsilon;  // set iff kind == kEpsilonGreedy

  void validate() const;
  bool explores_uncertain_pairs() const noexcept {
    return kind == PolicyKind::kOlRankNet || kind == PolicyKind::kOlLambdaRank;
  }
};

PolicyKind parse_policy_kind(std::string_view name);
std::string_view policy_name(PolicyKind kind);

/// Score-descending order; equal scores are ordered by a random shuffle drawn
/// from `rng` before a stable sort.
std::vector<std::size_t> rank_exploit(std::span<const double> scores, Rng& rng);

/// Builds the list position by position over the first k slots: with
/// probability epsilon a uniformly random unranked document, otherwise the
/// best-scored unranked one. The tail after k stays in score order. With
/// epsilon == 0 no extra draws are made, so it matches rank_exploit.
std::vector<std::size_t> rank_epsilon_greedy(std::span<const double> scores,
                                             double epsilon, std::size_t k, Rng& rng);

}  // namespace neurank
