#include "neurank/baselines.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "neurank/error.h"

namespace neurank {

void RankerPolicy::validate() const {
  if ((kind == PolicyKind::kEpsilonGreedy) != epsilon.has_value()) {
    throw ValidationError("epsilon must be set exactly for the epsilon_greedy policy");
  }
  if (epsilon && !(*epsilon >= 0.0 && *epsilon <= 1.0)) {
    throw ValidationError("epsilon must lie in [0, 1]");
  }
}

PolicyKind parse_policy_kind(std::string_view name) {
  if (name == "olranknet") return PolicyKind::kOlRankNet;
  if (name == "ollambdarank") return PolicyKind::kOlLambdaRank;
  if (name == "epsilon_greedy") return PolicyKind::kEpsilonGreedy;
  if (name == "exploit_only") return PolicyKind::kExploitOnly;
  throw ValidationError("unknown policy '" + std::string(name) + "'");
}

std::string_view policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kOlRankNet:
      return "olranknet";
    case PolicyKind::kOlLambdaRank:
      return "ollambdarank";
    case PolicyKind::kEpsilonGreedy:
      return "epsilon_greedy";
    case PolicyKind::kExploitOnly:
      return "exploit_only";
  }
  return "unknown";
}

std::vector<std::size_t> rank_exploit(std::span<const double> scores, Rng& rng) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

std::vector<std::size_t> rank_epsilon_greedy(std::span<const double> scores,
                                             double epsilon, std::size_t k, Rng& rng) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw ValidationError("epsilon must lie in [0, 1]");
  }
  // Greedy preference order; picks below remove from it.
  std::vector<std::size_t> remaining = rank_exploit(scores, rng);
  std::vector<std::size_t> out;
  out.reserve(remaining.size());
  const std::size_t n_random = std::min(k, remaining.size());
  for (std::size_t r = 0; r < n_random; ++r) {
    std::size_t pick = 0;
    if (epsilon > 0.0 && uniform01(rng) < epsilon) pick = uniform_index(rng, remaining.size());
    out.push_back(remaining[pick]);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  out.insert(out.end(), remaining.begin(), remaining.end());
  return out;
}

}  // namespace neurank
