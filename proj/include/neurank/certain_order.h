#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "neurank/network.h"
#include "neurank/random.h"
#include "neurank/uncertainty.h"

namespace neurank {

/// Directed graph over a query's documents; i -> j means document i is
/// certainly ranked above document j.
class CertainEdgeSet {
 public:
  explicit CertainEdgeSet(std::size_t n_docs = 0);

  std::size_t n_docs() const noexcept { return n_; }
  std::size_t size() const noexcept { return count_; }
  bool empty() const noexcept { return count_ == 0; }

  void add(std::size_t from, std::size_t to);
  bool has_edge(std::size_t from, std::size_t to) const;
  /// True when either orientation is present.
  bool connects(std::size_t a, std::size_t b) const;
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;

 private:
  std::size_t n_;
  std::size_t count_ = 0;
  std::vector<char> adj_;  // n x n
};

/// Edge i -> j iff sigma(s_i - s_j) - width(i, j) > 1/2 and s_i > s_j.
CertainEdgeSet certain_edges(std::span<const double> scores,
                             const std::function<double(std::size_t, std::size_t)>& width);

/// Widths from the tangent features of each document under `state`.
CertainEdgeSet certain_edges(std::span<const double> scores,
                             std::span<const TangentVector> grads,
                             const UncertaintyState& state);

/// Kahn's algorithm, choosing uniformly among the current zero in-degree
/// vertices. Throws InternalError if the graph has a cycle.
std::vector<std::size_t> rank_topological(const CertainEdgeSet& edges, Rng& rng);

/// True when every edge i -> j has i ahead of j in `ranking`.
bool honors_edges(const CertainEdgeSet& edges, std::span<const std::size_t> ranking);

/// Fraction of the k(k-1)/2 pairs among the top-k served documents that are
/// connected by a certain edge in either direction. Requires 2 <= k <= V.
double certain_ratio(const CertainEdgeSet& edges,
                     std::span<const std::size_t> ranking, std::size_t k);

}  // namespace neurank
