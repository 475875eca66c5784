#include "neurank/certain_order.h"

#include <string>

#include "neurank/error.h"
#include "neurank/ranknet.h"

namespace neurank {

CertainEdgeSet::CertainEdgeSet(std::size_t n_docs) : n_(n_docs), adj_(n_docs * n_docs, 0) {}

void CertainEdgeSet::add(std::size_t from, std::size_t to) {
  if (from >= n_ || to >= n_ || from == to) {
    throw ValidationError("invalid certain edge " + std::to_string(from) + " -> " +
                          std::to_string(to));
  }
  char& cell = adj_[from * n_ + to];
  if (!cell) {
    cell = 1;
    ++count_;
  }
}

bool CertainEdgeSet::has_edge(std::size_t from, std::size_t to) const {
  return adj_[from * n_ + to] != 0;
}

bool CertainEdgeSet::connects(std::size_t a, std::size_t b) const {
  return has_edge(a, b) || has_edge(b, a);
}

std::vector<std::pair<std::size_t, std::size_t>> CertainEdgeSet::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(count_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      if (has_edge(i, j)) out.emplace_back(i, j);
    }
  }
  return out;
}

CertainEdgeSet certain_edges(std::span<const double> scores,
                             const std::function<double(std::size_t, std::size_t)>& width) {
  const std::size_t n = scores.size();
  CertainEdgeSet edges(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || !(scores[i] > scores[j])) continue;
      if (sigmoid(scores[i] - scores[j]) - width(i, j) > 0.5) edges.add(i, j);
    }
  }
  return edges;
}

CertainEdgeSet certain_edges(std::span<const double> scores,
                             std::span<const TangentVector> grads,
                             const UncertaintyState& state) {
  if (grads.size() != scores.size()) {
    throw ValidationError("need one tangent vector per scored document");
  }
  return certain_edges(scores, [&](std::size_t i, std::size_t j) {
    return state.confidence_width(grads[i], grads[j]);
  });
}

std::vector<std::size_t> rank_topological(const CertainEdgeSet& edges, Rng& rng) {
  const std::size_t n = edges.n_docs();
  std::vector<std::size_t> in_degree(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (edges.has_edge(i, j)) ++in_degree[j];
    }
  }
  std::vector<std::size_t> ready;
  for (std::size_t v = 0; v < n; ++v) {
    if (in_degree[v] == 0) ready.push_back(v);
  }

  std::vector<std::size_t> order;
  order.reserve(n);
  while (!ready.empty()) {
    const std::size_t pick = uniform_index(rng, ready.size());
    const std::size_t v = ready[pick];
    ready.erase(ready.begin() + static_cast<std::ptrdiff_t>(pick));
    order.push_back(v);
    for (std::size_t w = 0; w < n; ++w) {
      if (edges.has_edge(v, w) && --in_degree[w] == 0) ready.push_back(w);
    }
  }
  if (order.size() != n) {
    throw InternalError("certain rank orders contain a cycle");
  }
  return order;
}

bool honors_edges(const CertainEdgeSet& edges, std::span<const std::size_t> ranking) {
  const std::size_t n = edges.n_docs();
  if (ranking.size() != n) return false;
  std::vector<std::size_t> pos(n);
  for (std::size_t r = 0; r < n; ++r) pos[ranking[r]] = r;
  for (const auto& [i, j] : edges.edges()) {
    if (pos[i] >= pos[j]) return false;
  }
  return true;
}

double certain_ratio(const CertainEdgeSet& edges,
                     std::span<const std::size_t> ranking, std::size_t k) {
  if (k < 2) throw ValidationError("certain ratio needs k >= 2");
  if (k > ranking.size()) throw ValidationError("certain ratio cutoff exceeds list length");
  std::size_t certain = 0;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      if (edges.connects(ranking[a], ranking[b])) ++certain;
    }
  }
  return static_cast<double>(certain) / (static_cast<double>(k * (k - 1)) / 2.0);
}

}  // namespace neurank
