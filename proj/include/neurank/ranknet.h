#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "neurank/dataset.h"
#include "neurank/network.h"

namespace neurank {

/// One independent pairwise preference harvested from a served list.
/// `doc_i` is the document served higher; y = 1 when it was the clicked one.
struct PairObservation {
  std::size_t doc_i = 0;
  std::size_t doc_j = 0;
  std::size_t position_i = 0;  // 0-based served positions
  std::size_t position_j = 0;
  double y = 0.0;
  std::size_t round = 0;
  double lambda_weight = 1.0;

  bool operator==(const PairObservation&) const = default;
};

struct TrainConfig {
  double eta = 1e-3;
  std::size_t steps = 10;  // gradient descent iterations J per round
  double lambda_reg = 1e-2;
  bool warm_start = true;

  void validate() const;
};

/// Accumulated training pairs over all rounds. Feature vectors are interned
/// once per (session, document) so a full-batch step evaluates each distinct
/// document once, however many pairs reference it.
class PairHistory {
 public:
  struct Entry {
    std::size_t slot_i;
    std::size_t slot_j;
    double y;
    std::size_t round;
    double weight;
  };

  /// Adds a pair whose documents come from `session` (identified by
  /// `session_index` for interning).
  void add(std::size_t session_index, const QuerySession& session,
           const PairObservation& obs);

  /// Adds a pair with free-standing feature vectors (no interning).
  void add(std::span<const double> x_i, std::span<const double> x_j, double y,
           double weight = 1.0, std::size_t round = 0);

  /// Drops the oldest pairs until at most `max_pairs` remain.
  void truncate_oldest(std::size_t max_pairs);

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  std::span<const Entry> entries() const noexcept { return entries_; }
  std::span<const FeatureVector> documents() const noexcept { return docs_; }

 private:
  std::size_t intern(std::size_t session_index, std::size_t doc,
                     std::span<const double> x);
  std::size_t push_doc(std::span<const double> x);

  std::vector<FeatureVector> docs_;
  std::unordered_map<std::uint64_t, std::size_t> slot_of_;
  std::vector<Entry> entries_;
};

inline constexpr double kSigmoidClamp = 1e-12;

double sigmoid(double s);

/// Cross-entropy of one pair with preference y at score difference f_ij,
/// sigma clamped to [1e-12, 1 - 1e-12].
double pair_cross_entropy(double f_ij, double y);

/// sum_pairs weight * CE(f_i - f_j, y) + (m * lambda / 2) |theta - theta0|^2.
double pair_loss(const NetworkParams& params, const NetworkParams& theta0,
                 const PairHistory& history, const TrainConfig& cfg);

/// Same loss; writes its gradient with respect to theta into `grad`.
double pair_loss_gradient(const NetworkParams& params, const NetworkParams& theta0,
                          const PairHistory& history, const TrainConfig& cfg,
                          std::span<double> grad);

/// cfg.steps full-batch gradient descent steps from `params` (warm start) or
/// `theta0`. Throws TrainingError on a non-finite loss. When `loss_trace` is
/// given it receives the loss before each step and after the last one.
NetworkParams train(const NetworkParams& params, const NetworkParams& theta0,
                    const PairHistory& history, const TrainConfig& cfg,
                    std::vector<double>* loss_trace = nullptr);

enum class PairWeighting { kRankNet, kLambdaRank };

/// |delta NDCG@k| from swapping the documents at served positions a and b,
/// using binary clicks (indexed by document) as gains.
double lambda_weight(std::span<const std::size_t> ranking, std::span<const int> clicks,
                     std::size_t k, std::size_t position_a, std::size_t position_b);

/// Fills lambda_weight on each observation: 1 under RankNet, |delta NDCG@k|
/// under LambdaRank.
void assign_pair_weights(PairWeighting mode, std::span<const std::size_t> ranking,
                         std::span<const int> clicks, std::size_t k,
                         std::span<PairObservation> pairs);

}  // namespace neurank
