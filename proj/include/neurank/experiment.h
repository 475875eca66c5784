#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "neurank/certain_order.h"
#include "neurank/config.h"
#include "neurank/network.h"
#include "neurank/ranknet.h"
#include "neurank/uncertainty.h"

namespace neurank {

struct RoundRecord {
  std::size_t round = 0;  // 1-based
  double ndcg_at_k = 0.0;
  std::uint64_t kendall_regret = 0;
  double certain_ratio = 0.0;
  std::size_t n_pairs = 0;
  double cum_ndcg = 0.0;
  std::vector<std::size_t> served;
};

/// The learner's mutable state for one seed: current and anchor parameters,
/// the uncertainty state and the pair history. Stepped one round at a time.
class OnlineRanker {
 public:
  /// Draws the initialization seed from `rng`.
  OnlineRanker(const ExperimentConfig& cfg, const Dataset& train, Rng& rng);

  /// Serves `train.sessions[session_index]`, simulates clicks, harvests
  /// pairs, trains and updates the uncertainty state. RNG draws, in order:
  /// serving tie-breaks, then click simulation.
  RoundRecord run_round(std::size_t session_index, Rng& rng);

  /// Mean NDCG@k over `test` when ranking greedily by the current scores
  /// (ties in index order; no RNG use).
  double offline_ndcg(const Dataset& test) const;

  const NetworkParams& params() const noexcept { return params_; }
  const NetworkParams& anchor() const noexcept { return theta0_; }
  const UncertaintyState& uncertainty() const noexcept { return state_; }
  const PairHistory& history() const noexcept { return history_; }
  std::size_t rounds_played() const noexcept { return round_; }
  /// Certain edges computed in the most recent round.
  const CertainEdgeSet& last_edges() const noexcept { return last_edges_; }

 private:
  const ExperimentConfig& cfg_;
  const Dataset& train_;
  NetworkParams theta0_;
  NetworkParams params_;
  UncertaintyState state_;
  PairHistory history_;
  TrainConfig train_cfg_;
  std::size_t round_ = 0;
  double cum_ndcg_ = 0.0;
  double discount_ = 1.0;
  CertainEdgeSet last_edges_;
  mutable NetworkWorkspace ws_;
};

struct OfflinePoint {
  std::size_t round;
  double ndcg;
};

struct SeedResult {
  std::uint64_t seed = 0;
  std::vector<RoundRecord> records;
  std::vector<OfflinePoint> offline;
  NetworkParams final_params;
};

/// Builds the dataset a config describes (loaded or synthetic, augmented).
Dataset prepare_dataset(const ExperimentConfig& cfg);

/// One complete seeded run on `data`: holdout split, initialization, T
/// rounds, offline NDCG every eval_every rounds and at round T.
SeedResult run_seed(const ExperimentConfig& cfg, const Dataset& data, std::uint64_t seed);

// records.csv: header `round,ndcg_at_k,kendall_regret,certain_ratio,n_pairs,cum_ndcg`,
// reals with 6 significant digits, LF line endings.
void write_records_csv(std::span<const RoundRecord> records, std::ostream& out);
void emit_csv(std::span<const RoundRecord> records, const std::filesystem::path& path);
std::vector<RoundRecord> parse_records_csv(std::istream& in);
std::vector<RoundRecord> load_records_csv(const std::filesystem::path& path);

void write_offline_csv(std::span<const OfflinePoint> points, std::ostream& out);
std::vector<OfflinePoint> load_offline_csv(const std::filesystem::path& path);

/// Online aggregates of one seed, computed from records as they read back
/// from CSV so that `neurank eval` reproduces them exactly.
struct SeedSummary {
  std::uint64_t seed = 0;
  std::size_t rounds = 0;
  double cumulative_ndcg = 0.0;
  double mean_ndcg = 0.0;
  std::uint64_t total_kendall_regret = 0;
  double mean_certain_ratio = 0.0;
  std::vector<std::uint64_t> regret_curve;    // cumulative, at every eval_every rounds
  std::vector<double> certain_ratio_curve;    // window means over eval_every rounds
  std::vector<OfflinePoint> offline;
};

SeedSummary summarize_records(std::span<const RoundRecord> records, double gamma,
                              std::size_t eval_every,
                              std::span<const OfflinePoint> offline = {});

struct ExperimentSummary {
  std::vector<SeedSummary> seeds;
  double mean_cumulative_ndcg = 0.0;
  double stdev_cumulative_ndcg = 0.0;
  double mean_total_regret = 0.0;
  std::vector<OfflinePoint> mean_offline;
  std::vector<double> stdev_offline;
  std::vector<double> mean_certain_ratio_curve;
};

ExperimentSummary aggregate(std::vector<SeedSummary> seeds);

std::string seed_summary_json(const SeedSummary& s, int indent = 2);
std::string experiment_summary_json(const ExperimentSummary& s,
                                    const ExperimentConfig& cfg, int indent = 2);

/// Runs every seed (in parallel up to cfg.threads), writing
/// <output_dir>/seed_<s>/{records.csv,offline.csv,summary.json,model.bin},
/// <output_dir>/config.txt and <output_dir>/summary.json.
ExperimentSummary run_experiment(const ExperimentConfig& cfg);

}  // namespace neurank
