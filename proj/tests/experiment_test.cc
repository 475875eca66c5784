#include "neurank/experiment.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "neurank/error.h"
#include "neurank/metrics.h"

namespace neurank {
namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.synthetic.dim = 4;
  cfg.synthetic.n_queries = 12;
  cfg.synthetic.docs_per_query = 6;
  cfg.synthetic.seed = 3;
  cfg.rounds = 40;
  cfg.cutoff = 5;
  cfg.width = 8;
  cfg.eta = 1e-2;
  cfg.steps = 3;
  cfg.eval_every = 10;
  cfg.threads = 1;
  return cfg;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string csv_of(const std::vector<RoundRecord>& r) {
  std::ostringstream os;
  write_records_csv(r, os);
  return os.str();
}

TEST(RunSeed, DeterministicRecords) {
  const auto cfg = small_config();
  const Dataset data = prepare_dataset(cfg);
  const auto a = run_seed(cfg, data, 7);
  const auto b = run_seed(cfg, data, 7);
  EXPECT_EQ(csv_of(a.records), csv_of(b.records));
  EXPECT_EQ(a.final_params, b.final_params);
  const auto c = run_seed(cfg, data, 8);
  EXPECT_NE(csv_of(a.records), csv_of(c.records));
}

TEST(RunSeed, RecordsAreConsistent) {
  auto cfg = small_config();
  const Dataset data = prepare_dataset(cfg);
  const auto res = run_seed(cfg, data, 1);
  ASSERT_EQ(res.records.size(), cfg.rounds);
  std::vector<double> ndcgs;
  for (std::size_t t = 0; t < res.records.size(); ++t) {
    const auto& r = res.records[t];
    EXPECT_EQ(r.round, t + 1);
    EXPECT_GE(r.ndcg_at_k, 0.0);
    EXPECT_LE(r.ndcg_at_k, 1.0);
    EXPECT_LE(r.kendall_regret, 15u);
    EXPECT_GE(r.certain_ratio, 0.0);
    EXPECT_LE(r.certain_ratio, 1.0);
    EXPECT_TRUE(is_permutation_of(r.served, 6));
    ndcgs.push_back(r.ndcg_at_k);
    EXPECT_NEAR(r.cum_ndcg, cumulative_ndcg(ndcgs, cfg.gamma), 1e-12);
  }
  ASSERT_EQ(res.offline.size(), 4u);
  EXPECT_EQ(res.offline.back().round, 40u);
}

TEST(OnlineRanker, ZeroClickRoundLeavesStateUnchanged) {
  auto cfg = small_config();
  cfg.persona = custom_config(std::vector<double>(5, 0.0), std::vector<double>(5, 0.0));
  const Dataset data = prepare_dataset(cfg);
  Rng rng(1);
  OnlineRanker ranker(cfg, data, rng);
  const NetworkParams before = ranker.params();
  const std::vector<double> diag(ranker.uncertainty().diagonal().begin(),
                                 ranker.uncertainty().diagonal().end());
  for (int t = 0; t < 5; ++t) {
    const auto rec = ranker.run_round(static_cast<std::size_t>(t), rng);
    EXPECT_EQ(rec.n_pairs, 0u);
  }
  EXPECT_TRUE(ranker.history().empty());
  EXPECT_EQ(ranker.params(), before);
  EXPECT_TRUE(std::equal(diag.begin(), diag.end(), ranker.uncertainty().diagonal().begin()));
}

TEST(OnlineRanker, ServedListsHonorCertainEdges) {
  auto cfg = small_config();
  cfg.alpha = 1e-3;
  const Dataset data = prepare_dataset(cfg);
  Rng rng(2);
  OnlineRanker ranker(cfg, data, rng);
  std::size_t edges_seen = 0;
  for (std::size_t t = 0; t < 60; ++t) {
    const auto rec = ranker.run_round(t % data.sessions.size(), rng);
    edges_seen += ranker.last_edges().size();
    EXPECT_TRUE(honors_edges(ranker.last_edges(), rec.served));
  }
  EXPECT_GT(edges_seen, 0u);
}

TEST(OnlineRanker, EveryPolicyRuns) {
  for (auto kind : {PolicyKind::kOlRankNet, PolicyKind::kOlLambdaRank, PolicyKind::kEpsilonGreedy,
                    PolicyKind::kExploitOnly}) {
    auto cfg = small_config();
    cfg.policy.kind = kind;
    cfg.policy.epsilon = kind == PolicyKind::kEpsilonGreedy ? std::optional<double>(0.1) : std::nullopt;
    cfg.rounds = 15;
    const Dataset data = prepare_dataset(cfg);
    EXPECT_EQ(run_seed(cfg, data, 3).records.size(), 15u) << policy_name(kind);
  }
}

TEST(Csv, ThreeRecordsFourLinesAndRoundTrip) {
  std::vector<RoundRecord> recs{{1, 0.5, 3, 0.25, 2, 0.5, {}},
                                {2, 0.123456789, 0, 1.0, 0, 0.6234, {}},
                                {3, 1.0, 7, 0.0, 1, 1.62307, {}}};
  const std::string text = csv_of(recs);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
  EXPECT_EQ(text.find('\r'), std::string::npos);
  EXPECT_EQ(text.substr(0, text.find('\n')), "round,ndcg_at_k,kendall_regret,certain_ratio,n_pairs,cum_ndcg");
  std::istringstream in(text);
  const auto back = parse_records_csv(in);
  ASSERT_EQ(back.size(), 3u);
  EXPECT_EQ(back[1].ndcg_at_k, 0.123457);
  EXPECT_EQ(back[2].kendall_regret, 7u);
  EXPECT_EQ(csv_of(back), text);
}

TEST(Csv, MalformedRowRejected) {
  std::istringstream in("round,ndcg_at_k,kendall_regret,certain_ratio,n_pairs,cum_ndcg\n1,0.5,x,0,0,0.5\n");
  EXPECT_THROW(parse_records_csv(in), ParseError);
}

TEST(Summary, MatchesRecords) {
  std::vector<RoundRecord> recs;
  std::vector<double> nd;
  double cum = 0.0, disc = 1.0;
  for (std::size_t t = 1; t <= 20; ++t) {
    const double v = 0.05 * static_cast<double>(t % 7);
    cum += v * disc;
    disc *= 0.9;
    nd.push_back(v);
    recs.push_back({t, v, t % 3, 0.1 * static_cast<double>(t % 4), 1, cum, {}});
  }
  const auto s = summarize_records(recs, 0.9, 5);
  EXPECT_EQ(s.rounds, 20u);
  EXPECT_NEAR(s.cumulative_ndcg, cumulative_ndcg(nd, 0.9), 1e-12);
  ASSERT_EQ(s.regret_curve.size(), 4u);
  std::uint64_t total = 0;
  for (const auto& r : recs) total += r.kendall_regret;
  EXPECT_EQ(s.total_kendall_regret, total);
  EXPECT_EQ(s.regret_curve.back(), total);
}

TEST(RunExperiment, WritesIdenticalOutputsTwice) {
  auto cfg = small_config();
  cfg.rounds = 12;
  cfg.seeds = {1, 2};
  const auto base = std::filesystem::temp_directory_path() / "neurank_experiment_test";
  std::filesystem::remove_all(base);
  cfg.output_dir = base / "a";
  const auto sa = run_experiment(cfg);
  cfg.output_dir = base / "b";
  run_experiment(cfg);
  for (const char* f : {"seed_1/records.csv", "seed_2/records.csv", "seed_1/summary.json",
                        "seed_2/model.bin", "summary.json"}) {
    ASSERT_TRUE(std::filesystem::exists(base / "a" / f)) << f;
    EXPECT_EQ(read_file(base / "a" / f), read_file(base / "b" / f)) << f;
  }
  EXPECT_EQ(sa.seeds.size(), 2u);
  const auto recs = load_records_csv(base / "a" / "seed_1" / "records.csv");
  EXPECT_EQ(recs.size(), 12u);
  std::filesystem::remove_all(base);
}

TEST(RunExperiment, SingleRoundGivesOneRow) {
  auto cfg = small_config();
  cfg.rounds = 1;
  const auto dir = std::filesystem::temp_directory_path() / "neurank_single_round";
  std::filesystem::remove_all(dir);
  cfg.output_dir = dir;
  run_experiment(cfg);
  const std::string text = read_file(dir / "seed_1" / "records.csv");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace neurank
