#include "neurank/experiment.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "neurank/baselines.h"
#include "neurank/click_model.h"
#include "neurank/error.h"
#include "neurank/metrics.h"

namespace neurank {
namespace {

constexpr std::string_view kRecordsHeader =
    "round,ndcg_at_k,kendall_regret,certain_ratio,n_pairs,cum_ndcg";

std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
T field(std::string_view tok, std::size_t line) {
  T v{};
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw ParseError(line, "invalid CSV field '" + std::string(tok) + "'");
  }
  return v;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out << content;
  if (!out) throw IoError(path.string(), "write failed");
}

double mean_of(std::span<const double> v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stdev_of(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double mu = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - mu) * (x - mu);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

nlohmann::json offline_json(std::span<const OfflinePoint> pts) {
  auto arr = nlohmann::json::array();
  for (const auto& p : pts) arr.push_back({{"round", p.round}, {"ndcg", p.ndcg}});
  return arr;
}

}  // namespace

OnlineRanker::OnlineRanker(const ExperimentConfig& cfg, const Dataset& train, Rng& rng)
    : cfg_(cfg),
      train_(train),
      theta0_(init_params(train.feature_dim, cfg.width, cfg.depth, rng())),
      params_(theta0_),
      state_(theta0_.size(), cfg.width, cfg.alpha, cfg.lambda_reg, cfg.epsilon_offset,
             cfg.uncertainty),
      train_cfg_{cfg.eta, cfg.steps, cfg.lambda_reg, cfg.warm_start} {
  train_cfg_.validate();
}

RoundRecord OnlineRanker::run_round(std::size_t session_index, Rng& rng) {
  const QuerySession& session = train_.sessions.at(session_index);
  const std::size_t n = session.size();
  ++round_;

  std::vector<double> scores(n);
  std::vector<TangentVector> grads(n);
  for (std::size_t i = 0; i < n; ++i) {
    grads[i].assign(params_.size(), 0.0);
    scores[i] = accumulate_gradient(params_, session.docs[i], 1.0, grads[i], ws_);
  }
  last_edges_ = certain_edges(scores, grads, state_);

  std::vector<std::size_t> served;
  switch (cfg_.policy.kind) {
    case PolicyKind::kOlRankNet:
    case PolicyKind::kOlLambdaRank:
      served = rank_topological(last_edges_, rng);
      if (cfg_.check_edges && !honors_edges(last_edges_, served)) {
        throw InternalError("round " + std::to_string(round_) +
                            ": served list violates a certain rank order");
      }
      break;
    case PolicyKind::kEpsilonGreedy:
      served = rank_epsilon_greedy(scores, *cfg_.policy.epsilon, cfg_.cutoff, rng);
      break;
    case PolicyKind::kExploitOnly:
      served = rank_exploit(scores, rng);
      break;
  }

  const std::size_t k = std::min(cfg_.cutoff, n);
  const ClickOutcome outcome = simulate(served, session.labels, cfg_.persona, k, rng);
  auto pairs = harvest_pairs(outcome, served, round_);
  assign_pair_weights(cfg_.policy.kind == PolicyKind::kOlLambdaRank
                          ? PairWeighting::kLambdaRank
                          : PairWeighting::kRankNet,
                      served, outcome.clicks, k, pairs);
  for (const auto& p : pairs) history_.add(session_index, session, p);
  if (cfg_.max_history > 0) history_.truncate_oldest(cfg_.max_history);

  if (!(cfg_.skip_zero_click_train && pairs.empty())) {
    try {
      params_ = train(params_, theta0_, history_, train_cfg_);
    } catch (const TrainingError& e) {
      throw TrainingError(e.step(), e.reason() + " (round " + std::to_string(round_) + ")");
    }
  }

  // Tangent features of the harvested pairs at the freshly trained parameters.
  if (!pairs.empty()) {
    TangentVector gi(params_.size());
    TangentVector gj(params_.size());
    for (const auto& p : pairs) {
      std::fill(gi.begin(), gi.end(), 0.0);
      std::fill(gj.begin(), gj.end(), 0.0);
      accumulate_gradient(params_, session.docs[p.doc_i], 1.0, gi, ws_);
      accumulate_gradient(params_, session.docs[p.doc_j], 1.0, gj, ws_);
      state_.add_pair(gi, gj);
    }
  }

  RoundRecord rec;
  rec.round = round_;
  rec.ndcg_at_k = ndcg_at_k(served, session.labels, cfg_.cutoff);
  rec.kendall_regret = kendall_regret(served, session.labels);
  rec.certain_ratio = k >= 2 ? certain_ratio(last_edges_, served, k) : 1.0;
  rec.n_pairs = pairs.size();
  cum_ndcg_ += rec.ndcg_at_k * discount_;
  discount_ *= cfg_.gamma;
  rec.cum_ndcg = cum_ndcg_;
  rec.served = std::move(served);
  return rec;
}

double OnlineRanker::offline_ndcg(const Dataset& test) const {
  if (test.empty()) return 0.0;
  double total = 0.0;
  for (const auto& s : test.sessions) {
    std::vector<double> scores(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) scores[i] = forward(params_, s.docs[i], ws_);
    std::vector<std::size_t> order(s.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    total += ndcg_at_k(order, s.labels, cfg_.cutoff);
  }
  return total / static_cast<double>(test.sessions.size());
}

Dataset prepare_dataset(const ExperimentConfig& cfg) {
  if (cfg.dataset_path.empty()) return generate_synthetic(cfg.synthetic);
  Dataset ds = load_letor(cfg.dataset_path);
  if (ds.empty()) throw ValidationError(cfg.dataset_path.string() + ": no queries");
  if (cfg.augment && !ds.augmented) ds = augment_symmetric(ds);
  return ds;
}

SeedResult run_seed(const ExperimentConfig& cfg, const Dataset& data, std::uint64_t seed) {
  cfg.validate();
  Rng rng(seed);
  auto [train, test] = split_holdout(data, cfg.holdout_fraction, rng);
  OnlineRanker ranker(cfg, train, rng);

  SeedResult result;
  result.seed = seed;
  result.records.reserve(cfg.rounds);
  for (std::size_t t = 1; t <= cfg.rounds; ++t) {
    const std::size_t q = sample_session_index(train, rng);
    result.records.push_back(ranker.run_round(q, rng));
    if (!test.empty() && (t % cfg.eval_every == 0 || t == cfg.rounds)) {
      result.offline.push_back({t, ranker.offline_ndcg(test)});
    }
  }
  result.final_params = ranker.params();
  return result;
}

void write_records_csv(std::span<const RoundRecord> records, std::ostream& out) {
  out << kRecordsHeader << '\n';
  for (const auto& r : records) {
    out << r.round << ',' << fmt6(r.ndcg_at_k) << ',' << r.kendall_regret << ','
        << fmt6(r.certain_ratio) << ',' << r.n_pairs << ',' << fmt6(r.cum_ndcg) << '\n';
  }
}

void emit_csv(std::span<const RoundRecord> records, const std::filesystem::path& path) {
  if (records.empty()) throw ValidationError("no records to write");
  std::ostringstream os;
  write_records_csv(records, os);
  write_file(path, os.str());
}

std::vector<RoundRecord> parse_records_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || line != kRecordsHeader) {
    throw ParseError(1, "expected records header '" + std::string(kRecordsHeader) + "'");
  }
  std::vector<RoundRecord> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 6) throw ParseError(line_no, "expected 6 fields");
    RoundRecord r;
    r.round = field<std::size_t>(f[0], line_no);
    r.ndcg_at_k = field<double>(f[1], line_no);
    r.kendall_regret = field<std::uint64_t>(f[2], line_no);
    r.certain_ratio = field<double>(f[3], line_no);
    r.n_pairs = field<std::size_t>(f[4], line_no);
    r.cum_ndcg = field<double>(f[5], line_no);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<RoundRecord> load_records_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  try {
    return parse_records_csv(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path.string() + ": " + e.what());
  }
}

void write_offline_csv(std::span<const OfflinePoint> points, std::ostream& out) {
  out << "round,offline_ndcg\n";
  for (const auto& p : points) out << p.round << ',' << fmt6(p.ndcg) << '\n';
}

std::vector<OfflinePoint> load_offline_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || line != "round,offline_ndcg") {
    throw ParseError(1, path.string() + ": bad offline header");
  }
  std::vector<OfflinePoint> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 2) throw ParseError(line_no, path.string() + ": expected 2 fields");
    out.push_back({field<std::size_t>(f[0], line_no), field<double>(f[1], line_no)});
  }
  return out;
}

SeedSummary summarize_records(std::span<const RoundRecord> records, double gamma,
                              std::size_t eval_every,
                              std::span<const OfflinePoint> offline) {
  if (eval_every == 0) throw ValidationError("eval_every must be >= 1");
  SeedSummary s;
  s.rounds = records.size();
  std::vector<double> ndcg(records.size());
  double ratio_total = 0.0;
  double window_total = 0.0;
  std::size_t window_n = 0;
  for (std::size_t t = 0; t < records.size(); ++t) {
    ndcg[t] = records[t].ndcg_at_k;
    s.total_kendall_regret += records[t].kendall_regret;
    ratio_total += records[t].certain_ratio;
    window_total += records[t].certain_ratio;
    ++window_n;
    if ((t + 1) % eval_every == 0 || t + 1 == records.size()) {
      s.regret_curve.push_back(s.total_kendall_regret);
      s.certain_ratio_curve.push_back(window_total / static_cast<double>(window_n));
      window_total = 0.0;
      window_n = 0;
    }
  }
  s.cumulative_ndcg = cumulative_ndcg(ndcg, gamma);
  s.mean_ndcg = mean_of(ndcg);
  s.mean_certain_ratio = records.empty() ? 0.0 : ratio_total / static_cast<double>(records.size());
  s.offline.assign(offline.begin(), offline.end());
  return s;
}

ExperimentSummary aggregate(std::vector<SeedSummary> seeds) {
  ExperimentSummary out;
  std::vector<double> cum, regret;
  for (const auto& s : seeds) {
    cum.push_back(s.cumulative_ndcg);
    regret.push_back(static_cast<double>(s.total_kendall_regret));
  }
  out.mean_cumulative_ndcg = mean_of(cum);
  out.stdev_cumulative_ndcg = stdev_of(cum);
  out.mean_total_regret = mean_of(regret);

  if (!seeds.empty()) {
    std::size_t n_off = seeds.front().offline.size();
    std::size_t n_curve = seeds.front().certain_ratio_curve.size();
    for (const auto& s : seeds) {
      n_off = std::min(n_off, s.offline.size());
      n_curve = std::min(n_curve, s.certain_ratio_curve.size());
    }
    for (std::size_t i = 0; i < n_off; ++i) {
      std::vector<double> v;
      for (const auto& s : seeds) v.push_back(s.offline[i].ndcg);
      out.mean_offline.push_back({seeds.front().offline[i].round, mean_of(v)});
      out.stdev_offline.push_back(stdev_of(v));
    }
    for (std::size_t i = 0; i < n_curve; ++i) {
      std::vector<double> v;
      for (const auto& s : seeds) v.push_back(s.certain_ratio_curve[i]);
      out.mean_certain_ratio_curve.push_back(mean_of(v));
    }
  }
  out.seeds = std::move(seeds);
  return out;
}

std::string seed_summary_json(const SeedSummary& s, int indent) {
  nlohmann::json j;
  j["seed"] = s.seed;
  j["rounds"] = s.rounds;
  j["cumulative_ndcg"] = s.cumulative_ndcg;
  j["mean_ndcg"] = s.mean_ndcg;
  j["total_kendall_regret"] = s.total_kendall_regret;
  j["mean_certain_ratio"] = s.mean_certain_ratio;
  j["regret_curve"] = s.regret_curve;
  j["certain_ratio_curve"] = s.certain_ratio_curve;
  j["offline_ndcg"] = offline_json(s.offline);
  return j.dump(indent) + "\n";
}

std::string experiment_summary_json(const ExperimentSummary& s,
                                    const ExperimentConfig& cfg, int indent) {
  nlohmann::json j;
  j["policy"] = std::string(policy_name(cfg.policy.kind));
  j["persona"] = std::string(persona_name(cfg.persona.persona));
  j["rounds"] = cfg.rounds;
  j["gamma"] = cfg.gamma;
  j["seeds"] = cfg.seeds;
  auto per_seed = nlohmann::json::array();
  for (const auto& seed : s.seeds) {
    per_seed.push_back({{"seed", seed.seed},
                        {"cumulative_ndcg", seed.cumulative_ndcg},
                        {"total_kendall_regret", seed.total_kendall_regret}});
  }
  j["per_seed"] = per_seed;
  j["mean_cumulative_ndcg"] = s.mean_cumulative_ndcg;
  j["stdev_cumulative_ndcg"] = s.stdev_cumulative_ndcg;
  j["mean_total_kendall_regret"] = s.mean_total_regret;
  j["mean_offline_ndcg"] = offline_json(s.mean_offline);
  j["stdev_offline_ndcg"] = s.stdev_offline;
  j["mean_certain_ratio_curve"] = s.mean_certain_ratio_curve;
  return j.dump(indent) + "\n";
}

ExperimentSummary run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const Dataset data = prepare_dataset(cfg);
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) throw IoError(cfg.output_dir.string(), ec.message());
  write_file(cfg.output_dir / "config.txt", format_config(cfg));

  const std::size_t n = cfg.seeds.size();
  std::vector<SeedSummary> summaries(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        const std::uint64_t seed = cfg.seeds[i];
        const SeedResult r = run_seed(cfg, data, seed);
        const auto dir = cfg.output_dir / ("seed_" + std::to_string(seed));
        std::filesystem::create_directories(dir);

        std::ostringstream records;
        write_records_csv(r.records, records);
        write_file(dir / "records.csv", records.str());
        std::ostringstream offline;
        write_offline_csv(r.offline, offline);
        write_file(dir / "offline.csv", offline.str());
        std::ostringstream model;
        save_checkpoint(r.final_params, model);
        write_file(dir / "model.bin", model.str());

        // Summaries come from the persisted text so `eval` re-derives them.
        std::istringstream reread(records.str());
        const auto persisted = parse_records_csv(reread);
        const auto persisted_offline = load_offline_csv(dir / "offline.csv");
        summaries[i] = summarize_records(persisted, cfg.gamma, cfg.eval_every, persisted_offline);
        summaries[i].seed = seed;
        write_file(dir / "summary.json", seed_summary_json(summaries[i]));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  std::size_t threads = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                         : cfg.threads;
  threads = std::min(threads, n);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  ExperimentSummary summary = aggregate(std::move(summaries));
  write_file(cfg.output_dir / "summary.json", experiment_summary_json(summary, cfg));
  return summary;
}

}  // namespace neurank
