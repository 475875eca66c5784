// neurank: online neural learning-to-rank simulator.
//
//   neurank run --config exp.cfg
//   neurank eval --records out/seed_1/records.csv [--gamma 0.9995] [--eval-every 50]
//   neurank gen-synthetic --out data.letor [--dim 10 --queries 50 --docs 10 ...]

#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "neurank/config.h"
#include "neurank/dataset.h"
#include "neurank/error.h"
#include "neurank/experiment.h"
#include "neurank/kernels.h"

namespace {

int cmd_run(const std::string& config_path) {
  const auto cfg = neurank::load_config(config_path);
  const auto summary = neurank::run_experiment(cfg);
  std::cout << "kernels: " << neurank::kernels::backend_name(neurank::kernels::active().backend)
            << "\n";
  for (const auto& s : summary.seeds) {
    std::cout << "seed " << s.seed << ": cumulative NDCG " << s.cumulative_ndcg
              << ", total Kendall regret " << s.total_kendall_regret << "\n";
  }
  std::cout << "mean cumulative NDCG " << summary.mean_cumulative_ndcg << " (sd "
            << summary.stdev_cumulative_ndcg << ")\n"
            << "wrote " << (cfg.output_dir / "summary.json").string() << "\n";
  return 0;
}

int cmd_eval(const std::string& records_path, double gamma, std::size_t eval_every) {
  const std::filesystem::path path(records_path);
  const auto records = neurank::load_records_csv(path);
  std::vector<neurank::OfflinePoint> offline;
  const auto offline_path = path.parent_path() / "offline.csv";
  if (std::filesystem::exists(offline_path)) offline = neurank::load_offline_csv(offline_path);
  auto summary = neurank::summarize_records(records, gamma, eval_every, offline);
  const auto seed_dir = path.parent_path().filename().string();
  if (seed_dir.starts_with("seed_")) summary.seed = std::stoull(seed_dir.substr(5));
  std::cout << neurank::seed_summary_json(summary);
  return 0;
}

int cmd_gen(const std::string& out, const neurank::SyntheticSpec& spec) {
  neurank::save_letor(neurank::generate_synthetic(spec), out);
  std::cout << "wrote " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online neural learning to rank with pairwise uncertainty exploration"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run an experiment from a key=value config");
  run->add_option("--config", config_path, "Experiment config file")->required()->check(CLI::ExistingFile);

  std::string records_path;
  double gamma = 0.9995;
  std::size_t eval_every = 50;
  auto* eval = app.add_subcommand("eval", "Re-derive a seed summary from records.csv");
  eval->add_option("--records", records_path, "records.csv of one seed")->required()->check(CLI::ExistingFile);
  eval->add_option("--gamma", gamma, "Discount for cumulative NDCG")->capture_default_str();
  eval->add_option("--eval-every", eval_every, "Curve window in rounds")->capture_default_str();

  std::string out_path;
  neurank::SyntheticSpec spec;
  std::string hardness = "linear";
  auto* gen = app.add_subcommand("gen-synthetic", "Write a synthetic LETOR dataset");
  gen->add_option("--out", out_path, "Output path")->required();
  gen->add_option("--dim", spec.dim, "Feature dimension before augmentation")->capture_default_str();
  gen->add_option("--queries", spec.n_queries, "Number of queries")->capture_default_str();
  gen->add_option("--docs", spec.docs_per_query, "Documents per query")->capture_default_str();
  gen->add_option("--hardness", hardness, "linear or nonlinear")
      ->check(CLI::IsMember({"linear", "nonlinear"}))
      ->capture_default_str();
  gen->add_option("--seed", spec.seed, "Generator seed")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path);
    if (*eval) return cmd_eval(records_path, gamma, eval_every);
    if (*gen) {
      spec.hardness = neurank::parse_hardness(hardness);
      return cmd_gen(out_path, spec);
    }
  } catch (const neurank::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
