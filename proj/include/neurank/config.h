#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "neurank/baselines.h"
#include "neurank/click_model.h"
#include "neurank/dataset.h"
#include "neurank/uncertainty.h"

namespace neurank {

/// Everything one experiment needs. Parsed from plain-text key=value lines;
/// '#' starts a comment. See README.md for the key list.
struct ExperimentConfig {
  // Data: a LETOR path, or a synthetic spec when `dataset_path` is empty.
  std::filesystem::path dataset_path;
  bool augment = true;  // applied to loaded data unless already augmented
  SyntheticSpec synthetic;
  double holdout_fraction = 0.2;

  RankerPolicy policy;
  std::size_t rounds = 2000;  // T
  std::size_t cutoff = 10;    // k
  std::size_t width = 100;    // m
  std::size_t depth = 2;      // L
  double eta = 1e-4;
  std::size_t steps = 10;  // J
  double lambda_reg = 1e-1;
  double alpha = 1e-1;
  double epsilon_offset = 0.0;
  double gamma = 0.9995;
  UncertaintyMode uncertainty = UncertaintyMode::kDiagonal;
  bool warm_start = true;
  bool skip_zero_click_train = false;
  std::size_t max_history = 0;  // 0 = unbounded
  bool check_edges = true;

  ClickModelConfig persona = builtin_config("perfect");
  std::vector<std::uint64_t> seeds{1};
  std::size_t eval_every = 50;
  std::size_t threads = 0;  // 0 = hardware concurrency
  std::filesystem::path output_dir = "out";

  void validate() const;
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical key=value text; parse_config(format_config(c)) reproduces c.
std::string format_config(const ExperimentConfig& cfg);

}  // namespace neurank
