#pragma once

// Dependent click model: the user scans the served list top-down, clicks a
// document with a probability set by its relevance grade and, after a click,
// stops with a grade-dependent probability.

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "neurank/dataset.h"
#include "neurank/random.h"
#include "neurank/ranknet.h"

namespace neurank {

enum class Persona { kPerfect, kNavigational, kInformational, kCustom };

struct ClickModelConfig {
  std::array<double, kNumGrades> click_prob{};
  std::array<double, kNumGrades> stop_prob{};
  Persona persona = Persona::kCustom;

  void validate() const;
};

ClickModelConfig builtin_config(std::string_view name);
ClickModelConfig custom_config(std::span<const double> click_prob,
                               std::span<const double> stop_prob);
std::string_view persona_name(Persona p);

struct ClickOutcome {
  std::vector<int> clicks;       // by document index; 0 beyond the cutoff
  std::size_t last_examined = 0;  // 1-based o_t, 0 when nothing was clicked
  std::size_t cutoff = 0;         // served-list truncation k
  std::size_t positions_scanned = 0;  // simulator ground truth, not learner-visible
};

/// Simulates one user on the top-k of `ranking`. Per scanned position the
/// click draw comes first, then a stop draw only if clicked.
ClickOutcome simulate(std::span<const std::size_t> ranking, std::span<const int> labels,
                      const ClickModelConfig& cfg, std::size_t k, Rng& rng);

/// Independent pairs from disjoint position pairs (1,2), (3,4), ... inside
/// the examined prefix whose clicks differ. The higher-served document is
/// always doc_i; y is 1 when it was the clicked one.
std::vector<PairObservation> harvest_pairs(const ClickOutcome& outcome,
                                           std::span<const std::size_t> ranking,
                                           std::size_t round);

}  // namespace neurank
