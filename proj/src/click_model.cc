#include "neurank/click_model.h"

#include <algorithm>
#include <string>

#include "neurank/error.h"

namespace neurank {

void ClickModelConfig::validate() const {
  for (int g = 0; g < kNumGrades; ++g) {
    if (!(click_prob[g] >= 0.0 && click_prob[g] <= 1.0) ||
        !(stop_prob[g] >= 0.0 && stop_prob[g] <= 1.0)) {
      throw ValidationError("click model probabilities must lie in [0, 1]");
    }
  }
}

ClickModelConfig builtin_config(std::string_view name) {
  if (name == "perfect") {
    return {{0.0, 0.2, 0.4, 0.8, 1.0}, {0.0, 0.0, 0.0, 0.0, 0.0}, Persona::kPerfect};
  }
  if (name == "navigational") {
    return {{0.05, 0.3, 0.5, 0.7, 0.95}, {0.2, 0.3, 0.5, 0.7, 0.9}, Persona::kNavigational};
  }
  if (name == "informational") {
    return {{0.4, 0.6, 0.7, 0.8, 0.9}, {0.1, 0.2, 0.3, 0.4, 0.5}, Persona::kInformational};
  }
  throw ValidationError("unknown click model '" + std::string(name) + "'");
}

ClickModelConfig custom_config(std::span<const double> click_prob,
                               std::span<const double> stop_prob) {
  if (click_prob.size() != kNumGrades || stop_prob.size() != kNumGrades) {
    throw ValidationError("custom click model needs five click and five stop probabilities");
  }
  ClickModelConfig cfg;
  std::copy(click_prob.begin(), click_prob.end(), cfg.click_prob.begin());
  std::copy(stop_prob.begin(), stop_prob.end(), cfg.stop_prob.begin());
  cfg.persona = Persona::kCustom;
  cfg.validate();
  return cfg;
}

std::string_view persona_name(Persona p) {
  switch (p) {
    case Persona::kPerfect:
      return "perfect";
    case Persona::kNavigational:
      return "navigational";
    case Persona::kInformational:
      return "informational";
    case Persona::kCustom:
      return "custom";
  }
  return "custom";
}

ClickOutcome simulate(std::span<const std::size_t> ranking, std::span<const int> labels,
                      const ClickModelConfig& cfg, std::size_t k, Rng& rng) {
  if (k > ranking.size()) throw ValidationError("click cutoff exceeds list length");
  ClickOutcome out;
  out.clicks.assign(labels.size(), 0);
  out.cutoff = k;
  std::size_t last_click = 0;  // 1-based
  for (std::size_t r = 0; r < k; ++r) {
    out.positions_scanned = r + 1;
    const int label = labels[ranking[r]];
    if (label < 0 || label > kMaxRelevance) throw ValidationError("label outside 0..4");
    if (uniform01(rng) < cfg.click_prob[label]) {
      out.clicks[ranking[r]] = 1;
      last_click = r + 1;
      if (uniform01(rng) < cfg.stop_prob[label]) break;
    }
  }
  out.last_examined = last_click == 0 ? 0 : std::min(last_click + 1, k);
  return out;
}

std::vector<PairObservation> harvest_pairs(const ClickOutcome& outcome,
                                           std::span<const std::size_t> ranking,
                                           std::size_t round) {
  std::vector<PairObservation> pairs;
  const std::size_t o = std::min(outcome.last_examined, ranking.size());
  for (std::size_t a = 0; a + 1 < o; a += 2) {
    const std::size_t di = ranking[a];
    const std::size_t dj = ranking[a + 1];
    const int ci = outcome.clicks[di];
    const int cj = outcome.clicks[dj];
    if (ci == cj) continue;
    PairObservation obs;
    obs.doc_i = di;
    obs.doc_j = dj;
    obs.position_i = a;
    obs.position_j = a + 1;
    obs.y = static_cast<double>(ci - cj) / 2.0 + 0.5;
    obs.round = round;
    pairs.push_back(obs);
  }
  return pairs;
}

}  // namespace neurank
