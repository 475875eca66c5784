#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "neurank/random.h"

namespace neurank {

using FeatureVector = std::vector<double>;

inline constexpr int kMaxRelevance = 4;
inline constexpr int kNumGrades = kMaxRelevance + 1;

/// One query with its candidate documents. Labels are graded relevance
/// (0..4) and are only read by the click simulator and the metrics.
struct QuerySession {
  std::string query_id;
  std::vector<FeatureVector> docs;
  std::vector<int> labels;

  std::size_t size() const noexcept { return docs.size(); }
  bool operator==(const QuerySession&) const = default;
};

struct Dataset {
  std::vector<QuerySession> sessions;
  std::size_t feature_dim = 0;
  // Set once every vector has been mapped to [x; x] / (sqrt(2) |x|).
  bool augmented = false;

  bool empty() const noexcept { return sessions.empty(); }
  std::size_t num_docs() const noexcept;
  bool operator==(const Dataset&) const = default;
};

// LETOR / SVMLight text: "<label> qid:<id> <idx>:<val> ... [# comment]".
// Feature indices are 1-based, missing indices read as 0, the dimension is
// the largest index seen. Lines of one qid must be contiguous. A first line
// reading exactly "# augmented" marks a file written from an augmented
// dataset.
Dataset parse_letor(std::istream& in);
Dataset load_letor(const std::filesystem::path& path);

// Writes with 17 significant digits so parse_letor(write_letor(ds)) == ds.
void write_letor(const Dataset& ds, std::ostream& out);
void save_letor(const Dataset& ds, const std::filesystem::path& path);

// [x; x] / (sqrt(2) |x|). A zero vector maps to the constant unit vector
// with entries 1/sqrt(2 * x.size()).
FeatureVector augment_vector(std::span<const double> x);

// Throws ValidationError if `ds` is already augmented.
Dataset augment_symmetric(const Dataset& ds);

// True when every vector is unit-norm (within `tol`) and its two halves are
// bitwise identical.
bool satisfies_augmentation(const Dataset& ds, double tol = 1e-9);

enum class Hardness { kLinear, kNonlinear };

Hardness parse_hardness(std::string_view name);
std::string_view hardness_name(Hardness h);

struct SyntheticSpec {
  std::size_t dim = 10;  // before augmentation
  std::size_t n_queries = 50;
  std::size_t docs_per_query = 10;
  Hardness hardness = Hardness::kLinear;
  std::uint64_t seed = 1;
};

// Raw vectors are drawn uniformly from the unit sphere in R^dim. The hidden
// relevance is h(x) = w.x (linear) or cos(w.x) + 0.5 |x * mask| (nonlinear),
// quantized into five equal-count bins over the whole pool. The result is
// augmented.
Dataset generate_synthetic(const SyntheticSpec& spec);

// Uniform draw over sessions. Throws ValidationError on an empty dataset.
std::size_t sample_session_index(const Dataset& ds, Rng& rng);
const QuerySession& sample_query(const Dataset& ds, Rng& rng);

// Seeded partition: round(holdout_fraction * n) sessions go to the second
// dataset, the rest to the first. Session order within each part follows
// the input order.
std::pair<Dataset, Dataset> split_holdout(const Dataset& ds,
                                          double holdout_fraction, Rng& rng);

}  // namespace neurank
