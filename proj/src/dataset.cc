#include "neurank/dataset.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "neurank/error.h"

namespace neurank {
namespace {

constexpr std::string_view kAugmentedMarker = "# augmented";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

double parse_real(std::string_view tok, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
    throw ParseError(line, "invalid feature value '" + std::string(tok) + "'");
  }
  return v;
}

struct RawLine {
  int label;
  std::string qid;
  std::vector<std::pair<std::size_t, double>> features;
};

RawLine parse_line(std::string_view body, std::size_t line) {
  const auto toks = split_ws(body);
  if (toks.size() < 2) throw ParseError(line, "expected '<label> qid:<id> ...'");

  RawLine raw;
  {
    const auto tok = toks[0];
    const auto [ptr, ec] =
        std::from_chars(tok.data(), tok.data() + tok.size(), raw.label);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
      throw ParseError(line, "invalid label '" + std::string(tok) + "'");
    }
  }
  if (!toks[1].starts_with("qid:") || toks[1].size() == 4) {
    throw ParseError(line, "expected qid:<id>, got '" + std::string(toks[1]) + "'");
  }
  raw.qid = std::string(toks[1].substr(4));

  for (std::size_t t = 2; t < toks.size(); ++t) {
    const auto tok = toks[t];
    const auto colon = tok.find(':');
    if (colon == std::string_view::npos) {
      throw ParseError(line, "expected <index>:<value>, got '" + std::string(tok) + "'");
    }
    std::size_t idx = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + colon, idx);
    if (ec != std::errc{} || ptr != tok.data() + colon || idx == 0) {
      throw ParseError(line, "invalid feature index in '" + std::string(tok) + "'");
    }
    raw.features.emplace_back(idx, parse_real(tok.substr(colon + 1), line));
  }
  if (raw.label < 0 || raw.label > kMaxRelevance) {
    throw ValidationError("line " + std::to_string(line) + ": label " +
                          std::to_string(raw.label) + " outside 0.." +
                          std::to_string(kMaxRelevance));
  }
  return raw;
}

}  // namespace

std::size_t Dataset::num_docs() const noexcept {
  std::size_t n = 0;
  for (const auto& s : sessions) n += s.size();
  return n;
}

Dataset parse_letor(std::istream& in) {
  std::vector<RawLine> rows;
  std::vector<std::size_t> row_lines;
  bool marked_augmented = false;
  bool seen_content = false;

  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    std::string_view view(text);
    if (!seen_content && trim(view) == kAugmentedMarker) {
      marked_augmented = true;
      continue;
    }
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = trim(view);
    if (view.empty()) continue;
    seen_content = true;
    rows.push_back(parse_line(view, line_no));
    row_lines.push_back(line_no);
  }

  Dataset ds;
  for (const auto& r : rows) {
    for (const auto& [idx, v] : r.features) ds.feature_dim = std::max(ds.feature_dim, idx);
  }

  std::unordered_set<std::string> closed;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto& r = rows[i];
    if (ds.sessions.empty() || ds.sessions.back().query_id != r.qid) {
      if (!ds.sessions.empty()) closed.insert(ds.sessions.back().query_id);
      if (closed.contains(r.qid)) {
        throw ParseError(row_lines[i], "non-contiguous qid block for qid '" + r.qid + "'");
      }
      ds.sessions.push_back(QuerySession{r.qid, {}, {}});
    }
    FeatureVector x(ds.feature_dim, 0.0);
    for (const auto& [idx, v] : r.features) x[idx - 1] = v;
    ds.sessions.back().docs.push_back(std::move(x));
    ds.sessions.back().labels.push_back(r.label);
  }

  if (marked_augmented) {
    ds.augmented = true;
    if (!satisfies_augmentation(ds)) {
      throw ValidationError("file is marked augmented but its vectors are not");
    }
  }
  return ds;
}

Dataset load_letor(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  try {
    return parse_letor(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path.string() + ": " + e.what());
  }
}

void write_letor(const Dataset& ds, std::ostream& out) {
  if (ds.augmented) out << kAugmentedMarker << '\n';
  out << std::setprecision(17);
  for (const auto& s : ds.sessions) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      out << s.labels[i] << " qid:" << s.query_id;
      for (std::size_t j = 0; j < s.docs[i].size(); ++j) {
        out << ' ' << (j + 1) << ':' << s.docs[i][j];
      }
      out << '\n';
    }
  }
}

void save_letor(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  write_letor(ds, out);
  if (!out) throw IoError(path.string(), "write failed");
}

FeatureVector augment_vector(std::span<const double> x) {
  const std::size_t d = x.size();
  FeatureVector out(2 * d);
  double norm = 0.0;
  for (double v : x) norm += v * v;
  norm = std::sqrt(norm);
  if (norm == 0.0) {
    std::fill(out.begin(), out.end(), 1.0 / std::sqrt(2.0 * static_cast<double>(d)));
    return out;
  }
  const double scale = 1.0 / (std::sqrt(2.0) * norm);
  for (std::size_t j = 0; j < d; ++j) {
    out[j] = x[j] * scale;
    out[j + d] = out[j];
  }
  return out;
}

Dataset augment_symmetric(const Dataset& ds) {
  if (ds.augmented) throw ValidationError("dataset is already augmented");
  Dataset out;
  out.feature_dim = 2 * ds.feature_dim;
  out.augmented = true;
  out.sessions.reserve(ds.sessions.size());
  for (const auto& s : ds.sessions) {
    QuerySession q{s.query_id, {}, s.labels};
    q.docs.reserve(s.size());
    for (const auto& x : s.docs) q.docs.push_back(augment_vector(x));
    out.sessions.push_back(std::move(q));
  }
  return out;
}

bool satisfies_augmentation(const Dataset& ds, double tol) {
  if (ds.feature_dim % 2 != 0) return false;
  const std::size_t half = ds.feature_dim / 2;
  for (const auto& s : ds.sessions) {
    for (const auto& x : s.docs) {
      if (x.size() != ds.feature_dim) return false;
      double n2 = 0.0;
      for (std::size_t j = 0; j < half; ++j) {
        if (x[j] != x[j + half]) return false;
        n2 += 2.0 * x[j] * x[j];
      }
      if (std::abs(std::sqrt(n2) - 1.0) > tol) return false;
    }
  }
  return true;
}

Hardness parse_hardness(std::string_view name) {
  if (name == "linear") return Hardness::kLinear;
  if (name == "nonlinear") return Hardness::kNonlinear;
  throw ValidationError("unknown hardness '" + std::string(name) + "'");
}

std::string_view hardness_name(Hardness h) {
  return h == Hardness::kLinear ? "linear" : "nonlinear";
}

Dataset generate_synthetic(const SyntheticSpec& spec) {
  if (spec.dim == 0 || spec.n_queries == 0 || spec.docs_per_query == 0) {
    throw ValidationError("synthetic dataset needs dim, queries and docs >= 1");
  }
  Rng rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<double> w(spec.dim);
  for (auto& v : w) v = normal(rng);
  std::vector<double> mask(spec.dim, 0.0);
  if (spec.hardness == Hardness::kNonlinear) {
    for (auto& v : mask) v = uniform01(rng) < 0.5 ? 1.0 : 0.0;
  }

  const std::size_t n = spec.n_queries * spec.docs_per_query;
  std::vector<FeatureVector> raw(n, FeatureVector(spec.dim));
  std::vector<double> truth(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& x = raw[i];
    double norm = 0.0;
    do {
      norm = 0.0;
      for (auto& v : x) {
        v = normal(rng);
        norm += v * v;
      }
    } while (norm == 0.0);
    norm = std::sqrt(norm);
    for (auto& v : x) v /= norm;

    double wx = 0.0;
    for (std::size_t j = 0; j < spec.dim; ++j) wx += w[j] * x[j];
    if (spec.hardness == Hardness::kLinear) {
      truth[i] = wx;
    } else {
      double masked = 0.0;
      for (std::size_t j = 0; j < spec.dim; ++j) masked += (x[j] * mask[j]) * (x[j] * mask[j]);
      truth[i] = std::cos(wx) + 0.5 * std::sqrt(masked);
    }
  }

  // Equal-count quantile bins over the whole pool.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return truth[a] < truth[b]; });
  std::vector<int> labels(n);
  for (std::size_t r = 0; r < n; ++r) {
    labels[order[r]] = static_cast<int>((r * kNumGrades) / n);
  }

  Dataset ds;
  ds.feature_dim = spec.dim;
  ds.sessions.reserve(spec.n_queries);
  for (std::size_t q = 0; q < spec.n_queries; ++q) {
    QuerySession s;
    s.query_id = std::to_string(q + 1);
    for (std::size_t k = 0; k < spec.docs_per_query; ++k) {
      const std::size_t i = q * spec.docs_per_query + k;
      s.docs.push_back(std::move(raw[i]));
      s.labels.push_back(labels[i]);
    }
    ds.sessions.push_back(std::move(s));
  }
  return augment_symmetric(ds);
}

std::size_t sample_session_index(const Dataset& ds, Rng& rng) {
  if (ds.empty()) throw ValidationError("cannot sample a query from an empty dataset");
  return uniform_index(rng, ds.sessions.size());
}

const QuerySession& sample_query(const Dataset& ds, Rng& rng) {
  return ds.sessions[sample_session_index(ds, rng)];
}

std::pair<Dataset, Dataset> split_holdout(const Dataset& ds,
                                          double holdout_fraction, Rng& rng) {
  if (!(holdout_fraction >= 0.0 && holdout_fraction < 1.0)) {
    throw ValidationError("holdout fraction must lie in [0, 1)");
  }
  const std::size_t n = ds.sessions.size();
  const auto n_hold = static_cast<std::size_t>(std::llround(holdout_fraction * static_cast<double>(n)));
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<bool> held(n, false);
  for (std::size_t i = 0; i < n_hold; ++i) held[perm[i]] = true;

  Dataset train{{}, ds.feature_dim, ds.augmented};
  Dataset test{{}, ds.feature_dim, ds.augmented};
  for (std::size_t i = 0; i < n; ++i) {
    (held[i] ? test : train).sessions.push_back(ds.sessions[i]);
  }
  if (train.empty()) throw ValidationError("holdout split left no training sessions");
  return {std::move(train), std::move(test)};
}

}  // namespace neurank
