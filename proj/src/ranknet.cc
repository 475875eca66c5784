#include "neurank/ranknet.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "neurank/error.h"
#include "neurank/kernels.h"
#include "neurank/metrics.h"

namespace neurank {
namespace {

std::uint64_t doc_key(std::size_t session_index, std::size_t doc) {
  return (static_cast<std::uint64_t>(session_index) << 24) ^ static_cast<std::uint64_t>(doc);
}

double regularizer(const NetworkParams& params, const NetworkParams& theta0,
                   double lambda_reg) {
  return 0.5 * static_cast<double>(params.width()) * lambda_reg *
         kernels::sq_dist(params.values(), theta0.values());
}

// Shared pass for loss (and optionally its gradient). Scores every referenced
// document once, then backpropagates one weighted gradient per document.
double loss_pass(const NetworkParams& params, const NetworkParams& theta0,
                 const PairHistory& history, const TrainConfig& cfg,
                 std::span<double> grad, bool want_grad) {
  if (!params.same_shape(theta0)) {
    throw ValidationError("parameters and anchor have different shapes");
  }
  const auto docs = history.documents();
  const auto entries = history.entries();
  std::vector<double> score(docs.size(), 0.0);
  std::vector<char> used(docs.size(), 0);
  for (const auto& e : entries) used[e.slot_i] = used[e.slot_j] = 1;

  NetworkWorkspace ws;
  for (std::size_t s = 0; s < docs.size(); ++s) {
    if (used[s]) score[s] = forward(params, docs[s], ws);
  }

  double loss = regularizer(params, theta0, cfg.lambda_reg);
  std::vector<double> coef(want_grad ? docs.size() : 0, 0.0);
  for (const auto& e : entries) {
    const double f_ij = score[e.slot_i] - score[e.slot_j];
    loss += e.weight * pair_cross_entropy(f_ij, e.y);
    if (want_grad) {
      const double c = e.weight * (sigmoid(f_ij) - e.y);
      coef[e.slot_i] += c;
      coef[e.slot_j] -= c;
    }
  }
  if (!want_grad) return loss;

  // d/dtheta of the regularizer: m * lambda * (theta - theta0).
  const double reg = static_cast<double>(params.width()) * cfg.lambda_reg;
  const auto theta = params.values();
  const auto anchor = theta0.values();
  for (std::size_t k = 0; k < grad.size(); ++k) grad[k] = reg * (theta[k] - anchor[k]);
  for (std::size_t s = 0; s < docs.size(); ++s) {
    if (coef[s] != 0.0) accumulate_gradient(params, docs[s], coef[s], grad, ws);
  }
  return loss;
}

}  // namespace

void TrainConfig::validate() const {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw ValidationError("eta must be > 0");
  if (!(lambda_reg > 0.0) || !std::isfinite(lambda_reg)) {
    throw ValidationError("lambda_reg must be > 0");
  }
}

std::size_t PairHistory::push_doc(std::span<const double> x) {
  docs_.emplace_back(x.begin(), x.end());
  return docs_.size() - 1;
}

std::size_t PairHistory::intern(std::size_t session_index, std::size_t doc,
                                std::span<const double> x) {
  const auto key = doc_key(session_index, doc);
  if (auto it = slot_of_.find(key); it != slot_of_.end()) return it->second;
  const std::size_t slot = push_doc(x);
  slot_of_.emplace(key, slot);
  return slot;
}

void PairHistory::add(std::size_t session_index, const QuerySession& session,
                      const PairObservation& obs) {
  if (obs.doc_i >= session.size() || obs.doc_j >= session.size()) {
    throw ValidationError("pair references a document outside its session");
  }
  const std::size_t si = intern(session_index, obs.doc_i, session.docs[obs.doc_i]);
  const std::size_t sj = intern(session_index, obs.doc_j, session.docs[obs.doc_j]);
  entries_.push_back(Entry{si, sj, obs.y, obs.round, obs.lambda_weight});
}

void PairHistory::add(std::span<const double> x_i, std::span<const double> x_j,
                      double y, double weight, std::size_t round) {
  const std::size_t si = push_doc(x_i);
  const std::size_t sj = push_doc(x_j);
  entries_.push_back(Entry{si, sj, y, round, weight});
}

void PairHistory::truncate_oldest(std::size_t max_pairs) {
  if (entries_.size() <= max_pairs) return;
  entries_.erase(entries_.begin(),
                 entries_.begin() + static_cast<std::ptrdiff_t>(entries_.size() - max_pairs));
}

double sigmoid(double s) {
  if (s >= 0.0) return 1.0 / (1.0 + std::exp(-s));
  const double e = std::exp(s);
  return e / (1.0 + e);
}

double pair_cross_entropy(double f_ij, double y) {
  const double p = std::clamp(sigmoid(f_ij), kSigmoidClamp, 1.0 - kSigmoidClamp);
  return -(1.0 - y) * std::log(1.0 - p) - y * std::log(p);
}

double pair_loss(const NetworkParams& params, const NetworkParams& theta0,
                 const PairHistory& history, const TrainConfig& cfg) {
  return loss_pass(params, theta0, history, cfg, {}, false);
}

double pair_loss_gradient(const NetworkParams& params, const NetworkParams& theta0,
                          const PairHistory& history, const TrainConfig& cfg,
                          std::span<double> grad) {
  if (grad.size() != params.size()) throw ValidationError("gradient buffer has wrong length");
  return loss_pass(params, theta0, history, cfg, grad, true);
}

NetworkParams train(const NetworkParams& params, const NetworkParams& theta0,
                    const PairHistory& history, const TrainConfig& cfg,
                    std::vector<double>* loss_trace) {
  cfg.validate();
  NetworkParams current = cfg.warm_start ? params : theta0;
  if (cfg.steps == 0) return params;
  std::vector<double> grad(current.size());
  for (std::size_t step = 0; step < cfg.steps; ++step) {
    const double loss = pair_loss_gradient(current, theta0, history, cfg, grad);
    if (!std::isfinite(loss)) throw TrainingError(step, "non-finite loss");
    if (loss_trace) loss_trace->push_back(loss);
    kernels::axpy(-cfg.eta, grad, current.values());
  }
  if (loss_trace) {
    const double loss = pair_loss(current, theta0, history, cfg);
    if (!std::isfinite(loss)) throw TrainingError(cfg.steps, "non-finite loss");
    loss_trace->push_back(loss);
  }
  return current;
}

double lambda_weight(std::span<const std::size_t> ranking, std::span<const int> clicks,
                     std::size_t k, std::size_t position_a, std::size_t position_b) {
  if (position_a >= ranking.size() || position_b >= ranking.size()) {
    throw ValidationError("swap position outside the served list");
  }
  const double ideal = ideal_dcg_at_k(clicks, k);
  if (ideal <= 0.0) return 0.0;
  auto disc = [k](std::size_t pos) {
    return pos < k ? 1.0 / std::log2(static_cast<double>(pos) + 2.0) : 0.0;
  };
  // Binary gains: 2^c - 1 == c.
  const double ga = static_cast<double>(clicks[ranking[position_a]]);
  const double gb = static_cast<double>(clicks[ranking[position_b]]);
  return std::abs((ga - gb) * (disc(position_a) - disc(position_b))) / ideal;
}

void assign_pair_weights(PairWeighting mode, std::span<const std::size_t> ranking,
                         std::span<const int> clicks, std::size_t k,
                         std::span<PairObservation> pairs) {
  for (auto& p : pairs) {
    p.lambda_weight = mode == PairWeighting::kRankNet
                          ? 1.0
                          : lambda_weight(ranking, clicks, k, p.position_i, p.position_j);
  }
}

}  // namespace neurank
