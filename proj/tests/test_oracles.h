#pragma once

// Independent reference computations used as test oracles. None of these
// call into the library paths they check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <vector>

namespace neurank::testing {

// DCG by explicit position loop with pow().
inline double oracle_dcg(std::span<const std::size_t> ranking, std::span<const int> labels,
                         std::size_t k) {
  double s = 0.0;
  for (std::size_t r = 0; r < ranking.size() && r < k; ++r) {
    s += (std::pow(2.0, labels[ranking[r]]) - 1.0) / std::log2(static_cast<double>(r) + 2.0);
  }
  return s;
}

// NDCG where the ideal DCG is the maximum over all permutations (V <= 8).
inline double oracle_ndcg(std::span<const std::size_t> ranking, std::span<const int> labels,
                          std::size_t k) {
  std::vector<std::size_t> perm(labels.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = 0.0;
  do {
    best = std::max(best, oracle_dcg(perm, labels, k));
  } while (std::next_permutation(perm.begin(), perm.end()));
  if (best == 0.0) return 0.0;
  return oracle_dcg(ranking, labels, k) / best;
}

// Counts pairs (a, b) over all document pairs with label_a > label_b and
// a served after b.
inline std::uint64_t oracle_kendall(std::span<const std::size_t> ranking,
                                    std::span<const int> labels) {
  std::vector<std::size_t> pos(ranking.size());
  for (std::size_t r = 0; r < ranking.size(); ++r) pos[ranking[r]] = r;
  std::uint64_t n = 0;
  for (std::size_t a = 0; a < labels.size(); ++a) {
    for (std::size_t b = 0; b < labels.size(); ++b) {
      if (labels[a] > labels[b] && pos[a] > pos[b]) ++n;
    }
  }
  return n;
}

// Central differences of a scalar function of a parameter vector.
inline std::vector<double> central_differences(
    std::vector<double> theta, const std::function<double(std::span<const double>)>& f,
    double h) {
  std::vector<double> g(theta.size());
  for (std::size_t k = 0; k < theta.size(); ++k) {
    const double keep = theta[k];
    theta[k] = keep + h;
    const double up = f(theta);
    theta[k] = keep - h;
    const double down = f(theta);
    theta[k] = keep;
    g[k] = (up - down) / (2.0 * h);
  }
  return g;
}

inline double relative_error(std::span<const double> a, std::span<const double> b) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    num += (a[k] - b[k]) * (a[k] - b[k]);
    den += b[k] * b[k];
  }
  return std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
}

// Gauss-Jordan inverse of a dense n x n row-major matrix.
inline std::vector<double> oracle_inverse(std::vector<double> a, std::size_t n) {
  std::vector<double> inv(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) inv[i * n + i] = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
    }
    for (std::size_t j = 0; j < n; ++j) {
      std::swap(a[c * n + j], a[piv * n + j]);
      std::swap(inv[c * n + j], inv[piv * n + j]);
    }
    const double d = a[c * n + c];
    for (std::size_t j = 0; j < n; ++j) {
      a[c * n + j] /= d;
      inv[c * n + j] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r * n + c];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        a[r * n + j] -= f * a[c * n + j];
        inv[r * n + j] -= f * inv[c * n + j];
      }
    }
  }
  return inv;
}

// sqrt(u^T M u) for dense row-major M.
inline double oracle_quadratic_norm(std::span<const double> u, std::span<const double> m) {
  const std::size_t n = u.size();
  double s = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) s += u[r] * m[r * n + c] * u[c];
  }
  return std::sqrt(s);
}

}  // namespace neurank::testing
