#include "neurank/network.h"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <sstream>

#include "neurank/dataset.h"
#include "neurank/error.h"
#include "test_oracles.h"

namespace neurank {
namespace {

FeatureVector random_augmented(std::mt19937_64& rng, std::size_t half) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> raw(half);
  for (auto& v : raw) v = n(rng);
  return augment_vector(raw);
}

NetworkParams tiny_network() {
  NetworkParams p(2, 2, 2);
  auto w1 = p.layer(0);
  w1[0] = 1;  // [[1, 0], [0, 1]]
  w1[3] = 1;
  auto wl = p.layer(1);
  wl[0] = 1;
  wl[1] = -1;
  return p;
}

TEST(NetworkShape, ParameterCountFormula) {
  EXPECT_EQ(parameter_count(4, 4, 2), 20u);
  EXPECT_EQ(NetworkParams(4, 4, 2).size(), 20u);
  EXPECT_EQ(NetworkParams(4, 4, 3).size(), 4u + 16u + 16u);
  EXPECT_EQ(NetworkParams(20, 100, 2).size(), 2100u);
  EXPECT_THROW(NetworkParams(4, 4, 1), ValidationError);
}

TEST(InitParams, ZeroOutputOnAugmentedInputs) {
  std::mt19937_64 rng(1);
  for (std::size_t m : {4u, 100u}) {
    for (std::size_t depth : {2u, 3u}) {
      const NetworkParams p = init_params(10, m, depth, 77);
      NetworkWorkspace ws;
      for (int i = 0; i < 200; ++i) {
        const auto x = random_augmented(rng, 5);
        EXPECT_LE(std::abs(forward(p, x, ws)), 1e-6 * std::sqrt(static_cast<double>(m)));
      }
    }
  }
}

TEST(InitParams, BlockStructure) {
  const NetworkParams p = init_params(4, 6, 2, 3);
  const auto w1 = p.layer(0);
  // Rows 0..2 use columns 0..1 only, rows 3..5 mirror them onto columns 2..3.
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 2; ++c) {
      EXPECT_EQ(w1[r * 4 + c], w1[(r + 3) * 4 + c + 2]);
      EXPECT_EQ(w1[r * 4 + c + 2], 0.0);
      EXPECT_EQ(w1[(r + 3) * 4 + c], 0.0);
    }
  }
  const auto wl = p.layer(1);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(wl[k], -wl[k + 3]);
}

TEST(InitParams, DeterministicAndValidated) {
  EXPECT_EQ(init_params(4, 8, 2, 9), init_params(4, 8, 2, 9));
  EXPECT_NE(init_params(4, 8, 2, 9), init_params(4, 8, 2, 10));
  EXPECT_THROW(init_params(4, 5, 2, 1), ValidationError);
  EXPECT_THROW(init_params(3, 4, 2, 1), ValidationError);
}

TEST(InitParams, EntryVariances) {
  const std::size_t m = 200;
  const NetworkParams p = init_params(200, m, 2, 5);
  const auto w1 = p.layer(0);
  double ss = 0.0;
  std::size_t n = 0;
  for (std::size_t r = 0; r < m / 2; ++r) {
    for (std::size_t c = 0; c < 100; ++c, ++n) ss += w1[r * 200 + c] * w1[r * 200 + c];
  }
  EXPECT_NEAR(ss / static_cast<double>(n), 4.0 / m, 0.1 * 4.0 / m);
  double so = 0.0;
  for (double v : p.layer(1)) so += v * v;
  EXPECT_NEAR(so / static_cast<double>(m), 2.0 / m, 0.3 * 2.0 / m);
}

TEST(Forward, TinyNetworkByHand) {
  const NetworkParams p = tiny_network();
  EXPECT_NEAR(forward(p, std::vector<double>{2, 3}), -std::sqrt(2.0), 1e-15);
}

TEST(Forward, DeadReluGivesZero) {
  const NetworkParams p = tiny_network();
  EXPECT_EQ(forward(p, std::vector<double>{-1, -4}), 0.0);
}

TEST(Forward, PositiveHomogeneityOfTwoLayerNet) {
  std::mt19937_64 rng(4);
  const NetworkParams p = init_params(6, 8, 2, 1);
  NetworkParams q = p;
  std::normal_distribution<double> n(0.0, 0.3);
  for (double& v : q.values()) v += n(rng);
  const std::vector<double> x{0.3, -1.2, 0.5, 0.9, -0.1, 0.4};
  std::vector<double> cx = x;
  for (auto& v : cx) v *= 2.5;
  EXPECT_NEAR(forward(q, cx), 2.5 * forward(q, x), 1e-12);
}

TEST(Forward, DimensionMismatchThrows) {
  EXPECT_THROW(forward(tiny_network(), std::vector<double>{1, 2, 3}), ValidationError);
}

TEST(Gradient, TinyNetworkByHand) {
  const auto g = gradient(tiny_network(), std::vector<double>{2, 3});
  const double s = std::sqrt(2.0);
  // W1 rows: sqrt(2) * w_L[r] * x; W_L: sqrt(2) * relu(W1 x).
  const std::vector<double> expected{s * 2, s * 3, -s * 2, -s * 3, s * 2, s * 3};
  ASSERT_EQ(g.size(), expected.size());
  for (std::size_t k = 0; k < g.size(); ++k) EXPECT_NEAR(g[k], expected[k], 1e-14);
}

// Returns the smallest |pre-activation| so callers can stay clear of kinks.
double min_preactivation(const NetworkParams& p, std::span<const double> x) {
  double best = 1e300;
  std::vector<double> h(x.begin(), x.end());
  for (std::size_t l = 0; l + 1 < p.depth(); ++l) {
    const auto w = p.layer(l);
    std::vector<double> next(p.rows(l));
    for (std::size_t r = 0; r < p.rows(l); ++r) {
      double s = 0.0;
      for (std::size_t c = 0; c < p.cols(l); ++c) s += w[r * p.cols(l) + c] * h[c];
      best = std::min(best, std::abs(s));
      next[r] = std::max(0.0, s);
    }
    h = next;
  }
  return best;
}

TEST(Gradient, MatchesCentralDifferences) {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> n(0.0, 1.0);
  int checked = 0;
  for (std::size_t depth : {2u, 3u}) {
    for (int trial = 0; checked < 100 * static_cast<int>(depth - 1); ++trial) {
      NetworkParams p = init_params(6, 8, depth, static_cast<std::uint64_t>(trial));
      for (double& v : p.values()) v += 0.5 * n(rng);
      std::vector<double> x(6);
      for (auto& v : x) v = n(rng);
      if (min_preactivation(p, x) < 1e-3) continue;
      const auto g = gradient(p, x);
      const auto fd = testing::central_differences(
          {p.values().begin(), p.values().end()},
          [&](std::span<const double> theta) {
            NetworkParams q = p;
            std::copy(theta.begin(), theta.end(), q.values().begin());
            return forward(q, x);
          },
          1e-5);
      EXPECT_LE(testing::relative_error(g, fd), 1e-4);
      ++checked;
    }
  }
}

TEST(Gradient, EulerIdentityForTwoLayers) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    NetworkParams p = init_params(6, 8, 2, static_cast<std::uint64_t>(i));
    for (double& v : p.values()) v += 0.3 * n(rng);
    std::vector<double> x(6);
    for (auto& v : x) v = n(rng);
    const auto g = gradient(p, x);
    double inner = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) inner += g[k] * p.values()[k];
    EXPECT_NEAR(inner, 2.0 * forward(p, x), 1e-10);
  }
}

TEST(Gradient, AccumulateAddsScaledGradient) {
  const NetworkParams p = init_params(4, 6, 3, 12);
  const std::vector<double> x{0.1, -0.4, 0.1, -0.4};
  const auto g = gradient(p, x);
  std::vector<double> acc(p.size(), 1.0);
  NetworkWorkspace ws;
  accumulate_gradient(p, x, -2.0, acc, ws);
  for (std::size_t k = 0; k < acc.size(); ++k) EXPECT_NEAR(acc[k], 1.0 - 2.0 * g[k], 1e-14);
}

TEST(Checkpoint, RoundTripIsBitExact) {
  NetworkParams p = init_params(6, 10, 3, 21);
  p.values()[3] = -0.0;
  p.values()[4] = 1e-310;
  std::stringstream buf;
  save_checkpoint(p, buf);
  const std::string blob = buf.str();
  EXPECT_EQ(blob.substr(0, 7), "NRKCKPT");
  EXPECT_EQ(blob.size(), 8u + 4u + 24u + 8u * p.size());
  const NetworkParams back = load_checkpoint(buf);
  ASSERT_TRUE(back.same_shape(p));
  EXPECT_EQ(std::memcmp(back.values().data(), p.values().data(), 8 * p.size()), 0);
}

TEST(Checkpoint, LittleEndianHeader) {
  std::stringstream buf;
  save_checkpoint(NetworkParams(4, 2, 2), buf);
  const std::string blob = buf.str();
  EXPECT_EQ(static_cast<unsigned char>(blob[8]), 1u);   // version
  EXPECT_EQ(static_cast<unsigned char>(blob[12]), 4u);  // d
  EXPECT_EQ(static_cast<unsigned char>(blob[20]), 2u);  // m
  EXPECT_EQ(static_cast<unsigned char>(blob[28]), 2u);  // depth
}

TEST(Checkpoint, RejectsGarbage) {
  std::stringstream bad("not a checkpoint at all");
  EXPECT_THROW(load_checkpoint(bad), ParseError);
  std::stringstream buf;
  save_checkpoint(NetworkParams(4, 2, 2), buf);
  std::string blob = buf.str();
  blob.resize(blob.size() - 3);
  std::stringstream truncated(blob);
  EXPECT_THROW(load_checkpoint(truncated), ParseError);
}

}  // namespace
}  // namespace neurank
