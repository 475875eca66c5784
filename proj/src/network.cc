#include "neurank/network.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <random>
#include <string>

#include "neurank/error.h"
#include "neurank/kernels.h"
#include "neurank/random.h"

namespace neurank {
namespace {

constexpr std::array<char, 8> kMagic{'N', 'R', 'K', 'C', 'K', 'P', 'T', '\0'};
constexpr std::uint32_t kCheckpointVersion = 1;

void check_input(const NetworkParams& params, std::span<const double> x) {
  if (x.size() != params.input_dim()) {
    throw ValidationError("feature dimension " + std::to_string(x.size()) +
                          " does not match network input " +
                          std::to_string(params.input_dim()));
  }
}

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> b;
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b.data(), b.size());
}

std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), b.size())) {
    throw ParseError(0, "truncated checkpoint");
  }
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace

std::size_t parameter_count(std::size_t d, std::size_t m, std::size_t depth) {
  return m + m * d + m * m * (depth - 2);
}

NetworkParams::NetworkParams(std::size_t d, std::size_t m, std::size_t depth)
    : d_(d), m_(m), depth_(depth) {
  if (d == 0 || m == 0 || depth < 2) {
    throw ValidationError("network needs d >= 1, m >= 1 and depth >= 2");
  }
  offsets_.resize(depth);
  std::size_t off = 0;
  for (std::size_t l = 0; l < depth; ++l) {
    offsets_[l] = off;
    off += rows(l) * cols(l);
  }
  theta_.assign(off, 0.0);
}

std::size_t NetworkParams::rows(std::size_t l) const noexcept {
  return l + 1 == depth_ ? 1 : m_;
}

std::size_t NetworkParams::cols(std::size_t l) const noexcept {
  return l == 0 ? d_ : m_;
}

std::span<double> NetworkParams::layer(std::size_t l) {
  return std::span<double>(theta_).subspan(offsets_[l], rows(l) * cols(l));
}

std::span<const double> NetworkParams::layer(std::size_t l) const {
  return std::span<const double>(theta_).subspan(offsets_[l], rows(l) * cols(l));
}

NetworkParams init_params(std::size_t d, std::size_t m, std::size_t depth,
                          std::uint64_t seed) {
  if (m % 2 != 0 || d % 2 != 0) {
    throw ValidationError("symmetric initialization needs even d and m (got d=" +
                          std::to_string(d) + ", m=" + std::to_string(m) + ")");
  }
  NetworkParams params(d, m, depth);
  Rng rng(seed);
  const double md = static_cast<double>(m);
  std::normal_distribution<double> hidden(0.0, std::sqrt(4.0 / md));
  std::normal_distribution<double> output(0.0, std::sqrt(2.0 / md));

  const std::size_t hm = m / 2;
  for (std::size_t l = 0; l + 1 < depth; ++l) {
    const std::size_t cols = params.cols(l);
    const std::size_t hc = cols / 2;
    auto w = params.layer(l);
    for (std::size_t r = 0; r < hm; ++r) {
      for (std::size_t c = 0; c < hc; ++c) {
        const double v = hidden(rng);
        w[r * cols + c] = v;
        w[(r + hm) * cols + (c + hc)] = v;
      }
    }
  }
  auto out = params.layer(depth - 1);
  for (std::size_t k = 0; k < hm; ++k) {
    const double v = output(rng);
    out[k] = v;
    out[k + hm] = -v;
  }
  return params;
}

void NetworkWorkspace::prepare(const NetworkParams& params) {
  const std::size_t depth = params.depth();
  activations_.resize(depth);
  activations_[0].resize(params.input_dim());
  for (std::size_t l = 1; l < depth; ++l) activations_[l].resize(params.width());
  delta_.resize(params.width());
  delta_prev_.resize(params.width());
}

double forward(const NetworkParams& params, std::span<const double> x,
               NetworkWorkspace& ws) {
  check_input(params, x);
  ws.prepare(params);
  const auto& k = kernels::active();
  std::copy(x.begin(), x.end(), ws.activations_[0].begin());
  const std::size_t depth = params.depth();
  for (std::size_t l = 0; l + 1 < depth; ++l) {
    const auto w = params.layer(l);
    const std::size_t cols = params.cols(l);
    const double* in = ws.activations_[l].data();
    auto& out = ws.activations_[l + 1];
    for (std::size_t r = 0; r < params.rows(l); ++r) {
      out[r] = std::max(0.0, k.dot(w.data() + r * cols, in, cols));
    }
  }
  const auto w_out = params.layer(depth - 1);
  return std::sqrt(static_cast<double>(params.width())) *
         k.dot(w_out.data(), ws.activations_[depth - 1].data(), params.width());
}

double forward(const NetworkParams& params, std::span<const double> x) {
  NetworkWorkspace ws;
  return forward(params, x, ws);
}

double accumulate_gradient(const NetworkParams& params, std::span<const double> x,
                           double coef, std::span<double> out,
                           NetworkWorkspace& ws) {
  const double f = forward(params, x, ws);
  if (out.size() != params.size()) {
    throw ValidationError("gradient buffer has wrong length");
  }
  const auto& k = kernels::active();
  const std::size_t depth = params.depth();
  const std::size_t m = params.width();
  const double scale = std::sqrt(static_cast<double>(m));

  // Output layer: df/dW_L = sqrt(m) * h_{L-1}.
  k.axpy(coef * scale, ws.activations_[depth - 1].data(),
         out.data() + params.offset(depth - 1), m);

  // delta = df/d(pre-activation of layer depth-2), masked by ReLU'.
  const auto w_out = params.layer(depth - 1);
  for (std::size_t r = 0; r < m; ++r) {
    ws.delta_[r] = ws.activations_[depth - 1][r] > 0.0 ? scale * w_out[r] : 0.0;
  }

  for (std::size_t l = depth - 1; l-- > 0;) {
    const std::size_t cols = params.cols(l);
    const double* in = ws.activations_[l].data();
    double* g = out.data() + params.offset(l);
    for (std::size_t r = 0; r < m; ++r) {
      if (ws.delta_[r] != 0.0) k.axpy(coef * ws.delta_[r], in, g + r * cols, cols);
    }
    if (l == 0) break;
    // Back through W_l into the previous hidden layer.
    const auto w = params.layer(l);
    std::fill(ws.delta_prev_.begin(), ws.delta_prev_.end(), 0.0);
    for (std::size_t r = 0; r < m; ++r) {
      if (ws.delta_[r] != 0.0) {
        k.axpy(ws.delta_[r], w.data() + r * cols, ws.delta_prev_.data(), cols);
      }
    }
    for (std::size_t c = 0; c < m; ++c) {
      if (!(ws.activations_[l][c] > 0.0)) ws.delta_prev_[c] = 0.0;
    }
    std::swap(ws.delta_, ws.delta_prev_);
  }
  return f;
}

TangentVector gradient(const NetworkParams& params, std::span<const double> x,
                       NetworkWorkspace& ws) {
  TangentVector g(params.size(), 0.0);
  accumulate_gradient(params, x, 1.0, g, ws);
  return g;
}

TangentVector gradient(const NetworkParams& params, std::span<const double> x) {
  NetworkWorkspace ws;
  return gradient(params, x, ws);
}

void save_checkpoint(const NetworkParams& params, std::ostream& out) {
  out.write(kMagic.data(), kMagic.size());
  const std::uint32_t v = kCheckpointVersion;
  for (int i = 0; i < 4; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xff));
  put_u64(out, params.input_dim());
  put_u64(out, params.width());
  put_u64(out, params.depth());
  for (double x : params.values()) put_u64(out, std::bit_cast<std::uint64_t>(x));
}

NetworkParams load_checkpoint(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw ParseError(0, "not a network checkpoint (bad magic)");
  }
  std::array<unsigned char, 4> vb{};
  if (!in.read(reinterpret_cast<char*>(vb.data()), vb.size())) {
    throw ParseError(0, "truncated checkpoint");
  }
  const std::uint32_t version = vb[0] | (vb[1] << 8) | (vb[2] << 16) |
                                (static_cast<std::uint32_t>(vb[3]) << 24);
  if (version != kCheckpointVersion) {
    throw ParseError(0, "unsupported checkpoint version " + std::to_string(version));
  }
  const auto d = get_u64(in);
  const auto m = get_u64(in);
  const auto depth = get_u64(in);
  if (d == 0 || m == 0 || depth < 2 || d > (1u << 24) || m > (1u << 16) || depth > 64) {
    throw ParseError(0, "implausible checkpoint shape");
  }
  NetworkParams params(d, m, depth);
  for (double& x : params.values()) x = std::bit_cast<double>(get_u64(in));
  return params;
}

}  // namespace neurank
