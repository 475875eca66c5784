#pragma once

// Fully connected ReLU scorer
//
//   f(x; theta) = sqrt(m) * W_L relu(W_{L-1} relu(... relu(W_1 x)))
//
// with W_1 : m x d, W_2..W_{L-1} : m x m and W_L : 1 x m. All weights live in
// one contiguous vector laid out W_1, ..., W_L, each row-major, so the tangent
// feature g(x; theta) = grad_theta f shares that layout.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace neurank {

using TangentVector = std::vector<double>;

std::size_t parameter_count(std::size_t d, std::size_t m, std::size_t depth);

class NetworkParams {
 public:
  NetworkParams() = default;
  // Zero-initialized. Throws ValidationError unless d, m >= 1 and depth >= 2.
  NetworkParams(std::size_t d, std::size_t m, std::size_t depth);

  std::size_t input_dim() const noexcept { return d_; }
  std::size_t width() const noexcept { return m_; }
  std::size_t depth() const noexcept { return depth_; }
  std::size_t size() const noexcept { return theta_.size(); }

  // Layer l in [0, depth): rows x cols, row-major.
  std::size_t rows(std::size_t l) const noexcept;
  std::size_t cols(std::size_t l) const noexcept;
  std::size_t offset(std::size_t l) const noexcept { return offsets_[l]; }
  std::span<double> layer(std::size_t l);
  std::span<const double> layer(std::size_t l) const;

  std::span<double> values() noexcept { return theta_; }
  std::span<const double> values() const noexcept { return theta_; }

  bool same_shape(const NetworkParams& other) const noexcept {
    return d_ == other.d_ && m_ == other.m_ && depth_ == other.depth_;
  }
  bool operator==(const NetworkParams&) const = default;

 private:
  std::size_t d_ = 0;
  std::size_t m_ = 0;
  std::size_t depth_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<double> theta_;
};

// Symmetric initialization: every hidden layer is blockdiag(W, W) with
// W ~ N(0, 4/m) entrywise, the output layer is (w, -w) with w ~ N(0, 2/m).
// On inputs whose halves coincide the output is zero. Requires even d and m.
NetworkParams init_params(std::size_t d, std::size_t m, std::size_t depth,
                          std::uint64_t seed);

// Scratch space for forward/backward passes. Reuse across calls to avoid
// reallocation; not shareable between threads.
class NetworkWorkspace {
 public:
  void prepare(const NetworkParams& params);

 private:
  friend double forward(const NetworkParams&, std::span<const double>, NetworkWorkspace&);
  friend double accumulate_gradient(const NetworkParams&, std::span<const double>,
                                    double, std::span<double>, NetworkWorkspace&);
  // activations_[0] is the input copy; activations_[l] the post-ReLU output of layer l.
  std::vector<std::vector<double>> activations_;
  std::vector<double> delta_;
  std::vector<double> delta_prev_;
};

double forward(const NetworkParams& params, std::span<const double> x,
               NetworkWorkspace& ws);
double forward(const NetworkParams& params, std::span<const double> x);

// out += coef * g(x; theta). Returns f(x; theta). ReLU'(0) is taken as 0.
double accumulate_gradient(const NetworkParams& params, std::span<const double> x,
                           double coef, std::span<double> out,
                           NetworkWorkspace& ws);

TangentVector gradient(const NetworkParams& params, std::span<const double> x,
                       NetworkWorkspace& ws);
TangentVector gradient(const NetworkParams& params, std::span<const double> x);

// Checkpoint blob: "NRKCKPT\0", u32 version, u64 d, m, depth, then every layer
// row-major as IEEE-754 doubles. All integers and reals little-endian.
void save_checkpoint(const NetworkParams& params, std::ostream& out);
NetworkParams load_checkpoint(std::istream& in);

}  // namespace neurank
