#pragma once

// Dense feed-forward network with ReLU hidden layers and exact backprop.
// Parameters live in one flat vector: for each layer W[in x out] row-major,
// then b[out]. Batches are row-major [batch x width].

#include <cstddef>
#include <random>
#include <span>
#include <vector>

namespace usvauv::rl {

enum class OutputActivation { Linear, Tanh };

class Mlp {
 public:
  struct Cache {
    int batch = 0;
    // acts[0] is the input, acts[l] the post-activation output of layer l.
    std::vector<std::vector<double>> acts;
  };

  Mlp() = default;
  Mlp(std::vector<int> widths, OutputActivation out);

  const std::vector<int>& widths() const { return widths_; }
  OutputActivation output_activation() const { return out_; }
  int in_dim() const { return widths_.front(); }
  int out_dim() const { return widths_.back(); }
  int n_layers() const { return static_cast<int>(widths_.size()) - 1; }
  std::size_t n_params() const { return params_.size(); }

  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }

  // Uniform in +-1/sqrt(fan_in), weights and biases alike.
  void init_uniform(std::mt19937_64& rng);

  // x is [batch x in_dim]; result is cache.acts.back().
  const std::vector<double>& forward(const double* x, int batch, Cache& cache) const;
  std::vector<double> forward(std::span<const double> x) const;

  // dy is dL/d(output) [batch x out_dim]. Adds dL/dparams into grad (size
  // n_params) when non-null and writes dL/dx into dx when non-null.
  void backward(const Cache& cache, const double* dy, double* grad, double* dx) const;

  bool operator==(const Mlp&) const = default;

 private:
  std::size_t weight_offset(int layer) const { return offsets_[static_cast<std::size_t>(layer)]; }
  std::size_t bias_offset(int layer) const {
    return offsets_[static_cast<std::size_t>(layer)] +
           static_cast<std::size_t>(widths_[static_cast<std::size_t>(layer)]) *
               static_cast<std::size_t>(widths_[static_cast<std::size_t>(layer) + 1]);
  }

  std::vector<int> widths_;
  OutputActivation out_ = OutputActivation::Linear;
  std::vector<std::size_t> offsets_;
  std::vector<double> params_;
};

// target = tau * online + (1 - tau) * target. Throws std::invalid_argument on
// shape mismatch.
void soft_update(std::span<double> target, std::span<const double> online, double tau);

}  // namespace usvauv::rl
