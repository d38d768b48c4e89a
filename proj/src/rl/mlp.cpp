#include <cmath>
#include <stdexcept>
#include <string>

#include "usvauv/kernels/kernels.hpp"
#include "usvauv/rl/mlp.hpp"

namespace usvauv::rl {

Mlp::Mlp(std::vector<int> widths, OutputActivation out) : widths_(std::move(widths)), out_(out) {
  if (widths_.size() < 2) throw std::invalid_argument("network needs at least one layer");
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < widths_.size(); ++l) {
    if (widths_[l] < 1 || widths_[l + 1] < 1) throw std::invalid_argument("layer width must be >= 1");
    offsets_.push_back(total);
    total += static_cast<std::size_t>(widths_[l]) * static_cast<std::size_t>(widths_[l + 1]) +
             static_cast<std::size_t>(widths_[l + 1]);
  }
  params_.assign(total, 0.0);
}

void Mlp::init_uniform(std::mt19937_64& rng) {
  for (int l = 0; l < n_layers(); ++l) {
    const auto fan_in = static_cast<std::size_t>(widths_[static_cast<std::size_t>(l)]);
    const auto fan_out = static_cast<std::size_t>(widths_[static_cast<std::size_t>(l) + 1]);
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::uniform_real_distribution<double> u(-bound, bound);
    const std::size_t begin = weight_offset(l);
    for (std::size_t i = 0; i < fan_in * fan_out + fan_out; ++i) params_[begin + i] = u(rng);
  }
}

const std::vector<double>& Mlp::forward(const double* x, int batch, Cache& cache) const {
  const auto& k = kernels::active();
  const auto b = static_cast<std::size_t>(batch);
  cache.batch = batch;
  cache.acts.resize(widths_.size());
  cache.acts[0].assign(x, x + b * static_cast<std::size_t>(in_dim()));
  for (int l = 0; l < n_layers(); ++l) {
    const auto in = static_cast<std::size_t>(widths_[static_cast<std::size_t>(l)]);
    const auto out = static_cast<std::size_t>(widths_[static_cast<std::size_t>(l) + 1]);
    auto& y = cache.acts[static_cast<std::size_t>(l) + 1];
    y.resize(b * out);
    const double* bias = params_.data() + bias_offset(l);
    for (std::size_t r = 0; r < b; ++r)
      std::copy(bias, bias + out, y.begin() + static_cast<long>(r * out));
    k.gemm_nn_acc(cache.acts[static_cast<std::size_t>(l)].data(), params_.data() + weight_offset(l),
                  y.data(), b, in, out);
    if (l + 1 < n_layers()) {
      k.relu(y.data(), y.data(), y.size());
    } else if (out_ == OutputActivation::Tanh) {
      for (double& v : y) v = std::tanh(v);
    }
  }
  return cache.acts.back();
}

std::vector<double> Mlp::forward(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != in_dim())
    throw std::invalid_argument("input width " + std::to_string(x.size()) + " != " +
                                std::to_string(in_dim()));
  Cache c;
  return forward(x.data(), 1, c);
}

void Mlp::backward(const Cache& cache, const double* dy, double* grad, double* dx) const {
  const auto& k = kernels::active();
  const auto b = static_cast<std::size_t>(cache.batch);
  std::vector<double> delta(dy, dy + b * static_cast<std::size_t>(out_dim()));
  if (out_ == OutputActivation::Tanh) {
    const auto& y = cache.acts.back();
    for (std::size_t i = 0; i < delta.size(); ++i) delta[i] *= 1.0 - y[i] * y[i];
  }
  std::vector<double> prev;
  for (int l = n_layers() - 1; l >= 0; --l) {
    const auto in = static_cast<std::size_t>(widths_[static_cast<std::size_t>(l)]);
    const auto out = static_cast<std::size_t>(widths_[static_cast<std::size_t>(l) + 1]);
    const auto& x = cache.acts[static_cast<std::size_t>(l)];
    if (grad) {
      k.gemm_tn_acc(x.data(), delta.data(), grad + weight_offset(l), in, b, out);
      double* gb = grad + bias_offset(l);
      for (std::size_t r = 0; r < b; ++r) k.axpy(1.0, delta.data() + r * out, gb, out);
    }
    if (l == 0 && !dx) break;
    prev.assign(b * in, 0.0);
    k.gemm_nt_acc(delta.data(), params_.data() + weight_offset(l), prev.data(), b, out, in);
    if (l == 0) {
      std::copy(prev.begin(), prev.end(), dx);
      break;
    }
    k.relu_backward(x.data(), prev.data(), prev.size());
    delta.swap(prev);
  }
}

void soft_update(std::span<double> target, std::span<const double> online, double tau) {
  if (target.size() != online.size()) throw std::invalid_argument("soft_update shape mismatch");
  kernels::lerp(tau, online, target);
}

}  // namespace usvauv::rl
