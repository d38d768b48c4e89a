#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace usvauv::rl {

enum class OptimizerKind { Sgd, Adam };

OptimizerKind parse_optimizer(std::string_view name);
std::string_view optimizer_name(OptimizerKind kind);

struct AdamParams {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Gradient-descent step on a flat parameter vector.
class Optimizer {
 public:
  Optimizer() = default;
  Optimizer(OptimizerKind kind, std::size_t n, double lr, AdamParams adam = {});

  void step(std::span<double> params, std::span<const double> grad);

  OptimizerKind kind() const { return kind_; }
  double lr() const { return lr_; }
  std::int64_t steps() const { return t_; }

 private:
  OptimizerKind kind_ = OptimizerKind::Sgd;
  double lr_ = 0.0;
  AdamParams adam_;
  std::int64_t t_ = 0;
  std::vector<double> m1_;
  std::vector<double> m2_;
};

}  // namespace usvauv::rl
