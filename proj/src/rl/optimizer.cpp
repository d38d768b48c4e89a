#include <cmath>
#include <stdexcept>
#include <string>

#include "usvauv/errors.hpp"
#include "usvauv/kernels/kernels.hpp"
#include "usvauv/rl/optimizer.hpp"

namespace usvauv::rl {

OptimizerKind parse_optimizer(std::string_view name) {
  if (name == "sgd") return OptimizerKind::Sgd;
  if (name == "adam") return OptimizerKind::Adam;
  throw ConfigError("unknown optimizer '" + std::string(name) + "' (expected sgd|adam)");
}

std::string_view optimizer_name(OptimizerKind kind) {
  return kind == OptimizerKind::Adam ? "adam" : "sgd";
}

Optimizer::Optimizer(OptimizerKind kind, std::size_t n, double lr, AdamParams adam)
    : kind_(kind), lr_(lr), adam_(adam) {
  if (kind_ == OptimizerKind::Adam) {
    m1_.assign(n, 0.0);
    m2_.assign(n, 0.0);
  }
}

void Optimizer::step(std::span<double> params, std::span<const double> grad) {
  if (params.size() != grad.size()) throw std::invalid_argument("optimizer shape mismatch");
  ++t_;
  const auto& k = kernels::active();
  if (kind_ == OptimizerKind::Sgd) {
    k.axpy(-lr_, grad.data(), params.data(), params.size());
    return;
  }
  if (m1_.size() != params.size()) throw std::invalid_argument("optimizer shape mismatch");
  const double bc1 = 1.0 - std::pow(adam_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(adam_.beta2, static_cast<double>(t_));
  k.adam_update(params.data(), grad.data(), m1_.data(), m2_.data(), params.size(), lr_,
                adam_.beta1, adam_.beta2, bc1, bc2, adam_.eps);
}

}  // namespace usvauv::rl
