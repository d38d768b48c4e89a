#include <cmath>
#include <numeric>
#include <stdexcept>

#include "usvauv/rl/convergence.hpp"

namespace usvauv::rl {

ConvergenceDetector::ConvergenceDetector(int n_metrics, ConvergenceRule rule)
    : n_(n_metrics), rule_(rule), hist_(static_cast<std::size_t>(n_metrics)) {
  if (n_metrics < 1 || rule.window < 1 || rule.run_length < 1 || !(rule.slope_threshold > 0.0))
    throw std::invalid_argument("invalid convergence rule");
}

void ConvergenceDetector::push(std::span<const double> values) {
  if (static_cast<int>(values.size()) != n_) throw std::invalid_argument("metric count mismatch");
  ++episodes_;
  for (std::size_t i = 0; i < values.size(); ++i) {
    hist_[i].push_back(values[i]);
    if (static_cast<int>(hist_[i].size()) > rule_.window) hist_[i].pop_front();
  }
  if (static_cast<int>(hist_[0].size()) < rule_.window) return;

  std::vector<double> ma(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    ma[i] = std::accumulate(hist_[i].begin(), hist_[i].end(), 0.0) / rule_.window;
  if (!ma_.empty()) {
    slopes_.resize(values.size());
    bool flat = true;
    for (std::size_t i = 0; i < values.size(); ++i) {
      slopes_[i] = ma[i] - ma_[i];
      flat = flat && std::abs(slopes_[i]) < rule_.slope_threshold;
    }
    run_ = flat ? run_ + 1 : 0;
    if (run_ >= rule_.run_length && converged_at_ < 0) converged_at_ = episodes_ - 1;
  }
  ma_ = std::move(ma);
}

}  // namespace usvauv::rl
