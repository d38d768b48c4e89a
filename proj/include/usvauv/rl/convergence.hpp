#pragma once

#include <deque>
#include <span>
#include <vector>

namespace usvauv::rl {

struct ConvergenceRule {
  int window = 25;
  double slope_threshold = 0.2;
  int run_length = 50;
};

// Tracks window-episode moving averages of several metrics. The slope of a
// moving average is its change from one episode to the next (units per
// episode). An episode is flat when every metric's slope magnitude is below the
// threshold; the detector fires once run_length consecutive episodes are flat
// and stays fired.
class ConvergenceDetector {
 public:
  ConvergenceDetector(int n_metrics, ConvergenceRule rule = {});

  void push(std::span<const double> values);

  bool converged() const { return converged_at_ >= 0; }
  // 0-based episode at which the run reached run_length; -1 if never.
  int converged_at() const { return converged_at_; }
  int flat_run() const { return run_; }
  int episodes() const { return episodes_; }
  // Empty until window episodes have been pushed.
  const std::vector<double>& moving_average() const { return ma_; }
  // Empty until window + 1 episodes have been pushed.
  const std::vector<double>& slopes() const { return slopes_; }
  const ConvergenceRule& rule() const { return rule_; }

 private:
  int n_;
  ConvergenceRule rule_;
  std::vector<std::deque<double>> hist_;
  std::vector<double> ma_;
  std::vector<double> slopes_;
  int episodes_ = 0;
  int run_ = 0;
  int converged_at_ = -1;
};

}  // namespace usvauv::rl
