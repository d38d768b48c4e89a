#pragma once

#include <span>
#include <string>
#include <vector>

namespace usvauv::harness {

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation; 0 for n < 2
  int n = 0;
};

MeanStd mean_std(std::span<const double> v);
// "11.20±1.93"-style rendering.
std::string format_mean_std(const MeanStd& m, int decimals = 2);

// Ranks with ties sharing their average rank (1-based).
std::vector<double> average_ranks(std::span<const double> v);
// Pearson correlation of average ranks; 0 when either side is constant.
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace usvauv::harness
