#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace usvauv::de {

struct Options {
  int pop_size = 30;
  int generations = 24;
  double f_min = 0.5;
  double f_max = 1.0;
  double cr = 0.9;
  std::uint64_t seed = 0;
};

struct Result {
  std::vector<double> best;
  double value = 0.0;
  long evaluations = 0;
  // history[0] is the initial population's best, history[g] after generation g.
  std::vector<double> history;
};

using Objective = std::function<double(std::span<const double>)>;

// Maximizes `f` over the box [lo, hi] with DE rand/1/bin. Trials of a whole
// generation are built first, then evaluated, then selected (trial replaces
// target when >= target). Out-of-box mutant components are resampled
// uniformly inside the box. Ties for the best are broken by lowest index.
Result maximize(std::span<const double> lo, std::span<const double> hi, const Objective& f,
                const Options& opt);

}  // namespace usvauv::de
