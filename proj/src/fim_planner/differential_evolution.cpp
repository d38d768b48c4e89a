#include <algorithm>
#include <numeric>
#include <random>

#include "usvauv/differential_evolution.hpp"
#include "usvauv/errors.hpp"

namespace usvauv::de {
namespace {

std::size_t argmax(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

}  // namespace

Result maximize(std::span<const double> lo, std::span<const double> hi, const Objective& f,
                const Options& opt) {
  if (lo.size() != hi.size() || lo.empty()) throw ConfigError("DE bounds dimension mismatch");
  if (opt.pop_size < 4) throw ConfigError("DE population must hold at least 4 individuals");
  const std::size_t dim = lo.size();
  const auto np = static_cast<std::size_t>(opt.pop_size);

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Latin hypercube: one sample per stratum per dimension.
  std::vector<std::vector<double>> pop(np, std::vector<double>(dim));
  std::vector<std::size_t> perm(np);
  for (std::size_t d = 0; d < dim; ++d) {
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t i = 0; i < np; ++i) {
      const double frac = (static_cast<double>(perm[i]) + unit(rng)) / static_cast<double>(np);
      pop[i][d] = lo[d] + frac * (hi[d] - lo[d]);
    }
  }

  Result res;
  std::vector<double> fit(np);
  for (std::size_t i = 0; i < np; ++i) fit[i] = f(pop[i]);
  res.evaluations = static_cast<long>(np);
  res.history.push_back(fit[argmax(fit)]);

  std::vector<std::vector<double>> trial(np, std::vector<double>(dim));
  std::vector<double> trial_fit(np);
  std::uniform_int_distribution<std::size_t> pick(0, np - 1);
  std::uniform_int_distribution<std::size_t> pick_dim(0, dim - 1);

  for (int gen = 0; gen < opt.generations; ++gen) {
    const double fw = opt.f_min + unit(rng) * (opt.f_max - opt.f_min);
    for (std::size_t i = 0; i < np; ++i) {
      std::size_t r0, r1, r2;
      do r0 = pick(rng); while (r0 == i);
      do r1 = pick(rng); while (r1 == i || r1 == r0);
      do r2 = pick(rng); while (r2 == i || r2 == r0 || r2 == r1);
      const std::size_t jrand = pick_dim(rng);
      for (std::size_t d = 0; d < dim; ++d) {
        const double u = unit(rng);
        if (u < opt.cr || d == jrand) {
          double m = pop[r0][d] + fw * (pop[r1][d] - pop[r2][d]);
          const double resample = unit(rng);
          if (m < lo[d] || m > hi[d]) m = lo[d] + resample * (hi[d] - lo[d]);
          trial[i][d] = m;
        } else {
          trial[i][d] = pop[i][d];
        }
      }
    }
    // Candidate evaluations are independent of each other.
    for (std::size_t i = 0; i < np; ++i) trial_fit[i] = f(trial[i]);
    res.evaluations += static_cast<long>(np);
    for (std::size_t i = 0; i < np; ++i)
      if (trial_fit[i] >= fit[i]) {
        pop[i] = trial[i];
        fit[i] = trial_fit[i];
      }
    res.history.push_back(fit[argmax(fit)]);
  }

  const std::size_t b = argmax(fit);
  res.best = pop[b];
  res.value = fit[b];
  return res;
}

}  // namespace usvauv::de
