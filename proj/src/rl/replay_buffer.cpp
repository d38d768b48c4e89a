#include <algorithm>
#include <stdexcept>

#include "usvauv/rl/replay_buffer.hpp"

namespace usvauv::rl {

ReplayBuffer::ReplayBuffer(std::size_t capacity, int state_dim, int action_dim)
    : capacity_(capacity), sd_(state_dim), ad_(action_dim) {
  if (capacity == 0 || state_dim < 1 || action_dim < 1)
    throw std::invalid_argument("replay buffer needs positive capacity and widths");
  const auto s = static_cast<std::size_t>(sd_), a = static_cast<std::size_t>(ad_);
  s_.resize(capacity * s);
  a_.resize(capacity * a);
  r_.resize(capacity);
  s_next_.resize(capacity * s);
  done_.resize(capacity);
}

void ReplayBuffer::add(std::span<const double> s, std::span<const double> a, double r,
                       std::span<const double> s_next, bool done) {
  const auto sd = static_cast<std::size_t>(sd_), ad = static_cast<std::size_t>(ad_);
  if (s.size() != sd || s_next.size() != sd || a.size() != ad)
    throw std::invalid_argument("transition width mismatch");
  std::copy(s.begin(), s.end(), s_.begin() + static_cast<long>(cursor_ * sd));
  std::copy(a.begin(), a.end(), a_.begin() + static_cast<long>(cursor_ * ad));
  std::copy(s_next.begin(), s_next.end(), s_next_.begin() + static_cast<long>(cursor_ * sd));
  r_[cursor_] = r;
  done_[cursor_] = done ? 1.0 : 0.0;
  cursor_ = (cursor_ + 1) % capacity_;
  size_ = std::min(size_ + 1, capacity_);
}

void ReplayBuffer::sample(int batch, std::mt19937_64& rng, Batch& out) const {
  if (batch < 1 || static_cast<std::size_t>(batch) > size_)
    throw std::invalid_argument("batch larger than buffer");
  const auto b = static_cast<std::size_t>(batch);
  // Floyd's algorithm: distinct indices in O(batch^2) without touching the ring.
  out.indices.clear();
  for (std::size_t j = size_ - b; j < size_; ++j) {
    const std::size_t t = std::uniform_int_distribution<std::size_t>(0, j)(rng);
    if (std::find(out.indices.begin(), out.indices.end(), t) == out.indices.end())
      out.indices.push_back(t);
    else
      out.indices.push_back(j);
  }
  const auto sd = static_cast<std::size_t>(sd_), ad = static_cast<std::size_t>(ad_);
  out.size = batch;
  out.s.resize(b * sd);
  out.a.resize(b * ad);
  out.r.resize(b);
  out.s_next.resize(b * sd);
  out.done.resize(b);
  for (std::size_t i = 0; i < b; ++i) {
    const std::size_t k = out.indices[i];
    std::copy_n(s_.begin() + static_cast<long>(k * sd), sd, out.s.begin() + static_cast<long>(i * sd));
    std::copy_n(a_.begin() + static_cast<long>(k * ad), ad, out.a.begin() + static_cast<long>(i * ad));
    std::copy_n(s_next_.begin() + static_cast<long>(k * sd), sd,
                out.s_next.begin() + static_cast<long>(i * sd));
    out.r[i] = r_[k];
    out.done[i] = done_[k];
  }
}

Transition ReplayBuffer::at(std::size_t i) const {
  if (i >= size_) throw std::out_of_range("replay index");
  const auto sd = static_cast<std::size_t>(sd_), ad = static_cast<std::size_t>(ad_);
  Transition t;
  t.s.assign(s_.begin() + static_cast<long>(i * sd), s_.begin() + static_cast<long>((i + 1) * sd));
  t.a.assign(a_.begin() + static_cast<long>(i * ad), a_.begin() + static_cast<long>((i + 1) * ad));
  t.s_next.assign(s_next_.begin() + static_cast<long>(i * sd),
                  s_next_.begin() + static_cast<long>((i + 1) * sd));
  t.r = r_[i];
  t.done = done_[i] != 0.0;
  return t;
}

}  // namespace usvauv::rl
