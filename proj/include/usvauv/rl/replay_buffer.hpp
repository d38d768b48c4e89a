#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

namespace usvauv::rl {

struct Transition {
  std::vector<double> s;
  std::vector<double> a;
  double r = 0.0;
  std::vector<double> s_next;
  bool done = false;
};

// Sampled minibatch in row-major [batch x dim] blocks.
struct Batch {
  int size = 0;
  std::vector<double> s;
  std::vector<double> a;
  std::vector<double> r;
  std::vector<double> s_next;
  std::vector<double> done;
  std::vector<std::size_t> indices;
};

// Fixed-capacity FIFO ring of transitions.
class ReplayBuffer {
 public:
  ReplayBuffer(std::size_t capacity, int state_dim, int action_dim);

  void add(std::span<const double> s, std::span<const double> a, double r,
           std::span<const double> s_next, bool done);
  void add(const Transition& t) { add(t.s, t.a, t.r, t.s_next, t.done); }

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  int state_dim() const { return sd_; }
  int action_dim() const { return ad_; }
  std::size_t cursor() const { return cursor_; }

  // Uniform, distinct indices within the batch. Requires batch <= size().
  void sample(int batch, std::mt19937_64& rng, Batch& out) const;
  Transition at(std::size_t i) const;

 private:
  std::size_t capacity_;
  int sd_;
  int ad_;
  std::size_t size_ = 0;
  std::size_t cursor_ = 0;
  std::vector<double> s_;
  std::vector<double> a_;
  std::vector<double> r_;
  std::vector<double> s_next_;
  std::vector<double> done_;
};

}  // namespace usvauv::rl
