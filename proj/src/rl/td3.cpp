#include <algorithm>
#include <cmath>
#include <string>

#include "usvauv/errors.hpp"
#include "usvauv/rl/td3.hpp"

namespace usvauv::rl {
namespace {

struct Fnv {
  std::uint64_t h = 1469598103934665603ULL;
  void bytes(const void* p, std::size_t n) {
    const auto* c = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) h = (h ^ c[i]) * 1099511628211ULL;
  }
  template <class T>
  void add(T v) {
    bytes(&v, sizeof v);
  }
};

double gauss(std::mt19937_64& rng, double sigma) {
  if (sigma == 0.0) return 0.0;
  return std::normal_distribution<double>(0.0, sigma)(rng);
}

}  // namespace

void Td3Hyper::validate() const {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw ConfigError("gamma must be in [0, 1)");
  if (!(tau > 0.0 && tau <= 1.0)) throw ConfigError("tau must be in (0, 1]");
  if (!(lr_actor > 0.0) || !(lr_critic > 0.0)) throw ConfigError("learning rates must be > 0");
  if (batch < 1) throw ConfigError("batch must be >= 1");
  if (policy_delay < 1) throw ConfigError("policy_delay must be >= 1");
  if (!(target_noise_sigma >= 0.0) || !(target_noise_clip >= 0.0) || !(explore_sigma >= 0.0))
    throw ConfigError("noise parameters must be >= 0");
  if (warmup_steps < 0) throw ConfigError("warmup_steps must be >= 0");
  if (episodes < 1 || steps_per_episode < 1) throw ConfigError("episodes and steps must be >= 1");
  if (buffer_capacity < static_cast<std::size_t>(batch))
    throw ConfigError("buffer_capacity must be >= batch");
  if (hidden < 1) throw ConfigError("hidden width must be >= 1");
  if (!(reward_scale > 0.0)) throw ConfigError("reward_scale must be > 0");
  if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0 && adam.beta2 >= 0.0 && adam.beta2 < 1.0 &&
        adam.eps > 0.0))
    throw ConfigError("adam parameters out of range");
}

std::uint64_t Td3Hyper::hash() const {
  Fnv f;
  f.add(gamma);
  f.add(tau);
  f.add(lr_actor);
  f.add(lr_critic);
  f.add(batch);
  f.add(policy_delay);
  f.add(target_noise_sigma);
  f.add(target_noise_clip);
  f.add(explore_sigma);
  f.add(warmup_steps);
  f.add(episodes);
  f.add(steps_per_episode);
  f.add(static_cast<std::uint64_t>(buffer_capacity));
  f.add(hidden);
  f.add(static_cast<int>(optimizer));
  f.add(adam.beta1);
  f.add(adam.beta2);
  f.add(adam.eps);
  f.add(reward_scale);
  return f.h;
}

std::vector<double> concat_rows(std::span<const double> s, int sd, std::span<const double> a,
                                int ad, int batch) {
  const auto usd = static_cast<std::size_t>(sd), uad = static_cast<std::size_t>(ad);
  std::vector<double> x(static_cast<std::size_t>(batch) * (usd + uad));
  for (std::size_t r = 0; r < static_cast<std::size_t>(batch); ++r) {
    std::copy_n(s.begin() + static_cast<long>(r * usd), usd,
                x.begin() + static_cast<long>(r * (usd + uad)));
    std::copy_n(a.begin() + static_cast<long>(r * uad), uad,
                x.begin() + static_cast<long>(r * (usd + uad) + usd));
  }
  return x;
}

double critic_loss(const Mlp& q, std::span<const double> s, std::span<const double> a,
                   std::span<const double> y, int batch, std::vector<double>* grad) {
  const int ad = static_cast<int>(a.size()) / batch;
  const int sd = q.in_dim() - ad;
  const auto x = concat_rows(s, sd, a, ad, batch);
  Mlp::Cache cache;
  const auto& out = q.forward(x.data(), batch, cache);
  double loss = 0.0;
  std::vector<double> dy(static_cast<std::size_t>(batch));
  for (std::size_t i = 0; i < dy.size(); ++i) {
    const double e = out[i] - y[i];
    loss += e * e;
    dy[i] = 2.0 * e / batch;
  }
  if (grad) q.backward(cache, dy.data(), grad->data(), nullptr);
  return loss / batch;
}

double actor_objective(const Mlp& actor, const Mlp& q, std::span<const double> s, int batch,
                       std::vector<double>* grad) {
  const int sd = actor.in_dim(), ad = actor.out_dim();
  Mlp::Cache ac;
  const auto& a = actor.forward(s.data(), batch, ac);
  const auto x = concat_rows(s, sd, a, ad, batch);
  Mlp::Cache qc;
  const auto& out = q.forward(x.data(), batch, qc);
  double obj = 0.0;
  for (double v : out) obj += v;
  obj /= batch;
  if (grad) {
    const auto b = static_cast<std::size_t>(batch);
    const std::vector<double> dq(b, 1.0 / batch);
    std::vector<double> dx(b * static_cast<std::size_t>(sd + ad));
    q.backward(qc, dq.data(), nullptr, dx.data());
    std::vector<double> da(b * static_cast<std::size_t>(ad));
    for (std::size_t r = 0; r < b; ++r)
      std::copy_n(dx.begin() + static_cast<long>(r * static_cast<std::size_t>(sd + ad) +
                                                 static_cast<std::size_t>(sd)),
                  ad, da.begin() + static_cast<long>(r * static_cast<std::size_t>(ad)));
    actor.backward(ac, da.data(), grad->data(), nullptr);
  }
  return obj;
}

Td3Agent::Td3Agent(int state_dim, int action_dim, const Td3Hyper& hyper, std::uint64_t seed)
    : sd_(state_dim), ad_(action_dim), hyper_(hyper), seed_(seed), rng_(seed) {
  hyper_.validate();
  const int h = hyper_.hidden;
  nets_[0] = Mlp({sd_, h, h, h, ad_}, OutputActivation::Tanh);
  nets_[1] = Mlp({sd_ + ad_, h, h, 1}, OutputActivation::Linear);
  nets_[2] = nets_[1];
  for (int i = 0; i < 3; ++i) nets_[static_cast<std::size_t>(i)].init_uniform(rng_);
  for (int i = 0; i < 3; ++i) nets_[static_cast<std::size_t>(i) + 3] = nets_[static_cast<std::size_t>(i)];
  opt_actor_ = Optimizer(hyper_.optimizer, nets_[0].n_params(), hyper_.lr_actor, hyper_.adam);
  opt_c1_ = Optimizer(hyper_.optimizer, nets_[1].n_params(), hyper_.lr_critic, hyper_.adam);
  opt_c2_ = Optimizer(hyper_.optimizer, nets_[2].n_params(), hyper_.lr_critic, hyper_.adam);
}

std::vector<double> Td3Agent::act(std::span<const double> s) const { return actor().forward(s); }

std::vector<double> Td3Agent::select_action(std::span<const double> s, std::mt19937_64& rng,
                                            double sigma) const {
  if (!(sigma >= 0.0)) throw std::invalid_argument("explore sigma must be >= 0");
  auto a = act(s);
  for (double& v : a) v = std::clamp(v + gauss(rng, sigma), -1.0, 1.0);
  return a;
}

std::vector<double> Td3Agent::target_action_with_noise(std::span<const double> s_next,
                                                       std::span<const double> eps) const {
  auto a = nets_[3].forward(s_next);
  const double c = hyper_.target_noise_clip;
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::clamp(a[i] + std::clamp(eps[i], -c, c), -1.0, 1.0);
  return a;
}

std::vector<double> Td3Agent::target_action(std::span<const double> s_next,
                                            std::mt19937_64& rng) const {
  std::vector<double> eps(static_cast<std::size_t>(ad_));
  for (double& e : eps) e = gauss(rng, hyper_.target_noise_sigma);
  return target_action_with_noise(s_next, eps);
}

double Td3Agent::bellman_target(double r, bool done, double gamma, double q1, double q2) {
  return done ? r : r + gamma * std::min(q1, q2);
}

std::vector<double> Td3Agent::compute_targets(const Batch& b) {
  const int n = b.size;
  const double c = hyper_.target_noise_clip;
  Mlp::Cache cache;
  std::vector<double> a = nets_[3].forward(b.s_next.data(), n, cache);
  for (double& v : a) {
    const double eps = std::clamp(gauss(rng_, hyper_.target_noise_sigma), -c, c);
    diag_.max_abs_perturbation = std::max(diag_.max_abs_perturbation, std::abs(eps));
    if (std::abs(eps) > c) ++diag_.clip_violations;
    v = std::clamp(v + eps, -1.0, 1.0);
  }
  const auto x = concat_rows(b.s_next, sd_, a, ad_, n);
  Mlp::Cache c1, c2;
  const auto& q1 = nets_[4].forward(x.data(), n, c1);
  const auto& q2 = nets_[5].forward(x.data(), n, c2);
  std::vector<double> y(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < y.size(); ++i) {
    const bool done = b.done[i] != 0.0;
    y[i] = bellman_target(b.r[i], done, hyper_.gamma, q1[i], q2[i]);
    const double y1 = done ? b.r[i] : b.r[i] + hyper_.gamma * q1[i];
    const double y2 = done ? b.r[i] : b.r[i] + hyper_.gamma * q2[i];
    if (y[i] > y1 || y[i] > y2) ++diag_.min_bound_violations;
    ++diag_.samples;
  }
  return y;
}

CriticLosses Td3Agent::update_critics(const Batch& b, std::span<const double> y) {
  if (b.size < 1) throw TrainingFault("empty batch");
  std::vector<double> g1(nets_[1].n_params(), 0.0), g2(nets_[2].n_params(), 0.0);
  CriticLosses l;
  l.q1 = critic_loss(nets_[1], b.s, b.a, y, b.size, &g1);
  l.q2 = critic_loss(nets_[2], b.s, b.a, y, b.size, &g2);
  if (!std::isfinite(l.q1) || !std::isfinite(l.q2))
    throw TrainingFault("non-finite critic loss after " + std::to_string(critic_updates_) +
                        " critic updates");
  opt_c1_.step(nets_[1].params(), g1);
  opt_c2_.step(nets_[2].params(), g2);
  ++critic_updates_;
  last_losses_ = l;
  return l;
}

double Td3Agent::update_actor(const Batch& b) {
  std::vector<double> g(nets_[0].n_params(), 0.0);
  const double obj = actor_objective(nets_[0], nets_[1], b.s, b.size, &g);
  double norm = 0.0;
  for (double& v : g) {
    norm += v * v;
    v = -v;  // ascent
  }
  if (!std::isfinite(obj) || !std::isfinite(norm))
    throw TrainingFault("non-finite actor gradient after " + std::to_string(actor_updates_) +
                        " actor updates");
  opt_actor_.step(nets_[0].params(), g);
  ++actor_updates_;
  return obj;
}

void Td3Agent::soft_update_targets() {
  for (std::size_t i = 0; i < 3; ++i) soft_update(nets_[i + 3].params(), nets_[i].params(), hyper_.tau);
}

void Td3Agent::train_step(const ReplayBuffer& buffer) {
  buffer.sample(hyper_.batch, rng_, batch_);
  const auto y = compute_targets(batch_);
  update_critics(batch_, y);
  if (critic_updates_ % hyper_.policy_delay == 0) {
    update_actor(batch_);
    soft_update_targets();
  }
}

}  // namespace usvauv::rl
