#ifndef LAIN_MARL_HAPPO_HPP_
#define LAIN_MARL_HAPPO_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "lain/auction.hpp"
#include "lain/marl/env.hpp"
#include "lain/metrics.hpp"

namespace lain::marl {

struct Transition {
  Vec state;
  SlotDecisions agents;
  double reward = 0.0;
  double value = 0.0;
  bool done = false;
};

// On-policy store; cleared after every update.
class RolloutBuffer {
 public:
  void push(Transition t) { steps_.push_back(std::move(t)); }
  void clear() { steps_.clear(); }
  std::size_t size() const { return steps_.size(); }
  bool empty() const { return steps_.empty(); }
  std::vector<Transition>& steps() { return steps_; }
  const std::vector<Transition>& steps() const { return steps_; }

 private:
  std::vector<Transition> steps_;
};

struct GaeResult {
  Vec advantages;  // raw, not normalized
  Vec returns;     // advantages + values
};

// Backward recursion delta_t = r_t + g V_{t+1} (1 - done_t) - V_t,
// A_t = delta_t + g l (1 - done_t) A_{t+1}. The step after the last one is
// bootstrapped with `last_value` unless the last step is done.
GaeResult gae_advantages(const std::vector<double>& rewards, const std::vector<double>& values,
                         const std::vector<bool>& dones, double gamma, double lambda,
                         double last_value = 0.0);
GaeResult gae_advantages(const RolloutBuffer& buffer, double gamma, double lambda);

// Zero mean, unit variance. Only centers when the spread is ~0.
Vec normalize_advantages(const Vec& a);

// ratio_prev .* m_prev
Vec compound_advantage(const Vec& m_prev, const Vec& ratio_prev);

struct ClipLoss {
  double loss = 0.0;
  Vec dlogp;  // dloss / dnew_logp
};

// -mean(min(r M, clip(r, 1-eps, 1+eps) M)), r = exp(new - old).
ClipLoss happo_clip_loss(const Vec& new_logp, const Vec& old_logp, const Vec& m, double epsilon);

struct TrainingConfig {
  int iterations = 200;
  int episodes_per_iteration = 1;
  int ppo_epochs = 5;
  int batch_size = 128;
  double lr = 1e-4;
  double critic_lr = 5e-4;
  double clip_epsilon = 0.2;
  double gamma = 0.99;
  double lambda = 0.95;
  double diffusion_weight = 0.1;
  double max_grad_norm = 0.5;
  bool normalize_advantages = true;
  int latent_dim = 32;
  int hidden = 128;
  int diffusion_steps = 10;
  double beta_start = 1e-4;
  double beta_end = 0.02;
  Activation activation = Activation::Tanh;
  bool diffusion = true;
  RewardParams reward;
  std::uint64_t seed = 1;

  void validate() const;
  bool operator==(const TrainingConfig&) const = default;
};

PolicyParams init_policy(const Scenario& scenario, const TrainingConfig& cfg);

// Scenario for the n-th training episode.
using EnvFactory = std::function<Scenario(std::uint64_t episode)>;

// Same shape as `base`, fresh world seed per episode.
EnvFactory reseeding_factory(Scenario base, std::uint64_t seed);

struct CurvePoint {
  int iteration = 0;
  double mean_reward = 0.0;
  double actor_loss = 0.0;
  double diffusion_loss = 0.0;
  double critic_loss = 0.0;
};

struct TrainResult {
  PolicyParams policy;
  std::vector<CurvePoint> curve;
  // Agent order of each iteration's actor updates.
  std::vector<std::vector<int>> update_orders;
};

// Throws TrainingError when a loss goes non-finite.
TrainResult train(const EnvFactory& envs, const AuctionWeights& auction,
                  const TrainingConfig& cfg);
// Continues from `initial` instead of a fresh initialization.
TrainResult train(const EnvFactory& envs, const AuctionWeights& auction, const TrainingConfig& cfg,
                  PolicyParams initial);

void write_curve_csv(std::ostream& os, const std::vector<CurvePoint>& curve);

struct PolicyEpisode {
  double reward = 0.0;  // sum of slot rewards
  EpisodeMetrics metrics;
};

PolicyEpisode run_policy_episode(const Scenario& scenario, const PolicyParams& policy,
                                 const AuctionWeights& auction, const RewardParams& reward,
                                 std::uint64_t seed, bool greedy, double beta_obj = 1.0);

// Mean reward of `episodes` rollouts on scenarios from `envs`, sampled with
// action seeds derived from `seed`.
double evaluate(const EnvFactory& envs, const PolicyParams& policy, const AuctionWeights& auction,
                const RewardParams& reward, int episodes, std::uint64_t seed, bool greedy = false);

}  // namespace lain::marl

#endif  // LAIN_MARL_HAPPO_HPP_
