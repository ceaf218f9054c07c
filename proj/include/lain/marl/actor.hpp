#ifndef LAIN_MARL_ACTOR_HPP_
#define LAIN_MARL_ACTOR_HPP_

#include <vector>

#include "lain/marl/diffusion.hpp"
#include "lain/marl/nn.hpp"
#include "lain/rng.hpp"

namespace lain::marl {

struct ActorShape {
  int obs_dim = 0;
  int n_actions = 0;
  int latent_dim = 32;
  int hidden = 128;
  int diffusion_steps = 10;
  double beta_start = 1e-4;
  double beta_end = 0.02;
  Activation activation = Activation::Tanh;
  bool diffusion = true;

  bool operator==(const ActorShape&) const = default;
};

// One agent's actor:
//   encoder   obs -> hidden -> L                         (features f)
//   denoiser  [z_t; f; t/T] -> hidden -> hidden -> L     (noise estimate)
//   decoder   L -> hidden -> n_actions                   (logits)
// With diffusion on, a Gaussian z_T is denoised by deterministic reverse
// steps t = T..1 into z0_hat, which the decoder reads. With diffusion off
// the decoder reads f directly.
struct ActorParams {
  Mlp encoder;
  Mlp denoiser;
  Mlp decoder;

  static ActorParams init(const ActorShape& shape, Rng& rng);
  ActorParams zeros_like() const;
  void set_zero();
  std::vector<ParamView> params(const std::string& prefix);
};

// Batched forward record. Columns are samples.
struct ActorForward {
  Mlp::Cache encoder_cache;
  std::vector<Mlp::Cache> denoiser_caches;  // index k holds step t = T - k
  Mlp::Cache decoder_cache;
  Mat features;
  Mat latent;    // z0_hat (or features when diffusion is off)
  Mat logits;
  Mat log_probs; // masked log-softmax, -inf where masked
};

// Reverse-step coefficients: z_{t-1} = c1(t) z_t + c2(t) eps_hat(z_t, f, t).
double reverse_c1(const DiffusionSchedule& s, int t);
double reverse_c2(const DiffusionSchedule& s, int t);

// masks: n_actions x B with 1 for feasible, 0 for masked.
Mat masked_log_softmax(const Mat& logits, const Mat& masks);

ActorForward actor_forward(const ActorParams& params, const ActorShape& shape,
                           const DiffusionSchedule& schedule, const Mat& obs, const Mat& z_T,
                           const Mat& masks);

// Accumulates parameter gradients for upstream dL/dlogits.
void actor_backward(const ActorParams& params, const ActorShape& shape,
                    const DiffusionSchedule& schedule, const ActorForward& fwd,
                    const Mat& dlogits, ActorParams& grad);

// dL/dlogits given dL/dlog_prob(action_b) = g_b for each column.
Mat logp_grad_to_logits(const ActorForward& fwd, const std::vector<int>& actions,
                        const Vec& dlogp);

struct ActionSample {
  int action = 0;
  double log_prob = 0.0;
  Vec z_T;     // empty when diffusion is off
  Vec latent;  // decoder input
};

// Draws z_T ~ N(0, I) (diffusion on), decodes masked logits and samples the
// categorical. Throws ConstraintError when no candidate is feasible.
ActionSample sample_action(const Vec& obs, const std::vector<bool>& mask, const ActorParams& params,
                           const ActorShape& shape, const DiffusionSchedule& schedule, Rng& rng,
                           bool greedy = false);

}  // namespace lain::marl

#endif  // LAIN_MARL_ACTOR_HPP_
