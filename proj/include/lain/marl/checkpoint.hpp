#ifndef LAIN_MARL_CHECKPOINT_HPP_
#define LAIN_MARL_CHECKPOINT_HPP_

#include <iosfwd>
#include <string>

#include "lain/marl/env.hpp"

namespace lain::marl {

// Text layout, one item per line:
//   lain-checkpoint 1
//   shape <obs_dim> <n_actions> <latent_dim> <hidden> <diffusion_steps>
//         <beta_start> <beta_end> <activation> <diffusion 0|1>
//         <n_agents> <state_dim> <critic_hidden>            (one line)
//   tensor <name> <count>
//   <count values, %.17g, space separated>
//   ...
//   end
// Tensors appear in params() order: actor0..actorN-1, then critic.
constexpr int kCheckpointVersion = 1;

void save_checkpoint(std::ostream& os, PolicyParams& policy);
void save_checkpoint(const std::string& path, PolicyParams& policy);

// Throws ConfigError on a bad header, version or tensor mismatch.
PolicyParams load_checkpoint(std::istream& is);
PolicyParams load_checkpoint(const std::string& path);

}  // namespace lain::marl

#endif  // LAIN_MARL_CHECKPOINT_HPP_
