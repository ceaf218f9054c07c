#ifndef LAIN_MARL_ENV_HPP_
#define LAIN_MARL_ENV_HPP_

#include <vector>

#include "lain/auction.hpp"
#include "lain/engine.hpp"
#include "lain/marl/actor.hpp"
#include "lain/marl/nn.hpp"
#include "lain/world.hpp"

namespace lain::marl {

// Observation of UAV u, with U UAVs, B TBSs and K = U + B + 1 candidates:
//   [0..3]        own x/side, y/side, speed/v_max, assigned flag
//   [4..4+2B)     TBS x/side, y/side
//   next 2        ABS x/side, y/side
//   next 4        area center x/side, y/side, radius/side, can-serve flag
//   next 4        area pending/N, head size/size_max, head density/1000,
//                 head slots-to-deadline/deadline_max clamped to [-1, 1]
//   next 2        own queue length/N, own queue wait/tau (clamped to 10)
//   last K        candidate feasibility mask (0/1)
// Area fields are zero while unassigned. Length 16 + 2B + K.
int observation_size(const Scenario& scenario);
Vec build_observation(const WorldState& world, int uav);

// Concatenated observations of every UAV followed by t/T.
int global_state_size(const Scenario& scenario);
Vec build_global_state(const WorldState& world);

struct RewardParams {
  double alpha_energy = 0.1;   // per joule
  double gamma_success = 1.0;  // per success

  void validate() const;
  bool operator==(const RewardParams&) const = default;
};

// -alpha * energy + gamma * success
double reward(double energy_j, bool success, const RewardParams& params);
double reward(const CompletionRecord& record, const RewardParams& params);

// Team reward of one slot: decision energy charged this slot against the
// successes finalized in it.
double slot_reward(const SlotReport& report, const RewardParams& params);

// Actors for every UAV plus the shared critic.
struct PolicyParams {
  ActorShape shape;
  std::vector<ActorParams> actors;
  Mlp critic;  // global state -> hidden -> hidden -> 1
  int state_dim = 0;
  int critic_hidden = 128;

  DiffusionSchedule schedule() const;
  int n_agents() const { return static_cast<int>(actors.size()); }
};

// Per-agent record of one slot. Inactive agents took no decision.
struct AgentStep {
  bool active = false;
  Vec obs;
  Vec mask;  // 0/1 per candidate
  int action = 0;
  double log_prob = 0.0;
  Vec z_T;
  Vec latent;
};

// Slot decisions collected by LearnedController.
using SlotDecisions = std::vector<AgentStep>;

// Auction assignment on the large timescale; the actors pick executors.
class LearnedController : public Controller {
 public:
  LearnedController(const PolicyParams& policy, AuctionWeights auction, Rng rng,
                    bool greedy = false);

  std::vector<int> assign(const WorldState& world, const std::vector<int>& open_areas) override;
  int choose(const WorldState& world, int uav, const TaskSpec& task,
             const ActionSpace& space) override;

  // Returns and clears the steps recorded since the last call.
  SlotDecisions take_slot();

 private:
  const PolicyParams* policy_;
  AuctionWeights auction_;
  DiffusionSchedule schedule_;
  Rng rng_;
  bool greedy_;
  SlotDecisions current_;
};

}  // namespace lain::marl

#endif  // LAIN_MARL_ENV_HPP_
