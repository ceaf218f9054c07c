#include "lain/marl/env.hpp"

#include <algorithm>
#include <cmath>

#include "lain/errors.hpp"
#include "lain/offloading.hpp"
#include "lain/policies.hpp"

namespace lain::marl {

int observation_size(const Scenario& sc) {
  const int b = sc.world.n_tbs;
  return 16 + 2 * b + action_space_size(sc.world.n_uavs, b);
}

Vec build_observation(const WorldState& w, int u) {
  const WorldConfig& cfg = w.scenario.world;
  const double side = cfg.arena_side;
  const double n_norm = std::max(1, cfg.tasks_per_area);
  const UavState& me = w.uavs.at(static_cast<std::size_t>(u));
  Vec o = Vec::Zero(observation_size(w.scenario));
  int k = 0;
  o(k++) = me.pos.x / side;
  o(k++) = me.pos.y / side;
  o(k++) = me.speed / cfg.uav.v_max;
  o(k++) = me.assigned_area ? 1.0 : 0.0;
  for (const GroundNode& b : w.tbs) {
    o(k++) = b.pos.x / side;
    o(k++) = b.pos.y / side;
  }
  o(k++) = w.abs.pos.x / side;
  o(k++) = w.abs.pos.y / side;

  if (me.assigned_area) {
    const int m = *me.assigned_area;
    const TaskArea& a = w.areas[m];
    o(k) = a.center.x / side;
    o(k + 1) = a.center.y / side;
    o(k + 2) = a.radius / side;
    o(k + 3) = can_serve(w, u, m) ? 1.0 : 0.0;
    o(k + 4) = static_cast<double>(a.queue.size()) / n_norm;
    if (!a.queue.empty()) {
      const TaskSpec& head = a.queue.front();
      o(k + 5) = head.size_bits / cfg.tasks.size_max_bits;
      o(k + 6) = head.density / 1000.0;
      const double left = static_cast<double>(head.deadline_slot - w.slot);
      o(k + 7) = std::clamp(left / std::max(1, cfg.tasks.deadline_max_slots), -1.0, 1.0);
    }
  }
  k += 8;
  o(k++) = static_cast<double>(me.local_queue.entries.size()) / n_norm;
  o(k++) = std::min(10.0, local_wait(me.local_queue, cfg.uav.cpu_hz) / cfg.slot_seconds);
  const ActionSpace space = action_space(w, u);
  for (bool f : space.mask) o(k++) = f ? 1.0 : 0.0;
  return o;
}

int global_state_size(const Scenario& sc) { return sc.world.n_uavs * observation_size(sc) + 1; }

Vec build_global_state(const WorldState& w) {
  const int per = observation_size(w.scenario);
  const int n = static_cast<int>(w.uavs.size());
  Vec s(n * per + 1);
  for (int u = 0; u < n; ++u) s.segment(u * per, per) = build_observation(w, u);
  s(n * per) = static_cast<double>(w.slot) / w.scenario.world.n_slots;
  return s;
}

void RewardParams::validate() const {
  if (!(alpha_energy >= 0.0)) throw ConfigError("training.reward.alpha_energy", "must be >= 0");
  if (!(gamma_success >= 0.0)) throw ConfigError("training.reward.gamma_success", "must be >= 0");
}

double reward(double energy_j, bool success, const RewardParams& p) {
  return -p.alpha_energy * energy_j + p.gamma_success * (success ? 1.0 : 0.0);
}

double reward(const CompletionRecord& r, const RewardParams& p) {
  return reward(r.energy, r.succeeded, p);
}

double slot_reward(const SlotReport& report, const RewardParams& p) {
  double energy = 0.0;
  for (const ChargedDecision& d : report.decisions) energy += d.energy;
  int successes = 0;
  for (const CompletionRecord& r : report.finalized) successes += r.succeeded ? 1 : 0;
  return -p.alpha_energy * energy + p.gamma_success * successes;
}

DiffusionSchedule PolicyParams::schedule() const {
  return DiffusionSchedule::linear(shape.diffusion_steps, shape.beta_start, shape.beta_end);
}

LearnedController::LearnedController(const PolicyParams& policy, AuctionWeights auction, Rng rng,
                                     bool greedy)
    : policy_(&policy),
      auction_(auction),
      schedule_(policy.schedule()),
      rng_(std::move(rng)),
      greedy_(greedy),
      current_(static_cast<std::size_t>(policy.n_agents())) {}

std::vector<int> LearnedController::assign(const WorldState& w, const std::vector<int>& open) {
  return auction_assignment(w, open, auction_);
}

int LearnedController::choose(const WorldState& w, int u, const TaskSpec&,
                              const ActionSpace& space) {
  if (u >= policy_->n_agents()) throw ShapeError("no actor for UAV " + std::to_string(u));
  AgentStep st;
  st.active = true;
  st.obs = build_observation(w, u);
  st.mask = Vec(space.size());
  for (int i = 0; i < space.size(); ++i) st.mask(i) = space.mask[i] ? 1.0 : 0.0;
  const ActionSample a = sample_action(st.obs, space.mask, policy_->actors[u], policy_->shape,
                                       schedule_, rng_, greedy_);
  st.action = a.action;
  st.log_prob = a.log_prob;
  st.z_T = a.z_T;
  st.latent = a.latent;
  current_[static_cast<std::size_t>(u)] = std::move(st);
  return a.action;
}

SlotDecisions LearnedController::take_slot() {
  SlotDecisions out = std::move(current_);
  current_.assign(static_cast<std::size_t>(policy_->n_agents()), AgentStep{});
  return out;
}

}  // namespace lain::marl
