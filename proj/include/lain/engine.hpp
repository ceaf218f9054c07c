#ifndef LAIN_ENGINE_HPP_
#define LAIN_ENGINE_HPP_

#include <functional>
#include <vector>

#include "lain/metrics.hpp"
#include "lain/offloading.hpp"
#include "lain/world.hpp"

namespace lain {

// Execution candidates for one UAV: itself first, then peer UAVs by index,
// then TBSs, then the ABS. mask[i] is true when candidates[i] is in range.
struct ActionSpace {
  std::vector<NodeId> candidates;
  std::vector<bool> mask;

  int size() const { return static_cast<int>(candidates.size()); }
  int feasible_count() const;
};

ActionSpace action_space(const WorldState& world, int uav);
int action_space_size(int n_uavs, int n_tbs);

// Decision maker driven by Episode. assign() returns one area index per
// UAV (-1 leaves it unassigned); only areas in `open_areas` may be used.
// choose() returns an index into space.candidates with mask set.
class Controller {
 public:
  virtual ~Controller() = default;
  virtual std::vector<int> assign(const WorldState& world, const std::vector<int>& open_areas) = 0;
  virtual int choose(const WorldState& world, int uav, const TaskSpec& task,
                     const ActionSpace& space) = 0;
};

struct SlotReport {
  int slot = 0;
  bool reassigned = false;
  std::vector<ChargedDecision> decisions;
  std::vector<CompletionRecord> finalized;
  std::vector<double> flight_energy;  // per UAV, this slot
  std::vector<double> uav_energy;     // per UAV, flight + processing this slot
};

// Areas that still hold Pending tasks.
std::vector<int> open_areas(const WorldState& world);

// True at t = 0, and whenever a UAV sits on an emptied (or no) area while
// another area still has pending work.
bool needs_assignment(const WorldState& world, bool first_slot);

// One episode of the two-timescale loop. Each step():
//   arrivals -> (re)assignment -> flight toward the assigned area ->
//   one decision per serving UAV on its area's head task -> settlement.
// The per-link bandwidth of a slot is the total divided by the number of
// UAVs deciding in it.
class Episode {
 public:
  Episode(const Scenario& scenario, Controller& controller);

  const WorldState& world() const { return world_; }
  bool done() const { return world_.slot >= world_.scenario.world.n_slots; }
  SlotReport step();
  // Runs to the end; `observer` sees the world after each slot.
  void run(const std::function<void(const WorldState&, const SlotReport&)>& observer = {});

 private:
  WorldState world_;
  Controller* controller_;
};

}  // namespace lain

#endif  // LAIN_ENGINE_HPP_
