// Per-slot checks of the episode constraints: one decision per task, task
// conservation, no task in two queues, and the presence/reachability rules
// for every decision taken in the slot.
#ifndef LAIN_TEST_INVARIANTS_HPP_
#define LAIN_TEST_INVARIANTS_HPP_

#include <map>
#include <string>
#include <utility>

#include "lain/engine.hpp"
#include "lain/offloading.hpp"

namespace lain::invariants {

// Empty when everything holds, otherwise the first violation found.
inline std::string check_slot(const WorldState& w, const SlotReport& r) {
  using Key = std::pair<int, int>;
  std::map<Key, int> queued;  // occurrences across area and node queues
  auto count = [&](const std::vector<TaskSpec>& q) {
    for (const TaskSpec& t : q) ++queued[{t.area_id, t.task_id}];
  };
  for (const TaskArea& a : w.areas) count(a.queue);
  for (const UavState& u : w.uavs) count(u.local_queue.entries);
  for (const GroundNode& b : w.tbs) count(b.queue.entries);
  count(w.abs.queue.entries);

  std::map<Key, int> finalized;
  for (const CompletionRecord& c : w.completions) ++finalized[{c.task.area, c.task.task}];

  for (int m = 0; m < static_cast<int>(w.tasks.size()); ++m) {
    for (int i = 0; i < static_cast<int>(w.tasks[m].size()); ++i) {
      const Key k{m, i};
      const TaskLifecycle& life = w.lifecycle[m][i];
      const std::string id = std::to_string(m) + "/" + std::to_string(i);
      if (life.decision_count > 1) return "task " + id + " decided more than once";
      const int q = queued.count(k) ? queued[k] : 0;
      const int f = finalized.count(k) ? finalized[k] : 0;
      if (q > 1) return "task " + id + " sits in two queues";
      if (f > 1) return "task " + id + " finalized twice";
      if (q + f != 1) return "task " + id + " is neither queued nor finalized exactly once";
      const bool done = life.status == TaskStatus::Succeeded || life.status == TaskStatus::Expired;
      if (done != (f == 1)) return "task " + id + " status disagrees with its completion record";
      if ((life.status == TaskStatus::Pending) != (life.decision_count == 0))
        return "task " + id + " pending status disagrees with its decision count";
    }
  }

  for (const UavState& u : w.uavs)
    if (u.assigned_area && (*u.assigned_area < 0 || *u.assigned_area >= static_cast<int>(w.areas.size())))
      return "UAV assigned to a nonexistent area";

  for (const ChargedDecision& cd : r.decisions) {
    const OffloadDecision& d = cd.decision;
    const UavState& u = w.uavs[d.origin_uav];
    if (!u.assigned_area || *u.assigned_area != d.task.area)
      return "decision by UAV " + std::to_string(d.origin_uav) + " outside its assigned area";
    if (!in_area(u.pos, w.areas[d.task.area]))
      return "decision by UAV " + std::to_string(d.origin_uav) + " before reaching the area";
    if (!reachable(w, d.origin_uav, d.executor))
      return "decision to an out-of-range executor " + to_string(d.executor);
  }
  return {};
}

}  // namespace lain::invariants

#endif  // LAIN_TEST_INVARIANTS_HPP_
