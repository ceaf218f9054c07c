#ifndef LAIN_OFFLOADING_HPP_
#define LAIN_OFFLOADING_HPP_

#include <span>
#include <vector>

#include "lain/errors.hpp"
#include "lain/world.hpp"

namespace lain {

class SingleAssignmentError : public ConstraintError {
 public:
  using ConstraintError::ConstraintError;
};

// executor == Uav(origin_uav) means local processing.
struct OffloadDecision {
  TaskRef task;
  NodeId executor;
  int origin_uav = 0;
  int decided_slot = 0;

  bool is_local() const {
    return executor.kind == NodeKind::Uav && executor.index == origin_uav;
  }
  bool operator==(const OffloadDecision&) const = default;
};

// Sum of d*c/f over the queued tasks.
double local_wait(std::span<const TaskSpec> queue, double cpu_hz);
inline double local_wait(const NodeQueue& q, double cpu_hz) { return local_wait(q.entries, cpu_hz); }

// t_start + local_wait + d*c/f_u. Throws ConstraintError when the UAV is
// not inside the task's area.
double local_completion(const TaskSpec& task, const UavState& uav, const UavParams& params,
                        const TaskArea& area, double t_start);

// kappa * f_u^2 * d * c
double local_energy(const TaskSpec& task, const UavParams& params);

// t_start + d/rate + wait(dest) + d*c/f_dest.
// Throws LinkUnavailableError when rate <= 0.
double offload_completion(const TaskSpec& task, double rate, const NodeQueue& dest_queue,
                          double dest_cpu, double t_start);

// P_u * d/rate + kappa_dest * f_dest^2 * d * c
double offload_energy(const TaskSpec& task, double rate, const UavParams& origin,
                      double dest_kappa, double dest_cpu);

// Achievable rate from UAV `origin` to `dest` with the slot's per-link
// bandwidth share. Peer links closer than 1 m use the 1 m reference gain.
double link_rate(const WorldState& world, int origin, NodeId dest);
double link_rate_from(const WorldState& world, const Position3& origin_pos, NodeId dest,
                      double bandwidth_hz);

// Whether `dest` is within link range of UAV `origin` (always true for
// local execution).
bool reachable(const WorldState& world, int origin, NodeId dest);

// A UAV may act on tasks of area m only while assigned to m and inside it.
bool can_serve(const WorldState& world, int uav, int area);

// Projected timing and energy of running `task` on `executor`.
struct ExecutionPlan {
  double start = 0.0;
  double transmit = 0.0;
  double wait = 0.0;
  double service = 0.0;
  double completion = 0.0;
  double energy = 0.0;
};
ExecutionPlan plan_execution(const WorldState& world, const TaskSpec& task, int origin,
                             NodeId executor);

// Commits a decision: the task leaves its area queue, joins the executor's
// queue as InService, and its completion time and energy are fixed.
// Throws SingleAssignmentError on a second decision for the same task and
// ConstraintError on presence/reachability violations. The world is left
// untouched on error.
void apply_decision(WorldState& world, const OffloadDecision& decision);

// Finalizes every in-service task finishing before the end of slot t.
std::vector<CompletionRecord> settle_slot(WorldState& world, int t);

}  // namespace lain

#endif  // LAIN_OFFLOADING_HPP_
