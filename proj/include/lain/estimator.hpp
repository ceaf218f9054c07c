#ifndef LAIN_ESTIMATOR_HPP_
#define LAIN_ESTIMATOR_HPP_

#include <span>
#include <vector>

#include "lain/world.hpp"

namespace lain {

struct AreaEstimate {
  int est_success = 0;          // tasks expected to finish on time
  double est_energy = 0.0;      // J, flight + cheapest execution per task
  double flight_energy = 0.0;   // J
  double flight_time = 0.0;     // s
  std::vector<NodeId> per_task_choice;
};

// An offloading destination as seen from the area the UAV is heading to.
struct CandidateNode {
  NodeId id;
  double rate = 0.0;   // bits/s
  double cpu_hz = 0.0;
  double kappa = 0.0;
};

// Core estimate for a UAV at `uav_pos` flying at `speed` to `area`.
//
// Each queued task takes its minimum-energy mode (local first on ties, then
// candidate order). Tasks are served back to back in queue order after the
// flight; a task counts as a success when
//   now + T_fly + (cumulative execution time through this task) <= deadline.
// Throws DomainError when speed <= 0.
AreaEstimate estimate_area(const Position3& uav_pos, double speed, const UavParams& params,
                           NodeId local_id, const TaskArea& area,
                           std::span<const CandidateNode> candidates, double now, double tau);

struct EstimateOptions {
  double cruise_speed = 0.0;  // 0 selects v_max
  double bandwidth_hz = 0.0;  // 0 selects total bandwidth / number of UAVs
};

// Candidates: every TBS, the ABS, and peer UAVs with empty local queues.
// Rates are evaluated from the area center at the UAV's altitude.
std::vector<CandidateNode> estimation_candidates(const WorldState& world, int uav, int area,
                                                 double bandwidth_hz);

AreaEstimate estimate_area(const WorldState& world, int uav, int area,
                           const EstimateOptions& options = {});

}  // namespace lain

#endif  // LAIN_ESTIMATOR_HPP_
