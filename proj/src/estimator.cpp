#include "lain/estimator.hpp"

#include <algorithm>

#include "lain/errors.hpp"
#include "lain/offloading.hpp"

namespace lain {

AreaEstimate estimate_area(const Position3& uav_pos, double speed, const UavParams& params,
                           NodeId local_id, const TaskArea& area,
                           std::span<const CandidateNode> candidates, double now, double tau) {
  if (!(speed > 0.0)) throw DomainError("estimation needs a positive cruise speed");
  AreaEstimate est;
  const double dist = horizontal_distance(uav_pos, area.center);
  est.flight_time = dist / speed;
  est.flight_energy = (hover_power(params) + move_power(speed, params)) * est.flight_time;
  est.est_energy = est.flight_energy;

  int completed = 0;
  double clock = now + est.flight_time;
  for (const TaskSpec& task : area.queue) {
    NodeId choice = local_id;
    double best_energy = local_energy(task, params);
    double best_time = task.cycles() / params.cpu_hz;
    for (const CandidateNode& c : candidates) {
      if (!(c.rate > 0.0)) continue;
      const double e = params.tx_power * task.size_bits / c.rate +
                       c.kappa * c.cpu_hz * c.cpu_hz * task.cycles();
      if (e < best_energy) {
        best_energy = e;
        best_time = task.size_bits / c.rate + task.cycles() / c.cpu_hz;
        choice = c.id;
      }
    }
    est.per_task_choice.push_back(choice);
    est.est_energy += best_energy;
    clock += best_time;
    if (clock <= task.deadline_slot * tau) ++completed;
  }
  est.est_success = std::min(completed, static_cast<int>(area.queue.size()));
  return est;
}

std::vector<CandidateNode> estimation_candidates(const WorldState& w, int uav, int area,
                                                 double bandwidth_hz) {
  const TaskArea& a = w.areas.at(area);
  const Position3 from{a.center.x, a.center.y, w.uavs.at(uav).pos.z};
  std::vector<CandidateNode> out;
  for (int b = 0; b < static_cast<int>(w.tbs.size()); ++b) {
    const NodeId id = NodeId::tbs(b);
    out.push_back({id, link_rate_from(w, from, id, bandwidth_hz), w.tbs[b].cpu_hz, w.tbs[b].kappa});
  }
  out.push_back({NodeId::abs(), link_rate_from(w, from, NodeId::abs(), bandwidth_hz),
                 w.abs.cpu_hz, w.abs.kappa});
  for (int p = 0; p < static_cast<int>(w.uavs.size()); ++p) {
    if (p == uav || !w.uavs[p].local_queue.entries.empty()) continue;
    const NodeId id = NodeId::uav(p);
    out.push_back({id, link_rate_from(w, from, id, bandwidth_hz), w.scenario.world.uav.cpu_hz,
                   w.scenario.world.uav.kappa});
  }
  return out;
}

AreaEstimate estimate_area(const WorldState& w, int uav, int area, const EstimateOptions& opt) {
  const UavParams& params = w.scenario.world.uav;
  const double speed = opt.cruise_speed > 0.0 ? opt.cruise_speed : params.v_max;
  const double bw = opt.bandwidth_hz > 0.0
                        ? opt.bandwidth_hz
                        : w.scenario.channel.ground.bandwidth_hz / static_cast<double>(w.uavs.size());
  const auto candidates = estimation_candidates(w, uav, area, bw);
  return estimate_area(w.uavs.at(uav).pos, speed, params, NodeId::uav(uav), w.areas.at(area),
                       candidates, w.now(), w.scenario.world.slot_seconds);
}

}  // namespace lain
