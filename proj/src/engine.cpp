#include "lain/engine.hpp"

#include <algorithm>
#include <string>

#include "lain/auction.hpp"
#include "lain/errors.hpp"

namespace lain {

int ActionSpace::feasible_count() const {
  return static_cast<int>(std::count(mask.begin(), mask.end(), true));
}

int action_space_size(int n_uavs, int n_tbs) { return n_uavs + n_tbs + 1; }

ActionSpace action_space(const WorldState& w, int uav) {
  ActionSpace s;
  const int n_uavs = static_cast<int>(w.uavs.size());
  s.candidates.push_back(NodeId::uav(uav));
  for (int p = 0; p < n_uavs; ++p)
    if (p != uav) s.candidates.push_back(NodeId::uav(p));
  for (int b = 0; b < static_cast<int>(w.tbs.size()); ++b) s.candidates.push_back(NodeId::tbs(b));
  s.candidates.push_back(NodeId::abs());
  s.mask.reserve(s.candidates.size());
  for (const NodeId& id : s.candidates) s.mask.push_back(reachable(w, uav, id));
  return s;
}

std::vector<int> open_areas(const WorldState& w) {
  std::vector<int> out;
  for (int m = 0; m < static_cast<int>(w.areas.size()); ++m)
    if (!w.areas[m].queue.empty()) out.push_back(m);
  return out;
}

bool needs_assignment(const WorldState& w, bool first_slot) {
  if (first_slot) return true;
  if (open_areas(w).empty()) return false;
  for (const UavState& u : w.uavs) {
    if (!u.assigned_area || w.areas[*u.assigned_area].queue.empty()) return true;
  }
  return false;
}

Episode::Episode(const Scenario& scenario, Controller& controller)
    : world_(init_world(scenario)), controller_(&controller) {}

SlotReport Episode::step() {
  if (done()) throw std::logic_error("episode already finished");
  WorldState& w = world_;
  const WorldConfig& cfg = w.scenario.world;
  const int t = w.slot;
  const int n_uavs = static_cast<int>(w.uavs.size());
  SlotReport report;
  report.slot = t;

  spawn_arrivals(w);

  if (needs_assignment(w, t == 0)) {
    const std::vector<int> open = open_areas(w);
    std::vector<int> assignment(static_cast<std::size_t>(n_uavs), -1);
    if (!open.empty()) assignment = controller_->assign(w, open);
    if (static_cast<int>(assignment.size()) != n_uavs)
      throw std::logic_error("controller returned a malformed assignment");
    for (int u = 0; u < n_uavs; ++u) {
      const int m = assignment[u];
      if (m >= 0 && std::find(open.begin(), open.end(), m) == open.end())
        throw ConstraintError("assignment to an area without pending tasks");
      w.uavs[u].assigned_area = m >= 0 ? std::optional<int>(m) : std::nullopt;
    }
    report.reassigned = true;
  }

  report.flight_energy.assign(static_cast<std::size_t>(n_uavs), 0.0);
  report.uav_energy.assign(static_cast<std::size_t>(n_uavs), 0.0);
  for (int u = 0; u < n_uavs; ++u) {
    UavState& s = w.uavs[u];
    const Position3 waypoint =
        s.assigned_area ? plan_waypoint(s, w.areas[*s.assigned_area]) : s.pos;
    const double before = s.flight_energy;
    s = step_uav(s, waypoint, cfg.uav, cfg.slot_seconds).uav;
    report.flight_energy[u] = s.flight_energy - before;
  }

  std::vector<int> deciders;
  for (int u = 0; u < n_uavs; ++u) {
    const auto& a = w.uavs[u].assigned_area;
    if (a && can_serve(w, u, *a) && !w.areas[*a].queue.empty()) deciders.push_back(u);
  }
  w.link_bandwidth_hz =
      w.scenario.channel.ground.bandwidth_hz / static_cast<double>(std::max<std::size_t>(1, deciders.size()));

  for (int u : deciders) {
    const int m = *w.uavs[u].assigned_area;
    if (w.areas[m].queue.empty()) continue;  // drained by an earlier UAV this slot
    const TaskSpec task = w.areas[m].queue.front();
    const ActionSpace space = action_space(w, u);
    const int choice = controller_->choose(w, u, task, space);
    if (choice < 0 || choice >= space.size() || !space.mask[choice])
      throw ConstraintError("controller chose an infeasible executor for UAV " + std::to_string(u));
    const OffloadDecision d{task.ref(), space.candidates[choice], u, t};
    apply_decision(w, d);
    report.decisions.push_back({d, w.life(d.task).energy_j});
  }

  report.finalized = settle_slot(w, t);
  for (int u = 0; u < n_uavs; ++u) report.uav_energy[u] = report.flight_energy[u];
  for (const auto& cd : report.decisions) report.uav_energy[cd.decision.origin_uav] += cd.energy;

  ++w.slot;
  return report;
}

void Episode::run(const std::function<void(const WorldState&, const SlotReport&)>& observer) {
  while (!done()) {
    const SlotReport r = step();
    if (observer) observer(world_, r);
  }
}

}  // namespace lain
