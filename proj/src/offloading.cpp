#include "lain/offloading.hpp"

#include <algorithm>
#include <string>

namespace lain {

double local_wait(std::span<const TaskSpec> queue, double cpu_hz) {
  if (!(cpu_hz > 0.0)) throw DomainError("cpu frequency must be > 0");
  double total = 0.0;
  for (const TaskSpec& t : queue) total += t.cycles() / cpu_hz;
  return total;
}

double local_completion(const TaskSpec& task, const UavState& uav, const UavParams& params,
                        const TaskArea& area, double t_start) {
  if (!in_area(uav.pos, area))
    throw ConstraintError("local processing requires the UAV inside the task area");
  return t_start + local_wait(uav.local_queue, params.cpu_hz) + task.cycles() / params.cpu_hz;
}

double local_energy(const TaskSpec& task, const UavParams& params) {
  return params.kappa * params.cpu_hz * params.cpu_hz * task.cycles();
}

double offload_completion(const TaskSpec& task, double rate, const NodeQueue& dest_queue,
                          double dest_cpu, double t_start) {
  if (!(rate > 0.0)) throw LinkUnavailableError("offloading link has zero rate");
  return t_start + task.size_bits / rate + local_wait(dest_queue, dest_cpu) +
         task.cycles() / dest_cpu;
}

double offload_energy(const TaskSpec& task, double rate, const UavParams& origin,
                      double dest_kappa, double dest_cpu) {
  if (!(rate > 0.0)) throw LinkUnavailableError("offloading link has zero rate");
  return origin.tx_power * task.size_bits / rate +
         dest_kappa * dest_cpu * dest_cpu * task.cycles();
}

double link_rate_from(const WorldState& w, const Position3& origin_pos, NodeId dest,
                      double bandwidth_hz) {
  const ChannelConfig& ch = w.scenario.channel;
  const double tx = w.scenario.world.uav.tx_power;
  const Position3 dest_pos = w.node_position(dest);
  if (dest.kind == NodeKind::Abs) {
    return rate_uav_abs(origin_pos, dest_pos, tx, bandwidth_hz, ch.air, ch.ground.noise_power_w);
  }
  if (distance(origin_pos, dest_pos) < 1.0) {
    return bandwidth_hz * std::log2(1.0 + tx * ch.ground.g0 / ch.ground.noise_power_w);
  }
  return rate_uav_node(origin_pos, dest_pos, tx, bandwidth_hz, ch.ground);
}

double link_rate(const WorldState& w, int origin, NodeId dest) {
  return link_rate_from(w, w.uavs.at(origin).pos, dest, w.link_bandwidth_hz);
}

bool reachable(const WorldState& w, int origin, NodeId dest) {
  const ChannelConfig& ch = w.scenario.channel;
  const Position3& pos = w.uavs.at(origin).pos;
  switch (dest.kind) {
    case NodeKind::Uav:
      if (dest.index == origin) return true;
      if (dest.index < 0 || dest.index >= static_cast<int>(w.uavs.size())) return false;
      return distance(pos, w.uavs[dest.index].pos) <= ch.uav_range_m;
    case NodeKind::Tbs:
      if (dest.index < 0 || dest.index >= static_cast<int>(w.tbs.size())) return false;
      return distance(pos, w.tbs[dest.index].pos) <= ch.tbs_range_m;
    case NodeKind::Abs:
      return distance(pos, w.abs.pos) <= ch.abs_range_m;
  }
  return false;
}

bool can_serve(const WorldState& w, int uav, int area) {
  const UavState& s = w.uavs.at(uav);
  return s.assigned_area && *s.assigned_area == area && in_area(s.pos, w.areas.at(area));
}

ExecutionPlan plan_execution(const WorldState& w, const TaskSpec& task, int origin,
                             NodeId executor) {
  ExecutionPlan p;
  p.start = w.now();
  const UavParams& params = w.scenario.world.uav;
  const bool local = executor.kind == NodeKind::Uav && executor.index == origin;
  if (local) {
    p.wait = local_wait(w.uavs.at(origin).local_queue, params.cpu_hz);
    p.service = task.cycles() / params.cpu_hz;
    p.completion = p.start + p.wait + p.service;
    p.energy = local_energy(task, params);
    return p;
  }
  const double rate = link_rate(w, origin, executor);
  const double cpu = w.node_cpu_hz(executor);
  const NodeQueue& q = w.node_queue(executor);
  p.transmit = task.size_bits / rate;
  p.wait = local_wait(q, cpu);
  p.service = task.cycles() / cpu;
  p.completion = offload_completion(task, rate, q, cpu, p.start);
  p.energy = offload_energy(task, rate, params, w.node_kappa(executor), cpu);
  return p;
}

void apply_decision(WorldState& w, const OffloadDecision& d) {
  const TaskRef r = d.task;
  if (r.area < 0 || r.area >= static_cast<int>(w.tasks.size()) || r.task < 0 ||
      r.task >= static_cast<int>(w.tasks[r.area].size()))
    throw ConstraintError("decision names an unknown task");
  if (d.origin_uav < 0 || d.origin_uav >= static_cast<int>(w.uavs.size()))
    throw ConstraintError("decision names an unknown UAV");
  TaskLifecycle& life = w.life(r);
  if (life.decision_count > 0)
    throw SingleAssignmentError("task " + std::to_string(r.area) + "/" + std::to_string(r.task) +
                                " already has an execution decision");
  if (life.status != TaskStatus::Pending) throw ConstraintError("task is not pending");
  if (d.decided_slot != w.slot) throw ConstraintError("decision slot does not match world slot");
  if (!can_serve(w, d.origin_uav, r.area))
    throw ConstraintError("UAV " + std::to_string(d.origin_uav) +
                          " is not assigned to and inside area " + std::to_string(r.area));
  if (!reachable(w, d.origin_uav, d.executor))
    throw ConstraintError("destination " + to_string(d.executor) + " is out of range");

  const TaskSpec& task = w.task(r);
  const ExecutionPlan plan = plan_execution(w, task, d.origin_uav, d.executor);

  auto& queue = w.areas[r.area].queue;
  auto it = std::find_if(queue.begin(), queue.end(),
                         [&](const TaskSpec& t) { return t.ref() == r; });
  if (it == queue.end()) throw ConstraintError("pending task missing from its area queue");
  queue.erase(it);

  life.decision_count = 1;
  life.status = TaskStatus::InService;
  life.executor = d.executor;
  life.origin_uav = d.origin_uav;
  life.decided_slot = d.decided_slot;
  life.start_s = plan.start;
  life.transmit_s = plan.transmit;
  life.wait_s = plan.wait;
  life.service_s = plan.service;
  life.completion_s = plan.completion;
  life.energy_j = plan.energy;

  w.node_queue(d.executor).entries.push_back(task);
  UavState& origin = w.uavs[d.origin_uav];
  origin.processing_energy += plan.energy;
  origin.energy_spent += plan.energy;
}

namespace {

void settle_queue(WorldState& w, NodeQueue& q, int t, double slot_end,
                  std::vector<CompletionRecord>& out) {
  const double tau = w.scenario.world.slot_seconds;
  std::erase_if(q.entries, [&](const TaskSpec& task) {
    TaskLifecycle& life = w.life(task.ref());
    if (!(life.completion_s < slot_end)) return false;
    CompletionRecord rec;
    rec.task = task.ref();
    rec.completion_time = life.completion_s;
    rec.deadline = task.deadline_slot * tau;
    rec.spawn_time = task.spawn_slot * tau;
    rec.size_bits = task.size_bits;
    rec.succeeded = rec.completion_time <= rec.deadline;
    rec.energy = life.energy_j;
    rec.slot = t;
    life.status = rec.succeeded ? TaskStatus::Succeeded : TaskStatus::Expired;
    out.push_back(rec);
    return true;
  });
}

}  // namespace

std::vector<CompletionRecord> settle_slot(WorldState& w, int t) {
  std::vector<CompletionRecord> out;
  const double slot_end = (t + 1) * w.scenario.world.slot_seconds;
  for (UavState& u : w.uavs) settle_queue(w, u.local_queue, t, slot_end, out);
  for (GroundNode& b : w.tbs) settle_queue(w, b.queue, t, slot_end, out);
  settle_queue(w, w.abs.queue, t, slot_end, out);
  w.completions.insert(w.completions.end(), out.begin(), out.end());
  return out;
}

}  // namespace lain
