#include "lain/world.hpp"

#include <cmath>
#include <numbers>

#include "lain/errors.hpp"

namespace lain {

std::string to_string(NodeId id) {
  switch (id.kind) {
    case NodeKind::Uav: return "uav" + std::to_string(id.index);
    case NodeKind::Tbs: return "tbs" + std::to_string(id.index);
    case NodeKind::Abs: return "abs";
  }
  return "?";
}

std::string to_string(TaskStatus s) {
  switch (s) {
    case TaskStatus::Pending: return "pending";
    case TaskStatus::InService: return "in_service";
    case TaskStatus::Succeeded: return "succeeded";
    case TaskStatus::Expired: return "expired";
  }
  return "?";
}

namespace {

void require_positive(double v, const char* field) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(field, "must be finite and > 0");
}

void require_count(int v, const char* field) {
  if (v < 1) throw ConfigError(field, "must be >= 1");
}

}  // namespace

void UavParams::validate() const {
  require_positive(mass, "world.uav.mass");
  require_positive(prop_radius, "world.uav.prop_radius");
  require_positive(prop_count, "world.uav.prop_count");
  require_positive(air_density, "world.uav.air_density");
  require_positive(v_max, "world.uav.v_max");
  require_positive(p_max, "world.uav.p_max");
  require_positive(p_stop, "world.uav.p_stop");
  require_positive(cpu_hz, "world.uav.cpu_hz");
  require_positive(tx_power, "world.uav.tx_power");
  require_positive(kappa, "world.uav.kappa");
  if (!(p_max > p_stop)) throw ConfigError("world.uav.p_max", "must exceed p_stop");
  if (hover_power_w) require_positive(*hover_power_w, "world.uav.hover_power_w");
}

void WorldConfig::validate() const {
  require_positive(arena_side, "world.arena_side");
  require_positive(slot_seconds, "world.slot_seconds");
  require_count(n_slots, "world.n_slots");
  if (!(uav_altitude >= 0.0)) throw ConfigError("world.uav_altitude", "must be >= 0");
  require_count(n_uavs, "world.n_uavs");
  require_count(n_tbs, "world.n_tbs");
  require_count(n_areas, "world.n_areas");
  require_count(tasks_per_area, "world.tasks_per_area");
  require_positive(area_radius, "world.area_radius");
  if (2.0 * area_radius > arena_side)
    throw ConfigError("world.area_radius", "area disc does not fit in the arena");
  if (!area_centers.empty() && static_cast<int>(area_centers.size()) != n_areas)
    throw ConfigError("world.area_centers", "length must equal n_areas");
  for (const auto& c : area_centers) {
    if (c.x - area_radius < 0.0 || c.x + area_radius > arena_side ||
        c.y - area_radius < 0.0 || c.y + area_radius > arena_side)
      throw ConfigError("world.area_centers", "area disc must lie inside the arena");
  }
  if (!tbs_positions.empty() && static_cast<int>(tbs_positions.size()) != n_tbs)
    throw ConfigError("world.tbs_positions", "length must equal n_tbs");
  require_positive(tasks.size_min_bits, "world.tasks.size_min_bits");
  if (!(tasks.size_max_bits >= tasks.size_min_bits))
    throw ConfigError("world.tasks.size_max_bits", "must be >= size_min_bits");
  require_positive(tasks.density, "world.tasks.density");
  if (tasks.deadline_min_slots < 0)
    throw ConfigError("world.tasks.deadline_min_slots", "must be >= 0");
  if (tasks.deadline_max_slots < tasks.deadline_min_slots)
    throw ConfigError("world.tasks.deadline_max_slots", "must be >= deadline_min_slots");
  if (!(tasks.arrival_prob >= 0.0 && tasks.arrival_prob <= 1.0))
    throw ConfigError("world.tasks.arrival_prob", "must be in [0, 1]");
  uav.validate();
  require_positive(tbs_cpu_hz, "world.tbs_cpu_hz");
  require_positive(abs_cpu_hz, "world.abs_cpu_hz");
  require_positive(tbs_kappa, "world.tbs_kappa");
  require_positive(abs_kappa, "world.abs_kappa");
  require_positive(abs_altitude, "world.abs_altitude");
}

void ChannelConfig::validate() const {
  air.validate();
  ground.validate();
  require_positive(tbs_range_m, "channel.tbs_range_m");
  require_positive(uav_range_m, "channel.uav_range_m");
  require_positive(abs_range_m, "channel.abs_range_m");
}

Position3 WorldState::node_position(NodeId id) const {
  switch (id.kind) {
    case NodeKind::Uav: return uavs.at(id.index).pos;
    case NodeKind::Tbs: return tbs.at(id.index).pos;
    case NodeKind::Abs: return abs.pos;
  }
  return {};
}

double WorldState::node_cpu_hz(NodeId id) const {
  switch (id.kind) {
    case NodeKind::Uav: return scenario.world.uav.cpu_hz;
    case NodeKind::Tbs: return tbs.at(id.index).cpu_hz;
    case NodeKind::Abs: return abs.cpu_hz;
  }
  return 0.0;
}

double WorldState::node_kappa(NodeId id) const {
  switch (id.kind) {
    case NodeKind::Uav: return scenario.world.uav.kappa;
    case NodeKind::Tbs: return tbs.at(id.index).kappa;
    case NodeKind::Abs: return abs.kappa;
  }
  return 0.0;
}

const NodeQueue& WorldState::node_queue(NodeId id) const {
  switch (id.kind) {
    case NodeKind::Uav: return uavs.at(id.index).local_queue;
    case NodeKind::Tbs: return tbs.at(id.index).queue;
    case NodeKind::Abs: break;
  }
  return abs.queue;
}

NodeQueue& WorldState::node_queue(NodeId id) {
  return const_cast<NodeQueue&>(std::as_const(*this).node_queue(id));
}

namespace {

TaskSpec draw_task(Rng& rng, const TaskDistribution& dist, int area, int task, int spawn_slot) {
  TaskSpec t;
  t.area_id = area;
  t.task_id = task;
  t.size_bits = dist.size_min_bits + (dist.size_max_bits - dist.size_min_bits) * rng.uniform();
  t.density = dist.density;
  t.spawn_slot = spawn_slot;
  t.deadline_slot = spawn_slot + static_cast<int>(rng.uniform_int(dist.deadline_min_slots,
                                                                  dist.deadline_max_slots));
  return t;
}

}  // namespace

WorldState init_world(const Scenario& scenario) {
  scenario.validate();
  const WorldConfig& cfg = scenario.world;
  const std::uint64_t seed = cfg.master_seed;

  WorldState w;
  w.scenario = scenario;
  w.slot = 0;
  w.link_bandwidth_hz = scenario.channel.ground.bandwidth_hz;
  w.arrival_rng = Rng(derive_stream_seed(seed, "world.arrivals"));

  Rng layout(derive_stream_seed(seed, "world.layout"));
  Rng task_rng(derive_stream_seed(seed, "world.tasks"));
  Rng uav_rng(derive_stream_seed(seed, "world.uav_init"));

  w.areas.resize(cfg.n_areas);
  w.tasks.resize(cfg.n_areas);
  w.lifecycle.resize(cfg.n_areas);
  for (int m = 0; m < cfg.n_areas; ++m) {
    TaskArea& area = w.areas[m];
    area.radius = cfg.area_radius;
    if (!cfg.area_centers.empty()) {
      area.center = {cfg.area_centers[m].x, cfg.area_centers[m].y, 0.0};
    } else {
      area.center = {layout.uniform(cfg.area_radius, cfg.arena_side - cfg.area_radius),
                     layout.uniform(cfg.area_radius, cfg.arena_side - cfg.area_radius), 0.0};
    }
    for (int n = 0; n < cfg.tasks_per_area; ++n) {
      TaskSpec t = draw_task(task_rng, cfg.tasks, m, n, 0);
      w.tasks[m].push_back(t);
      w.lifecycle[m].emplace_back();
      area.queue.push_back(t);
    }
  }

  w.tbs.resize(cfg.n_tbs);
  for (int b = 0; b < cfg.n_tbs; ++b) {
    GroundNode& node = w.tbs[b];
    if (!cfg.tbs_positions.empty()) {
      node.pos = cfg.tbs_positions[b];
    } else {
      const double f = static_cast<double>(b + 1) / static_cast<double>(cfg.n_tbs + 1);
      node.pos = {f * cfg.arena_side, f * cfg.arena_side, 0.0};
    }
    node.cpu_hz = cfg.tbs_cpu_hz;
    node.kappa = cfg.tbs_kappa;
    node.queue.node = NodeId::tbs(b);
  }

  w.abs.pos = cfg.abs_position.value_or(
      Position3{cfg.arena_side / 2.0, cfg.arena_side / 2.0, cfg.abs_altitude});
  w.abs.cpu_hz = cfg.abs_cpu_hz;
  w.abs.kappa = cfg.abs_kappa;
  w.abs.queue.node = NodeId::abs();

  w.uavs.resize(cfg.n_uavs);
  for (int u = 0; u < cfg.n_uavs; ++u) {
    UavState& s = w.uavs[u];
    s.pos = {uav_rng.uniform(0.0, cfg.arena_side), uav_rng.uniform(0.0, cfg.arena_side),
             cfg.uav_altitude};
    s.local_queue.node = NodeId::uav(u);
  }
  return w;
}

double hover_power(const UavParams& p) {
  if (p.hover_power_w) return *p.hover_power_w;
  const double weight = p.mass * kGravity;
  return std::sqrt(weight * weight * weight /
                   (2.0 * std::numbers::pi * p.prop_radius * p.prop_count * p.air_density));
}

double move_power(double v, const UavParams& p) {
  if (!(v >= 0.0 && v <= p.v_max))
    throw DomainError("speed " + std::to_string(v) + " outside [0, v_max]");
  return v / p.v_max * (p.p_max - p.p_stop);
}

double flight_energy(double delta, double v, const UavParams& p, double tau) {
  if (!(delta >= 0.0)) throw DomainError("flight distance must be >= 0");
  const double motion = move_power(v, p);
  if (v == 0.0) {
    if (delta > 0.0) throw DomainError("infeasible motion: distance covered at zero speed");
    return hover_power(p) * tau;
  }
  if (delta > v * tau * (1.0 + 1e-12))
    throw DomainError("infeasible motion: distance exceeds v * tau");
  return (hover_power(p) + motion) * (delta / v);
}

UavStep step_uav(const UavState& uav, const Position3& waypoint, const UavParams& p,
                 double tau) {
  UavStep out{uav, 0.0};
  const double dist = horizontal_distance(uav.pos, waypoint);
  const double reach = p.v_max * tau;
  if (dist == 0.0) {
    out.uav.speed = 0.0;
  } else if (dist <= reach) {
    out.uav.pos.x = waypoint.x;
    out.uav.pos.y = waypoint.y;
    out.uav.speed = dist / tau;
    out.delta = dist;
  } else {
    const double f = reach / dist;
    out.uav.pos.x = uav.pos.x + (waypoint.x - uav.pos.x) * f;
    out.uav.pos.y = uav.pos.y + (waypoint.y - uav.pos.y) * f;
    out.uav.speed = p.v_max;
    out.delta = reach;
  }
  const double e = flight_energy(out.delta, out.uav.speed, p, tau);
  out.uav.flight_energy += e;
  out.uav.energy_spent += e;
  return out;
}

bool in_area(const Position3& pos, const TaskArea& area) {
  const double dx = pos.x - area.center.x;
  const double dy = pos.y - area.center.y;
  return dx * dx + dy * dy <= area.radius * area.radius;
}

void spawn_arrivals(WorldState& w) {
  const TaskDistribution& dist = w.scenario.world.tasks;
  if (dist.arrival_prob <= 0.0) return;
  for (int m = 0; m < static_cast<int>(w.areas.size()); ++m) {
    if (!w.arrival_rng.bernoulli(dist.arrival_prob)) continue;
    const int n = static_cast<int>(w.tasks[m].size());
    TaskSpec t = draw_task(w.arrival_rng, dist, m, n, w.slot);
    w.tasks[m].push_back(t);
    w.lifecycle[m].emplace_back();
    w.areas[m].queue.push_back(t);
  }
}

int area_task_count(const WorldState& w, int area) {
  return static_cast<int>(w.tasks.at(area).size());
}

}  // namespace lain
