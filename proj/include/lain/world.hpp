#ifndef LAIN_WORLD_HPP_
#define LAIN_WORLD_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lain/channel.hpp"
#include "lain/geometry.hpp"
#include "lain/rng.hpp"

namespace lain {

constexpr double kGravity = 9.8;

// ---------------------------------------------------------------------------
// Tasks and nodes

struct TaskRef {
  int area = 0;
  int task = 0;
  bool operator==(const TaskRef&) const = default;
};

// Immutable description of one computation task. Lifecycle state lives in
// TaskLifecycle so that queue entries can be plain value copies.
struct TaskSpec {
  int area_id = 0;
  int task_id = 0;
  double size_bits = 0.0;
  double density = 0.0;    // cycles per bit
  int deadline_slot = 0;   // absolute slot index
  int spawn_slot = 0;

  TaskRef ref() const { return {area_id, task_id}; }
  double cycles() const { return size_bits * density; }
  bool operator==(const TaskSpec&) const = default;
};

enum class TaskStatus { Pending, InService, Succeeded, Expired };

enum class NodeKind { Uav, Tbs, Abs };

struct NodeId {
  NodeKind kind = NodeKind::Uav;
  int index = 0;  // 0 for the ABS

  static NodeId uav(int i) { return {NodeKind::Uav, i}; }
  static NodeId tbs(int i) { return {NodeKind::Tbs, i}; }
  static NodeId abs() { return {NodeKind::Abs, 0}; }
  bool operator==(const NodeId&) const = default;
};

std::string to_string(NodeId id);
std::string to_string(TaskStatus s);

// FIFO queue of a computing node.
struct NodeQueue {
  NodeId node;
  std::vector<TaskSpec> entries;
  bool operator==(const NodeQueue&) const = default;
};

// Per-task bookkeeping, filled in when the single decision for the task is
// applied.
struct TaskLifecycle {
  TaskStatus status = TaskStatus::Pending;
  int decision_count = 0;
  NodeId executor;
  int origin_uav = -1;
  int decided_slot = -1;
  double start_s = 0.0;
  double transmit_s = 0.0;
  double wait_s = 0.0;
  double service_s = 0.0;
  double completion_s = 0.0;
  double energy_j = 0.0;
  bool operator==(const TaskLifecycle&) const = default;
};

struct TaskArea {
  Position3 center;  // z = 0
  double radius = 0.0;
  std::vector<TaskSpec> queue;  // Pending tasks, arrival order
  bool operator==(const TaskArea&) const = default;
};

// ---------------------------------------------------------------------------
// UAVs

struct UavParams {
  double mass = 2.0;          // kg
  double prop_radius = 0.2;   // m
  double prop_count = 4.0;
  double air_density = 1.225; // kg/m^3
  double v_max = 15.0;        // m/s
  double p_max = 60.0;        // W at v_max
  double p_stop = 10.0;       // W when stopped
  double cpu_hz = 2e9;
  double tx_power = 0.1;      // W
  double kappa = 1e-28;
  // When set, replaces the rotor-disc hover model.
  std::optional<double> hover_power_w;

  void validate() const;
  bool operator==(const UavParams&) const = default;
};

struct UavState {
  Position3 pos;
  double speed = 0.0;
  std::optional<int> assigned_area;
  NodeQueue local_queue;
  double energy_spent = 0.0;
  double flight_energy = 0.0;
  double processing_energy = 0.0;
  bool operator==(const UavState&) const = default;
};

struct GroundNode {
  Position3 pos;
  double cpu_hz = 0.0;
  double kappa = 0.0;
  NodeQueue queue;
  bool operator==(const GroundNode&) const = default;
};

// ---------------------------------------------------------------------------
// Configuration

struct TaskDistribution {
  double size_min_bits = 0.5e6;
  double size_max_bits = 1.0e6;
  double density = 300.0;
  int deadline_min_slots = 5;
  int deadline_max_slots = 30;
  // Per-slot, per-area Bernoulli arrival probability. Off by default.
  double arrival_prob = 0.0;
  bool operator==(const TaskDistribution&) const = default;
};

struct WorldConfig {
  double arena_side = 1000.0;
  double slot_seconds = 1.0;
  int n_slots = 100;
  double uav_altitude = 30.0;
  int n_uavs = 6;
  int n_tbs = 2;
  int n_areas = 4;
  int tasks_per_area = 20;
  double area_radius = 100.0;
  // Optional fixed layouts; sampled / defaulted when empty.
  std::vector<Position3> area_centers;
  std::vector<Position3> tbs_positions;
  std::optional<Position3> abs_position;
  double abs_altitude = 200.0;
  TaskDistribution tasks;
  UavParams uav;
  double tbs_cpu_hz = 3e9;
  double abs_cpu_hz = 4e9;
  double tbs_kappa = 1e-28;
  double abs_kappa = 1e-28;
  std::uint64_t master_seed = 1;

  void validate() const;
  bool operator==(const WorldConfig&) const = default;
};

struct ChannelConfig {
  AirGroundParams air;
  GroundLinkParams ground;
  // Reachability radii (3-D distance) for offloading destinations.
  double tbs_range_m = 500.0;
  double uav_range_m = 300.0;
  double abs_range_m = 2000.0;

  void validate() const;
  bool operator==(const ChannelConfig&) const = default;
};

struct Scenario {
  WorldConfig world;
  ChannelConfig channel;

  void validate() const {
    world.validate();
    channel.validate();
  }
  bool operator==(const Scenario&) const = default;
};

// ---------------------------------------------------------------------------
// World state

struct CompletionRecord {
  TaskRef task;
  double completion_time = 0.0;  // s
  double deadline = 0.0;         // s
  double spawn_time = 0.0;       // s
  double size_bits = 0.0;
  bool succeeded = false;
  double energy = 0.0;           // J charged at decision time
  int slot = 0;                  // slot in which it was finalized
  bool operator==(const CompletionRecord&) const = default;
};

struct WorldState {
  Scenario scenario;
  int slot = 0;
  std::vector<TaskArea> areas;
  std::vector<std::vector<TaskSpec>> tasks;          // [area][task], every task ever spawned
  std::vector<std::vector<TaskLifecycle>> lifecycle; // parallel to tasks
  std::vector<UavState> uavs;
  std::vector<GroundNode> tbs;
  GroundNode abs;
  // Bandwidth available to each offloading link in the current slot.
  double link_bandwidth_hz = 0.0;
  std::vector<CompletionRecord> completions;
  Rng arrival_rng;

  double now() const { return slot * scenario.world.slot_seconds; }
  const TaskSpec& task(TaskRef r) const { return tasks[r.area][r.task]; }
  const TaskLifecycle& life(TaskRef r) const { return lifecycle[r.area][r.task]; }
  TaskLifecycle& life(TaskRef r) { return lifecycle[r.area][r.task]; }

  Position3 node_position(NodeId id) const;
  double node_cpu_hz(NodeId id) const;
  double node_kappa(NodeId id) const;
  const NodeQueue& node_queue(NodeId id) const;
  NodeQueue& node_queue(NodeId id);

  bool operator==(const WorldState&) const = default;
};

// ---------------------------------------------------------------------------
// Operations

// Builds the t = 0 state. Throws ConfigError naming the offending field.
WorldState init_world(const Scenario& scenario);

// Rotor-disc hover power sqrt((M g)^3 / (2 pi rho p theta)), or the pinned
// value when hover_power_w is set.
double hover_power(const UavParams& params);

// (v / v_max) (p_max - p_stop). Throws DomainError for v outside [0, v_max].
double move_power(double v, const UavParams& params);

// Energy to cover `delta` meters at speed v. A stationary slot (v == 0) is
// charged hover_power * tau. Throws DomainError when delta > v * tau.
double flight_energy(double delta, double v, const UavParams& params, double tau);

struct UavStep {
  UavState uav;
  double delta = 0.0;  // horizontal distance covered
};

// Straight-line motion toward `waypoint` at min(v_max, dist / tau); charges
// the slot's flight energy to the UAV's ledger.
UavStep step_uav(const UavState& uav, const Position3& waypoint,
                 const UavParams& params, double tau);

// Closed-disc membership, altitude ignored.
bool in_area(const Position3& pos, const TaskArea& area);

// Spawns one Bernoulli arrival per area at the current slot, when enabled.
void spawn_arrivals(WorldState& world);

// Tasks of `area` that have been generated so far.
int area_task_count(const WorldState& world, int area);

}  // namespace lain

#endif  // LAIN_WORLD_HPP_
