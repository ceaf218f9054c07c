#include <doctest.h>

#include "../common/oracles.hpp"
#include "helpers.hpp"
#include "lain/errors.hpp"
#include "lain/offloading.hpp"

using namespace lain;
using test::task;

TEST_CASE("local wait sums queued service times") {
  NodeQueue q;
  CHECK(local_wait(q, 2e9) == 0.0);
  q.entries.push_back(task(1e6));
  CHECK(local_wait(q, 2e9) == doctest::Approx(0.15));
  q.entries.push_back(task(1e6));
  CHECK(local_wait(q, 2e9) == doctest::Approx(0.30));
  CHECK_THROWS_AS(local_wait(q, 0.0), DomainError);
}

TEST_CASE("local completion and energy") {
  UavParams p;
  UavState u;
  TaskArea a;
  a.radius = 100.0;
  const TaskSpec t = task(1e6);
  CHECK(local_completion(t, u, p, a, 0.0) == doctest::Approx(0.15));
  CHECK(local_completion(t, u, p, a, 5.0) == doctest::Approx(5.15));
  u.local_queue.entries.push_back(task(2e6));
  CHECK(local_completion(t, u, p, a, 0.0) ==
        doctest::Approx(0.15 + local_wait(u.local_queue, p.cpu_hz)));
  u.pos = {500.0, 0.0, 30.0};
  CHECK_THROWS_AS(local_completion(t, u, p, a, 0.0), ConstraintError);

  CHECK(local_energy(t, p) == doctest::Approx(0.12));
  CHECK(local_energy(task(0.0), p) == 0.0);
  UavParams fast = p;
  fast.cpu_hz *= 2.0;
  CHECK(local_energy(t, fast) == doctest::Approx(4.0 * local_energy(t, p)));
}

TEST_CASE("offload completion and energy") {
  NodeQueue idle;
  const TaskSpec t = task(1e6);
  CHECK(offload_completion(t, 10e6, idle, 3e9, 0.0) == doctest::Approx(0.2));
  CHECK(offload_completion(t, 1e300, idle, 3e9, 0.0) == doctest::Approx(0.1));
  NodeQueue busy;
  busy.entries.push_back(task(2e6));
  CHECK(offload_completion(t, 10e6, busy, 3e9, 0.0) ==
        doctest::Approx(0.2 + local_wait(busy, 3e9)));
  CHECK_THROWS_AS(offload_completion(t, 0.0, idle, 3e9, 0.0), LinkUnavailableError);

  UavParams p;
  CHECK(offload_energy(t, 10e6, p, 1e-28, 3e9) == doctest::Approx(0.28));
  CHECK(offload_energy(task(0.0), 10e6, p, 1e-28, 3e9) == 0.0);
  CHECK(offload_energy(t, 20e6, p, 1e-28, 3e9) < offload_energy(t, 10e6, p, 1e-28, 3e9));
  CHECK_THROWS_AS(offload_energy(t, -1.0, p, 1e-28, 3e9), LinkUnavailableError);
}

TEST_CASE("plan and apply match the brute-force recomputation") {
  Rng rng(2024);
  for (int i = 0; i < 200; ++i) {
    const WorldState w = oracle::random_offload_world(rng);
    const TaskSpec& t = w.tasks[0][0];
    for (NodeId ex : {NodeId::uav(0), NodeId::tbs(0), NodeId::abs()}) {
      const ExecutionPlan p = plan_execution(w, t, 0, ex);
      const oracle::Exec o = oracle::execution(w, t, 0, ex);
      CHECK(p.completion == o.completion);
      CHECK(p.energy == o.energy);
      CHECK(std::abs(p.start + p.transmit + p.wait + p.service - p.completion) < 1e-9);
      if (!reachable(w, 0, ex)) continue;
      WorldState after = w;
      apply_decision(after, {t.ref(), ex, 0, w.slot});
      CHECK(after.life(t.ref()).completion_s == o.completion);
      CHECK(after.life(t.ref()).energy_j == o.energy);
    }
  }
}

namespace {

WorldState ready_world() {
  Scenario sc = test::small_scenario(2, 1, 1, 3);
  WorldState w = init_world(sc);
  w.link_bandwidth_hz = sc.channel.ground.bandwidth_hz;
  w.uavs[0].pos = {w.areas[0].center.x, w.areas[0].center.y, sc.world.uav_altitude};
  w.uavs[0].assigned_area = 0;
  return w;
}

}  // namespace

TEST_CASE("apply_decision bookkeeping") {
  WorldState w = ready_world();
  const TaskRef r{0, 0};
  apply_decision(w, {r, NodeId::uav(0), 0, 0});
  CHECK(w.life(r).status == TaskStatus::InService);
  CHECK(w.life(r).decision_count == 1);
  CHECK(w.uavs[0].local_queue.entries.size() == 1);
  CHECK(w.areas[0].queue.size() == 2);
  CHECK(w.uavs[0].processing_energy == doctest::Approx(local_energy(w.task(r), w.scenario.world.uav)));

  CHECK_THROWS_AS(apply_decision(w, {r, NodeId::abs(), 0, 0}), SingleAssignmentError);

  const TaskRef r1{0, 1};
  apply_decision(w, {r1, NodeId::abs(), 0, 0});
  CHECK(w.abs.queue.entries.size() == 1);
  CHECK(w.abs.queue.entries[0].ref() == r1);
}

TEST_CASE("apply_decision rejects absent or unassigned UAVs and leaves the world alone") {
  WorldState w = ready_world();
  const WorldState before = w;
  CHECK_THROWS_AS(apply_decision(w, {{0, 0}, NodeId::uav(1), 1, 0}), ConstraintError);
  w.uavs[0].pos.x += 500.0;
  CHECK_THROWS_AS(apply_decision(w, {{0, 0}, NodeId::uav(0), 0, 0}), ConstraintError);
  w = before;
  w.scenario.channel.abs_range_m = 1.0;
  CHECK_THROWS_AS(apply_decision(w, {{0, 0}, NodeId::abs(), 0, 0}), ConstraintError);
  w.scenario.channel.abs_range_m = before.scenario.channel.abs_range_m;
  CHECK(w == before);
}

TEST_CASE("settle uses a closed deadline inequality") {
  WorldState w = ready_world();
  const double tau = w.scenario.world.slot_seconds;
  CHECK(settle_slot(w, 0).empty());

  const TaskRef r{0, 0};
  apply_decision(w, {r, NodeId::uav(0), 0, 0});
  w.uavs[0].local_queue.entries[0].deadline_slot = 2;
  w.life(r).completion_s = 2.0 * tau;
  CHECK(settle_slot(w, 1).empty());
  auto recs = settle_slot(w, 2);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].completion_time == recs[0].deadline);
  CHECK(recs[0].succeeded);
  CHECK(w.life(r).status == TaskStatus::Succeeded);
  CHECK(w.uavs[0].local_queue.entries.empty());

  const TaskRef r1{0, 1};
  apply_decision(w, {r1, NodeId::uav(0), 0, 0});
  w.uavs[0].local_queue.entries[0].deadline_slot = 2;
  w.life(r1).completion_s = 3.0 * tau;
  CHECK(settle_slot(w, 2).empty());
  recs = settle_slot(w, 3);
  REQUIRE(recs.size() == 1);
  CHECK_FALSE(recs[0].succeeded);
  CHECK(w.life(r1).status == TaskStatus::Expired);
}
