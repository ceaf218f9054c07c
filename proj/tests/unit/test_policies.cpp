#include <doctest.h>

#include "helpers.hpp"
#include "lain/engine.hpp"
#include "lain/policies.hpp"

using namespace lain;

namespace {

WorldState two_area_world() {
  Scenario sc = test::small_scenario(1, 1, 2, 3);
  sc.world.area_centers = {{150.0, 100.0, 0.0}, {500.0, 500.0, 0.0}};
  WorldState w = init_world(sc);
  w.uavs[0].pos = {50.0, 100.0, 30.0};
  return w;
}

}  // namespace

TEST_CASE("GM-SP goes to the nearest area and stays local") {
  WorldState w = two_area_world();
  CHECK(nearest_area_assignment(w, {0, 1}) == std::vector<int>{0});
  CHECK(nearest_area_assignment(w, {1}) == std::vector<int>{1});
  // equidistant areas go to the lower index
  w.uavs[0].pos = {325.0, 300.0, 30.0};
  w.areas[0].center = {225.0, 300.0, 0.0};
  w.areas[1].center = {425.0, 300.0, 0.0};
  CHECK(nearest_area_assignment(w, {0, 1}) == std::vector<int>{0});
  CHECK(nearest_area_assignment(w, {1, 0}) == std::vector<int>{0});

  BaselineController g(BaselineKind::GmSp);
  Episode ep(test::small_scenario(3, 2, 2, 6), g);
  ep.run([](const WorldState&, const SlotReport& r) {
    for (const auto& d : r.decisions) CHECK(d.decision.is_local());
  });
}

TEST_CASE("MU-SO") {
  WorldState w = two_area_world();
  MuSoWeights prox{1.0, 0.0};
  CHECK(muso_assignment(w, {0, 1}, prox) == nearest_area_assignment(w, {0, 1}));

  w.uavs[0].pos = w.areas[0].center;
  w.uavs[0].pos.z = 30.0;
  w.uavs[0].assigned_area = 0;
  w.link_bandwidth_hz = w.scenario.channel.ground.bandwidth_hz;
  TaskSpec t = w.areas[0].queue[0];
  const ActionSpace space = action_space(w, 0);
  t.deadline_slot = 100;
  CHECK(muso_choice(w, 0, t, space) == 0);
  t.deadline_slot = 0;
  t.size_bits = 1e7;
  const NodeId late = space.candidates[muso_choice(w, 0, t, space)];
  CHECK(late.kind != NodeKind::Uav);

  ActionSpace none = space;
  for (std::size_t i = 1; i < none.mask.size(); ++i) none.mask[i] = false;
  CHECK(muso_choice(w, 0, t, none) == 0);
}

TEST_CASE("LB-RBO prefers the least loaded node") {
  WorldState w = two_area_world();
  w.uavs[0].pos = w.areas[0].center;
  w.uavs[0].pos.z = 30.0;
  w.uavs[0].assigned_area = 0;
  w.link_bandwidth_hz = w.scenario.channel.ground.bandwidth_hz;
  const TaskSpec t = w.areas[0].queue[0];
  ActionSpace space = action_space(w, 0);
  REQUIRE(space.mask.back());
  CHECK(space.candidates[lbrbo_choice(w, 0, t, space)] == NodeId::abs());

  for (int i = 0; i < 5; ++i) w.abs.queue.entries.push_back(test::task(2e6, 300.0, 10, 1, 100 + i));
  const int pick = lbrbo_choice(w, 0, t, space);
  CHECK(space.candidates[pick] != NodeId::abs());
  for (int i = 0; i < space.size(); ++i)
    if (space.mask[i])
      CHECK(lbrbo_projection(w, t, space.candidates[pick]) <= lbrbo_projection(w, t, space.candidates[i]));

  ActionSpace only = space;
  for (int i = 0; i < only.size(); ++i) only.mask[i] = space.candidates[i] == NodeId::abs();
  CHECK(space.candidates[lbrbo_choice(w, 0, t, only)] == NodeId::abs());
}

TEST_CASE("snapshot decisions respect presence") {
  WorldState w = two_area_world();
  CHECK(gmsp_decide(w).decisions.empty());
  w.uavs[0].pos = w.areas[0].center;
  w.uavs[0].pos.z = 30.0;
  w.uavs[0].assigned_area = 0;
  w.link_bandwidth_hz = w.scenario.channel.ground.bandwidth_hz;
  const PolicyDecisions d = lbrbo_decide(w);
  REQUIRE(d.decisions.size() == 1);
  CHECK(d.decisions[0].task == w.areas[0].queue[0].ref());
  CHECK(muso_decide(w).decisions.size() == 1);
}
