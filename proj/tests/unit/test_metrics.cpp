#include <doctest.h>

#include "helpers.hpp"
#include "lain/engine.hpp"
#include "lain/errors.hpp"
#include "lain/metrics.hpp"
#include "lain/policies.hpp"

using namespace lain;

namespace {

CompletionRecord rec(int area, int task, double bits, bool ok, double done = 1.0) {
  CompletionRecord r;
  r.task = {area, task};
  r.size_bits = bits;
  r.succeeded = ok;
  r.completion_time = done;
  return r;
}

}  // namespace

TEST_CASE("slot and UAV energies") {
  CHECK(slot_processing_energy({}) == 0.0);
  std::vector<ChargedDecision> d(1);
  d[0].energy = 0.12;
  CHECK(slot_processing_energy(d) == doctest::Approx(0.12));
  d.push_back({});
  d[1].energy = 0.28;
  CHECK(slot_processing_energy(d) == doctest::Approx(0.40));

  CHECK(uav_slot_energy(850.0, 0.12) == doctest::Approx(850.12));
  CHECK(uav_slot_energy(0.0, 0.0) == 0.0);
  UavParams p;
  p.hover_power_w = 35.0;
  CHECK(uav_slot_energy(flight_energy(0.0, 0.0, p, 1.0), 0.0) == 35.0);
  CHECK_THROWS_AS(uav_slot_energy(-1.0, 0.0), DomainError);
}

TEST_CASE("episode metrics from records") {
  WorldState w = init_world(test::small_scenario(1, 1, 4, 1));
  w.uavs[0].energy_spent = 100.0;
  w.completions.push_back(rec(0, 0, 1e6, true, 3.0));
  EpisodeMetrics m = episode_metrics(w, 1.0);
  CHECK(m.eta == doctest::Approx(10000.0));
  CHECK(m.avg_latency == doctest::Approx(3.0));
  CHECK(m.completion_ratio == doctest::Approx(0.25));

  // an expired task adds nothing to the numerator
  w.completions.push_back(rec(1, 0, 5e6, false));
  CHECK(episode_metrics(w, 1.0).bits_succeeded == m.bits_succeeded);

  w.completions.clear();
  m = episode_metrics(w, 1.0);
  CHECK(m.eta == 0.0);
  CHECK(m.objective == 0.0);
  CHECK(m.avg_latency == 0.0);

  for (int a = 0; a < 4; ++a) w.completions.push_back(rec(a, 0, 1e6, true));
  m = episode_metrics(w, 1.0);
  CHECK(m.objective == doctest::Approx(m.eta + 4.0));
  CHECK(m.completion_ratio == 1.0);

  w.uavs[0].energy_spent = 0.0;
  CHECK_THROWS_AS(episode_metrics(w, 1.0), AccountingError);
}

TEST_CASE("objective grows with successes at fixed energy") {
  WorldState w = init_world(test::small_scenario(1, 1, 2, 3));
  w.uavs[0].energy_spent = 50.0;
  double last = episode_metrics(w, 1.0).objective;
  for (int t = 0; t < 3; ++t) {
    w.completions.push_back(rec(1, t, 1e5, true));
    const double now = episode_metrics(w, 1.0).objective;
    CHECK(now >= last);
    last = now;
  }
}

TEST_CASE("accumulator agrees with the end-of-episode aggregate") {
  for (BaselineKind k : {BaselineKind::GmSp, BaselineKind::MuSo, BaselineKind::LbRbo}) {
    BaselineController ctrl(k);
    Episode ep(test::small_scenario(3, 2, 2, 6, 11), ctrl);
    MetricsAccumulator acc;
    ep.run([&](const WorldState&, const SlotReport& r) { acc.add_slot(r.uav_energy, r.finalized); });
    const EpisodeMetrics m = episode_metrics(ep.world(), 1.0);
    CHECK(test::rel_close(acc.system_energy(), m.system_energy, 1e-9));
    CHECK(test::rel_close(acc.eta(), m.eta, 1e-9, 1e-12));
  }
}
