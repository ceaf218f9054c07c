#ifndef LAIN_TEST_HELPERS_HPP_
#define LAIN_TEST_HELPERS_HPP_

#include <cmath>

#include "lain/world.hpp"

namespace lain::test {

inline bool rel_close(double a, double b, double rel, double abs_tol = 0.0) {
  return std::fabs(a - b) <= std::max(abs_tol, rel * std::max(std::fabs(a), std::fabs(b)));
}

inline Scenario small_scenario(int uavs = 3, int tbs = 2, int areas = 2, int tasks = 5,
                               std::uint64_t seed = 7) {
  Scenario s;
  s.world.n_uavs = uavs;
  s.world.n_tbs = tbs;
  s.world.n_areas = areas;
  s.world.tasks_per_area = tasks;
  s.world.n_slots = 30;
  s.world.master_seed = seed;
  return s;
}

inline TaskSpec task(double bits, double density = 300.0, int deadline = 10, int area = 0,
                     int id = 0) {
  TaskSpec t;
  t.area_id = area;
  t.task_id = id;
  t.size_bits = bits;
  t.density = density;
  t.deadline_slot = deadline;
  return t;
}

}  // namespace lain::test

#endif  // LAIN_TEST_HELPERS_HPP_
