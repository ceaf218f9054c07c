#include "lain/policies.hpp"

#include <algorithm>
#include <limits>
#include <map>

namespace lain {

std::string to_string(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::GmSp: return "gmsp";
    case BaselineKind::MuSo: return "muso";
    case BaselineKind::LbRbo: return "lbrbo";
  }
  return "?";
}

std::vector<int> nearest_area_assignment(const WorldState& w, const std::vector<int>& open) {
  std::vector<int> out(w.uavs.size(), -1);
  for (std::size_t u = 0; u < w.uavs.size(); ++u) {
    double best = std::numeric_limits<double>::infinity();
    for (int m : open) {
      const double d = horizontal_distance(w.uavs[u].pos, w.areas[m].center);
      if (d < best || (d == best && m < out[u])) {
        best = d;
        out[u] = m;
      }
    }
  }
  return out;
}

std::vector<int> muso_assignment(const WorldState& w, const std::vector<int>& open,
                                 const MuSoWeights& weights) {
  std::vector<int> out(w.uavs.size(), -1);
  for (std::size_t u = 0; u < w.uavs.size(); ++u) {
    double best = -std::numeric_limits<double>::infinity();
    for (int m : open) {
      int earliest = std::numeric_limits<int>::max();
      for (const TaskSpec& t : w.areas[m].queue) earliest = std::min(earliest, t.deadline_slot);
      const double slack = std::max(0, earliest - w.slot);
      const double d = horizontal_distance(w.uavs[u].pos, w.areas[m].center);
      const double score = weights.proximity / (1.0 + d) + weights.urgency / (1.0 + slack);
      if (score > best || (score == best && m < out[u])) {
        best = score;
        out[u] = m;
      }
    }
  }
  return out;
}

int muso_choice(const WorldState& w, int uav, const TaskSpec& task, const ActionSpace& space) {
  const UavParams& p = w.scenario.world.uav;
  const double tau = w.scenario.world.slot_seconds;
  const double local_done =
      w.now() + local_wait(w.uavs[uav].local_queue, p.cpu_hz) + task.cycles() / p.cpu_hz;
  if (local_done <= task.deadline_slot * tau) return 0;
  int nearest_tbs = -1;
  double nearest = std::numeric_limits<double>::infinity();
  int abs_index = -1;
  for (int i = 0; i < space.size(); ++i) {
    if (!space.mask[i]) continue;
    const NodeId id = space.candidates[i];
    if (id.kind == NodeKind::Tbs) {
      const double d = distance(w.uavs[uav].pos, w.tbs[id.index].pos);
      if (d < nearest) {
        nearest = d;
        nearest_tbs = i;
      }
    } else if (id.kind == NodeKind::Abs) {
      abs_index = i;
    }
  }
  if (nearest_tbs >= 0) return nearest_tbs;
  if (abs_index >= 0) return abs_index;
  return 0;
}

double lbrbo_projection(const WorldState& w, const TaskSpec& task, NodeId node) {
  const double cpu = w.node_cpu_hz(node);
  return local_wait(w.node_queue(node), cpu) + task.cycles() / cpu;
}

int lbrbo_choice(const WorldState& w, int /*uav*/, const TaskSpec& task, const ActionSpace& space) {
  int best = 0;
  double best_time = std::numeric_limits<double>::infinity();
  for (int i = 0; i < space.size(); ++i) {
    if (!space.mask[i]) continue;
    const double t = lbrbo_projection(w, task, space.candidates[i]);
    if (t < best_time) {
      best_time = t;
      best = i;
    }
  }
  return best;
}

namespace {

using ChoiceFn = int (*)(const WorldState&, int, const TaskSpec&, const ActionSpace&);

int local_choice(const WorldState&, int, const TaskSpec&, const ActionSpace&) { return 0; }

PolicyDecisions snapshot_decide(const WorldState& w, std::vector<int> assignment, ChoiceFn choose) {
  PolicyDecisions out;
  out.assignment = std::move(assignment);
  std::map<int, std::size_t> taken;  // area -> tasks already handed out
  for (int u = 0; u < static_cast<int>(w.uavs.size()); ++u) {
    const auto& a = w.uavs[u].assigned_area;
    if (!a || !can_serve(w, u, *a)) continue;
    const auto& queue = w.areas[*a].queue;
    std::size_t& k = taken[*a];
    if (k >= queue.size()) continue;
    const TaskSpec& task = queue[k++];
    const ActionSpace space = action_space(w, u);
    out.decisions.push_back({task.ref(), space.candidates[choose(w, u, task, space)], u, w.slot});
  }
  return out;
}

}  // namespace

PolicyDecisions gmsp_decide(const WorldState& w) {
  return snapshot_decide(w, nearest_area_assignment(w, open_areas(w)), local_choice);
}

PolicyDecisions muso_decide(const WorldState& w, const MuSoWeights& weights) {
  return snapshot_decide(w, muso_assignment(w, open_areas(w), weights), muso_choice);
}

PolicyDecisions lbrbo_decide(const WorldState& w) {
  return snapshot_decide(w, nearest_area_assignment(w, open_areas(w)), lbrbo_choice);
}

std::vector<int> BaselineController::assign(const WorldState& w, const std::vector<int>& open) {
  if (kind_ == BaselineKind::MuSo) return muso_assignment(w, open, weights_);
  return nearest_area_assignment(w, open);
}

int BaselineController::choose(const WorldState& w, int uav, const TaskSpec& task,
                               const ActionSpace& space) {
  switch (kind_) {
    case BaselineKind::GmSp: return 0;
    case BaselineKind::MuSo: return muso_choice(w, uav, task, space);
    case BaselineKind::LbRbo: return lbrbo_choice(w, uav, task, space);
  }
  return 0;
}

std::vector<int> auction_assignment(const WorldState& w, const std::vector<int>& open,
                                    const AuctionWeights& weights) {
  const AreaAuction round = auction_round(w, open, weights);
  std::vector<int> out(w.uavs.size(), -1);
  for (std::size_t u = 0; u < w.uavs.size(); ++u) {
    const int k = round.result.assignment[u];
    if (k >= 0) out[u] = open[static_cast<std::size_t>(k)];
  }
  return out;
}

}  // namespace lain
