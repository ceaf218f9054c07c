#ifndef LAIN_POLICIES_HPP_
#define LAIN_POLICIES_HPP_

#include <string>
#include <vector>

#include "lain/auction.hpp"
#include "lain/engine.hpp"
#include "lain/world.hpp"

namespace lain {

enum class BaselineKind { GmSp, MuSo, LbRbo };

struct MuSoWeights {
  double proximity = 0.5;
  double urgency = 0.5;
  bool operator==(const MuSoWeights&) const = default;
};

// Nearest open area by horizontal distance to its center, lowest index on ties.
std::vector<int> nearest_area_assignment(const WorldState& world, const std::vector<int>& open);

// argmax of w1 / (1 + distance) + w2 / (1 + slots to the area's earliest deadline).
std::vector<int> muso_assignment(const WorldState& world, const std::vector<int>& open,
                                 const MuSoWeights& weights);

// Local if the projected local completion meets the deadline, else the
// nearest reachable TBS, else the ABS when reachable, else local.
int muso_choice(const WorldState& world, int uav, const TaskSpec& task, const ActionSpace& space);

// Feasible candidate with the smallest queue wait + service time; first in
// candidate order on ties.
int lbrbo_choice(const WorldState& world, int uav, const TaskSpec& task, const ActionSpace& space);
double lbrbo_projection(const WorldState& world, const TaskSpec& task, NodeId node);

// One-shot view of a baseline on a snapshot: the assignment it would make
// over the open areas and the decisions it would take for the UAVs that can
// currently serve their assigned area.
struct PolicyDecisions {
  std::vector<int> assignment;
  std::vector<OffloadDecision> decisions;
};
PolicyDecisions gmsp_decide(const WorldState& world);
PolicyDecisions muso_decide(const WorldState& world, const MuSoWeights& weights = {});
PolicyDecisions lbrbo_decide(const WorldState& world);

class BaselineController : public Controller {
 public:
  explicit BaselineController(BaselineKind kind, MuSoWeights weights = {})
      : kind_(kind), weights_(weights) {}
  std::vector<int> assign(const WorldState& world, const std::vector<int>& open_areas) override;
  int choose(const WorldState& world, int uav, const TaskSpec& task,
             const ActionSpace& space) override;

 private:
  BaselineKind kind_;
  MuSoWeights weights_;
};

// Auction assignment over the open areas (used by the learned policies).
std::vector<int> auction_assignment(const WorldState& world, const std::vector<int>& open,
                                    const AuctionWeights& weights);

std::string to_string(BaselineKind kind);

}  // namespace lain

#endif  // LAIN_POLICIES_HPP_
