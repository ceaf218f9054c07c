#ifndef LAIN_AUCTION_HPP_
#define LAIN_AUCTION_HPP_

#include <optional>
#include <span>
#include <vector>

#include "lain/estimator.hpp"
#include "lain/world.hpp"

namespace lain {

struct AuctionWeights {
  // Negative gamma1 makes higher estimated energy lower the utility.
  double gamma1 = -0.001;
  double gamma2 = 1.0;
  double bid_scale = 1.0;
  // Maximum UAVs per area; unlimited when empty.
  std::optional<int> capacity;

  void validate() const;
  bool operator==(const AuctionWeights&) const = default;
};

// Row-major U x M grids of bids and utilities.
struct BidMatrix {
  int n_uavs = 0;
  int n_areas = 0;
  std::vector<double> values;
  std::vector<double> utilities;
  AuctionWeights weights;

  double bid(int u, int m) const { return values[static_cast<std::size_t>(u * n_areas + m)]; }
  double utility(int u, int m) const {
    return utilities[static_cast<std::size_t>(u * n_areas + m)];
  }
};

struct AuctionResult {
  std::vector<int> assignment;             // area per UAV, -1 when excluded
  std::vector<double> prices;              // VCG price per UAV
  std::vector<std::vector<int>> area_sets; // UAVs per area, ascending
  double total_utility = 0.0;
};

double utility(const AreaEstimate& est, double gamma1, double gamma2);

// b = bid_scale * U for every pair. Throws ConfigError for bid_scale <= 0.
BidMatrix build_bids(const std::vector<std::vector<AreaEstimate>>& estimates,
                     const AuctionWeights& weights);
BidMatrix bids_from_utilities(int n_uavs, int n_areas, std::vector<double> utilities,
                              const AuctionWeights& weights);

// Each UAV takes its highest-bid area, lowest area index on ties. With a
// capacity, areas keep their highest bidders (lowest UAV index on ties) and
// rejected UAVs move down their own bid order.
AuctionResult allocate(const BidMatrix& bids);

// Allocation over the UAVs with active[u] == true; others get -1.
AuctionResult allocate_subset(const BidMatrix& bids, const std::vector<bool>& active);

// Price_u = U(all) - U(all without u), each side from a fresh allocation.
AuctionResult vcg_prices(AuctionResult result, const BidMatrix& bids);

inline AuctionResult run_auction(const BidMatrix& bids) { return vcg_prices(allocate(bids), bids); }

// Change in UAV u's payoff (true utility of its area minus its price) when it
// reports `reported_row` instead of its true bids.
double misreport_gain(const BidMatrix& truthful, int u, std::span<const double> reported_row);

// Nearest point of the area disc to the UAV, at the UAV's altitude.
Position3 plan_waypoint(const UavState& uav, const TaskArea& area);

// Estimates every (UAV, area) pair and runs the auction over the areas
// listed in `areas`; the returned assignment uses indices into `areas`.
struct AreaAuction {
  std::vector<std::vector<AreaEstimate>> estimates;
  BidMatrix bids;
  AuctionResult result;
  std::vector<int> areas;
};
AreaAuction auction_round(const WorldState& world, const std::vector<int>& areas,
                          const AuctionWeights& weights);

}  // namespace lain

#endif  // LAIN_AUCTION_HPP_
