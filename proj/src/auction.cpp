#include "lain/auction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lain/errors.hpp"

namespace lain {

void AuctionWeights::validate() const {
  if (!std::isfinite(gamma1)) throw ConfigError("auction.gamma1", "must be finite");
  if (!std::isfinite(gamma2)) throw ConfigError("auction.gamma2", "must be finite");
  if (!(bid_scale > 0.0) || !std::isfinite(bid_scale))
    throw ConfigError("auction.bid_scale", "must be finite and > 0");
  if (capacity && *capacity < 1) throw ConfigError("auction.capacity", "must be >= 1");
}

double utility(const AreaEstimate& est, double gamma1, double gamma2) {
  return gamma1 * est.est_energy + gamma2 * static_cast<double>(est.est_success);
}

BidMatrix bids_from_utilities(int n_uavs, int n_areas, std::vector<double> utilities,
                              const AuctionWeights& weights) {
  weights.validate();
  if (n_uavs < 1 || n_areas < 1) throw ShapeError("bid matrix needs at least one UAV and area");
  if (utilities.size() != static_cast<std::size_t>(n_uavs) * n_areas)
    throw ShapeError("utility grid does not match U x M");
  BidMatrix b;
  b.n_uavs = n_uavs;
  b.n_areas = n_areas;
  b.weights = weights;
  b.utilities = std::move(utilities);
  b.values.reserve(b.utilities.size());
  for (double u : b.utilities) {
    if (!std::isfinite(u)) throw DomainError("non-finite utility");
    b.values.push_back(weights.bid_scale * u);
  }
  return b;
}

BidMatrix build_bids(const std::vector<std::vector<AreaEstimate>>& estimates,
                     const AuctionWeights& weights) {
  weights.validate();
  const int n_uavs = static_cast<int>(estimates.size());
  const int n_areas = n_uavs > 0 ? static_cast<int>(estimates[0].size()) : 0;
  std::vector<double> utilities;
  for (const auto& row : estimates) {
    if (static_cast<int>(row.size()) != n_areas) throw ShapeError("ragged estimate grid");
    for (const auto& e : row) utilities.push_back(utility(e, weights.gamma1, weights.gamma2));
  }
  return bids_from_utilities(n_uavs, n_areas, std::move(utilities), weights);
}

namespace {

// Areas in descending bid order for one UAV, lowest index first on ties.
std::vector<int> preference_order(const BidMatrix& b, int u) {
  std::vector<int> order(static_cast<std::size_t>(b.n_areas));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return b.bid(u, x) > b.bid(u, y); });
  return order;
}

int row_argmax(const BidMatrix& b, int u) {
  int best = 0;
  for (int m = 1; m < b.n_areas; ++m)
    if (b.bid(u, m) > b.bid(u, best)) best = m;
  return best;
}

}  // namespace

AuctionResult allocate_subset(const BidMatrix& b, const std::vector<bool>& active) {
  if (b.n_areas < 1) throw ShapeError("auction needs at least one area");
  AuctionResult r;
  r.assignment.assign(static_cast<std::size_t>(b.n_uavs), -1);
  r.prices.assign(static_cast<std::size_t>(b.n_uavs), 0.0);
  r.area_sets.assign(static_cast<std::size_t>(b.n_areas), {});

  if (!b.weights.capacity) {
    for (int u = 0; u < b.n_uavs; ++u)
      if (active[u]) r.assignment[u] = row_argmax(b, u);
  } else {
    const int cap = *b.weights.capacity;
    const auto n_active = std::count(active.begin(), active.end(), true);
    if (static_cast<long>(cap) * b.n_areas < n_active)
      throw ConfigError("auction.capacity", "total capacity is below the number of UAVs");
    // Deferred acceptance: areas hold their best `cap` proposers.
    std::vector<std::vector<int>> prefs(static_cast<std::size_t>(b.n_uavs));
    std::vector<int> next(static_cast<std::size_t>(b.n_uavs), 0);
    std::vector<int> free_uavs;
    for (int u = 0; u < b.n_uavs; ++u) {
      if (!active[u]) continue;
      prefs[u] = preference_order(b, u);
      free_uavs.push_back(u);
    }
    std::vector<std::vector<int>> held(static_cast<std::size_t>(b.n_areas));
    while (!free_uavs.empty()) {
      std::sort(free_uavs.begin(), free_uavs.end());
      const int u = free_uavs.front();
      free_uavs.erase(free_uavs.begin());
      const int m = prefs[u][next[u]++];
      auto& h = held[m];
      h.push_back(u);
      std::stable_sort(h.begin(), h.end(), [&](int x, int y) {
        if (b.bid(x, m) != b.bid(y, m)) return b.bid(x, m) > b.bid(y, m);
        return x < y;
      });
      if (static_cast<int>(h.size()) > cap) {
        free_uavs.push_back(h.back());
        h.pop_back();
      }
    }
    for (int m = 0; m < b.n_areas; ++m)
      for (int u : held[m]) r.assignment[u] = m;
  }

  for (int u = 0; u < b.n_uavs; ++u) {
    const int m = r.assignment[u];
    if (m < 0) continue;
    r.area_sets[m].push_back(u);
    r.total_utility += b.utility(u, m);
  }
  return r;
}

AuctionResult allocate(const BidMatrix& b) {
  return allocate_subset(b, std::vector<bool>(static_cast<std::size_t>(b.n_uavs), true));
}

AuctionResult vcg_prices(AuctionResult result, const BidMatrix& b) {
  std::vector<bool> active(static_cast<std::size_t>(b.n_uavs), true);
  for (int u = 0; u < b.n_uavs; ++u) {
    active[u] = false;
    const AuctionResult without = allocate_subset(b, active);
    active[u] = true;
    result.prices[u] = result.total_utility - without.total_utility;
  }
  return result;
}

double misreport_gain(const BidMatrix& truthful, int u, std::span<const double> reported_row) {
  if (static_cast<int>(reported_row.size()) != truthful.n_areas)
    throw ShapeError("reported bid row has the wrong length");
  const AuctionResult honest = run_auction(truthful);
  // The mechanism only sees the reported row; the payoff below is measured
  // on the UAV's real utility.
  BidMatrix reported = truthful;
  for (int m = 0; m < truthful.n_areas; ++m) {
    const auto k = static_cast<std::size_t>(u * truthful.n_areas + m);
    reported.values[k] = reported_row[m];
    reported.utilities[k] = reported_row[m] / truthful.weights.bid_scale;
  }
  const AuctionResult outcome = run_auction(reported);
  const double honest_payoff = truthful.utility(u, honest.assignment[u]) - honest.prices[u];
  const double lied_payoff = truthful.utility(u, outcome.assignment[u]) - outcome.prices[u];
  return lied_payoff - honest_payoff;
}

Position3 plan_waypoint(const UavState& uav, const TaskArea& area) {
  if (in_area(uav.pos, area)) return uav.pos;
  const double dx = uav.pos.x - area.center.x;
  const double dy = uav.pos.y - area.center.y;
  const double d = std::hypot(dx, dy);
  // a hair inside the rim so the arrival test is not at the mercy of rounding
  const double reach = area.radius * (1.0 - 1e-9);
  return {area.center.x + dx / d * reach, area.center.y + dy / d * reach, uav.pos.z};
}

AreaAuction auction_round(const WorldState& w, const std::vector<int>& areas,
                          const AuctionWeights& weights) {
  AreaAuction out;
  out.areas = areas;
  const int n_uavs = static_cast<int>(w.uavs.size());
  out.estimates.resize(static_cast<std::size_t>(n_uavs));
  for (int u = 0; u < n_uavs; ++u)
    for (int m : areas) out.estimates[u].push_back(estimate_area(w, u, m));
  out.bids = build_bids(out.estimates, weights);
  out.result = run_auction(out.bids);
  return out;
}

}  // namespace lain
