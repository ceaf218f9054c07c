#ifndef LAIN_CONFIG_HPP_
#define LAIN_CONFIG_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lain/auction.hpp"
#include "lain/marl/happo.hpp"
#include "lain/policies.hpp"
#include "lain/world.hpp"

namespace lain {

enum class SweepAxis { UavCount, TaskSizeMbit, BandwidthMHz };

std::string to_string(SweepAxis a);
SweepAxis parse_sweep_axis(const std::string& s);

struct SweepConfig {
  SweepAxis axis = SweepAxis::UavCount;
  std::vector<double> values;
  bool operator==(const SweepConfig&) const = default;
};

struct PolicyConfig {
  // gmsp, muso, lbrbo, happo, dhappo
  std::vector<std::string> names{"gmsp"};
  MuSoWeights muso;
  // Learned policies load this when set, otherwise train in-process.
  std::string checkpoint;
  bool greedy = true;
  double beta_obj = 1.0;
  bool operator==(const PolicyConfig&) const = default;
};

struct RunConfig {
  Scenario scenario;
  AuctionWeights auction;
  PolicyConfig policy;
  marl::TrainingConfig training;
  std::optional<SweepConfig> sweep;
  int repetitions = 1;
  std::uint64_t seed = 1;  // first episode seed; repetition r uses seed + r
  int threads = 0;         // 0 = hardware concurrency
  std::string output_path = "results.csv";

  void validate() const;
  bool operator==(const RunConfig&) const = default;
};

bool is_known_policy(const std::string& name);
bool is_learned_policy(const std::string& name);

// Reads the JSON layout below; any key may be omitted to keep its default,
// unknown keys are rejected.
//   { "world": {...}, "channel": {...}, "auction": {...}, "policy": {...},
//     "training": {...}, "sweep": {"axis": "uav_count", "values": [...]},
//     "repetitions": 10, "seed": 1, "threads": 0, "output_path": "..." }
// Throws ConfigError naming the offending field.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

// Applies one sweep value to a scenario. Task size v (Mbit) maps to sizes
// uniform in [2v/3, 4v/3] Mbit; bandwidth v is the total in MHz.
Scenario apply_sweep_value(Scenario base, SweepAxis axis, double value);

}  // namespace lain

#endif  // LAIN_CONFIG_HPP_
