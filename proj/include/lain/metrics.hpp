#ifndef LAIN_METRICS_HPP_
#define LAIN_METRICS_HPP_

#include <span>
#include <vector>

#include "lain/offloading.hpp"
#include "lain/world.hpp"

namespace lain {

struct ChargedDecision {
  OffloadDecision decision;
  double energy = 0.0;  // J
};

struct EpisodeMetrics {
  double system_energy = 0.0;   // J
  double bits_succeeded = 0.0;
  double eta = 0.0;             // bits per joule
  std::vector<double> completion_ratio_per_area;
  double completion_ratio = 0.0;  // all succeeded / all generated
  double avg_latency = 0.0;       // s, spawn to completion, succeeded tasks only
  double objective = 0.0;
  double beta_obj = 1.0;
  int tasks_total = 0;
  int tasks_succeeded = 0;
};

double slot_processing_energy(std::span<const ChargedDecision> decisions);

// Throws DomainError on negative inputs.
double uav_slot_energy(double flight, double processing);

// Aggregates a finished episode from the UAV energy ledgers and the
// completion records held in `world`. avg_latency is 0 when nothing
// succeeded. Throws AccountingError if bits succeeded with zero energy.
EpisodeMetrics episode_metrics(const WorldState& world, double beta_obj);

// Running totals fed once per slot; must agree with episode_metrics.
class MetricsAccumulator {
 public:
  void add_slot(std::span<const double> uav_slot_energies,
                std::span<const CompletionRecord> finalized);
  double system_energy() const { return energy_; }
  double bits_succeeded() const { return bits_; }
  double eta() const { return energy_ > 0.0 ? bits_ / energy_ : 0.0; }

 private:
  double energy_ = 0.0;
  double bits_ = 0.0;
};

}  // namespace lain

#endif  // LAIN_METRICS_HPP_
