#include "lain/metrics.hpp"

#include "lain/errors.hpp"

namespace lain {

double slot_processing_energy(std::span<const ChargedDecision> decisions) {
  double total = 0.0;
  for (const auto& d : decisions) total += d.energy;
  return total;
}

double uav_slot_energy(double flight, double processing) {
  if (flight < 0.0 || processing < 0.0) throw DomainError("slot energies must be >= 0");
  return flight + processing;
}

EpisodeMetrics episode_metrics(const WorldState& w, double beta_obj) {
  EpisodeMetrics m;
  m.beta_obj = beta_obj;
  for (const UavState& u : w.uavs) m.system_energy += u.energy_spent;

  const int n_areas = static_cast<int>(w.areas.size());
  std::vector<int> succeeded(n_areas, 0);
  double latency_sum = 0.0;
  for (const CompletionRecord& r : w.completions) {
    if (!r.succeeded) continue;
    m.bits_succeeded += r.size_bits;
    latency_sum += r.completion_time - r.spawn_time;
    ++succeeded[r.task.area];
    ++m.tasks_succeeded;
  }
  if (m.system_energy <= 0.0 && m.bits_succeeded > 0.0)
    throw AccountingError("bits succeeded with zero system energy");
  m.eta = m.system_energy > 0.0 ? m.bits_succeeded / m.system_energy : 0.0;

  double ratio_sum = 0.0;
  for (int a = 0; a < n_areas; ++a) {
    const int n = area_task_count(w, a);
    m.tasks_total += n;
    const double ratio = n > 0 ? static_cast<double>(succeeded[a]) / n : 0.0;
    m.completion_ratio_per_area.push_back(ratio);
    ratio_sum += ratio;
  }
  m.completion_ratio =
      m.tasks_total > 0 ? static_cast<double>(m.tasks_succeeded) / m.tasks_total : 0.0;
  m.avg_latency = m.tasks_succeeded > 0 ? latency_sum / m.tasks_succeeded : 0.0;
  m.objective = m.eta + beta_obj * ratio_sum;
  return m;
}

void MetricsAccumulator::add_slot(std::span<const double> uav_slot_energies,
                                  std::span<const CompletionRecord> finalized) {
  for (double e : uav_slot_energies) energy_ += e;
  for (const auto& r : finalized)
    if (r.succeeded) bits_ += r.size_bits;
}

}  // namespace lain
