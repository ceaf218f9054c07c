#ifndef LAIN_HARNESS_HPP_
#define LAIN_HARNESS_HPP_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "lain/config.hpp"
#include "lain/marl/env.hpp"

namespace lain {

struct ResultRow {
  std::uint64_t seed = 0;
  std::string policy;
  std::string axis = "none";
  double value = 0.0;
  double eta_bits_per_j = 0.0;
  double completion_ratio = 0.0;
  double avg_latency_s = 0.0;
  double system_energy_j = 0.0;
  double objective = 0.0;
  std::string error;  // empty on success

  bool operator==(const ResultRow&) const = default;
};

extern const char* const kCsvHeader;

// Numbers are printed with %.17g so parse_csv(emit) round-trips exactly.
// Commas and newlines in the error text are replaced by ';' and ' '.
void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const ResultRow& row);
void write_csv(std::ostream& os, const std::vector<ResultRow>& rows);
// Throws ConfigError on a header mismatch or a malformed line.
std::vector<ResultRow> parse_csv(std::istream& is);

// Loads config.policy.checkpoint or trains on `scenario` ("dhappo" with
// diffusion, "happo" without).
std::shared_ptr<marl::PolicyParams> obtain_policy(const RunConfig& config, const std::string& name,
                                                  const Scenario& scenario);

// One episode of `policy` on `scenario` with world seed `seed`. `learned`
// is required for happo/dhappo. Throws AccountingError on a non-finite metric.
ResultRow run_episode(const RunConfig& config, const Scenario& scenario, const std::string& policy,
                      std::uint64_t seed, const marl::PolicyParams* learned = nullptr);
// Unswept scenario from `config`; learned policies are obtained first.
ResultRow run_episode(const RunConfig& config, const std::string& policy, std::uint64_t seed);

// values x policies x seeds, in that nesting order. Failing cells produce a
// row with zero metrics and the error text. Without a sweep a single
// "none" value is used.
std::vector<ResultRow> run_sweep(const RunConfig& config);

}  // namespace lain

#endif  // LAIN_HARNESS_HPP_
