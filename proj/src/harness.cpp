#include "lain/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "lain/engine.hpp"
#include "lain/errors.hpp"
#include "lain/marl/checkpoint.hpp"
#include "lain/marl/happo.hpp"
#include "lain/metrics.hpp"

namespace lain {

const char* const kCsvHeader =
    "seed,policy,axis,value,eta_bits_per_J,completion_ratio,avg_latency_s,system_energy_J,"
    "objective,error";

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',') c = ';';
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double to_double(const std::string& s, int line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0')
    throw ConfigError("csv", "bad number '" + s + "' on line " + std::to_string(line));
  return v;
}

BaselineKind baseline_kind(const std::string& name) {
  if (name == "gmsp") return BaselineKind::GmSp;
  if (name == "muso") return BaselineKind::MuSo;
  if (name == "lbrbo") return BaselineKind::LbRbo;
  throw ConfigError("policy.names", "'" + name + "' is not a baseline");
}

ResultRow row_from(const EpisodeMetrics& m) {
  ResultRow r;
  r.eta_bits_per_j = m.eta;
  r.completion_ratio = m.completion_ratio;
  r.avg_latency_s = m.avg_latency;
  r.system_energy_j = m.system_energy;
  r.objective = m.objective;
  for (double v : {r.eta_bits_per_j, r.completion_ratio, r.avg_latency_s, r.system_energy_j, r.objective})
    if (!std::isfinite(v)) throw AccountingError("non-finite episode metric");
  return r;
}

}  // namespace

void write_csv_header(std::ostream& os) { os << kCsvHeader << "\n"; }

void write_csv_row(std::ostream& os, const ResultRow& r) {
  os << r.seed << ',' << sanitize(r.policy) << ',' << sanitize(r.axis) << ',' << num(r.value) << ','
     << num(r.eta_bits_per_j) << ',' << num(r.completion_ratio) << ',' << num(r.avg_latency_s) << ','
     << num(r.system_energy_j) << ',' << num(r.objective) << ',' << sanitize(r.error) << "\n";
}

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  write_csv_header(os);
  for (const ResultRow& r : rows) write_csv_row(os, r);
}

std::vector<ResultRow> parse_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) throw ConfigError("csv", "header mismatch");
  std::vector<ResultRow> rows;
  int n = 1;
  while (std::getline(is, line)) {
    ++n;
    if (line.empty()) continue;
    const std::vector<std::string> f = split(line);
    if (f.size() != 10) throw ConfigError("csv", "expected 10 fields on line " + std::to_string(n));
    ResultRow r;
    char* end = nullptr;
    r.seed = std::strtoull(f[0].c_str(), &end, 10);
    if (f[0].empty() || *end != '\0') throw ConfigError("csv", "bad seed on line " + std::to_string(n));
    r.policy = f[1];
    r.axis = f[2];
    r.value = to_double(f[3], n);
    r.eta_bits_per_j = to_double(f[4], n);
    r.completion_ratio = to_double(f[5], n);
    r.avg_latency_s = to_double(f[6], n);
    r.system_energy_j = to_double(f[7], n);
    r.objective = to_double(f[8], n);
    r.error = f[9];
    rows.push_back(std::move(r));
  }
  return rows;
}

std::shared_ptr<marl::PolicyParams> obtain_policy(const RunConfig& cfg, const std::string& name,
                                                  const Scenario& sc) {
  if (!is_learned_policy(name)) throw ConfigError("policy.names", "'" + name + "' is not learned");
  if (!cfg.policy.checkpoint.empty()) {
    auto p = std::make_shared<marl::PolicyParams>(marl::load_checkpoint(cfg.policy.checkpoint));
    if (p->n_agents() != sc.world.n_uavs || p->shape.obs_dim != marl::observation_size(sc))
      throw ConfigError("policy.checkpoint", "checkpoint shape does not match the scenario");
    return p;
  }
  marl::TrainingConfig t = cfg.training;
  t.diffusion = name == "dhappo" && cfg.training.diffusion;
  marl::TrainResult res =
      marl::train(marl::reseeding_factory(sc, t.seed), cfg.auction, t);
  return std::make_shared<marl::PolicyParams>(std::move(res.policy));
}

ResultRow run_episode(const RunConfig& cfg, const Scenario& base, const std::string& policy,
                      std::uint64_t seed, const marl::PolicyParams* learned) {
  Scenario sc = base;
  sc.world.master_seed = seed;
  sc.validate();
  EpisodeMetrics m;
  if (is_learned_policy(policy)) {
    if (!learned) throw ConfigError("policy.names", "learned policy '" + policy + "' has no parameters");
    m = marl::run_policy_episode(sc, *learned, cfg.auction, cfg.training.reward,
                                 derive_stream_seed(seed, "policy.actions"), cfg.policy.greedy,
                                 cfg.policy.beta_obj)
            .metrics;
  } else {
    BaselineController ctrl(baseline_kind(policy), cfg.policy.muso);
    Episode ep(sc, ctrl);
    ep.run();
    m = episode_metrics(ep.world(), cfg.policy.beta_obj);
  }
  ResultRow r = row_from(m);
  r.seed = seed;
  r.policy = policy;
  return r;
}

ResultRow run_episode(const RunConfig& cfg, const std::string& policy, std::uint64_t seed) {
  std::shared_ptr<marl::PolicyParams> p;
  if (is_learned_policy(policy)) p = obtain_policy(cfg, policy, cfg.scenario);
  return run_episode(cfg, cfg.scenario, policy, seed, p.get());
}

std::vector<ResultRow> run_sweep(const RunConfig& cfg) {
  cfg.validate();
  struct Cell {
    Scenario scenario;
    std::string policy;
    std::string axis;
    double value = 0.0;
    std::uint64_t seed = 0;
    std::shared_ptr<marl::PolicyParams> learned;
    std::string setup_error;
  };
  std::vector<double> values{0.0};
  std::string axis = "none";
  if (cfg.sweep) {
    values = cfg.sweep->values;
    axis = to_string(cfg.sweep->axis);
  }

  // learned policies are trained once per sweep value, before the fan-out
  std::vector<Cell> cells;
  for (double v : values) {
    Scenario sc = cfg.sweep ? apply_sweep_value(cfg.scenario, cfg.sweep->axis, v) : cfg.scenario;
    for (const std::string& name : cfg.policy.names) {
      std::shared_ptr<marl::PolicyParams> learned;
      std::string err;
      if (is_learned_policy(name)) {
        try {
          learned = obtain_policy(cfg, name, sc);
        } catch (const std::exception& e) {
          err = e.what();
        }
      }
      for (int r = 0; r < cfg.repetitions; ++r)
        cells.push_back({sc, name, axis, v, cfg.seed + static_cast<std::uint64_t>(r), learned, err});
    }
  }

  std::vector<ResultRow> rows(cells.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const Cell& c = cells[i];
      ResultRow row;
      try {
        if (!c.setup_error.empty()) throw std::runtime_error(c.setup_error);
        row = run_episode(cfg, c.scenario, c.policy, c.seed, c.learned.get());
      } catch (const std::exception& e) {
        row = ResultRow{};
        row.error = e.what();
        if (row.error.empty()) row.error = "error";
      }
      row.seed = c.seed;
      row.policy = c.policy;
      row.axis = c.axis;
      row.value = c.value;
      rows[i] = std::move(row);
    }
  };
  unsigned n_threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                       : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(std::max<std::size_t>(1, cells.size())));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n_threads; ++k) pool.emplace_back(work);
  work();
  for (std::thread& t : pool) t.join();
  return rows;
}

}  // namespace lain
