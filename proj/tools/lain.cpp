// lain: command-line front end for the simulator.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lain/auction.hpp"
#include "lain/config.hpp"
#include "lain/errors.hpp"
#include "lain/harness.hpp"
#include "lain/marl/checkpoint.hpp"
#include "lain/marl/happo.hpp"

using namespace lain;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> policies;
  std::string out;
  bool disable_diffusion = false;
};

void add_common(CLI::App* app, Common& c, bool policy, bool diffusion_flag) {
  app->add_option("--config", c.config, "JSON run configuration");
  app->add_option("--seed", c.seed, "seed override");
  app->add_option("--out", c.out, "output path");
  if (policy) app->add_option("--policy", c.policies, "policy name (gmsp, muso, lbrbo, happo, dhappo)");
  if (diffusion_flag) app->add_flag("--disable-diffusion", c.disable_diffusion, "train plain HAPPO");
}

RunConfig resolve(const Common& c) {
  RunConfig cfg = c.config.empty() ? parse_config("{}") : load_config(c.config);
  if (c.seed) {
    cfg.seed = *c.seed;
    cfg.scenario.world.master_seed = *c.seed;
  }
  if (!c.policies.empty()) cfg.policy.names = c.policies;
  if (c.disable_diffusion) cfg.training.diffusion = false;
  cfg.validate();
  return cfg;
}

// Writes to --out when given, stdout otherwise.
template <class F>
void emit(const std::string& out, F&& f) {
  if (out.empty()) {
    f(std::cout);
    return;
  }
  std::ofstream os(out);
  if (!os) throw ConfigError("--out", "cannot open " + out);
  f(os);
}

int cmd_simulate(const Common& c) {
  const RunConfig cfg = resolve(c);
  std::vector<ResultRow> rows;
  for (const std::string& p : cfg.policy.names) rows.push_back(run_episode(cfg, p, cfg.seed));
  emit(c.out, [&](std::ostream& os) { write_csv(os, rows); });
  return 0;
}

int cmd_sweep(const Common& c) {
  RunConfig cfg = resolve(c);
  const std::string out = c.out.empty() ? cfg.output_path : c.out;
  const std::vector<ResultRow> rows = run_sweep(cfg);
  emit(out, [&](std::ostream& os) { write_csv(os, rows); });
  int failed = 0;
  for (const ResultRow& r : rows) failed += r.error.empty() ? 0 : 1;
  std::fprintf(stderr, "%zu rows written to %s (%d failed)\n", rows.size(), out.c_str(), failed);
  return 0;
}

int cmd_auction(const Common& c) {
  const RunConfig cfg = resolve(c);
  Scenario sc = cfg.scenario;
  const WorldState w = init_world(sc);
  const std::vector<int> areas = open_areas(w);
  const AreaAuction a = auction_round(w, areas, cfg.auction);
  emit(c.out, [&](std::ostream& os) {
    char buf[160];
    os << "uav,area,est_success,est_energy_J,utility,bid\n";
    for (int u = 0; u < a.bids.n_uavs; ++u)
      for (int k = 0; k < a.bids.n_areas; ++k) {
        const AreaEstimate& e = a.estimates[u][k];
        std::snprintf(buf, sizeof buf, "%d,%d,%d,%.6f,%.6f,%.6f\n", u, areas[k], e.est_success,
                      e.est_energy, a.bids.utility(u, k), a.bids.bid(u, k));
        os << buf;
      }
    os << "\nuav,assigned_area,price\n";
    for (int u = 0; u < a.bids.n_uavs; ++u) {
      const int k = a.result.assignment[u];
      std::snprintf(buf, sizeof buf, "%d,%d,%.6f\n", u, k >= 0 ? areas[k] : -1, a.result.prices[u]);
      os << buf;
    }
    std::snprintf(buf, sizeof buf, "\ntotal_utility,%.6f\n", a.result.total_utility);
    os << buf;
  });
  return 0;
}

int cmd_train(const Common& c, const std::string& curve) {
  RunConfig cfg = resolve(c);
  if (c.seed) cfg.training.seed = *c.seed;
  if (cfg.policy.names.size() != 1 || !is_learned_policy(cfg.policy.names[0]))
    cfg.policy.names = {"dhappo"};
  // "happo" is the same trainer with the diffusion stage off
  if (cfg.policy.names[0] == "happo") cfg.training.diffusion = false;
  const marl::TrainResult res = marl::train(
      marl::reseeding_factory(cfg.scenario, cfg.training.seed), cfg.auction, cfg.training);
  marl::PolicyParams policy = res.policy;
  const std::string out = c.out.empty() ? "policy.ckpt" : c.out;
  marl::save_checkpoint(out, policy);
  if (!curve.empty()) {
    std::ofstream os(curve);
    if (!os) throw ConfigError("--curve", "cannot open " + curve);
    marl::write_curve_csv(os, res.curve);
  }
  const double last = res.curve.empty() ? 0.0 : res.curve.back().mean_reward;
  std::fprintf(stderr, "trained %zu iterations (%s), last mean reward %.6f, checkpoint %s\n",
               res.curve.size(), cfg.training.diffusion ? "diffusion" : "plain", last, out.c_str());
  return 0;
}

int cmd_evaluate(const Common& c, const std::string& checkpoint, int episodes) {
  RunConfig cfg = resolve(c);
  if (!checkpoint.empty()) cfg.policy.checkpoint = checkpoint;
  if (cfg.policy.checkpoint.empty()) throw ConfigError("--checkpoint", "evaluate needs a checkpoint");
  std::vector<ResultRow> rows;
  for (const std::string& name : cfg.policy.names) {
    if (!is_learned_policy(name)) throw ConfigError("--policy", "evaluate runs happo or dhappo");
    const auto p = obtain_policy(cfg, name, cfg.scenario);
    for (int e = 0; e < episodes; ++e)
      rows.push_back(run_episode(cfg, cfg.scenario, name, cfg.seed + static_cast<std::uint64_t>(e), p.get()));
  }
  emit(c.out, [&](std::ostream& os) { write_csv(os, rows); });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"UAV edge-computing simulator"};
  app.require_subcommand(1);

  Common sim, sweep, auc, tr, ev;
  std::string curve, checkpoint;
  int episodes = 5;
  auto* s_sim = app.add_subcommand("simulate", "run one episode per policy, print a CSV row each");
  add_common(s_sim, sim, true, true);
  auto* s_sweep = app.add_subcommand("sweep", "run the configured sweep grid");
  add_common(s_sweep, sweep, true, true);
  auto* s_auc = app.add_subcommand("auction", "print one auction round at t = 0");
  add_common(s_auc, auc, false, false);
  auto* s_tr = app.add_subcommand("train", "train the learned policy and save a checkpoint");
  add_common(s_tr, tr, true, true);
  s_tr->add_option("--curve", curve, "learning-curve CSV");
  auto* s_ev = app.add_subcommand("evaluate", "roll out a frozen checkpoint");
  add_common(s_ev, ev, true, false);
  s_ev->add_option("--checkpoint", checkpoint, "checkpoint file");
  s_ev->add_option("--episodes", episodes, "episodes per policy")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*s_sim) return cmd_simulate(sim);
    if (*s_sweep) return cmd_sweep(sweep);
    if (*s_auc) return cmd_auction(auc);
    if (*s_tr) return cmd_train(tr, curve);
    if (*s_ev) return cmd_evaluate(ev, checkpoint, episodes);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
