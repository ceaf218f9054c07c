#include "lain/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lain/errors.hpp"

namespace lain {

using nlohmann::json;

std::string to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::UavCount: return "uav_count";
    case SweepAxis::TaskSizeMbit: return "task_size_mbit";
    case SweepAxis::BandwidthMHz: return "bandwidth_mhz";
  }
  return "?";
}

SweepAxis parse_sweep_axis(const std::string& s) {
  if (s == "uav_count") return SweepAxis::UavCount;
  if (s == "task_size_mbit") return SweepAxis::TaskSizeMbit;
  if (s == "bandwidth_mhz") return SweepAxis::BandwidthMHz;
  throw ConfigError("sweep.axis", "expected uav_count, task_size_mbit or bandwidth_mhz, got '" + s + "'");
}

bool is_learned_policy(const std::string& n) { return n == "happo" || n == "dhappo"; }

bool is_known_policy(const std::string& n) {
  return n == "gmsp" || n == "muso" || n == "lbrbo" || is_learned_policy(n);
}

namespace {

// Reads keys of one JSON object and rejects the ones nobody asked for.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_, "must be an object");
  }

  bool has(const char* key) const { return j_.contains(key); }
  void skip(const char* key) { seen_.insert(key); }

  template <class T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(field(key), std::string("wrong type: ") + e.what());
    }
  }

  void get_opt(const char* key, std::optional<double>& out) {
    seen_.insert(key);
    if (!j_.contains(key) || j_.at(key).is_null()) return;
    double v = 0.0;
    get(key, v);
    out = v;
  }

  Section sub(const char* key) {
    seen_.insert(key);
    return Section(j_.contains(key) ? j_.at(key) : empty(), field(key));
  }

  void get_point(const char* key, std::optional<Position3>& out) {
    seen_.insert(key);
    if (!j_.contains(key) || j_.at(key).is_null()) return;
    out = point(j_.at(key), field(key));
  }

  void get_points(const char* key, std::vector<Position3>& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    const json& a = j_.at(key);
    if (!a.is_array()) throw ConfigError(field(key), "must be an array of [x, y(, z)]");
    out.clear();
    for (std::size_t i = 0; i < a.size(); ++i)
      out.push_back(point(a[i], field(key) + "[" + std::to_string(i) + "]"));
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(field(it.key()), "unknown key");
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  static const json& empty() {
    static const json e = json::object();
    return e;
  }

  static Position3 point(const json& p, const std::string& where) {
    if (!p.is_array() || p.size() < 2 || p.size() > 3)
      throw ConfigError(where, "expected [x, y] or [x, y, z]");
    try {
      return {p[0].get<double>(), p[1].get<double>(), p.size() == 3 ? p[2].get<double>() : 0.0};
    } catch (const json::exception&) {
      throw ConfigError(where, "coordinates must be numbers");
    }
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_world(Section s, WorldConfig& w) {
  s.get("arena_side", w.arena_side);
  s.get("slot_seconds", w.slot_seconds);
  s.get("n_slots", w.n_slots);
  s.get("uav_altitude", w.uav_altitude);
  s.get("n_uavs", w.n_uavs);
  s.get("n_tbs", w.n_tbs);
  s.get("n_areas", w.n_areas);
  s.get("tasks_per_area", w.tasks_per_area);
  s.get("area_radius", w.area_radius);
  s.get_points("area_centers", w.area_centers);
  s.get_points("tbs_positions", w.tbs_positions);
  s.get_point("abs_position", w.abs_position);
  s.get("abs_altitude", w.abs_altitude);
  s.get("tbs_cpu_hz", w.tbs_cpu_hz);
  s.get("abs_cpu_hz", w.abs_cpu_hz);
  s.get("tbs_kappa", w.tbs_kappa);
  s.get("abs_kappa", w.abs_kappa);
  {
    Section t = s.sub("tasks");
    t.get("size_min_bits", w.tasks.size_min_bits);
    t.get("size_max_bits", w.tasks.size_max_bits);
    t.get("density", w.tasks.density);
    t.get("deadline_min_slots", w.tasks.deadline_min_slots);
    t.get("deadline_max_slots", w.tasks.deadline_max_slots);
    t.get("arrival_prob", w.tasks.arrival_prob);
    t.finish();
  }
  {
    Section u = s.sub("uav");
    u.get("mass", w.uav.mass);
    u.get("prop_radius", w.uav.prop_radius);
    u.get("prop_count", w.uav.prop_count);
    u.get("air_density", w.uav.air_density);
    u.get("v_max", w.uav.v_max);
    u.get("p_max", w.uav.p_max);
    u.get("p_stop", w.uav.p_stop);
    u.get("cpu_hz", w.uav.cpu_hz);
    u.get("tx_power", w.uav.tx_power);
    u.get("kappa", w.uav.kappa);
    u.get_opt("hover_power_w", w.uav.hover_power_w);
    u.finish();
  }
  s.finish();
}

void read_channel(Section s, ChannelConfig& c) {
  s.get("zeta_los_db", c.air.zeta_los_db);
  s.get("zeta_nlos_db", c.air.zeta_nlos_db);
  s.get("sigmoid_a", c.air.sigmoid_a);
  s.get("sigmoid_b", c.air.sigmoid_b);
  s.get("carrier_hz", c.air.carrier_hz);
  s.get("g0", c.ground.g0);
  if (s.has("noise_dbm") && s.has("noise_power_w"))
    throw ConfigError(s.field("noise_dbm"), "give either noise_dbm or noise_power_w");
  double noise_dbm = watts_to_dbm(c.ground.noise_power_w);
  s.get("noise_dbm", noise_dbm);
  c.ground.noise_power_w = dbm_to_watts(noise_dbm);
  s.get("noise_power_w", c.ground.noise_power_w);
  s.get("bandwidth_hz", c.ground.bandwidth_hz);
  s.get("tbs_range_m", c.tbs_range_m);
  s.get("uav_range_m", c.uav_range_m);
  s.get("abs_range_m", c.abs_range_m);
  s.finish();
}

void read_auction(Section s, AuctionWeights& a) {
  s.get("gamma1", a.gamma1);
  s.get("gamma2", a.gamma2);
  s.get("bid_scale", a.bid_scale);
  const bool has_cap = s.has("capacity");
  int cap = 0;
  s.get("capacity", cap);
  if (has_cap) a.capacity = cap;
  s.finish();
}

void read_policy(Section s, PolicyConfig& p) {
  if (s.has("name") && s.has("names")) throw ConfigError(s.field("name"), "give either name or names");
  std::string one;
  s.get("name", one);
  if (!one.empty()) p.names = {one};
  s.get("names", p.names);
  s.get("checkpoint", p.checkpoint);
  s.get("greedy", p.greedy);
  s.get("beta_obj", p.beta_obj);
  {
    Section m = s.sub("muso");
    m.get("proximity", p.muso.proximity);
    m.get("urgency", p.muso.urgency);
    m.finish();
  }
  s.finish();
}

void read_training(Section s, marl::TrainingConfig& t) {
  s.get("iterations", t.iterations);
  s.get("episodes_per_iteration", t.episodes_per_iteration);
  s.get("ppo_epochs", t.ppo_epochs);
  s.get("batch_size", t.batch_size);
  s.get("lr", t.lr);
  s.get("critic_lr", t.critic_lr);
  s.get("clip_epsilon", t.clip_epsilon);
  s.get("gamma", t.gamma);
  s.get("lambda", t.lambda);
  s.get("diffusion_weight", t.diffusion_weight);
  s.get("max_grad_norm", t.max_grad_norm);
  s.get("normalize_advantages", t.normalize_advantages);
  s.get("latent_dim", t.latent_dim);
  s.get("hidden", t.hidden);
  s.get("diffusion_steps", t.diffusion_steps);
  s.get("beta_start", t.beta_start);
  s.get("beta_end", t.beta_end);
  std::string act = marl::to_string(t.activation);
  s.get("activation", act);
  t.activation = marl::parse_activation(act);
  s.get("diffusion", t.diffusion);
  s.get("seed", t.seed);
  {
    Section r = s.sub("reward");
    r.get("alpha_energy", t.reward.alpha_energy);
    r.get("gamma_success", t.reward.gamma_success);
    r.finish();
  }
  s.finish();
}

}  // namespace

void RunConfig::validate() const {
  scenario.validate();
  auction.validate();
  training.validate();
  if (repetitions < 1) throw ConfigError("repetitions", "must be >= 1");
  if (threads < 0) throw ConfigError("threads", "must be >= 0");
  if (policy.names.empty()) throw ConfigError("policy.names", "at least one policy required");
  for (const std::string& n : policy.names)
    if (!is_known_policy(n)) throw ConfigError("policy.names", "unknown policy '" + n + "'");
  if (sweep) {
    if (sweep->values.empty()) throw ConfigError("sweep.values", "must not be empty");
    for (double v : sweep->values) {
      if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("sweep.values", "values must be positive");
      if (sweep->axis == SweepAxis::UavCount && v != std::floor(v))
        throw ConfigError("sweep.values", "UAV counts must be integers");
    }
  }
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<file>", std::string("invalid JSON: ") + e.what());
  }
  RunConfig c;
  Section root(j, "");
  read_world(root.sub("world"), c.scenario.world);
  read_channel(root.sub("channel"), c.scenario.channel);
  read_auction(root.sub("auction"), c.auction);
  read_policy(root.sub("policy"), c.policy);
  read_training(root.sub("training"), c.training);
  if (j.contains("sweep") && !j.at("sweep").is_null()) {
    Section s = root.sub("sweep");
    std::string axis;
    s.get("axis", axis);
    SweepConfig sw;
    sw.axis = parse_sweep_axis(axis);
    s.get("values", sw.values);
    s.finish();
    c.sweep = sw;
  } else {
    root.skip("sweep");
  }
  root.get("repetitions", c.repetitions);
  root.get("seed", c.seed);
  root.get("threads", c.threads);
  root.get("output_path", c.output_path);
  root.finish();
  c.scenario.world.master_seed = c.seed;
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("--config", "cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

Scenario apply_sweep_value(Scenario s, SweepAxis axis, double v) {
  if (!(v > 0.0)) throw ConfigError("sweep.values", "values must be positive");
  switch (axis) {
    case SweepAxis::UavCount:
      s.world.n_uavs = static_cast<int>(std::lround(v));
      break;
    case SweepAxis::TaskSizeMbit:
      s.world.tasks.size_min_bits = v * 1e6 * 2.0 / 3.0;
      s.world.tasks.size_max_bits = v * 1e6 * 4.0 / 3.0;
      break;
    case SweepAxis::BandwidthMHz:
      s.channel.ground.bandwidth_hz = v * 1e6;
      break;
  }
  return s;
}

}  // namespace lain
