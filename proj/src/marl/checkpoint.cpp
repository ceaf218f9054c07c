#include "lain/marl/checkpoint.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "lain/errors.hpp"

namespace lain::marl {

namespace {

std::vector<ParamView> all_params(PolicyParams& p) {
  std::vector<ParamView> out;
  for (int i = 0; i < p.n_agents(); ++i) {
    auto v = p.actors[i].params("actor" + std::to_string(i));
    out.insert(out.end(), v.begin(), v.end());
  }
  auto c = p.critic.params("critic");
  out.insert(out.end(), c.begin(), c.end());
  return out;
}

[[noreturn]] void bad(const std::string& what) { throw ConfigError("policy.checkpoint", what); }

}  // namespace

void save_checkpoint(std::ostream& os, PolicyParams& p) {
  const ActorShape& s = p.shape;
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  os << "lain-checkpoint " << kCheckpointVersion << "\n";
  os << "shape " << s.obs_dim << ' ' << s.n_actions << ' ' << s.latent_dim << ' ' << s.hidden << ' '
     << s.diffusion_steps << ' ' << num(s.beta_start) << ' ' << num(s.beta_end) << ' '
     << to_string(s.activation) << ' ' << (s.diffusion ? 1 : 0) << ' ' << p.n_agents() << ' '
     << p.state_dim << ' ' << p.critic_hidden << "\n";
  for (const ParamView& v : all_params(p)) {
    os << "tensor " << v.name << ' ' << v.size << "\n";
    for (std::size_t i = 0; i < v.size; ++i) os << (i ? " " : "") << num(v.data[i]);
    os << "\n";
  }
  os << "end\n";
}

void save_checkpoint(const std::string& path, PolicyParams& p) {
  std::ofstream f(path);
  if (!f) bad("cannot open " + path + " for writing");
  save_checkpoint(f, p);
  if (!f) bad("write failed for " + path);
}

PolicyParams load_checkpoint(std::istream& is) {
  std::string magic;
  int version = 0;
  if (!(is >> magic >> version) || magic != "lain-checkpoint") bad("not a checkpoint file");
  if (version != kCheckpointVersion) bad("unsupported checkpoint version " + std::to_string(version));
  std::string tag, act;
  int diffusion = 0, n_agents = 0;
  PolicyParams p;
  ActorShape& s = p.shape;
  if (!(is >> tag) || tag != "shape") bad("missing shape line");
  if (!(is >> s.obs_dim >> s.n_actions >> s.latent_dim >> s.hidden >> s.diffusion_steps >>
        s.beta_start >> s.beta_end >> act >> diffusion >> n_agents >> p.state_dim >> p.critic_hidden))
    bad("malformed shape line");
  s.activation = parse_activation(act);
  s.diffusion = diffusion != 0;
  if (n_agents < 1 || p.state_dim < 1 || p.critic_hidden < 1) bad("invalid shape values");

  // build correctly shaped networks, then overwrite every value
  Rng rng(0);
  for (int i = 0; i < n_agents; ++i) p.actors.push_back(ActorParams::init(s, rng));
  p.critic = Mlp({p.state_dim, p.critic_hidden, p.critic_hidden, 1}, s.activation, rng);
  for (const ParamView& v : all_params(p)) {
    std::string name;
    std::size_t count = 0;
    if (!(is >> tag >> name >> count) || tag != "tensor") bad("expected tensor " + v.name);
    if (name != v.name || count != v.size) bad("tensor mismatch at " + v.name);
    for (std::size_t i = 0; i < count; ++i)
      if (!(is >> v.data[i])) bad("truncated tensor " + v.name);
  }
  if (!(is >> tag) || tag != "end") bad("missing end marker");
  return p;
}

PolicyParams load_checkpoint(const std::string& path) {
  std::ifstream f(path);
  if (!f) bad("cannot open " + path);
  return load_checkpoint(f);
}

}  // namespace lain::marl
