#include "lain/marl/happo.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "lain/errors.hpp"

namespace lain::marl {

GaeResult gae_advantages(const std::vector<double>& rewards, const std::vector<double>& values,
                         const std::vector<bool>& dones, double gamma, double lambda,
                         double last_value) {
  const std::size_t n = rewards.size();
  if (values.size() != n || dones.size() != n) throw ShapeError("GAE inputs differ in length");
  GaeResult out{Vec::Zero(static_cast<Eigen::Index>(n)), Vec::Zero(static_cast<Eigen::Index>(n))};
  double next_adv = 0.0;
  double next_value = last_value;
  for (std::size_t k = n; k-- > 0;) {
    const double live = dones[k] ? 0.0 : 1.0;
    const double delta = rewards[k] + gamma * next_value * live - values[k];
    next_adv = delta + gamma * lambda * live * next_adv;
    out.advantages(static_cast<Eigen::Index>(k)) = next_adv;
    out.returns(static_cast<Eigen::Index>(k)) = next_adv + values[k];
    next_value = values[k];
  }
  return out;
}

GaeResult gae_advantages(const RolloutBuffer& buf, double gamma, double lambda) {
  std::vector<double> r, v;
  std::vector<bool> d;
  for (const Transition& t : buf.steps()) {
    r.push_back(t.reward);
    v.push_back(t.value);
    d.push_back(t.done);
  }
  return gae_advantages(r, v, d, gamma, lambda);
}

Vec normalize_advantages(const Vec& a) {
  if (a.size() == 0) return a;
  const double mean = a.mean();
  Vec c = a.array() - mean;
  const double sd = std::sqrt(c.squaredNorm() / static_cast<double>(a.size()));
  if (sd < 1e-12) return c;
  return c / sd;
}

Vec compound_advantage(const Vec& m_prev, const Vec& ratio_prev) {
  if (m_prev.size() != ratio_prev.size()) throw ShapeError("advantage and ratio sizes differ");
  return ratio_prev.cwiseProduct(m_prev);
}

ClipLoss happo_clip_loss(const Vec& new_logp, const Vec& old_logp, const Vec& m, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("training.clip_epsilon", "must be in (0, 1)");
  const Eigen::Index n = m.size();
  if (new_logp.size() != n || old_logp.size() != n) throw ShapeError("clip loss sizes differ");
  if (n == 0) throw ShapeError("empty clip-loss batch");
  ClipLoss out{0.0, Vec::Zero(n)};
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = std::exp(new_logp(i) - old_logp(i));
    const double unclipped = r * m(i);
    const double clipped = std::clamp(r, 1.0 - eps, 1.0 + eps) * m(i);
    if (unclipped <= clipped) {
      sum += unclipped;
      out.dlogp(i) = -unclipped / static_cast<double>(n);
    } else {
      sum += clipped;
    }
  }
  out.loss = -sum / static_cast<double>(n);
  return out;
}

void TrainingConfig::validate() const {
  auto need = [](bool ok, const char* field, const char* what) {
    if (!ok) throw ConfigError(field, what);
  };
  need(iterations >= 0, "training.iterations", "must be >= 0");
  need(episodes_per_iteration >= 1, "training.episodes_per_iteration", "must be >= 1");
  need(ppo_epochs >= 1, "training.ppo_epochs", "must be >= 1");
  need(batch_size >= 1, "training.batch_size", "must be >= 1");
  need(lr > 0.0, "training.lr", "must be > 0");
  need(critic_lr > 0.0, "training.critic_lr", "must be > 0");
  need(clip_epsilon > 0.0 && clip_epsilon < 1.0, "training.clip_epsilon", "must be in (0, 1)");
  need(gamma >= 0.0 && gamma <= 1.0, "training.gamma", "must be in [0, 1]");
  need(lambda >= 0.0 && lambda <= 1.0, "training.lambda", "must be in [0, 1]");
  need(diffusion_weight >= 0.0, "training.diffusion_weight", "must be >= 0");
  need(latent_dim >= 1, "training.latent_dim", "must be >= 1");
  need(hidden >= 1, "training.hidden", "must be >= 1");
  need(diffusion_steps >= 1, "training.diffusion_steps", "must be >= 1");
  reward.validate();
}

PolicyParams init_policy(const Scenario& sc, const TrainingConfig& cfg) {
  PolicyParams p;
  p.shape.obs_dim = observation_size(sc);
  p.shape.n_actions = action_space_size(sc.world.n_uavs, sc.world.n_tbs);
  p.shape.latent_dim = cfg.latent_dim;
  p.shape.hidden = cfg.hidden;
  p.shape.diffusion_steps = cfg.diffusion_steps;
  p.shape.beta_start = cfg.beta_start;
  p.shape.beta_end = cfg.beta_end;
  p.shape.activation = cfg.activation;
  p.shape.diffusion = cfg.diffusion;
  p.state_dim = global_state_size(sc);
  p.critic_hidden = cfg.hidden;
  for (int u = 0; u < sc.world.n_uavs; ++u) {
    Rng rng(derive_stream_seed(cfg.seed, "init.actor." + std::to_string(u)));
    p.actors.push_back(ActorParams::init(p.shape, rng));
  }
  Rng rng(derive_stream_seed(cfg.seed, "init.critic"));
  p.critic = Mlp({p.state_dim, p.critic_hidden, p.critic_hidden, 1}, cfg.activation, rng);
  return p;
}

EnvFactory reseeding_factory(Scenario base, std::uint64_t seed) {
  return [base, seed](std::uint64_t episode) {
    Scenario s = base;
    s.world.master_seed = derive_stream_seed(seed, "episode." + std::to_string(episode));
    return s;
  };
}

namespace {

void add_scaled(const std::vector<ParamView>& dst, const std::vector<ParamView>& src, double w) {
  for (std::size_t k = 0; k < dst.size(); ++k)
    for (std::size_t i = 0; i < dst[k].size; ++i) dst[k].data[i] += w * src[k].data[i];
}

void check_finite(double v, const char* what, int iteration) {
  if (!std::isfinite(v))
    throw TrainingError(std::string(what) + " became non-finite at iteration " +
                        std::to_string(iteration));
}

// Columns of one agent's active samples.
struct AgentBatch {
  std::vector<int> rows;  // transition indices
  Mat obs, z_T, masks, latent;
  std::vector<int> actions;
  Vec old_logp;
};

AgentBatch gather(const RolloutBuffer& buf, int agent, const std::vector<int>& rows,
                  const ActorShape& shape) {
  AgentBatch b;
  b.rows = rows;
  const auto n = static_cast<Eigen::Index>(rows.size());
  b.obs.resize(shape.obs_dim, n);
  b.z_T.resize(shape.diffusion ? shape.latent_dim : 0, n);
  b.masks.resize(shape.n_actions, n);
  b.latent.resize(shape.latent_dim, n);
  b.old_logp.resize(n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const AgentStep& s = buf.steps()[rows[c]].agents[agent];
    b.obs.col(c) = s.obs;
    if (shape.diffusion) b.z_T.col(c) = s.z_T;
    b.masks.col(c) = s.mask;
    b.latent.col(c) = s.latent;
    b.actions.push_back(s.action);
    b.old_logp(c) = s.log_prob;
  }
  return b;
}

AgentBatch columns(const AgentBatch& all, const std::vector<int>& pick) {
  AgentBatch b;
  const auto n = static_cast<Eigen::Index>(pick.size());
  b.obs.resize(all.obs.rows(), n);
  b.z_T.resize(all.z_T.rows(), n);
  b.masks.resize(all.masks.rows(), n);
  b.latent.resize(all.latent.rows(), n);
  b.old_logp.resize(n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const int k = pick[c];
    b.rows.push_back(all.rows[k]);
    b.obs.col(c) = all.obs.col(k);
    if (all.z_T.rows() > 0) b.z_T.col(c) = all.z_T.col(k);
    b.masks.col(c) = all.masks.col(k);
    b.latent.col(c) = all.latent.col(k);
    b.actions.push_back(all.actions[k]);
    b.old_logp(c) = all.old_logp(k);
  }
  return b;
}

Vec chosen_logp(const ActorForward& f, const std::vector<int>& actions) {
  Vec out(static_cast<Eigen::Index>(actions.size()));
  for (Eigen::Index c = 0; c < out.size(); ++c) out(c) = f.log_probs(actions[c], c);
  return out;
}

std::vector<std::vector<int>> minibatches(int n, int size, Rng& rng) {
  const std::vector<int> order = rng.permutation(n);
  std::vector<std::vector<int>> out;
  for (int s = 0; s < n; s += size)
    out.emplace_back(order.begin() + s, order.begin() + std::min(n, s + size));
  return out;
}

struct Losses {
  double actor = 0.0, diffusion = 0.0, critic = 0.0;
  int actor_n = 0, critic_n = 0;
};

}  // namespace

TrainResult train(const EnvFactory& envs, const AuctionWeights& auction,
                  const TrainingConfig& cfg) {
  return train(envs, auction, cfg, init_policy(envs(0), cfg));
}

TrainResult train(const EnvFactory& envs, const AuctionWeights& auction, const TrainingConfig& cfg,
                  PolicyParams initial) {
  cfg.validate();
  auction.validate();
  TrainResult res;
  res.policy = std::move(initial);
  PolicyParams& pol = res.policy;
  const int n_agents = pol.n_agents();
  const DiffusionSchedule sched = pol.schedule();

  std::vector<ActorParams> grads;
  std::vector<std::vector<ParamView>> grad_views;
  std::vector<Adam> actor_opt;
  grads.reserve(static_cast<std::size_t>(n_agents));
  for (int i = 0; i < n_agents; ++i) grads.push_back(pol.actors[i].zeros_like());
  for (int i = 0; i < n_agents; ++i) {
    const std::string name = "actor" + std::to_string(i);
    grad_views.push_back(grads[i].params(name));
    actor_opt.emplace_back(pol.actors[i].params(name), cfg.lr);
  }
  Mlp critic_grad = pol.critic.zeros_like();
  const std::vector<ParamView> critic_grad_views = critic_grad.params("critic");
  Adam critic_opt(pol.critic.params("critic"), cfg.critic_lr);
  Mlp denoiser_tmp = pol.actors.empty() ? Mlp() : pol.actors[0].denoiser.zeros_like();

  Rng rng(derive_stream_seed(cfg.seed, "train"));
  RolloutBuffer buf;
  std::uint64_t episode_counter = 0;

  for (int it = 0; it < cfg.iterations; ++it) {
    buf.clear();
    double reward_sum = 0.0;
    for (int e = 0; e < cfg.episodes_per_iteration; ++e) {
      const Scenario sc = envs(episode_counter);
      LearnedController ctrl(pol, auction,
                             Rng(derive_stream_seed(cfg.seed, "rollout." + std::to_string(episode_counter))));
      ++episode_counter;
      Episode ep(sc, ctrl);
      while (!ep.done()) {
        Transition tr;
        tr.state = build_global_state(ep.world());
        const SlotReport rep = ep.step();
        tr.agents = ctrl.take_slot();
        tr.reward = slot_reward(rep, cfg.reward);
        tr.done = ep.done();
        reward_sum += tr.reward;
        buf.push(std::move(tr));
      }
    }
    const int n = static_cast<int>(buf.size());

    Mat states(pol.state_dim, n);
    for (int k = 0; k < n; ++k) states.col(k) = buf.steps()[k].state;
    {
      const Mat v = pol.critic.forward(states);
      for (int k = 0; k < n; ++k) buf.steps()[k].value = v(0, k);
    }
    const GaeResult gae = gae_advantages(buf, cfg.gamma, cfg.lambda);
    Vec m = cfg.normalize_advantages ? normalize_advantages(gae.advantages) : gae.advantages;

    Losses losses;
    const std::vector<int> order = rng.permutation(n_agents);
    res.update_orders.push_back(order);
    for (int agent : order) {
      std::vector<int> rows;
      for (int k = 0; k < n; ++k)
        if (buf.steps()[k].agents[agent].active) rows.push_back(k);
      if (rows.empty()) continue;  // ratio stays 1
      ActorParams& actor = pol.actors[agent];
      ActorParams& grad = grads[agent];
      const AgentBatch all = gather(buf, agent, rows, pol.shape);

      for (int epoch = 0; epoch < cfg.ppo_epochs; ++epoch) {
        for (const std::vector<int>& pick : minibatches(static_cast<int>(rows.size()), cfg.batch_size, rng)) {
          const AgentBatch mb = columns(all, pick);
          grad.set_zero();
          const ActorForward f = actor_forward(actor, pol.shape, sched, mb.obs, mb.z_T, mb.masks);
          Vec mm(static_cast<Eigen::Index>(pick.size()));
          for (std::size_t c = 0; c < pick.size(); ++c) mm(c) = m(mb.rows[c]);
          const ClipLoss cl = happo_clip_loss(chosen_logp(f, mb.actions), mb.old_logp, mm, cfg.clip_epsilon);
          check_finite(cl.loss, "actor loss", it);
          actor_backward(actor, pol.shape, sched, f, logp_grad_to_logits(f, mb.actions, cl.dlogp), grad);
          losses.actor += cl.loss;
          ++losses.actor_n;

          if (pol.shape.diffusion && cfg.diffusion_weight > 0.0) {
            DiffusionBatch db;
            db.z0 = mb.latent;
            db.noise.resize(mb.latent.rows(), mb.latent.cols());
            for (Eigen::Index c = 0; c < db.noise.cols(); ++c) {
              for (Eigen::Index r = 0; r < db.noise.rows(); ++r) db.noise(r, c) = rng.normal();
              db.t.push_back(static_cast<int>(rng.uniform_int(1, sched.steps)));
            }
            denoiser_tmp.set_zero();
            Mat dfeat;
            const double dl = diffusion_loss(db, f.features, actor.denoiser, sched, &denoiser_tmp, &dfeat);
            check_finite(dl, "diffusion loss", it);
            add_scaled(grad.denoiser.params("d"), denoiser_tmp.params("d"), cfg.diffusion_weight);
            actor.encoder.backward(f.encoder_cache, cfg.diffusion_weight * dfeat, grad.encoder);
            losses.diffusion += dl;
          }
          clip_grad_norm(grad_views[agent], cfg.max_grad_norm);
          actor_opt[agent].step(grad_views[agent]);
        }
      }

      // post-update ratios feed the next agent's advantage
      const ActorForward f = actor_forward(actor, pol.shape, sched, all.obs, all.z_T, all.masks);
      const Vec new_logp = chosen_logp(f, all.actions);
      Vec ratio = Vec::Ones(n);
      for (std::size_t c = 0; c < rows.size(); ++c) {
        ratio(rows[c]) = std::exp(new_logp(static_cast<Eigen::Index>(c)) - all.old_logp(static_cast<Eigen::Index>(c)));
        check_finite(ratio(rows[c]), "probability ratio", it);
      }
      m = compound_advantage(m, ratio);
    }

    for (int epoch = 0; epoch < cfg.ppo_epochs; ++epoch) {
      for (const std::vector<int>& pick : minibatches(n, cfg.batch_size, rng)) {
        const auto b = static_cast<Eigen::Index>(pick.size());
        Mat s(pol.state_dim, b);
        Mat target(1, b);
        for (Eigen::Index c = 0; c < b; ++c) {
          s.col(c) = states.col(pick[c]);
          target(0, c) = gae.returns(pick[c]);
        }
        Mlp::Cache cache;
        const Mat v = pol.critic.forward(s, &cache);
        const Mat diff = v - target;
        const double loss = diff.squaredNorm() / static_cast<double>(b);
        check_finite(loss, "critic loss", it);
        critic_grad.set_zero();
        pol.critic.backward(cache, diff * (2.0 / static_cast<double>(b)), critic_grad);
        clip_grad_norm(critic_grad_views, cfg.max_grad_norm);
        critic_opt.step(critic_grad_views);
        losses.critic += loss;
        ++losses.critic_n;
      }
    }

    CurvePoint pt;
    pt.iteration = it;
    pt.mean_reward = reward_sum / cfg.episodes_per_iteration;
    if (losses.actor_n > 0) {
      pt.actor_loss = losses.actor / losses.actor_n;
      pt.diffusion_loss = losses.diffusion / losses.actor_n;
    }
    if (losses.critic_n > 0) pt.critic_loss = losses.critic / losses.critic_n;
    res.curve.push_back(pt);
  }
  return res;
}

void write_curve_csv(std::ostream& os, const std::vector<CurvePoint>& curve) {
  os << "iteration,mean_reward,actor_loss,diffusion_loss,critic_loss\n";
  char buf[256];
  for (const CurvePoint& p : curve) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g\n", p.iteration, p.mean_reward,
                  p.actor_loss, p.diffusion_loss, p.critic_loss);
    os << buf;
  }
}

PolicyEpisode run_policy_episode(const Scenario& sc, const PolicyParams& policy,
                                 const AuctionWeights& auction, const RewardParams& reward,
                                 std::uint64_t seed, bool greedy, double beta_obj) {
  LearnedController ctrl(policy, auction, Rng(seed), greedy);
  Episode ep(sc, ctrl);
  PolicyEpisode out;
  ep.run([&](const WorldState&, const SlotReport& r) {
    out.reward += slot_reward(r, reward);
    ctrl.take_slot();
  });
  out.metrics = episode_metrics(ep.world(), beta_obj);
  return out;
}

double evaluate(const EnvFactory& envs, const PolicyParams& policy, const AuctionWeights& auction,
                const RewardParams& reward, int episodes, std::uint64_t seed, bool greedy) {
  if (episodes < 1) throw ConfigError("evaluate.episodes", "must be >= 1");
  double sum = 0.0;
  for (int e = 0; e < episodes; ++e) {
    const std::uint64_t s = derive_stream_seed(seed, "eval." + std::to_string(e));
    sum += run_policy_episode(envs(static_cast<std::uint64_t>(e)), policy, auction, reward, s, greedy).reward;
  }
  return sum / episodes;
}

}  // namespace lain::marl
