#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "../common/gradcheck.hpp"
#include "helpers.hpp"
#include "lain/errors.hpp"
#include "lain/marl/checkpoint.hpp"
#include "lain/marl/happo.hpp"

using namespace lain;
using namespace lain::marl;

TEST_CASE("finite-difference gradients") {
  CHECK(gradcheck::mlp(Activation::Tanh, 1).ok());
  CHECK(gradcheck::mlp(Activation::Relu, 2).ok());
  CHECK(gradcheck::critic(3).ok());
  CHECK(gradcheck::actor(true, 4).ok());
  CHECK(gradcheck::actor(false, 5).ok());
  CHECK(gradcheck::diffusion_loss(6).ok());
}

TEST_CASE("schedule and forward diffusion") {
  const DiffusionSchedule s = DiffusionSchedule::linear(10);
  CHECK(s.alpha_bar[0] == 1.0);
  for (int t = 1; t <= 10; ++t) {
    CHECK(s.alpha_bar[t] < s.alpha_bar[t - 1]);
    CHECK(s.alpha_bar[t] > 0.0);
  }
  Vec z0(3), n(3);
  z0 << 1.0, -2.0, 0.5;
  n << 0.3, 0.1, -1.0;
  CHECK(forward_diffuse(z0, 0, s, n) == z0);

  DiffusionSchedule quarter;
  quarter.steps = 1;
  quarter.alpha_bar = {1.0, 0.25};
  const Vec out = forward_diffuse(z0, 1, quarter, n);
  for (int i = 0; i < 3; ++i) CHECK(out(i) == doctest::Approx(0.5 * z0(i) + std::sqrt(0.75) * n(i)));

  CHECK_THROWS_AS(forward_diffuse(z0, 1, s, Vec::Zero(2)), ShapeError);
  CHECK_THROWS_AS(forward_diffuse(z0, 11, s, n), std::out_of_range);
}

TEST_CASE("forward diffusion preserves a standard normal marginal") {
  const DiffusionSchedule s = DiffusionSchedule::linear(10);
  Rng rng(17);
  const int N = 100000;
  double sum = 0.0, sq = 0.0;
  Vec z(1), e(1);
  for (int i = 0; i < N; ++i) {
    z(0) = rng.normal();
    e(0) = rng.normal();
    const double x = forward_diffuse(z, 1 + i % 10, s, e)(0);
    sum += x;
    sq += x * x;
  }
  const double mean = sum / N;
  const double var = sq / N - mean * mean;
  CHECK(std::abs(mean) < 3.0 / std::sqrt(N));
  CHECK(std::abs(var - 1.0) < 3.0 * std::sqrt(2.0 / N));
}

TEST_CASE("diffusion loss boundaries") {
  Rng rng(8);
  const Mat noise = gradcheck::random_mat(rng, 32, 2000);
  CHECK(diffusion_loss_from_prediction(noise, noise) == 0.0);
  CHECK(diffusion_loss_from_prediction(noise, Mat::Zero(32, 2000)) == doctest::Approx(32.0).epsilon(0.05));
}

TEST_CASE("masked softmax and sampling") {
  Mat logits(3, 1);
  logits << 0.2, 1.5, -0.7;
  Mat mask(3, 1);
  mask << 1, 0, 1;
  const Mat lp = masked_log_softmax(logits, mask);
  CHECK(std::isinf(lp(1, 0)));
  CHECK(std::exp(lp(0, 0)) + std::exp(lp(2, 0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(masked_log_softmax(logits, Mat::Zero(3, 1)), ConstraintError);

  for (bool diffusion : {true, false}) {
    ActorShape shape;
    shape.obs_dim = 6;
    shape.n_actions = 4;
    shape.latent_dim = 4;
    shape.hidden = 8;
    shape.diffusion_steps = 3;
    shape.diffusion = diffusion;
    Rng rng(3);
    const ActorParams p = ActorParams::init(shape, rng);
    const DiffusionSchedule sched = DiffusionSchedule::linear(3);
    const Vec obs = Vec::Random(6);
    const ActionSample one = sample_action(obs, {false, false, true, false}, p, shape, sched, rng);
    CHECK(one.action == 2);
    CHECK(one.log_prob == 0.0);
    CHECK(one.z_T.size() == (diffusion ? 4 : 0));
    for (int i = 0; i < 10000; ++i) {
      const int a = sample_action(obs, {true, false, true, false}, p, shape, sched, rng).action;
      CHECK((a == 0 || a == 2));
    }
    CHECK_THROWS_AS(sample_action(obs, {false, false, false, false}, p, shape, sched, rng), ConstraintError);
  }
}

TEST_CASE("stored latent reproduces the sampled log-probability") {
  ActorShape shape;
  shape.obs_dim = 5;
  shape.n_actions = 3;
  shape.latent_dim = 4;
  shape.hidden = 8;
  shape.diffusion_steps = 4;
  Rng rng(12);
  const ActorParams p = ActorParams::init(shape, rng);
  const DiffusionSchedule sched = DiffusionSchedule::linear(4);
  const Vec obs = Vec::Random(5);
  const ActionSample a = sample_action(obs, {true, true, true}, p, shape, sched, rng);
  const ActorForward f = actor_forward(p, shape, sched, obs, a.z_T, Mat::Ones(3, 1));
  CHECK(f.log_probs(a.action, 0) == doctest::Approx(a.log_prob).epsilon(1e-12));
}

TEST_CASE("GAE boundaries") {
  const std::vector<double> r{1.0, 0.5, -0.2, 2.0};
  const std::vector<double> v{0.3, 0.1, 0.4, -0.5};
  const std::vector<bool> d{false, false, false, true};
  const GaeResult td = gae_advantages(r, v, d, 0.9, 0.0);
  for (int t = 0; t < 4; ++t) {
    const double next = t < 3 ? v[t + 1] : 0.0;
    CHECK(td.advantages(t) == doctest::Approx(r[t] + 0.9 * next - v[t]));
  }
  const GaeResult mc = gae_advantages(r, v, d, 1.0, 1.0);
  double ret = 0.0;
  for (int t = 3; t >= 0; --t) {
    ret += r[t];
    CHECK(mc.advantages(t) == doctest::Approx(ret - v[t]));
    CHECK(mc.returns(t) == doctest::Approx(ret));
  }
  // constant reward 1 with the exact discounted value
  const double g = 0.9;
  const std::vector<double> ones(5, 1.0);
  const std::vector<double> perfect(5, 1.0 / (1.0 - g));
  const GaeResult flat = gae_advantages(ones, perfect, std::vector<bool>(5, false), g, 0.95, 1.0 / (1.0 - g));
  for (int t = 0; t < 5; ++t) CHECK(std::abs(flat.advantages(t)) < 1e-12);

  const Vec n = normalize_advantages(mc.advantages);
  CHECK(std::abs(n.mean()) < 1e-12);
  CHECK((n.array() - n.mean()).square().mean() == doctest::Approx(1.0));
}

TEST_CASE("compound advantage and clip loss") {
  Vec m(3);
  m << 1.0, -2.0, 0.5;
  CHECK(compound_advantage(m, Vec::Ones(3)) == m);
  CHECK(compound_advantage(m, Vec::Constant(3, 2.0)) == 2.0 * m);

  const Vec old = Vec::Zero(3);
  const ClipLoss same = happo_clip_loss(old, old, m, 0.2);
  CHECK(same.loss == doctest::Approx(-m.mean()));

  const Vec pos = Vec::Constant(3, 1.0);
  const Vec doubled = Vec::Constant(3, std::log(2.0));
  const ClipLoss clipped = happo_clip_loss(doubled, old, pos, 0.2);
  CHECK(clipped.loss == doctest::Approx(-1.2));
  CHECK(clipped.dlogp.cwiseAbs().maxCoeff() == 0.0);

  Vec inside(3);
  inside << 0.05, -0.1, 0.15;
  const ClipLoss in = happo_clip_loss(inside, old, m, 0.2);
  const Vec ratio = inside.array().exp();
  CHECK(in.loss == doctest::Approx(-(ratio.cwiseProduct(m)).mean()));
  for (int i = 0; i < 3; ++i) CHECK(in.dlogp(i) == doctest::Approx(-ratio(i) * m(i) / 3.0));

  CHECK_THROWS_AS(happo_clip_loss(old, old, m, 0.0), ConfigError);
  CHECK_THROWS_AS(happo_clip_loss(old, old, m, 1.0), ConfigError);
}

namespace {

Scenario toy() {
  Scenario s = test::small_scenario(2, 1, 1, 4, 21);
  s.world.n_slots = 12;
  return s;
}

TrainingConfig tiny_training(bool diffusion) {
  TrainingConfig c;
  c.iterations = 3;
  c.ppo_epochs = 2;
  c.batch_size = 8;
  c.latent_dim = 4;
  c.hidden = 8;
  c.diffusion_steps = 3;
  c.diffusion = diffusion;
  return c;
}

}  // namespace

TEST_CASE("training runs one actor update per agent in permutation order") {
  for (bool diffusion : {true, false}) {
    const TrainResult r = train(reseeding_factory(toy(), 4), AuctionWeights{}, tiny_training(diffusion));
    REQUIRE(r.update_orders.size() == 3);
    for (const auto& order : r.update_orders) {
      std::vector<int> sorted = order;
      std::sort(sorted.begin(), sorted.end());
      CHECK(sorted == std::vector<int>{0, 1});
    }
    CHECK(r.curve.size() == 3);
    for (const CurvePoint& p : r.curve) CHECK(std::isfinite(p.mean_reward));
    if (!diffusion) {
      for (const CurvePoint& p : r.curve) CHECK(p.diffusion_loss == 0.0);
    }
  }
}

TEST_CASE("training is deterministic") {
  const TrainResult a = train(reseeding_factory(toy(), 9), AuctionWeights{}, tiny_training(true));
  const TrainResult b = train(reseeding_factory(toy(), 9), AuctionWeights{}, tiny_training(true));
  CHECK(a.update_orders == b.update_orders);
  REQUIRE(a.curve.size() == b.curve.size());
  for (std::size_t i = 0; i < a.curve.size(); ++i) CHECK(a.curve[i].mean_reward == b.curve[i].mean_reward);
}

TEST_CASE("observations") {
  const Scenario sc = toy();
  WorldState w = init_world(sc);
  const int n = observation_size(sc);
  CHECK(n == 16 + 2 * 1 + (2 + 1 + 1));
  CHECK(build_observation(w, 0).size() == n);
  CHECK(global_state_size(sc) == 2 * n + 1);
  CHECK(build_global_state(w).size() == 2 * n + 1);

  WorldState other = w;
  other.uavs[1].local_queue.entries.push_back(test::task(1e6));
  CHECK(build_observation(other, 0) == build_observation(w, 0));

  w.uavs[0].pos = {-1e7, 1e9, 30.0};
  CHECK(build_observation(w, 0).allFinite());
}

TEST_CASE("rewards") {
  RewardParams p;
  CHECK(reward(0.12, true, p) == doctest::Approx(0.988));
  CHECK(reward(0.0, false, p) == 0.0);
  RewardParams twice = p;
  twice.alpha_energy *= 2.0;
  CHECK(reward(0.12, true, twice) - reward(0.0, true, twice) ==
        doctest::Approx(2.0 * (reward(0.12, true, p) - reward(0.0, true, p))));

  SlotReport r;
  r.decisions.resize(2);
  r.decisions[0].energy = 0.12;
  r.decisions[1].energy = 0.28;
  r.finalized.resize(3);
  r.finalized[0].succeeded = true;
  r.finalized[2].succeeded = true;
  r.flight_energy = {850.0, 850.0};
  CHECK(slot_reward(r, p) == doctest::Approx(-0.04 + 2.0));
}

TEST_CASE("checkpoint round trip") {
  TrainingConfig c = tiny_training(true);
  PolicyParams p = init_policy(toy(), c);
  std::stringstream ss;
  save_checkpoint(ss, p);
  PolicyParams q = load_checkpoint(ss);
  CHECK(q.shape == p.shape);
  CHECK(q.n_agents() == p.n_agents());
  auto a = p.actors[1].params("x");
  auto b = q.actors[1].params("x");
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k)
    for (std::size_t i = 0; i < a[k].size; ++i) CHECK(a[k].data[i] == b[k].data[i]);
  CHECK(q.critic.forward(Mat::Ones(q.state_dim, 1))(0, 0) ==
        p.critic.forward(Mat::Ones(p.state_dim, 1))(0, 0));

  std::stringstream bad("lain-checkpoint 2\n");
  CHECK_THROWS_AS(load_checkpoint(bad), ConfigError);
  std::string text = ss.str();
  std::stringstream cut(text.substr(0, text.size() / 2));
  CHECK_THROWS_AS(load_checkpoint(cut), ConfigError);
}
