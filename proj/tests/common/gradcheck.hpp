// Central finite-difference checks for the hand-written backward passes.
#ifndef LAIN_TEST_GRADCHECK_HPP_
#define LAIN_TEST_GRADCHECK_HPP_

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <vector>

#include "lain/marl/actor.hpp"
#include "lain/marl/diffusion.hpp"
#include "lain/marl/nn.hpp"

namespace lain::gradcheck {

using marl::Mat;
using marl::ParamView;
using marl::Vec;

struct Report {
  int checked = 0;
  int failed = 0;
  double worst = 0.0;  // largest |a - n| / max(|a|, |n|) among non-tiny entries
  bool ok() const { return failed == 0 && checked > 0; }
};

constexpr double kRelTol = 1e-4;
// entries where both gradients sit below this are compared absolutely,
// the stencil's round-off is around 1e-11 for O(1) losses
constexpr double kTiny = 1e-7;
constexpr double kAbsTol = 1e-10;

inline void compare(double analytic, double numeric, Report& r) {
  ++r.checked;
  const double scale = std::max(std::fabs(analytic), std::fabs(numeric));
  const double diff = std::fabs(analytic - numeric);
  if (scale < kTiny) {
    if (diff > kAbsTol) ++r.failed;
    return;
  }
  r.worst = std::max(r.worst, diff / scale);
  if (diff > kRelTol * scale) {
    ++r.failed;
#ifdef LAIN_GRADCHECK_VERBOSE
    std::fprintf(stderr, "  analytic %.10g numeric %.10g\n", analytic, numeric);
#endif
  }
}

// Perturbs every entry of `params` and compares against `grads`. Uses the
// fourth-order central stencil.
inline void check_views(const std::vector<ParamView>& params, const std::vector<ParamView>& grads,
                        const std::function<double()>& loss, Report& r, double h = 1e-4) {
  for (std::size_t k = 0; k < params.size(); ++k) {
    for (std::size_t i = 0; i < params[k].size; ++i) {
      double& x = params[k].data[i];
      const double keep = x;
      auto at = [&](double d) {
        x = keep + d;
        return loss();
      };
      const double num = (at(-2 * h) - 8.0 * at(-h) + 8.0 * at(h) - at(2 * h)) / (12.0 * h);
      x = keep;
      compare(grads[k].data[i], num, r);
    }
  }
}

inline Mat random_mat(Rng& rng, int rows, int cols, double scale = 1.0) {
  Mat m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = scale * rng.normal();
  return m;
}

// Weighted sum of the outputs of a small network, input gradient included.
inline Report mlp(marl::Activation act, std::uint64_t seed) {
  Rng rng(seed);
  marl::Mlp net({4, 6, 5, 3}, act, rng);
  Mat x = random_mat(rng, 4, 5);
  const Mat w = random_mat(rng, 3, 5);
  auto loss = [&] { return net.forward(x).cwiseProduct(w).sum(); };
  marl::Mlp grad = net.zeros_like();
  marl::Mlp::Cache cache;
  net.forward(x, &cache);
  const Mat dx = net.backward(cache, w, grad);
  Report r;
  check_views(net.params("n"), grad.params("n"), loss, r);
  std::vector<ParamView> xv{{"x", x.data(), static_cast<std::size_t>(x.size())}};
  Mat dxc = dx;
  std::vector<ParamView> dv{{"x", dxc.data(), static_cast<std::size_t>(dxc.size())}};
  check_views(xv, dv, loss, r);
  return r;
}

// Squared-error critic on a batch of states.
inline Report critic(std::uint64_t seed) {
  Rng rng(seed);
  marl::Mlp net({7, 8, 8, 1}, marl::Activation::Tanh, rng);
  const Mat s = random_mat(rng, 7, 6);
  const Mat target = random_mat(rng, 1, 6);
  auto loss = [&] { return (net.forward(s) - target).squaredNorm() / 6.0; };
  marl::Mlp grad = net.zeros_like();
  marl::Mlp::Cache cache;
  const Mat v = net.forward(s, &cache);
  net.backward(cache, 2.0 * (v - target) / 6.0, grad);
  Report r;
  check_views(net.params("c"), grad.params("c"), loss, r);
  return r;
}

// Weighted log-probabilities of fixed actions through the full actor.
inline Report actor(bool diffusion, std::uint64_t seed) {
  Rng rng(seed);
  marl::ActorShape s;
  s.obs_dim = 5;
  s.n_actions = 4;
  s.latent_dim = 3;
  s.hidden = 6;
  s.diffusion_steps = 3;
  s.diffusion = diffusion;
  marl::ActorParams p = marl::ActorParams::init(s, rng);
  // larger decoder weights so the logits are not nearly constant
  for (auto& l : p.decoder.layers()) l.weight *= 30.0;
  const auto sched = marl::DiffusionSchedule::linear(s.diffusion_steps, s.beta_start, s.beta_end);
  const int batch = 4;
  const Mat obs = random_mat(rng, s.obs_dim, batch);
  const Mat zT = random_mat(rng, s.latent_dim, batch);
  Mat masks = Mat::Ones(s.n_actions, batch);
  masks(3, 0) = 0.0;
  masks(0, 2) = 0.0;
  const std::vector<int> actions{1, 3, 2, 0};
  Vec w(batch);
  w << 0.7, -1.3, 0.4, 2.0;
  auto loss = [&] {
    const marl::ActorForward f = marl::actor_forward(p, s, sched, obs, zT, masks);
    double l = 0.0;
    for (int b = 0; b < batch; ++b) l += w(b) * f.log_probs(actions[b], b);
    return l;
  };
  const marl::ActorForward f = marl::actor_forward(p, s, sched, obs, zT, masks);
  marl::ActorParams grad = p.zeros_like();
  marl::actor_backward(p, s, sched, f, marl::logp_grad_to_logits(f, actions, w), grad);
  Report r;
  check_views(p.params("a"), grad.params("a"), loss, r);
  return r;
}

// Noise-prediction loss with respect to the denoiser and the conditioning features.
inline Report diffusion_loss(std::uint64_t seed) {
  Rng rng(seed);
  const int L = 3, B = 5, T = 4;
  marl::Mlp den({2 * L + 1, 6, 6, L}, marl::Activation::Tanh, rng);
  const auto sched = marl::DiffusionSchedule::linear(T);
  marl::DiffusionBatch batch;
  batch.z0 = random_mat(rng, L, B);
  batch.noise = random_mat(rng, L, B);
  batch.t = {1, 2, 4, 3, 1};
  Mat feat = random_mat(rng, L, B);
  auto loss = [&] { return marl::diffusion_loss(batch, feat, den, sched); };
  marl::Mlp grad = den.zeros_like();
  Mat dfeat;
  marl::diffusion_loss(batch, feat, den, sched, &grad, &dfeat);
  Report r;
  check_views(den.params("d"), grad.params("d"), loss, r);
  std::vector<ParamView> fv{{"f", feat.data(), static_cast<std::size_t>(feat.size())}};
  std::vector<ParamView> dv{{"f", dfeat.data(), static_cast<std::size_t>(dfeat.size())}};
  check_views(fv, dv, loss, r);
  return r;
}

}  // namespace lain::gradcheck

#endif  // LAIN_TEST_GRADCHECK_HPP_
