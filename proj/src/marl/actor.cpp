#include "lain/marl/actor.hpp"

#include <cmath>
#include <limits>

#include "lain/errors.hpp"

namespace lain::marl {

ActorParams ActorParams::init(const ActorShape& s, Rng& rng) {
  if (s.obs_dim < 1 || s.n_actions < 1 || s.latent_dim < 1 || s.hidden < 1)
    throw ShapeError("actor dimensions must be positive");
  ActorParams p;
  p.encoder = Mlp({s.obs_dim, s.hidden, s.latent_dim}, s.activation, rng);
  p.denoiser = Mlp({2 * s.latent_dim + 1, s.hidden, s.hidden, s.latent_dim}, s.activation, rng);
  // small output layer: near-uniform initial policy
  p.decoder = Mlp({s.latent_dim, s.hidden, s.n_actions}, s.activation, rng, 0.01);
  return p;
}

ActorParams ActorParams::zeros_like() const {
  return {encoder.zeros_like(), denoiser.zeros_like(), decoder.zeros_like()};
}

void ActorParams::set_zero() {
  encoder.set_zero();
  denoiser.set_zero();
  decoder.set_zero();
}

std::vector<ParamView> ActorParams::params(const std::string& prefix) {
  auto out = encoder.params(prefix + ".encoder");
  auto d = denoiser.params(prefix + ".denoiser");
  auto c = decoder.params(prefix + ".decoder");
  out.insert(out.end(), d.begin(), d.end());
  out.insert(out.end(), c.begin(), c.end());
  return out;
}

double reverse_c1(const DiffusionSchedule& s, int t) { return s.signal(t - 1) / s.signal(t); }

double reverse_c2(const DiffusionSchedule& s, int t) {
  return s.noise(t - 1) - s.signal(t - 1) * s.noise(t) / s.signal(t);
}

Mat masked_log_softmax(const Mat& logits, const Mat& masks) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  Mat out(logits.rows(), logits.cols());
  for (Eigen::Index c = 0; c < logits.cols(); ++c) {
    double mx = kNegInf;
    for (Eigen::Index r = 0; r < logits.rows(); ++r)
      if (masks(r, c) > 0.5) mx = std::max(mx, logits(r, c));
    if (mx == kNegInf) throw ConstraintError("no feasible action in mask");
    double sum = 0.0;
    for (Eigen::Index r = 0; r < logits.rows(); ++r)
      if (masks(r, c) > 0.5) sum += std::exp(logits(r, c) - mx);
    const double lse = mx + std::log(sum);
    for (Eigen::Index r = 0; r < logits.rows(); ++r)
      out(r, c) = masks(r, c) > 0.5 ? logits(r, c) - lse : kNegInf;
  }
  return out;
}

ActorForward actor_forward(const ActorParams& p, const ActorShape& s, const DiffusionSchedule& sched,
                           const Mat& obs, const Mat& z_T, const Mat& masks) {
  ActorForward f;
  f.features = p.encoder.forward(obs, &f.encoder_cache);
  if (s.diffusion) {
    if (z_T.rows() != s.latent_dim || z_T.cols() != obs.cols())
      throw ShapeError("z_T must be latent_dim x batch");
    Mat z = z_T;
    std::vector<int> steps(static_cast<std::size_t>(obs.cols()));
    f.denoiser_caches.resize(static_cast<std::size_t>(sched.steps));
    for (int t = sched.steps; t >= 1; --t) {
      std::fill(steps.begin(), steps.end(), t);
      const Mat in = denoiser_input(z, f.features, steps, sched.steps);
      const Mat eps = p.denoiser.forward(in, &f.denoiser_caches[sched.steps - t]);
      z = reverse_c1(sched, t) * z + reverse_c2(sched, t) * eps;
    }
    f.latent = std::move(z);
  } else {
    f.latent = f.features;
  }
  f.logits = p.decoder.forward(f.latent, &f.decoder_cache);
  f.log_probs = masked_log_softmax(f.logits, masks);
  return f;
}

void actor_backward(const ActorParams& p, const ActorShape& s, const DiffusionSchedule& sched,
                    const ActorForward& f, const Mat& dlogits, ActorParams& grad) {
  const Mat dlatent = p.decoder.backward(f.decoder_cache, dlogits, grad.decoder);
  Mat dfeatures;
  if (s.diffusion) {
    const Eigen::Index L = s.latent_dim;
    Mat dz = dlatent;
    dfeatures = Mat::Zero(f.features.rows(), f.features.cols());
    // forward ran t = T..1; walk it back from t = 1
    for (int t = 1; t <= sched.steps; ++t) {
      const Mat deps = reverse_c2(sched, t) * dz;
      const Mat din = p.denoiser.backward(f.denoiser_caches[sched.steps - t], deps, grad.denoiser);
      dz = reverse_c1(sched, t) * dz + din.topRows(L);
      dfeatures += din.middleRows(L, L);
    }
  } else {
    dfeatures = dlatent;
  }
  p.encoder.backward(f.encoder_cache, dfeatures, grad.encoder);
}

Mat logp_grad_to_logits(const ActorForward& f, const std::vector<int>& actions, const Vec& dlogp) {
  Mat d = Mat::Zero(f.logits.rows(), f.logits.cols());
  for (Eigen::Index c = 0; c < f.logits.cols(); ++c) {
    const double g = dlogp(c);
    if (g == 0.0) continue;
    for (Eigen::Index r = 0; r < f.logits.rows(); ++r) {
      const double lp = f.log_probs(r, c);
      const double prob = std::isfinite(lp) ? std::exp(lp) : 0.0;
      d(r, c) = -g * prob;
    }
    d(actions[static_cast<std::size_t>(c)], c) += g;
  }
  return d;
}

ActionSample sample_action(const Vec& obs, const std::vector<bool>& mask, const ActorParams& p,
                           const ActorShape& s, const DiffusionSchedule& sched, Rng& rng,
                           bool greedy) {
  if (static_cast<int>(mask.size()) != s.n_actions) throw ShapeError("mask length != n_actions");
  Mat m(s.n_actions, 1);
  bool any = false;
  for (int i = 0; i < s.n_actions; ++i) {
    m(i, 0) = mask[i] ? 1.0 : 0.0;
    any = any || mask[i];
  }
  if (!any) throw ConstraintError("no feasible action in mask");

  ActionSample out;
  Mat zt(s.diffusion ? s.latent_dim : 0, 1);
  if (s.diffusion) {
    for (int i = 0; i < s.latent_dim; ++i) zt(i, 0) = rng.normal();
    out.z_T = zt.col(0);
  }
  const ActorForward f = actor_forward(p, s, sched, obs, zt, m);
  out.latent = f.latent.col(0);

  if (greedy) {
    int best = -1;
    for (int i = 0; i < s.n_actions; ++i)
      if (mask[i] && (best < 0 || f.log_probs(i, 0) > f.log_probs(best, 0))) best = i;
    out.action = best;
  } else {
    const double u = rng.uniform();
    double acc = 0.0;
    int last = 0;
    out.action = -1;
    for (int i = 0; i < s.n_actions; ++i) {
      if (!mask[i]) continue;
      last = i;
      acc += std::exp(f.log_probs(i, 0));
      if (u < acc) {
        out.action = i;
        break;
      }
    }
    if (out.action < 0) out.action = last;  // rounding at the top of the CDF
  }
  out.log_prob = f.log_probs(out.action, 0);
  return out;
}

}  // namespace lain::marl
