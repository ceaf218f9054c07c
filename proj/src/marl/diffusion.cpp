#include "lain/marl/diffusion.hpp"

#include <cmath>
#include <stdexcept>

#include "lain/errors.hpp"

namespace lain::marl {

DiffusionSchedule DiffusionSchedule::linear(int steps, double beta_start, double beta_end) {
  if (steps < 1) throw ConfigError("training.diffusion_steps", "must be >= 1");
  if (!(beta_start > 0.0 && beta_end >= beta_start && beta_end < 1.0))
    throw ConfigError("training.beta", "need 0 < beta_start <= beta_end < 1");
  DiffusionSchedule s;
  s.steps = steps;
  s.alpha_bar.assign(static_cast<std::size_t>(steps) + 1, 1.0);
  for (int k = 1; k <= steps; ++k) {
    const double frac = steps == 1 ? 0.0 : static_cast<double>(k - 1) / (steps - 1);
    const double beta = beta_start + (beta_end - beta_start) * frac;
    s.alpha_bar[k] = s.alpha_bar[k - 1] * (1.0 - beta);
  }
  return s;
}

double DiffusionSchedule::signal(int t) const { return std::sqrt(alpha_bar.at(t)); }
double DiffusionSchedule::noise(int t) const { return std::sqrt(1.0 - alpha_bar.at(t)); }

Vec forward_diffuse(const Vec& z0, int t, const DiffusionSchedule& s, const Vec& noise) {
  if (z0.size() != noise.size()) throw ShapeError("latent and noise sizes differ");
  if (t < 0 || t > s.steps) throw std::out_of_range("diffusion step outside schedule");
  return s.signal(t) * z0 + s.noise(t) * noise;
}

Mat denoiser_input(const Mat& z, const Mat& features, const std::vector<int>& t, int steps) {
  if (z.cols() != features.cols() || static_cast<Eigen::Index>(t.size()) != z.cols())
    throw ShapeError("denoiser input batch sizes differ");
  Mat in(z.rows() + features.rows() + 1, z.cols());
  in.topRows(z.rows()) = z;
  in.middleRows(z.rows(), features.rows()) = features;
  for (Eigen::Index c = 0; c < z.cols(); ++c)
    in(in.rows() - 1, c) = static_cast<double>(t[static_cast<std::size_t>(c)]) / steps;
  return in;
}

double diffusion_loss_from_prediction(const Mat& noise, const Mat& predicted) {
  if (noise.rows() != predicted.rows() || noise.cols() != predicted.cols())
    throw ShapeError("prediction shape differs from noise");
  if (noise.cols() == 0) throw ShapeError("empty diffusion batch");
  return (noise - predicted).squaredNorm() / static_cast<double>(noise.cols());
}

double diffusion_loss(const DiffusionBatch& batch, const Mat& features, const Mlp& denoiser,
                      const DiffusionSchedule& s, Mlp* denoiser_grad, Mat* dfeatures) {
  const Eigen::Index latent = batch.z0.rows();
  const Eigen::Index n = batch.z0.cols();
  if (n == 0) throw ShapeError("empty diffusion batch");
  Mat zt(latent, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const int t = batch.t[static_cast<std::size_t>(c)];
    zt.col(c) = s.signal(t) * batch.z0.col(c) + s.noise(t) * batch.noise.col(c);
  }
  Mlp::Cache cache;
  const Mat in = denoiser_input(zt, features, batch.t, s.steps);
  const Mat pred = denoiser.forward(in, denoiser_grad ? &cache : nullptr);
  const double loss = diffusion_loss_from_prediction(batch.noise, pred);
  if (denoiser_grad) {
    const Mat dpred = (pred - batch.noise) * (2.0 / static_cast<double>(n));
    const Mat din = denoiser.backward(cache, dpred, *denoiser_grad);
    if (dfeatures) *dfeatures = din.middleRows(latent, features.rows());
  }
  return loss;
}

}  // namespace lain::marl
