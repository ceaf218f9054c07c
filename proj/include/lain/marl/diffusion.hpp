#ifndef LAIN_MARL_DIFFUSION_HPP_
#define LAIN_MARL_DIFFUSION_HPP_

#include <vector>

#include "lain/marl/nn.hpp"

namespace lain::marl {

// alpha_bar[t] for t = 0..steps, alpha_bar[0] = 1, built from a linear
// per-step variance ramp beta_1..beta_T.
struct DiffusionSchedule {
  int steps = 0;
  std::vector<double> alpha_bar;

  static DiffusionSchedule linear(int steps, double beta_start = 1e-4, double beta_end = 0.02);
  double signal(int t) const;  // sqrt(alpha_bar_t)
  double noise(int t) const;   // sqrt(1 - alpha_bar_t)
};

// sqrt(ab_t) z0 + sqrt(1 - ab_t) noise. Throws ShapeError on size mismatch
// and std::out_of_range for t outside [0, steps].
Vec forward_diffuse(const Vec& z0, int t, const DiffusionSchedule& schedule, const Vec& noise);

// Denoiser input rows: [z (L); features (L); t / T].
Mat denoiser_input(const Mat& z, const Mat& features, const std::vector<int>& t, int steps);

struct DiffusionBatch {
  Mat z0;              // L x B clean latents
  Mat noise;           // L x B
  std::vector<int> t;  // per column, in [1, steps]
};

// (1/B) sum_b ||noise_b - predicted_b||^2
double diffusion_loss_from_prediction(const Mat& noise, const Mat& predicted);

// Noise-prediction loss of `denoiser` on the batch. When grads are given,
// accumulates into denoiser_grad and writes dL/dfeatures.
double diffusion_loss(const DiffusionBatch& batch, const Mat& features, const Mlp& denoiser,
                      const DiffusionSchedule& schedule, Mlp* denoiser_grad = nullptr,
                      Mat* dfeatures = nullptr);

}  // namespace lain::marl

#endif  // LAIN_MARL_DIFFUSION_HPP_
