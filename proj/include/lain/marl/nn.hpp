#ifndef LAIN_MARL_NN_HPP_
#define LAIN_MARL_NN_HPP_

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "lain/rng.hpp"

namespace lain::marl {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

enum class Activation { Tanh, Relu };

Activation parse_activation(const std::string& name);
std::string to_string(Activation a);

// Contiguous view of one parameter tensor.
struct ParamView {
  std::string name;
  double* data = nullptr;
  std::size_t size = 0;
};

struct Dense {
  Mat weight;  // out x in
  Vec bias;    // out
};

// Fully connected network: hidden layers use `activation`, the output layer
// is linear. Inputs are column-major batches (features x batch).
class Mlp {
 public:
  // Per-call record of layer inputs and pre-activations for backward().
  struct Cache {
    std::vector<Mat> inputs;
    std::vector<Mat> pre;
  };

  Mlp() = default;
  // sizes = {in, hidden..., out}. Weights ~ U(-1/sqrt(in), 1/sqrt(in)); the
  // last layer is additionally scaled by `out_scale`.
  Mlp(const std::vector<int>& sizes, Activation activation, Rng& rng, double out_scale = 1.0);

  Mat forward(const Mat& x, Cache* cache = nullptr) const;

  // Adds dL/dtheta into `grad` (same shapes) and returns dL/dx.
  Mat backward(const Cache& cache, const Mat& dout, Mlp& grad) const;

  Mlp zeros_like() const;
  void set_zero();

  int in_dim() const { return static_cast<int>(layers_.front().weight.cols()); }
  int out_dim() const { return static_cast<int>(layers_.back().weight.rows()); }
  Activation activation() const { return activation_; }
  std::vector<int> sizes() const;
  std::size_t num_params() const;

  std::vector<ParamView> params(const std::string& prefix);
  std::vector<Dense>& layers() { return layers_; }
  const std::vector<Dense>& layers() const { return layers_; }

 private:
  std::vector<Dense> layers_;
  Activation activation_ = Activation::Tanh;
};

// Adam over a fixed list of parameter views.
class Adam {
 public:
  Adam() = default;
  Adam(std::vector<ParamView> params, double lr, double beta1 = 0.9, double beta2 = 0.999,
       double eps = 1e-8);
  // grads must list the same tensors in the same order.
  void step(const std::vector<ParamView>& grads);
  double learning_rate() const { return lr_; }

 private:
  std::vector<ParamView> params_;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
  double lr_ = 1e-3;
  double beta1_ = 0.9;
  double beta2_ = 0.999;
  double eps_ = 1e-8;
  long t_ = 0;
};

// Global L2 norm over the views; scales them in place when above max_norm.
double clip_grad_norm(const std::vector<ParamView>& grads, double max_norm);

}  // namespace lain::marl

#endif  // LAIN_MARL_NN_HPP_
