#include "lain/marl/nn.hpp"

#include <cmath>

#include "lain/errors.hpp"

namespace lain::marl {

Activation parse_activation(const std::string& name) {
  if (name == "tanh") return Activation::Tanh;
  if (name == "relu") return Activation::Relu;
  throw ConfigError("training.activation", "expected tanh or relu, got '" + name + "'");
}

std::string to_string(Activation a) { return a == Activation::Tanh ? "tanh" : "relu"; }

Mlp::Mlp(const std::vector<int>& sizes, Activation activation, Rng& rng, double out_scale)
    : activation_(activation) {
  if (sizes.size() < 2) throw ShapeError("an MLP needs input and output sizes");
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
    const int in = sizes[i];
    const int out = sizes[i + 1];
    if (in < 1 || out < 1) throw ShapeError("MLP layer sizes must be positive");
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    const double scale = (i + 2 == sizes.size()) ? out_scale : 1.0;
    Dense d{Mat(out, in), Vec(out)};
    for (int c = 0; c < in; ++c)
      for (int r = 0; r < out; ++r) d.weight(r, c) = rng.uniform(-bound, bound) * scale;
    for (int r = 0; r < out; ++r) d.bias(r) = rng.uniform(-bound, bound) * scale;
    layers_.push_back(std::move(d));
  }
}

Mat Mlp::forward(const Mat& x, Cache* cache) const {
  if (x.rows() != in_dim()) throw ShapeError("MLP input has the wrong feature count");
  if (cache) {
    cache->inputs.clear();
    cache->pre.clear();
  }
  Mat h = x;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const Dense& l = layers_[i];
    Mat z = l.weight * h;
    z.colwise() += l.bias;
    if (cache) {
      cache->inputs.push_back(h);
      cache->pre.push_back(z);
    }
    if (i + 1 == layers_.size()) {
      h = std::move(z);
    } else if (activation_ == Activation::Tanh) {
      h = z.array().tanh().matrix();
    } else {
      h = z.cwiseMax(0.0);
    }
  }
  return h;
}

Mat Mlp::backward(const Cache& cache, const Mat& dout, Mlp& grad) const {
  Mat d = dout;
  for (std::size_t k = layers_.size(); k-- > 0;) {
    if (k + 1 != layers_.size()) {
      const Mat& z = cache.pre[k];
      if (activation_ == Activation::Tanh) {
        d.array() *= 1.0 - z.array().tanh().square();
      } else {
        d.array() *= (z.array() > 0.0).cast<double>();
      }
    }
    Dense& g = grad.layers_[k];
    g.weight.noalias() += d * cache.inputs[k].transpose();
    g.bias += d.rowwise().sum();
    d = layers_[k].weight.transpose() * d;
  }
  return d;
}

Mlp Mlp::zeros_like() const {
  Mlp z = *this;
  z.set_zero();
  return z;
}

void Mlp::set_zero() {
  for (Dense& l : layers_) {
    l.weight.setZero();
    l.bias.setZero();
  }
}

std::vector<int> Mlp::sizes() const {
  std::vector<int> s{in_dim()};
  for (const Dense& l : layers_) s.push_back(static_cast<int>(l.weight.rows()));
  return s;
}

std::size_t Mlp::num_params() const {
  std::size_t n = 0;
  for (const Dense& l : layers_) n += static_cast<std::size_t>(l.weight.size() + l.bias.size());
  return n;
}

std::vector<ParamView> Mlp::params(const std::string& prefix) {
  std::vector<ParamView> out;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    Dense& l = layers_[i];
    const std::string base = prefix + ".l" + std::to_string(i);
    out.push_back({base + ".weight", l.weight.data(), static_cast<std::size_t>(l.weight.size())});
    out.push_back({base + ".bias", l.bias.data(), static_cast<std::size_t>(l.bias.size())});
  }
  return out;
}

Adam::Adam(std::vector<ParamView> params, double lr, double beta1, double beta2, double eps)
    : params_(std::move(params)), lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
  for (const ParamView& p : params_) {
    m_.emplace_back(p.size, 0.0);
    v_.emplace_back(p.size, 0.0);
  }
}

void Adam::step(const std::vector<ParamView>& grads) {
  if (grads.size() != params_.size()) throw ShapeError("Adam: gradient list mismatch");
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t k = 0; k < params_.size(); ++k) {
    const ParamView& p = params_[k];
    const ParamView& g = grads[k];
    if (g.size != p.size) throw ShapeError("Adam: gradient size mismatch for " + p.name);
    auto& m = m_[k];
    auto& v = v_[k];
    for (std::size_t i = 0; i < p.size; ++i) {
      m[i] = beta1_ * m[i] + (1.0 - beta1_) * g.data[i];
      v[i] = beta2_ * v[i] + (1.0 - beta2_) * g.data[i] * g.data[i];
      p.data[i] -= lr_ * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps_);
    }
  }
}

double clip_grad_norm(const std::vector<ParamView>& grads, double max_norm) {
  double sq = 0.0;
  for (const ParamView& g : grads)
    for (std::size_t i = 0; i < g.size; ++i) sq += g.data[i] * g.data[i];
  const double norm = std::sqrt(sq);
  if (max_norm > 0.0 && norm > max_norm) {
    const double s = max_norm / norm;
    for (const ParamView& g : grads)
      for (std::size_t i = 0; i < g.size; ++i) g.data[i] *= s;
  }
  return norm;
}

}  // namespace lain::marl
