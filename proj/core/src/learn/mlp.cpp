#include "lobarena/learn/mlp.hpp"

#include <algorithm>
#include <cmath>

#include "lobarena/util/error.hpp"

namespace lobarena::learn {
namespace {

void ensure_shape(Matrix& m, std::size_t rows, std::size_t cols) {
  if (m.rows() != rows || m.cols() != cols) m = Matrix(rows, cols);
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

std::string_view to_string(Activation a) {
  return a == Activation::ReLU ? "relu" : "sigmoid";
}

std::string_view to_string(OutputHead h) {
  return h == OutputHead::Softmax ? "softmax" : "linear";
}

void MlpConfig::validate() const {
  if (layer_sizes.size() < 2) {
    throw Error("mlp config: need at least input and output sizes");
  }
  for (std::size_t s : layer_sizes) {
    if (s == 0) throw Error("mlp config: zero layer size");
  }
  if (activations.size() != num_hidden()) {
    throw Error("mlp config: ", activations.size(), " activations for ",
                num_hidden(), " hidden layers");
  }
  if (dropout.size() != num_hidden()) {
    throw Error("mlp config: ", dropout.size(), " dropout rates for ",
                num_hidden(), " hidden layers");
  }
  for (double p : dropout) {
    if (!(p >= 0.0 && p < 1.0)) throw Error("mlp config: dropout must be in [0,1)");
  }
}

MlpConfig classifier_config(std::size_t inputs, std::size_t classes, double dropout) {
  MlpConfig c;
  c.layer_sizes = {inputs, 256, 1024, 1024, 1024, classes};
  c.activations = {Activation::ReLU, Activation::ReLU, Activation::ReLU,
                   Activation::Sigmoid};
  c.dropout = {dropout, dropout, dropout, dropout};
  c.head = OutputHead::Softmax;
  c.validate();
  return c;
}

MlpConfig cloner_config(std::size_t inputs, std::size_t outputs, double dropout) {
  MlpConfig c = classifier_config(inputs, outputs, dropout);
  c.head = OutputHead::Linear;
  return c;
}

MlpModel init_mlp(const MlpConfig& config, std::uint64_t seed) {
  config.validate();
  MlpModel m;
  m.config = config;
  Rng rng(seed);
  for (std::size_t l = 0; l + 1 < config.layer_sizes.size(); ++l) {
    const std::size_t fan_in = config.layer_sizes[l];
    const std::size_t fan_out = config.layer_sizes[l + 1];
    Matrix w(fan_in, fan_out);
    const double limit = std::sqrt(3.0 / static_cast<double>(fan_in));
    for (std::size_t i = 0; i < w.size(); ++i) {
      w.data()[i] = (2.0 * rng.uniform() - 1.0) * limit;
    }
    m.w.push_back(std::move(w));
    m.b.emplace_back(fan_out, 0.0);
  }
  return m;
}

const Matrix& mlp_forward(const MlpModel& m, const Matrix& batch, bool train_mode,
                          Rng* rng, ForwardCache& cache) {
  const MlpConfig& cfg = m.config;
  if (batch.cols() != cfg.layer_sizes.front()) {
    throw Error("mlp_forward: batch width ", batch.cols(), " != input size ",
                cfg.layer_sizes.front());
  }
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (!std::isfinite(batch.data()[i])) {
      throw Error("mlp_forward: non-finite input at element ", i);
    }
  }
  if (train_mode && rng == nullptr) {
    bool needs = false;
    for (double p : cfg.dropout) needs = needs || p > 0.0;
    if (needs) throw Error("mlp_forward: train mode with dropout needs an rng");
  }

  const std::size_t layers = cfg.num_affine();
  const std::size_t batch_n = batch.rows();
  cache.z.resize(layers);
  cache.a.resize(cfg.num_hidden());
  cache.mask.resize(cfg.num_hidden());
  cache.input = &batch;

  const Matrix* prev = &batch;
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t width = cfg.layer_sizes[l + 1];
    Matrix& z = cache.z[l];
    ensure_shape(z, batch_n, width);
    gemm_nn(*prev, m.w[l], z);
    for (std::size_t r = 0; r < batch_n; ++r) {
      double* zr = z.row(r);
      const double* b = m.b[l].data();
      for (std::size_t c = 0; c < width; ++c) zr[c] += b[c];
    }
    if (l + 1 == layers) break;  // head handles the last layer

    Matrix& a = cache.a[l];
    ensure_shape(a, batch_n, width);
    if (cfg.activations[l] == Activation::ReLU) {
      for (std::size_t i = 0; i < z.size(); ++i) {
        a.data()[i] = z.data()[i] > 0.0 ? z.data()[i] : 0.0;
      }
    } else {
      for (std::size_t i = 0; i < z.size(); ++i) a.data()[i] = sigmoid(z.data()[i]);
    }
    const double p = cfg.dropout[l];
    if (train_mode && p > 0.0) {
      Matrix& mask = cache.mask[l];
      ensure_shape(mask, batch_n, width);
      const double keep = 1.0 - p;
      const double scale = 1.0 / keep;
      for (std::size_t i = 0; i < mask.size(); ++i) {
        mask.data()[i] = rng->bernoulli(keep) ? scale : 0.0;
        a.data()[i] *= mask.data()[i];
      }
    } else {
      cache.mask[l] = Matrix();
    }
    prev = &a;
  }

  Matrix& out = cache.out;
  const Matrix& z_last = cache.z[layers - 1];
  ensure_shape(out, z_last.rows(), z_last.cols());
  if (cfg.head == OutputHead::Softmax) {
    for (std::size_t r = 0; r < z_last.rows(); ++r) {
      const double* zr = z_last.row(r);
      double* pr = out.row(r);
      double mx = zr[0];
      for (std::size_t c = 1; c < z_last.cols(); ++c) mx = std::max(mx, zr[c]);
      double sum = 0.0;
      for (std::size_t c = 0; c < z_last.cols(); ++c) {
        pr[c] = std::exp(zr[c] - mx);
        sum += pr[c];
      }
      for (std::size_t c = 0; c < z_last.cols(); ++c) pr[c] /= sum;
    }
  } else {
    std::copy(z_last.data(), z_last.data() + z_last.size(), out.data());
  }
  return out;
}

Gradients make_gradients(const MlpModel& m) {
  Gradients g;
  for (std::size_t l = 0; l < m.w.size(); ++l) {
    g.dw.emplace_back(m.w[l].rows(), m.w[l].cols());
    g.db.emplace_back(m.b[l].size(), 0.0);
  }
  return g;
}

double ce_loss(const Matrix& probs, const std::vector<int>& labels) {
  if (probs.rows() != labels.size()) {
    throw Error("ce_loss: ", labels.size(), " labels for ", probs.rows(), " rows");
  }
  double loss = 0.0;
  for (std::size_t r = 0; r < probs.rows(); ++r) {
    const int y = labels[r];
    if (y < 0 || static_cast<std::size_t>(y) >= probs.cols()) {
      throw Error("ce_loss: label ", y, " out of range");
    }
    loss -= std::log(std::max(probs(r, static_cast<std::size_t>(y)), 1e-300));
  }
  return loss / static_cast<double>(probs.rows());
}

double mse_loss(const Matrix& out, const Matrix& targets) {
  if (out.rows() != targets.rows() || out.cols() != targets.cols()) {
    throw Error("mse_loss: output ", out.rows(), "x", out.cols(), " vs targets ",
                targets.rows(), "x", targets.cols());
  }
  double loss = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double d = out.data()[i] - targets.data()[i];
    loss += d * d;
  }
  return loss / static_cast<double>(out.size());
}

namespace {

// Shared trunk backprop from the output-layer delta down to the first layer.
void backprop_from_delta(const MlpModel& m, const ForwardCache& cache, Matrix& delta,
                         Gradients& grads) {
  const MlpConfig& cfg = m.config;
  const std::size_t layers = cfg.num_affine();
  thread_local Matrix d_prev;

  for (std::size_t l = layers; l-- > 0;) {
    const Matrix& below = l == 0 ? *cache.input : cache.a[l - 1];
    gemm_tn(below, delta, grads.dw[l]);
    std::vector<double>& db = grads.db[l];
    std::fill(db.begin(), db.end(), 0.0);
    for (std::size_t r = 0; r < delta.rows(); ++r) {
      const double* dr = delta.row(r);
      for (std::size_t c = 0; c < delta.cols(); ++c) db[c] += dr[c];
    }
    if (l == 0) break;

    ensure_shape(d_prev, delta.rows(), m.w[l].rows());
    gemm_nt(delta, m.w[l], d_prev);
    // Through dropout, then through the activation.
    const Matrix& mask = cache.mask[l - 1];
    if (mask.size() > 0) {
      for (std::size_t i = 0; i < d_prev.size(); ++i) d_prev.data()[i] *= mask.data()[i];
    }
    const Matrix& z = cache.z[l - 1];
    if (cfg.activations[l - 1] == Activation::ReLU) {
      for (std::size_t i = 0; i < d_prev.size(); ++i) {
        if (z.data()[i] <= 0.0) d_prev.data()[i] = 0.0;
      }
    } else {
      for (std::size_t i = 0; i < d_prev.size(); ++i) {
        const double s = sigmoid(z.data()[i]);
        d_prev.data()[i] *= s * (1.0 - s);
      }
    }
    std::swap(delta, d_prev);
  }
}

}  // namespace

double mlp_backward_ce(const MlpModel& m, const ForwardCache& cache,
                       const std::vector<int>& labels, Gradients& grads) {
  if (m.config.head != OutputHead::Softmax) {
    throw Error("mlp_backward_ce: model head is not softmax");
  }
  const Matrix& probs = cache.out;
  const double loss = ce_loss(probs, labels);
  const double inv_n = 1.0 / static_cast<double>(probs.rows());
  thread_local Matrix delta;
  ensure_shape(delta, probs.rows(), probs.cols());
  for (std::size_t r = 0; r < probs.rows(); ++r) {
    const double* pr = probs.row(r);
    double* dr = delta.row(r);
    for (std::size_t c = 0; c < probs.cols(); ++c) dr[c] = pr[c] * inv_n;
    dr[static_cast<std::size_t>(labels[r])] -= inv_n;
  }
  backprop_from_delta(m, cache, delta, grads);
  return loss;
}

double mlp_backward_mse(const MlpModel& m, const ForwardCache& cache,
                        const Matrix& targets, Gradients& grads) {
  if (m.config.head != OutputHead::Linear) {
    throw Error("mlp_backward_mse: model head is not linear");
  }
  const Matrix& out = cache.out;
  const double loss = mse_loss(out, targets);
  const double scale = 2.0 / static_cast<double>(out.size());
  thread_local Matrix delta;
  ensure_shape(delta, out.rows(), out.cols());
  for (std::size_t i = 0; i < out.size(); ++i) {
    delta.data()[i] = scale * (out.data()[i] - targets.data()[i]);
  }
  backprop_from_delta(m, cache, delta, grads);
  return loss;
}

AdamState::AdamState(const MlpModel& m, AdamParams params) : params_(params) {
  for (std::size_t l = 0; l < m.w.size(); ++l) {
    mw_.emplace_back(m.w[l].rows(), m.w[l].cols());
    vw_.emplace_back(m.w[l].rows(), m.w[l].cols());
    mb_.emplace_back(m.b[l].size(), 0.0);
    vb_.emplace_back(m.b[l].size(), 0.0);
  }
}

void AdamState::step(MlpModel& m, const Gradients& grads) {
  ++t_;
  const double b1 = params_.beta1;
  const double b2 = params_.beta2;
  const double bc1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  auto update = [&](double* theta, double* mm, double* vv, const double* g,
                    std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      mm[i] = b1 * mm[i] + (1.0 - b1) * g[i];
      vv[i] = b2 * vv[i] + (1.0 - b2) * g[i] * g[i];
      const double mhat = mm[i] / bc1;
      const double vhat = vv[i] / bc2;
      theta[i] -= params_.lr * mhat / (std::sqrt(vhat) + params_.eps);
    }
  };
  for (std::size_t l = 0; l < m.w.size(); ++l) {
    update(m.w[l].data(), mw_[l].data(), vw_[l].data(), grads.dw[l].data(),
           m.w[l].size());
    update(m.b[l].data(), mb_[l].data(), vb_[l].data(), grads.db[l].data(),
           m.b[l].size());
  }
}

}  // namespace lobarena::learn
