#include "support/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "lobarena/learn/mlp.hpp"

namespace lobarena::testing {
namespace {

using learn::Activation;
using learn::ForwardCache;
using learn::Gradients;
using learn::Matrix;
using learn::MlpConfig;
using learn::MlpModel;
using learn::OutputHead;

double loss_of(const MlpModel& m, const Matrix& x, const std::vector<int>& labels,
               const Matrix& targets) {
  ForwardCache cache;
  const Matrix& out = learn::mlp_forward(m, x, false, nullptr, cache);
  return m.config.head == OutputHead::Softmax ? learn::ce_loss(out, labels)
                                              : learn::mse_loss(out, targets);
}

}  // namespace

double gradient_check_max_rel_err(std::uint64_t seed) {
  Rng rng(seed);

  MlpConfig cfg;
  const std::size_t inputs = 3 + rng.uniform_below(4);
  const std::size_t outputs = 2 + rng.uniform_below(3);
  const std::size_t hidden_layers = 1 + rng.uniform_below(2);
  cfg.layer_sizes.push_back(inputs);
  for (std::size_t h = 0; h < hidden_layers; ++h) {
    cfg.layer_sizes.push_back(3 + rng.uniform_below(5));
    cfg.activations.push_back(rng.bernoulli(0.5) ? Activation::ReLU
                                                 : Activation::Sigmoid);
    cfg.dropout.push_back(0.0);
  }
  cfg.layer_sizes.push_back(outputs);
  cfg.head = seed % 2 == 0 ? OutputHead::Softmax : OutputHead::Linear;

  MlpModel m = learn::init_mlp(cfg, rng.next_u64());

  const std::size_t batch = 3 + rng.uniform_below(3);
  Matrix x(batch, inputs);
  for (std::size_t r = 0; r < batch; ++r)
    for (std::size_t c = 0; c < inputs; ++c) x(r, c) = rng.normal();

  std::vector<int> labels(batch);
  Matrix targets(batch, outputs);
  for (std::size_t r = 0; r < batch; ++r) {
    labels[r] = static_cast<int>(rng.uniform_below(outputs));
    for (std::size_t c = 0; c < outputs; ++c) targets(r, c) = rng.normal();
  }

  ForwardCache cache;
  learn::mlp_forward(m, x, false, nullptr, cache);
  Gradients grads = learn::make_gradients(m);
  if (cfg.head == OutputHead::Softmax) {
    learn::mlp_backward_ce(m, cache, labels, grads);
  } else {
    learn::mlp_backward_mse(m, cache, targets, grads);
  }

  const double h = 1e-5;
  double max_rel = 0.0;
  auto probe = [&](double& theta, double analytic) {
    const double saved = theta;
    const double step = h * std::max(1.0, std::fabs(saved));
    theta = saved + step;
    const double up = loss_of(m, x, labels, targets);
    theta = saved - step;
    const double down = loss_of(m, x, labels, targets);
    theta = saved;
    const double fd = (up - down) / (2.0 * step);
    const double rel =
        std::fabs(analytic - fd) / std::max(std::fabs(analytic) + std::fabs(fd), 1e-6);
    max_rel = std::max(max_rel, rel);
  };

  for (std::size_t layer = 0; layer < m.w.size(); ++layer) {
    Matrix& w = m.w[layer];
    for (std::size_t i = 0; i < w.size(); ++i) {
      probe(w.data()[i], grads.dw[layer].data()[i]);
    }
    for (std::size_t i = 0; i < m.b[layer].size(); ++i) {
      probe(m.b[layer][i], grads.db[layer][i]);
    }
  }
  return max_rel;
}

}  // namespace lobarena::testing
