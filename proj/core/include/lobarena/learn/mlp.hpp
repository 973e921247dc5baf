#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "lobarena/learn/matrix.hpp"
#include "lobarena/util/rng.hpp"

namespace lobarena::learn {

enum class Activation : std::uint8_t { ReLU, Sigmoid };
enum class OutputHead : std::uint8_t { Softmax, Linear };

std::string_view to_string(Activation a);
std::string_view to_string(OutputHead h);

struct MlpConfig {
  std::vector<std::size_t> layer_sizes;  // input, hidden..., output
  std::vector<Activation> activations;   // one per hidden layer
  std::vector<double> dropout;           // one per hidden layer, each in [0,1)
  OutputHead head = OutputHead::Softmax;

  std::size_t num_affine() const { return layer_sizes.size() - 1; }
  std::size_t num_hidden() const { return layer_sizes.size() - 2; }
  void validate() const;
};

// The classifier stack: hidden 256,1024,1024,1024 with ReLU,ReLU,ReLU,Sigmoid
// and a dropout layer after each hidden layer.
MlpConfig classifier_config(std::size_t inputs, std::size_t classes, double dropout);
// Same trunk with a linear regression head.
MlpConfig cloner_config(std::size_t inputs, std::size_t outputs, double dropout);

struct MlpModel {
  MlpConfig config;
  std::vector<Matrix> w;               // fan_in x fan_out per affine layer
  std::vector<std::vector<double>> b;  // fan_out per affine layer
};

// Scaled uniform fan-in init: W ~ U(-sqrt(3/fan_in), +sqrt(3/fan_in)), b = 0.
MlpModel init_mlp(const MlpConfig& config, std::uint64_t seed);

struct ForwardCache {
  std::vector<Matrix> z;     // pre-activation per affine layer
  std::vector<Matrix> a;     // post-activation, post-dropout per hidden layer
  std::vector<Matrix> mask;  // inverted-dropout scales (train mode only)
  Matrix out;                // head output
  const Matrix* input = nullptr;
};

// Forward pass. train_mode applies inverted dropout (scale 1/(1-p)) drawn
// from rng; eval mode needs no rng. Returns softmax probabilities or raw
// linear outputs. Throws on non-finite inputs.
const Matrix& mlp_forward(const MlpModel& m, const Matrix& batch, bool train_mode,
                          Rng* rng, ForwardCache& cache);

struct Gradients {
  std::vector<Matrix> dw;
  std::vector<std::vector<double>> db;
};

Gradients make_gradients(const MlpModel& m);

// Cross-entropy head: labels in [0, classes). Fills grads, returns mean loss.
double mlp_backward_ce(const MlpModel& m, const ForwardCache& cache,
                       const std::vector<int>& labels, Gradients& grads);
// Linear head: mean squared error over all output elements.
double mlp_backward_mse(const MlpModel& m, const ForwardCache& cache,
                        const Matrix& targets, Gradients& grads);

// Loss-only evaluation on already-computed outputs (used by the
// finite-difference oracle in tests and for validation curves).
double ce_loss(const Matrix& probs, const std::vector<int>& labels);
double mse_loss(const Matrix& out, const Matrix& targets);

struct AdamParams {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

class AdamState {
 public:
  AdamState(const MlpModel& m, AdamParams params);
  void step(MlpModel& m, const Gradients& grads);
  std::int64_t steps() const { return t_; }
  const AdamParams& params() const { return params_; }

 private:
  AdamParams params_;
  std::int64_t t_ = 0;
  std::vector<Matrix> mw_, vw_;
  std::vector<std::vector<double>> mb_, vb_;
};

}  // namespace lobarena::learn
