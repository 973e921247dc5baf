#include "lobarena/learn/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lobarena/util/error.hpp"
#include "lobarena/util/hash.hpp"

namespace lobarena::learn {
namespace {

constexpr std::size_t kPredictChunk = 512;

std::uint64_t stream(std::uint64_t seed, const char* name) {
  return substream_seed(seed, fnv1a64(kFnvOffset, name));
}

// One epoch of shuffled mini-batches; returns the mean batch loss.
template <typename BackwardFn>
double run_epoch(MlpModel& model, const Matrix& x, std::size_t batch_size,
                 AdamState& adam, Rng& shuffle_rng, Rng& dropout_rng,
                 std::vector<std::size_t>& order, Matrix& xb, ForwardCache& cache,
                 Gradients& grads, BackwardFn&& backward) {
  const std::size_t n = x.rows();
  // Fisher-Yates from the shuffle stream.
  for (std::size_t i = n - 1; i > 0; --i) {
    const std::size_t j = static_cast<std::size_t>(
        shuffle_rng.uniform_int(0, static_cast<std::int64_t>(i)));
    std::swap(order[i], order[j]);
  }
  double loss_sum = 0.0;
  std::size_t batches = 0;
  for (std::size_t start = 0; start < n; start += batch_size) {
    const std::size_t count = std::min(batch_size, n - start);
    if (xb.rows() != count || xb.cols() != x.cols()) xb = Matrix(count, x.cols());
    for (std::size_t r = 0; r < count; ++r) {
      const double* src = x.row(order[start + r]);
      std::copy(src, src + x.cols(), xb.row(r));
    }
    mlp_forward(model, xb, true, &dropout_rng, cache);
    const double loss = backward(start, count, cache);
    if (!std::isfinite(loss)) {
      throw Error("training diverged: non-finite loss at step ", adam.steps() + 1);
    }
    adam.step(model, grads);
    loss_sum += loss;
    ++batches;
  }
  return loss_sum / static_cast<double>(batches);
}

}  // namespace

Standardizer standardizer_fit(const Matrix& x) {
  if (x.rows() == 0) throw Error("standardizer_fit: empty matrix");
  Standardizer s;
  s.mean.assign(x.cols(), 0.0);
  s.stddev.assign(x.cols(), 0.0);
  const double n = static_cast<double>(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const double* row = x.row(r);
    for (std::size_t c = 0; c < x.cols(); ++c) s.mean[c] += row[c];
  }
  for (std::size_t c = 0; c < x.cols(); ++c) s.mean[c] /= n;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const double* row = x.row(r);
    for (std::size_t c = 0; c < x.cols(); ++c) {
      const double d = row[c] - s.mean[c];
      s.stddev[c] += d * d;
    }
  }
  for (std::size_t c = 0; c < x.cols(); ++c) {
    s.stddev[c] = s.stddev[c] > 0.0 ? std::sqrt(s.stddev[c] / n) : 0.0;
  }
  return s;
}

void standardizer_apply(const Standardizer& s, Matrix& x) {
  if (s.mean.size() != x.cols()) {
    throw Error("standardizer_apply: width ", x.cols(), " != fitted ", s.mean.size());
  }
  for (std::size_t r = 0; r < x.rows(); ++r) {
    double* row = x.row(r);
    for (std::size_t c = 0; c < x.cols(); ++c) {
      row[c] = s.stddev[c] > 0.0 ? (row[c] - s.mean[c]) / s.stddev[c] : 0.0;
    }
  }
}

void standardizer_invert(const Standardizer& s, Matrix& x) {
  if (s.mean.size() != x.cols()) {
    throw Error("standardizer_invert: width ", x.cols(), " != fitted ", s.mean.size());
  }
  for (std::size_t r = 0; r < x.rows(); ++r) {
    double* row = x.row(r);
    for (std::size_t c = 0; c < x.cols(); ++c) {
      row[c] = s.stddev[c] > 0.0 ? row[c] * s.stddev[c] + s.mean[c] : s.mean[c];
    }
  }
}

Matrix features_matrix(const std::vector<dataset::Sample>& samples) {
  Matrix x(samples.size(), dataset::kFeatureCount);
  for (std::size_t r = 0; r < samples.size(); ++r) {
    std::copy(samples[r].x.begin(), samples[r].x.end(), x.row(r));
  }
  return x;
}

std::vector<int> labels_vector(const std::vector<dataset::Sample>& samples) {
  std::vector<int> y(samples.size());
  for (std::size_t r = 0; r < samples.size(); ++r) {
    y[r] = static_cast<int>(samples[r].label);
  }
  return y;
}

MlpModel train_classifier(const std::vector<dataset::Sample>& train,
                          const TrainParams& params, std::uint64_t seed,
                          TrainHistory* history) {
  if (train.empty()) throw Error("train_classifier: empty training set");
  if (params.epochs < 1) throw Error("train_classifier: epochs must be >= 1");
  if (params.batch_size < 1) throw Error("train_classifier: batch size must be >= 1");

  const Matrix x = features_matrix(train);
  const std::vector<int> y = labels_vector(train);

  MlpModel model = init_mlp(
      classifier_config(dataset::kFeatureCount, kNumArchetypes, params.dropout),
      stream(seed, "init"));
  AdamState adam(model, params.adam());
  Rng shuffle_rng(stream(seed, "shuffle"));
  Rng dropout_rng(stream(seed, "dropout"));

  std::vector<std::size_t> order(x.rows());
  std::iota(order.begin(), order.end(), 0);
  Matrix xb;
  ForwardCache cache;
  Gradients grads = make_gradients(model);
  std::vector<int> yb;

  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    const double mean_loss = run_epoch(
        model, x, params.batch_size, adam, shuffle_rng, dropout_rng, order, xb,
        cache, grads, [&](std::size_t start, std::size_t count, ForwardCache& c) {
          yb.resize(count);
          for (std::size_t r = 0; r < count; ++r) yb[r] = y[order[start + r]];
          return mlp_backward_ce(model, c, yb, grads);
        });
    if (history) history->train_loss.push_back(mean_loss);
  }
  return model;
}

Matrix predict_probs(const MlpModel& m, const Matrix& x) {
  Matrix out(x.rows(), m.config.layer_sizes.back());
  ForwardCache cache;
  for (std::size_t start = 0; start < x.rows(); start += kPredictChunk) {
    const std::size_t count = std::min(kPredictChunk, x.rows() - start);
    Matrix chunk(count, x.cols());
    for (std::size_t r = 0; r < count; ++r) {
      const double* src = x.row(start + r);
      std::copy(src, src + x.cols(), chunk.row(r));
    }
    const Matrix& probs = mlp_forward(m, chunk, false, nullptr, cache);
    for (std::size_t r = 0; r < count; ++r) {
      std::copy(probs.row(r), probs.row(r) + probs.cols(), out.row(start + r));
    }
  }
  return out;
}

std::vector<int> predict_classes(const MlpModel& m, const Matrix& x) {
  const Matrix probs = predict_probs(m, x);
  std::vector<int> preds(probs.rows());
  for (std::size_t r = 0; r < probs.rows(); ++r) {
    const double* row = probs.row(r);
    std::size_t best = 0;
    for (std::size_t c = 1; c < probs.cols(); ++c) {
      if (row[c] > row[best]) best = c;
    }
    preds[r] = static_cast<int>(best);
  }
  return preds;
}

Matrix cloner_inputs_raw(const std::vector<dataset::Sample>& samples) {
  Matrix x(samples.size(), dataset::kBookFeatureCount);
  for (std::size_t r = 0; r < samples.size(); ++r) {
    std::copy(samples[r].x.begin(), samples[r].x.begin() + dataset::kBookFeatureCount,
              x.row(r));
  }
  return x;
}

Matrix cloner_targets_raw(const std::vector<dataset::Sample>& samples) {
  Matrix t(samples.size(), 2);
  for (std::size_t r = 0; r < samples.size(); ++r) {
    const auto& f = samples[r].x;
    t(r, 0) = f[dataset::kPriceFeature];
    t(r, 1) = f[dataset::kDirectionFeature] * f[dataset::kSizeFeature];
  }
  return t;
}

ClonerModel train_cloner(const std::vector<dataset::Sample>& archetype_samples,
                         const TrainParams& params, std::uint64_t seed,
                         TrainHistory* history) {
  if (archetype_samples.size() < 100) {
    throw Error("train_cloner: need at least 100 samples, got ",
                archetype_samples.size());
  }
  const ArchetypeLabel archetype = archetype_samples.front().label;
  for (const auto& s : archetype_samples) {
    if (s.label != archetype) {
      throw Error("train_cloner: mixed archetypes in training data (",
                  to_string(archetype), " and ", to_string(s.label), ")");
    }
  }
  if (params.epochs < 1) throw Error("train_cloner: epochs must be >= 1");
  if (params.batch_size < 1) throw Error("train_cloner: batch size must be >= 1");

  ClonerModel cm;
  cm.archetype = archetype;
  Matrix x = cloner_inputs_raw(archetype_samples);
  Matrix t = cloner_targets_raw(archetype_samples);
  cm.features = standardizer_fit(x);
  cm.targets = standardizer_fit(t);
  standardizer_apply(cm.features, x);
  standardizer_apply(cm.targets, t);

  cm.mlp = init_mlp(cloner_config(dataset::kBookFeatureCount, 2, params.dropout),
                    stream(seed, "init"));
  AdamState adam(cm.mlp, params.adam());
  Rng shuffle_rng(stream(seed, "shuffle"));
  Rng dropout_rng(stream(seed, "dropout"));

  std::vector<std::size_t> order(x.rows());
  std::iota(order.begin(), order.end(), 0);
  Matrix xb;
  Matrix tb;
  ForwardCache cache;
  Gradients grads = make_gradients(cm.mlp);

  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    const double mean_loss = run_epoch(
        cm.mlp, x, params.batch_size, adam, shuffle_rng, dropout_rng, order, xb,
        cache, grads, [&](std::size_t start, std::size_t count, ForwardCache& c) {
          if (tb.rows() != count || tb.cols() != 2) tb = Matrix(count, 2);
          for (std::size_t r = 0; r < count; ++r) {
            const double* src = t.row(order[start + r]);
            std::copy(src, src + 2, tb.row(r));
          }
          return mlp_backward_mse(cm.mlp, c, tb, grads);
        });
    if (history) history->train_loss.push_back(mean_loss);
  }

  // Bias calibration: shift the output layer so eval-mode predictions over
  // the training set hit the target means exactly. This is the MSE-optimal
  // constant correction and keeps the predicted action distribution centered.
  const Matrix fitted = predict_probs(cm.mlp, x);
  std::vector<double>& out_bias = cm.mlp.b.back();
  for (std::size_t d = 0; d < out_bias.size(); ++d) {
    double target_mean = 0.0;
    double pred_mean = 0.0;
    for (std::size_t r = 0; r < x.rows(); ++r) {
      target_mean += t(r, d);
      pred_mean += fitted(r, d);
    }
    out_bias[d] += (target_mean - pred_mean) / static_cast<double>(x.rows());
  }
  return cm;
}

Matrix cloner_predict_z(const ClonerModel& m, const std::vector<dataset::Sample>& samples) {
  Matrix x = cloner_inputs_raw(samples);
  standardizer_apply(m.features, x);
  return predict_probs(m.mlp, x);  // linear head: raw outputs
}

Matrix cloner_truth_z(const ClonerModel& m, const std::vector<dataset::Sample>& samples) {
  Matrix t = cloner_targets_raw(samples);
  standardizer_apply(m.targets, t);
  return t;
}

Matrix cloner_predict_raw(const ClonerModel& m, const std::vector<dataset::Sample>& samples) {
  Matrix z = cloner_predict_z(m, samples);
  standardizer_invert(m.targets, z);
  return z;
}

SearchResult random_search(const SearchSpace& space, int budget,
                           const std::function<double(const TrainParams&)>& objective,
                           std::uint64_t seed) {
  if (budget < 1) throw Error("random_search: budget must be >= 1");
  if (space.batch_sizes.empty()) throw Error("random_search: no batch sizes");
  if (!(space.lr_min > 0.0 && space.lr_max >= space.lr_min)) {
    throw Error("random_search: bad learning-rate range");
  }
  Rng rng(stream(seed, "search"));
  SearchResult result;
  for (int trial = 0; trial < budget; ++trial) {
    TrainParams p;
    const double lo = std::log(space.lr_min);
    const double hi = std::log(space.lr_max);
    p.lr = std::exp(lo + (hi - lo) * rng.uniform());
    p.dropout = space.dropout_min + (space.dropout_max - space.dropout_min) * rng.uniform();
    p.batch_size = space.batch_sizes[static_cast<std::size_t>(rng.uniform_int(
        0, static_cast<std::int64_t>(space.batch_sizes.size()) - 1))];
    const double value = objective(p);
    result.trials.push_back({p, value});
    if (trial == 0 || value > result.best_objective) {
      result.best = p;
      result.best_objective = value;
    }
  }
  return result;
}

}  // namespace lobarena::learn
