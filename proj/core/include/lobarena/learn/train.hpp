#pragma once

#include <functional>
#include <vector>

#include "lobarena/dataset/dataset.hpp"
#include "lobarena/learn/mlp.hpp"

namespace lobarena::learn {

// Column z-scoring for arbitrary-width matrices. stddev 0 marks a constant
// column whose transformed value is 0.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> stddev;
};

Standardizer standardizer_fit(const Matrix& x);
void standardizer_apply(const Standardizer& s, Matrix& x);
void standardizer_invert(const Standardizer& s, Matrix& x);

struct TrainParams {
  int epochs = 200;
  std::size_t batch_size = 128;
  double lr = 1e-3;
  double dropout = 0.2;

  AdamParams adam() const {
    AdamParams a;
    a.lr = lr;
    return a;
  }
};

struct TrainHistory {
  std::vector<double> train_loss;  // mean batch loss per epoch
};

// Feature matrix (n x 23) and integer labels from samples.
Matrix features_matrix(const std::vector<dataset::Sample>& samples);
std::vector<int> labels_vector(const std::vector<dataset::Sample>& samples);

// Trains the 4-class archetype classifier on balanced, z-scored samples.
// Deterministic in (data, params, seed). Throws if the loss diverges.
MlpModel train_classifier(const std::vector<dataset::Sample>& train,
                          const TrainParams& params, std::uint64_t seed,
                          TrainHistory* history = nullptr);

// Eval-mode argmax predictions, chunked to bound memory. Ties break toward
// the smaller class index.
std::vector<int> predict_classes(const MlpModel& m, const Matrix& x);
Matrix predict_probs(const MlpModel& m, const Matrix& x);

// Behavioral cloner for one archetype: book state (20 features) -> z-scored
// (price, signed size).
struct ClonerModel {
  MlpModel mlp;
  Standardizer features;  // width 20
  Standardizer targets;   // width 2
  ArchetypeLabel archetype = ArchetypeLabel::Background;
};

// Raw input matrices for the cloner: first 20 sample features, and targets
// (price, direction * size).
Matrix cloner_inputs_raw(const std::vector<dataset::Sample>& samples);
Matrix cloner_targets_raw(const std::vector<dataset::Sample>& samples);

// Trains on raw (un-normalized) samples of a single archetype; fits both
// standardizers on this data. Refuses fewer than 100 samples.
ClonerModel train_cloner(const std::vector<dataset::Sample>& archetype_samples,
                         const TrainParams& params, std::uint64_t seed,
                         TrainHistory* history = nullptr);

// Predictions in the model's z-scored target space.
Matrix cloner_predict_z(const ClonerModel& m, const std::vector<dataset::Sample>& samples);
// Ground-truth targets mapped into the same space.
Matrix cloner_truth_z(const ClonerModel& m, const std::vector<dataset::Sample>& samples);
// Predictions in raw units (price ticks, signed size).
Matrix cloner_predict_raw(const ClonerModel& m, const std::vector<dataset::Sample>& samples);

struct SearchSpace {
  double lr_min = 1e-4;  // log-uniform
  double lr_max = 1e-2;
  double dropout_min = 0.0;  // uniform
  double dropout_max = 0.5;
  std::vector<std::size_t> batch_sizes = {32, 64, 128, 256};
};

struct SearchTrial {
  TrainParams params;
  double objective = 0.0;
};

struct SearchResult {
  TrainParams best;
  double best_objective = 0.0;
  std::vector<SearchTrial> trials;
};

// Samples `budget` configurations and returns the argmax of the objective.
// Ties keep the earlier trial.
SearchResult random_search(const SearchSpace& space, int budget,
                           const std::function<double(const TrainParams&)>& objective,
                           std::uint64_t seed);

}  // namespace lobarena::learn
