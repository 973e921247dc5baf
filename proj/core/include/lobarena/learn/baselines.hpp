#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

#include "lobarena/dataset/dataset.hpp"
#include "lobarena/learn/matrix.hpp"

namespace lobarena::learn {

// All baselines consume the 23 sample features and the 4 archetype classes.
// Prediction ties always break toward the smaller label index.

struct KnnModel {
  int k = 5;
  Matrix x;            // training features
  std::vector<int> y;  // training labels
};

KnnModel train_knn(const std::vector<dataset::Sample>& train, int k = 5);
int knn_predict(const KnnModel& m, const double* features);

struct LinearSvmParams {
  int epochs = 20;
  double lambda = 1e-4;  // L2 strength; Pegasos step 1/(lambda*t)
};

// One-vs-rest hinge loss, subgradient descent, bias via augmented feature.
struct LinearSvmModel {
  Matrix w;  // classes x (features + 1)
};

LinearSvmModel train_linear_svm(const std::vector<dataset::Sample>& train,
                                const LinearSvmParams& params, std::uint64_t seed);
int svm_predict(const LinearSvmModel& m, const double* features);

struct TreeParams {
  int max_depth = 12;
  std::size_t min_split = 2;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  int label = 0;
  bool leaf() const { return feature < 0; }
};

struct TreeModel {
  std::vector<TreeNode> nodes;  // node 0 is the root
};

// CART with Gini impurity; splits are "x[f] <= threshold goes left".
TreeModel train_tree(const std::vector<dataset::Sample>& train, const TreeParams& params);
int tree_predict(const TreeModel& m, const double* features);

struct ForestParams {
  int n_trees = 50;
  double feat_frac = 0.5;  // features considered per split
  TreeParams tree;
};

struct ForestModel {
  std::vector<TreeModel> trees;
};

ForestModel train_forest(const std::vector<dataset::Sample>& train,
                         const ForestParams& params, std::uint64_t seed);
int forest_predict(const ForestModel& m, const double* features);

struct AdaBoostParams {
  int n_stumps = 100;
};

// SAMME multi-class boosting on depth-1 trees.
struct AdaBoostModel {
  std::vector<TreeModel> stumps;
  std::vector<double> alpha;
};

AdaBoostModel train_adaboost(const std::vector<dataset::Sample>& train,
                             const AdaBoostParams& params);
int adaboost_predict(const AdaBoostModel& m, const double* features);

struct GnbModel {
  Matrix mean;  // classes x features
  Matrix var;   // population variance, floored
  std::array<double, kNumArchetypes> log_prior{};
};

GnbModel train_gnb(const std::vector<dataset::Sample>& train);
int gnb_predict(const GnbModel& m, const double* features);

using BaselineModel =
    std::variant<KnnModel, LinearSvmModel, TreeModel, ForestModel, AdaBoostModel, GnbModel>;

int baseline_predict(const BaselineModel& m, const double* features);
std::vector<int> baseline_predict_all(const BaselineModel& m,
                                      const std::vector<dataset::Sample>& samples);
std::string_view baseline_kind(const BaselineModel& m);

}  // namespace lobarena::learn
