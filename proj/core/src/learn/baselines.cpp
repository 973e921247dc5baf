#include "lobarena/learn/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lobarena/learn/train.hpp"
#include "lobarena/util/error.hpp"
#include "lobarena/util/rng.hpp"

namespace lobarena::learn {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

int argmax_label(const std::array<double, kNumArchetypes>& scores) {
  int best = 0;
  for (int c = 1; c < kNumArchetypes; ++c) {
    if (scores[static_cast<std::size_t>(c)] > scores[static_cast<std::size_t>(best)]) {
      best = c;
    }
  }
  return best;
}

// Weighted CART. Splits are chosen by minimal weighted Gini sum; ties keep
// the first candidate in (feature asc, threshold asc) order.
class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, const std::vector<int>& y, const std::vector<double>& w,
              TreeParams params, Rng* rng, int mtry)
      : x_(x), y_(y), w_(w), params_(params), rng_(rng), mtry_(mtry) {}

  TreeModel run(std::vector<std::size_t> idx) {
    TreeModel model;
    nodes_ = &model.nodes;
    build(std::move(idx), 0);
    return model;
  }

 private:
  struct Split {
    double impurity = 0.0;
    int feature = -1;
    double threshold = 0.0;
  };

  static double gini_sum(const std::array<double, kNumArchetypes>& counts, double total) {
    if (total <= 0.0) return 0.0;
    double sq = 0.0;
    for (double c : counts) sq += c * c;
    return total - sq / total;
  }

  int build(std::vector<std::size_t> idx, int depth) {
    std::array<double, kNumArchetypes> counts{};
    for (std::size_t i : idx) counts[static_cast<std::size_t>(y_[i])] += w_[i];
    double total = 0.0;
    int live_classes = 0;
    for (double c : counts) {
      total += c;
      if (c > 0.0) ++live_classes;
    }

    const int node_id = static_cast<int>(nodes_->size());
    nodes_->emplace_back();
    (*nodes_)[static_cast<std::size_t>(node_id)].label = argmax_label(counts);

    if (depth >= params_.max_depth || idx.size() < params_.min_split ||
        live_classes <= 1) {
      return node_id;
    }

    const Split split = best_split(idx, counts, total);
    if (split.feature < 0) return node_id;

    std::vector<std::size_t> left, right;
    for (std::size_t i : idx) {
      (x_(i, static_cast<std::size_t>(split.feature)) <= split.threshold ? left : right)
          .push_back(i);
    }
    idx.clear();
    idx.shrink_to_fit();

    const int l = build(std::move(left), depth + 1);
    const int r = build(std::move(right), depth + 1);
    TreeNode& node = (*nodes_)[static_cast<std::size_t>(node_id)];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = l;
    node.right = r;
    return node_id;
  }

  Split best_split(const std::vector<std::size_t>& idx,
                   const std::array<double, kNumArchetypes>& counts, double total) {
    const double parent = gini_sum(counts, total);
    Split best;
    best.impurity = parent - 1e-12;  // require a strict improvement

    std::vector<int> features(x_.cols());
    std::iota(features.begin(), features.end(), 0);
    if (rng_ != nullptr && mtry_ < static_cast<int>(x_.cols())) {
      for (int i = 0; i < mtry_; ++i) {
        const int j = i + static_cast<int>(rng_->uniform_int(
                              0, static_cast<std::int64_t>(features.size()) - 1 - i));
        std::swap(features[static_cast<std::size_t>(i)],
                  features[static_cast<std::size_t>(j)]);
      }
      features.resize(static_cast<std::size_t>(mtry_));
      std::sort(features.begin(), features.end());
    }

    std::vector<std::size_t> sorted(idx);
    for (int f : features) {
      const auto fc = static_cast<std::size_t>(f);
      std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
        const double va = x_(a, fc);
        const double vb = x_(b, fc);
        return va < vb || (va == vb && a < b);
      });
      std::array<double, kNumArchetypes> left{};
      double left_total = 0.0;
      for (std::size_t pos = 0; pos + 1 < sorted.size(); ++pos) {
        const std::size_t i = sorted[pos];
        left[static_cast<std::size_t>(y_[i])] += w_[i];
        left_total += w_[i];
        const double v = x_(i, fc);
        const double v_next = x_(sorted[pos + 1], fc);
        if (v == v_next) continue;
        std::array<double, kNumArchetypes> right{};
        for (int c = 0; c < kNumArchetypes; ++c) {
          right[static_cast<std::size_t>(c)] =
              counts[static_cast<std::size_t>(c)] - left[static_cast<std::size_t>(c)];
        }
        const double imp =
            gini_sum(left, left_total) + gini_sum(right, total - left_total);
        if (imp < best.impurity) {
          best.impurity = imp;
          best.feature = f;
          best.threshold = v + (v_next - v) / 2.0;
        }
      }
    }
    return best;
  }

  const Matrix& x_;
  const std::vector<int>& y_;
  const std::vector<double>& w_;
  TreeParams params_;
  Rng* rng_;
  int mtry_;
  std::vector<TreeNode>* nodes_ = nullptr;
};

TreeModel build_tree_weighted(const Matrix& x, const std::vector<int>& y,
                              const std::vector<double>& w, TreeParams params, Rng* rng,
                              int mtry, std::vector<std::size_t> idx) {
  TreeBuilder builder(x, y, w, params, rng, mtry);
  return builder.run(std::move(idx));
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  return idx;
}

void check_nonempty(const std::vector<dataset::Sample>& train, const char* what) {
  if (train.empty()) throw Error(what, ": empty training set");
}

}  // namespace

KnnModel train_knn(const std::vector<dataset::Sample>& train, int k) {
  check_nonempty(train, "train_knn");
  if (k < 1) throw Error("train_knn: k must be >= 1, got ", k);
  if (static_cast<std::size_t>(k) > train.size()) {
    throw Error("train_knn: k=", k, " exceeds ", train.size(), " training samples");
  }
  KnnModel m;
  m.k = k;
  m.x = features_matrix(train);
  m.y = labels_vector(train);
  return m;
}

int knn_predict(const KnnModel& m, const double* features) {
  const std::size_t n = m.x.rows();
  std::vector<std::pair<double, std::size_t>> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = m.x.row(i);
    double d2 = 0.0;
    for (std::size_t c = 0; c < m.x.cols(); ++c) {
      const double d = row[c] - features[c];
      d2 += d * d;
    }
    dist[i] = {d2, i};
  }
  const auto k = static_cast<std::size_t>(m.k);
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k),
                    dist.end());
  std::array<double, kNumArchetypes> votes{};
  for (std::size_t i = 0; i < k; ++i) {
    votes[static_cast<std::size_t>(m.y[dist[i].second])] += 1.0;
  }
  return argmax_label(votes);
}

LinearSvmModel train_linear_svm(const std::vector<dataset::Sample>& train,
                                const LinearSvmParams& params, std::uint64_t seed) {
  check_nonempty(train, "train_linear_svm");
  if (params.epochs < 1) throw Error("train_linear_svm: epochs must be >= 1");
  if (params.lambda <= 0.0) throw Error("train_linear_svm: lambda must be positive");
  const Matrix x = features_matrix(train);
  const std::vector<int> y = labels_vector(train);
  const std::size_t d = x.cols() + 1;  // augmented bias coordinate
  const std::size_t n = x.rows();

  LinearSvmModel m;
  m.w = Matrix(kNumArchetypes, d);
  Rng rng(seed);
  for (int c = 0; c < kNumArchetypes; ++c) {
    double* w = m.w.row(static_cast<std::size_t>(c));
    std::int64_t t = 0;
    for (int epoch = 0; epoch < params.epochs; ++epoch) {
      for (std::size_t step = 0; step < n; ++step) {
        ++t;
        const std::size_t i = static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(n) - 1));
        const double yi = y[i] == c ? 1.0 : -1.0;
        const double* xi = x.row(i);
        double margin = w[d - 1];  // bias times the augmented 1
        for (std::size_t f = 0; f + 1 < d; ++f) margin += w[f] * xi[f];
        margin *= yi;
        const double eta = 1.0 / (params.lambda * static_cast<double>(t));
        const double shrink = 1.0 - eta * params.lambda;
        for (std::size_t f = 0; f < d; ++f) w[f] *= shrink;
        if (margin < 1.0) {
          for (std::size_t f = 0; f + 1 < d; ++f) w[f] += eta * yi * xi[f];
          w[d - 1] += eta * yi;
        }
      }
    }
  }
  return m;
}

int svm_predict(const LinearSvmModel& m, const double* features) {
  std::array<double, kNumArchetypes> scores{};
  const std::size_t d = m.w.cols();
  for (int c = 0; c < kNumArchetypes; ++c) {
    const double* w = m.w.row(static_cast<std::size_t>(c));
    double s = w[d - 1];
    for (std::size_t f = 0; f + 1 < d; ++f) s += w[f] * features[f];
    scores[static_cast<std::size_t>(c)] = s;
  }
  return argmax_label(scores);
}

TreeModel train_tree(const std::vector<dataset::Sample>& train, const TreeParams& params) {
  check_nonempty(train, "train_tree");
  const Matrix x = features_matrix(train);
  const std::vector<int> y = labels_vector(train);
  const std::vector<double> w(train.size(), 1.0);
  return build_tree_weighted(x, y, w, params, nullptr, static_cast<int>(x.cols()),
                             all_indices(train.size()));
}

int tree_predict(const TreeModel& m, const double* features) {
  if (m.nodes.empty()) throw Error("tree_predict: empty tree");
  std::size_t node = 0;
  while (!m.nodes[node].leaf()) {
    const TreeNode& n = m.nodes[node];
    node = static_cast<std::size_t>(
        features[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
  }
  return m.nodes[node].label;
}

ForestModel train_forest(const std::vector<dataset::Sample>& train,
                         const ForestParams& params, std::uint64_t seed) {
  check_nonempty(train, "train_forest");
  if (params.n_trees < 1) throw Error("train_forest: n_trees must be >= 1");
  if (!(params.feat_frac > 0.0 && params.feat_frac <= 1.0)) {
    throw Error("train_forest: feat_frac must be in (0,1]");
  }
  const Matrix x = features_matrix(train);
  const std::vector<int> y = labels_vector(train);
  const std::vector<double> w(train.size(), 1.0);
  const int mtry = std::max(
      1, static_cast<int>(std::lround(params.feat_frac * static_cast<double>(x.cols()))));
  const std::size_t n = train.size();

  ForestModel m;
  Rng rng(seed);
  for (int t = 0; t < params.n_trees; ++t) {
    std::vector<std::size_t> bootstrap(n);
    for (std::size_t i = 0; i < n; ++i) {
      bootstrap[i] = static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(n) - 1));
    }
    m.trees.push_back(
        build_tree_weighted(x, y, w, params.tree, &rng, mtry, std::move(bootstrap)));
  }
  return m;
}

int forest_predict(const ForestModel& m, const double* features) {
  std::array<double, kNumArchetypes> votes{};
  for (const TreeModel& t : m.trees) {
    votes[static_cast<std::size_t>(tree_predict(t, features))] += 1.0;
  }
  return argmax_label(votes);
}

AdaBoostModel train_adaboost(const std::vector<dataset::Sample>& train,
                             const AdaBoostParams& params) {
  check_nonempty(train, "train_adaboost");
  if (params.n_stumps < 1) throw Error("train_adaboost: n_stumps must be >= 1");
  const Matrix x = features_matrix(train);
  const std::vector<int> y = labels_vector(train);
  const std::size_t n = train.size();
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  const double k = static_cast<double>(kNumArchetypes);

  TreeParams stump_params;
  stump_params.max_depth = 1;
  stump_params.min_split = 2;

  AdaBoostModel m;
  for (int round = 0; round < params.n_stumps; ++round) {
    TreeModel stump = build_tree_weighted(x, y, w, stump_params, nullptr,
                                          static_cast<int>(x.cols()), all_indices(n));
    double err = 0.0;
    std::vector<char> wrong(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (tree_predict(stump, x.row(i)) != y[i]) {
        wrong[i] = 1;
        err += w[i];
      }
    }
    if (err >= 1.0 - 1.0 / k) break;  // weak learner no better than chance
    double alpha;
    if (err <= 0.0) {
      alpha = std::log((1.0 - 1e-10) / 1e-10) + std::log(k - 1.0);
      m.stumps.push_back(std::move(stump));
      m.alpha.push_back(alpha);
      break;  // perfect stump; further rounds cannot change the vote
    }
    alpha = std::log((1.0 - err) / err) + std::log(k - 1.0);
    m.stumps.push_back(std::move(stump));
    m.alpha.push_back(alpha);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (wrong[i]) w[i] *= std::exp(alpha);
      total += w[i];
    }
    for (double& wi : w) wi /= total;
  }
  if (m.stumps.empty()) {
    // Degenerate data: keep the single stump so prediction still works.
    m.stumps.push_back(build_tree_weighted(x, y, w, stump_params, nullptr,
                                           static_cast<int>(x.cols()), all_indices(n)));
    m.alpha.push_back(1.0);
  }
  return m;
}

int adaboost_predict(const AdaBoostModel& m, const double* features) {
  std::array<double, kNumArchetypes> scores{};
  for (std::size_t s = 0; s < m.stumps.size(); ++s) {
    scores[static_cast<std::size_t>(tree_predict(m.stumps[s], features))] += m.alpha[s];
  }
  return argmax_label(scores);
}

GnbModel train_gnb(const std::vector<dataset::Sample>& train) {
  check_nonempty(train, "train_gnb");
  const Matrix x = features_matrix(train);
  const std::vector<int> y = labels_vector(train);
  const std::size_t d = x.cols();

  GnbModel m;
  m.mean = Matrix(kNumArchetypes, d);
  m.var = Matrix(kNumArchetypes, d);
  std::array<double, kNumArchetypes> counts{};
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto c = static_cast<std::size_t>(y[i]);
    counts[c] += 1.0;
    for (std::size_t f = 0; f < d; ++f) m.mean(c, f) += x(i, f);
  }
  for (int c = 0; c < kNumArchetypes; ++c) {
    const auto cc = static_cast<std::size_t>(c);
    if (counts[cc] == 0.0) {
      throw Error("train_gnb: class ", to_string(static_cast<ArchetypeLabel>(c)),
                  " has no samples");
    }
    for (std::size_t f = 0; f < d; ++f) m.mean(cc, f) /= counts[cc];
    m.log_prior[cc] = std::log(counts[cc] / static_cast<double>(x.rows()));
  }
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto c = static_cast<std::size_t>(y[i]);
    for (std::size_t f = 0; f < d; ++f) {
      const double diff = x(i, f) - m.mean(c, f);
      m.var(c, f) += diff * diff;
    }
  }
  for (int c = 0; c < kNumArchetypes; ++c) {
    const auto cc = static_cast<std::size_t>(c);
    for (std::size_t f = 0; f < d; ++f) {
      m.var(cc, f) = std::max(m.var(cc, f) / counts[cc], 1e-9);
    }
  }
  return m;
}

int gnb_predict(const GnbModel& m, const double* features) {
  std::array<double, kNumArchetypes> scores{};
  for (int c = 0; c < kNumArchetypes; ++c) {
    const auto cc = static_cast<std::size_t>(c);
    double s = m.log_prior[cc];
    for (std::size_t f = 0; f < m.mean.cols(); ++f) {
      const double v = m.var(cc, f);
      const double diff = features[f] - m.mean(cc, f);
      s -= 0.5 * (std::log(2.0 * kPi * v) + diff * diff / v);
    }
    scores[cc] = s;
  }
  return argmax_label(scores);
}

int baseline_predict(const BaselineModel& m, const double* features) {
  return std::visit(
      [&](const auto& model) -> int {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, KnnModel>) return knn_predict(model, features);
        if constexpr (std::is_same_v<T, LinearSvmModel>) return svm_predict(model, features);
        if constexpr (std::is_same_v<T, TreeModel>) return tree_predict(model, features);
        if constexpr (std::is_same_v<T, ForestModel>) return forest_predict(model, features);
        if constexpr (std::is_same_v<T, AdaBoostModel>)
          return adaboost_predict(model, features);
        if constexpr (std::is_same_v<T, GnbModel>) return gnb_predict(model, features);
      },
      m);
}

std::vector<int> baseline_predict_all(const BaselineModel& m,
                                      const std::vector<dataset::Sample>& samples) {
  std::vector<int> out(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out[i] = baseline_predict(m, samples[i].x.data());
  }
  return out;
}

std::string_view baseline_kind(const BaselineModel& m) {
  return std::visit(
      [](const auto& model) -> std::string_view {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, KnnModel>) return "knn";
        if constexpr (std::is_same_v<T, LinearSvmModel>) return "linear-svm";
        if constexpr (std::is_same_v<T, TreeModel>) return "decision-tree";
        if constexpr (std::is_same_v<T, ForestModel>) return "random-forest";
        if constexpr (std::is_same_v<T, AdaBoostModel>) return "adaboost";
        if constexpr (std::is_same_v<T, GnbModel>) return "gaussian-nb";
      },
      m);
}

}  // namespace lobarena::learn
