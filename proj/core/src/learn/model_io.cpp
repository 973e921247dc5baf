#include "lobarena/learn/model_io.hpp"

#include <cstring>
#include <fstream>

#include "lobarena/util/error.hpp"
#include "lobarena/version.hpp"

namespace lobarena::learn {
namespace {

constexpr char kMagic[8] = {'L', 'O', 'B', 'M', 'D', 'L', '1', '\n'};

void write_u64(std::ofstream& out, std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(buf, 8);
}

std::uint64_t read_u64(std::ifstream& in, const std::string& path) {
  char buf[8];
  in.read(buf, 8);
  if (!in) throw Error("model file '", path, "': truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[i])) << (8 * i);
  }
  return v;
}

Activation activation_from_string(const std::string& s, const std::string& path) {
  if (s == "relu") return Activation::ReLU;
  if (s == "sigmoid") return Activation::Sigmoid;
  throw Error("model file '", path, "': unknown activation '", s, "'");
}

nlohmann::json mlp_meta(const MlpModel& m) {
  nlohmann::json j;
  j["layer_sizes"] = m.config.layer_sizes;
  nlohmann::json acts = nlohmann::json::array();
  for (Activation a : m.config.activations) acts.push_back(std::string(to_string(a)));
  j["activations"] = acts;
  j["dropout"] = m.config.dropout;
  j["head"] = std::string(to_string(m.config.head));
  return j;
}

void add_mlp_blobs(ModelFile& file, const MlpModel& m) {
  for (std::size_t l = 0; l < m.w.size(); ++l) {
    std::vector<double> w(m.w[l].data(), m.w[l].data() + m.w[l].size());
    file.add_blob("w" + std::to_string(l), std::move(w));
    file.add_blob("b" + std::to_string(l), m.b[l]);
  }
}

MlpModel mlp_from_file(const ModelFile& file, const nlohmann::json& j,
                       const std::string& path) {
  MlpConfig cfg;
  cfg.layer_sizes = j.at("layer_sizes").get<std::vector<std::size_t>>();
  for (const auto& a : j.at("activations")) {
    cfg.activations.push_back(activation_from_string(a.get<std::string>(), path));
  }
  cfg.dropout = j.at("dropout").get<std::vector<double>>();
  const std::string head = j.at("head").get<std::string>();
  if (head == "softmax") {
    cfg.head = OutputHead::Softmax;
  } else if (head == "linear") {
    cfg.head = OutputHead::Linear;
  } else {
    throw Error("model file '", path, "': unknown head '", head, "'");
  }
  cfg.validate();

  MlpModel m;
  m.config = cfg;
  for (std::size_t l = 0; l + 1 < cfg.layer_sizes.size(); ++l) {
    const std::size_t fan_in = cfg.layer_sizes[l];
    const std::size_t fan_out = cfg.layer_sizes[l + 1];
    const std::vector<double>& w = file.blob("w" + std::to_string(l));
    if (w.size() != fan_in * fan_out) {
      throw Error("model file '", path, "': layer ", l, " weight blob has ", w.size(),
                  " values, expected ", fan_in * fan_out);
    }
    Matrix wm(fan_in, fan_out);
    std::copy(w.begin(), w.end(), wm.data());
    m.w.push_back(std::move(wm));
    const std::vector<double>& b = file.blob("b" + std::to_string(l));
    if (b.size() != fan_out) {
      throw Error("model file '", path, "': layer ", l, " bias blob has ", b.size(),
                  " values, expected ", fan_out);
    }
    m.b.push_back(b);
  }
  return m;
}

nlohmann::json zscore_meta(const dataset::ZScoreParams& z) {
  nlohmann::json j;
  j["mean"] = std::vector<double>(z.mean.begin(), z.mean.end());
  j["stddev"] = std::vector<double>(z.stddev.begin(), z.stddev.end());
  j["dropped"] = z.dropped;
  return j;
}

dataset::ZScoreParams zscore_from_meta(const nlohmann::json& j, const std::string& path) {
  dataset::ZScoreParams z;
  const auto mean = j.at("mean").get<std::vector<double>>();
  const auto stddev = j.at("stddev").get<std::vector<double>>();
  if (mean.size() != z.mean.size() || stddev.size() != z.stddev.size()) {
    throw Error("model file '", path, "': z-score params have wrong width");
  }
  std::copy(mean.begin(), mean.end(), z.mean.begin());
  std::copy(stddev.begin(), stddev.end(), z.stddev.begin());
  z.dropped = j.at("dropped").get<std::vector<int>>();
  return z;
}

nlohmann::json standardizer_meta(const Standardizer& s) {
  nlohmann::json j;
  j["mean"] = s.mean;
  j["stddev"] = s.stddev;
  return j;
}

Standardizer standardizer_from_meta(const nlohmann::json& j) {
  Standardizer s;
  s.mean = j.at("mean").get<std::vector<double>>();
  s.stddev = j.at("stddev").get<std::vector<double>>();
  return s;
}

void merge_meta(nlohmann::json& meta, const nlohmann::json& extra) {
  if (extra.is_null()) return;
  for (auto it = extra.begin(); it != extra.end(); ++it) meta[it.key()] = it.value();
}

// Trees flatten to five parallel arrays; forests and boosters concatenate
// trees with a per-tree count list in the meta.
void append_tree_blobs(const TreeModel& tree, std::vector<double>& feature,
                       std::vector<double>& threshold, std::vector<double>& left,
                       std::vector<double>& right, std::vector<double>& label) {
  for (const TreeNode& n : tree.nodes) {
    feature.push_back(n.feature);
    threshold.push_back(n.threshold);
    left.push_back(n.left);
    right.push_back(n.right);
    label.push_back(n.label);
  }
}

TreeModel tree_from_blobs(const std::vector<double>& feature,
                          const std::vector<double>& threshold,
                          const std::vector<double>& left, const std::vector<double>& right,
                          const std::vector<double>& label, std::size_t offset,
                          std::size_t count) {
  TreeModel t;
  t.nodes.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    TreeNode& n = t.nodes[i];
    n.feature = static_cast<int>(feature[offset + i]);
    n.threshold = threshold[offset + i];
    n.left = static_cast<int>(left[offset + i]);
    n.right = static_cast<int>(right[offset + i]);
    n.label = static_cast<int>(label[offset + i]);
  }
  return t;
}

void add_tree_list_blobs(ModelFile& file, const std::vector<TreeModel>& trees) {
  std::vector<double> feature, threshold, left, right, label;
  std::vector<std::size_t> counts;
  for (const TreeModel& t : trees) {
    counts.push_back(t.nodes.size());
    append_tree_blobs(t, feature, threshold, left, right, label);
  }
  file.meta["tree_counts"] = counts;
  file.add_blob("feature", std::move(feature));
  file.add_blob("threshold", std::move(threshold));
  file.add_blob("left", std::move(left));
  file.add_blob("right", std::move(right));
  file.add_blob("label", std::move(label));
}

std::vector<TreeModel> tree_list_from_file(const ModelFile& file) {
  const auto counts = file.meta.at("tree_counts").get<std::vector<std::size_t>>();
  const auto& feature = file.blob("feature");
  const auto& threshold = file.blob("threshold");
  const auto& left = file.blob("left");
  const auto& right = file.blob("right");
  const auto& label = file.blob("label");
  std::vector<TreeModel> trees;
  std::size_t offset = 0;
  for (std::size_t count : counts) {
    trees.push_back(tree_from_blobs(feature, threshold, left, right, label, offset, count));
    offset += count;
  }
  return trees;
}

}  // namespace

void ModelFile::add_blob(std::string name, std::vector<double> values) {
  blobs.emplace_back(std::move(name), std::move(values));
}

const std::vector<double>& ModelFile::blob(const std::string& name) const {
  for (const auto& [n, v] : blobs) {
    if (n == name) return v;
  }
  throw Error("model file: missing blob '", name, "'");
}

void ModelFile::save(const std::string& path) const {
  nlohmann::json header;
  header["meta"] = meta;
  nlohmann::json dir = nlohmann::json::array();
  for (const auto& [name, values] : blobs) {
    dir.push_back({{"name", name}, {"count", values.size()}});
  }
  header["blobs"] = dir;
  const std::string header_text = header.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '", path, "' for writing");
  out.write(kMagic, sizeof(kMagic));
  write_u64(out, header_text.size());
  out.write(header_text.data(), static_cast<std::streamsize>(header_text.size()));
  for (const auto& [name, values] : blobs) {
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * sizeof(double)));
  }
  if (!out) throw Error("failed writing '", path, "'");
}

ModelFile ModelFile::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '", path, "' for reading");
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw Error("'", path, "' is not a model file (bad magic)");
  }
  const std::uint64_t header_len = read_u64(in, path);
  std::string header_text(header_len, '\0');
  in.read(header_text.data(), static_cast<std::streamsize>(header_len));
  if (!in) throw Error("model file '", path, "': truncated header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(header_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error("model file '", path, "': bad header: ", e.what());
  }

  ModelFile file;
  file.meta = header.at("meta");
  for (const auto& entry : header.at("blobs")) {
    const std::string name = entry.at("name").get<std::string>();
    const std::size_t count = entry.at("count").get<std::size_t>();
    std::vector<double> values(count);
    in.read(reinterpret_cast<char*>(values.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (!in) throw Error("model file '", path, "': truncated blob '", name, "'");
    file.blobs.emplace_back(name, std::move(values));
  }
  return file;
}

void save_classifier(const std::string& path, const MlpModel& model,
                     const dataset::ZScoreParams& zparams, std::uint64_t seed,
                     const nlohmann::json& extra_meta) {
  ModelFile file;
  file.meta["kind"] = kKindClassifier;
  file.meta["tool_version"] = kToolVersion;
  file.meta["seed"] = seed;
  file.meta["mlp"] = mlp_meta(model);
  file.meta["zscore"] = zscore_meta(zparams);
  merge_meta(file.meta, extra_meta);
  add_mlp_blobs(file, model);
  file.save(path);
}

LoadedClassifier load_classifier(const std::string& path) {
  ModelFile file = ModelFile::load(path);
  if (file.meta.at("kind").get<std::string>() != kKindClassifier) {
    throw Error("'", path, "' is not a classifier model");
  }
  LoadedClassifier out;
  out.mlp = mlp_from_file(file, file.meta.at("mlp"), path);
  out.zparams = zscore_from_meta(file.meta.at("zscore"), path);
  out.meta = std::move(file.meta);
  return out;
}

void save_cloner(const std::string& path, const ClonerModel& model, std::uint64_t seed,
                 const nlohmann::json& extra_meta) {
  ModelFile file;
  file.meta["kind"] = kKindCloner;
  file.meta["tool_version"] = kToolVersion;
  file.meta["seed"] = seed;
  file.meta["archetype"] = std::string(to_string(model.archetype));
  file.meta["mlp"] = mlp_meta(model.mlp);
  file.meta["features"] = standardizer_meta(model.features);
  file.meta["targets"] = standardizer_meta(model.targets);
  merge_meta(file.meta, extra_meta);
  add_mlp_blobs(file, model.mlp);
  file.save(path);
}

ClonerModel load_cloner(const std::string& path, nlohmann::json* meta) {
  ModelFile file = ModelFile::load(path);
  if (file.meta.at("kind").get<std::string>() != kKindCloner) {
    throw Error("'", path, "' is not a cloner model");
  }
  ClonerModel m;
  m.mlp = mlp_from_file(file, file.meta.at("mlp"), path);
  m.features = standardizer_from_meta(file.meta.at("features"));
  m.targets = standardizer_from_meta(file.meta.at("targets"));
  const std::string arch = file.meta.at("archetype").get<std::string>();
  auto label = archetype_from_string(arch);
  if (!label) throw Error("model file '", path, "': unknown archetype '", arch, "'");
  m.archetype = *label;
  if (meta) *meta = std::move(file.meta);
  return m;
}

void save_baseline(const std::string& path, const BaselineModel& model,
                   const dataset::ZScoreParams& zparams, std::uint64_t seed,
                   const nlohmann::json& extra_meta) {
  ModelFile file;
  file.meta["kind"] = std::string(baseline_kind(model));
  file.meta["tool_version"] = kToolVersion;
  file.meta["seed"] = seed;
  file.meta["zscore"] = zscore_meta(zparams);
  merge_meta(file.meta, extra_meta);

  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, KnnModel>) {
          file.meta["k"] = m.k;
          file.meta["rows"] = m.x.rows();
          file.meta["cols"] = m.x.cols();
          file.add_blob("x", std::vector<double>(m.x.data(), m.x.data() + m.x.size()));
          file.add_blob("y", std::vector<double>(m.y.begin(), m.y.end()));
        } else if constexpr (std::is_same_v<T, LinearSvmModel>) {
          file.meta["rows"] = m.w.rows();
          file.meta["cols"] = m.w.cols();
          file.add_blob("w", std::vector<double>(m.w.data(), m.w.data() + m.w.size()));
        } else if constexpr (std::is_same_v<T, TreeModel>) {
          add_tree_list_blobs(file, {m});
        } else if constexpr (std::is_same_v<T, ForestModel>) {
          add_tree_list_blobs(file, m.trees);
        } else if constexpr (std::is_same_v<T, AdaBoostModel>) {
          add_tree_list_blobs(file, m.stumps);
          file.add_blob("alpha", m.alpha);
        } else if constexpr (std::is_same_v<T, GnbModel>) {
          file.meta["rows"] = m.mean.rows();
          file.meta["cols"] = m.mean.cols();
          file.add_blob("mean",
                        std::vector<double>(m.mean.data(), m.mean.data() + m.mean.size()));
          file.add_blob("var",
                        std::vector<double>(m.var.data(), m.var.data() + m.var.size()));
          file.add_blob("log_prior",
                        std::vector<double>(m.log_prior.begin(), m.log_prior.end()));
        }
      },
      model);
  file.save(path);
}

BaselineModel load_baseline(const std::string& path, nlohmann::json* meta) {
  ModelFile file = ModelFile::load(path);
  const std::string kind = file.meta.at("kind").get<std::string>();
  BaselineModel model;
  if (kind == "knn") {
    KnnModel m;
    m.k = file.meta.at("k").get<int>();
    const auto rows = file.meta.at("rows").get<std::size_t>();
    const auto cols = file.meta.at("cols").get<std::size_t>();
    const auto& x = file.blob("x");
    if (x.size() != rows * cols) throw Error("model file '", path, "': bad knn blob");
    m.x = Matrix(rows, cols);
    std::copy(x.begin(), x.end(), m.x.data());
    const auto& y = file.blob("y");
    m.y.assign(y.begin(), y.end());
    model = std::move(m);
  } else if (kind == "linear-svm") {
    LinearSvmModel m;
    const auto rows = file.meta.at("rows").get<std::size_t>();
    const auto cols = file.meta.at("cols").get<std::size_t>();
    const auto& w = file.blob("w");
    if (w.size() != rows * cols) throw Error("model file '", path, "': bad svm blob");
    m.w = Matrix(rows, cols);
    std::copy(w.begin(), w.end(), m.w.data());
    model = std::move(m);
  } else if (kind == "decision-tree") {
    auto trees = tree_list_from_file(file);
    if (trees.size() != 1) throw Error("model file '", path, "': expected one tree");
    model = std::move(trees[0]);
  } else if (kind == "random-forest") {
    ForestModel m;
    m.trees = tree_list_from_file(file);
    model = std::move(m);
  } else if (kind == "adaboost") {
    AdaBoostModel m;
    m.stumps = tree_list_from_file(file);
    m.alpha = file.blob("alpha");
    if (m.alpha.size() != m.stumps.size()) {
      throw Error("model file '", path, "': alpha count mismatch");
    }
    model = std::move(m);
  } else if (kind == "gaussian-nb") {
    GnbModel m;
    const auto rows = file.meta.at("rows").get<std::size_t>();
    const auto cols = file.meta.at("cols").get<std::size_t>();
    const auto& mean = file.blob("mean");
    const auto& var = file.blob("var");
    if (mean.size() != rows * cols || var.size() != rows * cols) {
      throw Error("model file '", path, "': bad gnb blobs");
    }
    m.mean = Matrix(rows, cols);
    m.var = Matrix(rows, cols);
    std::copy(mean.begin(), mean.end(), m.mean.data());
    std::copy(var.begin(), var.end(), m.var.data());
    const auto& prior = file.blob("log_prior");
    if (prior.size() != m.log_prior.size()) {
      throw Error("model file '", path, "': bad gnb prior");
    }
    std::copy(prior.begin(), prior.end(), m.log_prior.begin());
    model = std::move(m);
  } else {
    throw Error("model file '", path, "': unknown baseline kind '", kind, "'");
  }
  if (meta) *meta = std::move(file.meta);
  return model;
}

AnyModel load_any_model(const std::string& path) {
  ModelFile probe = ModelFile::load(path);
  const std::string kind = probe.meta.at("kind").get<std::string>();
  AnyModel out;
  out.kind = kind;
  if (kind == kKindClassifier) {
    LoadedClassifier c = load_classifier(path);
    out.mlp = std::move(c.mlp);
    out.meta = std::move(c.meta);
  } else if (kind == kKindCloner) {
    out.cloner = load_cloner(path, &out.meta);
  } else {
    out.baseline = load_baseline(path, &out.meta);
  }
  return out;
}

std::vector<int> any_predict_classes(const AnyModel& model,
                                     const std::vector<dataset::Sample>& samples) {
  if (model.mlp) {
    return predict_classes(*model.mlp, features_matrix(samples));
  }
  if (model.baseline) {
    return baseline_predict_all(*model.baseline, samples);
  }
  throw Error("model kind '", model.kind, "' does not classify");
}

}  // namespace lobarena::learn
