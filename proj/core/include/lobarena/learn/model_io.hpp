#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "lobarena/dataset/dataset.hpp"
#include "lobarena/learn/baselines.hpp"
#include "lobarena/learn/train.hpp"

namespace lobarena::learn {

// Self-describing model container:
//   "LOBMDL1\n" | u64 header length | header JSON | f64 payload (little endian)
// The header carries "meta" (kind plus arbitrary metadata) and the blob
// directory (name, count) in payload order.
struct ModelFile {
  nlohmann::json meta;
  std::vector<std::pair<std::string, std::vector<double>>> blobs;

  void add_blob(std::string name, std::vector<double> values);
  const std::vector<double>& blob(const std::string& name) const;

  void save(const std::string& path) const;
  static ModelFile load(const std::string& path);
};

// Kind tags written into meta["kind"].
inline constexpr const char* kKindClassifier = "mlp-classifier";
inline constexpr const char* kKindCloner = "mlp-cloner";

void save_classifier(const std::string& path, const MlpModel& model,
                     const dataset::ZScoreParams& zparams, std::uint64_t seed,
                     const nlohmann::json& extra_meta = {});

struct LoadedClassifier {
  MlpModel mlp;
  dataset::ZScoreParams zparams;
  nlohmann::json meta;
};
LoadedClassifier load_classifier(const std::string& path);

void save_cloner(const std::string& path, const ClonerModel& model, std::uint64_t seed,
                 const nlohmann::json& extra_meta = {});
ClonerModel load_cloner(const std::string& path, nlohmann::json* meta = nullptr);

void save_baseline(const std::string& path, const BaselineModel& model,
                   const dataset::ZScoreParams& zparams, std::uint64_t seed,
                   const nlohmann::json& extra_meta = {});
BaselineModel load_baseline(const std::string& path, nlohmann::json* meta = nullptr);

// Dispatch wrapper for `evaluate`-style consumers.
struct AnyModel {
  std::string kind;
  std::optional<MlpModel> mlp;
  std::optional<ClonerModel> cloner;
  std::optional<BaselineModel> baseline;
  nlohmann::json meta;

  bool is_classifier() const { return mlp.has_value() || baseline.has_value(); }
};
AnyModel load_any_model(const std::string& path);

// Classifier predictions for any classification-capable model.
std::vector<int> any_predict_classes(const AnyModel& model,
                                     const std::vector<dataset::Sample>& samples);

}  // namespace lobarena::learn
