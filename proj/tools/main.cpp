#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lobarena/dataset/dataset.hpp"
#include "lobarena/exchange/logs.hpp"
#include "lobarena/facts/stylized.hpp"
#include "lobarena/learn/baselines.hpp"
#include "lobarena/learn/metrics.hpp"
#include "lobarena/learn/model_io.hpp"
#include "lobarena/learn/train.hpp"
#include "lobarena/manifest.hpp"
#include "lobarena/scenario/config.hpp"
#include "lobarena/scenario/runner.hpp"
#include "lobarena/util/error.hpp"
#include "lobarena/util/hash.hpp"
#include "lobarena/util/parallel.hpp"
#include "lobarena/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace lobarena;

namespace {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::uint64_t stage_seed(std::uint64_t master, std::string_view stage) {
  return substream_seed(master, fnv1a64(kFnvOffset, stage));
}

// Total Adam steps a cloner trains for when --epochs is left on auto.
constexpr std::size_t kClonerTargetSteps = 3750;

std::string params_hash(const json& j) { return sha256_hex(j.dump()); }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '", path.string(), "' for writing");
  out << text;
  if (!out) throw Error("failed writing '", path.string(), "'");
}

// day-NN subdirectories of a simulation run, ordered by day index.
std::vector<std::pair<int, fs::path>> day_dirs(const fs::path& run_dir) {
  std::vector<std::pair<int, fs::path>> out;
  if (!fs::is_directory(run_dir)) {
    throw Error("run directory '", run_dir.string(), "' does not exist");
  }
  for (const auto& entry : fs::directory_iterator(run_dir)) {
    if (!entry.is_directory()) continue;
    const std::string name = entry.path().filename().string();
    if (name.rfind("day-", 0) != 0) continue;
    out.emplace_back(std::stoi(name.substr(4)), entry.path());
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) {
    throw Error("run directory '", run_dir.string(), "' has no day-* subdirectories");
  }
  return out;
}

scenario::ScenarioConfig load_run_config(const fs::path& run_dir) {
  const fs::path cfg = run_dir / "config.json";
  if (!fs::exists(cfg)) {
    throw Error("missing '", cfg.string(), "' (expected a simulate output directory)");
  }
  return scenario::ScenarioConfig::from_json_file(cfg.string());
}

dataset::ZScoreParams zscore_from_json(const json& j) {
  dataset::ZScoreParams z;
  const auto mean = j.at("mean").get<std::vector<double>>();
  const auto stddev = j.at("stddev").get<std::vector<double>>();
  if (mean.size() != z.mean.size() || stddev.size() != z.stddev.size()) {
    throw Error("dataset manifest: z-score params have width ", mean.size(),
                ", expected ", z.mean.size());
  }
  std::copy(mean.begin(), mean.end(), z.mean.begin());
  std::copy(stddev.begin(), stddev.end(), z.stddev.begin());
  z.dropped = j.at("dropped").get<std::vector<int>>();
  return z;
}

json load_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '", path.string(), "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error("'", path.string(), "': invalid JSON: ", e.what());
  }
  return j;
}

json counts_to_json(const std::array<std::size_t, kNumArchetypes>& counts) {
  json j = json::object();
  for (int c = 0; c < kNumArchetypes; ++c) {
    j[std::string(to_string(static_cast<ArchetypeLabel>(c)))] =
        counts[static_cast<std::size_t>(c)];
  }
  return j;
}

// ---------------------------------------------------------------------------
// simulate

scenario::ScenarioConfig resolve_scenario(const std::string& scenario_path,
                                          const std::string& preset, int days_override) {
  scenario::ScenarioConfig cfg;
  if (!scenario_path.empty()) {
    cfg = scenario::ScenarioConfig::from_json_file(scenario_path);
  } else {
    cfg = scenario::ScenarioConfig::preset(preset);
  }
  if (days_override > 0) cfg.days = days_override;
  cfg.validate();
  return cfg;
}

int cmd_simulate(const std::string& scenario_path, const std::string& preset,
                 int days_override, std::uint64_t seed, const std::string& out) {
  const scenario::ScenarioConfig cfg =
      resolve_scenario(scenario_path, preset, days_override);
  const auto artifacts = scenario::run_scenario(cfg, seed, out);
  for (const auto& day : artifacts.days) {
    std::printf("day %02d: events=%llu trace=%016llx dropped_wakeups=%llu\n",
                day.day_index, static_cast<unsigned long long>(day.stats.events),
                static_cast<unsigned long long>(day.stats.trace_hash),
                static_cast<unsigned long long>(day.stats.dropped_wakeups));
  }
  std::printf("simulate: %zu days -> %s\n", artifacts.days.size(),
              artifacts.out_dir.c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// stylized-facts (also reused by report and all)

json run_facts_stage(const fs::path& run_dir, const fs::path& out_dir,
                     const std::vector<std::int64_t>& horizons_s, int bins,
                     RunManifest& mf) {
  const scenario::ScenarioConfig cfg = load_run_config(run_dir);
  mf.inputs.push_back((run_dir / "config.json").string());

  std::vector<facts::MidSeries> sessions;
  for (const auto& [day, dir] : day_dirs(run_dir)) {
    const fs::path l2_path = dir / "l2.csv";
    mf.inputs.push_back(l2_path.string());
    const auto l2 = exchange::load_l2_csv(l2_path.string());
    sessions.push_back(facts::resample_mid(l2, cfg.session_open, cfg.session_close,
                                           kNsPerSec, day));
  }

  fs::create_directories(out_dir);
  json report;
  report["days"] = sessions.size();
  report["grid_seconds"] = 1;
  report["bins"] = bins;
  json horizon_entries = json::array();
  for (std::int64_t seconds : horizons_s) {
    if (seconds <= 0) throw Error("stylized-facts: horizon must be positive seconds");
    const auto horizon_ns = static_cast<SimTime>(seconds) * kNsPerSec;
    const facts::ReturnSeries series = facts::log_returns(sessions, horizon_ns);
    const facts::ReturnStats stats = facts::summarize_returns(series);
    const facts::Histogram hist = facts::make_histogram(series.values, bins);

    const std::string tag = "returns_" + std::to_string(seconds) + "s";
    const fs::path csv_path = out_dir / (tag + ".csv");
    const fs::path svg_path = out_dir / (tag + ".svg");
    facts::write_histogram_csv(hist, csv_path.string());
    facts::write_histogram_svg(series.values, hist, svg_path.string(),
                               "log returns, horizon " + std::to_string(seconds) + "s");
    mf.add_output(out_dir.string(), csv_path.string());
    mf.add_output(out_dir.string(), svg_path.string());

    json entry;
    entry["horizon_seconds"] = seconds;
    entry["horizon_ns"] = horizon_ns;
    entry["n"] = stats.n;
    entry["mean"] = stats.mean;
    entry["std"] = stats.stddev;
    entry["excess_kurtosis"] = stats.excess_kurtosis;
    horizon_entries.push_back(entry);
    std::printf("facts: horizon=%llds n=%zu mean=%.3e std=%.3e excess_kurtosis=%.3f\n",
                static_cast<long long>(seconds), stats.n, stats.mean, stats.stddev,
                stats.excess_kurtosis);
  }
  report["horizons"] = horizon_entries;
  const fs::path report_path = out_dir / "facts.json";
  write_text(report_path, report.dump(2) + "\n");
  mf.add_output(out_dir.string(), report_path.string());
  return report;
}

int cmd_facts(const std::string& run, const std::string& out,
              const std::vector<std::int64_t>& horizons, int bins) {
  Stopwatch watch;
  RunManifest mf;
  mf.command = "stylized-facts";
  mf.tool_version = kToolVersion;
  json params;
  params["run"] = run;
  params["horizons_s"] = horizons;
  params["bins"] = bins;
  mf.config_hash = params_hash(params);
  run_facts_stage(run, out, horizons, bins, mf);
  mf.wall_time_seconds = watch.seconds();
  mf.write((fs::path(out) / "manifest.json").string());
  return 0;
}

// ---------------------------------------------------------------------------
// dataset

struct DatasetOutputs {
  std::vector<dataset::Sample> train_raw;
  std::vector<dataset::Sample> test_raw;
};

void run_dataset_stage(const fs::path& run_dir, const fs::path& out_dir,
                       std::uint64_t seed, int train_days, int test_days,
                       RunManifest& mf) {
  std::vector<dataset::Sample> all;
  dataset::ExtractStats totals;
  json per_day = json::object();
  for (const auto& [day, dir] : day_dirs(run_dir)) {
    const fs::path orders_path = dir / "orders.csv";
    const fs::path l2_path = dir / "l2.csv";
    mf.inputs.push_back(orders_path.string());
    mf.inputs.push_back(l2_path.string());
    const auto orders = exchange::load_orders_csv(orders_path.string());
    const auto l2 = exchange::load_l2_csv(l2_path.string());
    dataset::ExtractStats st;
    auto samples = dataset::extract_samples(orders, l2, day, &st);
    totals.samples += st.samples;
    totals.skipped_before_first_snapshot += st.skipped_before_first_snapshot;
    totals.cancels_ignored += st.cancels_ignored;
    per_day[std::to_string(day)] = st.samples;
    all.insert(all.end(), samples.begin(), samples.end());
  }

  auto [train_raw, test_raw] = dataset::split_by_day(all, train_days, test_days);
  const auto train_before = dataset::class_counts(train_raw);
  const auto test_before = dataset::class_counts(test_raw);
  auto train_balanced =
      dataset::balance_downsample(train_raw, stage_seed(seed, "balance-train"));
  auto test_balanced =
      dataset::balance_downsample(test_raw, stage_seed(seed, "balance-test"));
  const auto train_after = dataset::class_counts(train_balanced);
  const auto test_after = dataset::class_counts(test_balanced);

  const dataset::ZScoreParams zparams = dataset::zscore_fit(train_balanced);
  dataset::zscore_apply(zparams, train_balanced);
  dataset::zscore_apply(zparams, test_balanced);

  fs::create_directories(out_dir);
  const fs::path train_csv = out_dir / "train.csv";
  const fs::path test_csv = out_dir / "test.csv";
  const fs::path train_raw_csv = out_dir / "train_raw.csv";
  const fs::path test_raw_csv = out_dir / "test_raw.csv";
  dataset::write_samples_csv(train_balanced, train_csv.string());
  dataset::write_samples_csv(test_balanced, test_csv.string());
  dataset::write_samples_csv(train_raw, train_raw_csv.string());
  dataset::write_samples_csv(test_raw, test_raw_csv.string());

  std::vector<int> train_day_list, test_day_list;
  for (const auto& s : train_raw) train_day_list.push_back(s.day);
  for (const auto& s : test_raw) test_day_list.push_back(s.day);
  std::sort(train_day_list.begin(), train_day_list.end());
  train_day_list.erase(std::unique(train_day_list.begin(), train_day_list.end()),
                       train_day_list.end());
  std::sort(test_day_list.begin(), test_day_list.end());
  test_day_list.erase(std::unique(test_day_list.begin(), test_day_list.end()),
                      test_day_list.end());

  json manifest;
  manifest["seed"] = seed;
  manifest["run"] = run_dir.string();
  manifest["train_days"] = train_day_list;
  manifest["test_days"] = test_day_list;
  manifest["samples_total"] = totals.samples;
  manifest["samples_per_day"] = per_day;
  manifest["skipped_before_first_snapshot"] = totals.skipped_before_first_snapshot;
  manifest["cancel_rows_ignored"] = totals.cancels_ignored;
  manifest["train"] = {{"before", counts_to_json(train_before)},
                       {"after", counts_to_json(train_after)}};
  manifest["test"] = {{"before", counts_to_json(test_before)},
                      {"after", counts_to_json(test_after)}};
  manifest["zscore"] = {{"mean", std::vector<double>(zparams.mean.begin(), zparams.mean.end())},
                        {"stddev", std::vector<double>(zparams.stddev.begin(), zparams.stddev.end())},
                        {"dropped", zparams.dropped}};
  const fs::path manifest_path = out_dir / "dataset.json";
  write_text(manifest_path, manifest.dump(2) + "\n");

  for (const fs::path& p : {train_csv, test_csv, train_raw_csv, test_raw_csv, manifest_path}) {
    mf.add_output(out_dir.string(), p.string());
  }
  std::printf("dataset: %zu samples, train %zu/balanced %zu, test %zu/balanced %zu\n",
              totals.samples, train_raw.size(), train_balanced.size(), test_raw.size(),
              test_balanced.size());
}

int cmd_dataset(const std::string& run, const std::string& out, std::uint64_t seed,
                int train_days, int test_days) {
  Stopwatch watch;
  RunManifest mf;
  mf.command = "dataset";
  mf.tool_version = kToolVersion;
  mf.seed = seed;
  json params;
  params["run"] = run;
  params["train_days"] = train_days;
  params["test_days"] = test_days;
  mf.config_hash = params_hash(params);
  run_dataset_stage(run, out, seed, train_days, test_days, mf);
  mf.wall_time_seconds = watch.seconds();
  mf.write((fs::path(out) / "manifest.json").string());
  return 0;
}

// ---------------------------------------------------------------------------
// train-classifier

struct ClassifierKnobs {
  int knn_k = 5;
  int svm_epochs = 20;
  double svm_lambda = 1e-4;
  int max_depth = 12;
  int n_trees = 50;
  double feat_frac = 0.5;
  int n_stumps = 100;
};

void run_train_classifier_stage(const fs::path& dataset_dir, const fs::path& out_file,
                                std::uint64_t seed, const std::string& kind,
                                learn::TrainParams params, int search_budget,
                                const ClassifierKnobs& knobs, RunManifest& mf) {
  const fs::path train_csv = dataset_dir / "train.csv";
  const fs::path dataset_json = dataset_dir / "dataset.json";
  mf.inputs.push_back(train_csv.string());
  mf.inputs.push_back(dataset_json.string());
  const auto train = dataset::load_samples_csv(train_csv.string());
  if (train.empty()) throw Error("'", train_csv.string(), "' has no samples");
  const dataset::ZScoreParams zparams =
      zscore_from_json(load_json_file(dataset_json).at("zscore"));

  json meta;
  meta["dataset"] = dataset_dir.string();
  meta["train_rows"] = train.size();

  if (fs::path(out_file).has_parent_path()) {
    fs::create_directories(fs::path(out_file).parent_path());
  }

  if (kind == "mlp") {
    if (search_budget > 0) {
      // Hold out the last training day as the validation fold.
      int last_day = train.front().day;
      for (const auto& s : train) last_day = std::max(last_day, s.day);
      std::vector<dataset::Sample> fit_part, val_part;
      for (const auto& s : train) (s.day == last_day ? val_part : fit_part).push_back(s);
      if (fit_part.empty() || val_part.empty()) {
        throw Error("--search needs at least 2 distinct training days");
      }
      const std::vector<int> val_labels = learn::labels_vector(val_part);
      const learn::Matrix val_x = learn::features_matrix(val_part);
      learn::SearchSpace space;
      const int probe_epochs = std::min(params.epochs, 40);
      const auto result = learn::random_search(
          space, search_budget,
          [&](const learn::TrainParams& p) {
            learn::TrainParams probe = p;
            probe.epochs = probe_epochs;
            const learn::MlpModel m =
                learn::train_classifier(fit_part, probe, stage_seed(seed, "search"));
            const auto preds = learn::predict_classes(m, val_x);
            return learn::evaluate(preds, val_labels).macro_f1;
          },
          seed);
      params.lr = result.best.lr;
      params.dropout = result.best.dropout;
      params.batch_size = result.best.batch_size;
      json trials = json::array();
      for (const auto& t : result.trials) {
        trials.push_back({{"lr", t.params.lr},
                          {"dropout", t.params.dropout},
                          {"batch_size", t.params.batch_size},
                          {"macro_f1", t.objective}});
      }
      meta["search"] = {{"budget", search_budget},
                        {"best_macro_f1", result.best_objective},
                        {"trials", trials}};
      std::printf("search: best lr=%.2e dropout=%.3f batch=%zu macro_f1=%.3f\n",
                  params.lr, params.dropout, params.batch_size,
                  result.best_objective);
    }
    meta["params"] = {{"epochs", params.epochs},
                      {"batch_size", params.batch_size},
                      {"lr", params.lr},
                      {"dropout", params.dropout}};
    learn::TrainHistory history;
    const learn::MlpModel model =
        learn::train_classifier(train, params, stage_seed(seed, "train"), &history);
    meta["history"] = history.train_loss;
    learn::save_classifier(out_file.string(), model, zparams, seed, meta);
    std::printf("train-classifier: mlp epochs=%d final_loss=%.5f -> %s\n",
                params.epochs, history.train_loss.back(), out_file.string().c_str());
  } else {
    learn::BaselineModel model;
    if (kind == "knn") {
      meta["params"] = {{"k", knobs.knn_k}};
      model = learn::train_knn(train, knobs.knn_k);
    } else if (kind == "linear-svm") {
      meta["params"] = {{"epochs", knobs.svm_epochs}, {"lambda", knobs.svm_lambda}};
      model = learn::train_linear_svm(train, {knobs.svm_epochs, knobs.svm_lambda},
                                      stage_seed(seed, "svm"));
    } else if (kind == "decision-tree") {
      meta["params"] = {{"max_depth", knobs.max_depth}};
      learn::TreeParams tp;
      tp.max_depth = knobs.max_depth;
      model = learn::train_tree(train, tp);
    } else if (kind == "random-forest") {
      meta["params"] = {{"n_trees", knobs.n_trees},
                        {"feat_frac", knobs.feat_frac},
                        {"max_depth", knobs.max_depth}};
      learn::ForestParams fp;
      fp.n_trees = knobs.n_trees;
      fp.feat_frac = knobs.feat_frac;
      fp.tree.max_depth = knobs.max_depth;
      model = learn::train_forest(train, fp, stage_seed(seed, "forest"));
    } else if (kind == "adaboost") {
      meta["params"] = {{"n_stumps", knobs.n_stumps}};
      model = learn::train_adaboost(train, {knobs.n_stumps});
    } else if (kind == "gaussian-nb") {
      meta["params"] = json::object();
      model = learn::train_gnb(train);
    } else {
      throw Error("unknown --model '", kind,
                  "' (expected mlp, knn, linear-svm, decision-tree, random-forest, "
                  "adaboost, gaussian-nb)");
    }
    learn::save_baseline(out_file.string(), model, zparams, seed, meta);
    std::printf("train-classifier: %s -> %s\n", kind.c_str(), out_file.string().c_str());
  }
  mf.add_output(fs::path(out_file).parent_path().string(), out_file.string());
}

int cmd_train_classifier(const std::string& dataset_dir, const std::string& out_file,
                         std::uint64_t seed, const std::string& kind,
                         const learn::TrainParams& params, int search_budget,
                         const ClassifierKnobs& knobs) {
  Stopwatch watch;
  RunManifest mf;
  mf.command = "train-classifier";
  mf.tool_version = kToolVersion;
  mf.seed = seed;
  json p;
  p["dataset"] = dataset_dir;
  p["model"] = kind;
  p["epochs"] = params.epochs;
  p["batch_size"] = params.batch_size;
  p["lr"] = params.lr;
  p["dropout"] = params.dropout;
  p["search"] = search_budget;
  mf.config_hash = params_hash(p);
  run_train_classifier_stage(dataset_dir, out_file, seed, kind, params, search_budget,
                             knobs, mf);
  mf.wall_time_seconds = watch.seconds();
  mf.write((fs::path(out_file).parent_path() / "manifest.json").string());
  return 0;
}

// ---------------------------------------------------------------------------
// train-cloner

void run_train_cloner_stage(const fs::path& dataset_dir, const fs::path& out_dir,
                            std::uint64_t seed, const learn::TrainParams& params,
                            std::size_t max_samples, RunManifest& mf) {
  const fs::path train_raw_csv = dataset_dir / "train_raw.csv";
  mf.inputs.push_back(train_raw_csv.string());
  const auto train_raw = dataset::load_samples_csv(train_raw_csv.string());
  if (train_raw.empty()) throw Error("'", train_raw_csv.string(), "' has no samples");

  std::array<std::vector<dataset::Sample>, kNumArchetypes> by_class;
  for (const auto& s : train_raw) {
    by_class[static_cast<std::size_t>(s.label)].push_back(s);
  }
  fs::create_directories(out_dir);

  struct Job {
    ArchetypeLabel archetype;
    std::vector<dataset::Sample> samples;
    fs::path out_path;
    std::size_t total = 0;
  };
  std::vector<Job> jobs;
  for (int c = 0; c < kNumArchetypes; ++c) {
    const auto label = static_cast<ArchetypeLabel>(c);
    const std::string name(to_string(label));
    auto& samples = by_class[static_cast<std::size_t>(c)];
    if (samples.size() < 100) {
      throw Error("train-cloner: archetype ", name, " has only ", samples.size(),
                  " training samples; need at least 100");
    }
    Job job;
    job.archetype = label;
    job.total = samples.size();
    // Cap per-archetype training cost with a seeded uniform subsample.
    if (samples.size() > max_samples) {
      Rng rng(stage_seed(seed, "cap-" + name));
      for (std::size_t i = 0; i < max_samples; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.uniform_int(
                                      0, static_cast<std::int64_t>(samples.size() - 1 - i)));
        std::swap(samples[i], samples[j]);
      }
      samples.resize(max_samples);
      std::sort(samples.begin(), samples.end(),
                [](const dataset::Sample& a, const dataset::Sample& b) {
                  return a.day != b.day ? a.day < b.day : a.time < b.time;
                });
    }
    job.samples = std::move(samples);
    job.out_path = out_dir / ("cloner-" + name + ".bin");
    jobs.push_back(std::move(job));
  }

  parallel_for(jobs.size(), thread_cap(), [&](std::size_t i) {
    Job& job = jobs[i];
    const std::string name(to_string(job.archetype));
    learn::TrainParams job_params = params;
    if (job_params.epochs <= 0) {
      // Auto mode: normalize total optimizer steps across archetypes of very
      // different sample counts (small classes need more passes to converge).
      const std::size_t per_epoch =
          (job.samples.size() + job_params.batch_size - 1) / job_params.batch_size;
      job_params.epochs =
          static_cast<int>((kClonerTargetSteps + per_epoch - 1) / per_epoch);
    }
    learn::TrainHistory history;
    const learn::ClonerModel model = learn::train_cloner(
        job.samples, job_params, stage_seed(seed, "train-" + name), &history);
    json meta;
    meta["dataset"] = dataset_dir.string();
    meta["samples_used"] = job.samples.size();
    meta["samples_total"] = job.total;
    meta["params"] = {{"epochs", job_params.epochs},
                      {"batch_size", job_params.batch_size},
                      {"lr", job_params.lr},
                      {"dropout", job_params.dropout}};
    meta["history"] = history.train_loss;
    learn::save_cloner(job.out_path.string(), model, seed, meta);
    std::printf("train-cloner: %s n=%zu/%zu final_mse=%.5f -> %s\n", name.c_str(),
                job.samples.size(), job.total, history.train_loss.back(),
                job.out_path.string().c_str());
  });
  for (const Job& job : jobs) {
    mf.add_output(out_dir.string(), job.out_path.string());
  }
}

int cmd_train_cloner(const std::string& dataset_dir, const std::string& out_dir,
                     std::uint64_t seed, const learn::TrainParams& params,
                     std::size_t max_samples) {
  Stopwatch watch;
  RunManifest mf;
  mf.command = "train-cloner";
  mf.tool_version = kToolVersion;
  mf.seed = seed;
  json p;
  p["dataset"] = dataset_dir;
  p["epochs"] = params.epochs;
  p["batch_size"] = params.batch_size;
  p["lr"] = params.lr;
  p["dropout"] = params.dropout;
  p["max_samples"] = max_samples;
  mf.config_hash = params_hash(p);
  run_train_cloner_stage(dataset_dir, out_dir, seed, params, max_samples, mf);
  mf.wall_time_seconds = watch.seconds();
  mf.write((fs::path(out_dir) / "manifest.json").string());
  return 0;
}

// ---------------------------------------------------------------------------
// evaluate

void run_evaluate_stage(const fs::path& model_path, const fs::path& data_csv,
                        const fs::path& out_dir, RunManifest& mf) {
  mf.inputs.push_back(model_path.string());
  mf.inputs.push_back(data_csv.string());
  const learn::AnyModel model = learn::load_any_model(model_path.string());
  const auto samples = dataset::load_samples_csv(data_csv.string());
  if (samples.empty()) throw Error("'", data_csv.string(), "' has no samples");
  fs::create_directories(out_dir);

  if (model.is_classifier()) {
    const auto preds = learn::any_predict_classes(model, samples);
    const auto truths = learn::labels_vector(samples);
    const learn::EvalReport report = learn::evaluate(preds, truths);
    const fs::path json_path = out_dir / ("eval-" + model.kind + ".json");
    const fs::path svg_path = out_dir / ("confusion-" + model.kind + ".svg");
    learn::write_eval_report_json(report, model.kind, json_path.string());
    learn::write_confusion_svg(report, svg_path.string(), "confusion: " + model.kind);
    mf.add_output(out_dir.string(), json_path.string());
    mf.add_output(out_dir.string(), svg_path.string());
    std::printf("evaluate: %s n=%zu accuracy=%.3f macro_f1=%.3f\n", model.kind.c_str(),
                report.n, report.accuracy, report.macro_f1);
    return;
  }

  // Cloner: compare z-scored (price, signed size) distributions on the
  // archetype's own rows. The data file must hold raw features.
  const learn::ClonerModel& cloner = *model.cloner;
  std::vector<dataset::Sample> rows;
  for (const auto& s : samples) {
    if (s.label == cloner.archetype) rows.push_back(s);
  }
  const std::string name(to_string(cloner.archetype));
  if (rows.empty()) {
    throw Error("evaluate: '", data_csv.string(), "' has no rows for archetype ", name);
  }
  const learn::Matrix pred = learn::cloner_predict_z(cloner, rows);
  const learn::Matrix truth = learn::cloner_truth_z(cloner, rows);

  json report;
  report["archetype"] = name;
  report["n"] = rows.size();
  const char* dims[2] = {"price", "size"};
  for (std::size_t d = 0; d < 2; ++d) {
    std::vector<double> p_col(pred.rows()), t_col(truth.rows());
    for (std::size_t r = 0; r < pred.rows(); ++r) {
      p_col[r] = pred(r, d);
      t_col[r] = truth(r, d);
    }
    double mean_p = 0.0, mean_t = 0.0;
    for (double v : p_col) mean_p += v;
    for (double v : t_col) mean_t += v;
    mean_p /= static_cast<double>(p_col.size());
    mean_t /= static_cast<double>(t_col.size());
    double var_t = 0.0;
    for (double v : t_col) var_t += (v - mean_t) * (v - mean_t);
    var_t /= static_cast<double>(t_col.size());
    const double std_t = std::sqrt(var_t);
    const double ks = learn::ks_statistic(t_col, p_col);
    json entry;
    entry["mean_true"] = mean_t;
    entry["mean_pred"] = mean_p;
    entry["std_true"] = std_t;
    entry["mean_abs_diff"] = std::fabs(mean_p - mean_t);
    entry["ks"] = ks;
    report[dims[d]] = entry;

    const fs::path svg_path = out_dir / ("cloning-" + name + "-" + dims[d] + ".svg");
    learn::write_comparison_histogram_svg(
        t_col, p_col, 60, svg_path.string(),
        name + " " + dims[d] + " (z-scored): truth vs predicted");
    mf.add_output(out_dir.string(), svg_path.string());
    std::printf("evaluate: cloner %s %s |dmean|=%.3f std_true=%.3f ks=%.3f\n",
                name.c_str(), dims[d], std::fabs(mean_p - mean_t), std_t, ks);
  }
  const fs::path json_path = out_dir / ("cloning-" + name + ".json");
  write_text(json_path, report.dump(2) + "\n");
  mf.add_output(out_dir.string(), json_path.string());
}

int cmd_evaluate(const std::string& model_path, const std::string& data_csv,
                 const std::string& out_dir) {
  Stopwatch watch;
  RunManifest mf;
  mf.command = "evaluate";
  mf.tool_version = kToolVersion;
  json p;
  p["model"] = model_path;
  p["data"] = data_csv;
  mf.config_hash = params_hash(p);
  run_evaluate_stage(model_path, data_csv, out_dir, mf);
  mf.wall_time_seconds = watch.seconds();
  mf.write((fs::path(out_dir) / "manifest.json").string());
  return 0;
}

// ---------------------------------------------------------------------------
// report

void run_report_stage(const fs::path& run_dir, const fs::path& out_dir,
                      const std::vector<std::int64_t>& horizons, int bins,
                      RunManifest& mf) {
  const json facts = run_facts_stage(run_dir, out_dir, horizons, bins, mf);

  json days = json::array();
  for (const auto& [day, dir] : day_dirs(run_dir)) {
    const auto orders = exchange::load_orders_csv((dir / "orders.csv").string());
    const auto trades = exchange::load_trades_csv((dir / "trades.csv").string());
    mf.inputs.push_back((dir / "orders.csv").string());
    mf.inputs.push_back((dir / "trades.csv").string());

    std::array<std::size_t, kNumArchetypes> by_archetype{};
    std::map<std::string, std::size_t> by_action;
    for (const auto& row : orders) {
      ++by_archetype[static_cast<std::size_t>(row.archetype)];
      ++by_action[std::string(exchange::to_string(row.action))];
    }
    double volume = 0.0;
    double notional = 0.0;
    for (const auto& t : trades) {
      volume += static_cast<double>(t.qty);
      notional += static_cast<double>(t.qty) * static_cast<double>(t.price);
    }
    json d;
    d["day"] = day;
    d["orders"] = orders.size();
    d["orders_by_archetype"] = counts_to_json(by_archetype);
    d["orders_by_action"] = by_action;
    d["trades"] = trades.size();
    d["traded_qty"] = volume;
    d["vwap_ticks"] = volume > 0.0 ? notional / volume : 0.0;
    days.push_back(d);
  }
  json report;
  report["run"] = run_dir.string();
  report["stylized_facts"] = facts;
  report["days"] = days;
  const fs::path path = out_dir / "report.json";
  write_text(path, report.dump(2) + "\n");
  mf.add_output(out_dir.string(), path.string());
}

int cmd_report(const std::string& run, const std::string& out,
               const std::vector<std::int64_t>& horizons, int bins) {
  Stopwatch watch;
  RunManifest mf;
  mf.command = "report";
  mf.tool_version = kToolVersion;
  json p;
  p["run"] = run;
  p["horizons_s"] = horizons;
  p["bins"] = bins;
  mf.config_hash = params_hash(p);
  run_report_stage(run, out, horizons, bins, mf);
  mf.wall_time_seconds = watch.seconds();
  mf.write((fs::path(out) / "manifest.json").string());
  return 0;
}

// ---------------------------------------------------------------------------
// all

int cmd_all(const std::string& scenario_path, const std::string& preset,
            int days_override, std::uint64_t seed, const std::string& out,
            const learn::TrainParams& clf_params, const learn::TrainParams& cloner_params,
            std::size_t cloner_max_samples, int search_budget) {
  Stopwatch total;
  const fs::path root(out);
  const scenario::ScenarioConfig cfg =
      resolve_scenario(scenario_path, preset, days_override);

  std::printf("[all] simulate\n");
  const auto artifacts = scenario::run_scenario(cfg, seed, (root / "run").string());

  std::printf("[all] stylized-facts\n");
  const std::vector<std::int64_t> horizons{60, 600};
  {
    Stopwatch watch;
    RunManifest mf;
    mf.command = "stylized-facts";
    mf.tool_version = kToolVersion;
    json p;
    p["run"] = (root / "run").string();
    p["horizons_s"] = horizons;
    p["bins"] = 101;
    mf.config_hash = params_hash(p);
    run_facts_stage(root / "run", root / "facts", horizons, 101, mf);
    mf.wall_time_seconds = watch.seconds();
    mf.write((root / "facts" / "manifest.json").string());
  }

  std::printf("[all] dataset\n");
  {
    Stopwatch watch;
    RunManifest mf;
    mf.command = "dataset";
    mf.tool_version = kToolVersion;
    mf.seed = stage_seed(seed, "dataset");
    json p;
    p["run"] = (root / "run").string();
    p["train_days"] = 3;
    p["test_days"] = 2;
    mf.config_hash = params_hash(p);
    run_dataset_stage(root / "run", root / "dataset", mf.seed, 3, 2, mf);
    mf.wall_time_seconds = watch.seconds();
    mf.write((root / "dataset" / "manifest.json").string());
  }

  const std::vector<std::string> kinds = {"mlp",           "knn",
                                          "linear-svm",    "decision-tree",
                                          "random-forest", "adaboost",
                                          "gaussian-nb"};
  {
    Stopwatch watch;
    RunManifest mf;
    mf.command = "train-classifier";
    mf.tool_version = kToolVersion;
    mf.seed = stage_seed(seed, "train-classifier");
    json p;
    p["dataset"] = (root / "dataset").string();
    p["models"] = kinds;
    mf.config_hash = params_hash(p);
    ClassifierKnobs knobs;
    for (const std::string& kind : kinds) {
      std::printf("[all] train-classifier %s\n", kind.c_str());
      const fs::path out_file =
          root / "models" / (kind == "mlp" ? "classifier.bin" : "baseline-" + kind + ".bin");
      run_train_classifier_stage(root / "dataset", out_file,
                                 stage_seed(mf.seed, kind), kind, clf_params,
                                 kind == "mlp" ? search_budget : 0, knobs, mf);
    }
    std::printf("[all] train-cloner\n");
    run_train_cloner_stage(root / "dataset", root / "models",
                           stage_seed(seed, "train-cloner"), cloner_params,
                           cloner_max_samples, mf);
    mf.wall_time_seconds = watch.seconds();
    mf.write((root / "models" / "manifest.json").string());
  }

  std::printf("[all] evaluate\n");
  {
    Stopwatch watch;
    RunManifest mf;
    mf.command = "evaluate";
    mf.tool_version = kToolVersion;
    json p;
    p["dataset"] = (root / "dataset").string();
    mf.config_hash = params_hash(p);
    for (const std::string& kind : kinds) {
      const fs::path model_file =
          root / "models" / (kind == "mlp" ? "classifier.bin" : "baseline-" + kind + ".bin");
      run_evaluate_stage(model_file, root / "dataset" / "test.csv", root / "eval", mf);
    }
    for (int c = 0; c < kNumArchetypes; ++c) {
      const std::string name(to_string(static_cast<ArchetypeLabel>(c)));
      run_evaluate_stage(root / "models" / ("cloner-" + name + ".bin"),
                         root / "dataset" / "test_raw.csv", root / "eval", mf);
    }
    mf.wall_time_seconds = watch.seconds();
    mf.write((root / "eval" / "manifest.json").string());
  }

  RunManifest top;
  top.command = "all";
  top.tool_version = kToolVersion;
  top.seed = seed;
  top.config_hash = sha256_hex(cfg.to_json_text());
  for (const char* stage : {"run", "facts", "dataset", "models", "eval"}) {
    top.add_output(root.string(), (root / stage / "manifest.json").string());
  }
  top.wall_time_seconds = total.seconds();
  top.write((root / "manifest.json").string());
  std::printf("all: done in %.1fs -> %s\n", total.seconds(), out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lob-arena: agent-based limit order book simulator and archetype "
               "learning pipeline"};
  app.require_subcommand(1);

  // simulate
  std::string sim_scenario, sim_preset = "default", sim_out;
  int sim_days = 0;
  std::uint64_t sim_seed = 0;
  auto* sim = app.add_subcommand("simulate", "Run a multi-day market simulation");
  sim->add_option("--scenario", sim_scenario, "Scenario config JSON");
  sim->add_option("--preset", sim_preset, "Built-in preset (default|small)");
  sim->add_option("--days", sim_days, "Override day count");
  sim->add_option("--seed", sim_seed, "Master seed")->required();
  sim->add_option("--out", sim_out, "Output directory")->required();

  // stylized-facts
  std::string facts_run, facts_out;
  std::vector<std::int64_t> facts_horizons{60, 600};
  int facts_bins = 101;
  auto* facts = app.add_subcommand("stylized-facts",
                                   "Mid-price return statistics from run logs");
  facts->add_option("--run", facts_run, "Simulation output directory")->required();
  facts->add_option("--out", facts_out, "Output directory")->required();
  facts->add_option("--horizon", facts_horizons, "Return horizons in seconds");
  facts->add_option("--bins", facts_bins, "Histogram bins");

  // dataset
  std::string ds_run, ds_out;
  std::uint64_t ds_seed = 0;
  int ds_train_days = 3, ds_test_days = 2;
  auto* ds = app.add_subcommand("dataset", "Extract the classification dataset");
  ds->add_option("--run", ds_run, "Simulation output directory")->required();
  ds->add_option("--out", ds_out, "Output directory")->required();
  ds->add_option("--seed", ds_seed, "Balancing seed")->required();
  ds->add_option("--train-days", ds_train_days, "Days in the training split");
  ds->add_option("--test-days", ds_test_days, "Days in the test split");

  // train-classifier
  std::string tc_dataset, tc_out, tc_model = "mlp";
  std::uint64_t tc_seed = 0;
  learn::TrainParams tc_params;
  int tc_search = 0;
  ClassifierKnobs knobs;
  auto* tc = app.add_subcommand("train-classifier",
                                "Train the MLP classifier or a baseline");
  tc->add_option("--dataset", tc_dataset, "Dataset directory")->required();
  tc->add_option("--out", tc_out, "Output model file")->required();
  tc->add_option("--seed", tc_seed, "Training seed")->required();
  tc->add_option("--model", tc_model,
                 "mlp|knn|linear-svm|decision-tree|random-forest|adaboost|gaussian-nb");
  tc->add_option("--epochs", tc_params.epochs, "Training epochs");
  tc->add_option("--batch", tc_params.batch_size, "Mini-batch size");
  tc->add_option("--lr", tc_params.lr, "Adam learning rate");
  tc->add_option("--dropout", tc_params.dropout, "Dropout rate");
  tc->add_option("--search", tc_search, "Random-search budget (0 = off)");
  tc->add_option("--knn-k", knobs.knn_k, "KNN neighbor count");
  tc->add_option("--svm-epochs", knobs.svm_epochs, "Linear SVM epochs");
  tc->add_option("--svm-lambda", knobs.svm_lambda, "Linear SVM L2 strength");
  tc->add_option("--max-depth", knobs.max_depth, "Tree depth limit");
  tc->add_option("--n-trees", knobs.n_trees, "Forest size");
  tc->add_option("--feat-frac", knobs.feat_frac, "Forest features per split");
  tc->add_option("--n-stumps", knobs.n_stumps, "AdaBoost rounds");

  // train-cloner
  std::string cl_dataset, cl_out;
  std::uint64_t cl_seed = 0;
  learn::TrainParams cl_params;
  cl_params.epochs = 0;
  cl_params.batch_size = 32;
  cl_params.dropout = 0.0;
  std::size_t cl_max_samples = 800;
  auto* cl = app.add_subcommand("train-cloner",
                                "Train per-archetype behavioral cloning regressors");
  cl->add_option("--dataset", cl_dataset, "Dataset directory")->required();
  cl->add_option("--out", cl_out, "Output directory")->required();
  cl->add_option("--seed", cl_seed, "Training seed")->required();
  cl->add_option("--epochs", cl_params.epochs,
                 "Training epochs (0 = auto from sample count)");
  cl->add_option("--batch", cl_params.batch_size, "Mini-batch size");
  cl->add_option("--lr", cl_params.lr, "Adam learning rate");
  cl->add_option("--dropout", cl_params.dropout, "Dropout rate");
  cl->add_option("--max-samples", cl_max_samples, "Per-archetype training cap");

  // evaluate
  std::string ev_model, ev_data, ev_out;
  auto* ev = app.add_subcommand("evaluate", "Evaluate a trained model on a dataset");
  ev->add_option("--model", ev_model, "Model file")->required();
  ev->add_option("--data", ev_data, "Dataset CSV")->required();
  ev->add_option("--out", ev_out, "Output directory")->required();

  // report
  std::string rp_run, rp_out;
  std::vector<std::int64_t> rp_horizons{60, 600};
  int rp_bins = 101;
  auto* rp = app.add_subcommand("report", "Regenerate all log-derived reports");
  rp->add_option("--run", rp_run, "Simulation output directory")->required();
  rp->add_option("--out", rp_out, "Output directory")->required();
  rp->add_option("--horizon", rp_horizons, "Return horizons in seconds");
  rp->add_option("--bins", rp_bins, "Histogram bins");

  // all
  std::string all_scenario, all_preset = "default", all_out;
  int all_days = 0;
  std::uint64_t all_seed = 0;
  learn::TrainParams all_clf;
  learn::TrainParams all_cloner;
  all_cloner.epochs = 40;
  all_cloner.dropout = 0.1;
  std::size_t all_cloner_max = 800;
  int all_search = 0;
  auto* all = app.add_subcommand("all", "Run the full pipeline");
  all->add_option("--scenario", all_scenario, "Scenario config JSON");
  all->add_option("--preset", all_preset, "Built-in preset (default|small)");
  all->add_option("--days", all_days, "Override day count");
  all->add_option("--seed", all_seed, "Master seed")->required();
  all->add_option("--out", all_out, "Output directory")->required();
  all->add_option("--epochs", all_clf.epochs, "Classifier epochs");
  all->add_option("--cloner-epochs", all_cloner.epochs, "Cloner epochs");
  all->add_option("--cloner-max-samples", all_cloner_max, "Per-archetype cap");
  all->add_option("--search", all_search, "Classifier random-search budget");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      return cmd_simulate(sim_scenario, sim_preset, sim_days, sim_seed, sim_out);
    }
    if (facts->parsed()) {
      return cmd_facts(facts_run, facts_out, facts_horizons, facts_bins);
    }
    if (ds->parsed()) {
      return cmd_dataset(ds_run, ds_out, ds_seed, ds_train_days, ds_test_days);
    }
    if (tc->parsed()) {
      return cmd_train_classifier(tc_dataset, tc_out, tc_seed, tc_model, tc_params,
                                  tc_search, knobs);
    }
    if (cl->parsed()) {
      return cmd_train_cloner(cl_dataset, cl_out, cl_seed, cl_params, cl_max_samples);
    }
    if (ev->parsed()) return cmd_evaluate(ev_model, ev_data, ev_out);
    if (rp->parsed()) return cmd_report(rp_run, rp_out, rp_horizons, rp_bins);
    if (all->parsed()) {
      return cmd_all(all_scenario, all_preset, all_days, all_seed, all_out, all_clf,
                     all_cloner, all_cloner_max, all_search);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
