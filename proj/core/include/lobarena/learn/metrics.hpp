#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "lobarena/archetype.hpp"

namespace lobarena::learn {

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  // Zero-denominator cases are reported as 0 with the flag set, never NaN.
  bool precision_undefined = false;
  bool recall_undefined = false;
  bool f1_undefined = false;
};

struct EvalReport {
  std::size_t n = 0;
  // confusion[truth][predicted]
  std::array<std::array<std::size_t, kNumArchetypes>, kNumArchetypes> confusion{};
  std::array<ClassMetrics, kNumArchetypes> per_class{};
  double accuracy = 0.0;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
};

// Labels are archetype indices in [0, kNumArchetypes). Throws on empty or
// mismatched inputs.
EvalReport evaluate(const std::vector<int>& predictions, const std::vector<int>& truths);

std::string eval_report_json(const EvalReport& report, const std::string& model_name);
void write_eval_report_json(const EvalReport& report, const std::string& model_name,
                            const std::string& path);
void write_confusion_svg(const EvalReport& report, const std::string& path,
                         const std::string& title);

// Two-sample Kolmogorov-Smirnov sup-distance between empirical CDFs.
double ks_statistic(std::vector<double> xs, std::vector<double> ys);

// Overlaid histograms (shared bins) of ground truth vs model output; used
// for the per-archetype cloning reports.
void write_comparison_histogram_svg(const std::vector<double>& truth,
                                    const std::vector<double>& predicted, int bins,
                                    const std::string& path, const std::string& title);

}  // namespace lobarena::learn
