#include "lobarena/learn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "lobarena/util/error.hpp"
#include "lobarena/util/svg.hpp"

namespace lobarena::learn {

EvalReport evaluate(const std::vector<int>& predictions, const std::vector<int>& truths) {
  if (predictions.empty()) throw Error("evaluate: empty input");
  if (predictions.size() != truths.size()) {
    throw Error("evaluate: ", predictions.size(), " predictions vs ", truths.size(),
                " truths");
  }
  EvalReport r;
  r.n = predictions.size();
  std::size_t correct = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const int p = predictions[i];
    const int t = truths[i];
    if (p < 0 || p >= kNumArchetypes || t < 0 || t >= kNumArchetypes) {
      throw Error("evaluate: label out of range at index ", i);
    }
    ++r.confusion[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)];
    if (p == t) ++correct;
  }
  r.accuracy = static_cast<double>(correct) / static_cast<double>(r.n);

  for (int c = 0; c < kNumArchetypes; ++c) {
    const auto k = static_cast<std::size_t>(c);
    std::size_t tp = r.confusion[k][k];
    std::size_t fp = 0;
    std::size_t fn = 0;
    for (int o = 0; o < kNumArchetypes; ++o) {
      if (o == c) continue;
      fp += r.confusion[static_cast<std::size_t>(o)][k];
      fn += r.confusion[k][static_cast<std::size_t>(o)];
    }
    ClassMetrics& m = r.per_class[k];
    if (tp + fp == 0) {
      m.precision = 0.0;
      m.precision_undefined = true;
    } else {
      m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    }
    if (tp + fn == 0) {
      m.recall = 0.0;
      m.recall_undefined = true;
    } else {
      m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    }
    if (m.precision + m.recall <= 0.0) {
      m.f1 = 0.0;
      m.f1_undefined = true;
    } else {
      m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    }
    r.macro_precision += m.precision;
    r.macro_recall += m.recall;
    r.macro_f1 += m.f1;
  }
  r.macro_precision /= kNumArchetypes;
  r.macro_recall /= kNumArchetypes;
  r.macro_f1 /= kNumArchetypes;
  return r;
}

std::string eval_report_json(const EvalReport& report, const std::string& model_name) {
  nlohmann::json j;
  j["model"] = model_name;
  j["n"] = report.n;
  j["accuracy"] = report.accuracy;
  nlohmann::json confusion = nlohmann::json::array();
  for (int t = 0; t < kNumArchetypes; ++t) {
    nlohmann::json row = nlohmann::json::array();
    for (int p = 0; p < kNumArchetypes; ++p) {
      row.push_back(report.confusion[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)]);
    }
    confusion.push_back(row);
  }
  j["confusion"] = confusion;
  nlohmann::json classes = nlohmann::json::object();
  for (int c = 0; c < kNumArchetypes; ++c) {
    const ClassMetrics& m = report.per_class[static_cast<std::size_t>(c)];
    nlohmann::json e;
    e["precision"] = m.precision;
    e["recall"] = m.recall;
    e["f1"] = m.f1;
    e["precision_undefined"] = m.precision_undefined;
    e["recall_undefined"] = m.recall_undefined;
    e["f1_undefined"] = m.f1_undefined;
    classes[std::string(to_string(static_cast<ArchetypeLabel>(c)))] = e;
  }
  j["per_class"] = classes;
  j["macro_precision"] = report.macro_precision;
  j["macro_recall"] = report.macro_recall;
  j["macro_f1"] = report.macro_f1;
  return j.dump(2) + "\n";
}

void write_eval_report_json(const EvalReport& report, const std::string& model_name,
                            const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '", path, "' for writing");
  out << eval_report_json(report, model_name);
  if (!out) throw Error("failed writing '", path, "'");
}

void write_confusion_svg(const EvalReport& report, const std::string& path,
                         const std::string& title) {
  const double cell = 90.0;
  const double ml = 150.0, mt = 70.0, mr = 30.0, mb = 90.0;
  const double width = ml + cell * kNumArchetypes + mr;
  const double height = mt + cell * kNumArchetypes + mb;
  SvgCanvas svg(width, height);
  svg.text(width / 2.0, 28.0, title, 14.0, "middle");
  svg.text(width / 2.0, 46.0, "columns: predicted, rows: true", 10.0, "middle");

  for (int t = 0; t < kNumArchetypes; ++t) {
    const auto tr = static_cast<std::size_t>(t);
    std::size_t row_total = 0;
    for (int p = 0; p < kNumArchetypes; ++p) {
      row_total += report.confusion[tr][static_cast<std::size_t>(p)];
    }
    for (int p = 0; p < kNumArchetypes; ++p) {
      const std::size_t count = report.confusion[tr][static_cast<std::size_t>(p)];
      const double frac =
          row_total == 0 ? 0.0
                         : static_cast<double>(count) / static_cast<double>(row_total);
      // White through mid blue; diagonal reads darker as recall improves.
      const int shade = static_cast<int>(255.0 - 175.0 * frac);
      char color[16];
      std::snprintf(color, sizeof(color), "#%02x%02xff", shade, shade);
      const double x = ml + cell * p;
      const double y = mt + cell * t;
      svg.rect(x, y, cell, cell, color, "#444444");
      char label[32];
      std::snprintf(label, sizeof(label), "%zu", count);
      svg.text(x + cell / 2.0, y + cell / 2.0 - 4.0, label, 12.0, "middle");
      std::snprintf(label, sizeof(label), "%.2f", frac);
      svg.text(x + cell / 2.0, y + cell / 2.0 + 14.0, label, 10.0, "middle");
    }
  }
  for (int c = 0; c < kNumArchetypes; ++c) {
    const std::string name(to_string(static_cast<ArchetypeLabel>(c)));
    svg.text(ml - 8.0, mt + cell * c + cell / 2.0 + 4.0, name, 9.0, "end");
    svg.text(ml + cell * c + cell / 2.0, mt + cell * kNumArchetypes + 18.0 + (c % 2) * 14.0,
             name, 9.0, "middle");
  }
  svg.write(path);
}

void write_comparison_histogram_svg(const std::vector<double>& truth,
                                    const std::vector<double>& predicted, int bins,
                                    const std::string& path, const std::string& title) {
  if (bins < 1) throw Error("write_comparison_histogram_svg: bins must be >= 1");
  const double width = 720.0;
  const double height = 480.0;
  const double ml = 60.0, mr = 20.0, mt = 50.0, mb = 40.0;
  const double plot_w = width - ml - mr;
  const double plot_h = height - mt - mb;

  SvgCanvas svg(width, height);
  svg.text(width / 2.0, 24.0, title, 14.0, "middle");
  svg.rect(ml + plot_w - 180.0, mt - 14.0, 12.0, 12.0, "#4a7fb5");
  svg.text(ml + plot_w - 162.0, mt - 4.0, "truth", 10.0);
  svg.line(ml + plot_w - 90.0, mt - 8.0, ml + plot_w - 78.0, mt - 8.0, "#c23b22", 2.0);
  svg.text(ml + plot_w - 72.0, mt - 4.0, "predicted", 10.0);
  svg.line(ml, mt + plot_h, ml + plot_w, mt + plot_h, "black");
  svg.line(ml, mt, ml, mt + plot_h, "black");

  if (truth.empty() && predicted.empty()) {
    svg.text(ml + plot_w / 2.0, mt + plot_h / 2.0, "no data", 12.0, "middle");
    svg.write(path);
    return;
  }

  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (const auto* series : {&truth, &predicted}) {
    for (double v : *series) {
      if (first || v < lo) lo = first ? v : std::min(lo, v);
      if (first || v > hi) hi = first ? v : std::max(hi, v);
      first = false;
    }
  }
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double bin_w = (hi - lo) / bins;
  auto fill_counts = [&](const std::vector<double>& xs) {
    std::vector<double> counts(static_cast<std::size_t>(bins), 0.0);
    for (double v : xs) {
      int b = static_cast<int>((v - lo) / bin_w);
      b = std::clamp(b, 0, bins - 1);
      counts[static_cast<std::size_t>(b)] += 1.0;
    }
    // Normalize so differently sized samples compare by shape.
    if (!xs.empty()) {
      for (double& c : counts) c /= static_cast<double>(xs.size());
    }
    return counts;
  };
  const std::vector<double> ct = fill_counts(truth);
  const std::vector<double> cp = fill_counts(predicted);
  double peak = 1e-12;
  for (double c : ct) peak = std::max(peak, c);
  for (double c : cp) peak = std::max(peak, c);

  auto x_of = [&](double v) { return ml + (v - lo) / (hi - lo) * plot_w; };
  auto y_of = [&](double c) { return mt + plot_h * (1.0 - c / peak); };
  for (int b = 0; b < bins; ++b) {
    const double x0 = x_of(lo + bin_w * b);
    const double x1 = x_of(lo + bin_w * (b + 1));
    const double y = y_of(ct[static_cast<std::size_t>(b)]);
    svg.rect(x0, y, x1 - x0, mt + plot_h - y, "#4a7fb5");
  }
  std::vector<std::pair<double, double>> steps;
  for (int b = 0; b < bins; ++b) {
    const double y = y_of(cp[static_cast<std::size_t>(b)]);
    steps.emplace_back(x_of(lo + bin_w * b), y);
    steps.emplace_back(x_of(lo + bin_w * (b + 1)), y);
  }
  svg.polyline(steps, "#c23b22", 1.5);

  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", lo);
  svg.text(ml, mt + plot_h + 16.0, buf, 10.0, "middle");
  std::snprintf(buf, sizeof(buf), "%.3g", hi);
  svg.text(ml + plot_w, mt + plot_h + 16.0, buf, 10.0, "middle");
  svg.write(path);
}

double ks_statistic(std::vector<double> xs, std::vector<double> ys) {
  if (xs.empty() || ys.empty()) throw Error("ks_statistic: empty sample");
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  const double nx = static_cast<double>(xs.size());
  const double ny = static_cast<double>(ys.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < xs.size() && j < ys.size()) {
    const double v = std::min(xs[i], ys[j]);
    while (i < xs.size() && xs[i] <= v) ++i;
    while (j < ys.size() && ys[j] <= v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return d;
}

}  // namespace lobarena::learn
