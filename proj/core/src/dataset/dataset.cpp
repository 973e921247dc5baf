#include "lobarena/dataset/dataset.hpp"

#include <algorithm>
#include <cmath>

#include "lobarena/util/csv.hpp"
#include "lobarena/util/error.hpp"
#include "lobarena/util/rng.hpp"

namespace lobarena::dataset {
namespace {

// Price stand-in for empty book levels: last trade, then mid, then the one
// live touch, then 0. Keeps absent levels from injecting zero prices.
double imputed_price(const exchange::L2LogRow& row) {
  if (row.last_trade_px > 0) return static_cast<double>(row.last_trade_px);
  const L2Snapshot& s = row.snap;
  if (s.has_bid() && s.has_ask()) {
    return (static_cast<double>(s.bid_price[0]) + static_cast<double>(s.ask_price[0])) /
           2.0;
  }
  if (s.has_bid()) return static_cast<double>(s.bid_price[0]);
  if (s.has_ask()) return static_cast<double>(s.ask_price[0]);
  return 0.0;
}

std::array<std::string, kFeatureCount> feature_names() {
  std::array<std::string, kFeatureCount> names;
  for (int i = 0; i < kFeatureCount; ++i) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "f%02d", i);
    names[static_cast<std::size_t>(i)] = buf;
  }
  return names;
}

}  // namespace

std::vector<Sample> extract_samples(const std::vector<exchange::OrderLogRow>& orders,
                                    const std::vector<exchange::L2LogRow>& l2,
                                    int day_index, ExtractStats* stats) {
  std::vector<Sample> out;
  ExtractStats local;
  std::size_t j = 0;  // first snapshot with time >= current order time
  for (const exchange::OrderLogRow& order : orders) {
    if (order.action == exchange::OrderAction::Cancel) {
      ++local.cancels_ignored;
      continue;
    }
    while (j < l2.size() && l2[j].snap.time < order.time) ++j;
    if (j == 0) {
      ++local.skipped_before_first_snapshot;
      continue;
    }
    const exchange::L2LogRow& row = l2[j - 1];
    const L2Snapshot& snap = row.snap;
    const double fallback = imputed_price(row);

    Sample s;
    for (int lvl = 0; lvl < L2Snapshot::kDepth; ++lvl) {
      const auto k = static_cast<std::size_t>(lvl);
      const bool has_ask = snap.ask_volume[k] > 0;
      const bool has_bid = snap.bid_volume[k] > 0;
      s.x[k] = has_ask ? static_cast<double>(snap.ask_price[k]) : fallback;
      s.x[k + 5] = static_cast<double>(snap.ask_volume[k]);
      s.x[k + 10] = has_bid ? static_cast<double>(snap.bid_price[k]) : fallback;
      s.x[k + 15] = static_cast<double>(snap.bid_volume[k]);
    }
    s.x[kDirectionFeature] = order.side == Side::Buy ? 1.0 : -1.0;
    if (order.action == exchange::OrderAction::Limit) {
      s.x[kPriceFeature] = static_cast<double>(order.price);
    } else if (order.side == Side::Buy) {
      s.x[kPriceFeature] =
          snap.has_ask() ? static_cast<double>(snap.ask_price[0]) : fallback;
    } else {
      s.x[kPriceFeature] =
          snap.has_bid() ? static_cast<double>(snap.bid_price[0]) : fallback;
    }
    s.x[kSizeFeature] = static_cast<double>(order.qty);
    s.label = order.archetype;
    s.day = day_index;
    s.time = order.time;
    out.push_back(s);
  }
  local.samples = out.size();
  if (stats) *stats = local;
  return out;
}

std::array<std::size_t, kNumArchetypes> class_counts(const std::vector<Sample>& samples) {
  std::array<std::size_t, kNumArchetypes> counts{};
  for (const Sample& s : samples) {
    ++counts[static_cast<std::size_t>(s.label)];
  }
  return counts;
}

std::vector<Sample> balance_downsample(const std::vector<Sample>& samples,
                                       std::uint64_t seed) {
  const auto counts = class_counts(samples);
  std::size_t min_count = 0;
  bool first = true;
  for (int c = 0; c < kNumArchetypes; ++c) {
    const std::size_t n = counts[static_cast<std::size_t>(c)];
    if (n == 0) {
      throw Error("balance_downsample: class ",
                  to_string(static_cast<ArchetypeLabel>(c)), " has no samples");
    }
    if (first || n < min_count) min_count = n;
    first = false;
  }

  std::vector<char> keep(samples.size(), 0);
  Rng rng(seed);
  for (int c = 0; c < kNumArchetypes; ++c) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      if (static_cast<int>(samples[i].label) == c) idx.push_back(i);
    }
    // Partial Fisher-Yates: the first min_count slots are a uniform draw
    // without replacement.
    for (std::size_t i = 0; i < min_count; ++i) {
      std::size_t j = i + static_cast<std::size_t>(rng.uniform_int(
                              0, static_cast<std::int64_t>(idx.size() - 1 - i)));
      std::swap(idx[i], idx[j]);
      keep[idx[i]] = 1;
    }
  }

  std::vector<Sample> out;
  out.reserve(min_count * kNumArchetypes);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (keep[i]) out.push_back(samples[i]);
  }
  return out;
}

ZScoreParams zscore_fit(const std::vector<Sample>& train) {
  if (train.empty()) throw Error("zscore_fit: empty training set");
  ZScoreParams p;
  const double n = static_cast<double>(train.size());
  for (int f = 0; f < kFeatureCount; ++f) {
    const auto k = static_cast<std::size_t>(f);
    double mean = 0.0;
    for (const Sample& s : train) mean += s.x[k];
    mean /= n;
    double var = 0.0;
    for (const Sample& s : train) {
      double d = s.x[k] - mean;
      var += d * d;
    }
    var /= n;  // population variance
    p.mean[k] = mean;
    if (var > 0.0) {
      p.stddev[k] = std::sqrt(var);
    } else {
      p.stddev[k] = 0.0;
      p.dropped.push_back(f);
    }
  }
  return p;
}

void zscore_apply(const ZScoreParams& params, std::vector<Sample>& samples) {
  for (Sample& s : samples) {
    for (int f = 0; f < kFeatureCount; ++f) {
      const auto k = static_cast<std::size_t>(f);
      s.x[k] = params.stddev[k] > 0.0 ? (s.x[k] - params.mean[k]) / params.stddev[k]
                                      : 0.0;
    }
  }
}

std::array<double, kFeatureCount> zscore_invert(const ZScoreParams& params,
                                                const std::array<double, kFeatureCount>& x) {
  std::array<double, kFeatureCount> out{};
  for (int f = 0; f < kFeatureCount; ++f) {
    const auto k = static_cast<std::size_t>(f);
    out[k] = params.stddev[k] > 0.0 ? x[k] * params.stddev[k] + params.mean[k]
                                    : params.mean[k];
  }
  return out;
}

std::pair<std::vector<Sample>, std::vector<Sample>> split_by_day(
    const std::vector<Sample>& samples, int train_days, int test_days) {
  if (train_days < 1 || test_days < 1) {
    throw Error("split_by_day: day counts must be positive");
  }
  std::vector<int> days;
  for (const Sample& s : samples) days.push_back(s.day);
  std::sort(days.begin(), days.end());
  days.erase(std::unique(days.begin(), days.end()), days.end());
  const std::size_t need = static_cast<std::size_t>(train_days + test_days);
  if (days.size() < need) {
    throw Error("split_by_day: need at least ", need, " distinct days, got ",
                days.size());
  }
  const int first_test_day = days[static_cast<std::size_t>(train_days)];
  const int first_excluded_day =
      days.size() > need ? days[need] : days.back() + 1;

  std::vector<Sample> train, test;
  for (const Sample& s : samples) {
    if (s.day < first_test_day) {
      train.push_back(s);
    } else if (s.day < first_excluded_day) {
      test.push_back(s);
    }
  }
  return {std::move(train), std::move(test)};
}

void write_samples_csv(const std::vector<Sample>& samples, const std::string& path) {
  CsvWriter out(path);
  std::vector<std::string> cols;
  cols.reserve(kFeatureCount + 3);
  for (const auto& n : feature_names()) cols.push_back(n);
  cols.emplace_back("label");
  cols.emplace_back("day");
  cols.emplace_back("time_ns");
  out.header(cols);
  for (const Sample& s : samples) {
    out.row(s.x[0], s.x[1], s.x[2], s.x[3], s.x[4], s.x[5], s.x[6], s.x[7], s.x[8],
            s.x[9], s.x[10], s.x[11], s.x[12], s.x[13], s.x[14], s.x[15], s.x[16],
            s.x[17], s.x[18], s.x[19], s.x[20], s.x[21], s.x[22],
            to_string(s.label), s.day, s.time);
  }
  out.flush();
}

std::vector<Sample> load_samples_csv(const std::string& path) {
  std::string header;
  {
    const auto names = feature_names();
    for (const auto& n : names) {
      header += n;
      header += ',';
    }
    header += "label,day,time_ns";
  }
  CsvReader in(path, header);
  std::vector<Sample> out;
  while (in.next()) {
    Sample s;
    for (int f = 0; f < kFeatureCount; ++f) {
      s.x[static_cast<std::size_t>(f)] = in.double_field(static_cast<std::size_t>(f));
    }
    auto label = archetype_from_string(in.str_field(kFeatureCount));
    if (!label) {
      throw Error(path, ":", in.row_number(), ": unknown label '",
                  in.str_field(kFeatureCount), "'");
    }
    s.label = *label;
    s.day = static_cast<int>(in.int_field(kFeatureCount + 1));
    s.time = in.uint_field(kFeatureCount + 2);
    out.push_back(s);
  }
  return out;
}

}  // namespace lobarena::dataset
