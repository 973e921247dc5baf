#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lobarena/archetype.hpp"
#include "lobarena/exchange/logs.hpp"
#include "lobarena/util/time.hpp"

namespace lobarena::dataset {

// Feature layout, one row per LIMIT/MARKET order:
//   f00..f04  ask prices, levels 1..5
//   f05..f09  ask volumes
//   f10..f14  bid prices, levels 1..5
//   f15..f19  bid volumes
//   f20       direction (+1 buy, -1 sell)
//   f21       order price (market orders: opposite touch)
//   f22       order size
constexpr int kFeatureCount = 23;
constexpr int kBookFeatureCount = 20;
constexpr int kDirectionFeature = 20;
constexpr int kPriceFeature = 21;
constexpr int kSizeFeature = 22;

struct Sample {
  std::array<double, kFeatureCount> x{};
  ArchetypeLabel label = ArchetypeLabel::Background;
  int day = 0;
  SimTime time = 0;
};

struct ExtractStats {
  std::size_t samples = 0;
  std::size_t skipped_before_first_snapshot = 0;
  std::size_t cancels_ignored = 0;
};

// One sample per LIMIT/MARKET row, joined to the latest L2 snapshot strictly
// before the order's receipt time. Orders earlier than every snapshot are
// skipped and counted. Empty book levels are imputed as (last trade price,
// zero volume); before any trade the fallback is mid, then touch, then 0.
std::vector<Sample> extract_samples(const std::vector<exchange::OrderLogRow>& orders,
                                    const std::vector<exchange::L2LogRow>& l2,
                                    int day_index, ExtractStats* stats = nullptr);

// Downsample every class to the minimum class count, uniformly without
// replacement, deterministically from the seed. Output keeps the original
// relative order. Throws naming any class with zero samples.
std::vector<Sample> balance_downsample(const std::vector<Sample>& samples,
                                       std::uint64_t seed);

std::array<std::size_t, kNumArchetypes> class_counts(const std::vector<Sample>& samples);

struct ZScoreParams {
  std::array<double, kFeatureCount> mean{};
  std::array<double, kFeatureCount> stddev{};  // population; 0 marks a dropped feature
  std::vector<int> dropped;                    // zero-variance feature indices
};

// Fit on the training split only.
ZScoreParams zscore_fit(const std::vector<Sample>& train);
// Transforms in place; dropped features become exactly 0.
void zscore_apply(const ZScoreParams& params, std::vector<Sample>& samples);
// Inverse for a single feature vector; dropped features come back as the mean.
std::array<double, kFeatureCount> zscore_invert(const ZScoreParams& params,
                                                const std::array<double, kFeatureCount>& x);

// Chronological split over distinct day indices: the first `train_days` go
// to train, the next `test_days` to test. Throws if there are fewer than
// train_days + test_days distinct days.
std::pair<std::vector<Sample>, std::vector<Sample>> split_by_day(
    const std::vector<Sample>& samples, int train_days = 3, int test_days = 2);

// CSV with header f00,...,f22,label,day,time_ns.
void write_samples_csv(const std::vector<Sample>& samples, const std::string& path);
std::vector<Sample> load_samples_csv(const std::string& path);

}  // namespace lobarena::dataset
