#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lobarena/exchange/logs.hpp"
#include "lobarena/util/time.hpp"

namespace lobarena::facts {

// Mid-price sampled on a uniform grid inside one trading session. Grid
// points before the first two-sided snapshot are dropped, so the series
// starts at `start_time` and is contiguous from there.
struct MidSeries {
  int day_index = 0;
  SimTime grid_ns = kNsPerSec;
  SimTime start_time = 0;
  std::vector<double> mid;  // price in ticks
};

// Samples the mid every `grid_ns` from `open` to `close` inclusive, carrying
// the most recent snapshot at or before each grid instant.
MidSeries resample_mid(const std::vector<exchange::L2LogRow>& l2, SimTime open,
                       SimTime close, SimTime grid_ns = kNsPerSec,
                       int day_index = 0);

struct ReturnSeries {
  SimTime horizon_ns = 0;
  std::vector<double> values;
};

// Non-overlapping log returns at the given horizon. Each session contributes
// its own returns; no return spans a session boundary. A session shorter
// than one horizon contributes nothing.
ReturnSeries log_returns(const std::vector<MidSeries>& sessions, SimTime horizon_ns);

// Sample fourth standardized moment minus 3, no bias correction.
// Requires n >= 4 and nonzero variance.
double excess_kurtosis(const std::vector<double>& xs);

struct Histogram {
  std::vector<double> edges;          // bins + 1 edges; empty for empty input
  std::vector<std::uint64_t> counts;  // one per bin
};

Histogram make_histogram(const std::vector<double>& xs, int bins);

// CSV with header bin_lo,bin_hi,count. Empty histogram -> header only.
void write_histogram_csv(const Histogram& h, const std::string& path);

// Bar chart of counts with a fitted-normal density overlay (scaled to
// expected counts), so heavy tails show up against the reference curve.
void write_histogram_svg(const std::vector<double>& xs, const Histogram& h,
                         const std::string& path, const std::string& title);

struct ReturnStats {
  SimTime horizon_ns = 0;
  std::size_t n = 0;
  double mean = 0.0;
  double stddev = 0.0;  // population
  double excess_kurtosis = 0.0;
};

ReturnStats summarize_returns(const ReturnSeries& series);

}  // namespace lobarena::facts
