#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lobarena/book/types.hpp"
#include "lobarena/util/rng.hpp"
#include "lobarena/util/time.hpp"

namespace lobarena::fundamental {

// Exogenous fundamental value r_t in ticks, sampled on a time grid. Lookup
// is piecewise-constant: value_at(t) is the value at the greatest grid time
// <= t (right-continuous step function).
class FundamentalSeries {
 public:
  FundamentalSeries() = default;
  explicit FundamentalSeries(std::vector<std::pair<SimTime, Tick>> points);

  // CSV schema: time_ns,price_ticks. Strictly increasing times, prices > 0.
  static FundamentalSeries load_csv(const std::string& path);

  // Mean-reverting series on the grid session_start, session_start + dt, ...
  // extended one point past session_end so lookups cover the whole session.
  // Exact discretization, so any dt gives the same law; vol = 0 decays
  // deterministically toward the mean.
  static FundamentalSeries generate_ou(double mean_ticks,
                                       double reversion_rate_per_ns,
                                       double vol_ticks_per_sqrt_ns,
                                       SimTime dt_ns, SimTime session_start,
                                       SimTime session_end, std::uint64_t seed,
                                       double initial_ticks);

  Tick value_at(SimTime t) const;  // throws if t precedes the first point

  SimTime first_time() const { return points_.front().first; }
  SimTime last_time() const { return points_.back().first; }
  std::size_t size() const { return points_.size(); }
  const std::vector<std::pair<SimTime, Tick>>& points() const {
    return points_;
  }

  void write_csv(const std::string& path) const;

 private:
  std::vector<std::pair<SimTime, Tick>> points_;
};

struct ObservationModel {
  double sigma_n = 0.0;  // observation noise variance, ticks^2
};

// r_hat_t = r_t + N(0, sigma_n), rounded to ticks and clamped positive.
Tick observe(const FundamentalSeries& series, SimTime t,
             const ObservationModel& model, Rng& rng);

// Normalized per-bucket weights across the trading session, equal-width
// buckets. Default shape is a symmetric U over 13 half-hour buckets.
class VolumeProfile {
 public:
  explicit VolumeProfile(std::vector<double> weights);

  static VolumeProfile u_shaped(std::size_t buckets = 13);
  // CSV schema: bucket_index,weight. Weights normalized on load.
  static VolumeProfile load_csv(const std::string& path);

  std::size_t buckets() const { return weights_.size(); }
  const std::vector<double>& weights() const { return weights_; }

  // Bucket index containing t within [session_start, session_end).
  std::size_t bucket_of(SimTime t, SimTime session_start,
                        SimTime session_end) const;
  double weight_at(SimTime t, SimTime session_start, SimTime session_end) const;

  void write_csv(const std::string& path) const;

 private:
  std::vector<double> weights_;
};

}  // namespace lobarena::fundamental
