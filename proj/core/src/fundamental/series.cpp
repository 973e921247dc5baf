#include "lobarena/fundamental/series.hpp"

#include <algorithm>
#include <cmath>

#include "lobarena/util/csv.hpp"
#include "lobarena/util/error.hpp"

namespace lobarena::fundamental {

FundamentalSeries::FundamentalSeries(
    std::vector<std::pair<SimTime, Tick>> points)
    : points_(std::move(points)) {
  if (points_.empty()) throw Error("fundamental series is empty");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].second <= 0)
      throw Error("fundamental value not positive at index ", i, ": ",
                  points_[i].second);
    if (i > 0 && points_[i].first <= points_[i - 1].first)
      throw Error("fundamental timestamps not strictly increasing at index ",
                  i);
  }
}

FundamentalSeries FundamentalSeries::load_csv(const std::string& path) {
  CsvReader reader(path, "time_ns,price_ticks");
  std::vector<std::pair<SimTime, Tick>> points;
  while (reader.next()) {
    SimTime t = reader.uint_field(0);
    Tick px = reader.int_field(1);
    if (px <= 0)
      throw Error(path, ":", reader.row_number(),
                  ": price_ticks must be positive, got ", px);
    if (!points.empty() && t <= points.back().first)
      throw Error(path, ":", reader.row_number(),
                  ": time_ns not strictly increasing");
    points.emplace_back(t, px);
  }
  if (points.empty()) throw Error(path, ": no fundamental rows");
  return FundamentalSeries(std::move(points));
}

FundamentalSeries FundamentalSeries::generate_ou(
    double mean_ticks, double reversion_rate_per_ns,
    double vol_ticks_per_sqrt_ns, SimTime dt_ns, SimTime session_start,
    SimTime session_end, std::uint64_t seed, double initial_ticks) {
  if (dt_ns == 0) throw Error("generate_ou: dt must be positive");
  if (reversion_rate_per_ns < 0 || vol_ticks_per_sqrt_ns < 0)
    throw Error("generate_ou: negative rate or vol");
  if (session_end < session_start)
    throw Error("generate_ou: session end before start");
  Rng rng(seed);
  double dt = static_cast<double>(dt_ns);
  double theta = reversion_rate_per_ns;
  // Exact transition: decay plus stationary-consistent shock scale. The
  // theta -> 0 limit is sqrt(dt) diffusion.
  double decay = std::exp(-theta * dt);
  double shock_var = theta > 0
                         ? (1.0 - decay * decay) / (2.0 * theta)
                         : dt;
  double shock_std = vol_ticks_per_sqrt_ns * std::sqrt(shock_var);
  std::vector<std::pair<SimTime, Tick>> points;
  double x = initial_ticks;
  SimTime t = session_start;
  while (true) {
    Tick px = std::max<Tick>(1, round_to_tick(x));
    points.emplace_back(t, px);
    if (t >= session_end) break;
    x = mean_ticks + (x - mean_ticks) * decay + shock_std * rng.normal();
    t += dt_ns;
  }
  return FundamentalSeries(std::move(points));
}

Tick FundamentalSeries::value_at(SimTime t) const {
  if (t < points_.front().first)
    throw Error("fundamental lookup at ", t, " precedes series start ",
                points_.front().first);
  auto it = std::upper_bound(
      points_.begin(), points_.end(), t,
      [](SimTime v, const std::pair<SimTime, Tick>& p) { return v < p.first; });
  return std::prev(it)->second;
}

void FundamentalSeries::write_csv(const std::string& path) const {
  CsvWriter w(path);
  w.header({"time_ns", "price_ticks"});
  for (const auto& [t, px] : points_) w.row(t, px);
}

Tick observe(const FundamentalSeries& series, SimTime t,
             const ObservationModel& model, Rng& rng) {
  double value = static_cast<double>(series.value_at(t));
  if (model.sigma_n > 0) value += std::sqrt(model.sigma_n) * rng.normal();
  return std::max<Tick>(1, round_to_tick(value));
}

VolumeProfile::VolumeProfile(std::vector<double> weights)
    : weights_(std::move(weights)) {
  if (weights_.empty()) throw Error("volume profile has no buckets");
  double sum = 0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!(weights_[i] >= 0))
      throw Error("volume profile weight negative at bucket ", i);
    sum += weights_[i];
  }
  if (sum <= 0) throw Error("volume profile weights sum to zero");
  for (double& w : weights_) w /= sum;
}

VolumeProfile VolumeProfile::u_shaped(std::size_t buckets) {
  if (buckets < 2) throw Error("u_shaped profile needs >= 2 buckets");
  std::vector<double> w(buckets);
  double c = (static_cast<double>(buckets) - 1.0) / 2.0;
  for (std::size_t i = 0; i < buckets; ++i) {
    double z = (static_cast<double>(i) - c) / c;  // -1 .. 1
    w[i] = 1.0 + 2.0 * z * z;                     // ends 3x the middle
  }
  return VolumeProfile(std::move(w));
}

VolumeProfile VolumeProfile::load_csv(const std::string& path) {
  CsvReader reader(path, "bucket_index,weight");
  std::vector<double> w;
  while (reader.next()) {
    std::size_t idx = reader.uint_field(0);
    if (idx != w.size())
      throw Error(path, ":", reader.row_number(), ": bucket_index ", idx,
                  " out of order, expected ", w.size());
    w.push_back(reader.double_field(1));
  }
  return VolumeProfile(std::move(w));
}

std::size_t VolumeProfile::bucket_of(SimTime t, SimTime session_start,
                                     SimTime session_end) const {
  if (session_end <= session_start)
    throw Error("volume profile session end before start");
  if (t < session_start) return 0;
  if (t >= session_end) return weights_.size() - 1;
  double frac = static_cast<double>(t - session_start) /
                static_cast<double>(session_end - session_start);
  auto idx = static_cast<std::size_t>(frac * static_cast<double>(weights_.size()));
  return std::min(idx, weights_.size() - 1);
}

double VolumeProfile::weight_at(SimTime t, SimTime session_start,
                                SimTime session_end) const {
  return weights_[bucket_of(t, session_start, session_end)];
}

void VolumeProfile::write_csv(const std::string& path) const {
  CsvWriter w(path);
  w.header({"bucket_index", "weight"});
  for (std::size_t i = 0; i < weights_.size(); ++i)
    w.row(static_cast<std::uint64_t>(i), weights_[i]);
}

}  // namespace lobarena::fundamental
