#include "lobarena/facts/stylized.hpp"

#include <algorithm>
#include <cmath>

#include "lobarena/util/csv.hpp"
#include "lobarena/util/error.hpp"
#include "lobarena/util/svg.hpp"

namespace lobarena::facts {

MidSeries resample_mid(const std::vector<exchange::L2LogRow>& l2, SimTime open,
                       SimTime close, SimTime grid_ns, int day_index) {
  if (grid_ns == 0) throw Error("resample_mid: grid must be positive");
  if (close < open) throw Error("resample_mid: close before open");
  MidSeries out;
  out.day_index = day_index;
  out.grid_ns = grid_ns;

  std::size_t i = 0;
  bool have_mid = false;
  double last_mid = 0.0;
  for (SimTime t = open; t <= close; t += grid_ns) {
    while (i < l2.size() && l2[i].snap.time <= t) {
      const L2Snapshot& s = l2[i].snap;
      if (s.has_bid() && s.has_ask()) {
        last_mid = (static_cast<double>(s.bid_price[0]) +
                    static_cast<double>(s.ask_price[0])) /
                   2.0;
        have_mid = true;
      }
      ++i;
    }
    if (!have_mid) continue;  // before the first two-sided snapshot
    if (out.mid.empty()) out.start_time = t;
    out.mid.push_back(last_mid);
  }
  return out;
}

ReturnSeries log_returns(const std::vector<MidSeries>& sessions, SimTime horizon_ns) {
  if (horizon_ns == 0) throw Error("log_returns: horizon must be positive");
  ReturnSeries out;
  out.horizon_ns = horizon_ns;
  for (const MidSeries& s : sessions) {
    if (s.grid_ns == 0 || s.grid_ns > horizon_ns) {
      throw Error("log_returns: sampling grid exceeds horizon");
    }
    if (horizon_ns % s.grid_ns != 0) {
      throw Error("log_returns: horizon must be a multiple of the sampling grid");
    }
    const std::size_t step = horizon_ns / s.grid_ns;
    if (s.mid.size() <= step) continue;  // session shorter than one horizon
    for (std::size_t k = 0; k + step < s.mid.size(); k += step) {
      double p0 = s.mid[k];
      double p1 = s.mid[k + step];
      if (p0 <= 0.0 || p1 <= 0.0) {
        throw Error("log_returns: non-positive mid price");
      }
      out.values.push_back(std::log(p1 / p0));
    }
  }
  return out;
}

double excess_kurtosis(const std::vector<double>& xs) {
  const std::size_t n = xs.size();
  if (n < 4) throw Error("excess_kurtosis: need at least 4 values, got ", n);
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(n);
  double m2 = 0.0;
  double m4 = 0.0;
  for (double x : xs) {
    double d = x - mean;
    double d2 = d * d;
    m2 += d2;
    m4 += d2 * d2;
  }
  m2 /= static_cast<double>(n);
  m4 /= static_cast<double>(n);
  if (m2 <= 0.0) throw Error("excess_kurtosis: zero variance");
  return m4 / (m2 * m2) - 3.0;
}

Histogram make_histogram(const std::vector<double>& xs, int bins) {
  if (bins < 1) throw Error("make_histogram: bins must be >= 1, got ", bins);
  Histogram h;
  if (xs.empty()) return h;
  double lo = *std::min_element(xs.begin(), xs.end());
  double hi = *std::max_element(xs.begin(), xs.end());
  if (!(std::isfinite(lo) && std::isfinite(hi))) {
    throw Error("make_histogram: non-finite input");
  }
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = (hi - lo) / bins;
  h.edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int b = 0; b <= bins; ++b) {
    h.edges[static_cast<std::size_t>(b)] = lo + width * b;
  }
  h.edges.back() = hi;  // avoid drift on the last edge
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (double x : xs) {
    int b = static_cast<int>((x - lo) / width);
    b = std::clamp(b, 0, bins - 1);
    ++h.counts[static_cast<std::size_t>(b)];
  }
  return h;
}

void write_histogram_csv(const Histogram& h, const std::string& path) {
  CsvWriter out(path);
  out.header({"bin_lo", "bin_hi", "count"});
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    out.row(h.edges[b], h.edges[b + 1], h.counts[b]);
  }
  out.flush();
}

void write_histogram_svg(const std::vector<double>& xs, const Histogram& h,
                         const std::string& path, const std::string& title) {
  const double width = 720.0;
  const double height = 480.0;
  const double ml = 60.0, mr = 20.0, mt = 40.0, mb = 40.0;
  const double plot_w = width - ml - mr;
  const double plot_h = height - mt - mb;

  SvgCanvas svg(width, height);
  svg.text(width / 2.0, mt - 16.0, title, 14.0, "middle");
  svg.line(ml, mt + plot_h, ml + plot_w, mt + plot_h, "black");
  svg.line(ml, mt, ml, mt + plot_h, "black");

  if (h.counts.empty()) {
    svg.text(ml + plot_w / 2.0, mt + plot_h / 2.0, "no data", 12.0, "middle");
    svg.write(path);
    return;
  }

  std::uint64_t max_count = 1;
  std::uint64_t total = 0;
  for (std::uint64_t c : h.counts) {
    max_count = std::max(max_count, c);
    total += c;
  }
  const double lo = h.edges.front();
  const double hi = h.edges.back();
  const double span = hi - lo;
  auto x_of = [&](double v) { return ml + (v - lo) / span * plot_w; };
  auto y_of = [&](double c) { return mt + plot_h * (1.0 - c / static_cast<double>(max_count)); };

  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    double x0 = x_of(h.edges[b]);
    double x1 = x_of(h.edges[b + 1]);
    double y = y_of(static_cast<double>(h.counts[b]));
    svg.rect(x0, y, x1 - x0, mt + plot_h - y, "#4a7fb5", "#1f3a57");
  }

  // Normal reference with the sample's mean and std, scaled to expected
  // counts per bin, drawn over the bars.
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= static_cast<double>(xs.size());
  if (var > 0.0 && xs.size() >= 2) {
    const double sd = std::sqrt(var);
    const double bin_w = span / static_cast<double>(h.counts.size());
    std::vector<std::pair<double, double>> pts;
    const int steps = 128;
    for (int i = 0; i <= steps; ++i) {
      double v = lo + span * i / steps;
      double z = (v - mean) / sd;
      double density = std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * M_PI));
      double expected = density * static_cast<double>(total) * bin_w;
      pts.emplace_back(x_of(v), y_of(std::min(expected, static_cast<double>(max_count))));
    }
    svg.polyline(pts, "#c23b22", 1.5);
  }

  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", lo);
  svg.text(ml, mt + plot_h + 16.0, buf, 10.0, "middle");
  std::snprintf(buf, sizeof(buf), "%.3g", hi);
  svg.text(ml + plot_w, mt + plot_h + 16.0, buf, 10.0, "middle");
  std::snprintf(buf, sizeof(buf), "%llu", static_cast<unsigned long long>(max_count));
  svg.text(ml - 6.0, mt + 10.0, buf, 10.0, "end");
  svg.text(ml - 6.0, mt + plot_h, "0", 10.0, "end");
  svg.write(path);
}

ReturnStats summarize_returns(const ReturnSeries& series) {
  ReturnStats st;
  st.horizon_ns = series.horizon_ns;
  st.n = series.values.size();
  if (st.n < 4) {
    throw Error("summarize_returns: need at least 4 returns, got ", st.n);
  }
  double mean = 0.0;
  for (double v : series.values) mean += v;
  mean /= static_cast<double>(st.n);
  double var = 0.0;
  for (double v : series.values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(st.n);
  st.mean = mean;
  st.stddev = std::sqrt(var);
  st.excess_kurtosis = excess_kurtosis(series.values);
  return st;
}

}  // namespace lobarena::facts
