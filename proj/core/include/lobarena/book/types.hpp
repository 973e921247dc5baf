#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string_view>

#include "lobarena/util/time.hpp"

namespace lobarena {

/// Price in integer ticks (one tick = $0.01). All matching and agent
/// arithmetic is integral; there is no floating point in the book.
using Tick = std::int64_t;
using Qty = std::int64_t;
using OrderId = std::uint64_t;

enum class Side : std::uint8_t { Buy, Sell };

inline Side opposite(Side s) { return s == Side::Buy ? Side::Sell : Side::Buy; }

inline std::string_view to_string(Side s) { return s == Side::Buy ? "BUY" : "SELL"; }

std::optional<Side> side_from_string(std::string_view s);

/// Rounds half away from zero to an integer tick.
inline Tick round_to_tick(double v) {
  return static_cast<Tick>(v >= 0 ? std::floor(v + 0.5) : std::ceil(v - 0.5));
}

/// Midpoint of two tick prices, rounded half away from zero.
inline Tick mid_tick(Tick bid, Tick ask) {
  Tick sum = bid + ask;
  // sum % 2 is +1/-1 for odd sums, so halves round away from zero.
  return (sum + sum % 2) / 2;
}

struct Trade {
  SimTime time = 0;
  Tick price = 0;
  Qty qty = 0;
  AgentId buy_agent = 0;
  AgentId sell_agent = 0;
  Side aggressor = Side::Buy;
  OrderId maker_order = 0;       ///< resting order hit
  OrderId taker_order = 0;       ///< incoming order
  Qty maker_remaining = 0;       ///< maker's open qty after this fill
};

/// Top-of-book depth snapshot. Absent levels carry the 0-tick price sentinel
/// and zero volume; downstream consumers impute them.
struct L2Snapshot {
  static constexpr int kDepth = 5;

  SimTime time = 0;
  std::array<Tick, kDepth> bid_price{};   // strictly descending over present levels
  std::array<Qty, kDepth> bid_volume{};
  std::array<Tick, kDepth> ask_price{};   // strictly ascending over present levels
  std::array<Qty, kDepth> ask_volume{};

  bool has_bid() const { return bid_volume[0] > 0; }
  bool has_ask() const { return ask_volume[0] > 0; }
  std::optional<Tick> best_bid() const {
    return has_bid() ? std::optional<Tick>(bid_price[0]) : std::nullopt;
  }
  std::optional<Tick> best_ask() const {
    return has_ask() ? std::optional<Tick>(ask_price[0]) : std::nullopt;
  }
  /// m_t = (a_t + b_t) / 2, rounded half away from zero; absent if one-sided.
  std::optional<Tick> mid() const;
  /// s_t = a_t - b_t; absent if one-sided.
  std::optional<Tick> spread() const;
};

}  // namespace lobarena
