#include "lobarena/book/types.hpp"

namespace lobarena {

std::optional<Side> side_from_string(std::string_view s) {
  if (s == "BUY") return Side::Buy;
  if (s == "SELL") return Side::Sell;
  return std::nullopt;
}

std::optional<Tick> L2Snapshot::mid() const {
  if (!has_bid() || !has_ask()) return std::nullopt;
  return mid_tick(bid_price[0], ask_price[0]);
}

std::optional<Tick> L2Snapshot::spread() const {
  if (!has_bid() || !has_ask()) return std::nullopt;
  return ask_price[0] - bid_price[0];
}

}  // namespace lobarena
