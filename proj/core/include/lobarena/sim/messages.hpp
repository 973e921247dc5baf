#pragma once

#include <cstdint>
#include <string_view>
#include <variant>

#include "lobarena/book/types.hpp"
#include "lobarena/util/time.hpp"

namespace lobarena::sim {

// Self-addressed timer tick. `tag` lets an agent multiplex timers.
struct WakeupMsg {
  std::uint64_t tag = 0;
};

struct LimitOrderMsg {
  Side side = Side::Buy;
  Tick price = 0;
  Qty qty = 0;
};

struct MarketOrderMsg {
  Side side = Side::Buy;
  Qty qty = 0;
};

struct CancelOrderMsg {
  OrderId order_id = 0;
};

struct CancelAllMsg {};

struct L2RequestMsg {
  int depth = L2Snapshot::kDepth;
};

struct L2ResponseMsg {
  L2Snapshot snapshot;
};

enum class RejectReason : std::uint8_t {
  None = 0,
  BadQty,
  BadPrice,
  NoLiquidity,
  MarketClosed,
  UnknownOrder,
  NotOwner,
};

std::string_view to_string(RejectReason r);

// Acknowledges limit/market order receipt. For limit orders `order_id` is the
// exchange-assigned id; `resting_qty` is what remained on the book after the
// immediate match (0 if fully filled or rejected).
struct OrderAckMsg {
  OrderId order_id = 0;
  bool accepted = false;
  RejectReason reason = RejectReason::None;
  Qty resting_qty = 0;
};

struct FillMsg {
  OrderId order_id = 0;
  Side side = Side::Buy;
  Tick price = 0;
  Qty qty = 0;
  Qty remaining = 0;
  bool was_aggressor = false;
};

// Response to CancelOrderMsg / CancelAllMsg: how much open quantity was
// removed from the book.
struct CancelResultMsg {
  OrderId order_id = 0;  // 0 for cancel-all
  std::uint32_t cancelled_orders = 0;
  Qty cancelled_qty = 0;
};

using Payload =
    std::variant<WakeupMsg, LimitOrderMsg, MarketOrderMsg, CancelOrderMsg,
                 CancelAllMsg, L2RequestMsg, L2ResponseMsg, OrderAckMsg,
                 FillMsg, CancelResultMsg>;

std::string_view payload_kind(const Payload& p);

struct Envelope {
  SimTime deliver_at = 0;
  std::uint64_t seq = 0;  // kernel-assigned, breaks deliver_at ties
  AgentId sender = 0;
  AgentId recipient = 0;
  Payload payload;
};

}  // namespace lobarena::sim
