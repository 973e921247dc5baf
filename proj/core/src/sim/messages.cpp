#include "lobarena/sim/messages.hpp"

namespace lobarena::sim {

std::string_view to_string(RejectReason r) {
  switch (r) {
    case RejectReason::None: return "NONE";
    case RejectReason::BadQty: return "BAD_QTY";
    case RejectReason::BadPrice: return "BAD_PRICE";
    case RejectReason::NoLiquidity: return "NO_LIQUIDITY";
    case RejectReason::MarketClosed: return "MARKET_CLOSED";
    case RejectReason::UnknownOrder: return "UNKNOWN_ORDER";
    case RejectReason::NotOwner: return "NOT_OWNER";
  }
  return "NONE";
}

namespace {

struct KindVisitor {
  std::string_view operator()(const WakeupMsg&) const { return "WAKEUP"; }
  std::string_view operator()(const LimitOrderMsg&) const { return "LIMIT_ORDER"; }
  std::string_view operator()(const MarketOrderMsg&) const { return "MARKET_ORDER"; }
  std::string_view operator()(const CancelOrderMsg&) const { return "CANCEL_ORDER"; }
  std::string_view operator()(const CancelAllMsg&) const { return "CANCEL_ALL"; }
  std::string_view operator()(const L2RequestMsg&) const { return "L2_REQUEST"; }
  std::string_view operator()(const L2ResponseMsg&) const { return "L2_RESPONSE"; }
  std::string_view operator()(const OrderAckMsg&) const { return "ORDER_ACK"; }
  std::string_view operator()(const FillMsg&) const { return "FILL"; }
  std::string_view operator()(const CancelResultMsg&) const { return "CANCEL_RESULT"; }
};

}  // namespace

std::string_view payload_kind(const Payload& p) {
  return std::visit(KindVisitor{}, p);
}

}  // namespace lobarena::sim
