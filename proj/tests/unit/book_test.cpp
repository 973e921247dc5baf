#include <doctest.h>

#include <string>

#include "lobarena/book/order_book.hpp"
#include "lobarena/book/types.hpp"
#include "support/replay.hpp"

using namespace lobarena;

TEST_CASE("tick rounding is half away from zero") {
  CHECK(round_to_tick(2.4) == 2);
  CHECK(round_to_tick(2.5) == 3);
  CHECK(round_to_tick(-2.5) == -3);
  CHECK(round_to_tick(-2.4) == -2);
  CHECK(round_to_tick(0.0) == 0);

  CHECK(mid_tick(100, 104) == 102);
  CHECK(mid_tick(100, 105) == 103);  // 102.5 rounds up
  CHECK(mid_tick(1, 2) == 2);
  CHECK(mid_tick(-4, -3) == -4);     // -3.5 rounds away from zero
}

TEST_CASE("limit orders rest and set the touch") {
  OrderBook book;
  auto b = book.submit_limit(1, Side::Buy, 100, 10, 0);
  CHECK(b.accepted);
  CHECK(b.order_id == 1);
  CHECK(b.resting_qty == 10);
  CHECK(b.trades.empty());
  auto a = book.submit_limit(2, Side::Sell, 103, 5, 1);
  CHECK(a.order_id == 2);
  CHECK(book.best_bid() == Tick{100});
  CHECK(book.best_ask() == Tick{103});
  CHECK(book.open_order_count() == 2);

  auto info = book.find(1);
  REQUIRE(info.has_value());
  CHECK(info->agent == 1);
  CHECK(info->side == Side::Buy);
  CHECK(info->price == 100);
  CHECK(info->open_qty == 10);
  CHECK(book.open_qty(99) == 0);
}

TEST_CASE("crossing limit trades at the resting price") {
  OrderBook book;
  book.submit_limit(1, Side::Sell, 101, 8, 0);
  auto res = book.submit_limit(2, Side::Buy, 105, 3, 7);
  REQUIRE(res.trades.size() == 1);
  const Trade& t = res.trades[0];
  CHECK(t.price == 101);  // maker's price, not the aggressive limit
  CHECK(t.qty == 3);
  CHECK(t.time == 7);
  CHECK(t.buy_agent == 2);
  CHECK(t.sell_agent == 1);
  CHECK(t.aggressor == Side::Buy);
  CHECK(t.maker_order == 1);
  CHECK(t.taker_order == 2);
  CHECK(t.maker_remaining == 5);
  CHECK(res.resting_qty == 0);
  CHECK(book.open_qty(1) == 5);
}

TEST_CASE("crossing limit rests its remainder at the limit") {
  OrderBook book;
  book.submit_limit(1, Side::Sell, 101, 4, 0);
  book.submit_limit(1, Side::Sell, 102, 4, 0);
  book.submit_limit(1, Side::Sell, 110, 4, 0);
  auto res = book.submit_limit(2, Side::Buy, 102, 20, 1);
  REQUIRE(res.trades.size() == 2);
  CHECK(res.trades[0].price == 101);
  CHECK(res.trades[1].price == 102);
  CHECK(res.resting_qty == 12);  // stops at the 110 ask, rests at 102
  CHECK(book.best_bid() == Tick{102});
  CHECK(book.best_ask() == Tick{110});
}

TEST_CASE("price beats time beats nothing else across levels") {
  OrderBook book;
  book.submit_limit(1, Side::Buy, 99, 5, 0);   // id 1
  book.submit_limit(2, Side::Buy, 100, 5, 1);  // id 2, better price, later
  auto res = book.submit_market(3, Side::Sell, 7, 2);
  REQUIRE(res.trades.size() == 2);
  CHECK(res.trades[0].maker_order == 2);
  CHECK(res.trades[0].price == 100);
  CHECK(res.trades[1].maker_order == 1);
  CHECK(res.trades[1].price == 99);
}

TEST_CASE("fifo within a level at distinct entry times") {
  OrderBook book;
  book.submit_limit(1, Side::Sell, 105, 5, 10);  // id 1 first
  book.submit_limit(2, Side::Sell, 105, 9, 11);  // id 2 later despite bigger size
  auto res = book.submit_market(3, Side::Buy, 6, 12);
  REQUIRE(res.trades.size() == 2);
  CHECK(res.trades[0].maker_order == 1);
  CHECK(res.trades[0].qty == 5);
  CHECK(res.trades[1].maker_order == 2);
  CHECK(res.trades[1].qty == 1);
}

TEST_CASE("larger size wins the tie at equal entry time") {
  OrderBook book;
  book.submit_limit(1, Side::Sell, 105, 4, 10);  // id 1, size 4
  book.submit_limit(2, Side::Sell, 105, 9, 10);  // id 2, same time, size 9
  book.submit_limit(3, Side::Sell, 105, 9, 10);  // id 3, ties id 2, later id
  auto res = book.submit_market(4, Side::Buy, 14, 10);
  REQUIRE(res.trades.size() == 3);
  CHECK(res.trades[0].maker_order == 2);
  CHECK(res.trades[0].qty == 9);
  CHECK(res.trades[1].maker_order == 3);  // id breaks the exact tie
  CHECK(res.trades[1].qty == 5);
  CHECK(book.open_qty(1) == 4);
}

TEST_CASE("priority size is the residual that rested") {
  OrderBook book;
  book.submit_limit(1, Side::Buy, 100, 10, 5);            // id 1
  auto big = book.submit_limit(2, Side::Sell, 100, 18, 9);  // id 2 fills 10, rests 8
  CHECK(big.resting_qty == 8);
  auto small = book.submit_limit(3, Side::Sell, 100, 12, 9);  // id 3 rests 12
  CHECK(small.resting_qty == 12);
  // Same entry time; id 3's entry size 12 outranks id 2's residual 8.
  auto res = book.submit_market(4, Side::Buy, 12, 9);
  REQUIRE(res.trades.size() == 1);
  CHECK(res.trades[0].maker_order == small.order_id);
  CHECK(res.trades[0].qty == 12);
  CHECK(book.open_qty(big.order_id) == 8);
}

TEST_CASE("invalid limits are rejected without consuming an id") {
  OrderBook book;
  auto bad_qty = book.submit_limit(1, Side::Buy, 100, 0, 0);
  CHECK(!bad_qty.accepted);
  CHECK(bad_qty.order_id == 0);
  CHECK(bad_qty.reason == sim::RejectReason::BadQty);
  auto bad_px = book.submit_limit(1, Side::Buy, 0, 5, 0);
  CHECK(!bad_px.accepted);
  CHECK(bad_px.order_id == 0);
  CHECK(bad_px.reason == sim::RejectReason::BadPrice);
  auto neg_px = book.submit_limit(1, Side::Sell, -3, 5, 0);
  CHECK(neg_px.reason == sim::RejectReason::BadPrice);
  auto good = book.submit_limit(1, Side::Buy, 100, 5, 0);
  CHECK(good.order_id == 1);  // rejected submissions consumed no ids
}

TEST_CASE("market orders against an empty side") {
  OrderBook book;
  auto res = book.submit_market(1, Side::Buy, 5, 0);
  CHECK(!res.accepted);
  CHECK(res.reason == sim::RejectReason::NoLiquidity);
  CHECK(res.cancelled_qty == 5);
  CHECK(res.order_id == 1);  // a valid market order consumes an id either way
  auto bad = book.submit_market(1, Side::Sell, 0, 0);
  CHECK(!bad.accepted);
  CHECK(bad.reason == sim::RejectReason::BadQty);
  CHECK(bad.order_id == 0);
  auto next = book.submit_limit(2, Side::Buy, 50, 1, 0);
  CHECK(next.order_id == 2);
}

TEST_CASE("market remainder is cancelled, never rests") {
  OrderBook book;
  book.submit_limit(1, Side::Sell, 101, 4, 0);
  auto res = book.submit_market(2, Side::Buy, 10, 1);
  CHECK(res.accepted);
  CHECK(res.trades.size() == 1);
  CHECK(res.cancelled_qty == 6);
  CHECK(res.resting_qty == 0);
  CHECK(!book.best_bid().has_value());
  CHECK(book.open_order_count() == 0);
}

TEST_CASE("cancel enforces ownership") {
  OrderBook book;
  auto res = book.submit_limit(1, Side::Buy, 100, 10, 0);
  Qty removed = -1;
  CHECK(!book.cancel(2, res.order_id, &removed));
  CHECK(removed == 0);
  CHECK(book.open_qty(res.order_id) == 10);
  CHECK(book.cancel(1, res.order_id, &removed));
  CHECK(removed == 10);
  CHECK(!book.cancel(1, res.order_id, &removed));  // already gone
  CHECK(book.open_order_count() == 0);
  CHECK(!book.find(res.order_id).has_value());
}

TEST_CASE("cancel_all removes only the caller's orders") {
  OrderBook book;
  book.submit_limit(1, Side::Buy, 100, 3, 0);
  book.submit_limit(2, Side::Buy, 100, 4, 0);
  book.submit_limit(1, Side::Sell, 105, 5, 0);
  auto res = book.cancel_all(1);
  CHECK(res.orders == 2);
  CHECK(res.qty == 8);
  CHECK(book.open_order_count() == 1);
  CHECK(book.orders_of(1) == nullptr);
  REQUIRE(book.orders_of(2) != nullptr);
  CHECK(book.orders_of(2)->size() == 1);
  auto again = book.cancel_all(1);
  CHECK(again.orders == 0);
  CHECK(again.qty == 0);
}

TEST_CASE("snapshot aggregates the five best levels per side") {
  OrderBook book;
  for (Tick p = 90; p <= 96; ++p) book.submit_limit(1, Side::Buy, p, 2, 0);
  book.submit_limit(2, Side::Buy, 96, 3, 1);  // joins the top level
  for (Tick p = 100; p <= 106; ++p) book.submit_limit(3, Side::Sell, p, 1, 0);
  auto snap = book.snapshot_l2(42);
  CHECK(snap.time == 42);
  CHECK(snap.bid_price[0] == 96);
  CHECK(snap.bid_volume[0] == 5);
  CHECK(snap.bid_price[4] == 92);  // 90 and 91 fall off the five-deep window
  for (int i = 1; i < L2Snapshot::kDepth; ++i) {
    CHECK(snap.bid_price[i] < snap.bid_price[i - 1]);
    CHECK(snap.ask_price[i] > snap.ask_price[i - 1]);
  }
  CHECK(snap.ask_price[0] == 100);
  CHECK(snap.ask_volume[4] == 1);
  CHECK(snap.mid() == Tick{98});
  CHECK(snap.spread() == Tick{4});
}

TEST_CASE("one-sided snapshots have no mid or spread") {
  OrderBook book;
  book.submit_limit(1, Side::Buy, 100, 5, 0);
  auto snap = book.snapshot_l2(0);
  CHECK(snap.has_bid());
  CHECK(!snap.has_ask());
  CHECK(snap.best_bid() == Tick{100});
  CHECK(!snap.best_ask().has_value());
  CHECK(!snap.mid().has_value());
  CHECK(!snap.spread().has_value());
}

TEST_CASE("side helpers") {
  CHECK(opposite(Side::Buy) == Side::Sell);
  CHECK(opposite(Side::Sell) == Side::Buy);
  CHECK(to_string(Side::Buy) == "BUY");
  CHECK(side_from_string("SELL") == Side::Sell);
  CHECK(!side_from_string("HOLD").has_value());
}

TEST_CASE("randomized replays agree with the brute-force matcher") {
  // The acceptance suite replays 10k sequences; this keeps a fast regression
  // net over a smaller sweep.
  for (std::uint64_t seed = 1; seed <= 1500; ++seed) {
    std::string diff = lobarena::testing::replay_sequence(seed, {});
    if (!diff.empty()) {
      FAIL("seed ", seed, ": ", diff);
    }
  }
}
