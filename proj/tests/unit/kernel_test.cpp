#include <doctest.h>

#include <string>
#include <variant>
#include <vector>

#include "lobarena/sim/kernel.hpp"
#include "lobarena/util/error.hpp"
#include "lobarena/util/hash.hpp"

using namespace lobarena;
using namespace lobarena::sim;

namespace {

struct Event {
  SimTime time = 0;
  AgentId sender = 0;
  std::string kind;
};

// Records everything it receives; optionally fires a wakeup chain.
class Recorder final : public Agent {
 public:
  Recorder(AgentId id, std::string name) : Agent(id, std::move(name)) {}

  void on_start(Kernel& kernel) override {
    started_at = kernel.now();
    start_order.push_back(id());
  }

  void on_message(Kernel& kernel, const Envelope& env) override {
    events.push_back({kernel.now(), env.sender, std::string(payload_kind(env.payload))});
  }

  SimTime started_at = 0;
  std::vector<Event> events;
  static std::vector<AgentId> start_order;
};

std::vector<AgentId> Recorder::start_order;

}  // namespace

TEST_CASE("deliver charges computation delay plus latency") {
  Kernel k(0, kNsPerHour);
  Recorder a(1, "a"), b(2, "b");
  k.register_agent(&a);
  k.register_agent(&b);
  const SimTime at = k.deliver(1, 2, WakeupMsg{});
  CHECK(at == kDefaultComputationDelayNs + kDefaultLatencyNs);
  CHECK(at == 19'330'050);
  k.run(at);
  REQUIRE(b.events.size() == 1);
  CHECK(b.events[0].time == at);
  CHECK(b.events[0].sender == 1);
  CHECK(k.now() == at);
}

TEST_CASE("latency overrides prefer the sender") {
  LatencyModel lat(1000, 10);
  lat.set_agent_latency(1, 5);
  lat.set_agent_latency(2, 300);
  CHECK(lat.latency(1, 2) == 5);    // sender override wins
  CHECK(lat.latency(2, 1) == 300);  // now agent 2 is the sender
  CHECK(lat.latency(3, 2) == 300);  // recipient override still applies
  CHECK(lat.latency(3, 4) == 1000);
  CHECK(lat.deliver_at(100, 3, 4) == 100 + 10 + 1000);
}

TEST_CASE("equal delivery times run in insertion order") {
  Kernel k(0, kNsPerHour, LatencyModel(0, 0));
  Recorder a(1, "a"), b(2, "b"), c(3, "c");
  k.register_agent(&a);
  k.register_agent(&b);
  k.register_agent(&c);
  // All three deliver at t=0; insertion order must be preserved.
  k.deliver(2, 1, WakeupMsg{7});
  k.deliver(3, 1, MarketOrderMsg{});
  k.deliver(2, 1, CancelAllMsg{});
  k.run(0);
  REQUIRE(a.events.size() == 3);
  CHECK(a.events[0].kind == "wakeup");
  CHECK(a.events[1].kind == "market_order");
  CHECK(a.events[2].kind == "cancel_all");
}

TEST_CASE("scheduling in the past throws") {
  Kernel k(0, kNsPerHour);
  Recorder a(1, "a");
  k.register_agent(&a);
  k.wakeup_at(1, 500);
  k.run(1000);
  CHECK(k.now() == 1000);
  Envelope env;
  env.deliver_at = 999;
  env.sender = env.recipient = 1;
  env.payload = WakeupMsg{};
  CHECK_THROWS_AS(k.schedule(std::move(env)), Error);
}

TEST_CASE("wakeups outside the window are dropped and logged") {
  Kernel k(1000, 2000);
  Recorder a(1, "a");
  k.register_agent(&a);
  CHECK(!k.wakeup_at(1, 999));
  CHECK(!k.wakeup_at(1, 2001));
  CHECK(k.wakeup_at(1, 1000));
  CHECK(k.wakeup_at(1, 2000));
  CHECK(k.dropped_wakeup_count() == 2);
  REQUIRE(k.dropped_wakeups().size() == 2);
  CHECK(k.dropped_wakeups()[0] == std::pair<AgentId, SimTime>{1, 999});
  CHECK(k.dropped_wakeups()[1] == std::pair<AgentId, SimTime>{1, 2001});
  k.run_all();
  CHECK(a.events.size() == 2);
  // Wakeups arrive exactly on time, no latency.
  CHECK(a.events[0].time == 1000);
  CHECK(a.events[1].time == 2000);
}

TEST_CASE("on_start runs once in registration order before delivery") {
  Recorder::start_order.clear();
  Kernel k(100, kNsPerHour);
  Recorder b(2, "b"), a(1, "a"), c(3, "c");
  k.register_agent(&b);
  k.register_agent(&a);
  k.register_agent(&c);
  k.run(100);
  CHECK(Recorder::start_order == std::vector<AgentId>{2, 1, 3});
  k.run(200);  // second run must not restart
  CHECK(Recorder::start_order.size() == 3);
  CHECK(a.started_at == 100);
}

TEST_CASE("run advances the clock even with an empty queue") {
  Kernel k(0, kNsPerHour);
  CHECK(k.now() == 0);
  CHECK(k.run(12345) == 0);
  CHECK(k.now() == 12345);
  // run() never moves the clock backwards.
  CHECK(k.run(12000) == 0);
  CHECK(k.now() == 12345);
}

TEST_CASE("run processes only events up to the horizon") {
  Kernel k(0, kNsPerHour);
  Recorder a(1, "a");
  k.register_agent(&a);
  k.wakeup_at(1, 100);
  k.wakeup_at(1, 200);
  k.wakeup_at(1, 300);
  CHECK(k.run(200) == 2);
  CHECK(k.delivered_count() == 2);
  CHECK(k.run_all() == 1);
  CHECK(k.delivered_count() == 3);
  CHECK(k.now() == 300);
}

TEST_CASE("duplicate agent ids and unknown endpoints are rejected") {
  Kernel k(0, kNsPerHour);
  Recorder a(1, "a"), dup(1, "dup");
  k.register_agent(&a);
  CHECK_THROWS_AS(k.register_agent(&dup), Error);
  CHECK_THROWS_AS(k.deliver(1, 9, WakeupMsg{}), Error);
  CHECK_THROWS_AS(k.deliver(9, 1, WakeupMsg{}), Error);
  CHECK_THROWS_AS(k.agent(4), Error);
  CHECK(k.has_agent(1));
  CHECK(!k.has_agent(9));
}

TEST_CASE("trace hash digests the delivered stream") {
  auto run_once = [](bool extra) {
    Kernel k(0, kNsPerHour, LatencyModel(10, 0));
    Recorder a(1, "a"), b(2, "b");
    k.register_agent(&a);
    k.register_agent(&b);
    k.deliver(1, 2, LimitOrderMsg{Side::Buy, 100, 5});
    if (extra) k.deliver(2, 1, WakeupMsg{});
    k.run_all();
    return k.trace_hash();
  };
  CHECK(run_once(false) == run_once(false));  // replays are bit-identical
  CHECK(run_once(false) != run_once(true));

  // The digest is FNV-1a over (deliver_at, sender, recipient, kind) tuples.
  Kernel k(0, kNsPerHour, LatencyModel(10, 0));
  Recorder a(1, "a"), b(2, "b");
  k.register_agent(&a);
  k.register_agent(&b);
  k.deliver(1, 2, LimitOrderMsg{Side::Buy, 100, 5});
  k.run_all();
  std::uint64_t expect = kFnvOffset;
  expect = fnv1a64(expect, std::uint64_t{10});
  expect = fnv1a64(expect, std::uint64_t{1});
  expect = fnv1a64(expect, std::uint64_t{2});
  expect = fnv1a64(expect, std::string_view{"limit_order"});
  CHECK(k.trace_hash() == expect);
}

TEST_CASE("window sanity") {
  CHECK_THROWS_AS(Kernel(100, 99), Error);
}
