#pragma once

#include <cstdint>
#include <memory>
#include <queue>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lobarena/sim/agent.hpp"
#include "lobarena/sim/latency.hpp"
#include "lobarena/sim/messages.hpp"
#include "lobarena/sim/trace.hpp"

namespace lobarena::sim {

// Single-threaded discrete-event loop. Events are processed in a total order
// on (deliver_at, seq), where seq is the insertion counter, so identical
// configuration and seeds replay bit-identically.
class Kernel {
 public:
  Kernel(SimTime window_start, SimTime window_end,
         LatencyModel latency = LatencyModel{});

  Kernel(const Kernel&) = delete;
  Kernel& operator=(const Kernel&) = delete;

  void register_agent(Agent* agent);
  bool has_agent(AgentId id) const { return agents_.count(id) != 0; }
  Agent& agent(AgentId id) const;

  SimTime now() const { return now_; }
  SimTime window_start() const { return window_start_; }
  SimTime window_end() const { return window_end_; }

  const LatencyModel& latency() const { return latency_; }
  LatencyModel& latency() { return latency_; }

  void set_trace(TraceSink* sink) { trace_ = sink; }

  // Enqueues a fully-formed envelope. Throws if deliver_at is in the past.
  void schedule(Envelope env);

  // Requests a WakeupMsg self-delivery at exactly t (no latency applies).
  // Requests outside [window_start, window_end] are dropped and logged; the
  // return value says whether the wakeup was actually scheduled.
  bool wakeup_at(AgentId agent, SimTime t, std::uint64_t tag = 0);

  // Sends payload from sender to recipient, charging the sender's
  // computation delay plus the pairwise latency. Returns the delivery time.
  SimTime deliver(AgentId sender, AgentId recipient, Payload payload);

  // Processes every event with deliver_at <= until, in order. The first call
  // runs agents' on_start hooks (in registration order) before any delivery.
  // Returns the number of events processed by this call.
  std::uint64_t run(SimTime until);

  // Drains the queue completely regardless of the window.
  std::uint64_t run_all();

  std::uint64_t delivered_count() const { return delivered_count_; }
  std::uint64_t dropped_wakeup_count() const { return dropped_wakeups_.size(); }
  const std::vector<std::pair<AgentId, SimTime>>& dropped_wakeups() const {
    return dropped_wakeups_;
  }

  // Order-sensitive digest of every delivered (time, sender, recipient, kind)
  // tuple; two runs match iff their delivered streams match.
  std::uint64_t trace_hash() const { return trace_hash_; }

 private:
  struct Later {
    bool operator()(const Envelope& a, const Envelope& b) const {
      if (a.deliver_at != b.deliver_at) return a.deliver_at > b.deliver_at;
      return a.seq > b.seq;
    }
  };

  void start();
  void process(const Envelope& env);

  SimTime window_start_;
  SimTime window_end_;
  LatencyModel latency_;
  SimTime now_ = 0;
  std::uint64_t next_seq_ = 0;
  bool started_ = false;
  std::uint64_t delivered_count_ = 0;
  std::uint64_t trace_hash_;
  TraceSink* trace_ = nullptr;
  std::priority_queue<Envelope, std::vector<Envelope>, Later> queue_;
  std::unordered_map<AgentId, Agent*> agents_;
  std::vector<Agent*> registration_order_;
  std::vector<std::pair<AgentId, SimTime>> dropped_wakeups_;
};

}  // namespace lobarena::sim
