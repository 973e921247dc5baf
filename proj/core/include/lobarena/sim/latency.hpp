#pragma once

#include <cstdint>
#include <unordered_map>

#include "lobarena/util/time.hpp"

namespace lobarena::sim {

// One-way wire latency plus a fixed computation delay charged by the sender
// before a message leaves. Defaults model agents ~3,866 km from the exchange
// with signals at 200,000 km/s, and a 50 ns decision cost.
inline constexpr SimTime kDefaultLatencyNs = 19'330'000;
inline constexpr SimTime kDefaultComputationDelayNs = 50;

class LatencyModel {
 public:
  LatencyModel() = default;
  LatencyModel(SimTime base_latency_ns, SimTime computation_delay_ns)
      : base_latency_ns_(base_latency_ns),
        computation_delay_ns_(computation_delay_ns) {}

  SimTime base_latency_ns() const { return base_latency_ns_; }
  SimTime computation_delay_ns() const { return computation_delay_ns_; }

  void set_agent_latency(AgentId agent, SimTime latency_ns) {
    overrides_[agent] = latency_ns;
  }

  // One-way latency for a message sent by `sender` to `recipient`. An
  // override on either endpoint applies; if both have one, the sender wins.
  SimTime latency(AgentId sender, AgentId recipient) const {
    if (auto it = overrides_.find(sender); it != overrides_.end())
      return it->second;
    if (auto it = overrides_.find(recipient); it != overrides_.end())
      return it->second;
    return base_latency_ns_;
  }

  // Delivery time of a message emitted at `now`.
  SimTime deliver_at(SimTime now, AgentId sender, AgentId recipient) const {
    return now + computation_delay_ns_ + latency(sender, recipient);
  }

 private:
  SimTime base_latency_ns_ = kDefaultLatencyNs;
  SimTime computation_delay_ns_ = kDefaultComputationDelayNs;
  std::unordered_map<AgentId, SimTime> overrides_;
};

}  // namespace lobarena::sim
