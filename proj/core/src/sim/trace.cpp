#include "lobarena/sim/trace.hpp"

#include "lobarena/util/error.hpp"

namespace lobarena::sim {

NdjsonTrace::NdjsonTrace(const std::string& path)
    : out_(path, std::ios::binary) {
  if (!out_) throw Error("cannot open trace file: ", path);
}

void NdjsonTrace::on_deliver(const Envelope& env) {
  out_ << "{\"time_ns\":" << env.deliver_at << ",\"sender\":" << env.sender
       << ",\"recipient\":" << env.recipient << ",\"kind\":\""
       << payload_kind(env.payload) << "\"}\n";
}

}  // namespace lobarena::sim
