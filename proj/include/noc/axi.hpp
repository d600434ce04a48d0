// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "noc/link.hpp"
#include "noc/types.hpp"

namespace noc {

enum class TxnKind : std::uint8_t { Read, Write };

constexpr std::uint32_t kAxiMaxBurstBytes = 4096;  // AXI 4 KiB rule

constexpr std::uint16_t beat_bytes_of(BusKind bus) {
  return bus == BusKind::Narrow ? 8 : 64;
}

/// Initiator-side request. The unit whose ordering must be preserved.
struct AxiTransaction {
  NodeId initiator{};
  std::uint8_t axi_id = 0;
  TxnKind kind = TxnKind::Read;
  BusKind bus = BusKind::Narrow;
  NodeId dst{};
  std::uint16_t burst_len = 1;  // beats, 1..256
  std::uint16_t beat_bytes = 8;
  Cycle issue_cycle = 0;
  std::uint32_t serial = 0;  // globally unique, assigned by the generator
};

inline void validate(const AxiTransaction& t) {
  if (t.burst_len < 1 || t.burst_len > 256)
    throw ConfigError("burst_len out of range [1,256]: " +
                      std::to_string(t.burst_len));
  if (t.beat_bytes != beat_bytes_of(t.bus))
    throw ConfigError("beat_bytes does not match bus width");
  if (std::uint32_t(t.burst_len) * t.beat_bytes > kAxiMaxBurstBytes)
    throw ConfigError("burst exceeds the AXI 4 KiB boundary");
}

/// Which path of the network a message travels.
enum class Path : std::uint8_t { Request, Response };

/// One message produced by a transaction: AR, AW, a W burst, an R burst
/// or a B ack, expanded to per-beat flit descriptors by the caller.
struct MsgDescriptor {
  MsgType msg_type;
  Path path;
  std::uint16_t beats;  // flits in this message; last set on the final one
};

/// Messages a transaction decomposes into, in emission order. Reads: one
/// AR out, burst_len R beats back. Writes: AW plus burst_len W beats out,
/// one B back. Every beat is a single flit with a full header.
inline std::vector<MsgDescriptor> expand_beats(const AxiTransaction& t) {
  validate(t);
  std::vector<MsgDescriptor> msgs;
  const BusKind b = t.bus;
  if (t.kind == TxnKind::Read) {
    msgs.push_back({make_msg_type(b, AxiMsg::AR), Path::Request, 1});
    msgs.push_back({make_msg_type(b, AxiMsg::R), Path::Response, t.burst_len});
  } else {
    msgs.push_back({make_msg_type(b, AxiMsg::AW), Path::Request, 1});
    msgs.push_back({make_msg_type(b, AxiMsg::W), Path::Request, t.burst_len});
    msgs.push_back({make_msg_type(b, AxiMsg::B), Path::Response, 1});
  }
  return msgs;
}

/// Response payload bytes a transaction will occupy in its reorder buffer:
/// one slot per R beat for reads, one B slot for writes.
inline std::uint32_t response_rob_bytes(const AxiTransaction& t) {
  if (t.kind == TxnKind::Write) return 1;
  return std::uint32_t(t.burst_len) * t.beat_bytes;
}

/// Record of one transaction reaching the initiator's AXI side.
struct DeliveryRecord {
  NodeId initiator{};
  std::uint8_t axi_id = 0;
  BusKind bus = BusKind::Narrow;
  TxnKind kind = TxnKind::Read;
  std::uint32_t serial = 0;
  Cycle completion_cycle = 0;
};

/// Completion order per initiator AXI interface; each completed
/// transaction appears exactly once.
using DeliveryTrace = std::vector<DeliveryRecord>;

struct OrderViolation {
  NodeId initiator{};
  std::uint8_t axi_id = 0;
  BusKind bus = BusKind::Narrow;
  TxnKind kind = TxnKind::Read;
  std::uint32_t expected_serial = 0;
  std::uint32_t delivered_serial = 0;
  std::size_t issue_position = 0;     // index into the issue-ordered list
  std::size_t delivery_position = 0;  // index into the delivery trace
  std::string describe() const {
    return "ordering violation at initiator " + to_string(initiator) +
           (bus == BusKind::Narrow ? " narrow " : " wide ") +
           (kind == TxnKind::Read ? "read" : "write") + " id " +
           std::to_string(int(axi_id)) + ": expected txn #" +
           std::to_string(expected_serial) + " (issued at position " +
           std::to_string(issue_position) + ") but txn #" +
           std::to_string(delivered_serial) + " was delivered at position " +
           std::to_string(delivery_position);
  }
};

/// Brute-force ordering oracle, independent of any NI internals: it sees
/// only the issue-ordered request list and the delivery trace. AXI orders
/// responses per ID within each bus and direction (read IDs and write IDs
/// are separate namespaces), so the check runs per (initiator, bus, kind,
/// axi_id); responses of distinct IDs may interleave freely.
inline std::optional<OrderViolation> oracle_check_order(
    const std::vector<AxiTransaction>& requests, const DeliveryTrace& deliveries) {
  using Key = std::tuple<NodeId, BusKind, TxnKind, std::uint8_t>;
  std::map<Key, std::vector<std::pair<std::uint32_t, std::size_t>>> issued;
  std::map<std::uint32_t, std::size_t> known;
  for (std::size_t i = 0; i < requests.size(); ++i) {
    const auto& r = requests[i];
    issued[{r.initiator, r.bus, r.kind, r.axi_id}].emplace_back(r.serial, i);
    known[r.serial] = i;
  }
  std::map<Key, std::size_t> cursor;
  std::map<std::uint32_t, bool> seen;
  for (std::size_t d = 0; d < deliveries.size(); ++d) {
    const auto& del = deliveries[d];
    if (!known.count(del.serial))
      throw ProtocolError("trace corruption: delivery of unknown txn #" +
                          std::to_string(del.serial));
    if (seen[del.serial])
      throw ProtocolError("trace corruption: txn #" + std::to_string(del.serial) +
                          " delivered twice");
    seen[del.serial] = true;
    Key key{del.initiator, del.bus, del.kind, del.axi_id};
    auto& queue = issued[key];
    std::size_t& pos = cursor[key];
    if (pos >= queue.size())
      throw ProtocolError("trace corruption: txn #" + std::to_string(del.serial) +
                          " delivered more often than issued");
    if (queue[pos].first != del.serial) {
      return OrderViolation{del.initiator, del.axi_id,       del.bus,
                            del.kind,      queue[pos].first, del.serial,
                            queue[pos].second, d};
    }
    ++pos;
  }
  return std::nullopt;
}

}  // namespace noc
