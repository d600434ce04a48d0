// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "noc/axi.hpp"
#include "noc/link.hpp"
#include "noc/metrics.hpp"
#include "noc/rob.hpp"
#include "noc/sim.hpp"
#include "noc/types.hpp"

namespace noc {

/// AXI response ordering applies per ID within one bus and one direction;
/// read and write IDs are independent namespaces, and the narrow and wide
/// buses are separate AXI interfaces. These four domains are the units
/// the reorder machinery tracks.
enum class Domain : std::uint8_t {
  NarrowRead = 0,
  NarrowWrite = 1,
  WideRead = 2,
  WideWrite = 3,
};

inline constexpr int kDomainCount = 4;

constexpr Domain domain_of(BusKind bus, TxnKind kind) {
  const int b = bus == BusKind::Wide ? 2 : 0;
  return static_cast<Domain>(b + (kind == TxnKind::Write ? 1 : 0));
}

constexpr Domain domain_of_response(MsgType t) {
  return domain_of(bus_of(t), class_of(t) == AxiMsg::B ? TxnKind::Write
                                                       : TxnKind::Read);
}

constexpr BusKind bus_of(Domain d) {
  return (d == Domain::WideRead || d == Domain::WideWrite) ? BusKind::Wide
                                                           : BusKind::Narrow;
}
constexpr TxnKind kind_of(Domain d) {
  return (d == Domain::NarrowWrite || d == Domain::WideWrite) ? TxnKind::Write
                                                              : TxnKind::Read;
}

/// rob_idx as carried in flit headers: the ordering domain in the top
/// bits, the base slot below. Unique per NI across everything in flight.
constexpr std::uint32_t encode_rob_idx(Domain d, std::uint32_t base) {
  return (static_cast<std::uint32_t>(d) << 24) | base;
}
constexpr Domain rob_idx_domain(std::uint32_t idx) {
  return static_cast<Domain>(idx >> 24);
}
constexpr std::uint32_t rob_idx_base(std::uint32_t idx) {
  return idx & 0xffffff;
}

struct NiConfig {
  std::uint32_t narrow_read_rob_bytes = 2048;
  std::uint32_t wide_read_rob_bytes = 8192;
  std::uint32_t write_table_entries = 64;  // B responses, per bus
  std::uint32_t reorder_table_entries = 64;  // outstanding txns, per bus
  /// Request-path cuts plus target memory access; calibrated so a
  /// zero-load adjacent-tile round trip lands on the documented total.
  std::uint32_t internal_latency_cycles = 9;
  std::uint8_t id_bits = 4;
  bool response_bypass = true;
  bool wide_only = false;  // map every message class onto the wide link
};

/// A request that has fully arrived at a target NI.
struct RequestJob {
  NodeId src{};
  std::uint32_t rob_idx = 0;
  std::uint8_t axi_id = 0;
  BusKind bus = BusKind::Narrow;
  std::uint32_t serial = 0;
  std::uint16_t burst_len = 1;
};

/// A response message scheduled by the target model. not_before is the
/// first cycle its first beat may enter the network.
struct ResponseMsg {
  NodeId dst{};
  std::uint32_t rob_idx = 0;
  MsgType msg = MsgType::NarrowR;
  std::uint8_t axi_id = 0;
  std::uint16_t beats = 1;
  std::uint32_t serial = 0;
  std::uint16_t burst_len = 1;
  Cycle not_before = 0;
};

class NetworkInterface;

/// Target side of an endpoint: services fully arrived requests and
/// schedules the responses.
class TargetModel {
 public:
  virtual ~TargetModel() = default;
  virtual void serve_read(NetworkInterface& ni, const RequestJob& job,
                          Cycle now) = 0;
  virtual void serve_write(NetworkInterface& ni, const RequestJob& job,
                           Cycle now) = 0;
};

/// Initiator side of an endpoint: consumes delivered responses.
class DeliverySink {
 public:
  virtual ~DeliverySink() = default;
  /// AXI-side readiness of the response channel for this domain. Must be
  /// a pure function of (domain, cycle).
  virtual bool response_ready(Domain d, Cycle now) = 0;
  virtual void on_txn_complete(std::uint32_t serial, Cycle now) = 0;
};

/// Endpoint-side bridge between two AXI buses and the physical links.
///
/// Initiator path: admits transactions under end-to-end flow control (a
/// request enters the network only once the whole response already has a
/// reserved reorder-buffer range), stamps the allocated rob_idx into every
/// request flit, and reorders responses per (bus, direction, ID).
///
/// A response beat is forwarded straight to the AXI side exactly when it
/// is the next beat its ID stream owes - which covers both the
/// first-response case and in-order streams to a common destination under
/// deterministic routing; anything else waits in its reserved slots and
/// is released in issue order as soon as the stream head completes.
class NetworkInterface : public Component {
 public:
  NetworkInterface(NodeId node, NiConfig cfg, std::string name,
                   Recorder* recorder)
      : node_(node), cfg_(std::move(cfg)), name_(std::move(name)),
        recorder_(recorder) {
    if (cfg_.id_bits < 1 || cfg_.id_bits > 8)
      throw ConfigError("AXI id width must be 1..8 bits");
    domains_[int(Domain::NarrowRead)].init(cfg_.narrow_read_rob_bytes / 8,
                                           std::uint32_t(1) << cfg_.id_bits);
    domains_[int(Domain::WideRead)].init(cfg_.wide_read_rob_bytes / 64,
                                         std::uint32_t(1) << cfg_.id_bits);
    domains_[int(Domain::NarrowWrite)].init(cfg_.write_table_entries,
                                            std::uint32_t(1) << cfg_.id_bits);
    domains_[int(Domain::WideWrite)].init(cfg_.write_table_entries,
                                          std::uint32_t(1) << cfg_.id_bits);
    for (auto& d : domains_)
      if (d.alloc->capacity_slots() == 0)
        throw ConfigError(name_ + ": reorder storage with zero slots");
  }

  NodeId node() const { return node_; }
  const std::string& name() const override { return name_; }
  const NiConfig& config() const { return cfg_; }

  void connect_to_router(ChannelKind ch, FlitLink* link) {
    tx_[int(ch)].link = link;
  }
  void connect_from_router(ChannelKind ch, FlitLink* link) {
    rx_[int(ch)] = link;
  }
  void attach_target(TargetModel* target) { target_ = target; }
  void attach_sink(DeliverySink* sink) { sink_ = sink; }
  void set_route_validator(std::function<bool(NodeId)> v) {
    route_valid_ = std::move(v);
  }
  /// Optional debug trace: (cycle, name, free read-ROB bytes, outstanding).
  void set_occupancy_sink(
      std::function<void(Cycle, const std::string&, std::uint64_t, std::uint32_t)> s) {
    occupancy_sink_ = std::move(s);
  }

  /// Endpoint-side request entry; order per bus is preserved end to end.
  void push_request(const AxiTransaction& txn, Cycle now) {
    validate(txn);
    if (txn.initiator != node_)
      throw ConfigError(name_ + ": request initiator mismatch");
    if (txn.dst == node_)
      throw ConfigError(name_ + ": remote-traffic destination equals source");
    if (route_valid_ && !route_valid_(txn.dst))
      throw UnroutableError(name_ + ": no route to " + to_string(txn.dst));
    if (std::uint32_t(txn.axi_id) >= (std::uint32_t(1) << cfg_.id_bits))
      throw ConfigError(name_ + ": axi_id exceeds configured id width");
    if (txn.kind == TxnKind::Read) {
      const Domain d = domain_of(txn.bus, TxnKind::Read);
      if (txn.burst_len > domains_[int(d)].alloc->capacity_slots())
        throw ConfigError(name_ + ": transaction larger than its whole ROB");
    }
    pending_[int(txn.bus)].push_back({txn, now});
  }

  std::uint32_t outstanding(BusKind bus) const { return outstanding_[int(bus)]; }
  std::uint64_t rob_stall_cycles() const { return rob_stall_cycles_; }
  std::uint64_t reorder_table_stall_cycles() const {
    return reorder_table_stall_cycles_;
  }
  std::uint64_t fragmentation_misses() const {
    std::uint64_t n = 0;
    for (const auto& d : domains_) n += d.alloc->fragmentation_misses();
    return n;
  }
  std::uint64_t direct_forwards() const { return direct_forwards_; }
  std::uint64_t buffered_beats() const { return buffered_beats_; }
  std::uint64_t read_rob_free_bytes() const {
    return std::uint64_t(domains_[int(Domain::NarrowRead)].alloc->free_slots()) * 8 +
           std::uint64_t(domains_[int(Domain::WideRead)].alloc->free_slots()) * 64;
  }

  /// Called by the target model to emit a response stream.
  void queue_response(const ResponseMsg& msg) {
    TxMessage m;
    m.dst = msg.dst;
    m.rob_idx = msg.rob_idx;
    m.msg = msg.msg;
    m.axi_id = msg.axi_id;
    m.beats = msg.beats;
    m.serial = msg.serial;
    m.burst_len = msg.burst_len;
    m.not_before = msg.not_before;
    tx_[int(tx_channel(msg.msg))].queue[kRspQ].push_back(m);
  }

  /// Post-drain hygiene: everything handed back, no storage leaked.
  void assert_drained() const {
    for (int b = 0; b < 2; ++b) {
      if (!pending_[b].empty())
        throw KernelError(name_ + ": pending requests left after drain");
      if (outstanding_[b] != 0)
        throw KernelError(name_ + ": outstanding transactions left after drain");
    }
    for (const auto& d : domains_) {
      if (d.alloc->free_slots() != d.alloc->capacity_slots())
        throw KernelError(name_ + ": reorder storage leak after drain");
      if (!d.eject.empty())
        throw KernelError(name_ + ": undelivered beats left after drain");
      for (const auto& q : d.id_queues)
        if (!q.empty())
          throw KernelError(name_ + ": reorder queue entries left after drain");
    }
    for (const auto& tx : tx_)
      for (const auto& q : tx.queue)
        if (!q.empty())
          throw KernelError(name_ + ": unsent messages left after drain");
    if (!assemblies_.empty())
      throw KernelError(name_ + ": partial write assemblies left after drain");
  }

  bool idle() const override {
    for (int b = 0; b < 2; ++b)
      if (!pending_[b].empty() || outstanding_[b] != 0) return false;
    for (const auto& tx : tx_)
      if (!tx.queue[0].empty() || !tx.queue[1].empty()) return false;
    for (const auto& d : domains_)
      if (!d.eject.empty()) return false;
    if (!assemblies_.empty()) return false;
    return true;
  }

  void propose(Cycle now) override {
    for (int ch = 0; ch < kChannelCount; ++ch) {
      if (rx_[ch]) rx_[ch]->set_ready(true);
      TxState& tx = tx_[ch];
      if (!tx.link) continue;
      // The choice is pinned here: messages arriving later in this cycle
      // must not redirect the commit bookkeeping away from the beat that
      // is actually on the wire.
      tx.driven = tx_choice(tx, now);
      if (tx.driven < 0) {
        tx.link->drive_idle();
        continue;
      }
      tx.link->drive(make_flit(tx.queue[tx.driven].front(),
                               static_cast<ChannelKind>(ch)));
    }
  }

  void commit(Cycle now) override {
    // 1. Deliver from the eject stages (>= 1 cycle inside the NI).
    for (int d = 0; d < kDomainCount; ++d) deliver_one(static_cast<Domain>(d), now);
    // 2. Release buffered beats that are next in their stream.
    for (int d = 0; d < kDomainCount; ++d) drain_one(static_cast<Domain>(d), now);
    // 3. Accept arrivals.
    for (int ch = 0; ch < kChannelCount; ++ch) {
      FlitLink* link = rx_[ch];
      if (!link || !link->fired()) continue;
      link->confirm_received();
      const Flit& f = link->flit();
      if (is_response(f.header.msg_type))
        handle_response(f, now);
      else
        handle_request(f, now);
    }
    // 4. Advance transmit streams.
    for (int ch = 0; ch < kChannelCount; ++ch) tx_commit(tx_[ch]);
    // 5. Admit new transactions under end-to-end flow control.
    for (int b = 0; b < 2; ++b) admit(static_cast<BusKind>(b), now);
    // 6. Occupancy trace.
    if (occupancy_sink_) {
      const std::uint64_t free_bytes = read_rob_free_bytes();
      const std::uint32_t out = outstanding_[0] + outstanding_[1];
      if (free_bytes != last_free_bytes_ || out != last_outstanding_) {
        occupancy_sink_(now, name_, free_bytes, out);
        last_free_bytes_ = free_bytes;
        last_outstanding_ = out;
      }
    }
    for (int d = 0; d < kDomainCount; ++d) enqueued_this_cycle_[d] = false;
  }

 private:
  // --- transmit ----------------------------------------------------------
  static constexpr int kReqQ = 0;
  static constexpr int kRspQ = 1;

  struct TxMessage {
    NodeId dst{};
    std::uint32_t rob_idx = 0;
    MsgType msg = MsgType::NarrowAR;
    std::uint8_t axi_id = 0;
    std::uint16_t beats = 1;
    std::uint16_t beats_sent = 0;
    std::uint32_t serial = 0;
    std::uint16_t burst_len = 1;
    Cycle not_before = 0;
  };

  struct TxState {
    FlitLink* link = nullptr;
    std::array<std::deque<TxMessage>, 2> queue;  // request / response class
    int active = -1;  // queue owning the link mid-message
    int held = -1;    // queue pinned while valid is stalled
    int prefer = 0;   // round-robin preference for the next message
    int driven = -1;  // queue whose beat is on the wire this cycle
  };

  ChannelKind tx_channel(MsgType t) const {
    return cfg_.wide_only ? ChannelKind::Wide : channel_of(t);
  }

  /// Which queue drives the link this cycle (-1: none). Pure function of
  /// registered state; a started or stalled message keeps the link.
  int tx_choice(const TxState& tx, Cycle now) const {
    if (tx.active >= 0) return tx.active;
    if (tx.held >= 0) return tx.held;
    for (int step = 0; step < 2; ++step) {
      const int q = (tx.prefer + step) % 2;
      if (!tx.queue[q].empty() && tx.queue[q].front().not_before <= now)
        return q;
    }
    return -1;
  }

  Flit make_flit(const TxMessage& m, ChannelKind ch) const {
    if (!cfg_.wide_only && channel_of(m.msg) != ch)
      throw KernelError(name_ + ": message class on wrong physical link");
    Flit f;
    f.header.dst = m.dst;
    f.header.src = node_;
    f.header.rob_idx = m.rob_idx;
    f.header.msg_type = m.msg;
    f.header.last = (m.beats_sent + 1 == m.beats);
    f.header.axi_id = m.axi_id;
    f.payload_bits = static_cast<std::uint16_t>(payload_bits_of(m.msg));
    f.payload.txn_serial = m.serial;
    f.payload.beat = m.beats_sent;
    f.payload.burst_len = m.burst_len;
    return f;
  }

  void tx_commit(TxState& tx) {
    if (!tx.link) return;
    const int q = tx.driven;
    if (q < 0) return;
    if (!tx.link->fired()) {
      tx.held = q;
      return;
    }
    tx.link->confirm_sent();
    TxMessage& m = tx.queue[q].front();
    ++m.beats_sent;
    tx.held = -1;
    if (m.beats_sent == m.beats) {
      tx.queue[q].pop_front();
      tx.active = -1;
      tx.prefer = 1 - q;
    } else {
      tx.active = q;  // hold the link for the rest of the burst
    }
  }

  // --- reorder state ------------------------------------------------------
  struct Entry {
    std::uint32_t serial = 0;
    std::uint8_t axi_id = 0;
    NodeId dst{};
    std::uint16_t expected_beats = 1;
    std::uint16_t beats_arrived = 0;
    std::uint16_t beats_queued = 0;
    std::uint16_t payload_bits = 0;
    std::uint32_t slots = 1;  // allocated range length
  };

  struct EjectItem {
    Cycle stamp = 0;
    std::uint32_t serial = 0;
    std::uint16_t beat = 0;
    std::uint16_t payload_bits = 0;
    bool txn_last = false;
    std::uint8_t axi_id = 0;
  };

  struct DomainState {
    std::unique_ptr<RobAllocator> alloc;
    std::vector<std::optional<Entry>> entry_at;  // indexed by base slot
    std::vector<std::deque<std::uint32_t>> id_queues;  // base slots, issue order
    std::deque<EjectItem> eject;
    std::uint32_t drain_rr = 0;

    void init(std::uint32_t slots, std::uint32_t ids) {
      alloc = std::make_unique<RobAllocator>(slots);
      entry_at.resize(slots);
      id_queues.resize(ids);
    }
  };

  // --- response path (initiator side) -------------------------------------
  void deliver_one(Domain dom, Cycle now) {
    DomainState& ds = domains_[int(dom)];
    if (ds.eject.empty()) return;
    const EjectItem& item = ds.eject.front();
    if (item.stamp >= now) return;
    if (sink_ && !sink_->response_ready(dom, now)) return;
    recorder_->record_beat_delivery(node_, bus_of(dom), kind_of(dom),
                                    item.axi_id, item.serial, item.beat,
                                    item.payload_bits, now);
    if (item.txn_last) {
      recorder_->record_completion(DeliveryRecord{node_, item.axi_id,
                                                  bus_of(dom), kind_of(dom),
                                                  item.serial, now});
      if (sink_) sink_->on_txn_complete(item.serial, now);
    }
    ds.eject.pop_front();
  }

  void enqueue_beat(Domain dom, std::uint32_t base, Cycle now) {
    DomainState& ds = domains_[int(dom)];
    Entry& e = *ds.entry_at[base];
    ds.eject.push_back(EjectItem{now, e.serial, e.beats_queued, e.payload_bits,
                                 e.beats_queued + 1 == e.expected_beats,
                                 e.axi_id});
    ++e.beats_queued;
    enqueued_this_cycle_[int(dom)] = true;
    if (e.beats_queued == e.expected_beats) retire_entry(dom, base);
  }

  void retire_entry(Domain dom, std::uint32_t base) {
    DomainState& ds = domains_[int(dom)];
    Entry& e = *ds.entry_at[base];
    auto& idq = ds.id_queues[e.axi_id];
    if (idq.empty() || idq.front() != base)
      throw KernelError(name_ + ": completed entry is not its stream head");
    idq.pop_front();
    ds.alloc->release(base, e.slots);
    const BusKind bus = bus_of(dom);
    if (outstanding_[int(bus)] == 0)
      throw KernelError(name_ + ": outstanding count underflow");
    --outstanding_[int(bus)];
    ds.entry_at[base].reset();
  }

  void drain_one(Domain dom, Cycle now) {
    DomainState& ds = domains_[int(dom)];
    if (enqueued_this_cycle_[int(dom)]) return;
    if (ds.eject.size() >= kEjectDepth) return;
    const std::uint32_t ids = std::uint32_t(ds.id_queues.size());
    for (std::uint32_t step = 1; step <= ids; ++step) {
      const std::uint32_t id = (ds.drain_rr + step) % ids;
      auto& idq = ds.id_queues[id];
      if (idq.empty()) continue;
      const std::uint32_t base = idq.front();
      const Entry& e = *ds.entry_at[base];
      if (e.beats_queued >= e.beats_arrived) continue;
      enqueue_beat(dom, base, now);
      ds.drain_rr = id;
      return;
    }
  }

  void handle_response(const Flit& f, Cycle now) {
    const Domain dom = domain_of_response(f.header.msg_type);
    const std::uint32_t base = rob_idx_base(f.header.rob_idx);
    DomainState& ds = domains_[int(dom)];
    if (rob_idx_domain(f.header.rob_idx) != dom || base >= ds.entry_at.size() ||
        !ds.entry_at[base].has_value())
      throw ProtocolError(name_ + ": response with unknown rob_idx " +
                          std::to_string(f.header.rob_idx));
    Entry& e = *ds.entry_at[base];
    if (e.beats_arrived >= e.expected_beats)
      throw ProtocolError(name_ + ": duplicate completion for txn #" +
                          std::to_string(e.serial));
    if (f.payload.beat != e.beats_arrived)
      throw ProtocolError(name_ + ": response beats arrived out of order");
    if (f.header.last != (e.beats_arrived + 1 == e.expected_beats))
      throw ProtocolError(name_ + ": bad last flag on response beat");
    ++e.beats_arrived;
    // ForwardDirect exactly when this beat is the next its ID stream owes
    // and the eject stage can take it; otherwise it waits in its reserved
    // slots (nothing to move: the slot range was allocated at injection).
    const auto& idq = ds.id_queues[e.axi_id];
    const bool is_stream_next =
        !idq.empty() && idq.front() == base && e.beats_queued == f.payload.beat;
    if (cfg_.response_bypass && is_stream_next &&
        !enqueued_this_cycle_[int(dom)] && ds.eject.size() < kEjectDepth) {
      enqueue_beat(dom, base, now);
      ++direct_forwards_;
    } else {
      ++buffered_beats_;
    }
  }

  // --- request path (initiator side) --------------------------------------
  struct PendingReq {
    AxiTransaction txn;
    Cycle pushed;
  };

  void admit(BusKind bus, Cycle now) {
    auto& queue = pending_[int(bus)];
    if (queue.empty() || queue.front().pushed >= now) return;
    const AxiTransaction& txn = queue.front().txn;
    if (outstanding_[int(bus)] >= cfg_.reorder_table_entries) {
      ++reorder_table_stall_cycles_;
      return;
    }
    const Domain dom = domain_of(bus, txn.kind);
    DomainState& ds = domains_[int(dom)];
    const std::uint32_t slots = txn.kind == TxnKind::Read ? txn.burst_len : 1;
    const auto base = ds.alloc->allocate(slots);
    if (!base) {
      ++rob_stall_cycles_;
      return;
    }
    Entry e;
    e.serial = txn.serial;
    e.axi_id = txn.axi_id;
    e.dst = txn.dst;
    e.expected_beats = txn.kind == TxnKind::Read ? txn.burst_len : 1;
    e.payload_bits = txn.kind == TxnKind::Read
                         ? (bus == BusKind::Wide ? 512 : 64)
                         : 2;
    e.slots = slots;
    ds.entry_at[*base] = e;
    ds.id_queues[txn.axi_id].push_back(*base);
    ++outstanding_[int(bus)];

    const std::uint32_t rob_idx = encode_rob_idx(dom, *base);
    for (const MsgDescriptor& md : expand_beats(txn)) {
      if (md.path != Path::Request) continue;
      TxMessage m;
      m.dst = txn.dst;
      m.rob_idx = rob_idx;
      m.msg = md.msg_type;
      m.axi_id = txn.axi_id;
      m.beats = md.beats;
      m.serial = txn.serial;
      m.burst_len = txn.burst_len;
      m.not_before = now;
      tx_[int(tx_channel(md.msg_type))].queue[kReqQ].push_back(m);
    }
    queue.pop_front();
  }

  // --- request path (target side) ------------------------------------------
  static std::uint64_t assembly_key(NodeId src, std::uint32_t rob_idx) {
    return (std::uint64_t(std::uint16_t(src.x)) << 48) |
           (std::uint64_t(std::uint16_t(src.y)) << 32) | rob_idx;
  }

  struct WriteAssembly {
    std::uint8_t axi_id = 0;
    std::uint32_t serial = 0;
    std::uint16_t expected_beats = 0;
    std::uint16_t w_arrived = 0;
    bool aw_seen = false;
  };

  void handle_request(const Flit& f, Cycle now) {
    if (!target_)
      throw ProtocolError(name_ + ": request arrived at endpoint with no target");
    const AxiMsg cls = class_of(f.header.msg_type);
    const BusKind bus = bus_of(f.header.msg_type);
    if (cls == AxiMsg::AR) {
      target_->serve_read(*this,
                          RequestJob{f.header.src, f.header.rob_idx,
                                     f.header.axi_id, bus, f.payload.txn_serial,
                                     f.payload.burst_len},
                          now);
      return;
    }
    const std::uint64_t key = assembly_key(f.header.src, f.header.rob_idx);
    WriteAssembly& wa = assemblies_[key];
    wa.expected_beats = f.payload.burst_len;
    if (cls == AxiMsg::AW) {
      wa.aw_seen = true;
      wa.axi_id = f.header.axi_id;
      wa.serial = f.payload.txn_serial;
    } else if (cls == AxiMsg::W) {
      ++wa.w_arrived;
    } else {
      throw ProtocolError(name_ + ": response class flit on request path");
    }
    if (wa.aw_seen && wa.w_arrived == wa.expected_beats) {
      target_->serve_write(*this,
                           RequestJob{f.header.src, f.header.rob_idx, wa.axi_id,
                                      bus, wa.serial, wa.expected_beats},
                           now);
      assemblies_.erase(key);
    }
  }

  static constexpr std::size_t kEjectDepth = 2;

  NodeId node_;
  NiConfig cfg_;
  std::string name_;
  Recorder* recorder_;
  TargetModel* target_ = nullptr;
  DeliverySink* sink_ = nullptr;
  std::function<bool(NodeId)> route_valid_;
  std::function<void(Cycle, const std::string&, std::uint64_t, std::uint32_t)>
      occupancy_sink_;

  std::array<TxState, kChannelCount> tx_{};
  std::array<FlitLink*, kChannelCount> rx_{nullptr, nullptr, nullptr};
  std::array<DomainState, kDomainCount> domains_{};
  std::array<std::deque<PendingReq>, 2> pending_{};
  std::array<std::uint32_t, 2> outstanding_{0, 0};
  std::array<bool, kDomainCount> enqueued_this_cycle_{};
  std::unordered_map<std::uint64_t, WriteAssembly> assemblies_;

  std::uint64_t rob_stall_cycles_ = 0;
  std::uint64_t reorder_table_stall_cycles_ = 0;
  std::uint64_t direct_forwards_ = 0;
  std::uint64_t buffered_beats_ = 0;
  std::uint64_t last_free_bytes_ = ~0ULL;
  std::uint32_t last_outstanding_ = ~0U;
};

/// Single-ported FIFO service per bus: a fixed access latency, then one
/// response beat per cycle; overlapping requests are served strictly in
/// arrival order, back to back.
class MemoryModel : public TargetModel {
 public:
  explicit MemoryModel(std::uint32_t service_latency)
      : latency_(service_latency) {}

  void serve_read(NetworkInterface& ni, const RequestJob& job,
                  Cycle now) override {
    const Cycle start = schedule(job.bus, now, job.burst_len);
    ni.queue_response(ResponseMsg{
        job.src, job.rob_idx, make_msg_type(job.bus, AxiMsg::R), job.axi_id,
        job.burst_len, job.serial, job.burst_len, start});
  }

  void serve_write(NetworkInterface& ni, const RequestJob& job,
                   Cycle now) override {
    const Cycle start = schedule(job.bus, now, 1);
    ni.queue_response(ResponseMsg{job.src, job.rob_idx,
                                  make_msg_type(job.bus, AxiMsg::B), job.axi_id,
                                  1, job.serial, job.burst_len, start});
  }

 private:
  Cycle schedule(BusKind bus, Cycle now, std::uint16_t beats) {
    Cycle& next_free = next_free_[int(bus)];
    const Cycle start = std::max<Cycle>(now + latency_, next_free);
    next_free = start + beats;
    return start;
  }

  std::uint32_t latency_;
  std::array<Cycle, 2> next_free_{0, 0};
};

}  // namespace noc
