// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "noc/link.hpp"
#include "noc/rng.hpp"
#include "noc/types.hpp"

namespace noc {

struct SimConfig {
  Cycle max_cycles = 1'000'000;
  std::uint64_t seed = 1;
  bool record_trace = false;
  /// Extra per-cycle contract checks: propose idempotence (fixed point),
  /// payload stability under stalled valid, conservation cross-checks.
  bool debug_checks = true;
};

/// One directed valid-ready wire carrying flits. The producer drives
/// valid+flit during propose, the consumer drives ready; a transfer
/// happens in a cycle iff both are set. Signals persist through commit so
/// both sides can observe fired().
class FlitLink {
 public:
  FlitLink(std::uint32_t id, ChannelKind channel, std::string label)
      : id_(id), channel_(channel), label_(std::move(label)) {}

  // Producer side.
  void drive(const Flit& f) {
    valid_ = true;
    flit_ = f;
  }
  void drive_idle() { valid_ = false; }

  // Consumer side.
  void set_ready(bool r) { ready_ = r; }

  bool valid() const { return valid_; }
  bool ready() const { return ready_; }
  bool fired() const { return valid_ && ready_; }
  const Flit& flit() const { return flit_; }

  std::uint32_t id() const { return id_; }
  ChannelKind channel() const { return channel_; }
  const std::string& label() const { return label_; }

  std::uint64_t fired_total() const { return fired_total_; }

  /// Called by the producer in commit when it acted on fired().
  void confirm_sent() { ++sent_confirmed_; }
  /// Called by the consumer in commit when it acted on fired().
  void confirm_received() { ++recv_confirmed_; }

  std::uint64_t sent_confirmed() const { return sent_confirmed_; }
  std::uint64_t recv_confirmed() const { return recv_confirmed_; }

 private:
  friend class Kernel;

  void end_cycle() {
    if (fired()) ++fired_total_;
    prev_valid_ = valid_;
    prev_ready_ = ready_;
    prev_flit_ = flit_;
    valid_ = false;
    ready_ = false;
  }

  /// A sender that saw valid && !ready must hold valid with the same
  /// payload next cycle.
  bool stability_violated() const {
    if (!prev_valid_ || prev_ready_) return false;
    return !valid_ || !(flit_ == prev_flit_);
  }

  std::uint32_t id_;
  ChannelKind channel_;
  std::string label_;

  bool valid_ = false;
  bool ready_ = false;
  Flit flit_{};

  bool prev_valid_ = false;
  bool prev_ready_ = false;
  Flit prev_flit_{};

  std::uint64_t fired_total_ = 0;
  std::uint64_t sent_confirmed_ = 0;
  std::uint64_t recv_confirmed_ = 0;
};

/// Anything the kernel ticks. propose() may only read registered state
/// and write link signals; it must be idempotent within a cycle. commit()
/// samples fired links and updates registered state.
class Component {
 public:
  virtual ~Component() = default;
  virtual void propose(Cycle now) = 0;
  virtual void commit(Cycle now) = 0;
  virtual const std::string& name() const = 0;
  /// True when the component holds no pending work of any kind.
  virtual bool idle() const = 0;
};

/// One row per transfer, emitted when tracing is enabled.
struct TraceRow {
  Cycle cycle;
  std::uint32_t link_id;
  ChannelKind channel;
  NodeId src;
  NodeId dst;
  MsgType msg_type;
  std::uint32_t rob_idx;
  bool last;
};

using TraceSink = std::function<void(const TraceRow&)>;
/// Observes every transfer; used by metric collectors.
using TransferObserver = std::function<void(Cycle, const FlitLink&)>;

struct KernelRunInfo {
  Cycle cycles_run = 0;
  std::uint64_t total_transfers = 0;
  bool drained = false;  // all components idle before max_cycles
  std::uint64_t trace_digest = 0;
};

/// Deterministic cycle-driven engine. Each cycle: one propose pass over
/// all components in registration order, transfer bookkeeping, then one
/// commit pass. Ready/valid never depend combinationally on each other
/// because every consumer input is buffered, so a single propose pass
/// reaches the fixed point; debug mode re-proposes once and reports any
/// link that failed to stabilize.
class Kernel {
 public:
  template <typename T, typename... Args>
  T& add_component(Args&&... args) {
    static_assert(std::is_base_of_v<Component, T>);
    if (started_) throw ConfigError("component registered after simulation start");
    auto owned = std::make_unique<T>(std::forward<Args>(args)...);
    T& ref = *owned;
    components_.push_back(std::move(owned));
    return ref;
  }

  FlitLink& add_link(ChannelKind channel, std::string label) {
    if (started_) throw ConfigError("link registered after simulation start");
    links_.push_back(std::make_unique<FlitLink>(
        static_cast<std::uint32_t>(links_.size()), channel, std::move(label)));
    return *links_.back();
  }

  std::size_t component_count() const { return components_.size(); }
  std::size_t link_count() const { return links_.size(); }
  const std::vector<std::unique_ptr<FlitLink>>& links() const { return links_; }

  void set_trace_sink(TraceSink sink) { trace_sink_ = std::move(sink); }
  void add_transfer_observer(TransferObserver obs) {
    observers_.push_back(std::move(obs));
  }

  Cycle now() const { return now_; }

  KernelRunInfo run(const SimConfig& cfg) {
    if (cfg.max_cycles == 0) throw ConfigError("max_cycles must be > 0");
    started_ = true;
    KernelRunInfo info;
    Fnv1a digest;
    for (Cycle c = 0; c < cfg.max_cycles; ++c) {
      now_ = c;
      for (auto& comp : components_) comp->propose(c);
      if (cfg.debug_checks) check_fixed_point(c);

      std::uint64_t transfers_this_cycle = 0;
      for (auto& link : links_) {
        if (!link->fired()) continue;
        ++transfers_this_cycle;
        const Flit& f = link->flit();
        digest.update((static_cast<std::uint64_t>(c) << 20) ^ link->id());
        digest.update(pack_flit(f));
        if (cfg.record_trace && trace_sink_) {
          trace_sink_(TraceRow{c, link->id(), link->channel(), f.header.src,
                               f.header.dst, f.header.msg_type, f.header.rob_idx,
                               f.header.last});
        }
        for (auto& obs : observers_) obs(c, *link);
      }
      info.total_transfers += transfers_this_cycle;

      for (auto& comp : components_) comp->commit(c);

      for (auto& link : links_) {
        if (cfg.debug_checks && link->stability_violated()) {
          throw KernelError("stability violation on link '" + link->label() +
                            "': payload changed or valid dropped while stalled");
        }
        link->end_cycle();
        if (cfg.debug_checks &&
            (link->fired_total() != link->sent_confirmed() ||
             link->fired_total() != link->recv_confirmed())) {
          throw KernelError("conservation mismatch on link '" + link->label() +
                            "': fired=" + std::to_string(link->fired_total()) +
                            " sent=" + std::to_string(link->sent_confirmed()) +
                            " received=" + std::to_string(link->recv_confirmed()));
        }
      }

      info.cycles_run = c + 1;
      // Drained: every component idle after traffic actually flowed. A
      // network that never carried a flit runs out its cycle budget.
      if (transfers_this_cycle == 0 && all_idle() &&
          (info.total_transfers > 0 || components_.empty())) {
        info.drained = true;
        break;
      }
    }
    info.trace_digest = digest.value();
    return info;
  }

 private:
  static std::uint64_t pack_flit(const Flit& f) {
    std::uint64_t v = 0;
    v |= static_cast<std::uint64_t>(static_cast<std::uint16_t>(f.header.dst.x));
    v |= static_cast<std::uint64_t>(static_cast<std::uint16_t>(f.header.dst.y)) << 8;
    v |= static_cast<std::uint64_t>(f.header.rob_idx & 0xffffff) << 16;
    v |= static_cast<std::uint64_t>(f.header.msg_type) << 40;
    v |= static_cast<std::uint64_t>(f.header.last) << 44;
    v |= static_cast<std::uint64_t>(f.header.axi_id) << 45;
    v ^= static_cast<std::uint64_t>(f.payload.txn_serial) << 8;
    v ^= static_cast<std::uint64_t>(f.payload.beat) << 48;
    return v;
  }

  bool all_idle() const {
    for (const auto& comp : components_) {
      if (!comp->idle()) return false;
    }
    return true;
  }

  /// Re-run propose and require every link signal to be unchanged. A
  /// component whose outputs depend on same-cycle link signals cannot
  /// stabilize in one pass and is reported by link name.
  void check_fixed_point(Cycle c) {
    snapshot_.resize(links_.size());
    for (std::size_t i = 0; i < links_.size(); ++i) {
      snapshot_[i] = {links_[i]->valid(), links_[i]->ready(), links_[i]->flit()};
    }
    for (auto& comp : components_) comp->propose(c);
    for (std::size_t i = 0; i < links_.size(); ++i) {
      const auto& [v, r, f] = snapshot_[i];
      if (v != links_[i]->valid() || r != links_[i]->ready() ||
          (v && !(f == links_[i]->flit()))) {
        throw KernelError(
            "valid/ready did not reach a fixed point in one pass; unstable "
            "link '" + links_[i]->label() + "'");
      }
    }
  }

  std::vector<std::unique_ptr<Component>> components_;
  std::vector<std::unique_ptr<FlitLink>> links_;
  std::vector<std::tuple<bool, bool, Flit>> snapshot_;
  TraceSink trace_sink_;
  std::vector<TransferObserver> observers_;
  bool started_ = false;
  Cycle now_ = 0;
};

inline void write_trace_header(std::ostream& os) {
  os << "cycle,link,channel,src,dst,msg_type,rob_idx,last\n";
}

inline void write_trace_row(std::ostream& os, const TraceRow& row) {
  os << row.cycle << ',' << row.link_id << ',' << to_string(row.channel) << ','
     << to_string(row.src) << ',' << to_string(row.dst) << ','
     << to_string(row.msg_type) << ',' << row.rob_idx << ','
     << (row.last ? 1 : 0) << '\n';
}

}  // namespace noc
