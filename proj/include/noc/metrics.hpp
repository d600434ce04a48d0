// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "noc/axi.hpp"
#include "noc/rng.hpp"
#include "noc/sim.hpp"
#include "noc/types.hpp"

namespace noc {

/// Shared measurement state for one simulation run. Components append in
/// kernel commit order, which is fixed by registration order, so the
/// recorded traces are deterministic.
class Recorder {
 public:
  // --- issue side -------------------------------------------------------
  void record_issue(const AxiTransaction& txn) { issued_.push_back(txn); }

  void mark_measured(std::uint32_t serial) { measured_.insert(serial); }
  bool is_measured(std::uint32_t serial) const {
    return measured_.count(serial) > 0;
  }

  // --- delivery side ----------------------------------------------------
  /// Every response beat that crosses an initiator's AXI boundary.
  void record_beat_delivery(NodeId initiator, BusKind bus, TxnKind kind,
                            std::uint8_t axi_id, std::uint32_t serial,
                            std::uint16_t beat, std::uint16_t payload_bits,
                            Cycle cycle) {
    auto& digest = beat_order_[{initiator, bus, kind, axi_id}];
    digest.update((std::uint64_t(serial) << 16) | beat);
    if (payload_bits == 512 && is_measured(serial)) {
      measured_wide_bytes_ += 64;
      last_measured_wide_delivery_ = cycle;
    }
    if (beat_probe_) beat_probe_(serial, beat, cycle);
  }

  /// Test hook observing every delivered beat.
  void set_beat_probe(
      std::function<void(std::uint32_t serial, std::uint16_t beat, Cycle)> p) {
    beat_probe_ = std::move(p);
  }

  /// Final beat of a transaction delivered: the transaction completes.
  void record_completion(const DeliveryRecord& rec) {
    deliveries_.push_back(rec);
  }

  /// Called by a kernel transfer observer for every link transfer.
  void observe_transfer(Cycle cycle, ChannelKind channel, const Flit& f) {
    channel_flit_cycles_[int(channel)] += 1;
    channel_payload_bits_[int(channel)] += f.payload_bits;
    if (f.payload_bits == 512 && is_measured(f.payload.txn_serial) &&
        !first_measured_wide_transfer_.has_value()) {
      first_measured_wide_transfer_ = cycle;
    }
  }

  std::uint64_t channel_flit_cycles(ChannelKind ch) const {
    return channel_flit_cycles_[int(ch)];
  }
  std::uint64_t channel_payload_bytes(ChannelKind ch) const {
    return channel_payload_bits_[int(ch)] / 8;
  }

  // --- counters from NIs, merged at end of run ---------------------------
  void add_stalls(std::uint64_t rob_stall, std::uint64_t table_stall,
                  std::uint64_t frag_misses) {
    rob_stall_cycles_ += rob_stall;
    reorder_table_stall_cycles_ += table_stall;
    fragmentation_misses_ += frag_misses;
  }

  // --- views --------------------------------------------------------------
  const std::vector<AxiTransaction>& issued() const { return issued_; }
  const DeliveryTrace& deliveries() const { return deliveries_; }

  std::uint64_t measured_wide_bytes() const { return measured_wide_bytes_; }
  std::optional<Cycle> wide_window_start() const {
    return first_measured_wide_transfer_;
  }
  std::optional<Cycle> wide_window_end() const {
    return last_measured_wide_delivery_;
  }

  std::uint64_t rob_stall_cycles() const { return rob_stall_cycles_; }
  std::uint64_t reorder_table_stall_cycles() const {
    return reorder_table_stall_cycles_;
  }
  std::uint64_t fragmentation_misses() const { return fragmentation_misses_; }

  /// Digest of the per-(initiator, bus, kind, id) beat delivery sequences.
  /// Two runs with equal digests delivered every ordered stream identically.
  std::map<std::tuple<NodeId, BusKind, TxnKind, std::uint8_t>, std::uint64_t>
  beat_order_digests() const {
    std::map<std::tuple<NodeId, BusKind, TxnKind, std::uint8_t>, std::uint64_t> r;
    for (const auto& [k, v] : beat_order_) r[k] = v.value();
    return r;
  }

 private:
  std::vector<AxiTransaction> issued_;
  DeliveryTrace deliveries_;
  std::set<std::uint32_t> measured_;
  std::map<std::tuple<NodeId, BusKind, TxnKind, std::uint8_t>, Fnv1a> beat_order_;
  std::function<void(std::uint32_t, std::uint16_t, Cycle)> beat_probe_;

  std::uint64_t measured_wide_bytes_ = 0;
  std::optional<Cycle> first_measured_wide_transfer_;
  std::optional<Cycle> last_measured_wide_delivery_;
  std::array<std::uint64_t, kChannelCount> channel_flit_cycles_{};
  std::array<std::uint64_t, kChannelCount> channel_payload_bits_{};

  std::uint64_t rob_stall_cycles_ = 0;
  std::uint64_t reorder_table_stall_cycles_ = 0;
  std::uint64_t fragmentation_misses_ = 0;
};

struct LatencyStats {
  std::uint64_t count = 0;
  double mean = 0.0;
  double median = 0.0;
  double p99 = 0.0;
  std::uint64_t min = 0;
  std::uint64_t max = 0;
};

inline LatencyStats summarize_latencies(std::vector<std::uint64_t> samples) {
  LatencyStats s;
  if (samples.empty()) return s;
  std::sort(samples.begin(), samples.end());
  s.count = samples.size();
  s.min = samples.front();
  s.max = samples.back();
  double sum = 0.0;
  for (auto v : samples) sum += double(v);
  s.mean = sum / double(samples.size());
  s.median = double(samples[samples.size() / 2]);
  s.p99 = double(samples[std::min(samples.size() - 1,
                                  std::size_t(double(samples.size()) * 0.99))]);
  return s;
}

/// Per-experiment metrics: latency samples, delivered payload, effective
/// wide bandwidth over the active window, stall and safety counters.
struct SimReport {
  Cycle cycles_run = 0;
  bool drained = false;
  std::uint64_t total_transfers = 0;
  std::uint64_t trace_digest = 0;

  LatencyStats narrow_read_latency;  // measured narrow reads
  LatencyStats wide_read_latency;    // measured wide reads

  /// Link-cycles spent transferring and payload carried, per channel kind
  /// (all traffic, both directions).
  std::array<std::uint64_t, kChannelCount> channel_busy_cycles{};
  std::array<std::uint64_t, kChannelCount> channel_payload_bytes{};

  std::uint64_t measured_wide_bytes = 0;
  Cycle wide_window_cycles = 0;
  double effective_wide_bw_pct = 0.0;  // in [0,100]

  std::uint64_t completed_txns = 0;
  std::uint64_t timeouts = 0;  // issued but not completed; report is flagged
  std::uint64_t rob_stall_cycles = 0;
  std::uint64_t reorder_table_stall_cycles = 0;
  std::uint64_t fragmentation_misses = 0;
};

/// Condense a finished run. Latency is measured from issue to the cycle
/// the last response beat crosses back over the initiator's AXI side.
inline SimReport measure(const Recorder& rec, const KernelRunInfo& info) {
  SimReport r;
  r.cycles_run = info.cycles_run;
  r.drained = info.drained;
  r.total_transfers = info.total_transfers;
  r.trace_digest = info.trace_digest;

  std::map<std::uint32_t, const AxiTransaction*> by_serial;
  for (const auto& t : rec.issued()) by_serial[t.serial] = &t;

  std::vector<std::uint64_t> narrow_lat;
  std::vector<std::uint64_t> wide_lat;
  for (const auto& d : rec.deliveries()) {
    const AxiTransaction* t = by_serial.at(d.serial);
    if (!rec.is_measured(d.serial)) continue;
    const std::uint64_t lat = d.completion_cycle - t->issue_cycle;
    if (t->bus == BusKind::Narrow && t->kind == TxnKind::Read)
      narrow_lat.push_back(lat);
    if (t->bus == BusKind::Wide && t->kind == TxnKind::Read)
      wide_lat.push_back(lat);
  }
  r.narrow_read_latency = summarize_latencies(std::move(narrow_lat));
  r.wide_read_latency = summarize_latencies(std::move(wide_lat));

  for (int ch = 0; ch < kChannelCount; ++ch) {
    r.channel_busy_cycles[ch] =
        rec.channel_flit_cycles(static_cast<ChannelKind>(ch));
    r.channel_payload_bytes[ch] =
        rec.channel_payload_bytes(static_cast<ChannelKind>(ch));
  }

  r.measured_wide_bytes = rec.measured_wide_bytes();
  if (rec.wide_window_start() && rec.wide_window_end() &&
      *rec.wide_window_end() > *rec.wide_window_start()) {
    // Elapsed cycles between the first wide data beat entering the
    // network and the last one crossing back over the AXI side.
    r.wide_window_cycles = *rec.wide_window_end() - *rec.wide_window_start();
    r.effective_wide_bw_pct = 100.0 * double(r.measured_wide_bytes) /
                              (double(r.wide_window_cycles) * 64.0);
  }

  r.completed_txns = rec.deliveries().size();
  r.timeouts = rec.issued().size() - rec.deliveries().size();
  r.rob_stall_cycles = rec.rob_stall_cycles();
  r.reorder_table_stall_cycles = rec.reorder_table_stall_cycles();
  r.fragmentation_misses = rec.fragmentation_misses();
  return r;
}

}  // namespace noc
