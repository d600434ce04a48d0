// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "noc/axi.hpp"
#include "noc/types.hpp"

namespace noc {

enum class Direction : std::uint8_t { Unidirectional, Bidirectional };

/// Which interference sweep an experiment runs: latency mode varies the
/// number of wide burst transactions against a fixed set of measured
/// narrow reads; bandwidth mode varies narrow transactions against a
/// fixed set of measured wide bursts.
enum class ExperimentMode : std::uint8_t { Latency, Bandwidth };

struct TrafficSpec {
  std::uint32_t narrow_txn_count = 100;
  std::uint32_t wide_txn_count = 16;
  std::uint16_t wide_burst_len = 16;
  std::vector<std::uint32_t> interference_levels = {0, 2, 4, 8, 16, 32, 64};
  Direction direction = Direction::Unidirectional;
  NodeId source{0, 0};
  NodeId target{1, 0};
  /// Issue period of latency-measured narrow reads: periodic remote
  /// loads, comfortably above the zero-load round trip so the level-0
  /// baseline is queue-free.
  Cycle narrow_issue_period = 16;
  std::uint64_t seed = 1;
};

inline void validate(const TrafficSpec& s) {
  if (s.source == s.target)
    throw ConfigError("remote-traffic source equals target");
  if (!std::is_sorted(s.interference_levels.begin(),
                      s.interference_levels.end()))
    throw ConfigError("interference levels must be sorted ascending");
  if (s.wide_burst_len < 1 || std::uint32_t(s.wide_burst_len) * 64 > kAxiMaxBurstBytes)
    throw ConfigError("wide burst length out of range");
}

struct PlannedTxn {
  AxiTransaction txn;
  bool measured = false;
  bool serial = false;  // closed loop: next issues after this completes
};

/// Per-endpoint issue schedule, a deterministic function of TrafficSpec.
struct EndpointPlan {
  NodeId node{};
  std::vector<PlannedTxn> txns;  // open txns sorted by issue cycle
};

struct TrafficPlan {
  std::vector<EndpointPlan> endpoints;
  std::uint32_t next_serial = 0;
};

namespace detail {

inline AxiTransaction make_txn(NodeId src, NodeId dst, BusKind bus,
                               TxnKind kind, std::uint16_t burst,
                               std::uint8_t axi_id, Cycle issue,
                               std::uint32_t serial) {
  AxiTransaction t;
  t.initiator = src;
  t.dst = dst;
  t.bus = bus;
  t.kind = kind;
  t.burst_len = burst;
  t.beat_bytes = beat_bytes_of(bus);
  t.axi_id = axi_id;
  t.issue_cycle = issue;
  t.serial = serial;
  return t;
}

/// One direction of the interference pattern. Wide DMA-style burst reads
/// all issue at cycle 0, open loop, as many outstanding as end-to-end
/// flow control admits. Latency-measured narrow reads are periodic
/// remote loads; as pure interference (bandwidth mode) narrow reads fire
/// open loop at cycle 0 like cores hammering a remote together.
inline void add_flow(TrafficPlan& plan, NodeId src, NodeId dst,
                     std::uint32_t narrow_count, std::uint32_t wide_count,
                     std::uint16_t wide_burst, bool measure_narrow,
                     bool measure_wide, Cycle narrow_period,
                     std::uint32_t id_space) {
  EndpointPlan ep;
  ep.node = src;
  for (std::uint32_t i = 0; i < wide_count; ++i) {
    PlannedTxn p;
    p.txn = make_txn(src, dst, BusKind::Wide, TxnKind::Read, wide_burst,
                     std::uint8_t(i % id_space), 0, plan.next_serial++);
    p.measured = measure_wide;
    ep.txns.push_back(p);
  }
  for (std::uint32_t i = 0; i < narrow_count; ++i) {
    PlannedTxn p;
    p.txn = make_txn(src, dst, BusKind::Narrow, TxnKind::Read, 1,
                     std::uint8_t(i % id_space), i * narrow_period,
                     plan.next_serial++);
    p.measured = measure_narrow;
    ep.txns.push_back(p);
  }
  plan.endpoints.push_back(std::move(ep));
}

}  // namespace detail

/// Issue schedule for one interference level of the sweep. The measured
/// class depends on the mode; mirrored traffic in bidirectional runs is
/// load, not measurement. id_space is the number of distinct AXI IDs the
/// generators cycle through.
inline TrafficPlan generate(const TrafficSpec& spec, ExperimentMode mode,
                            std::uint32_t level, std::uint32_t id_space = 16) {
  validate(spec);
  if (id_space == 0 || id_space > 256)
    throw ConfigError("id space must be 1..256");
  TrafficPlan plan;
  const std::uint32_t narrow =
      mode == ExperimentMode::Latency ? spec.narrow_txn_count : level;
  const std::uint32_t wide =
      mode == ExperimentMode::Latency ? level : spec.wide_txn_count;
  const bool measure_narrow = mode == ExperimentMode::Latency;
  const bool measure_wide = mode == ExperimentMode::Bandwidth;
  const Cycle narrow_period =
      mode == ExperimentMode::Latency ? spec.narrow_issue_period : 0;
  detail::add_flow(plan, spec.source, spec.target, narrow, wide,
                   spec.wide_burst_len, measure_narrow, measure_wide,
                   narrow_period, id_space);
  if (spec.direction == Direction::Bidirectional) {
    detail::add_flow(plan, spec.target, spec.source, narrow, wide,
                     spec.wide_burst_len, false, false, narrow_period,
                     id_space);
  }
  return plan;
}

}  // namespace noc
