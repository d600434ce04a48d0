// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "noc/endpoints.hpp"
#include "noc/metrics.hpp"
#include "noc/network_interface.hpp"
#include "noc/rng.hpp"
#include "noc/router.hpp"
#include "noc/sim.hpp"
#include "noc/topology.hpp"
#include "noc/traffic.hpp"
#include "noc/types.hpp"

namespace noc {

enum class Variant : std::uint8_t { NarrowWide, WideOnly };

constexpr std::string_view to_string(Variant v) {
  return v == Variant::NarrowWide ? "narrow-wide" : "wide-only";
}
constexpr std::string_view to_string(Direction d) {
  return d == Direction::Unidirectional ? "one_dir" : "two_dir";
}

struct ExperimentConfig {
  MeshSpec mesh;
  NiConfig ni;
  RouterConfig router;
  TrafficSpec traffic;
  Variant variant = Variant::NarrowWide;
  ExperimentMode mode = ExperimentMode::Latency;
  Cycle max_cycles = 2'000'000;
  std::uint32_t sink_stall_pct = 0;
  bool record_trace = false;
  bool debug_checks = true;
  std::string out_dir = ".";
};

struct RunResult {
  SimReport report;
  std::map<std::tuple<NodeId, BusKind, TxnKind, std::uint8_t>, std::uint64_t>
      beat_order_digests;
  std::uint64_t cross_id_reorders = 0;  // distinct-ID pairs seen out of issue order
};

namespace detail {

/// Out-of-order completions across distinct IDs of one (initiator, bus,
/// kind) group; evidence the NI does not over-serialize independent IDs.
inline std::uint64_t count_cross_id_reorders(const std::vector<AxiTransaction>& issued,
                                             const DeliveryTrace& deliveries) {
  std::map<std::uint32_t, std::size_t> issue_pos;
  for (std::size_t i = 0; i < issued.size(); ++i) issue_pos[issued[i].serial] = i;
  std::uint64_t count = 0;
  std::map<std::tuple<NodeId, BusKind, TxnKind>, std::size_t> last_seen;
  std::map<std::tuple<NodeId, BusKind, TxnKind>, std::uint8_t> last_id;
  for (const auto& d : deliveries) {
    auto key = std::make_tuple(d.initiator, d.bus, d.kind);
    const std::size_t pos = issue_pos.at(d.serial);
    auto it = last_seen.find(key);
    if (it != last_seen.end() && pos < it->second && last_id[key] != d.axi_id)
      ++count;
    if (it == last_seen.end() || pos > it->second) {
      last_seen[key] = pos;
      last_id[key] = d.axi_id;
    }
  }
  return count;
}

}  // namespace detail

/// Builds the mesh for one interference level, runs it to drain, checks
/// the ordering oracle and the flow-control safety conditions, and
/// returns the measured report. Throws on any violated invariant.
inline RunResult run_point(const ExperimentConfig& cfg, std::uint32_t level,
                           std::ostream* trace_os = nullptr,
                           std::ostream* occupancy_os = nullptr) {
  Kernel kernel;
  Recorder recorder;

  NiConfig ni_cfg = cfg.ni;
  ni_cfg.wide_only = cfg.variant == Variant::WideOnly;

  BuiltMesh mesh = build_mesh(kernel, cfg.mesh, ni_cfg, cfg.router, &recorder);
  kernel.add_transfer_observer([&recorder](Cycle c, const FlitLink& link) {
    recorder.observe_transfer(c, link.channel(), link.flit());
  });
  if (trace_os) {
    write_trace_header(*trace_os);
    kernel.set_trace_sink(
        [trace_os](const TraceRow& row) { write_trace_row(*trace_os, row); });
  }
  if (occupancy_os) {
    *occupancy_os << "cycle,ni,rob_free_bytes,outstanding\n";
    for (auto* ni : mesh.tile_nis) {
      ni->set_occupancy_sink([occupancy_os](Cycle c, const std::string& name,
                                            std::uint64_t free_bytes,
                                            std::uint32_t outstanding) {
        *occupancy_os << c << ',' << name << ',' << free_bytes << ','
                      << outstanding << '\n';
      });
    }
  }

  TrafficPlan plan = generate(cfg.traffic, cfg.mode, level,
                              std::uint32_t(1) << ni_cfg.id_bits);
  std::vector<TrafficEndpoint*> endpoints;
  for (const EndpointPlan& ep : plan.endpoints) {
    if (!on_grid(cfg.mesh, ep.node))
      throw ConfigError("traffic endpoint " + to_string(ep.node) +
                        " is not a mesh tile");
    auto& endpoint = kernel.add_component<TrafficEndpoint>(
        ep.node, "endpoint_" + to_string(ep.node), mesh.ni_at(ep.node),
        &recorder, cfg.sink_stall_pct, cfg.traffic.seed ^ 0x5eedULL);
    for (const PlannedTxn& p : ep.txns) {
      if (p.serial)
        endpoint.add_serial(p.txn, p.measured);
      else
        endpoint.add_open(p.txn, p.measured);
    }
    endpoints.push_back(&endpoint);
  }

  SimConfig sim;
  sim.max_cycles = cfg.max_cycles;
  sim.seed = cfg.traffic.seed;
  sim.record_trace = trace_os != nullptr;
  sim.debug_checks = cfg.debug_checks;
  const KernelRunInfo info = kernel.run(sim);

  for (auto* ni : mesh.tile_nis)
    recorder.add_stalls(ni->rob_stall_cycles(), ni->reorder_table_stall_cycles(),
                        ni->fragmentation_misses());

  // Flow-control safety: a drained network must have handed back every
  // byte of reorder storage and every queue must be empty.
  if (info.drained) {
    for (auto* ni : mesh.tile_nis) ni->assert_drained();
    for (auto* ni : mesh.memory_nis) ni->assert_drained();
  }

  if (auto violation = oracle_check_order(recorder.issued(), recorder.deliveries()))
    throw ProtocolError(violation->describe());

  RunResult out;
  out.report = measure(recorder, info);
  out.beat_order_digests = recorder.beat_order_digests();
  out.cross_id_reorders =
      detail::count_cross_id_reorders(recorder.issued(), recorder.deliveries());
  return out;
}

struct SweepRow {
  std::uint32_t level = 0;
  SimReport report;
};

inline std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg) {
  std::vector<SweepRow> rows;
  for (std::uint32_t level : cfg.traffic.interference_levels) {
    RunResult r = run_point(cfg, level);
    if (r.report.timeouts != 0)
      throw KernelError("sweep level " + std::to_string(level) + " left " +
                        std::to_string(r.report.timeouts) +
                        " transactions incomplete");
    rows.push_back({level, r.report});
  }
  return rows;
}

// --- CSV output --------------------------------------------------------------

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

/// Atomic write: the file appears complete or not at all.
inline void write_file_atomic(const std::filesystem::path& path,
                              const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw ConfigError("cannot write " + tmp.string());
    os << content;
  }
  std::filesystem::rename(tmp, path);
}

inline void write_latency_csv(const std::filesystem::path& path,
                              const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "interference,narrow_read_lat\n";
  for (const auto& r : rows)
    os << r.level << ',' << format_double(r.report.narrow_read_latency.mean)
       << '\n';
  write_file_atomic(path, os.str());
}

inline void write_bw_csv(const std::filesystem::path& path,
                         const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "interference,wide_read_bw\n";
  for (const auto& r : rows)
    os << r.level << ',' << format_double(r.report.effective_wide_bw_pct)
       << '\n';
  write_file_atomic(path, os.str());
}

// --- presets ------------------------------------------------------------------

inline ExperimentConfig default_experiment() {
  ExperimentConfig cfg;
  cfg.mesh.width = 4;
  cfg.mesh.height = 4;
  cfg.traffic.source = {0, 0};
  cfg.traffic.target = {1, 0};
  return cfg;
}

/// The four interference sweeps of one figure: {one_dir, two_dir} x
/// {narrow-wide, wide-only}, written as lat_* or bw_* CSV files.
struct FigureResult {
  // keyed by (direction, variant)
  std::map<std::pair<Direction, Variant>, std::vector<SweepRow>> sweeps;
};

inline FigureResult run_figure(ExperimentConfig base, ExperimentMode mode,
                               const std::string& out_dir, bool write_files) {
  base.mode = mode;
  FigureResult result;
  for (Direction dir : {Direction::Unidirectional, Direction::Bidirectional}) {
    for (Variant var : {Variant::NarrowWide, Variant::WideOnly}) {
      ExperimentConfig cfg = base;
      cfg.traffic.direction = dir;
      cfg.variant = var;
      auto rows = run_sweep(cfg);
      if (write_files) {
        const std::string stem = mode == ExperimentMode::Latency ? "lat" : "bw";
        const std::string variant_tag =
            var == Variant::NarrowWide ? "nw" : "wo";
        const std::filesystem::path path =
            std::filesystem::path(out_dir) /
            (stem + "_" + std::string(to_string(dir)) + "_" + variant_tag +
             ".csv");
        if (mode == ExperimentMode::Latency)
          write_latency_csv(path, rows);
        else
          write_bw_csv(path, rows);
      }
      result.sweeps[{dir, var}] = std::move(rows);
    }
  }
  return result;
}

struct ZeroLoadResult {
  std::uint64_t round_trip_cycles = 0;
  std::uint64_t router_cycles = 0;
  std::uint64_t ni_cycles = 0;
  std::uint64_t endpoint_internal_cycles = 0;
};

/// Zero-load adjacent-tile round trip with the physical-design router
/// configuration (two-cycle, output buffered): one narrow read, no other
/// traffic. The decomposition is measured from the flit trace, not
/// assumed: router cycles are wire-to-wire deltas across each traversal,
/// the NI cycle is the response eject stage, and the remainder is the
/// endpoint-internal request path and memory access.
inline ZeroLoadResult run_zero_load(std::uint32_t internal_latency_cycles = 9) {
  ExperimentConfig cfg = default_experiment();
  cfg.mesh.width = 2;
  cfg.mesh.height = 1;
  cfg.router.output_buffered = true;
  cfg.ni.internal_latency_cycles = internal_latency_cycles;
  cfg.traffic.narrow_txn_count = 1;
  cfg.traffic.wide_txn_count = 0;
  cfg.traffic.source = {0, 0};
  cfg.traffic.target = {1, 0};
  cfg.mode = ExperimentMode::Latency;
  cfg.max_cycles = 10'000;

  // Reconstruct the decomposition from the trace: one transfer cycle per
  // link the flit crosses.
  std::vector<Cycle> hops;
  Kernel kernel;
  Recorder recorder;
  BuiltMesh mesh = build_mesh(kernel, cfg.mesh, cfg.ni, cfg.router, &recorder);
  kernel.add_transfer_observer([&](Cycle c, const FlitLink& link) {
    recorder.observe_transfer(c, link.channel(), link.flit());
    hops.push_back(c);
  });
  auto& endpoint = kernel.add_component<TrafficEndpoint>(
      cfg.traffic.source, "endpoint_0:0", mesh.ni_at(cfg.traffic.source),
      &recorder);
  AxiTransaction txn;
  txn.initiator = cfg.traffic.source;
  txn.dst = cfg.traffic.target;
  txn.bus = BusKind::Narrow;
  txn.kind = TxnKind::Read;
  txn.burst_len = 1;
  txn.beat_bytes = 8;
  txn.serial = 0;
  endpoint.add_serial(txn, true);

  SimConfig sim;
  sim.max_cycles = cfg.max_cycles;
  kernel.run(sim);
  if (recorder.deliveries().size() != 1)
    throw KernelError("zero-load run did not complete its transaction");

  ZeroLoadResult z;
  z.round_trip_cycles = recorder.deliveries()[0].completion_cycle -
                        recorder.issued()[0].issue_cycle;
  // Trace shape: ni->rA, rA->rB, rB->niB (request), then niB->rB, rB->rA,
  // rA->niA (response). Router residency is the wire-to-wire time within
  // each direction; the gap between directions is the target turnaround.
  if (hops.size() != 6)
    throw KernelError("zero-load trace has unexpected shape");
  const std::uint64_t req_routers = hops[2] - hops[0];
  const std::uint64_t rsp_routers = hops[5] - hops[3];
  z.router_cycles = req_routers + rsp_routers;
  z.ni_cycles = recorder.deliveries()[0].completion_cycle - hops[5];
  z.endpoint_internal_cycles =
      z.round_trip_cycles - z.router_cycles - z.ni_cycles;
  return z;
}

struct BoundaryReport {
  LinkBandwidth wide_link;
  BoundaryBandwidth boundary;
};

inline BoundaryReport run_boundary_bandwidth(int width, int height,
                                             double frequency_hz = 1.23e9) {
  MeshSpec spec;
  spec.width = width;
  spec.height = height;
  spec.link_frequency_hz = frequency_hz;
  BoundaryReport r;
  r.wide_link = peak_link_bandwidth(512, frequency_hz);
  r.boundary = boundary_bandwidth(spec);
  return r;
}

// --- randomized ordering suite -------------------------------------------------

struct RandomRunSpec {
  int width = 2, height = 1;
  std::uint8_t id_bits = 2;
  std::uint32_t txn_count = 16;
  NiConfig ni;
  RouterConfig router;
  std::uint32_t sink_stall_pct = 0;
  std::uint64_t seed = 0;
};

/// Small random instance: 2-9 tiles, narrow ID space, mixed narrow/wide
/// reads and writes with burst lengths 1-16, shrunken reorder storage to
/// force stalls, and random response-side backpressure.
inline RandomRunSpec make_random_spec(std::uint64_t seed) {
  Rng rng(seed * 0x9e3779b97f4a7c15ULL + 1);
  RandomRunSpec spec;
  spec.seed = seed;
  static constexpr std::pair<int, int> kDims[] = {
      {1, 2}, {2, 1}, {1, 3}, {3, 1}, {2, 2}, {1, 4}, {4, 1},
      {2, 3}, {3, 2}, {2, 4}, {4, 2}, {3, 3}, {1, 9}, {9, 1}};
  const auto [w, h] = kDims[rng.below(std::size(kDims))];
  spec.width = w;
  spec.height = h;
  spec.id_bits = std::uint8_t(rng.range(2, 4));
  spec.txn_count = std::uint32_t(rng.range(10, 36));
  spec.ni.narrow_read_rob_bytes = std::uint32_t(rng.below(2) ? 2048 : 128 << rng.below(3));
  spec.ni.wide_read_rob_bytes = std::uint32_t(rng.below(2) ? 8192 : 1024 << rng.below(3));
  spec.ni.write_table_entries = std::uint32_t(rng.below(2) ? 64 : 1 + rng.below(4));
  spec.ni.reorder_table_entries = std::uint32_t(rng.below(2) ? 64 : 2 + rng.below(6));
  spec.ni.internal_latency_cycles = std::uint32_t(rng.range(2, 14));
  spec.ni.id_bits = spec.id_bits;
  spec.router.input_fifo_depth = int(rng.range(1, 3));
  spec.router.output_buffered = rng.below(2) == 1;
  spec.sink_stall_pct = std::uint32_t(rng.below(2) ? 0 : rng.range(10, 60));
  return spec;
}

struct RandomRunOutcome {
  RunResult result;
  std::uint64_t min_rob_free_bytes = 0;
};

/// Runs one randomized instance with bypass forced on or off. Throws on
/// any ordering, conservation or flow-control violation; a transaction
/// that never completes is a progress failure and throws too.
inline RandomRunOutcome run_random_instance(const RandomRunSpec& spec,
                                            bool bypass) {
  Rng rng(spec.seed ^ 0xabcdef1234567890ULL);
  Kernel kernel;
  Recorder recorder;

  NiConfig ni_cfg = spec.ni;
  ni_cfg.response_bypass = bypass;

  MeshSpec mesh_spec;
  mesh_spec.width = spec.width;
  mesh_spec.height = spec.height;

  RouterConfig router_cfg = spec.router;

  BuiltMesh mesh = build_mesh(kernel, mesh_spec, ni_cfg, router_cfg, &recorder);
  kernel.add_transfer_observer([&recorder](Cycle c, const FlitLink& link) {
    recorder.observe_transfer(c, link.channel(), link.flit());
  });

  std::uint64_t min_free = ~0ULL;
  for (auto* ni : mesh.tile_nis) {
    ni->set_occupancy_sink([&min_free](Cycle, const std::string&,
                                       std::uint64_t free_bytes, std::uint32_t) {
      if (free_bytes < min_free) min_free = free_bytes;
    });
  }

  std::vector<TrafficEndpoint*> endpoints;
  for (std::size_t i = 0; i < mesh.tile_nodes.size(); ++i) {
    endpoints.push_back(&kernel.add_component<TrafficEndpoint>(
        mesh.tile_nodes[i], "endpoint_" + to_string(mesh.tile_nodes[i]),
        mesh.tile_nis[i], &recorder, spec.sink_stall_pct,
        spec.seed ^ (0x1234567ULL * (i + 1))));
  }

  const std::uint32_t tiles = std::uint32_t(mesh.tile_nodes.size());
  std::vector<std::vector<AxiTransaction>> per_endpoint(tiles);
  for (std::uint32_t t = 0; t < spec.txn_count; ++t) {
    const std::uint32_t src_idx = std::uint32_t(rng.below(tiles));
    std::uint32_t dst_idx = std::uint32_t(rng.below(tiles - 1));
    if (dst_idx >= src_idx) ++dst_idx;
    AxiTransaction txn;
    txn.initiator = mesh.tile_nodes[src_idx];
    txn.dst = mesh.tile_nodes[dst_idx];
    txn.bus = rng.below(2) ? BusKind::Wide : BusKind::Narrow;
    txn.kind = rng.below(3) == 0 ? TxnKind::Write : TxnKind::Read;
    txn.beat_bytes = beat_bytes_of(txn.bus);
    const std::uint32_t rob_slots =
        txn.bus == BusKind::Wide ? ni_cfg.wide_read_rob_bytes / 64
                                 : ni_cfg.narrow_read_rob_bytes / 8;
    const std::uint16_t max_burst =
        std::uint16_t(std::min<std::uint32_t>(16, rob_slots));
    txn.burst_len = std::uint16_t(rng.range(1, max_burst));
    txn.axi_id = std::uint8_t(rng.below(1u << spec.id_bits));
    txn.issue_cycle = Cycle(rng.below(200));
    txn.serial = t;
    per_endpoint[src_idx].push_back(txn);
  }
  for (std::uint32_t i = 0; i < tiles; ++i) {
    std::stable_sort(per_endpoint[i].begin(), per_endpoint[i].end(),
                     [](const AxiTransaction& a, const AxiTransaction& b) {
                       return a.issue_cycle < b.issue_cycle;
                     });
    for (const AxiTransaction& txn : per_endpoint[i])
      endpoints[i]->add_open(txn, true);
  }

  SimConfig sim;
  sim.max_cycles = 60'000 + Cycle(spec.txn_count) * 400;
  sim.seed = spec.seed;
  sim.debug_checks = true;
  const KernelRunInfo info = kernel.run(sim);

  if (!info.drained)
    throw KernelError("randomized run " + std::to_string(spec.seed) +
                      " did not drain: progress failure");
  for (auto* ni : mesh.tile_nis) ni->assert_drained();

  if (recorder.deliveries().size() != recorder.issued().size())
    throw KernelError("randomized run lost transactions");
  if (auto violation = oracle_check_order(recorder.issued(), recorder.deliveries()))
    throw ProtocolError(violation->describe());

  RandomRunOutcome out;
  out.result.report = measure(recorder, info);
  out.result.beat_order_digests = recorder.beat_order_digests();
  out.result.cross_id_reorders =
      detail::count_cross_id_reorders(recorder.issued(), recorder.deliveries());
  out.min_rob_free_bytes = min_free;
  return out;
}

struct OrderingSuiteResult {
  std::uint64_t runs = 0;
  std::uint64_t cross_id_reorders = 0;
};

/// The ordering property sweep: every run must pass the oracle with the
/// bypass optimizations on and off, and both modes must deliver every
/// per-(initiator, bus, kind, id) stream in the same order.
inline OrderingSuiteResult run_ordering_suite(std::uint64_t runs,
                                              std::uint64_t base_seed,
                                              std::ostream* progress = nullptr) {
  OrderingSuiteResult res;
  for (std::uint64_t i = 0; i < runs; ++i) {
    const RandomRunSpec spec = make_random_spec(base_seed + i);
    const RandomRunOutcome with_bypass = run_random_instance(spec, true);
    const RandomRunOutcome without_bypass = run_random_instance(spec, false);
    if (with_bypass.result.beat_order_digests !=
        without_bypass.result.beat_order_digests)
      throw ProtocolError("bypass changed a delivery order in run " +
                          std::to_string(base_seed + i));
    res.cross_id_reorders += with_bypass.result.cross_id_reorders;
    ++res.runs;
    if (progress && (i + 1) % 1000 == 0)
      *progress << "  " << (i + 1) << "/" << runs << " runs clean\n";
  }
  return res;
}

}  // namespace noc
