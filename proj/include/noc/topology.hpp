// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "noc/link.hpp"
#include "noc/network_interface.hpp"
#include "noc/router.hpp"
#include "noc/sim.hpp"
#include "noc/types.hpp"

namespace noc {

enum class Edge : std::uint8_t { North, East, South, West };

struct MeshSpec {
  int width = 4;
  int height = 4;
  /// Memory controllers on the mesh boundary: (edge, position along it).
  std::vector<std::pair<Edge, int>> boundary_memories;
  double link_frequency_hz = 1.23e9;
};

inline void validate(const MeshSpec& s) {
  if (s.width < 1 || s.height < 1)
    throw ConfigError("mesh must be at least 1x1");
  if (s.link_frequency_hz <= 0) throw ConfigError("link frequency must be > 0");
  for (auto [edge, pos] : s.boundary_memories) {
    const int limit =
        (edge == Edge::North || edge == Edge::South) ? s.width : s.height;
    if (pos < 0 || pos >= limit)
      throw ConfigError("boundary memory position off the mesh edge");
  }
}

/// Endpoint coordinate of a boundary memory: one step outside the grid.
inline NodeId boundary_node(const MeshSpec& s, Edge edge, int pos) {
  switch (edge) {
    case Edge::North:
      return {std::int16_t(pos), std::int16_t(s.height)};
    case Edge::South:
      return {std::int16_t(pos), std::int16_t(-1)};
    case Edge::East:
      return {std::int16_t(s.width), std::int16_t(pos)};
    case Edge::West:
      return {std::int16_t(-1), std::int16_t(pos)};
  }
  return {};
}

inline bool on_grid(const MeshSpec& s, NodeId n) {
  return n.x >= 0 && n.x < s.width && n.y >= 0 && n.y < s.height;
}

/// Whether an XY path from src to dst exists with pruned turns: a flit
/// entering a router from N or S never exits E or W. Consequences on the
/// extended grid: a north/south boundary node can only send down its own
/// column, and an east/west boundary node is only reachable along its own
/// row (the x-first leg must run inside that row).
inline bool xy_path_legal(const MeshSpec& s, NodeId src, NodeId dst) {
  const bool src_ns_boundary = src.y < 0 || src.y >= s.height;
  if (src_ns_boundary && dst.x != src.x) return false;
  const bool dst_ew_boundary = dst.x < 0 || dst.x >= s.width;
  if (dst_ew_boundary && src.y != dst.y) return false;
  return true;
}

struct BuiltMesh {
  std::vector<NetworkInterface*> tile_nis;  // row-major, width*height
  std::vector<NetworkInterface*> memory_nis;
  std::vector<Router*> routers;  // per active channel, then row-major
  std::vector<NodeId> tile_nodes;
  std::vector<NodeId> memory_nodes;
  std::vector<std::unique_ptr<MemoryModel>> memory_models;
  std::vector<ChannelKind> active_channels;

  NetworkInterface* ni_at(NodeId n) const {
    for (auto* ni : tile_nis)
      if (ni->node() == n) return ni;
    for (auto* ni : memory_nis)
      if (ni->node() == n) return ni;
    throw ConfigError("no NI at " + to_string(n));
  }
};

/// Builds one router grid per active physical channel plus an NI and a
/// memory target per tile, wires every link, and terminates unused edge
/// ports. Boundary memories hang off the free cardinal port of their edge
/// router. Registration order is fixed, which pins the kernel's commit
/// order and with it run determinism.
inline BuiltMesh build_mesh(Kernel& kernel, const MeshSpec& spec,
                            const NiConfig& ni_cfg, const RouterConfig& rt_cfg,
                            Recorder* recorder) {
  validate(spec);
  if (rt_cfg.num_ports != 5)
    throw ConfigError("mesh wiring expects 5-port routers");

  BuiltMesh mesh;
  if (ni_cfg.wide_only)
    mesh.active_channels = {ChannelKind::Wide};
  else
    mesh.active_channels = {ChannelKind::NarrowReq, ChannelKind::NarrowRsp,
                            ChannelKind::Wide};

  const int w = spec.width;
  const int h = spec.height;
  auto router_name = [](ChannelKind ch, int x, int y) {
    return std::string(to_string(ch)) + "_router_" + std::to_string(x) + "_" +
           std::to_string(y);
  };

  // Routers, one grid per channel.
  std::vector<std::vector<Router*>> grid(kChannelCount);
  for (ChannelKind ch : mesh.active_channels) {
    grid[int(ch)].resize(std::size_t(w) * h);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        RouterConfig rc = rt_cfg;
        rc.position = {std::int16_t(x), std::int16_t(y)};
        Router& r = kernel.add_component<Router>(rc, router_name(ch, x, y));
        grid[int(ch)][std::size_t(y) * w + x] = &r;
        mesh.routers.push_back(&r);
      }
    }
  }

  // Inter-router links.
  for (ChannelKind ch : mesh.active_channels) {
    auto& g = grid[int(ch)];
    auto at = [&](int x, int y) { return g[std::size_t(y) * w + x]; };
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (x + 1 < w) {
          FlitLink& east = kernel.add_link(
              ch, router_name(ch, x, y) + "->" + router_name(ch, x + 1, y));
          at(x, y)->connect_output(kPortEast, &east);
          at(x + 1, y)->connect_input(kPortWest, &east);
          FlitLink& west = kernel.add_link(
              ch, router_name(ch, x + 1, y) + "->" + router_name(ch, x, y));
          at(x + 1, y)->connect_output(kPortWest, &west);
          at(x, y)->connect_input(kPortEast, &west);
        }
        if (y + 1 < h) {
          FlitLink& north = kernel.add_link(
              ch, router_name(ch, x, y) + "->" + router_name(ch, x, y + 1));
          at(x, y)->connect_output(kPortNorth, &north);
          at(x, y + 1)->connect_input(kPortSouth, &north);
          FlitLink& south = kernel.add_link(
              ch, router_name(ch, x, y + 1) + "->" + router_name(ch, x, y));
          at(x, y + 1)->connect_output(kPortSouth, &south);
          at(x, y)->connect_input(kPortNorth, &south);
        }
      }
    }
  }

  // Endpoint set for route validation.
  auto endpoints = std::make_shared<std::set<NodeId>>();
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      endpoints->insert({std::int16_t(x), std::int16_t(y)});
  for (auto [edge, pos] : spec.boundary_memories) {
    const NodeId n = boundary_node(spec, edge, pos);
    if (!endpoints->insert(n).second)
      throw ConfigError("duplicate boundary memory at " + to_string(n));
  }

  const std::uint32_t service_latency =
      ni_cfg.internal_latency_cycles > 2 ? ni_cfg.internal_latency_cycles - 2 : 0;

  auto make_ni = [&](NodeId node, const std::string& name) {
    NetworkInterface& ni =
        kernel.add_component<NetworkInterface>(node, ni_cfg, name, recorder);
    MeshSpec spec_copy = spec;
    ni.set_route_validator([endpoints, spec_copy, node](NodeId dst) {
      if (!endpoints->count(dst)) return false;
      return xy_path_legal(spec_copy, node, dst) &&
             xy_path_legal(spec_copy, dst, node);
    });
    mesh.memory_models.push_back(std::make_unique<MemoryModel>(service_latency));
    ni.attach_target(mesh.memory_models.back().get());
    return &ni;
  };

  // Tile NIs wired to the local port of each router grid.
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const NodeId node{std::int16_t(x), std::int16_t(y)};
      NetworkInterface* ni = make_ni(
          node, "ni_" + std::to_string(x) + "_" + std::to_string(y));
      mesh.tile_nis.push_back(ni);
      mesh.tile_nodes.push_back(node);
      for (ChannelKind ch : mesh.active_channels) {
        Router* r = grid[int(ch)][std::size_t(y) * w + x];
        FlitLink& in = kernel.add_link(
            ch, ni->name() + "->" + router_name(ch, x, y));
        ni->connect_to_router(ch, &in);
        r->connect_input(kPortLocal, &in);
        FlitLink& out = kernel.add_link(
            ch, router_name(ch, x, y) + "->" + ni->name());
        r->connect_output(kPortLocal, &out);
        ni->connect_from_router(ch, &out);
      }
    }
  }

  // Boundary memories on the free cardinal port of their edge router.
  for (auto [edge, pos] : spec.boundary_memories) {
    const NodeId node = boundary_node(spec, edge, pos);
    int rx = 0, ry = 0, port = 0;
    switch (edge) {
      case Edge::North:
        rx = pos, ry = h - 1, port = kPortNorth;
        break;
      case Edge::South:
        rx = pos, ry = 0, port = kPortSouth;
        break;
      case Edge::East:
        rx = w - 1, ry = pos, port = kPortEast;
        break;
      case Edge::West:
        rx = 0, ry = pos, port = kPortWest;
        break;
    }
    NetworkInterface* ni = make_ni(
        node, "mem_" + std::to_string(node.x) + "_" + std::to_string(node.y));
    mesh.memory_nis.push_back(ni);
    mesh.memory_nodes.push_back(node);
    for (ChannelKind ch : mesh.active_channels) {
      Router* r = grid[int(ch)][std::size_t(ry) * w + rx];
      FlitLink& in = kernel.add_link(ch, ni->name() + "->" +
                                             router_name(ch, rx, ry));
      ni->connect_to_router(ch, &in);
      r->connect_input(port, &in);
      FlitLink& out = kernel.add_link(ch, router_name(ch, rx, ry) + "->" +
                                              ni->name());
      r->connect_output(port, &out);
      ni->connect_from_router(ch, &out);
    }
  }

  return mesh;
}

// --- analytic bandwidth -----------------------------------------------------

struct LinkBandwidth {
  double simplex_bps = 0;
  double duplex_bps = 0;
};

/// Payload bits per cycle times link frequency, simplex and duplex.
inline LinkBandwidth peak_link_bandwidth(std::uint32_t payload_bits_per_cycle,
                                         double frequency_hz) {
  if (frequency_hz <= 0) throw ConfigError("frequency must be > 0");
  LinkBandwidth bw;
  bw.simplex_bps = double(payload_bits_per_cycle) * frequency_hz;
  bw.duplex_bps = 2.0 * bw.simplex_bps;
  return bw;
}

inline int boundary_port_count(const MeshSpec& s) {
  return 2 * (s.width + s.height);
}

struct BoundaryBandwidth {
  int ports = 0;
  double wide_bits_per_s = 0;   // aggregate duplex wide links
  double wide_bytes_per_s = 0;
  double narrow_bits_per_s = 0;  // optional extra: both narrow links
};

/// Aggregate duplex bandwidth across every boundary port of the mesh,
/// wide links only; the narrow contribution is reported separately.
inline BoundaryBandwidth boundary_bandwidth(const MeshSpec& s) {
  validate(s);
  BoundaryBandwidth out;
  out.ports = boundary_port_count(s);
  const LinkBandwidth wide = peak_link_bandwidth(512, s.link_frequency_hz);
  out.wide_bits_per_s = out.ports * wide.duplex_bps;
  out.wide_bytes_per_s = out.wide_bits_per_s / 8.0;
  const LinkBandwidth narrow = peak_link_bandwidth(64, s.link_frequency_hz);
  out.narrow_bits_per_s = out.ports * 2 * narrow.duplex_bps;
  return out;
}

}  // namespace noc
