// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <unordered_map>
#include <vector>

#include "noc/link.hpp"
#include "noc/sim.hpp"
#include "noc/types.hpp"

namespace noc {

/// Conventional 5-port mesh indexing. Routers with other radices use
/// plain indices; only XY routing assumes this layout.
enum Port : int {
  kPortLocal = 0,
  kPortNorth = 1,
  kPortEast = 2,
  kPortSouth = 3,
  kPortWest = 4,
};

enum class RoutingMode : std::uint8_t { XY, Table };

struct RouterConfig {
  int num_ports = 5;
  RoutingMode routing = RoutingMode::XY;
  std::unordered_map<NodeId, int> table;  // Table mode: dst -> output port
  int input_fifo_depth = 2;
  bool output_buffered = false;  // false: 1-cycle latency, true: 2-cycle
  NodeId position{};
};

/// XY routing decision relative to cfg.position: resolve x fully, then y.
/// North is +y. Total over off-grid boundary coordinates as well.
inline int route(const RouterConfig& cfg, NodeId dst) {
  if (cfg.routing == RoutingMode::Table) {
    auto it = cfg.table.find(dst);
    if (it == cfg.table.end())
      throw UnroutableError("no table route to " + to_string(dst));
    return it->second;
  }
  const NodeId at = cfg.position;
  if (dst.x > at.x) return kPortEast;
  if (dst.x < at.x) return kPortWest;
  if (dst.y > at.y) return kPortNorth;
  if (dst.y < at.y) return kPortSouth;
  return kPortLocal;
}

/// Input-buffered wormhole router. Single-cycle zero-load latency from
/// input buffering; an optional two-deep output buffer adds a second
/// cycle (elastic stage for long links). Round-robin arbitration per
/// output; a multi-beat message holds its output from the first granted
/// beat until the last one transfers. With XY routing the impossible
/// turns (N/S input to E/W output) and all loopbacks are disabled.
class Router : public Component {
 public:
  Router(RouterConfig cfg, std::string name)
      : cfg_(std::move(cfg)), name_(std::move(name)) {
    if (cfg_.num_ports < 2) throw ConfigError("router needs at least 2 ports");
    if (cfg_.input_fifo_depth < 1) throw ConfigError("input FIFO depth must be >= 1");
    in_.resize(cfg_.num_ports, nullptr);
    out_.resize(cfg_.num_ports, nullptr);
    fifo_.resize(cfg_.num_ports);
    out_fifo_.resize(cfg_.num_ports);
    lock_owner_.assign(cfg_.num_ports, -1);
    held_grant_.assign(cfg_.num_ports, -1);
    rr_.assign(cfg_.num_ports, cfg_.num_ports - 1);
    grant_.assign(cfg_.num_ports, -1);
  }

  void connect_input(int port, FlitLink* link) { in_.at(port) = link; }
  void connect_output(int port, FlitLink* link) { out_.at(port) = link; }

  const RouterConfig& config() const { return cfg_; }
  const std::string& name() const override { return name_; }

  bool idle() const override {
    for (const auto& f : fifo_)
      if (!f.empty()) return false;
    for (const auto& f : out_fifo_)
      if (!f.empty()) return false;
    return true;
  }

  void propose(Cycle) override {
    compute_grants();
    for (int o = 0; o < cfg_.num_ports; ++o) {
      if (!out_[o]) continue;
      if (cfg_.output_buffered) {
        if (!out_fifo_[o].empty())
          out_[o]->drive(out_fifo_[o].front());
        else
          out_[o]->drive_idle();
      } else {
        if (grant_[o] >= 0)
          out_[o]->drive(fifo_[grant_[o]].front());
        else
          out_[o]->drive_idle();
      }
    }
    for (int i = 0; i < cfg_.num_ports; ++i) {
      if (in_[i])
        in_[i]->set_ready(fifo_[i].size() <
                          static_cast<std::size_t>(cfg_.input_fifo_depth));
    }
  }

  void commit(Cycle) override {
    // Output side first: drain wires, then move granted flits.
    for (int o = 0; o < cfg_.num_ports; ++o) {
      if (cfg_.output_buffered) {
        if (out_[o] && out_[o]->fired()) {
          out_fifo_[o].pop_front();
          out_[o]->confirm_sent();
        }
        if (grant_[o] >= 0) {
          transfer_through(grant_[o], o);  // space was checked in propose
        }
      } else {
        if (grant_[o] >= 0) {
          if (out_[o]->fired()) {
            out_[o]->confirm_sent();
            transfer_through(grant_[o], o);
            held_grant_[o] = -1;
          } else {
            held_grant_[o] = grant_[o];  // keep payload stable while stalled
          }
        }
      }
    }
    // Input side: accept arrivals.
    for (int i = 0; i < cfg_.num_ports; ++i) {
      if (!in_[i] || !in_[i]->fired()) continue;
      if (fifo_[i].size() >= static_cast<std::size_t>(cfg_.input_fifo_depth))
        throw KernelError(name_ + ": input FIFO overflow on port " +
                          std::to_string(i) + " (upstream ignored ready)");
      fifo_[i].push_back(in_[i]->flit());
      in_[i]->confirm_received();
    }
  }

 private:
  /// The wormhole lock and round-robin pointer advance only when a flit
  /// actually moves through the switch.
  void transfer_through(int i, int o) {
    const Flit f = fifo_[i].front();
    fifo_[i].pop_front();
    if (cfg_.output_buffered) out_fifo_[o].push_back(f);
    lock_owner_[o] = f.header.last ? -1 : i;
    rr_[o] = i;
  }

  int output_for(const Flit& f, int in_port) const {
    int o = route(cfg_, f.header.dst);
    if (o < 0 || o >= cfg_.num_ports || !out_[o])
      throw KernelError(name_ + ": flit for " + to_string(f.header.dst) +
                        " routed to disconnected port " + std::to_string(o));
    if (o == in_port)
      throw KernelError(name_ + ": loopback turn " + std::to_string(in_port) +
                        " -> " + std::to_string(o));
    if (cfg_.routing == RoutingMode::XY &&
        (in_port == kPortNorth || in_port == kPortSouth) &&
        (o == kPortEast || o == kPortWest))
      throw KernelError(name_ + ": impossible XY turn " +
                        std::to_string(in_port) + " -> " + std::to_string(o));
    return o;
  }

  void compute_grants() {
    request_.assign(cfg_.num_ports, -1);
    for (int i = 0; i < cfg_.num_ports; ++i) {
      if (!fifo_[i].empty()) request_[i] = output_for(fifo_[i].front(), i);
    }
    for (int o = 0; o < cfg_.num_ports; ++o) {
      grant_[o] = -1;
      if (!out_[o]) continue;
      if (cfg_.output_buffered &&
          out_fifo_[o].size() >= kOutputBufferDepth)
        continue;
      if (!cfg_.output_buffered && held_grant_[o] >= 0) {
        // A stalled output keeps its grant until the transfer completes.
        grant_[o] = held_grant_[o];
        continue;
      }
      if (lock_owner_[o] >= 0) {
        const int owner = lock_owner_[o];
        if (request_[owner] == o) {
          grant_[o] = owner;
        } else if (request_[owner] >= 0) {
          throw KernelError(name_ + ": mid-burst flit of locked output " +
                            std::to_string(o) + " diverged to port " +
                            std::to_string(request_[owner]));
        }
        continue;
      }
      for (int step = 1; step <= cfg_.num_ports; ++step) {
        const int i = (rr_[o] + step) % cfg_.num_ports;
        if (request_[i] == o) {
          grant_[o] = i;
          break;
        }
      }
    }
  }

  static constexpr std::size_t kOutputBufferDepth = 2;

  RouterConfig cfg_;
  std::string name_;
  std::vector<FlitLink*> in_;
  std::vector<FlitLink*> out_;
  std::vector<std::deque<Flit>> fifo_;
  std::vector<std::deque<Flit>> out_fifo_;
  std::vector<int> lock_owner_;  // per output, -1 when free
  std::vector<int> held_grant_;  // per output, grant pinned while stalled
  std::vector<int> rr_;          // per output, last granted input
  std::vector<int> grant_;       // per output, this cycle's grant
  std::vector<int> request_;     // per input, requested output
};

}  // namespace noc
