// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "noc/axi.hpp"
#include "noc/metrics.hpp"
#include "noc/network_interface.hpp"
#include "noc/rng.hpp"
#include "noc/sim.hpp"
#include "noc/types.hpp"

namespace noc {

/// Traffic source and AXI-side consumer for one tile. Open-loop
/// transactions enter the NI at their scheduled issue cycle; serial
/// (closed-loop) transactions model blocking accesses - the next one
/// issues the cycle after the previous one completes. Response-channel
/// backpressure is a pure hash of (cycle, domain), so runs stay
/// deterministic and independent of component commit order.
class TrafficEndpoint : public Component, public DeliverySink {
 public:
  TrafficEndpoint(NodeId node, std::string name, NetworkInterface* ni,
                  Recorder* recorder, std::uint32_t stall_pct = 0,
                  std::uint64_t stall_seed = 0)
      : node_(node), name_(std::move(name)), ni_(ni), recorder_(recorder),
        stall_pct_(stall_pct), stall_seed_(stall_seed) {
    if (stall_pct_ > 95) throw ConfigError("stall percentage above 95 risks livelock");
    ni_->attach_sink(this);
  }

  void add_open(const AxiTransaction& txn, bool measured) {
    validate(txn);
    open_.push_back({txn, measured});
  }

  void add_serial(const AxiTransaction& txn, bool measured) {
    validate(txn);
    serial_.push_back({txn, measured});
  }

  NodeId node() const { return node_; }
  const std::string& name() const override { return name_; }

  bool idle() const override {
    return open_idx_ == open_.size() && serial_idx_ == serial_.size();
  }

  void propose(Cycle) override {}

  void commit(Cycle now) override {
    while (open_idx_ < open_.size() &&
           open_[open_idx_].txn.issue_cycle <= now) {
      issue(open_[open_idx_], now, open_[open_idx_].txn.issue_cycle);
      ++open_idx_;
    }
    if (serial_idx_ < serial_.size() && !serial_in_flight_) {
      const bool first = serial_completed_ == 0;
      const Cycle earliest = first ? serial_[serial_idx_].txn.issue_cycle
                                   : last_completion_ + 1;
      if (now >= earliest) {
        issue(serial_[serial_idx_], now, now);
        serial_in_flight_ = true;
        serial_in_flight_serial_ = serial_[serial_idx_].txn.serial;
        ++serial_idx_;
      }
    }
  }

  bool response_ready(Domain d, Cycle now) override {
    if (stall_pct_ == 0) return true;
    std::uint64_t z = stall_seed_ ^ (now * 0x9e3779b97f4a7c15ULL) ^
                      (std::uint64_t(d) << 56) ^
                      (std::uint64_t(std::uint16_t(node_.x)) << 40) ^
                      (std::uint64_t(std::uint16_t(node_.y)) << 24);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z % 100 >= stall_pct_;
  }

  void on_txn_complete(std::uint32_t serial, Cycle now) override {
    if (serial_in_flight_ && serial == serial_in_flight_serial_) {
      serial_in_flight_ = false;
      last_completion_ = now;
      ++serial_completed_;
    }
  }

 private:
  struct Planned {
    AxiTransaction txn;
    bool measured;
  };

  void issue(const Planned& p, Cycle now, Cycle issue_cycle) {
    AxiTransaction txn = p.txn;
    txn.issue_cycle = issue_cycle;
    ni_->push_request(txn, now);
    recorder_->record_issue(txn);
    if (p.measured) recorder_->mark_measured(txn.serial);
  }

  NodeId node_;
  std::string name_;
  NetworkInterface* ni_;
  Recorder* recorder_;
  std::uint32_t stall_pct_;
  std::uint64_t stall_seed_;

  std::vector<Planned> open_;
  std::vector<Planned> serial_;
  std::size_t open_idx_ = 0;
  std::size_t serial_idx_ = 0;
  bool serial_in_flight_ = false;
  std::uint32_t serial_in_flight_serial_ = 0;
  std::uint64_t serial_completed_ = 0;
  Cycle last_completion_ = 0;
};

}  // namespace noc
