// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <deque>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "noc/link.hpp"
#include "noc/sim.hpp"

namespace noc::testing {

/// Drives a scripted list of flits through one link, respecting ready.
class ScriptedProducer : public Component {
 public:
  ScriptedProducer(std::string name, FlitLink* link)
      : name_(std::move(name)), link_(link) {}

  /// Queue a flit to send no earlier than `from`.
  void push(const Flit& f, Cycle from = 0) { script_.push_back({f, from}); }

  const std::string& name() const override { return name_; }
  bool idle() const override { return script_.empty(); }

  void propose(Cycle now) override {
    if (!script_.empty() && script_.front().second <= now)
      link_->drive(script_.front().first);
    else
      link_->drive_idle();
  }

  void commit(Cycle) override {
    if (link_->fired()) {
      link_->confirm_sent();
      script_.pop_front();
    }
  }

 private:
  std::string name_;
  FlitLink* link_;
  std::deque<std::pair<Flit, Cycle>> script_;
};

/// Accepts flits from one link under a scripted or computed ready pattern
/// and records (cycle, flit) pairs.
class RecordingConsumer : public Component {
 public:
  RecordingConsumer(std::string name, FlitLink* link,
                    std::function<bool(Cycle)> ready = nullptr)
      : name_(std::move(name)), link_(link), ready_(std::move(ready)) {}

  const std::string& name() const override { return name_; }
  bool idle() const override { return true; }

  void propose(Cycle now) override {
    link_->set_ready(ready_ ? ready_(now) : true);
  }

  void commit(Cycle now) override {
    if (link_->fired()) {
      link_->confirm_received();
      received.push_back({now, link_->flit()});
    }
  }

  std::vector<std::pair<Cycle, Flit>> received;

 private:
  std::string name_;
  FlitLink* link_;
  std::function<bool(Cycle)> ready_;
};

inline Flit make_flit(NodeId dst, MsgType t = MsgType::NarrowAR,
                      std::uint32_t serial = 0, std::uint16_t beat = 0,
                      bool last = true, std::uint8_t axi_id = 0) {
  Flit f;
  f.header.dst = dst;
  f.header.src = {0, 0};
  f.header.msg_type = t;
  f.header.last = last;
  f.header.axi_id = axi_id;
  f.header.rob_idx = serial;
  f.payload_bits = std::uint16_t(payload_bits_of(t));
  f.payload.txn_serial = serial;
  f.payload.beat = beat;
  return f;
}

}  // namespace noc::testing
