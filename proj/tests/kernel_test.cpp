// SPDX-License-Identifier: Apache-2.0

#include "noc/sim.hpp"

#include <gtest/gtest.h>

#include "helpers.hpp"

namespace noc {
namespace {

using testing::make_flit;
using testing::RecordingConsumer;
using testing::ScriptedProducer;

TEST(Kernel, EmptyNetworkRunsToMaxCycles) {
  // Components but no traffic: the run uses its whole cycle budget.
  Kernel kernel;
  FlitLink& link = kernel.add_link(ChannelKind::NarrowReq, "quiet");
  kernel.add_component<RecordingConsumer>("c", &link);
  SimConfig cfg;
  cfg.max_cycles = 10;
  const KernelRunInfo info = kernel.run(cfg);
  EXPECT_EQ(info.cycles_run, 10u);
  EXPECT_EQ(info.total_transfers, 0u);
  EXPECT_FALSE(info.drained);
}

TEST(Kernel, ZeroComponentsDrainImmediatelyWithEmptyReport) {
  Kernel kernel;
  FlitLink& link = kernel.add_link(ChannelKind::NarrowReq, "unused");
  (void)link;
  SimConfig cfg;
  cfg.max_cycles = 100;
  // No components: all-idle triggers the drain exit on the first cycle.
  const KernelRunInfo info = kernel.run(cfg);
  EXPECT_TRUE(info.drained);
  EXPECT_EQ(info.cycles_run, 1u);
}

TEST(Kernel, RegistrationAfterStartIsAConfigError) {
  Kernel kernel;
  SimConfig cfg;
  cfg.max_cycles = 1;
  kernel.run(cfg);
  EXPECT_THROW(kernel.add_link(ChannelKind::Wide, "late"), ConfigError);
}

TEST(Kernel, DistinctHandlesForRegisteredComponents) {
  Kernel kernel;
  FlitLink& l = kernel.add_link(ChannelKind::NarrowReq, "p->c");
  auto& p = kernel.add_component<ScriptedProducer>("p", &l);
  auto& c = kernel.add_component<RecordingConsumer>("c", &l);
  EXPECT_NE(static_cast<Component*>(&p), static_cast<Component*>(&c));
  EXPECT_EQ(kernel.component_count(), 2u);
}

TEST(Kernel, TransferNeedsValidAndReadyInTheSameCycle) {
  Kernel kernel;
  FlitLink& link = kernel.add_link(ChannelKind::NarrowReq, "p->c");
  auto& p = kernel.add_component<ScriptedProducer>("p", &link);
  auto& c = kernel.add_component<RecordingConsumer>(
      "c", &link, [](Cycle now) { return now >= 3; });
  p.push(make_flit({1, 0}), 0);
  SimConfig cfg;
  cfg.max_cycles = 10;
  const KernelRunInfo info = kernel.run(cfg);
  ASSERT_EQ(c.received.size(), 1u);
  EXPECT_EQ(c.received[0].first, 3u);  // held until the first ready cycle
  EXPECT_EQ(info.total_transfers, 1u);
}

TEST(Kernel, SameSeedYieldsIdenticalTraceDigest) {
  auto run_once = [] {
    Kernel kernel;
    FlitLink& link = kernel.add_link(ChannelKind::Wide, "p->c");
    auto& p = kernel.add_component<ScriptedProducer>("p", &link);
    kernel.add_component<RecordingConsumer>("c", &link,
                                            [](Cycle now) { return now % 3 != 1; });
    for (std::uint32_t i = 0; i < 20; ++i)
      p.push(make_flit({2, 1}, MsgType::WideR, i, std::uint16_t(i), i == 19), i / 2);
    SimConfig cfg;
    cfg.max_cycles = 200;
    return kernel.run(cfg);
  };
  const auto a = run_once();
  const auto b = run_once();
  EXPECT_EQ(a.trace_digest, b.trace_digest);
  EXPECT_EQ(a.cycles_run, b.cycles_run);
  EXPECT_TRUE(a.drained);
}

/// A sender must hold valid with an unchanged payload while stalled.
class UnstableProducer : public Component {
 public:
  UnstableProducer(std::string name, FlitLink* link)
      : name_(std::move(name)), link_(link) {}
  const std::string& name() const override { return name_; }
  bool idle() const override { return false; }
  void propose(Cycle now) override {
    Flit f = testing::make_flit({1, 0});
    f.payload.txn_serial = std::uint32_t(now);  // payload drifts every cycle
    link_->drive(f);
  }
  void commit(Cycle) override {
    if (link_->fired()) link_->confirm_sent();
  }

 private:
  std::string name_;
  FlitLink* link_;
};

TEST(Kernel, PayloadDriftWhileStalledIsAStabilityViolation) {
  Kernel kernel;
  FlitLink& link = kernel.add_link(ChannelKind::NarrowReq, "unstable->c");
  kernel.add_component<UnstableProducer>("unstable", &link);
  kernel.add_component<RecordingConsumer>("c", &link,
                                          [](Cycle) { return false; });
  SimConfig cfg;
  cfg.max_cycles = 10;
  try {
    kernel.run(cfg);
    FAIL() << "expected a stability violation";
  } catch (const KernelError& e) {
    EXPECT_NE(std::string(e.what()).find("unstable->c"), std::string::npos);
  }
}

/// A component whose propose output depends on same-cycle link state can
/// never reach a fixed point in one pass; the kernel reports the link.
class CombinationalLoop : public Component {
 public:
  CombinationalLoop(std::string name, FlitLink* out)
      : name_(std::move(name)), out_(out) {}
  const std::string& name() const override { return name_; }
  bool idle() const override { return false; }
  void propose(Cycle) override {
    // Inverts its own driven valid: every propose pass flips the signal.
    if (out_->valid())
      out_->drive_idle();
    else
      out_->drive(testing::make_flit({1, 0}));
  }
  void commit(Cycle) override {
    if (out_->fired()) out_->confirm_sent();
  }

 private:
  std::string name_;
  FlitLink* out_;
};

TEST(Kernel, CombinationalCycleIsReportedWithTheLoopLink) {
  Kernel kernel;
  FlitLink& loop = kernel.add_link(ChannelKind::NarrowReq, "osc->c");
  kernel.add_component<CombinationalLoop>("osc", &loop);
  kernel.add_component<RecordingConsumer>("c", &loop,
                                          [](Cycle) { return false; });
  SimConfig cfg;
  cfg.max_cycles = 5;
  try {
    kernel.run(cfg);
    FAIL() << "expected a fixed-point failure";
  } catch (const KernelError& e) {
    EXPECT_NE(std::string(e.what()).find("fixed point"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("osc->c"), std::string::npos);
  }
}

/// A consumer that takes flits without confirming them breaks the
/// conservation counters.
class LeakyConsumer : public Component {
 public:
  LeakyConsumer(std::string name, FlitLink* link)
      : name_(std::move(name)), link_(link) {}
  const std::string& name() const override { return name_; }
  bool idle() const override { return true; }
  void propose(Cycle) override { link_->set_ready(true); }
  void commit(Cycle) override {}  // never confirms

 private:
  std::string name_;
  FlitLink* link_;
};

TEST(Kernel, DroppedFlitTripsTheConservationCheck) {
  Kernel kernel;
  FlitLink& link = kernel.add_link(ChannelKind::NarrowReq, "p->leak");
  auto& p = kernel.add_component<ScriptedProducer>("p", &link);
  kernel.add_component<LeakyConsumer>("leak", &link);
  p.push(make_flit({1, 0}));
  SimConfig cfg;
  cfg.max_cycles = 5;
  try {
    kernel.run(cfg);
    FAIL() << "expected a conservation mismatch";
  } catch (const KernelError& e) {
    EXPECT_NE(std::string(e.what()).find("conservation"), std::string::npos);
  }
}

TEST(Kernel, TraceRowsCarryTheHeaderFields) {
  Kernel kernel;
  FlitLink& link = kernel.add_link(ChannelKind::Wide, "p->c");
  auto& p = kernel.add_component<ScriptedProducer>("p", &link);
  kernel.add_component<RecordingConsumer>("c", &link);
  p.push(make_flit({2, 3}, MsgType::WideR, 7, 0, false, 5), 2);
  std::vector<TraceRow> rows;
  kernel.set_trace_sink([&rows](const TraceRow& r) { rows.push_back(r); });
  SimConfig cfg;
  cfg.max_cycles = 10;
  cfg.record_trace = true;
  kernel.run(cfg);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].cycle, 2u);
  EXPECT_EQ(rows[0].channel, ChannelKind::Wide);
  EXPECT_EQ(rows[0].dst, (NodeId{2, 3}));
  EXPECT_EQ(rows[0].msg_type, MsgType::WideR);
  EXPECT_FALSE(rows[0].last);
}

}  // namespace
}  // namespace noc
