// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace noc {

/// Simulation time base: one Cycle is one clock period. Starts at 0 and
/// increases monotonically during a run.
using Cycle = std::uint64_t;

/// Grid coordinate of an endpoint. Tiles occupy 0..w-1 x 0..h-1; boundary
/// memory controllers sit one step outside the grid (x = -1 or w, y = -1
/// or h), which keeps XY routing total over all endpoints.
struct NodeId {
  std::int16_t x = 0;
  std::int16_t y = 0;

  friend bool operator==(const NodeId&, const NodeId&) = default;
  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

inline std::string to_string(NodeId n) {
  return std::to_string(n.x) + ":" + std::to_string(n.y);
}

/// Raised for invalid configuration (bad mesh spec, registration after
/// start, transaction that can never fit its ROB, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a component breaks the simulation contract: handshake
/// instability, conservation mismatch, FIFO overflow.
class KernelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when traffic violates the link or ordering protocol: unknown
/// rob index, duplicate completion, corrupted trace.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised at injection time for a destination no route covers.
class UnroutableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace noc

template <>
struct std::hash<noc::NodeId> {
  std::size_t operator()(const noc::NodeId& n) const noexcept {
    return (static_cast<std::size_t>(static_cast<std::uint16_t>(n.x)) << 16) |
           static_cast<std::uint16_t>(n.y);
  }
};
