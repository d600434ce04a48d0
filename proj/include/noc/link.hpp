// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "noc/types.hpp"

namespace noc {

/// The three physical channels. Each kind gets its own router network;
/// nothing is shared between them except tile coordinates.
enum class ChannelKind : std::uint8_t { NarrowReq = 0, NarrowRsp = 1, Wide = 2 };

inline constexpr int kChannelCount = 3;

/// AXI message class carried by a flit, qualified by the originating bus.
enum class MsgType : std::uint8_t {
  NarrowAR,
  NarrowAW,
  NarrowW,
  NarrowR,
  NarrowB,
  WideAR,
  WideAW,
  WideW,
  WideR,
  WideB,
};

/// Which of the two endpoint AXI buses a message belongs to.
enum class BusKind : std::uint8_t { Narrow, Wide };

/// AXI message class, independent of bus width.
enum class AxiMsg : std::uint8_t { AR, AW, W, R, B };

constexpr BusKind bus_of(MsgType t) {
  return t <= MsgType::NarrowB ? BusKind::Narrow : BusKind::Wide;
}

constexpr AxiMsg class_of(MsgType t) {
  switch (t) {
    case MsgType::NarrowAR:
    case MsgType::WideAR:
      return AxiMsg::AR;
    case MsgType::NarrowAW:
    case MsgType::WideAW:
      return AxiMsg::AW;
    case MsgType::NarrowW:
    case MsgType::WideW:
      return AxiMsg::W;
    case MsgType::NarrowR:
    case MsgType::WideR:
      return AxiMsg::R;
    default:
      return AxiMsg::B;
  }
}

constexpr MsgType make_msg_type(BusKind bus, AxiMsg m) {
  const int base = bus == BusKind::Narrow ? 0 : 5;
  return static_cast<MsgType>(base + static_cast<int>(m));
}

constexpr bool is_response(MsgType t) {
  const AxiMsg m = class_of(t);
  return m == AxiMsg::R || m == AxiMsg::B;
}

/// Total width of one flit on each physical link, header included.
constexpr std::uint32_t channel_width_bits(ChannelKind k) {
  switch (k) {
    case ChannelKind::NarrowReq:
      return 118;
    case ChannelKind::NarrowRsp:
      return 102;
    case ChannelKind::Wide:
      return 604;
  }
  return 0;
}

/// Primary payload each message class occupies on its link: 48-bit
/// addresses for AR/AW, data-width bits for W/R, 2-bit response for B.
constexpr std::uint32_t payload_bits_of(MsgType t) {
  switch (class_of(t)) {
    case AxiMsg::AR:
    case AxiMsg::AW:
      return 48;
    case AxiMsg::W:
    case AxiMsg::R:
      return bus_of(t) == BusKind::Narrow ? 64 : 512;
    case AxiMsg::B:
      return 2;
  }
  return 0;
}

/// Channel assignment for the narrow-wide configuration. Requests and
/// responses never share a link; small wide-bus messages (AR/AW/B) ride
/// the narrow links so the wide link carries only 512-bit data beats.
constexpr ChannelKind map_axi_to_channel(BusKind bus, AxiMsg m) {
  if (bus == BusKind::Narrow) {
    return (m == AxiMsg::R || m == AxiMsg::B) ? ChannelKind::NarrowRsp
                                              : ChannelKind::NarrowReq;
  }
  switch (m) {
    case AxiMsg::AR:
    case AxiMsg::AW:
      return ChannelKind::NarrowReq;
    case AxiMsg::B:
      return ChannelKind::NarrowRsp;
    default:
      return ChannelKind::Wide;
  }
}

constexpr ChannelKind channel_of(MsgType t) {
  return map_axi_to_channel(bus_of(t), class_of(t));
}

/// Every flit carries a complete header; there are no head/tail flits.
struct FlitHeader {
  NodeId dst{};
  NodeId src{};
  std::uint32_t rob_idx = 0;  // initiator-side reorder-buffer handle
  MsgType msg_type = MsgType::NarrowAR;
  bool last = true;           // final beat of its message
  std::uint8_t axi_id = 0;

  friend bool operator==(const FlitHeader&, const FlitHeader&) = default;
};

/// Opaque payload: enough to identify the beat at the far side.
struct FlitPayload {
  std::uint32_t txn_serial = 0;
  std::uint16_t beat = 0;        // beat index within its message
  std::uint16_t burst_len = 1;   // beats in the whole message

  friend bool operator==(const FlitPayload&, const FlitPayload&) = default;
};

/// One single-cycle transfer unit. payload_bits is the declared payload
/// width used for bandwidth accounting; it never exceeds the link width.
struct Flit {
  FlitHeader header{};
  std::uint16_t payload_bits = 0;
  FlitPayload payload{};

  friend bool operator==(const Flit&, const Flit&) = default;
};

constexpr std::string_view to_string(ChannelKind k) {
  switch (k) {
    case ChannelKind::NarrowReq:
      return "narrow_req";
    case ChannelKind::NarrowRsp:
      return "narrow_rsp";
    case ChannelKind::Wide:
      return "wide";
  }
  return "?";
}

constexpr std::string_view to_string(MsgType t) {
  constexpr std::array<std::string_view, 10> names = {
      "narrow_ar", "narrow_aw", "narrow_w", "narrow_r", "narrow_b",
      "wide_ar",   "wide_aw",   "wide_w",   "wide_r",   "wide_b"};
  return names[static_cast<int>(t)];
}

}  // namespace noc
