#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mac2pc/common.hpp"

namespace mac2pc {

enum class MsgType : std::uint8_t {
  Hello = 1,
  EqCommit,
  EqValue,
  EqOpen,
  OtMasked0,
  OtMasked1,
  DotChoice,
  DotMsg,
  LabitPairing,
  LabitD,
  AmplifyMatrix,
  RotMask0,
  RotMask1,
  LaotX0,
  LaotX1,
  LaotD,
  LaotI0,
  LaotI1,
  CombPerm,
  CombD,
  LaandD,
  LaandU,
  RtAnnounceBatch,
  RtRevealBatch,
  RtAccFlush,
  RtOutput,
  StoreCommit,
  SessionNonce,
  Test = 0xF0,
};

std::string_view to_string(MsgType t);

struct Message {
  MsgType type{};
  std::vector<std::uint8_t> payload;
  bool operator==(const Message&) const = default;
};

/// Size of the frame header: 1-byte type, 4-byte big-endian payload length.
inline constexpr std::size_t kFrameHeader = 5;

std::array<std::uint8_t, kFrameHeader> encode_frame_header(MsgType t, std::size_t payload_len);

struct ChannelStats {
  std::uint64_t bytes_sent = 0;
  std::uint64_t bytes_received = 0;
  std::uint64_t messages_sent = 0;
  std::uint64_t messages_received = 0;
};

/// Ordered, reliable, full-duplex message pipe to the peer. send() and recv()
/// may be called from different threads; each direction is FIFO.
class Channel {
 public:
  virtual ~Channel() = default;

  void send(MsgType t, std::vector<std::uint8_t> payload);
  void send(Message m) { send(m.type, std::move(m.payload)); }
  /// Next message regardless of tag.
  Message recv_any();
  /// Next message; a different tag is a protocol violation.
  std::vector<std::uint8_t> recv(MsgType expected);

  virtual void close() = 0;
  void set_timeout(std::chrono::milliseconds t) { timeout_ = t; }
  std::chrono::milliseconds timeout() const { return timeout_; }

  const ChannelStats& stats() const { return stats_; }
  void reset_stats() { stats_ = {}; }

 protected:
  virtual void do_send(Message&& m) = 0;
  virtual Message do_recv() = 0;

 private:
  ChannelStats stats_;
  std::chrono::milliseconds timeout_{std::chrono::minutes(5)};
};

/// Two connected in-memory endpoints.
std::pair<std::unique_ptr<Channel>, std::unique_ptr<Channel>> memory_channel_pair();

/// Accepts one connection on host:port.
std::unique_ptr<Channel> tcp_listen(const std::string& host, std::uint16_t port,
                                    std::chrono::milliseconds accept_timeout = std::chrono::minutes(2));
/// Dials host:port, retrying until the deadline.
std::unique_ptr<Channel> tcp_connect(const std::string& host, std::uint16_t port,
                                     std::chrono::milliseconds deadline = std::chrono::seconds(30));

/// "host:port" -> (host, port).
std::pair<std::string, std::uint16_t> parse_endpoint(std::string_view text);

inline constexpr std::uint16_t kProtocolVersion = 1;

struct Hello {
  std::uint16_t version = kProtocolVersion;
  std::uint16_t kappa = 128;
  std::uint16_t psi = 40;
  std::array<std::uint8_t, 16> session_id{};
  bool operator==(const Hello&) const = default;
};

/// Both sides send their Hello and compare; any difference aborts.
void handshake(Channel& ch, const Hello& mine);

}  // namespace mac2pc
