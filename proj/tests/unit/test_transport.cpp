#include <unistd.h>

#include <thread>

#include "doctest.h"
#include "mac2pc/rng.hpp"
#include "mac2pc/transport.hpp"

using namespace mac2pc;
using namespace std::chrono_literals;

namespace {

std::vector<std::uint8_t> bytes(std::initializer_list<int> v) {
  std::vector<std::uint8_t> out;
  for (int x : v) out.push_back(static_cast<std::uint8_t>(x));
  return out;
}

std::uint16_t test_port() { return static_cast<std::uint16_t>(41000 + ::getpid() % 2000); }

}  // namespace

TEST_CASE("memory channel delivers in order") {
  auto [a, b] = memory_channel_pair();
  a->send(MsgType::Test, bytes({1, 2, 3}));
  a->send(MsgType::EqValue, bytes({4}));
  const Message m = b->recv_any();
  CHECK(m == Message{MsgType::Test, bytes({1, 2, 3})});
  CHECK(b->recv(MsgType::EqValue) == bytes({4}));
  CHECK(a->stats().messages_sent == 2);
  CHECK(a->stats().bytes_sent == 2 * kFrameHeader + 4);
  CHECK(b->stats().bytes_received == a->stats().bytes_sent);
}

TEST_CASE("tag mismatch is a protocol error") {
  auto [a, b] = memory_channel_pair();
  a->send(MsgType::EqOpen, {});
  CHECK_THROWS_AS(b->recv(MsgType::EqCommit), ProtocolAbort);
}

TEST_CASE("closed channels raise transport errors") {
  auto [a, b] = memory_channel_pair();
  a->close();
  CHECK_THROWS_AS(a->send(MsgType::Test, {}), TransportError);
  CHECK_THROWS_AS(b->recv(MsgType::Test), TransportError);
  auto [c, d] = memory_channel_pair();
  d->set_timeout(50ms);
  CHECK_THROWS_AS(d->recv_any(), TransportError);
}

TEST_CASE("per-direction FIFO under concurrent traffic") {
  auto [a, b] = memory_channel_pair();
  const int n = 2000;
  // Each side sends and receives on separate threads with random yields.
  auto sender = [n](Channel& ch, std::uint64_t seed) {
    Rng rng(seed);
    for (int i = 0; i < n; ++i) {
      if (rng.uniform(4) == 0) std::this_thread::yield();
      ch.send(MsgType::Test, bytes({i & 0xFF, (i >> 8) & 0xFF}));
    }
  };
  auto receiver = [n](Channel& ch, bool& ok) {
    ok = true;
    for (int i = 0; i < n; ++i) ok &= ch.recv(MsgType::Test) == bytes({i & 0xFF, (i >> 8) & 0xFF});
  };
  bool ok_a = false, ok_b = false;
  std::thread t1([&, &a = a] { sender(*a, 1); });
  std::thread t2([&, &b = b] { sender(*b, 2); });
  std::thread t3([&, &a = a] { receiver(*a, ok_a); });
  receiver(*b, ok_b);
  t1.join();
  t2.join();
  t3.join();
  CHECK(ok_a);
  CHECK(ok_b);
}

TEST_CASE("frame header layout") {
  const auto h = encode_frame_header(MsgType::Hello, 0x01020304);
  CHECK(h[0] == static_cast<std::uint8_t>(MsgType::Hello));
  CHECK(h[1] == 1);
  CHECK(h[2] == 2);
  CHECK(h[3] == 3);
  CHECK(h[4] == 4);
}

TEST_CASE("endpoint parsing") {
  CHECK(parse_endpoint("127.0.0.1:9000") == std::pair<std::string, std::uint16_t>{"127.0.0.1", 9000});
  CHECK(parse_endpoint("localhost:1") == std::pair<std::string, std::uint16_t>{"localhost", 1});
  CHECK_THROWS_AS(parse_endpoint("nohost"), UsageError);
  CHECK_THROWS_AS(parse_endpoint("h:99999"), UsageError);
}

TEST_CASE("TCP round trip, large payloads and disconnect") {
  const std::uint16_t port = test_port();
  std::unique_ptr<Channel> server;
  std::thread t([&] { server = tcp_listen("127.0.0.1", port, 10s); });
  auto client = tcp_connect("127.0.0.1", port, 10s);
  t.join();
  REQUIRE(server);
  Rng rng(3);
  std::vector<std::uint8_t> big(1 << 20);
  rng.fill(big);
  client->send(MsgType::Test, big);
  client->send(MsgType::EqValue, bytes({7}));
  CHECK(server->recv(MsgType::Test) == big);
  CHECK(server->recv(MsgType::EqValue) == bytes({7}));
  server->send(MsgType::EqOpen, bytes({9, 9}));
  CHECK(client->recv(MsgType::EqOpen) == bytes({9, 9}));
  client->close();
  CHECK_THROWS_AS(server->recv_any(), TransportError);
}

TEST_CASE("hello handshake") {
  SUBCASE("matching parameters") {
    auto [a, b] = memory_channel_pair();
    Hello h;
    h.session_id[0] = 5;
    std::thread t([&, &b = b] { handshake(*b, h); });
    CHECK_NOTHROW(handshake(*a, h));
    t.join();
  }
  SUBCASE("kappa mismatch aborts") {
    auto [a, b] = memory_channel_pair();
    Hello ha, hb;
    hb.kappa = 64;
    std::thread t([&, &b = b] { CHECK_THROWS_AS(handshake(*b, hb), ProtocolAbort); });
    CHECK_THROWS_AS(handshake(*a, ha), ProtocolAbort);
    t.join();
  }
}
