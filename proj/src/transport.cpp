#include "mac2pc/transport.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <mutex>
#include <thread>

#include "mac2pc/wire.hpp"

namespace mac2pc {

std::string_view to_string(MsgType t) {
  switch (t) {
    case MsgType::Hello: return "HELLO";
    case MsgType::EqCommit: return "EQ_COMMIT";
    case MsgType::EqValue: return "EQ_VALUE";
    case MsgType::EqOpen: return "EQ_OPEN";
    case MsgType::OtMasked0: return "OT_MASKED0";
    case MsgType::OtMasked1: return "OT_MASKED1";
    case MsgType::DotChoice: return "DOT_CHOICE";
    case MsgType::DotMsg: return "DOT_MSG";
    case MsgType::LabitPairing: return "LABIT_PAIRING";
    case MsgType::LabitD: return "LABIT_D";
    case MsgType::AmplifyMatrix: return "AMPLIFY_MATRIX";
    case MsgType::RotMask0: return "ROT_MASK0";
    case MsgType::RotMask1: return "ROT_MASK1";
    case MsgType::LaotX0: return "LAOT_X0";
    case MsgType::LaotX1: return "LAOT_X1";
    case MsgType::LaotD: return "LAOT_D";
    case MsgType::LaotI0: return "LAOT_I0";
    case MsgType::LaotI1: return "LAOT_I1";
    case MsgType::CombPerm: return "COMB_PERM";
    case MsgType::CombD: return "COMB_D";
    case MsgType::LaandD: return "LAAND_D";
    case MsgType::LaandU: return "LAAND_U";
    case MsgType::RtAnnounceBatch: return "RT_ANNOUNCE_BATCH";
    case MsgType::RtRevealBatch: return "RT_REVEAL_BATCH";
    case MsgType::RtAccFlush: return "RT_ACC_FLUSH";
    case MsgType::RtOutput: return "RT_OUTPUT";
    case MsgType::StoreCommit: return "STORE_COMMIT";
    case MsgType::SessionNonce: return "SESSION_NONCE";
    case MsgType::Test: return "TEST";
  }
  return "UNKNOWN";
}

std::array<std::uint8_t, kFrameHeader> encode_frame_header(MsgType t, std::size_t payload_len) {
  if (payload_len > 0xFFFFFFFFull) throw UsageError("message payload exceeds 2^32-1 bytes");
  const auto n = static_cast<std::uint32_t>(payload_len);
  return {static_cast<std::uint8_t>(t), static_cast<std::uint8_t>(n >> 24), static_cast<std::uint8_t>(n >> 16),
          static_cast<std::uint8_t>(n >> 8), static_cast<std::uint8_t>(n)};
}

void Channel::send(MsgType t, std::vector<std::uint8_t> payload) {
  if (payload.size() > 0xFFFFFFFFull) throw UsageError("message payload exceeds 2^32-1 bytes");
  const std::size_t n = payload.size();
  do_send(Message{t, std::move(payload)});
  stats_.bytes_sent += kFrameHeader + n;
  ++stats_.messages_sent;
}

Message Channel::recv_any() {
  Message m = do_recv();
  stats_.bytes_received += kFrameHeader + m.payload.size();
  ++stats_.messages_received;
  return m;
}

std::vector<std::uint8_t> Channel::recv(MsgType expected) {
  Message m = recv_any();
  if (m.type != expected) {
    throw ProtocolAbort("transport", "expected " + std::string(to_string(expected)) + ", got " +
                                         std::string(to_string(m.type)));
  }
  return std::move(m.payload);
}

// ---------------------------------------------------------------------------
// In-memory pair

namespace {

struct Pipe {
  std::mutex mu;
  std::condition_variable cv;
  std::deque<Message> queue;
  bool closed = false;
};

class MemoryChannel final : public Channel {
 public:
  MemoryChannel(std::shared_ptr<Pipe> out, std::shared_ptr<Pipe> in) : out_(std::move(out)), in_(std::move(in)) {}
  ~MemoryChannel() override { close(); }

  void close() override {
    for (const auto& p : {out_, in_}) {
      std::lock_guard lk(p->mu);
      p->closed = true;
      p->cv.notify_all();
    }
  }

 protected:
  void do_send(Message&& m) override {
    std::lock_guard lk(out_->mu);
    if (out_->closed) throw TransportError("send on closed channel");
    out_->queue.push_back(std::move(m));
    out_->cv.notify_all();
  }

  Message do_recv() override {
    std::unique_lock lk(in_->mu);
    if (!in_->cv.wait_for(lk, timeout(), [&] { return !in_->queue.empty() || in_->closed; })) {
      throw TransportError("receive timed out");
    }
    if (in_->queue.empty()) throw TransportError("channel closed by peer");
    Message m = std::move(in_->queue.front());
    in_->queue.pop_front();
    return m;
  }

 private:
  std::shared_ptr<Pipe> out_;
  std::shared_ptr<Pipe> in_;
};

}  // namespace

std::pair<std::unique_ptr<Channel>, std::unique_ptr<Channel>> memory_channel_pair() {
  auto ab = std::make_shared<Pipe>();
  auto ba = std::make_shared<Pipe>();
  return {std::make_unique<MemoryChannel>(ab, ba), std::make_unique<MemoryChannel>(ba, ab)};
}

// ---------------------------------------------------------------------------
// TCP

namespace {

std::string errno_text(const char* what) { return std::string(what) + ": " + std::strerror(errno); }

/// Frames go out through a writer thread so that a party blocked on a large
/// send never stops the peer from draining its own outbound data.
class TcpChannel final : public Channel {
 public:
  explicit TcpChannel(int fd) : fd_(fd) {
    int one = 1;
    ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    writer_ = std::thread([this] { write_loop(); });
  }
  ~TcpChannel() override { close(); }

  void close() override {
    {
      std::lock_guard lk(mu_);
      if (closed_) return;
      closing_ = true;
      cv_.notify_all();
    }
    if (writer_.joinable()) writer_.join();
    std::lock_guard lk(mu_);
    closed_ = true;
    ::shutdown(fd_, SHUT_RDWR);
    ::close(fd_);
  }

 protected:
  void do_send(Message&& m) override {
    std::lock_guard lk(mu_);
    if (closing_ || closed_) throw TransportError("send on closed channel");
    if (!write_error_.empty()) throw TransportError(write_error_);
    out_.push_back(std::move(m));
    cv_.notify_all();
  }

  Message do_recv() override {
    std::uint8_t hdr[kFrameHeader];
    read_exact(hdr, sizeof(hdr));
    const std::uint32_t n = (std::uint32_t{hdr[1]} << 24) | (std::uint32_t{hdr[2]} << 16) |
                            (std::uint32_t{hdr[3]} << 8) | std::uint32_t{hdr[4]};
    Message m{static_cast<MsgType>(hdr[0]), std::vector<std::uint8_t>(n)};
    read_exact(m.payload.data(), n);
    return m;
  }

 private:
  void read_exact(std::uint8_t* p, std::size_t n) {
    while (n > 0) {
      pollfd pfd{fd_, POLLIN, 0};
      const int r = ::poll(&pfd, 1, static_cast<int>(timeout().count()));
      if (r == 0) throw TransportError("receive timed out");
      if (r < 0) {
        if (errno == EINTR) continue;
        throw TransportError(errno_text("poll"));
      }
      const ssize_t got = ::recv(fd_, p, n, 0);
      if (got == 0) throw TransportError("channel closed by peer");
      if (got < 0) {
        if (errno == EINTR) continue;
        throw TransportError(errno_text("recv"));
      }
      p += got;
      n -= static_cast<std::size_t>(got);
    }
  }

  bool write_all(const std::uint8_t* p, std::size_t n) {
    while (n > 0) {
      const ssize_t w = ::send(fd_, p, n, MSG_NOSIGNAL);
      if (w < 0) {
        if (errno == EINTR) continue;
        std::lock_guard lk(mu_);
        write_error_ = errno_text("send");
        return false;
      }
      p += w;
      n -= static_cast<std::size_t>(w);
    }
    return true;
  }

  void write_loop() {
    for (;;) {
      Message m;
      {
        std::unique_lock lk(mu_);
        cv_.wait(lk, [&] { return !out_.empty() || closing_; });
        if (out_.empty()) return;
        m = std::move(out_.front());
        out_.pop_front();
      }
      const auto hdr = encode_frame_header(m.type, m.payload.size());
      if (!write_all(hdr.data(), hdr.size()) || !write_all(m.payload.data(), m.payload.size())) {
        std::lock_guard lk(mu_);
        out_.clear();
        return;
      }
    }
  }

  int fd_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<Message> out_;
  bool closing_ = false;
  bool closed_ = false;
  std::string write_error_;
  std::thread writer_;
};

addrinfo* resolve(const std::string& host, std::uint16_t port, bool passive) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  const std::string service = std::to_string(port);
  const int rc = ::getaddrinfo(host.empty() ? nullptr : host.c_str(), service.c_str(), &hints, &res);
  if (rc != 0) throw TransportError("cannot resolve " + host + ": " + ::gai_strerror(rc));
  return res;
}

}  // namespace

std::unique_ptr<Channel> tcp_listen(const std::string& host, std::uint16_t port,
                                    std::chrono::milliseconds accept_timeout) {
  addrinfo* res = resolve(host, port, true);
  int lfd = -1;
  for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
    lfd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (lfd < 0) continue;
    int one = 1;
    ::setsockopt(lfd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
    if (::bind(lfd, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(lfd, 1) == 0) break;
    ::close(lfd);
    lfd = -1;
  }
  ::freeaddrinfo(res);
  if (lfd < 0) throw TransportError(errno_text(("listen on " + host + ":" + std::to_string(port)).c_str()));
  pollfd pfd{lfd, POLLIN, 0};
  const int r = ::poll(&pfd, 1, static_cast<int>(accept_timeout.count()));
  if (r <= 0) {
    ::close(lfd);
    throw TransportError("no peer connected before timeout");
  }
  const int fd = ::accept(lfd, nullptr, nullptr);
  ::close(lfd);
  if (fd < 0) throw TransportError(errno_text("accept"));
  return std::make_unique<TcpChannel>(fd);
}

std::unique_ptr<Channel> tcp_connect(const std::string& host, std::uint16_t port,
                                     std::chrono::milliseconds deadline) {
  const auto until = std::chrono::steady_clock::now() + deadline;
  for (;;) {
    addrinfo* res = resolve(host, port, false);
    for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
      const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
      if (fd < 0) continue;
      if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
        ::freeaddrinfo(res);
        return std::make_unique<TcpChannel>(fd);
      }
      ::close(fd);
    }
    ::freeaddrinfo(res);
    if (std::chrono::steady_clock::now() >= until) {
      throw TransportError("could not connect to " + host + ":" + std::to_string(port));
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
  }
}

std::pair<std::string, std::uint16_t> parse_endpoint(std::string_view text) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos) throw UsageError("endpoint must be host:port");
  std::string host(text.substr(0, colon));
  if (host.size() >= 2 && host.front() == '[' && host.back() == ']') host = host.substr(1, host.size() - 2);
  const std::string port_text(text.substr(colon + 1));
  unsigned long port = 0;
  try {
    std::size_t used = 0;
    port = std::stoul(port_text, &used);
    if (used != port_text.size()) throw UsageError("");
  } catch (const std::exception&) {
    throw UsageError("bad port in endpoint '" + std::string(text) + "'");
  }
  if (port == 0 || port > 65535) throw UsageError("port out of range in '" + std::string(text) + "'");
  return {host, static_cast<std::uint16_t>(port)};
}

void handshake(Channel& ch, const Hello& mine) {
  ByteWriter w;
  w.u16(mine.version);
  w.u16(mine.kappa);
  w.u16(mine.psi);
  w.bytes(mine.session_id);
  ch.send(MsgType::Hello, w.take());
  const auto payload = ch.recv(MsgType::Hello);
  ByteReader r(payload, "handshake");
  Hello theirs;
  theirs.version = r.u16();
  theirs.kappa = r.u16();
  theirs.psi = r.u16();
  const auto sid = r.bytes(16);
  std::copy(sid.begin(), sid.end(), theirs.session_id.begin());
  r.expect_end();
  if (theirs.version != mine.version) throw ProtocolAbort("handshake", "protocol version mismatch");
  if (theirs.kappa != mine.kappa) throw ProtocolAbort("handshake", "kappa mismatch");
  if (theirs.psi != mine.psi) throw ProtocolAbort("handshake", "psi mismatch");
  if (theirs.session_id != mine.session_id) throw ProtocolAbort("handshake", "session id mismatch");
}

}  // namespace mac2pc
