#pragma once

#include <exception>
#include <functional>
#include <memory>
#include <optional>
#include <thread>
#include <type_traits>
#include <utility>

#include "mac2pc/base_ot.hpp"
#include "mac2pc/session.hpp"
#include "mac2pc/transport.hpp"

namespace mac2pc::testing {

/// Two sessions on an in-memory channel with a shared dealer seed OT.
struct Parties {
  explicit Parties(std::uint64_t seed, SecurityParams params = {}) : Parties(make(seed), params, seed) {}

  std::unique_ptr<Channel> ca, cb;
  Session a, b;
  DealerSeedOt ot_a, ot_b;

  Session& operator[](Role r) { return r == Role::Alice ? a : b; }
  DealerSeedOt& ot(Role r) { return r == Role::Alice ? ot_a : ot_b; }

 private:
  using ChannelPair = std::pair<std::unique_ptr<Channel>, std::unique_ptr<Channel>>;
  static ChannelPair make(std::uint64_t) { return memory_channel_pair(); }
  static Rng::Seed shared_seed(std::uint64_t seed) {
    Rng r(seed ^ 0x5EEDULL);
    Rng::Seed s;
    r.fill(s);
    return s;
  }
  Parties(ChannelPair chans, SecurityParams params, std::uint64_t seed)
      : ca(std::move(chans.first)),
        cb(std::move(chans.second)),
        a(*ca, Role::Alice, params, Rng(seed * 2 + 1)),
        b(*cb, Role::Bob, params, Rng(seed * 2 + 2)),
        ot_a(shared_seed(seed)),
        ot_b(shared_seed(seed)) {}
};

template <class T>
struct Outcome {
  std::optional<T> value;
  std::exception_ptr error;
  bool ok() const { return !error; }
};

template <>
struct Outcome<void> {
  std::exception_ptr error;
  bool ok() const { return !error; }
};

namespace detail {
template <class F, class R = std::invoke_result_t<F>>
void run_into(F& f, Outcome<R>& out) {
  try {
    if constexpr (std::is_void_v<R>) {
      f();
    } else {
      out.value.emplace(f());
    }
  } catch (...) {
    out.error = std::current_exception();
  }
}
}  // namespace detail

/// Runs both parties concurrently. When one fails its channel is closed so
/// the other cannot block forever; both outcomes are reported.
template <class FA, class FB>
auto run_both(Parties& p, FA fa, FB fb) {
  using RA = std::invoke_result_t<FA>;
  using RB = std::invoke_result_t<FB>;
  std::pair<Outcome<RA>, Outcome<RB>> out;
  std::thread tb([&] {
    detail::run_into(fb, out.second);
    if (out.second.error) p.cb->close();
  });
  detail::run_into(fa, out.first);
  if (out.first.error) p.ca->close();
  tb.join();
  return out;
}

/// The exception held by an outcome, rethrown as a ProtocolAbort phase, or
/// empty when the party finished or failed for a different reason.
template <class O>
std::optional<std::string> abort_phase(const O& o) {
  if (!o.error) return std::nullopt;
  try {
    std::rethrow_exception(o.error);
  } catch (const ProtocolAbort& e) {
    return e.phase();
  } catch (...) {
    return std::nullopt;
  }
}

/// Runs both parties and rethrows the first real failure.
template <class FA, class FB>
auto run_both_or_throw(Parties& p, FA fa, FB fb) {
  auto out = run_both(p, std::move(fa), std::move(fb));
  // Prefer a protocol-level error over the transport error it caused.
  for (auto e : {out.first.error, out.second.error}) {
    if (!e) continue;
    try {
      std::rethrow_exception(e);
    } catch (const TransportError&) {
    }
  }
  if (out.first.error) std::rethrow_exception(out.first.error);
  if (out.second.error) std::rethrow_exception(out.second.error);
  return out;
}

}  // namespace mac2pc::testing
