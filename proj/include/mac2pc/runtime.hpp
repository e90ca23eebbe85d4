#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mac2pc/auth.hpp"
#include "mac2pc/circuit.hpp"
#include "mac2pc/dealer.hpp"
#include "mac2pc/session.hpp"

namespace mac2pc {

/// Who learns the circuit outputs.
enum class OutputTo : std::uint8_t { Both, Alice, Bob };

/// Bits revealed per AND gate by each party: f and g of its local product,
/// d as key side of one cross product, f and g as MAC side of the other.
inline constexpr std::size_t kRevealsPerAndPerParty = 5;

struct RuntimeStats {
  std::size_t and_gates = 0;
  std::size_t free_gates = 0;      // XOR, INV, EQW
  std::size_t announced_bits = 0;  // input announcements sent by me
  std::size_t revealed_bits = 0;   // deferred-MAC reveals sent by me
  std::size_t opened_bits = 0;     // output bits sent by me with MACs
  std::size_t reveal_rounds = 0;   // reveal messages sent by me
  std::size_t flushes = 0;
};

/// The online phase of one party on dealt material. Shares are
/// (my half, my key on the peer's half); see AuthShare.
class Evaluator {
 public:
  /// Runs the material handshake and installs the material's global key.
  Evaluator(Session& s, MaterialStore& m, bool handshake = true);

  /// Input of `owner`; the owner passes its bits, the other party passes
  /// nothing and `n` gives the count. One announcement message per call.
  std::vector<AuthShare> input(Role owner, const BitVec* bits, std::size_t n);
  AuthShare rand();

  static AuthShare xor_gate(const AuthShare& a, const AuthShare& b) { return a ^ b; }
  AuthShare not_gate(const AuthShare& a) const { return add_const(a, true, s_.role, s_.delta); }
  AuthShare constant(bool b) const;

  /// A batch of independent AND gates evaluated in two reveal rounds.
  std::vector<AuthShare> and_gates(std::span<const AuthShare> x, std::span<const AuthShare> y);
  AuthShare and_gate(const AuthShare& x, const AuthShare& y);

  /// Flushes the deferred MAC check, then opens the shares to `to`. The
  /// parties that learn the values get them back; the other gets nothing.
  std::optional<BitVec> output(std::span<const AuthShare> shares, OutputTo to);

  Session& session() { return s_; }
  const RuntimeStats& stats() const { return stats_; }

 private:
  ABit half(const AuthShare& a, Role owner) const { return owner == s_.role ? a.mine : a.peer; }
  ABit constant_half(const ABit& h, bool b, Role owner) const { return add_const(h, b, owner == s_.role, s_.delta); }
  /// Reveals the halves owned by `owner` in one message from each side:
  /// returns the revealed bits for both owners, Alice first.
  std::pair<BitVec, BitVec> exchange(const std::vector<ABit>& alice_halves, const std::vector<ABit>& bob_halves);
  void open_to(std::span<const AuthShare> shares, Role learner, std::optional<BitVec>& out);

  Session& s_;
  MaterialStore& m_;
  RuntimeStats stats_;
};

struct EvalOptions {
  std::size_t chunk_size = kDefaultChunkSize;
  OutputTo output_to = OutputTo::Both;
  bool handshake = true;
};

struct EvalResult {
  std::optional<BitVec> outputs;
  RuntimeStats stats;
  double online_seconds = 0;
};

/// Securely evaluates `c`; my_inputs are this party's input wires in group
/// order. Chunks are evaluated in order; within a chunk AND gates are
/// batched by AND depth.
EvalResult evaluate(Session& s, const Circuit& c, const BitVec& my_inputs, MaterialStore& m,
                    const EvalOptions& opts = {});

}  // namespace mac2pc
