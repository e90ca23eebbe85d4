#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mac2pc/bitlinalg.hpp"
#include "mac2pc/common.hpp"

namespace mac2pc {

class Rng;

enum class GateKind : std::uint8_t { Xor, And, Inv, Eqw };

std::string_view to_string(GateKind k);

struct Gate {
  GateKind kind = GateKind::Xor;
  std::uint32_t in0 = 0;
  std::uint32_t in1 = 0;  // unused for INV and EQW
  std::uint32_t out = 0;
  bool operator==(const Gate&) const = default;
};

struct CircuitHeader {
  std::size_t n_gates = 0;
  std::size_t n_wires = 0;
  std::vector<std::size_t> input_sizes;   // one entry per input group
  std::vector<std::size_t> output_sizes;  // one entry per output group
  std::vector<Role> input_owners;         // owner of each input group

  std::size_t total_inputs() const;
  std::size_t total_outputs() const;
  std::size_t inputs_of(Role r) const;
  /// First wire of input group g.
  std::size_t input_offset(std::size_t g) const;
  /// First output wire; outputs occupy the last wires.
  std::size_t first_output_wire() const { return n_wires - total_outputs(); }
};

/// Reads Bristol Fashion gates one at a time, validating wire bounds,
/// define-before-use and single assignment as it goes.
class BristolReader {
 public:
  explicit BristolReader(std::istream& in);
  const CircuitHeader& header() const { return header_; }
  /// Next gate, or nothing at end of input (after checking the count).
  std::optional<Gate> next();

 private:
  std::istream& in_;
  CircuitHeader header_;
  std::size_t line_ = 0;
  std::size_t gates_read_ = 0;
  std::vector<bool> defined_;
  bool getline(std::string& out);
};

class Circuit {
 public:
  Circuit() = default;
  Circuit(CircuitHeader header, std::vector<Gate> gates);

  const CircuitHeader& header() const { return header_; }
  const std::vector<Gate>& gates() const { return gates_; }
  std::size_t and_count() const { return and_count_; }
  std::size_t xor_count() const { return gates_.size() - and_count_; }
  std::size_t and_depth() const;

  /// Default: group 0 belongs to Alice and every other group to Bob.
  void set_input_owners(std::vector<Role> owners);

  /// The input wires of `owner`, in group order.
  std::vector<std::uint32_t> input_wires(Role owner) const;

 private:
  CircuitHeader header_;
  std::vector<Gate> gates_;
  std::size_t and_count_ = 0;
};

Circuit parse_bristol(std::istream& in);
Circuit parse_bristol_string(std::string_view text);
Circuit parse_bristol_file(const std::string& path);

/// Cleartext evaluation; inputs are the concatenated input groups of each
/// party in group order. Returns every output wire.
BitVec plain_eval(const Circuit& c, const BitVec& inputs_A, const BitVec& inputs_B);

/// Gate index range [begin, end).
struct Chunk {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
};

inline constexpr std::size_t kDefaultChunkSize = 1024;

std::vector<Chunk> chunks(const Circuit& c, std::size_t chunk_size = kDefaultChunkSize);

/// Random well-formed circuit of XOR/AND/INV gates. Gate i writes wire
/// inputs + i, so the last n_outputs gates produce the outputs.
Circuit random_circuit(Rng& rng, std::size_t inputs_A, std::size_t inputs_B, std::size_t n_gates,
                       std::size_t n_outputs);

/// Bristol Fashion text of a circuit.
std::string to_bristol(const Circuit& c);

}  // namespace mac2pc
