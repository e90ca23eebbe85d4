#include "mac2pc/circuit.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>

#include "mac2pc/rng.hpp"

namespace mac2pc {

std::string_view to_string(GateKind k) {
  switch (k) {
    case GateKind::Xor: return "XOR";
    case GateKind::And: return "AND";
    case GateKind::Inv: return "INV";
    case GateKind::Eqw: return "EQW";
  }
  return "?";
}

std::size_t CircuitHeader::total_inputs() const {
  return std::accumulate(input_sizes.begin(), input_sizes.end(), std::size_t{0});
}

std::size_t CircuitHeader::total_outputs() const {
  return std::accumulate(output_sizes.begin(), output_sizes.end(), std::size_t{0});
}

std::size_t CircuitHeader::inputs_of(Role r) const {
  std::size_t n = 0;
  for (std::size_t g = 0; g < input_sizes.size(); ++g) {
    if (input_owners[g] == r) n += input_sizes[g];
  }
  return n;
}

std::size_t CircuitHeader::input_offset(std::size_t g) const {
  return std::accumulate(input_sizes.begin(), input_sizes.begin() + static_cast<std::ptrdiff_t>(g), std::size_t{0});
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

std::size_t number(const std::string& tok, std::size_t line, const char* what) {
  if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw ParseError(line, std::string("expected a number for ") + what + ", got '" + tok + "'");
  }
  try {
    return std::stoull(tok);
  } catch (const std::exception&) {
    throw ParseError(line, std::string("number out of range for ") + what);
  }
}

std::vector<std::size_t> sized_list(const std::vector<std::string>& t, std::size_t line, const char* what) {
  if (t.empty()) throw ParseError(line, std::string("missing ") + what + " line");
  const std::size_t n = number(t[0], line, what);
  if (t.size() != n + 1) throw ParseError(line, std::string(what) + " line lists the wrong number of sizes");
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i < t.size(); ++i) out.push_back(number(t[i], line, what));
  return out;
}

std::vector<Role> default_owners(std::size_t groups) {
  std::vector<Role> owners(groups, Role::Bob);
  if (!owners.empty()) owners[0] = Role::Alice;
  return owners;
}

}  // namespace

bool BristolReader::getline(std::string& out) {
  while (std::getline(in_, out)) {
    ++line_;
    if (!out.empty() && out.back() == '\r') out.pop_back();
    if (out.find_first_not_of(" \t") != std::string::npos) return true;
  }
  return false;
}

BristolReader::BristolReader(std::istream& in) : in_(in) {
  std::string l;
  if (!getline(l)) throw ParseError(line_ + 1, "empty circuit file");
  auto t = tokens(l);
  if (t.size() != 2) throw ParseError(line_, "first line must be '<gates> <wires>'");
  header_.n_gates = number(t[0], line_, "gate count");
  header_.n_wires = number(t[1], line_, "wire count");
  if (header_.n_wires > 0xFFFFFFFFull) throw ParseError(line_, "too many wires");
  if (!getline(l)) throw ParseError(line_ + 1, "missing input line");
  header_.input_sizes = sized_list(tokens(l), line_, "input");
  if (!getline(l)) throw ParseError(line_ + 1, "missing output line");
  header_.output_sizes = sized_list(tokens(l), line_, "output");
  header_.input_owners = default_owners(header_.input_sizes.size());
  if (header_.total_inputs() > header_.n_wires || header_.total_outputs() > header_.n_wires) {
    throw ParseError(line_, "input/output counts exceed the wire count");
  }
  defined_.assign(header_.n_wires, false);
  std::fill_n(defined_.begin(), header_.total_inputs(), true);
}

std::optional<Gate> BristolReader::next() {
  std::string l;
  if (!getline(l)) {
    if (gates_read_ != header_.n_gates) {
      throw ParseError(line_, "expected " + std::to_string(header_.n_gates) + " gates, found " +
                                  std::to_string(gates_read_));
    }
    for (std::size_t w = header_.first_output_wire(); w < header_.n_wires; ++w) {
      if (!defined_[w]) throw ParseError(line_, "output wire " + std::to_string(w) + " is never assigned");
    }
    return std::nullopt;
  }
  if (gates_read_ == header_.n_gates) throw ParseError(line_, "more gates than declared");
  const auto t = tokens(l);
  if (t.size() < 4) throw ParseError(line_, "gate line too short");
  const std::size_t nin = number(t[0], line_, "gate input count");
  const std::size_t nout = number(t[1], line_, "gate output count");
  if (nout != 1) throw ParseError(line_, "gates must have exactly one output");
  if (t.size() != nin + nout + 3) throw ParseError(line_, "gate line has the wrong number of fields");
  const std::string& op = t.back();
  Gate g;
  std::size_t want_in = 0;
  if (op == "XOR") {
    g.kind = GateKind::Xor;
    want_in = 2;
  } else if (op == "AND") {
    g.kind = GateKind::And;
    want_in = 2;
  } else if (op == "INV" || op == "NOT") {
    g.kind = GateKind::Inv;
    want_in = 1;
  } else if (op == "EQW") {
    g.kind = GateKind::Eqw;
    want_in = 1;
  } else {
    throw ParseError(line_, "unsupported gate '" + op + "'");
  }
  if (nin != want_in) throw ParseError(line_, op + " gate takes " + std::to_string(want_in) + " inputs");
  auto wire = [&](const std::string& tok) {
    const std::size_t w = number(tok, line_, "wire id");
    if (w >= header_.n_wires) throw ParseError(line_, "wire " + tok + " out of range");
    return static_cast<std::uint32_t>(w);
  };
  g.in0 = wire(t[2]);
  g.in1 = want_in == 2 ? wire(t[3]) : g.in0;
  g.out = wire(t[2 + nin]);
  if (!defined_[g.in0] || !defined_[g.in1]) throw ParseError(line_, "gate reads a wire before it is assigned");
  if (defined_[g.out]) throw ParseError(line_, "wire " + std::to_string(g.out) + " assigned twice");
  defined_[g.out] = true;
  ++gates_read_;
  return g;
}

// ---------------------------------------------------------------------------

Circuit::Circuit(CircuitHeader header, std::vector<Gate> gates) : header_(std::move(header)), gates_(std::move(gates)) {
  if (header_.input_owners.size() != header_.input_sizes.size()) {
    header_.input_owners = default_owners(header_.input_sizes.size());
  }
  header_.n_gates = gates_.size();
  and_count_ = static_cast<std::size_t>(
      std::count_if(gates_.begin(), gates_.end(), [](const Gate& g) { return g.kind == GateKind::And; }));
}

std::size_t Circuit::and_depth() const {
  std::vector<std::uint32_t> depth(header_.n_wires, 0);
  std::uint32_t best = 0;
  for (const Gate& g : gates_) {
    const std::uint32_t d = std::max(depth[g.in0], depth[g.in1]) + (g.kind == GateKind::And ? 1 : 0);
    depth[g.out] = d;
    best = std::max(best, d);
  }
  return best;
}

void Circuit::set_input_owners(std::vector<Role> owners) {
  if (owners.size() != header_.input_sizes.size()) throw UsageError("one owner per input group required");
  header_.input_owners = std::move(owners);
}

std::vector<std::uint32_t> Circuit::input_wires(Role owner) const {
  std::vector<std::uint32_t> out;
  for (std::size_t g = 0; g < header_.input_sizes.size(); ++g) {
    if (header_.input_owners[g] != owner) continue;
    const std::size_t off = header_.input_offset(g);
    for (std::size_t i = 0; i < header_.input_sizes[g]; ++i) out.push_back(static_cast<std::uint32_t>(off + i));
  }
  return out;
}

Circuit parse_bristol(std::istream& in) {
  BristolReader reader(in);
  std::vector<Gate> gates;
  gates.reserve(reader.header().n_gates);
  while (auto g = reader.next()) gates.push_back(*g);
  return Circuit(reader.header(), std::move(gates));
}

Circuit parse_bristol_string(std::string_view text) {
  std::istringstream is{std::string(text)};
  return parse_bristol(is);
}

Circuit parse_bristol_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open circuit file " + path);
  return parse_bristol(f);
}

BitVec plain_eval(const Circuit& c, const BitVec& inputs_A, const BitVec& inputs_B) {
  const auto& h = c.header();
  if (inputs_A.size() != h.inputs_of(Role::Alice) || inputs_B.size() != h.inputs_of(Role::Bob)) {
    throw UsageError("plain_eval: input length does not match the circuit");
  }
  std::vector<std::uint8_t> w(h.n_wires, 0);
  std::size_t ia = 0, ib = 0;
  for (std::size_t g = 0; g < h.input_sizes.size(); ++g) {
    const std::size_t off = h.input_offset(g);
    for (std::size_t i = 0; i < h.input_sizes[g]; ++i) {
      w[off + i] = h.input_owners[g] == Role::Alice ? inputs_A.get(ia++) : inputs_B.get(ib++);
    }
  }
  for (const Gate& g : c.gates()) {
    switch (g.kind) {
      case GateKind::Xor: w[g.out] = w[g.in0] ^ w[g.in1]; break;
      case GateKind::And: w[g.out] = w[g.in0] & w[g.in1]; break;
      case GateKind::Inv: w[g.out] = w[g.in0] ^ 1; break;
      case GateKind::Eqw: w[g.out] = w[g.in0]; break;
    }
  }
  BitVec out(h.total_outputs());
  for (std::size_t i = 0; i < out.size(); ++i) out.set(i, w[h.first_output_wire() + i] != 0);
  return out;
}

std::vector<Chunk> chunks(const Circuit& c, std::size_t chunk_size) {
  if (chunk_size == 0) throw UsageError("chunk size must be positive");
  std::vector<Chunk> out;
  const std::size_t n = c.gates().size();
  for (std::size_t b = 0; b < n; b += chunk_size) out.push_back(Chunk{b, std::min(n, b + chunk_size)});
  return out;
}

Circuit random_circuit(Rng& rng, std::size_t inputs_A, std::size_t inputs_B, std::size_t n_gates,
                       std::size_t n_outputs) {
  const std::size_t n_in = inputs_A + inputs_B;
  if (n_in == 0 || n_outputs > n_gates) throw UsageError("random_circuit: bad shape");
  CircuitHeader h;
  h.n_wires = n_in + n_gates;
  h.input_sizes = {inputs_A, inputs_B};
  h.output_sizes = {n_outputs};
  h.input_owners = {Role::Alice, Role::Bob};
  std::vector<Gate> gates(n_gates);
  for (std::size_t i = 0; i < n_gates; ++i) {
    const std::size_t avail = n_in + i;
    // Bias towards recent wires so circuits get some depth.
    auto pick = [&] {
      const std::size_t window = std::min<std::size_t>(avail, 16);
      return static_cast<std::uint32_t>(rng.next_bit() ? avail - 1 - rng.uniform(window) : rng.uniform(avail));
    };
    Gate& g = gates[i];
    const std::uint64_t r = rng.uniform(10);
    g.kind = r < 1 ? GateKind::Inv : (r < 5 ? GateKind::Xor : GateKind::And);
    g.in0 = pick();
    g.in1 = g.kind == GateKind::Inv ? g.in0 : pick();
    g.out = static_cast<std::uint32_t>(avail);
  }
  return Circuit(std::move(h), std::move(gates));
}

std::string to_bristol(const Circuit& c) {
  const auto& h = c.header();
  std::ostringstream os;
  os << c.gates().size() << ' ' << h.n_wires << '\n' << h.input_sizes.size();
  for (auto s : h.input_sizes) os << ' ' << s;
  os << '\n' << h.output_sizes.size();
  for (auto s : h.output_sizes) os << ' ' << s;
  os << "\n\n";
  for (const Gate& g : c.gates()) {
    if (g.kind == GateKind::Xor || g.kind == GateKind::And) {
      os << "2 1 " << g.in0 << ' ' << g.in1 << ' ' << g.out << ' ' << to_string(g.kind) << '\n';
    } else {
      os << "1 1 " << g.in0 << ' ' << g.out << ' ' << to_string(g.kind) << '\n';
    }
  }
  return os.str();
}

}  // namespace mac2pc
