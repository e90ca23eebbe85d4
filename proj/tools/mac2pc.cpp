// Command-line driver: dealing, evaluation, benchmarking and bound checks.

#include <openssl/crypto.h>
#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "mac2pc/aes_circuit.hpp"
#include "mac2pc/bucket.hpp"
#include "mac2pc/circuit.hpp"
#include "mac2pc/dealer.hpp"
#include "mac2pc/leakage.hpp"
#include "mac2pc/local.hpp"
#include "mac2pc/runtime.hpp"
#include "mac2pc/transport.hpp"

using namespace mac2pc;
using json = nlohmann::json;

namespace {

enum Exit : int { kOk = 0, kAbort = 2, kUsage = 3, kOutOfMaterial = 4 };

struct Common {
  unsigned kappa = 128;
  unsigned psi = 40;
  std::optional<std::uint64_t> seed;
  std::uint64_t ot_seed = 0;
  bool json_out = false;
};

struct Peer {
  std::string listen;
  std::string connect;
  unsigned timeout_s = 120;
};

std::string to_hex(const std::vector<std::uint8_t>& bytes) {
  static const char* digits = "0123456789abcdef";
  std::string s;
  for (auto b : bytes) {
    s.push_back(digits[b >> 4]);
    s.push_back(digits[b & 15]);
  }
  return s;
}

BitVec parse_hex_bits(const std::string& hex, std::size_t nbits) {
  const std::size_t want = bytes_for_bits(nbits);
  std::vector<std::uint8_t> bytes(hex.size() / 2 + 1);
  std::size_t got = 0;
  if (!hex.empty() && OPENSSL_hexstr2buf_ex(bytes.data(), bytes.size(), &got, hex.c_str(), '\0') != 1) {
    throw UsageError("input is not a hex string");
  }
  bytes.resize(got);
  if (got != want) {
    throw UsageError("input has " + std::to_string(got) + " bytes, expected " + std::to_string(want) + " (" +
                     std::to_string(nbits) + " bits)");
  }
  BitVec v = BitVec::from_bytes(bytes, nbits);
  if (v.to_bytes() != bytes) throw UsageError("input sets bits beyond the " + std::to_string(nbits) + " input wires");
  return v;
}

Rng make_rng(const Common& c, Role r) { return c.seed ? party_rng(*c.seed, r) : Rng::from_os(); }

std::unique_ptr<Channel> open_channel(const Peer& p) {
  if (p.listen.empty() == p.connect.empty()) throw UsageError("give exactly one of --listen and --connect");
  const auto timeout = std::chrono::seconds(p.timeout_s);
  std::unique_ptr<Channel> ch;
  if (!p.listen.empty()) {
    const auto [host, port] = parse_endpoint(p.listen);
    ch = tcp_listen(host, port, timeout);
  } else {
    const auto [host, port] = parse_endpoint(p.connect);
    ch = tcp_connect(host, port, timeout);
  }
  ch->set_timeout(timeout);
  return ch;
}

void check_writable(const std::string& path, bool force) {
  if (!force && std::filesystem::exists(path)) {
    throw UsageError("refusing to overwrite existing file " + path + " (use --force)");
  }
}

void emit(const Common& c, const json& j, const std::string& text) {
  if (c.json_out) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << text;
  }
}

json counts_json(const MaterialStore& m) {
  return {{"abits_own", m.abit_own.size()}, {"abits_peer", m.abit_key.size()}, {"aands_own", m.aand_own.size()},
          {"aands_peer", m.aand_key.size()}, {"aots_send", m.aot_send.size()},   {"aots_recv", m.aot_recv.size()}};
}

// --------------------------------------------------------------------------- deal

struct DealArgs {
  std::string role;
  Peer peer;
  bool local = false;
  std::size_t gates = 0;
  std::size_t inputs_a = 0;
  std::size_t inputs_b = 0;
  std::string circuit;
  std::size_t blocks = 1;
  std::optional<std::size_t> bucket;
  std::string out, out_a, out_b;
  bool force = false;
};

DealerConfig deal_config(const Common& c, const DealArgs& a) {
  DealerConfig cfg;
  if (!a.circuit.empty()) {
    cfg = config_for(parse_bristol_file(a.circuit), a.blocks, {c.kappa, c.psi}, a.bucket);
  } else {
    cfg = DealerConfig::for_circuit(a.gates, a.inputs_a, a.inputs_b, c.kappa, c.psi);
    cfg.bucket_aot = a.bucket;
    cfg.bucket_aand = a.bucket;
  }
  return cfg;
}

int cmd_deal(const Common& c, const DealArgs& a) {
  validate({c.kappa, c.psi});
  const DealerConfig cfg = deal_config(c, a);
  const auto t0 = std::chrono::steady_clock::now();
  if (a.local) {
    if (a.out_a.empty() || a.out_b.empty()) throw UsageError("--local needs --out-a and --out-b");
    check_writable(a.out_a, a.force);
    check_writable(a.out_b, a.force);
    if (!c.seed) throw UsageError("--local needs --seed (both parties run in this process)");
    const LocalDealResult r = deal_local(cfg, *c.seed);
    r.alice.save(a.out_a, a.force);
    r.bob.save(a.out_b, a.force);
    const json j = {{"command", "deal"},          {"mode", "local"},       {"kappa", c.kappa},
                    {"psi", c.psi},               {"and_gates", cfg.n_aands_A},
                    {"alice", counts_json(r.alice)}, {"bob", counts_json(r.bob)},
                    {"bytes_sent", r.bytes},      {"seconds", r.seconds}};
    std::ostringstream t;
    t << "dealt material for " << cfg.n_aands_A << " AND gates in " << r.seconds << " s (" << r.bytes
      << " bytes exchanged)\n"
      << "wrote " << a.out_a << " and " << a.out_b << "\n";
    emit(c, j, t.str());
    return kOk;
  }
  if (a.role.empty()) throw UsageError("--role is required unless --local is given");
  if (a.out.empty()) throw UsageError("--out is required");
  check_writable(a.out, a.force);
  const Role role = parse_role(a.role);
  auto ch = open_channel(a.peer);
  Session s(*ch, role, {c.kappa, c.psi}, make_rng(c, role));
  Hello hello;
  hello.kappa = static_cast<std::uint16_t>(c.kappa);
  hello.psi = static_cast<std::uint16_t>(c.psi);
  handshake(*ch, hello);
  DealerSeedOt ot(seed_ot_seed(c.ot_seed));
  const SessionId sid = agree_session_id(s);
  const MaterialStore m = deal(s, ot, cfg, sid);
  m.save(a.out, a.force);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const json j = {{"command", "deal"},  {"role", std::string(to_string(role))}, {"kappa", c.kappa},
                  {"psi", c.psi},       {"and_gates", cfg.n_aands_A},         {"records", counts_json(m)},
                  {"bytes_sent", ch->stats().bytes_sent}, {"seconds", secs},   {"out", a.out}};
  std::ostringstream t;
  t << "dealt material for " << cfg.n_aands_A << " AND gates in " << secs << " s; wrote " << a.out << "\n";
  emit(c, j, t.str());
  return kOk;
}

// --------------------------------------------------------------------------- eval

struct EvalArgs {
  std::string role;
  Peer peer;
  std::string circuit;
  std::string material;
  std::string input;
  std::string output_to = "both";
  std::size_t chunk = kDefaultChunkSize;
};

OutputTo parse_output_to(const std::string& s) {
  if (s == "both") return OutputTo::Both;
  if (s == "A" || s == "a" || s == "alice") return OutputTo::Alice;
  if (s == "B" || s == "b" || s == "bob") return OutputTo::Bob;
  throw UsageError("--output-to must be both, A or B");
}

int cmd_eval(const Common& c, const EvalArgs& a) {
  const Role role = parse_role(a.role);
  const Circuit circuit = parse_bristol_file(a.circuit);
  MaterialStore m = MaterialStore::load(a.material);
  if (m.role != role) throw UsageError("material file belongs to the other role");
  const BitVec input = parse_hex_bits(a.input, circuit.header().inputs_of(role));
  auto ch = open_channel(a.peer);
  Session s(*ch, role, {m.kappa, m.psi}, make_rng(c, role));
  EvalOptions opts;
  opts.chunk_size = a.chunk;
  opts.output_to = parse_output_to(a.output_to);
  const EvalResult r = evaluate(s, circuit, input, m, opts);
  const std::size_t gates = circuit.gates().size();
  const double gps = r.online_seconds > 0 ? gates / r.online_seconds : 0.0;
  json j = {{"command", "eval"},
            {"role", std::string(to_string(role))},
            {"gates", gates},
            {"and_gates", circuit.and_count()},
            {"online_seconds", r.online_seconds},
            {"gates_per_second", gps},
            {"bytes_sent", ch->stats().bytes_sent},
            {"revealed_bits", r.stats.revealed_bits}};
  std::ostringstream t;
  if (r.outputs) {
    j["output"] = to_hex(r.outputs->to_bytes());
    t << "output " << to_hex(r.outputs->to_bytes()) << "\n";
  } else {
    j["output"] = nullptr;
    t << "output withheld (sent to the peer)\n";
  }
  t << gates << " gates in " << r.online_seconds << " s online (" << static_cast<std::uint64_t>(gps)
    << " gates/s)\n";
  emit(c, j, t.str());
  return kOk;
}

// --------------------------------------------------------------------------- bench-aes

std::vector<std::uint8_t> aes_oracle(const std::vector<std::uint8_t>& key, const std::vector<std::uint8_t>& pt) {
  std::vector<std::uint8_t> ct(32);
  EVP_CIPHER_CTX* ctx = EVP_CIPHER_CTX_new();
  int len = 0;
  EVP_EncryptInit_ex(ctx, EVP_aes_128_ecb(), nullptr, key.data(), nullptr);
  EVP_CIPHER_CTX_set_padding(ctx, 0);
  EVP_EncryptUpdate(ctx, ct.data(), &len, pt.data(), 16);
  EVP_CIPHER_CTX_free(ctx);
  ct.resize(16);
  return ct;
}

struct BenchArgs {
  std::size_t blocks = 1;
  std::size_t bucket = kDefaultBucketSize;
};

int cmd_bench_aes(const Common& c, const BenchArgs& a) {
  if (a.blocks == 0) throw UsageError("--blocks must be positive");
  validate({c.kappa, c.psi});
  const std::uint64_t seed = c.seed ? *c.seed : Rng::from_os().next_u64();
  const Circuit aes = aes128_circuit(false);
  const DealerConfig cfg = config_for(aes, a.blocks, {c.kappa, c.psi}, a.bucket);
  LocalDealResult d = deal_local(cfg, seed);
  Rng rng(seed ^ 0xAE5ULL);
  double online = 0;
  std::uint64_t online_bytes = 0;
  std::size_t correct = 0;
  for (std::size_t b = 0; b < a.blocks; ++b) {
    const BitVec key = rng.bits(128), pt = rng.bits(128);
    const LocalEvalResult r = evaluate_local(aes, key, pt, d.alice, d.bob, seed + b);
    online += r.seconds;
    online_bytes += r.bytes;
    correct += r.out_alice.to_bytes() == aes_oracle(key.to_bytes(), pt.to_bytes()) && r.out_alice == r.out_bob;
  }
  const double total = d.seconds + online;
  const std::size_t gates = a.blocks * aes.gates().size();
  const double gps = gates / total;
  const json j = {{"command", "bench-aes"},  {"blocks", a.blocks},         {"gates", gates},
                  {"and_gates", a.blocks * aes.and_count()}, {"kappa", c.kappa}, {"psi", c.psi},
                  {"bucket", a.bucket},       {"t_pre", d.seconds},         {"t_online", online},
                  {"t_tot", total},           {"gates_per_second", gps},    {"pre_bytes", d.bytes},
                  {"online_bytes", online_bytes}, {"correct_blocks", correct}};
  char line[256];
  std::ostringstream t;
  t << "  blocks      gates     T_pre(s)  T_online(s)  T_tot(s)   G/T_tot   correct\n";
  std::snprintf(line, sizeof(line), "%8zu %10zu %12.3f %12.3f %9.3f %9.0f   %zu/%zu\n", a.blocks, gates, d.seconds,
                online, total, gps, correct, a.blocks);
  t << line;
  emit(c, j, t.str());
  return correct == a.blocks ? kOk : kAbort;
}

// --------------------------------------------------------------------------- verify-bounds

int cmd_verify_bounds(const Common& c, std::size_t trials) {
  Rng rng = c.seed ? Rng(*c.seed) : Rng::from_os();
  const auto checks = verify_bounds(trials, rng);
  json arr = json::array();
  std::ostringstream t;
  bool all = true;
  for (const auto& k : checks) {
    all &= k.pass;
    arr.push_back({{"name", k.name},
                   {"measured", k.measured},
                   {"reference", k.reference},
                   {"tolerance", k.tolerance},
                   {"pass", k.pass}});
    char line[256];
    std::snprintf(line, sizeof(line), "%s %-40s measured %-12.6g reference %-12.6g", k.pass ? "PASS" : "FAIL",
                  k.name.c_str(), k.measured, k.reference);
    t << line;
    if (k.tolerance > 0) {
      std::snprintf(line, sizeof(line), " tolerance %.3g", k.tolerance);
      t << line;
    }
    t << "\n";
  }
  emit(c, {{"command", "verify-bounds"}, {"trials", trials}, {"checks", arr}, {"pass", all}}, t.str());
  return all ? kOk : kAbort;
}

// --------------------------------------------------------------------------- gen-aes

int cmd_gen_aes(const Common& c, const std::string& out, bool shared, bool force) {
  const Circuit aes = aes128_circuit(shared);
  const std::string text = to_bristol(aes);
  if (out.empty() || out == "-") {
    std::cout << text;
    return kOk;
  }
  check_writable(out, force);
  std::ofstream f(out, std::ios::binary | std::ios::trunc);
  if (!f) throw UsageError("cannot open " + out + " for writing");
  f << text;
  if (!f) throw std::runtime_error("write to " + out + " failed");
  const json j = {{"command", "gen-aes"},       {"out", out},
                  {"gates", aes.gates().size()}, {"and_gates", aes.and_count()},
                  {"wires", aes.header().n_wires}};
  emit(c, j, "wrote " + out + ": " + std::to_string(aes.gates().size()) + " gates, " +
                 std::to_string(aes.and_count()) + " AND\n");
  return kOk;
}

void add_peer_options(CLI::App* sub, Peer& p) {
  sub->add_option("--listen", p.listen, "Accept the peer on host:port");
  sub->add_option("--connect,--peer", p.connect, "Dial the peer at host:port");
  sub->add_option("--timeout", p.timeout_s, "Seconds to wait for the peer and for each message")
      ->envname("MAC2PC_TIMEOUT")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-party computation with authenticated bits"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--kappa", common.kappa, "Computational security parameter (MAC length, 8..128)")
      ->envname("MAC2PC_KAPPA")
      ->capture_default_str();
  app.add_option("--psi", common.psi, "Statistical security parameter")->envname("MAC2PC_PSI")->capture_default_str();
  app.add_option("--seed", common.seed, "Seed for all randomness (default: OS entropy)")->envname("MAC2PC_SEED");
  app.add_option("--ot-seed", common.ot_seed, "Shared seed of the insecure dealer seed-OT backend")
      ->envname("MAC2PC_OT_SEED")
      ->capture_default_str();
  app.add_flag("--json", common.json_out, "Machine-readable report on stdout")->envname("MAC2PC_JSON");

  DealArgs deal_args;
  auto* deal_cmd = app.add_subcommand("deal", "Run the preprocessing phase and write a material file");
  deal_cmd->add_option("--role", deal_args.role, "A or B");
  add_peer_options(deal_cmd, deal_args.peer);
  deal_cmd->add_flag("--local", deal_args.local, "Run both parties in this process");
  deal_cmd->add_option("--gates", deal_args.gates, "Number of AND gates to prepare for");
  deal_cmd->add_option("--inputs-a", deal_args.inputs_a, "Input wires of A");
  deal_cmd->add_option("--inputs-b", deal_args.inputs_b, "Input wires of B");
  deal_cmd->add_option("--circuit", deal_args.circuit, "Size the material for this Bristol circuit")
      ->check(CLI::ExistingFile);
  deal_cmd->add_option("--blocks", deal_args.blocks, "Evaluations of --circuit to prepare for")
      ->capture_default_str();
  deal_cmd->add_option("--bucket", deal_args.bucket, "Bucket size (default: from the leakage inequality)");
  deal_cmd->add_option("--out", deal_args.out, "Material file for --role");
  deal_cmd->add_option("--out-a", deal_args.out_a, "A's material file (--local)");
  deal_cmd->add_option("--out-b", deal_args.out_b, "B's material file (--local)");
  deal_cmd->add_flag("--force", deal_args.force, "Overwrite existing files");

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a circuit on dealt material");
  eval_cmd->add_option("--role", eval_args.role, "A or B")->required();
  add_peer_options(eval_cmd, eval_args.peer);
  eval_cmd->add_option("--circuit", eval_args.circuit, "Bristol circuit")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--material", eval_args.material, "Material file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--input", eval_args.input, "This party's input bits as hex, byte 0 first, LSB first");
  eval_cmd->add_option("--output-to", eval_args.output_to, "both, A or B")->capture_default_str();
  eval_cmd->add_option("--chunk", eval_args.chunk, "Gates per chunk")->capture_default_str();

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench-aes", "Deal and evaluate AES-128 blocks in one process");
  bench_cmd->add_option("--blocks", bench_args.blocks, "Number of blocks")->capture_default_str();
  bench_cmd->add_option("--bucket", bench_args.bucket, "Bucket size")->capture_default_str();

  std::size_t trials = 20000;
  auto* bounds_cmd = app.add_subcommand("verify-bounds", "Check the leakage and bucketing bounds");
  bounds_cmd->add_option("--trials", trials, "Monte Carlo trials per point")->capture_default_str();

  std::string gen_out;
  bool gen_shared = false, gen_force = false;
  auto* gen_cmd = app.add_subcommand("gen-aes", "Write the AES-128 circuit in Bristol Fashion");
  gen_cmd->add_option("--out", gen_out, "Output file (default: stdout)");
  gen_cmd->add_flag("--shared-key", gen_shared, "Key is the XOR of a key share from each party");
  gen_cmd->add_flag("--force", gen_force, "Overwrite an existing file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*deal_cmd) return cmd_deal(common, deal_args);
    if (*eval_cmd) return cmd_eval(common, eval_args);
    if (*bench_cmd) return cmd_bench_aes(common, bench_args);
    if (*bounds_cmd) return cmd_verify_bounds(common, trials);
    if (*gen_cmd) return cmd_gen_aes(common, gen_out, gen_shared, gen_force);
  } catch (const ProtocolAbort& e) {
    std::cerr << "abort in phase " << e.phase() << ": " << e.what() << "\n";
    return kAbort;
  } catch (const OutOfMaterial& e) {
    std::cerr << "out of material: " << e.what() << "\n";
    return kOutOfMaterial;
  } catch (const TransportError& e) {
    std::cerr << "abort in phase transport: " << e.what() << "\n";
    return kAbort;
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kAbort;
  }
  return kUsage;
}
