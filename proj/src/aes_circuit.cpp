#include "mac2pc/aes_circuit.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

namespace mac2pc {

namespace {

// ---------------------------------------------------------------------------
// Reference arithmetic. The S-box is built over the tower
// GF(4) = GF(2)[w]/(w^2+w+1), GF(16) = GF(4)[z]/(z^2+z+nu),
// GF(256) = GF(16)[y]/(y^2+y+lambda), where each inversion reduces to
// a few multiplications in the subfield.

unsigned aes_mul(unsigned a, unsigned b) {
  unsigned r = 0;
  for (int i = 0; i < 8; ++i) {
    if (b & 1) r ^= a;
    b >>= 1;
    a <<= 1;
    if (a & 0x100) a ^= 0x11B;
  }
  return r;
}

unsigned gf4_mul(unsigned a, unsigned b) {
  const unsigned a1 = a >> 1, a0 = a & 1, b1 = b >> 1, b0 = b & 1;
  const unsigned p = a1 & b1, q = a0 & b0, r = (a1 ^ a0) & (b1 ^ b0);
  return ((r ^ q) << 1) | (p ^ q);
}

unsigned gf16_mul(unsigned a, unsigned b, unsigned nu) {
  const unsigned ah = a >> 2, al = a & 3, bh = b >> 2, bl = b & 3;
  const unsigned p = gf4_mul(ah, bh), q = gf4_mul(al, bl), r = gf4_mul(ah ^ al, bh ^ bl);
  return ((r ^ q) << 2) | (gf4_mul(p, nu) ^ q);
}

/// One choice of tower parameters: nu and lambda make the quadratics
/// irreducible, beta is a root of the AES polynomial in the tower field.
struct Tower {
  unsigned nu = 0;
  unsigned lambda = 0;
  std::array<unsigned, 256> to_tower{};
  std::array<unsigned, 256> from_tower{};

  unsigned mul16(unsigned a, unsigned b) const { return gf16_mul(a, b, nu); }

  unsigned mul(unsigned a, unsigned b) const {
    const unsigned ah = a >> 4, al = a & 15, bh = b >> 4, bl = b & 15;
    const unsigned p = mul16(ah, bh), q = mul16(al, bl), r = mul16(ah ^ al, bh ^ bl);
    return ((r ^ q) << 4) | (mul16(p, lambda) ^ q);
  }

  Tower(unsigned nu_, unsigned lambda_, unsigned beta) : nu(nu_), lambda(lambda_) {
    std::array<unsigned, 8> cols{};
    unsigned p = 1;
    for (int i = 0; i < 8; ++i) {
      cols[i] = p;
      p = mul(p, beta);
    }
    for (unsigned v = 0; v < 256; ++v) {
      unsigned t = 0;
      for (int i = 0; i < 8; ++i) {
        if ((v >> i) & 1) t ^= cols[i];
      }
      to_tower[v] = t;
    }
    for (unsigned v = 0; v < 256; ++v) from_tower[to_tower[v]] = v;
    for (unsigned x = 0; x < 256; ++x) {
      for (unsigned y = 0; y < 256; y += 3) {
        if (to_tower[aes_mul(x, y)] != mul(to_tower[x], to_tower[y])) {
          throw std::logic_error("tower isomorphism is not multiplicative");
        }
      }
    }
  }

  /// Every valid parameter choice.
  static std::vector<Tower> all() {
    std::vector<Tower> out;
    for (unsigned nu : {2u, 3u}) {
      for (unsigned l = 1; l < 16; ++l) {
        bool has_root = false;
        for (unsigned t = 0; t < 16 && !has_root; ++t) has_root = (gf16_mul(t, t, nu) ^ t) == l;
        if (has_root) continue;
        Tower probe(nu, l);
        for (unsigned beta = 2; beta < 256; ++beta) {
          unsigned pw[9];
          pw[0] = 1;
          for (int i = 1; i <= 8; ++i) pw[i] = probe.mul(pw[i - 1], beta);
          if ((pw[8] ^ pw[4] ^ pw[3] ^ pw[1] ^ pw[0]) == 0) out.emplace_back(nu, l, beta);
        }
      }
    }
    return out;
  }

 private:
  Tower(unsigned nu_, unsigned lambda_) : nu(nu_), lambda(lambda_) {}
};

unsigned affine(unsigned b) {
  unsigned r = 0;
  for (int i = 0; i < 8; ++i) {
    const unsigned bit = ((b >> i) ^ (b >> ((i + 4) % 8)) ^ (b >> ((i + 5) % 8)) ^ (b >> ((i + 6) % 8)) ^
                          (b >> ((i + 7) % 8))) &
                         1;
    r |= bit << i;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Circuit construction

using W = std::uint32_t;
using Wires = std::vector<W>;

class Builder {
 public:
  Builder(std::uint32_t n_inputs, const Tower& t) : t_(t), next_(n_inputs) {}

  /// XOR gates are memoized so repeated operand sums share one gate.
  W xor_(W a, W b) {
    const auto key = std::minmax(a, b);
    const auto it = xor_memo_.find(key);
    if (it != xor_memo_.end()) return it->second;
    const W out = emit(GateKind::Xor, a, b);
    xor_memo_.emplace(key, out);
    return out;
  }
  W and_(W a, W b) { return emit(GateKind::And, a, b); }
  W inv(W a) { return emit(GateKind::Inv, a, a); }
  W copy(W a) { return emit(GateKind::Eqw, a, a); }

  Wires xor_(const Wires& a, const Wires& b) {
    Wires r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = xor_(a[i], b[i]);
    return r;
  }

  /// out bit j = XOR of in bits i with bit j of f(1 << i) set; f must be linear.
  /// Shared pairs are factored out greedily, most frequent pair first.
  Wires linear(const Wires& in, unsigned out_bits, const std::function<unsigned(unsigned)>& f) {
    std::vector<W> cols(in.begin(), in.end());
    std::vector<std::vector<bool>> rows(out_bits, std::vector<bool>(in.size(), false));
    for (unsigned i = 0; i < in.size(); ++i) {
      const unsigned img = f(1u << i);
      for (unsigned j = 0; j < out_bits; ++j) rows[j][i] = (img >> j) & 1;
    }
    for (;;) {
      std::size_t best = 1, bi = 0, bk = 0;
      for (std::size_t i = 0; i < cols.size(); ++i) {
        for (std::size_t k = i + 1; k < cols.size(); ++k) {
          std::size_t n = 0;
          for (const auto& r : rows) n += r[i] && r[k];
          if (n > best) {
            best = n;
            bi = i;
            bk = k;
          }
        }
      }
      if (best < 2) break;
      cols.push_back(xor_(cols[bi], cols[bk]));
      for (auto& r : rows) {
        const bool both = r[bi] && r[bk];
        if (both) r[bi] = r[bk] = false;
        r.push_back(both);
      }
    }
    Wires out(out_bits);
    for (unsigned j = 0; j < out_bits; ++j) {
      bool have = false;
      W acc = 0;
      for (std::size_t i = 0; i < cols.size(); ++i) {
        if (!rows[j][i]) continue;
        acc = have ? xor_(acc, cols[i]) : cols[i];
        have = true;
      }
      if (!have) throw std::logic_error("linear map has a zero output row");
      out[j] = acc;
    }
    return out;
  }

  Wires gf4_mul(const Wires& a, const Wires& b) {
    const W p = and_(a[1], b[1]);
    const W q = and_(a[0], b[0]);
    const W r = and_(xor_(a[1], a[0]), xor_(b[1], b[0]));
    return {xor_(p, q), xor_(r, q)};
  }

  Wires gf16_mul(const Wires& a, const Wires& b) {
    const Wires ah{a[2], a[3]}, al{a[0], a[1]}, bh{b[2], b[3]}, bl{b[0], b[1]};
    const Wires p = gf4_mul(ah, bh);
    const Wires q = gf4_mul(al, bl);
    const Wires r = gf4_mul(xor_(ah, al), xor_(bh, bl));
    const Wires pn = linear(p, 2, [nu = t_.nu](unsigned v) { return mac2pc::gf4_mul(v, nu); });
    const Wires lo = xor_(pn, q);
    const Wires hi = xor_(r, q);
    return {lo[0], lo[1], hi[0], hi[1]};
  }

  Wires gf16_inv(const Wires& a) {
    const Wires ah{a[2], a[3]}, al{a[0], a[1]};
    // d = nu*ah^2 + ah*al + al^2; the inverse in GF(4) is the square.
    const Wires sq = linear(a, 2, [nu = t_.nu](unsigned v) {
      const unsigned h = v >> 2, l = v & 3;
      return mac2pc::gf4_mul(mac2pc::gf4_mul(h, h), nu) ^ mac2pc::gf4_mul(l, l);
    });
    const Wires d = xor_(sq, gf4_mul(ah, al));
    const Wires dinv = linear(d, 2, [](unsigned v) { return mac2pc::gf4_mul(v, v); });
    const Wires hi = gf4_mul(ah, dinv);
    const Wires lo = gf4_mul(xor_(ah, al), dinv);
    return {lo[0], lo[1], hi[0], hi[1]};
  }

  Wires gf256_inv(const Wires& a) {
    const Wires ah{a[4], a[5], a[6], a[7]}, al{a[0], a[1], a[2], a[3]};
    const Wires sq = linear(a, 4, [this](unsigned v) {
      const unsigned h = v >> 4, l = v & 15;
      return t_.mul16(t_.mul16(h, h), t_.lambda) ^ t_.mul16(l, l);
    });
    const Wires d = xor_(sq, gf16_mul(ah, al));
    const Wires dinv = gf16_inv(d);
    const Wires hi = gf16_mul(ah, dinv);
    const Wires lo = gf16_mul(xor_(ah, al), dinv);
    return {lo[0], lo[1], lo[2], lo[3], hi[0], hi[1], hi[2], hi[3]};
  }

  Wires sbox(const Wires& x) {
    const Tower& t = t_;
    const Wires y = linear(x, 8, [&t](unsigned v) { return t.to_tower[v]; });
    const Wires inv_y = gf256_inv(y);
    Wires out = linear(inv_y, 8, [&t](unsigned v) { return affine(t.from_tower[v]); });
    for (unsigned j = 0; j < 8; ++j) {
      if ((0x63 >> j) & 1) out[j] = inv(out[j]);
    }
    return out;
  }

  Wires add_const(const Wires& x, unsigned c) {
    Wires out = x;
    for (unsigned j = 0; j < x.size(); ++j) {
      if ((c >> j) & 1) out[j] = inv(x[j]);
    }
    return out;
  }

  std::vector<Gate>& gates() { return gates_; }
  std::uint32_t wires() const { return next_; }

 private:
  W emit(GateKind k, W a, W b) {
    gates_.push_back(Gate{k, a, b, next_});
    return next_++;
  }
  const Tower& t_;
  std::map<std::pair<W, W>, W> xor_memo_;
  std::vector<Gate> gates_;
  std::uint32_t next_;
};

Wires byte_wires(const Wires& all, std::size_t byte) {
  return Wires(all.begin() + static_cast<std::ptrdiff_t>(8 * byte), all.begin() + static_cast<std::ptrdiff_t>(8 * byte + 8));
}

unsigned xtime(unsigned a) { return ((a << 1) ^ ((a & 0x80) ? 0x1B : 0)) & 0xFF; }

/// MixColumns on one column packed as 4 bytes (byte r at bits 8r..8r+7).
unsigned mix_column(unsigned col) {
  unsigned a[4], r = 0;
  for (int i = 0; i < 4; ++i) a[i] = (col >> (8 * i)) & 0xFF;
  for (int i = 0; i < 4; ++i) {
    const unsigned b = xtime(a[i]) ^ (xtime(a[(i + 1) % 4]) ^ a[(i + 1) % 4]) ^ a[(i + 2) % 4] ^ a[(i + 3) % 4];
    r |= b << (8 * i);
  }
  return r;
}

Circuit finish(Builder& b, CircuitHeader h, const Wires& outputs) {
  // Outputs must occupy the last wires.
  for (W w : outputs) b.copy(w);
  h.n_wires = b.wires();
  return Circuit(std::move(h), std::move(b.gates()));
}

/// The tower parameters giving the smallest S-box circuit.
const Tower& tower() {
  static const Tower best = [] {
    const std::vector<Tower> cands = Tower::all();
    std::size_t best_i = 0, best_n = SIZE_MAX;
    for (std::size_t i = 0; i < cands.size(); ++i) {
      Builder b(8, cands[i]);
      Wires in(8);
      for (W w = 0; w < 8; ++w) in[w] = w;
      b.sbox(in);
      if (b.gates().size() < best_n) {
        best_n = b.gates().size();
        best_i = i;
      }
    }
    return cands.at(best_i);
  }();
  return best;
}

}  // namespace

std::array<std::uint8_t, 256> aes_sbox_table() {
  std::array<std::uint8_t, 256> t{};
  for (unsigned x = 0; x < 256; ++x) {
    unsigned inv = 0;
    for (unsigned y = 1; y < 256 && x != 0; ++y) {
      if (aes_mul(x, y) == 1) {
        inv = y;
        break;
      }
    }
    t[x] = static_cast<std::uint8_t>(affine(inv) ^ 0x63);
  }
  return t;
}

Circuit aes_sbox_circuit() {
  Builder b(8, tower());
  Wires in(8);
  for (W i = 0; i < 8; ++i) in[i] = i;
  const Wires out = b.sbox(in);
  CircuitHeader h;
  h.input_sizes = {8, 0};
  h.output_sizes = {8};
  h.input_owners = {Role::Alice, Role::Bob};
  return finish(b, std::move(h), out);
}

Circuit aes128_circuit(bool shared_key) {
  const std::uint32_t n_in = shared_key ? 384 : 256;
  Builder b(n_in, tower());
  Wires key(128), pt(128);
  for (W i = 0; i < 128; ++i) {
    key[i] = i;
    pt[i] = 128 + i;
  }
  if (shared_key) {
    Wires kb(128);
    for (W i = 0; i < 128; ++i) kb[i] = 256 + i;
    key = b.xor_(key, kb);
  }

  // Key expansion: 44 words of 4 bytes.
  std::vector<Wires> w(44);
  for (int i = 0; i < 4; ++i) {
    w[i] = Wires(key.begin() + 32 * i, key.begin() + 32 * i + 32);
  }
  unsigned rcon = 1;
  for (int i = 4; i < 44; ++i) {
    Wires temp = w[i - 1];
    if (i % 4 == 0) {
      Wires rot(32);
      for (int j = 0; j < 4; ++j) {
        const Wires s = b.sbox(byte_wires(temp, (j + 1) % 4));
        std::copy(s.begin(), s.end(), rot.begin() + 8 * j);
      }
      const Wires first = b.add_const(byte_wires(rot, 0), rcon);
      std::copy(first.begin(), first.end(), rot.begin());
      temp = rot;
      rcon = xtime(rcon);
    }
    w[i] = b.xor_(w[i - 4], temp);
  }
  auto round_key = [&](int r) {
    Wires k;
    for (int j = 0; j < 4; ++j) k.insert(k.end(), w[4 * r + j].begin(), w[4 * r + j].end());
    return k;
  };

  Wires state = b.xor_(pt, round_key(0));
  for (int round = 1; round <= 10; ++round) {
    Wires sub(128);
    for (int i = 0; i < 16; ++i) {
      const Wires s = b.sbox(byte_wires(state, i));
      std::copy(s.begin(), s.end(), sub.begin() + 8 * i);
    }
    Wires shifted(128);
    for (int c = 0; c < 4; ++c) {
      for (int r = 0; r < 4; ++r) {
        const int from = r + 4 * ((c + r) % 4);
        std::copy(sub.begin() + 8 * from, sub.begin() + 8 * from + 8, shifted.begin() + 8 * (r + 4 * c));
      }
    }
    if (round != 10) {
      Wires mixed(128);
      for (int c = 0; c < 4; ++c) {
        const Wires col(shifted.begin() + 32 * c, shifted.begin() + 32 * c + 32);
        const Wires m = b.linear(col, 32, mix_column);
        std::copy(m.begin(), m.end(), mixed.begin() + 32 * c);
      }
      shifted = mixed;
    }
    state = b.xor_(shifted, round_key(round));
  }

  CircuitHeader h;
  if (shared_key) {
    h.input_sizes = {256, 128};
  } else {
    h.input_sizes = {128, 128};
  }
  h.output_sizes = {128};
  h.input_owners = {Role::Alice, Role::Bob};
  return finish(b, std::move(h), state);
}

}  // namespace mac2pc
