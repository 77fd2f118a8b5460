#include "qshor/revarith.hpp"

#include "qshor/errors.hpp"
#include "qshor/numtheory.hpp"

namespace qshor::revarith {

using rcir::ctrl;
using rcir::flip;
using rcir::seq_all;
using rcir::swap_bits;

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw param_error(msg);
}

}  // namespace

ArithLayout basic_layout(u32 width) {
  require(width >= 1, "basic_layout: width must be >= 1");
  ArithLayout L;
  L.width = width;
  L.flag0 = 0;
  L.flag1 = 1;
  for (u32 i = 0; i < width; ++i) L.reg_m.push_back(2 + i);
  for (u32 i = 0; i < width; ++i) L.reg_x.push_back(2 + width + i);
  for (u32 i = 0; i < width; ++i) L.reg_y.push_back(2 + 2 * width + i);
  L.total = 2 + 3 * width;
  return L;
}

RevPtr maj(u32 a, u32 b, u32 c) {
  // (a, b, c) -> (a^c, b^c, MAJ(a,b,c)); the majority lands on the third wire.
  return seq_all({ctrl(c, flip(b)), ctrl(c, flip(a)), ctrl(a, ctrl(b, flip(c)))});
}

namespace {

// Inverse companion of maj: restores the first wire to the incoming carry,
// the third to the original addend bit, and leaves the sum on the second.
RevPtr uma(u32 a, u32 b, u32 c) {
  return seq_all({ctrl(a, ctrl(b, flip(c))), ctrl(c, flip(a)), ctrl(a, flip(b))});
}

// The forward carry ladder shared by rca and cmp: after it runs, wire x[i]
// holds the carry into position i+1 (so x[w-1] holds the carry out).
std::vector<RevPtr> carry_ladder(u32 carry, const std::vector<u32>& x,
                                 const std::vector<u32>& y) {
  std::vector<RevPtr> parts;
  parts.push_back(maj(carry, y[0], x[0]));
  for (size_t i = 1; i < x.size(); ++i) parts.push_back(maj(x[i - 1], y[i], x[i]));
  return parts;
}

}  // namespace

RevPtr rca(u32 carry, const std::vector<u32>& x, const std::vector<u32>& y) {
  require(!x.empty() && x.size() == y.size(), "rca: register sizes must match and be >= 1");
  std::vector<RevPtr> parts = carry_ladder(carry, x, y);
  for (size_t i = x.size(); i-- > 1;) parts.push_back(uma(x[i - 1], y[i], x[i]));
  parts.push_back(uma(carry, y[0], x[0]));
  return seq_all(parts);
}

RevPtr sub(u32 flag, const std::vector<u32>& x, const std::vector<u32>& y) {
  require(!x.empty() && x.size() == y.size(), "sub: register sizes must match and be >= 1");
  // y - x = ~(~y + x) in two's complement.
  std::vector<RevPtr> parts;
  for (u32 w : y) parts.push_back(flip(w));
  parts.push_back(rca(flag, x, y));
  for (u32 w : y) parts.push_back(flip(w));
  return seq_all(parts);
}

RevPtr cmp(u32 flag, u32 scratch, const std::vector<u32>& x, const std::vector<u32>& y) {
  require(!x.empty() && x.size() == y.size(), "cmp: register sizes must match and be >= 1");
  // Carry out of (~x + y) is [x < y]; the flag takes its negation, [x >= y].
  std::vector<RevPtr> parts;
  for (u32 w : x) parts.push_back(flip(w));
  std::vector<RevPtr> ladder = carry_ladder(scratch, x, y);
  for (const auto& p : ladder) parts.push_back(p);
  parts.push_back(flip(flag));
  parts.push_back(ctrl(x.back(), flip(flag)));
  for (size_t i = ladder.size(); i-- > 0;) parts.push_back(rcir::reverse(ladder[i]));
  for (u32 w : x) parts.push_back(flip(w));
  return seq_all(parts);
}

RevPtr swp(const std::vector<u32>& a, const std::vector<u32>& b) {
  require(a.size() == b.size(), "swp: register sizes must match");
  std::vector<RevPtr> parts;
  for (size_t i = 0; i < a.size(); ++i) parts.push_back(swap_bits(a[i], b[i]));
  return seq_all(parts);
}

RevPtr sft(const std::vector<u32>& reg) {
  require(reg.size() >= 2, "sft: register must have >= 2 wires");
  // Cyclic rotation toward the top wire; doubling for values below 2^(w-1).
  std::vector<RevPtr> parts;
  for (size_t i = reg.size(); i-- > 1;) parts.push_back(swap_bits(reg[i], reg[i - 1]));
  return seq_all(parts);
}

RevPtr mod_add(const ArithLayout& L) {
  require(L.width >= 1 && L.reg_m.size() == L.width && L.reg_x.size() == L.width &&
              L.reg_y.size() == L.width,
          "mod_add: layout registers must all have `width` wires");
  // y <- x + y; conditionally drop one modulus; then restore the comparison
  // flag from the invariant [x + y >= N] == [y_final < x].
  return seq_all({
      rca(L.flag0, L.reg_x, L.reg_y),
      cmp(L.flag1, L.flag0, L.reg_y, L.reg_m),
      ctrl(L.flag1, sub(L.flag0, L.reg_m, L.reg_y)),
      cmp(L.flag1, L.flag0, L.reg_y, L.reg_x),
      flip(L.flag1),
  });
}

RevPtr mod_sft(const ArithLayout& L) {
  require(L.width >= 2 && L.reg_m.size() == L.width && L.reg_x.size() == L.width,
          "mod_sft: layout registers must all have `width` wires");
  // x <- 2x, minus one modulus when the doubled value reaches it. The
  // comparison flag keeps [2x >= N]; callers park or uncompute it.
  return seq_all({
      sft(L.reg_x),
      cmp(L.flag1, L.flag0, L.reg_x, L.reg_m),
      ctrl(L.flag1, sub(L.flag0, L.reg_m, L.reg_x)),
  });
}

RevPtr mm(u64 a, u64 N, const ArithLayout& L) {
  const u32 w = L.width;
  require(w >= 2, "mm: layout width must be >= 2");
  require(N >= 2, "mm: requires N >= 2");
  require(N < (1ULL << (w - 1)), "mm: modulus must fit below 2^(width-1)");
  require(a >= 1 && a < N, "mm: requires 0 < a < N");
  const u32 n = w - 1;  // multiplier bit count
  require(L.parks.size() + 2 >= w, "mm: layout needs width-2 parking wires");

  std::vector<RevPtr> parts;
  // The modulus register is classical: load N, use it, unload it.
  std::vector<RevPtr> load;
  for (u32 j = 0; j < w; ++j)
    if ((N >> j) & 1) load.push_back(flip(L.reg_m[j]));
  RevPtr load_m = seq_all(load);
  parts.push_back(load_m);

  RevPtr madd = mod_add(L);
  RevPtr msft = mod_sft(L);
  RevPtr msft_rev = rcir::reverse(msft);

  // Shift-and-add: before iteration i the x register holds (2^i x) mod N.
  for (u32 i = 0; i < n; ++i) {
    if ((a >> i) & 1) parts.push_back(madd);
    if (i + 1 < n) {
      parts.push_back(msft);
      parts.push_back(swap_bits(L.flag1, L.parks[i]));
    }
  }
  // Replay the shifts backwards to restore x and clear the parked flags.
  for (u32 i = n - 1; i-- > 0;) {
    parts.push_back(swap_bits(L.flag1, L.parks[i]));
    parts.push_back(msft_rev);
  }
  parts.push_back(load_m);
  return seq_all(parts);
}

ArithLayout imm_layout(u32 n) {
  require(n >= 2, "imm_layout: work width must be >= 2");
  const u32 w = n + 1;
  ArithLayout L;
  L.width = w;
  for (u32 i = 0; i < w; ++i) L.reg_x.push_back(i);
  for (u32 i = 0; i < w; ++i) L.reg_y.push_back(n + 1 + i);
  for (u32 i = 0; i < w; ++i) L.reg_m.push_back(2 * n + 2 + i);
  L.flag0 = 3 * n + 3;
  L.flag1 = 3 * n + 4;
  for (u32 i = 0; i + 1 < n; ++i) L.parks.push_back(3 * n + 5 + i);
  L.total = n + (3 * n + 11);
  return L;
}

ImmCircuit imm(u64 a, u64 N) {
  require(N >= 2, "imm: requires N >= 2");
  require(a >= 1 && a < N, "imm: requires 0 < a < N");
  auto inv = numtheory::modinv(a, N);
  if (!inv) throw param_error("imm: requires gcd(a, N) = 1");

  u32 n = 0;
  while ((1ULL << (n + 1)) <= 2 * N) ++n;  // n = floor(log2(2N)), so N < 2^n
  ArithLayout L = imm_layout(n);

  // Multiply into the accumulator, swap it onto the work wires, then run the
  // inverse-multiplier block backwards to disentangle the accumulator.
  std::vector<u32> work(L.reg_x.begin(), L.reg_x.begin() + n);
  std::vector<u32> acc(L.reg_y.begin(), L.reg_y.begin() + n);
  RevPtr prog = seq_all({
      mm(a, N, L),
      swp(work, acc),
      rcir::reverse(mm(*inv, N, L)),
  });
  return {prog, n, L.total};
}

}  // namespace qshor::revarith
