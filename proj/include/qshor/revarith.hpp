#pragma once

#include <cstdint>
#include <vector>

#include "qshor/rcir.hpp"

namespace qshor::revarith {

using rcir::RevPtr;
using u32 = std::uint32_t;
using u64 = std::uint64_t;

// Wire assignment for the modular-arithmetic blocks. All registers are
// little-endian wire lists of size `width`; the flag wires are single bits.
// ModAdd/ModSft expect the modulus value loaded in reg_m and both flags clear.
struct ArithLayout {
  u32 width = 0;                // bits per register (w)
  u32 flag0 = 0;                // ripple carry-in / subtract helper flag
  u32 flag1 = 0;                // comparison result flag
  std::vector<u32> reg_m;       // modulus register
  std::vector<u32> reg_x;       // shifted operand (z) register
  std::vector<u32> reg_y;       // accumulator register
  std::vector<u32> parks;       // parking wires for shift flags (mm only)
  u32 total = 0;                // total wires spanned (for building registers)
};

// Convenience layout [flag0][flag1][m]_w[x]_w[y]_w used by tests and docs.
ArithLayout basic_layout(u32 width);

// In-place majority step: (a, b, c) -> (a^c, b^c, MAJ(a, b, c)).
RevPtr maj(u32 a, u32 b, u32 c);

// Ripple-carry add: y <- (x + y + carry) mod 2^w; x and carry are restored.
// pre: wires distinct, x.size() == y.size() >= 1.
RevPtr rca(u32 carry, const std::vector<u32>& x, const std::vector<u32>& y);

// Two's-complement subtract: y <- (y - x) mod 2^w; flag must be 0 and is restored.
RevPtr sub(u32 flag, const std::vector<u32>& x, const std::vector<u32>& y);

// Comparison: flag ^= [x >= y] as w-bit unsigned values; scratch must be 0 and
// is restored (the unused arithmetic flag doubles as the ripple scratch).
RevPtr cmp(u32 flag, u32 scratch, const std::vector<u32>& x, const std::vector<u32>& y);

// Pairwise register swap. pre: equal sizes, disjoint wires.
RevPtr swp(const std::vector<u32>& a, const std::vector<u32>& b);

// Left shift (doubling) for values below 2^(w-1): b_{w-1}..b_1 <- b_{w-2}..b_0, b_0 <- b_{w-1}.
RevPtr sft(const std::vector<u32>& reg);

// Modular accumulate: with reg_m holding N, both flags 0, x < N, y < N:
//   y <- (x + y) mod N, everything else restored.
// pre: N < 2^(w-1).
RevPtr mod_add(const ArithLayout& L);

// Modular doubling of reg_x: x <- 2x mod N. flag1 picks up [2x >= N] and is
// left dirty (callers park or uncompute it); flag0 is restored.
// pre: x < N < 2^(w-1), flags 0.
RevPtr mod_sft(const ArithLayout& L);

// Multiply-accumulate: y <- (a * x) mod N with x and all ancillas restored.
// Shift flags are parked in L.parks (needs width - 2 wires) and cleaned by
// replaying the shifts backwards. pre: 0 < a < N, x < N, N >= 2, N < 2^(w-1).
RevPtr mm(u64 a, u64 N, const ArithLayout& L);

// In-place modular multiplication on n = floor(log2(2N)) work wires [0, n):
//   |x>|0...0> -> |(a * x) mod N>|0...0>   for all x < N.
// Uses s = 3n + 11 ancilla wires above the work register.
// pre: 0 < a < N, gcd(a, N) == 1, N >= 2.
struct ImmCircuit {
  RevPtr prog;
  u32 n = 0;      // work register width
  u32 width = 0;  // total wires = n + (3n + 11)
};

ImmCircuit imm(u64 a, u64 N);

// The canonical wire map imm() builds over n + (3n + 11) wires.
ArithLayout imm_layout(u32 n);

}  // namespace qshor::revarith
