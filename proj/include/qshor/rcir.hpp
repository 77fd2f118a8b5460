#pragma once

#include <cstdint>
#include <memory>
#include <vector>

namespace qshor::rcir {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

// Reversible program over a register of bits, little-endian throughout
// (bit 0 of a register is the least significant). Programs are immutable
// trees with structural sharing, so large constructions stay cheap to
// compose and reverse.
struct Rev;
using RevPtr = std::shared_ptr<const Rev>;

struct Rev {
  enum class Kind { skip, flip, ctrl, swap_bits, seq };
  Kind kind;
  u32 a = 0;       // flip: target; swap_bits: first wire; ctrl: control wire
  u32 b = 0;       // swap_bits: second wire
  RevPtr body;     // ctrl
  RevPtr first;    // seq
  RevPtr second;   // seq
};

RevPtr skip();
RevPtr flip(u32 target);                 // NOT on one wire
RevPtr ctrl(u32 wire, RevPtr body);      // run body iff wire is set
RevPtr swap_bits(u32 m, u32 n);
RevPtr seq(RevPtr a, RevPtr b);

// Balanced sequencing of many parts; keeps tree depth logarithmic so the
// recursive passes below never blow the stack on long gate chains.
RevPtr seq_all(const std::vector<RevPtr>& parts);

// Mutable register state for evaluation. bits[i] in {0, 1}.
using BitRegister = std::vector<std::uint8_t>;

BitRegister register_of_value(u32 width, u64 value);
u64 value_of_register(const BitRegister& reg);  // pre: width <= 64

// Run the program in place. pre: well_typed(r, reg.size()).
void eval_rcir(const RevPtr& r, BitRegister& reg);

// Structural reverse: sequences flip order, controls reverse their body,
// primitives are self-inverse. Shared subtrees are reversed once.
RevPtr reverse(const RevPtr& r);

// Wires the program may write to.
std::vector<u32> targets(const RevPtr& r);

// True iff every wire index is < width, swaps are between distinct wires,
// and no control wire is also a target inside its own body.
bool well_typed(const RevPtr& r, u32 width);

// Number of primitive operations (flips and swaps, at any control depth).
u64 primitive_count(const RevPtr& r);

// Structural equality (same shape, wires, and nesting).
bool equal_rcir(const RevPtr& a, const RevPtr& b);

}  // namespace qshor::rcir
