#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "qshor/rcir.hpp"

namespace qshor::gateir {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

// Fixed gate set; every circuit this project builds stays inside it.
enum class GateKind : std::uint8_t {
  x, h, u1, u2, u3, cu1, swap, cswap, cx, ccx, c3x, c4x
};

// Compact gate record: wires are controls-first, target-last; params hold
// angles in radians (u1/cu1: lambda; u2: phi, lambda; u3: theta, phi, lambda).
// Inline storage keeps multi-hundred-million-gate sweeps allocation-free.
struct Gate {
  GateKind kind{};
  std::uint8_t nq = 0;
  std::uint8_t np = 0;
  std::array<u32, 5> q{};
  std::array<double, 3> p{};
};

using GateCircuit = std::vector<Gate>;

Gate g_x(u32 t);
Gate g_h(u32 t);
Gate g_u1(double lambda, u32 t);
Gate g_u2(double phi, double lambda, u32 t);
Gate g_u3(double theta, double phi, double lambda, u32 t);
Gate g_cu1(double lambda, u32 c, u32 t);
Gate g_swap(u32 a, u32 b);
Gate g_cswap(u32 c, u32 a, u32 b);
Gate g_cx(u32 c, u32 t);
Gate g_ccx(u32 c1, u32 c2, u32 t);
Gate g_c3x(u32 c1, u32 c2, u32 c3, u32 t);
Gate g_c4x(u32 c1, u32 c2, u32 c3, u32 c4, u32 t);

bool equal_gates(const GateCircuit& a, const GateCircuit& b);

// Lower a reversible program to gates: accumulated controls land on each flip
// or swap leaf. Up to four controls fit on a flip and one on a swap; anything
// deeper throws translate_error. pre: program is well typed.
GateCircuit translate_rcir(const rcir::RevPtr& r);
void translate_rcir_into(const rcir::RevPtr& r, GateCircuit& out);  // appends

// Fourier transform on k wires, little-endian: the unitary equals the DFT
// matrix  F[j][l] = omega^(j*l) / sqrt(2^k)  on basis index = bit value.
GateCircuit qft(u32 k);

// Reverse order, invert each gate (angle negation; self-inverse kinds unchanged).
GateCircuit invert(const GateCircuit& c);

// Add one control wire to every gate; throws translate_error when a gate
// cannot absorb another control within the gate set.
GateCircuit control(u32 wire, const GateCircuit& c);

// Shift every wire index by offset.
GateCircuit map_qubits(u32 offset, const GateCircuit& c);

// One single-wire gate kind applied to wires 0..k-1.
GateCircuit npar(u32 k, GateKind kind);

// controlled_powers(f, k, kmax): for i in 0..k-1, wire (kmax - 1 - i) controls
// the block f(i), in ascending i order.
GateCircuit controlled_powers(const std::function<GateCircuit(u32)>& f, u32 k, u32 kmax);

// Phase estimation with k readout wires over an n-wire target: Hadamard wall,
// controlled powers wired so readout wire q controls f(q) (the block family is
// index-reversed before handing it to controlled_powers, which matches the DFT
// convention of qft()), then the inverse transform on the readout register.
// f(i) must act on wires [0, n) and contain only controllable gate kinds.
GateCircuit qpe(u32 k, u32 n, const std::function<GateCircuit(u32)>& f);

struct ShorParams {
  u64 a = 0;
  u64 N = 0;
  u32 m = 0;      // phase register width = floor(log2(2 N^2))
  u32 n = 0;      // work register width = floor(log2(2 N))
  u32 s = 0;      // ancilla count = 3n + 11
  u32 total = 0;  // m + n + s
};

ShorParams shor_params(u64 a, u64 N);  // pre: 1 < a < N, gcd(a, N) == 1, N >= 3

// Full order-finding circuit: wires [0, m) phase register, [m, m+n) work
// register (prepared to |1> by an X on wire m), [m+n, total) ancillas.
struct ShorCircuit {
  GateCircuit gates;
  ShorParams params;
};

ShorCircuit shor_circuit(u64 a, u64 N);

u64 gate_count(const GateCircuit& c);

// Closed-form gate count of shor_circuit(a, N) derived from the constructors;
// cross-validated against real constructions in the test suite.
u64 shor_gate_count(u64 a, u64 N);

// Certified upper bound on the gate count of shor_circuit for any valid a:
//   (212 n^2 + 975 n + 1031) m + 4 m + m^2.
u64 gate_count_bound(u32 n, u32 m);

}  // namespace qshor::gateir
