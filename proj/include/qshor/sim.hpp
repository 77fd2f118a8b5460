#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <unordered_map>

#include "qshor/gateir.hpp"
#include "qshor/rng.hpp"

namespace qshor::sim {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using amp = std::complex<double>;

// Sparse statevector: basis index -> amplitude. Basis indices are little-endian
// over wires (bit q of the index is wire q), matching the rest of the project.
struct SparseState {
  u32 num_qubits = 0;
  std::unordered_map<u64, amp> amps;
};

struct SimOptions {
  double prune_threshold = 1e-12;    // drop amplitudes below this, then renormalize
  u64 support_cap = 1ull << 26;      // resource_error beyond this many basis states
};

SparseState basis_state(u32 num_qubits, u64 value);

// Normalized order-finding eigenstate for eigenvalue index j:
//   (1/sqrt(r)) * sum_l exp(-2 pi i j l / r) |a^l mod N>,  r = order of a mod N.
// pre: gcd(a, N) == 1, N < 2^num_qubits.
SparseState make_eigenstate(u64 a, u64 N, u64 j, u32 num_qubits);

void apply_gate(SparseState& s, const gateir::Gate& g, const SimOptions& opts = {});

SparseState run_circuit(SparseState initial, const gateir::GateCircuit& c,
                        const SimOptions& opts = {});

// Outcome probabilities of measuring wires [offset, offset + count), read as a
// little-endian integer. Ordered map so iteration order is deterministic.
using Distribution = std::map<u64, double>;

Distribution output_distribution(const SparseState& s, u32 offset, u32 count);

// Multinomial sampling by inverse CDF over the ordered outcomes; byte-exact
// reproducible from the generator state.
std::map<u64, u64> sample(const Distribution& dist, u64 shots, Rng& rng);

double total_variation(const Distribution& p, const Distribution& q);

}  // namespace qshor::sim
