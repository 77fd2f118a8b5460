#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qshor/rng.hpp"

namespace qshor::numtheory {

using u64 = std::uint64_t;

u64 gcd(u64 a, u64 b);
u64 mulmod(u64 a, u64 b, u64 m);          // (a*b) % m without overflow, m >= 1
u64 modexp(u64 base, u64 exp, u64 mod);   // mod >= 1

// Multiplicative inverse of a modulo n, if gcd(a, n) == 1.
std::optional<u64> modinv(u64 a, u64 n);

// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(u64 n);

// Smallest r >= 1 with a^r == 1 (mod n); pre: n >= 2, gcd(a, n) == 1.
u64 order_brute(u64 a, u64 n);

u64 euler_phi(u64 n);  // pre: n >= 1
int two_adic(u64 n);   // exponent of 2 in n; pre: n >= 1

// Denominator of the k-th continued-fraction convergent of a/b (0-indexed; the
// value saturates at the final convergent once the expansion terminates).
// pre: b >= 1, a <= b.
u64 cfe(u64 k, u64 a, u64 b);

// All convergent denominators of a/b in expansion order (deduplicated tail).
// Matches the sequence cfe(0..), used by hot loops to avoid re-expansion.
std::vector<u64> cfe_denominators(u64 a, u64 b);

// Classical post-processing of one phase-register readout: scan the convergents
// of out / 2^m and return the first denominator q with a^q == 1 (mod N).
// pre: 1 < a < N, gcd(a, N) == 1, out < 2^m.
std::optional<u64> of_post(u64 a, u64 N, u64 out, u64 m);

// Same scan given a known order r (a^q == 1 iff r | q); used by analysis sweeps.
std::optional<u64> of_post_with_order(u64 r, u64 out, u64 m);

// gcd(a^floor(r/2) +- 1, N) candidate split; returns a nontrivial factor if found.
// pre: N >= 2, gcd(a, N) == 1.
std::optional<u64> factor_from_order(u64 a, u64 N, u64 r);

enum class InputClass { prime, even, prime_power, composite_odd };

struct Classification {
  InputClass kind;
  u64 p = 0;  // prime_power: the base
  u64 k = 0;  // prime_power: the exponent (>= 2)
};

// Classify N before any quantum work. Primality is tested first so N = 2 is
// reported as prime rather than as an even number with a "factor".
// pre: N >= 2.
Classification preprocess(u64 N);

// Source of order-finding measurement outcomes. Implementations: exact sparse
// simulation of the constructed circuit, and the closed-form distribution.
struct OrderOutcomeSource {
  virtual ~OrderOutcomeSource() = default;
  // One readout of the 2^m-outcome phase register for multiplier a modulo N.
  virtual u64 draw(u64 a, u64 N, u64 m, Rng& rng) = 0;
};

struct Trial {
  enum class Path { unit_a, gcd_hit, quantum };
  u64 a = 0;
  Path path = Path::unit_a;
  u64 outcome = 0;               // phase readout (quantum path only)
  std::optional<u64> order;      // post-processed order candidate
  std::optional<u64> factor;     // nontrivial factor, if this trial found one
};

// One factoring trial: sample a in [1, N), take the gcd shortcut when it fires,
// otherwise run order finding through the backend and split on the result.
// pre: N odd composite, not a prime power.
Trial shor_body(u64 N, Rng& rng, OrderOutcomeSource& backend);

struct FactoringResult {
  Classification classification;
  std::optional<u64> factor;   // absent for prime N or when all trials miss
  std::vector<Trial> trials;   // executed quantum-path trials (composite_odd only)
};

// Full factoring entry point; preprocessing short-circuits even/prime/prime-power
// inputs, then up to niter independent trials run with per-trial seed streams.
FactoringResult end_to_end(u64 N, u64 niter, u64 seed, OrderOutcomeSource& backend);

}  // namespace qshor::numtheory
