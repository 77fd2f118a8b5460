#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "qshor/numtheory.hpp"
#include "qshor/sim.hpp"

namespace qshor::analysis {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

// Probability that the m-wire phase readout equals u when the multiplier has
// order r: closed form of (1/2^2m) * sum_k |sum_{v = k mod r} e^(2 pi i u v / 2^m)|^2,
// evaluated in O(1) via the two geometric-series lengths ceil/floor(2^m / r).
double qpe_outcome_prob(u64 r, u32 m, u64 u);

// Full closed-form readout distribution for multiplier a modulo N.
// pre: gcd(a, N) == 1, 1 < a < N; size of the result is 2^m entries max.
sim::Distribution qpe_distribution_analytic(u64 a, u64 N, u32 m);

// Probability that one readout post-processes to exactly the order of a mod N,
// summed over all 2^m outcomes. Exact; cost O(2^m * m). m defaults to the
// pipeline precision floor(log2(2 N^2)) when omitted.
double of_success_prob(u64 a, u64 N);
double of_success_prob_at(u64 a, u64 N, u32 m);

// Certified lower bound on of_success_prob computed from windows around the
// peaks nearest each fraction j/r with gcd(j, r) = 1; every peak provably
// recovers r, so truncation only loses mass. Cost O(phi(r) * window * m).
double of_success_lower_bound(u64 a, u64 N, u32 window = 8);

// Mean success probability of the full quantum pipeline (readout -> order
// candidate -> gcd split) over the multipliers the pipeline can draw, i.e.
// a in (1, N) with gcd(a, N) = 1. Exact; cost O(2^m) per distinct order.
double factor_success_prob(u64 N);

// Windowed certified lower bound of the same mean, for large N.
double factor_success_lower_bound(u64 N, u32 window = 8);

// beta = 4 e^-2 / pi^2, the constant in the certified success bounds.
double beta_constant();

// Certified per-readout success bounds and the failure bound after t trials:
//   of:      beta / floor(log2 N)^4
//   factor:  beta / (2 floor(log2 N)^4)
//   failure: (1 - factor_bound)^t
double certified_of_bound(u64 N);
double certified_factor_bound(u64 N);
double failure_bound(u64 N, u64 t);

struct BoundReport {
  std::string name;
  u64 cases_checked = 0;
  bool satisfied = false;
  double empirical = 0.0;       // worst observed value (meaning depends on sweep)
  double bound = 0.0;           // the bound it is measured against
  std::string counterexample;   // first violating instance, empty when satisfied
};

struct SweepLimits {
  u64 prime_power_limit = 2048;  // euler criterion / QR counting / two-to-one
  u64 reduction_limit = 1000;    // order -> factor reduction over odd composites
  u64 totient_limit = 100000;    // phi(n)/n lower bound
  u64 legendre_limit = 512;      // close-fraction convergent recovery
};

// Brute-force verification of every number-theoretic fact the certified bounds
// rest on. Every report must come back satisfied; violations carry the first
// counterexample found.
std::vector<BoundReport> verify_lemma_sweeps(const SweepLimits& limits = {});

struct StatsRow {
  u32 bits = 0;              // input size floor(log2 N) + 1
  u64 of_pairs = 0;          // (a, N) pairs entering the order-finding stats
  double of_min = 0, of_mean = 0, of_max = 0;
  double of_bound_worst = 0;  // largest certified bound among the N in the row
  bool of_all_above_bound = false;
  u64 factor_inputs = 0;     // odd composite non-prime-power N of this size
  double factor_min = 0, factor_mean = 0, factor_max = 0;
  double factor_bound_worst = 0;
  bool factor_all_above_bound = false;
  u64 gate_pairs = 0;
  u64 gate_min = 0, gate_max = 0;
  double gate_mean = 0;
  u64 gate_bound_worst = 0;  // largest certified gate bound in the row
  bool gate_all_within_bound = false;
  bool exact = false;        // true when success columns are exact sums
};

// Success and cost statistics per input size. Sizes where 2^m fits the exact
// sweep (m <= 16) are exact; larger sizes use the certified lower bounds and
// are flagged exact = false.
std::vector<StatsRow> gather_stats(u32 min_bits, u32 max_bits);

// CSV with one row per input size (documented in the README).
void emit_stats(std::ostream& out, u32 min_bits, u32 max_bits);

// Closed-form readout distribution as an outcome source.
class AnalyticOutcomeSource : public numtheory::OrderOutcomeSource {
 public:
  u64 draw(u64 a, u64 N, u64 m, Rng& rng) override;

 private:
  std::map<std::pair<u64, u64>, std::vector<double>> cdf_cache_;
};

// Exact sparse simulation of the constructed circuit as an outcome source.
// Caches the readout distribution per (a, N); respects the simulator caps.
class SimulateOutcomeSource : public numtheory::OrderOutcomeSource {
 public:
  explicit SimulateOutcomeSource(sim::SimOptions opts = {}) : opts_(opts) {}
  u64 draw(u64 a, u64 N, u64 m, Rng& rng) override;

 private:
  sim::SimOptions opts_;
  std::map<std::pair<u64, u64>, std::vector<std::pair<u64, double>>> cdf_cache_;
};

}  // namespace qshor::analysis
