#include "qshor/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "qshor/errors.hpp"
#include "qshor/gateir.hpp"

namespace qshor::analysis {

namespace nt = qshor::numtheory;

namespace {

u32 floor_log2(u64 n) { return static_cast<u32>(std::bit_width(n) - 1); }

// Readout precision used by the full pipeline for modulus N.
u32 pipeline_m(u64 N) {
  if (N < 2) throw param_error("pipeline_m: modulus must be at least 2");
  return floor_log2(2 * N * N);
}

// Probability mass of each post-processed order candidate, keyed by candidate.
// Readouts whose convergent scan comes back empty carry no entry.
struct MassMap {
  std::map<u64, double> by_result;

  double at(u64 q) const {
    auto it = by_result.find(q);
    return it == by_result.end() ? 0.0 : it->second;
  }
};

MassMap result_mass_exact(u64 r, u32 m) {
  const u64 M = 1ULL << m;
  MassMap mass;
  for (u64 u = 0; u < M; ++u) {
    const double p = qpe_outcome_prob(r, m, u);
    if (p <= 0.0) continue;
    if (auto q = nt::of_post_with_order(r, u, m)) mass.by_result[*q] += p;
  }
  return mass;
}

// Lower bound on the same masses from windows around the readout peaks
// round(2^m j / r) for gcd(j, r) = 1. Dropping the remaining outcomes only
// discards mass, so every entry is a certified lower bound.
MassMap result_mass_windowed(u64 r, u32 m, u32 window) {
  const u64 M = 1ULL << m;
  if (r != 0 && M > (~0ULL) / r)
    throw param_error("result_mass_windowed: r * 2^m overflows");
  std::set<u64> candidates;
  for (u64 j = 0; j < r; ++j) {
    if (nt::gcd(j, r) != 1) continue;
    const u64 center = (j * M + r / 2) / r;
    for (std::int64_t d = -static_cast<std::int64_t>(window);
         d <= static_cast<std::int64_t>(window); ++d) {
      const u64 u = static_cast<u64>(
          (static_cast<std::int64_t>(center % M) + static_cast<std::int64_t>(M) + d) %
          static_cast<std::int64_t>(M));
      candidates.insert(u);
    }
  }
  MassMap mass;
  for (u64 u : candidates) {
    const double p = qpe_outcome_prob(r, m, u);
    if (p <= 0.0) continue;
    if (auto q = nt::of_post_with_order(r, u, m)) mass.by_result[*q] += p;
  }
  return mass;
}

double success_given_mass(u64 a, u64 N, const MassMap& mass) {
  double p = 0.0;
  for (const auto& [q, w] : mass.by_result)
    if (nt::factor_from_order(a, N, q)) p += w;
  return p;
}

void check_multiplier(u64 a, u64 N) {
  if (N < 3 || a <= 1 || a >= N || nt::gcd(a, N) != 1)
    throw param_error("multiplier must satisfy 1 < a < N and gcd(a, N) = 1");
}

}  // namespace

double qpe_outcome_prob(u64 r, u32 m, u64 u) {
  if (r == 0) throw param_error("qpe_outcome_prob: order must be positive");
  if (m == 0 || m > 60) throw param_error("qpe_outcome_prob: need 1 <= m <= 60");
  const u64 M = 1ULL << m;
  if (u >= M) throw param_error("qpe_outcome_prob: readout exceeds the register");

  // Residue classes mod r split into c_hi of length T_hi and c_lo of length
  // T_lo; each contributes a geometric series with unit step angle 2 pi g / M.
  const u64 g = nt::mulmod(u, r % M, M);
  const u64 c_hi = M % r;
  const u64 T_hi = M / r + 1;
  const u64 c_lo = r - c_hi;
  const u64 T_lo = M / r;
  const double M2 = std::ldexp(1.0, 2 * static_cast<int>(m));

  if (g == 0) {
    const double hi = static_cast<double>(c_hi) * static_cast<double>(T_hi) *
                      static_cast<double>(T_hi);
    const double lo = static_cast<double>(c_lo) * static_cast<double>(T_lo) *
                      static_cast<double>(T_lo);
    return (hi + lo) / M2;
  }

  // |sum_{t<T} e^(2 pi i g t / M)|^2 = sin^2(pi g T / M) / sin^2(pi g / M).
  // The angle numerators are reduced mod 2M as integers so the sine arguments
  // stay small and exact.
  const double denom_s = std::sin(M_PI * static_cast<double>(g) / static_cast<double>(M));
  const double denom = denom_s * denom_s;
  auto series = [&](u64 T) {
    const u64 x = nt::mulmod(g, T % (2 * M), 2 * M);
    const double s = std::sin(M_PI * static_cast<double>(x) / static_cast<double>(M));
    return s * s / denom;
  };
  return (static_cast<double>(c_hi) * series(T_hi) +
          static_cast<double>(c_lo) * series(T_lo)) /
         M2;
}

sim::Distribution qpe_distribution_analytic(u64 a, u64 N, u32 m) {
  check_multiplier(a, N);
  const u64 r = nt::order_brute(a, N);
  const u64 M = 1ULL << m;
  sim::Distribution dist;
  for (u64 u = 0; u < M; ++u) {
    const double p = qpe_outcome_prob(r, m, u);
    if (p > 0.0) dist[u] = p;
  }
  return dist;
}

double of_success_prob_at(u64 a, u64 N, u32 m) {
  if (N < 3 || a <= 1 || a >= N || nt::gcd(a, N) != 1)
    throw param_error("of_success_prob_at: need 1 < a < N with gcd(a, N) = 1");
  const u64 r = nt::order_brute(a, N);
  return result_mass_exact(r, m).at(r);
}

double of_success_prob(u64 a, u64 N) { return of_success_prob_at(a, N, pipeline_m(N)); }

double of_success_lower_bound(u64 a, u64 N, u32 window) {
  if (N < 3 || a <= 1 || a >= N || nt::gcd(a, N) != 1)
    throw param_error("of_success_lower_bound: need 1 < a < N with gcd(a, N) = 1");
  const u64 r = nt::order_brute(a, N);
  return result_mass_windowed(r, pipeline_m(N), window).at(r);
}

namespace {

double factor_success_mean(u64 N, bool exact, u32 window) {
  if (N < 4) throw param_error("factor success mean needs N >= 4");
  const u32 m = pipeline_m(N);
  std::map<u64, std::vector<u64>> by_order;
  for (u64 a = 2; a < N; ++a)
    if (nt::gcd(a, N) == 1) by_order[nt::order_brute(a, N)].push_back(a);
  if (by_order.empty())
    throw param_error("factor success mean: no multipliers to average over");

  double total = 0.0;
  u64 count = 0;
  for (const auto& [r, as] : by_order) {
    const MassMap mass =
        exact ? result_mass_exact(r, m) : result_mass_windowed(r, m, window);
    for (u64 a : as) {
      total += success_given_mass(a, N, mass);
      ++count;
    }
  }
  return total / static_cast<double>(count);
}

}  // namespace

double factor_success_prob(u64 N) { return factor_success_mean(N, true, 0); }

double factor_success_lower_bound(u64 N, u32 window) {
  return factor_success_mean(N, false, window);
}

double beta_constant() { return 4.0 * std::exp(-2.0) / (M_PI * M_PI); }

double certified_of_bound(u64 N) {
  if (N < 2) throw param_error("certified_of_bound: modulus must be at least 2");
  const double l = static_cast<double>(floor_log2(N));
  return beta_constant() / (l * l * l * l);
}

double certified_factor_bound(u64 N) { return certified_of_bound(N) / 2.0; }

double failure_bound(u64 N, u64 t) {
  return std::pow(1.0 - certified_factor_bound(N), static_cast<double>(t));
}

// ---------------------------------------------------------------------------
// Brute-force sweeps behind the certified bounds.
// ---------------------------------------------------------------------------

namespace {

std::vector<u64> primes_up_to(u64 limit) {
  std::vector<char> sieve(limit + 1, 1);
  std::vector<u64> primes;
  for (u64 p = 2; p <= limit; ++p) {
    if (!sieve[p]) continue;
    primes.push_back(p);
    for (u64 q = p * p; q <= limit; q += p) sieve[q] = 0;
  }
  return primes;
}

struct PrimePower {
  u64 value, base;
  u64 phi;
};

std::vector<PrimePower> odd_prime_powers_up_to(u64 limit) {
  std::vector<PrimePower> out;
  for (u64 p : primes_up_to(limit)) {
    if (p == 2) continue;
    u64 phi = p - 1;
    for (u64 v = p; v <= limit; v *= p, phi *= p) {
      out.push_back({v, p, phi});
      if (v > limit / p) break;
    }
  }
  return out;
}

std::vector<std::pair<u64, u64>> factorize(u64 n) {
  std::vector<std::pair<u64, u64>> fs;
  for (u64 p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    u64 e = 0;
    while (n % p == 0) n /= p, ++e;
    fs.emplace_back(p, e);
  }
  if (n > 1) fs.emplace_back(n, 1);
  return fs;
}

template <typename F>
BoundReport identity_sweep(std::string name, F&& body) {
  BoundReport rep;
  rep.name = std::move(name);
  rep.bound = 1.0;
  u64 violations = 0;
  body(rep, violations);
  rep.empirical = rep.cases_checked == 0
                      ? 1.0
                      : 1.0 - static_cast<double>(violations) /
                                  static_cast<double>(rep.cases_checked);
  rep.satisfied = violations == 0;
  return rep;
}

void note_violation(BoundReport& rep, u64& violations, const std::string& what) {
  ++violations;
  if (rep.counterexample.empty()) rep.counterexample = what;
}

}  // namespace

std::vector<BoundReport> verify_lemma_sweeps(const SweepLimits& limits) {
  std::vector<BoundReport> reports;
  const auto pps = odd_prime_powers_up_to(limits.prime_power_limit);

  // a^(phi/2) is a square root of 1, and it is +1 exactly on the squares.
  reports.push_back(identity_sweep("euler_criterion", [&](BoundReport& rep, u64& bad) {
    for (const auto& pp : pps) {
      std::vector<char> is_square(pp.value, 0);
      for (u64 a = 1; a < pp.value; ++a)
        if (nt::gcd(a, pp.value) == 1) is_square[nt::mulmod(a, a, pp.value)] = 1;
      for (u64 a = 1; a < pp.value; ++a) {
        if (nt::gcd(a, pp.value) != 1) continue;
        ++rep.cases_checked;
        const u64 e = nt::modexp(a, pp.phi / 2, pp.value);
        const bool ok =
            (e == 1 || e == pp.value - 1) && ((e == 1) == (is_square[a] != 0));
        if (!ok) {
          std::ostringstream os;
          os << "modulus " << pp.value << " base " << a << " power " << e;
          note_violation(rep, bad, os.str());
        }
      }
    }
  }));

  // Exactly half the units are squares.
  reports.push_back(identity_sweep("qr_count", [&](BoundReport& rep, u64& bad) {
    for (const auto& pp : pps) {
      std::unordered_set<u64> squares;
      for (u64 a = 1; a < pp.value; ++a)
        if (nt::gcd(a, pp.value) == 1) squares.insert(nt::mulmod(a, a, pp.value));
      ++rep.cases_checked;
      if (squares.size() * 2 != pp.phi) {
        std::ostringstream os;
        os << "modulus " << pp.value << " has " << squares.size() << " squares, phi = "
           << pp.phi;
        note_violation(rep, bad, os.str());
      }
    }
  }));

  // Squaring on the units is exactly two-to-one.
  reports.push_back(identity_sweep("two_to_one", [&](BoundReport& rep, u64& bad) {
    for (const auto& pp : pps) {
      std::unordered_map<u64, u64> roots;
      for (u64 a = 1; a < pp.value; ++a)
        if (nt::gcd(a, pp.value) == 1) ++roots[nt::mulmod(a, a, pp.value)];
      for (const auto& [sq, cnt] : roots) {
        ++rep.cases_checked;
        if (cnt != 2) {
          std::ostringstream os;
          os << "modulus " << pp.value << " square " << sq << " has " << cnt
             << " roots";
          note_violation(rep, bad, os.str());
        }
      }
    }
  }));

  // Over odd composites with at least two prime-power parts: a splits N through
  // its order exactly when the two-adic valuations of the component orders
  // disagree, which is also exactly "order even and a^(r/2) != -1"; and every
  // such a really does hand gcd a nontrivial factor.
  {
    BoundReport d_red;
    d_red.name = "d_reduction";
    d_red.bound = 1.0;
    BoundReport d_neq;
    d_neq.name = "d_neq";
    d_neq.bound = 0.5;
    d_neq.empirical = 1.0;
    d_neq.satisfied = true;
    u64 red_bad = 0;
    for (u64 N = 9; N <= limits.reduction_limit; N += 2) {
      const auto cls = nt::preprocess(N);
      if (cls.kind != nt::InputClass::composite_odd) continue;
      const auto parts = factorize(N);
      u64 good = 0, units = 0;
      for (u64 a = 1; a < N; ++a) {
        if (nt::gcd(a, N) != 1) continue;
        ++units;
        const u64 r = nt::order_brute(a, N);
        const bool half_nontrivial =
            (r % 2 == 0) && nt::modexp(a, r / 2, N) != N - 1;
        int d0 = -1;
        bool spread = false;
        for (const auto& [p, e] : parts) {
          u64 q = 1;
          for (u64 i = 0; i < e; ++i) q *= p;
          const int d = nt::two_adic(nt::order_brute(a % q, q));
          if (d0 < 0) d0 = d;
          spread = spread || (d != d0);
        }
        const bool splits = half_nontrivial && nt::factor_from_order(a, N, r).has_value();
        ++d_red.cases_checked;
        if (half_nontrivial != spread || (half_nontrivial && !splits)) {
          std::ostringstream os;
          os << "N " << N << " base " << a << " order " << r;
          note_violation(d_red, red_bad, os.str());
        }
        if (half_nontrivial) ++good;
      }
      ++d_neq.cases_checked;
      const double ratio = static_cast<double>(good) / static_cast<double>(units);
      if (ratio < d_neq.empirical) d_neq.empirical = ratio;
      if (ratio < d_neq.bound && d_neq.counterexample.empty()) {
        std::ostringstream os;
        os << "N " << N << " has " << good << " splitting bases of " << units;
        d_neq.counterexample = os.str();
        d_neq.satisfied = false;
      }
    }
    d_red.empirical = d_red.cases_checked == 0
                          ? 1.0
                          : 1.0 - static_cast<double>(red_bad) /
                                      static_cast<double>(d_red.cases_checked);
    d_red.satisfied = red_bad == 0;
    d_neq.satisfied = d_neq.counterexample.empty();
    reports.push_back(std::move(d_red));
    reports.push_back(std::move(d_neq));
  }

  // phi(n)/n >= e^-2 / floor(log2 n)^4 for every n >= 2.
  {
    BoundReport rep;
    rep.name = "totient_lb";
    rep.bound = std::exp(-2.0);
    rep.empirical = 1e300;
    const u64 limit = limits.totient_limit;
    std::vector<u64> phi(limit + 1);
    for (u64 i = 0; i <= limit; ++i) phi[i] = i;
    for (u64 i = 2; i <= limit; ++i) {
      if (phi[i] != i) continue;  // i is prime
      for (u64 j = i; j <= limit; j += i) phi[j] -= phi[j] / i;
    }
    for (u64 n = 2; n <= limit; ++n) {
      ++rep.cases_checked;
      const double l = static_cast<double>(floor_log2(n));
      const double scaled =
          static_cast<double>(phi[n]) / static_cast<double>(n) * l * l * l * l;
      if (scaled < rep.empirical) rep.empirical = scaled;
      if (scaled < rep.bound && rep.counterexample.empty()) {
        std::ostringstream os;
        os << "n " << n << " scaled ratio " << scaled;
        rep.counterexample = os.str();
      }
    }
    rep.satisfied = rep.counterexample.empty();
    reports.push_back(std::move(rep));
  }

  // Any reduced p/q with 2q|aq - pb| < b shows up among the convergent
  // denominators of a/b.
  reports.push_back(identity_sweep("legendre_cfe", [&](BoundReport& rep, u64& bad) {
    for (u64 b = 2; b <= limits.legendre_limit; ++b) {
      for (u64 a = 0; a < b; ++a) {
        const auto dens = nt::cfe_denominators(a, b);
        const std::unordered_set<u64> den_set(dens.begin(), dens.end());
        for (u64 q = 1; q < b; ++q) {
          const u64 aq = a * q;
          for (u64 p = aq / b; p <= aq / b + 1; ++p) {
            if (p < 1 || nt::gcd(p, q) != 1) continue;
            const u64 diff = aq > p * b ? aq - p * b : p * b - aq;
            if (2 * q * diff >= b) continue;
            ++rep.cases_checked;
            if (!den_set.count(q)) {
              std::ostringstream os;
              os << "a/b " << a << "/" << b << " p/q " << p << "/" << q;
              note_violation(rep, bad, os.str());
            }
          }
        }
      }
    }
  }));

  return reports;
}

// ---------------------------------------------------------------------------
// Per-size statistics.
// ---------------------------------------------------------------------------

std::vector<StatsRow> gather_stats(u32 min_bits, u32 max_bits) {
  if (min_bits < 2 || max_bits < min_bits || max_bits > 32)
    throw param_error("gather_stats: need 2 <= min_bits <= max_bits <= 32");

  // Post-processing mass depends only on (order, precision); share it globally.
  std::map<std::pair<u64, u32>, MassMap> mass_cache;
  const u32 window = 8;

  std::vector<StatsRow> rows;
  for (u32 bits = min_bits; bits <= max_bits; ++bits) {
    StatsRow row;
    row.bits = bits;
    row.exact = bits <= 8;
    row.of_min = 1e300;
    row.factor_min = 1e300;
    row.gate_min = ~0ULL;
    row.of_all_above_bound = true;
    row.factor_all_above_bound = true;
    row.gate_all_within_bound = true;
    double of_sum = 0, factor_sum = 0, gate_sum = 0;

    const u64 lo = 1ULL << (bits - 1);
    const u64 hi = (1ULL << bits) - 1;
    for (u64 N = std::max<u64>(lo, 3); N <= hi; ++N) {
      const u32 m = pipeline_m(N);
      const auto mass_for = [&](u64 r) -> const MassMap& {
        auto [it, fresh] = mass_cache.try_emplace({r, m});
        if (fresh)
          it->second = row.exact ? result_mass_exact(r, m)
                                 : result_mass_windowed(r, m, window);
        return it->second;
      };

      const auto cls = nt::preprocess(N);
      const bool factor_input = cls.kind == nt::InputClass::composite_odd;
      double factor_total = 0;
      u64 factor_count = 0;

      for (u64 a = 2; a < N; ++a) {
        if (nt::gcd(a, N) != 1) continue;
        const u64 r = nt::order_brute(a, N);
        const MassMap& mass = mass_for(r);

        const double of = mass.at(r);
        ++row.of_pairs;
        of_sum += of;
        row.of_min = std::min(row.of_min, of);
        row.of_max = std::max(row.of_max, of);
        if (of < certified_of_bound(N)) row.of_all_above_bound = false;

        const auto params = gateir::shor_params(a, N);
        const u64 gates = gateir::shor_gate_count(a, N);
        const u64 bound = gateir::gate_count_bound(params.n, params.m);
        ++row.gate_pairs;
        gate_sum += static_cast<double>(gates);
        row.gate_min = std::min(row.gate_min, gates);
        row.gate_max = std::max(row.gate_max, gates);
        row.gate_bound_worst = std::max(row.gate_bound_worst, bound);
        if (gates > bound) row.gate_all_within_bound = false;

        if (factor_input) {
          factor_total += success_given_mass(a, N, mass);
          ++factor_count;
        }
      }

      if (factor_input && factor_count > 0) {
        const double mean = factor_total / static_cast<double>(factor_count);
        ++row.factor_inputs;
        factor_sum += mean;
        row.factor_min = std::min(row.factor_min, mean);
        row.factor_max = std::max(row.factor_max, mean);
        if (mean < certified_factor_bound(N)) row.factor_all_above_bound = false;
      }
    }

    row.of_bound_worst = certified_of_bound(lo);
    row.factor_bound_worst = certified_factor_bound(lo);
    if (row.of_pairs) row.of_mean = of_sum / static_cast<double>(row.of_pairs);
    if (row.factor_inputs)
      row.factor_mean = factor_sum / static_cast<double>(row.factor_inputs);
    if (row.gate_pairs) row.gate_mean = gate_sum / static_cast<double>(row.gate_pairs);
    if (row.of_pairs == 0) row.of_min = 0;
    if (row.factor_inputs == 0) row.factor_min = 0;
    if (row.gate_pairs == 0) row.gate_min = 0;
    rows.push_back(row);
  }
  return rows;
}

void emit_stats(std::ostream& out, u32 min_bits, u32 max_bits) {
  const auto rows = gather_stats(min_bits, max_bits);
  out << "bits,exact,of_pairs,of_min,of_mean,of_max,of_bound_worst,"
         "of_all_above_bound,factor_inputs,factor_min,factor_mean,factor_max,"
         "factor_bound_worst,factor_all_above_bound,gate_pairs,gate_min,"
         "gate_mean,gate_max,gate_bound_worst,gate_all_within_bound\n";
  out << std::setprecision(12);
  for (const auto& r : rows) {
    out << r.bits << ',' << (r.exact ? 1 : 0) << ',' << r.of_pairs << ',' << r.of_min
        << ',' << r.of_mean << ',' << r.of_max << ',' << r.of_bound_worst << ','
        << (r.of_all_above_bound ? 1 : 0) << ',' << r.factor_inputs << ','
        << r.factor_min << ',' << r.factor_mean << ',' << r.factor_max << ','
        << r.factor_bound_worst << ',' << (r.factor_all_above_bound ? 1 : 0) << ','
        << r.gate_pairs << ',' << r.gate_min << ',' << r.gate_mean << ','
        << r.gate_max << ',' << r.gate_bound_worst << ','
        << (r.gate_all_within_bound ? 1 : 0) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Outcome sources.
// ---------------------------------------------------------------------------

u64 AnalyticOutcomeSource::draw(u64 a, u64 N, u64 m, Rng& rng) {
  check_multiplier(a, N);
  if (m == 0 || m > 26)
    throw resource_error("analytic readout table too large", m <= 63 ? (1ULL << m) : ~0ULL);
  const u64 r = nt::order_brute(a, N);
  auto& cdf = cdf_cache_[{r, m}];
  if (cdf.empty()) {
    const u64 M = 1ULL << m;
    cdf.reserve(M);
    double acc = 0.0;
    for (u64 u = 0; u < M; ++u) {
      acc += qpe_outcome_prob(r, static_cast<u32>(m), u);
      cdf.push_back(acc);
    }
  }
  const double x = rng.next_double() * cdf.back();
  const auto it = std::lower_bound(cdf.begin(), cdf.end(), x);
  return std::min<u64>(it - cdf.begin(), cdf.size() - 1);
}

u64 SimulateOutcomeSource::draw(u64 a, u64 N, u64 m, Rng& rng) {
  check_multiplier(a, N);
  auto& cdf = cdf_cache_[{a, N}];
  if (cdf.empty()) {
    const auto sc = gateir::shor_circuit(a, N);
    if (sc.params.m != m)
      throw param_error("simulate backend: readout width mismatch");
    auto state = sim::run_circuit(sim::basis_state(sc.params.total, 0), sc.gates, opts_);
    const auto dist = sim::output_distribution(state, 0, sc.params.m);
    double acc = 0.0;
    cdf.reserve(dist.size());
    for (const auto& [u, p] : dist) {
      acc += p;
      cdf.emplace_back(u, acc);
    }
  }
  const double x = rng.next_double() * cdf.back().second;
  const auto it =
      std::lower_bound(cdf.begin(), cdf.end(), x,
                       [](const std::pair<u64, double>& e, double v) { return e.second < v; });
  return (it == cdf.end() ? cdf.back() : *it).first;
}

}  // namespace qshor::analysis
