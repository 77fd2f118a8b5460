#include "qshor/numtheory.hpp"

#include <algorithm>

#include "qshor/errors.hpp"

namespace qshor::numtheory {

u64 gcd(u64 a, u64 b) {
  while (b != 0) {
    u64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

u64 mulmod(u64 a, u64 b, u64 m) {
  return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m);
}

u64 modexp(u64 base, u64 exp, u64 mod) {
  if (mod == 0) throw param_error("modexp: modulus must be >= 1");
  u64 result = 1 % mod;
  base %= mod;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, mod);
    base = mulmod(base, base, mod);
    exp >>= 1;
  }
  return result;
}

std::optional<u64> modinv(u64 a, u64 n) {
  if (n == 0) throw param_error("modinv: modulus must be >= 1");
  // Extended Euclid tracking only the coefficient of a, in signed arithmetic.
  using i128 = __int128;
  i128 old_r = a % n, r = n;
  i128 old_s = 1, s = 0;
  while (r != 0) {
    i128 q = old_r / r;
    i128 tr = old_r - q * r;
    old_r = r;
    r = tr;
    i128 ts = old_s - q * s;
    old_s = s;
    s = ts;
  }
  if (old_r != 1) return std::nullopt;
  i128 inv = old_s % static_cast<i128>(n);
  if (inv < 0) inv += n;
  return static_cast<u64>(inv);
}

namespace {

bool mr_witness(u64 n, u64 a, u64 d, int s) {
  u64 x = modexp(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < s; ++i) {
    x = mulmod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

}  // namespace

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // This witness set decides primality exactly for every 64-bit integer.
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (!mr_witness(n, a, d, s)) return false;
  }
  return true;
}

u64 order_brute(u64 a, u64 n) {
  if (n < 2) throw param_error("order_brute: modulus must be >= 2");
  a %= n;
  if (gcd(a, n) != 1) throw param_error("order_brute: base must be coprime to the modulus");
  u64 r = 1;
  u64 x = a;
  while (x != 1 % n) {
    x = mulmod(x, a, n);
    ++r;
  }
  return r;
}

u64 euler_phi(u64 n) {
  if (n == 0) throw param_error("euler_phi: argument must be >= 1");
  u64 result = n;
  u64 m = n;
  for (u64 p = 2; p * p <= m; ++p) {
    if (m % p == 0) {
      result -= result / p;
      while (m % p == 0) m /= p;
    }
  }
  if (m > 1) result -= result / m;
  return result;
}

int two_adic(u64 n) {
  if (n == 0) throw param_error("two_adic: argument must be >= 1");
  return __builtin_ctzll(n);
}

namespace {

// One structural recursion shared by cfe(): peel the next partial quotient of
// a/b and fold it into the convergent pair (p1/q1 current, p2/q2 previous).
std::pair<u64, u64> cf_ite(u64 fuel, u64 a, u64 b, u64 p1, u64 q1, u64 p2, u64 q2) {
  if (fuel == 0 || a == 0) return {p1, q1};
  u64 c = b / a;
  u64 d = b % a;
  return cf_ite(fuel - 1, d, a, c * p1 + p2, c * q1 + q2, p1, q1);
}

}  // namespace

u64 cfe(u64 k, u64 a, u64 b) {
  if (b == 0) throw param_error("cfe: denominator must be >= 1");
  if (a > b) throw param_error("cfe: requires a <= b");
  return cf_ite(k + 1, a, b, 0, 1, 1, 0).second;
}

std::vector<u64> cfe_denominators(u64 a, u64 b) {
  if (b == 0) throw param_error("cfe_denominators: denominator must be >= 1");
  if (a > b) throw param_error("cfe_denominators: requires a <= b");
  std::vector<u64> qs;
  if (a == 0) {
    qs.push_back(1);  // the expansion never starts; cfe saturates at the seed 0/1
    return qs;
  }
  u64 p1 = 0, q1 = 1, p2 = 1, q2 = 0;
  while (a != 0) {
    u64 c = b / a;
    u64 d = b % a;
    u64 p = c * p1 + p2;
    u64 q = c * q1 + q2;
    qs.push_back(q);
    p2 = p1;
    q2 = q1;
    p1 = p;
    q1 = q;
    b = a;
    a = d;
  }
  return qs;
}

std::optional<u64> of_post(u64 a, u64 N, u64 out, u64 m) {
  if (N < 2 || a <= 1 || a >= N) throw param_error("of_post: requires 1 < a < N");
  if (m >= 63) throw param_error("of_post: precision too large");
  const u64 M = 1ULL << m;
  if (out >= M) throw param_error("of_post: readout exceeds 2^m");
  for (u64 k = 0; k <= 2 * m + 1; ++k) {
    u64 q = cfe(k, out, M);
    if (q >= 1 && modexp(a, q, N) == 1) return q;
  }
  return std::nullopt;
}

std::optional<u64> of_post_with_order(u64 r, u64 out, u64 m) {
  if (r == 0) throw param_error("of_post_with_order: order must be >= 1");
  if (m >= 63) throw param_error("of_post_with_order: precision too large");
  const u64 M = 1ULL << m;
  if (out >= M) throw param_error("of_post_with_order: readout exceeds 2^m");
  // Walk the convergents once; the k-indexed scan visits them in this order.
  if (out == 0) return (r == 1) ? std::optional<u64>(1) : std::nullopt;
  u64 p1 = 0, q1 = 1, p2 = 1, q2 = 0;
  u64 a = out, b = M;
  u64 steps = 2 * m + 2;  // matches the k <= 2m+1 scan budget
  while (a != 0 && steps > 0) {
    u64 c = b / a;
    u64 d = b % a;
    u64 p = c * p1 + p2;
    u64 q = c * q1 + q2;
    if (q % r == 0) return q;
    p2 = p1;
    q2 = q1;
    p1 = p;
    q1 = q;
    b = a;
    a = d;
    --steps;
  }
  return std::nullopt;
}

std::optional<u64> factor_from_order(u64 a, u64 N, u64 r) {
  if (N < 2) throw param_error("factor_from_order: requires N >= 2");
  u64 h = modexp(a, r / 2, N);
  u64 cand1 = gcd((h + N - 1) % N, N);  // gcd(0, N) = N, i.e. trivial
  if (cand1 > 1 && cand1 < N) return cand1;
  u64 cand2 = gcd((h + 1) % N, N);
  if (cand2 > 1 && cand2 < N) return cand2;
  return std::nullopt;
}

namespace {

// Integer k-th root by binary search; returns floor(N^(1/k)).
u64 iroot(u64 n, u64 k) {
  if (k == 1) return n;
  u64 lo = 1, hi = 1;
  while (true) {
    unsigned __int128 p = 1;
    bool over = false;
    for (u64 i = 0; i < k; ++i) {
      p *= (hi + 1);
      if (p > n) {
        over = true;
        break;
      }
    }
    if (over) break;
    hi = hi * 2 + 1;
  }
  while (lo < hi) {
    u64 mid = lo + (hi - lo + 1) / 2;
    unsigned __int128 p = 1;
    bool over = false;
    for (u64 i = 0; i < k; ++i) {
      p *= mid;
      if (p > n) {
        over = true;
        break;
      }
    }
    if (over)
      hi = mid - 1;
    else
      lo = mid;
  }
  return lo;
}

}  // namespace

Classification preprocess(u64 N) {
  if (N < 2) throw param_error("preprocess: requires N >= 2");
  if (is_prime(N)) return {InputClass::prime, 0, 0};
  if (N % 2 == 0) return {InputClass::even, 0, 0};
  // Odd composite: check for a perfect prime power p^k, k >= 2.
  for (u64 k = 2; (1ULL << k) <= N; ++k) {
    u64 p = iroot(N, k);
    for (u64 cand : {p, p + 1}) {
      if (cand < 2) continue;
      unsigned __int128 pw = 1;
      for (u64 i = 0; i < k; ++i) pw *= cand;
      if (pw == N && is_prime(cand)) return {InputClass::prime_power, cand, k};
    }
  }
  return {InputClass::composite_odd, 0, 0};
}

Trial shor_body(u64 N, Rng& rng, OrderOutcomeSource& backend) {
  Trial t;
  t.a = 1 + rng.next_below(N - 1);
  if (t.a == 1) {
    // a = 1 carries no order information; count the trial as a miss.
    t.path = Trial::Path::unit_a;
    return t;
  }
  u64 g = gcd(t.a, N);
  if (g != 1) {
    t.path = Trial::Path::gcd_hit;
    t.factor = g;
    return t;
  }
  t.path = Trial::Path::quantum;
  // Precision follows the circuit: m = floor(log2(2 N^2)).
  u64 m = 0;
  while ((1ULL << (m + 1)) <= 2 * N * N) ++m;
  t.outcome = backend.draw(t.a, N, m, rng);
  auto q = of_post(t.a, N, t.outcome, m);
  t.order = q;
  if (q) t.factor = factor_from_order(t.a, N, *q);
  return t;
}

FactoringResult end_to_end(u64 N, u64 niter, u64 seed, OrderOutcomeSource& backend) {
  FactoringResult res;
  res.classification = preprocess(N);
  switch (res.classification.kind) {
    case InputClass::prime:
      return res;  // no nontrivial factor exists
    case InputClass::even:
      res.factor = 2;
      return res;
    case InputClass::prime_power:
      res.factor = res.classification.p;
      return res;
    case InputClass::composite_odd:
      break;
  }
  for (u64 trial = 0; trial < niter; ++trial) {
    Rng trial_rng(Rng::mix(seed, trial));
    Trial t = shor_body(N, trial_rng, backend);
    res.trials.push_back(t);
    if (t.factor) {
      res.factor = t.factor;
      break;
    }
  }
  return res;
}

}  // namespace qshor::numtheory
