#include "qshor/sim.hpp"

#include <algorithm>
#include <cmath>

#include "qshor/errors.hpp"
#include "qshor/numtheory.hpp"

namespace qshor::sim {

SparseState basis_state(u32 num_qubits, u64 value) {
  if (num_qubits > 63) throw param_error("basis_state: at most 63 wires are indexable");
  if (num_qubits < 64 && value >> num_qubits)
    throw param_error("basis_state: value exceeds the register");
  SparseState s;
  s.num_qubits = num_qubits;
  s.amps.emplace(value, amp(1.0, 0.0));
  return s;
}

SparseState make_eigenstate(u64 a, u64 N, u64 j, u32 num_qubits) {
  if (num_qubits > 63 || N >> num_qubits)
    throw param_error("make_eigenstate: modulus must fit the register");
  u64 r = numtheory::order_brute(a, N);
  SparseState s;
  s.num_qubits = num_qubits;
  const double norm = 1.0 / std::sqrt(static_cast<double>(r));
  u64 x = 1 % N;
  for (u64 l = 0; l < r; ++l) {
    double angle = -2.0 * M_PI * static_cast<double>(j % r) * static_cast<double>(l) /
                   static_cast<double>(r);
    s.amps[x] += std::polar(norm, angle);
    x = numtheory::mulmod(x, a, N);
  }
  return s;
}

namespace {

using gateir::Gate;
using gateir::GateKind;

struct Unitary2 {
  amp m00, m01, m10, m11;
};

Unitary2 single_qubit_matrix(const Gate& g) {
  switch (g.kind) {
    case GateKind::h: {
      const double s = M_SQRT1_2;
      return {amp(s, 0), amp(s, 0), amp(s, 0), amp(-s, 0)};
    }
    case GateKind::u2: {
      const double s = M_SQRT1_2;
      const double phi = g.p[0], lambda = g.p[1];
      return {amp(s, 0), -std::polar(s, lambda), std::polar(s, phi),
              std::polar(s, lambda + phi)};
    }
    case GateKind::u3: {
      const double c = std::cos(g.p[0] / 2), s = std::sin(g.p[0] / 2);
      const double phi = g.p[1], lambda = g.p[2];
      return {amp(c, 0), -std::polar(s, lambda), std::polar(s, phi),
              std::polar(c, lambda + phi)};
    }
    default:
      throw param_error("single_qubit_matrix: not a mixing gate");
  }
}

// Basis-permutation action of the classical gates; identity when controls miss.
u64 permute_key(const Gate& g, u64 k) {
  switch (g.kind) {
    case GateKind::x:
      return k ^ (1ULL << g.q[0]);
    case GateKind::cx:
    case GateKind::ccx:
    case GateKind::c3x:
    case GateKind::c4x: {
      const int nc = g.nq - 1;
      for (int i = 0; i < nc; ++i)
        if (!((k >> g.q[i]) & 1)) return k;
      return k ^ (1ULL << g.q[nc]);
    }
    case GateKind::swap:
    case GateKind::cswap: {
      const int base = (g.kind == GateKind::cswap) ? 1 : 0;
      if (base && !((k >> g.q[0]) & 1)) return k;
      const u64 ba = (k >> g.q[base]) & 1, bb = (k >> g.q[base + 1]) & 1;
      if (ba == bb) return k;
      return k ^ (1ULL << g.q[base]) ^ (1ULL << g.q[base + 1]);
    }
    default:
      throw param_error("permute_key: not a permutation gate");
  }
}

void check_cap(const SparseState& s, const SimOptions& opts) {
  if (s.amps.size() > opts.support_cap)
    throw resource_error("simulator support cap exceeded", s.amps.size());
}

}  // namespace

void apply_gate(SparseState& s, const Gate& g, const SimOptions& opts) {
  for (int i = 0; i < g.nq; ++i)
    if (g.q[i] >= s.num_qubits) throw param_error("apply_gate: wire out of range");

  switch (g.kind) {
    case GateKind::x:
    case GateKind::cx:
    case GateKind::ccx:
    case GateKind::c3x:
    case GateKind::c4x:
    case GateKind::swap:
    case GateKind::cswap: {
      // Pure basis permutation: relabel keys, amplitudes untouched.
      std::unordered_map<u64, amp> next;
      next.reserve(s.amps.size());
      for (const auto& [k, v] : s.amps) next.emplace(permute_key(g, k), v);
      s.amps = std::move(next);
      break;
    }
    case GateKind::u1: {
      const amp phase = std::polar(1.0, g.p[0]);
      for (auto& [k, v] : s.amps)
        if ((k >> g.q[0]) & 1) v *= phase;
      break;
    }
    case GateKind::cu1: {
      const amp phase = std::polar(1.0, g.p[0]);
      const u64 mask = (1ULL << g.q[0]) | (1ULL << g.q[1]);
      for (auto& [k, v] : s.amps)
        if ((k & mask) == mask) v *= phase;
      break;
    }
    case GateKind::h:
    case GateKind::u2:
    case GateKind::u3: {
      const Unitary2 u = single_qubit_matrix(g);
      const u64 bit = 1ULL << g.q[0];
      std::unordered_map<u64, amp> next;
      next.reserve(s.amps.size() * 2);
      for (const auto& [k, v] : s.amps) {
        if (k & bit) {
          next[k & ~bit] += u.m01 * v;
          next[k] += u.m11 * v;
        } else {
          next[k] += u.m00 * v;
          next[k | bit] += u.m10 * v;
        }
      }
      // Drop negligible amplitudes, then renormalize so error never accumulates.
      double norm2 = 0.0;
      for (auto it = next.begin(); it != next.end();) {
        if (std::abs(it->second) < opts.prune_threshold) {
          it = next.erase(it);
        } else {
          norm2 += std::norm(it->second);
          ++it;
        }
      }
      if (norm2 > 0.0) {
        const double scale = 1.0 / std::sqrt(norm2);
        for (auto& [k, v] : next) v *= scale;
      }
      s.amps = std::move(next);
      break;
    }
  }
  check_cap(s, opts);
}

SparseState run_circuit(SparseState initial, const gateir::GateCircuit& c,
                        const SimOptions& opts) {
  for (const Gate& g : c) apply_gate(initial, g, opts);
  return initial;
}

Distribution output_distribution(const SparseState& s, u32 offset, u32 count) {
  if (offset + count > s.num_qubits)
    throw param_error("output_distribution: range exceeds the register");
  const u64 mask = (count >= 64) ? ~0ULL : ((1ULL << count) - 1);
  Distribution dist;
  for (const auto& [k, v] : s.amps) dist[(k >> offset) & mask] += std::norm(v);
  return dist;
}

std::map<u64, u64> sample(const Distribution& dist, u64 shots, Rng& rng) {
  if (dist.empty()) throw param_error("sample: empty distribution");
  std::vector<u64> outcomes;
  std::vector<double> cdf;
  outcomes.reserve(dist.size());
  cdf.reserve(dist.size());
  double acc = 0.0;
  for (const auto& [k, p] : dist) {
    acc += p;
    outcomes.push_back(k);
    cdf.push_back(acc);
  }
  std::map<u64, u64> counts;
  for (u64 i = 0; i < shots; ++i) {
    const double u = rng.next_double() * acc;
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    const std::size_t idx = std::min<std::size_t>(it - cdf.begin(), cdf.size() - 1);
    ++counts[outcomes[idx]];
  }
  return counts;
}

double total_variation(const Distribution& p, const Distribution& q) {
  double tv = 0.0;
  auto ip = p.begin();
  auto iq = q.begin();
  while (ip != p.end() || iq != q.end()) {
    if (iq == q.end() || (ip != p.end() && ip->first < iq->first)) {
      tv += std::abs(ip->second);
      ++ip;
    } else if (ip == p.end() || iq->first < ip->first) {
      tv += std::abs(iq->second);
      ++iq;
    } else {
      tv += std::abs(ip->second - iq->second);
      ++ip;
      ++iq;
    }
  }
  return tv / 2.0;
}

}  // namespace qshor::sim
