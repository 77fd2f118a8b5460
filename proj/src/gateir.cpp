#include "qshor/gateir.hpp"

#include <cmath>

#include "qshor/errors.hpp"
#include "qshor/numtheory.hpp"
#include "qshor/revarith.hpp"

namespace qshor::gateir {

namespace {

Gate gate(GateKind k, std::initializer_list<u32> qs, std::initializer_list<double> ps = {}) {
  Gate g;
  g.kind = k;
  g.nq = static_cast<std::uint8_t>(qs.size());
  g.np = static_cast<std::uint8_t>(ps.size());
  std::size_t i = 0;
  for (u32 q : qs) g.q[i++] = q;
  i = 0;
  for (double p : ps) g.p[i++] = p;
  return g;
}

}  // namespace

Gate g_x(u32 t) { return gate(GateKind::x, {t}); }
Gate g_h(u32 t) { return gate(GateKind::h, {t}); }
Gate g_u1(double lambda, u32 t) { return gate(GateKind::u1, {t}, {lambda}); }
Gate g_u2(double phi, double lambda, u32 t) { return gate(GateKind::u2, {t}, {phi, lambda}); }
Gate g_u3(double theta, double phi, double lambda, u32 t) {
  return gate(GateKind::u3, {t}, {theta, phi, lambda});
}
Gate g_cu1(double lambda, u32 c, u32 t) { return gate(GateKind::cu1, {c, t}, {lambda}); }
Gate g_swap(u32 a, u32 b) { return gate(GateKind::swap, {a, b}); }
Gate g_cswap(u32 c, u32 a, u32 b) { return gate(GateKind::cswap, {c, a, b}); }
Gate g_cx(u32 c, u32 t) { return gate(GateKind::cx, {c, t}); }
Gate g_ccx(u32 c1, u32 c2, u32 t) { return gate(GateKind::ccx, {c1, c2, t}); }
Gate g_c3x(u32 c1, u32 c2, u32 c3, u32 t) { return gate(GateKind::c3x, {c1, c2, c3, t}); }
Gate g_c4x(u32 c1, u32 c2, u32 c3, u32 c4, u32 t) {
  return gate(GateKind::c4x, {c1, c2, c3, c4, t});
}

bool equal_gates(const GateCircuit& a, const GateCircuit& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Gate &x = a[i], &y = b[i];
    if (x.kind != y.kind || x.nq != y.nq || x.np != y.np) return false;
    for (int j = 0; j < x.nq; ++j)
      if (x.q[j] != y.q[j]) return false;
    for (int j = 0; j < x.np; ++j)
      if (x.p[j] != y.p[j]) return false;
  }
  return true;
}

namespace {

constexpr GateKind kXWithControls[5] = {GateKind::x, GateKind::cx, GateKind::ccx,
                                        GateKind::c3x, GateKind::c4x};

void emit_flip(const std::vector<u32>& controls, u32 target, GateCircuit& out) {
  if (controls.size() > 4)
    throw translate_error("translate: a flip can take at most 4 controls");
  Gate g;
  g.kind = kXWithControls[controls.size()];
  g.nq = static_cast<std::uint8_t>(controls.size() + 1);
  for (std::size_t i = 0; i < controls.size(); ++i) g.q[i] = controls[i];
  g.q[controls.size()] = target;
  out.push_back(g);
}

void emit_swap(const std::vector<u32>& controls, u32 a, u32 b, GateCircuit& out) {
  if (controls.size() > 1)
    throw translate_error("translate: a swap can take at most 1 control");
  out.push_back(controls.empty() ? g_swap(a, b) : g_cswap(controls[0], a, b));
}

void translate_walk(const rcir::RevPtr& r, std::vector<u32>& controls, GateCircuit& out) {
  using K = rcir::Rev::Kind;
  switch (r->kind) {
    case K::skip:
      return;
    case K::flip:
      emit_flip(controls, r->a, out);
      return;
    case K::swap_bits:
      emit_swap(controls, r->a, r->b, out);
      return;
    case K::ctrl: {
      // A repeated control wire is semantically the same single control.
      bool duplicate = false;
      for (u32 c : controls) duplicate |= (c == r->a);
      if (!duplicate) controls.push_back(r->a);
      translate_walk(r->body, controls, out);
      if (!duplicate) controls.pop_back();
      return;
    }
    case K::seq:
      translate_walk(r->first, controls, out);
      translate_walk(r->second, controls, out);
      return;
  }
}

}  // namespace

void translate_rcir_into(const rcir::RevPtr& r, GateCircuit& out) {
  std::vector<u32> controls;
  translate_walk(r, controls, out);
}

GateCircuit translate_rcir(const rcir::RevPtr& r) {
  GateCircuit out;
  translate_rcir_into(r, out);
  return out;
}

GateCircuit qft(u32 k) {
  GateCircuit c;
  // Little-endian DFT: phases run from the top wire down, then the register
  // order is reversed with swaps.
  for (u32 q = k; q-- > 0;) {
    c.push_back(g_h(q));
    for (u32 p = q; p-- > 0;) {
      c.push_back(g_cu1(M_PI / static_cast<double>(1ULL << (q - p)), p, q));
    }
  }
  for (u32 q = 0; q < k / 2; ++q) c.push_back(g_swap(q, k - 1 - q));
  return c;
}

GateCircuit invert(const GateCircuit& c) {
  GateCircuit out;
  out.reserve(c.size());
  for (std::size_t i = c.size(); i-- > 0;) {
    Gate g = c[i];
    switch (g.kind) {
      case GateKind::u1:
      case GateKind::cu1:
        g.p[0] = -g.p[0];
        break;
      case GateKind::u2:
        // u2(phi, lambda) = u3(pi/2, phi, lambda); invert as a u3.
        g = g_u3(-M_PI_2, -g.p[1], -g.p[0], g.q[0]);
        break;
      case GateKind::u3:
        g = g_u3(-g.p[0], -g.p[2], -g.p[1], g.q[0]);
        break;
      default:
        break;  // the remaining kinds are self-inverse
    }
    out.push_back(g);
  }
  return out;
}

GateCircuit control(u32 wire, const GateCircuit& c) {
  GateCircuit out;
  out.reserve(c.size());
  for (const Gate& g : c) {
    Gate n = g;
    switch (g.kind) {
      case GateKind::x:
        n.kind = GateKind::cx;
        break;
      case GateKind::cx:
        n.kind = GateKind::ccx;
        break;
      case GateKind::ccx:
        n.kind = GateKind::c3x;
        break;
      case GateKind::c3x:
        n.kind = GateKind::c4x;
        break;
      case GateKind::u1:
        n.kind = GateKind::cu1;
        break;
      case GateKind::swap:
        n.kind = GateKind::cswap;
        break;
      default:
        throw translate_error("control: gate kind cannot absorb another control");
    }
    // The new control goes first; existing wires shift right.
    for (int j = g.nq; j-- > 0;) n.q[j + 1] = g.q[j];
    n.q[0] = wire;
    n.nq = static_cast<std::uint8_t>(g.nq + 1);
    out.push_back(n);
  }
  return out;
}

GateCircuit map_qubits(u32 offset, const GateCircuit& c) {
  GateCircuit out = c;
  for (Gate& g : out)
    for (int j = 0; j < g.nq; ++j) g.q[j] += offset;
  return out;
}

GateCircuit npar(u32 k, GateKind kind) {
  if (kind != GateKind::x && kind != GateKind::h)
    throw param_error("npar: only parameter-free single-wire kinds");
  GateCircuit c;
  c.reserve(k);
  for (u32 q = 0; q < k; ++q) c.push_back(gate(kind, {q}));
  return c;
}

GateCircuit controlled_powers(const std::function<GateCircuit(u32)>& f, u32 k, u32 kmax) {
  GateCircuit out;
  for (u32 i = 0; i < k; ++i) {
    GateCircuit block = control(kmax - 1 - i, f(i));
    out.insert(out.end(), block.begin(), block.end());
  }
  return out;
}

GateCircuit qpe(u32 k, u32 n, const std::function<GateCircuit(u32)>& f) {
  (void)n;
  GateCircuit out = npar(k, GateKind::h);
  // Hand controlled_powers the index-reversed family so readout wire q ends up
  // controlling f(q); that convention matches the DFT realized by qft().
  auto g = [&](u32 i) { return map_qubits(k, f(k - 1 - i)); };
  GateCircuit cp = controlled_powers(g, k, k);
  out.insert(out.end(), cp.begin(), cp.end());
  GateCircuit iqft = invert(qft(k));
  out.insert(out.end(), iqft.begin(), iqft.end());
  return out;
}

ShorParams shor_params(u64 a, u64 N) {
  if (N < 3) throw param_error("shor_params: requires N >= 3");
  if (a <= 1 || a >= N) throw param_error("shor_params: requires 1 < a < N");
  if (numtheory::gcd(a, N) != 1) throw param_error("shor_params: requires gcd(a, N) = 1");
  ShorParams p;
  p.a = a;
  p.N = N;
  u32 m = 0;
  while ((1ULL << (m + 1)) <= 2 * N * N) ++m;
  u32 n = 0;
  while ((1ULL << (n + 1)) <= 2 * N) ++n;
  p.m = m;
  p.n = n;
  p.s = 3 * n + 11;
  p.total = p.m + p.n + p.s;
  return p;
}

ShorCircuit shor_circuit(u64 a, u64 N) {
  ShorParams p = shor_params(a, N);
  // Work register starts at |1>: one X on its least significant wire.
  GateCircuit out;
  out.push_back(g_x(p.m));
  // f(i) multiplies by a^(2^i); the i-th squaring is controlled by readout wire i.
  std::vector<u64> mult(p.m);
  u64 c = a % N;
  for (u32 i = 0; i < p.m; ++i) {
    mult[i] = c;
    c = numtheory::mulmod(c, c, N);
  }
  auto f = [&](u32 i) { return translate_rcir(revarith::imm(mult[i], N).prog); };
  GateCircuit body = qpe(p.m, p.n + p.s, f);
  out.insert(out.end(), body.begin(), body.end());
  return {std::move(out), p};
}

u64 gate_count(const GateCircuit& c) { return c.size(); }

namespace {

u64 popcount(u64 x) { return static_cast<u64>(__builtin_popcountll(x)); }

// Closed-form primitive counts of the arithmetic blocks (w = register width).
u64 mod_add_count(u64 w) { return 30 * w + 5; }
u64 mod_sft_count(u64 w) { return 17 * w + 1; }

u64 mm_count(u64 a, u64 N, u64 w) {
  u64 n = w - 1;
  return 2 * popcount(N) + popcount(a) * mod_add_count(w) +
         2 * (n - 1) * (mod_sft_count(w) + 1);
}

u64 imm_count(u64 a, u64 a_inv, u64 N, u64 n) {
  u64 w = n + 1;
  return mm_count(a, N, w) + n + mm_count(a_inv, N, w);
}

}  // namespace

u64 shor_gate_count(u64 a, u64 N) {
  ShorParams p = shor_params(a, N);
  u64 total = 1 + p.m;  // work-register X plus the Hadamard wall
  u64 c = a % N;
  for (u32 i = 0; i < p.m; ++i) {
    u64 inv = *numtheory::modinv(c, N);
    total += imm_count(c, inv, N, p.n);
    c = numtheory::mulmod(c, c, N);
  }
  total += p.m + static_cast<u64>(p.m) * (p.m - 1) / 2 + p.m / 2;  // inverse DFT
  return total;
}

u64 gate_count_bound(u32 n, u32 m) {
  u64 nn = n, mm = m;
  return (212 * nn * nn + 975 * nn + 1031) * mm + 4 * mm + mm * mm;
}

}  // namespace qshor::gateir
