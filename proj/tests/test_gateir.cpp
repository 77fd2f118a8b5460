#include "../vendor/doctest.h"

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "dense_sim.hpp"
#include "qshor/errors.hpp"
#include "qshor/gateir.hpp"
#include "qshor/rcir.hpp"
#include "qshor/revarith.hpp"
#include "qshor/rng.hpp"

namespace rc = qshor::rcir;
namespace gi = qshor::gateir;
using gi::u32;
using gi::u64;
using gi::GateCircuit;
using gi::GateKind;

namespace {

// Probability of reading j from wires [0, k) of a dense state.
double readout_prob(const dense::Vec& psi, u32 k, u64 j) {
  double p = 0.0;
  const u64 block = 1ULL << k;
  for (u64 i = j; i < psi.size(); i += block)
    if ((i & (block - 1)) == j) p += std::norm(psi[i]);
  return p;
}

// Random program whose every leaf fits the gate set: flips carry at most four
// distinct controls, swaps at most one.
rc::RevPtr random_translatable(qshor::Rng& rng, u32 width, u32 len) {
  std::vector<rc::RevPtr> elems;
  for (u32 i = 0; i < len; ++i) {
    u64 used = 0;
    const auto draw_wire = [&] {
      u32 w;
      do {
        w = static_cast<u32>(rng.next_below(width));
      } while ((used >> w) & 1);
      used |= 1ULL << w;
      return w;
    };
    rc::RevPtr prim;
    u64 ncontrols;
    if (rng.next_below(3) == 0) {
      prim = rc::swap_bits(draw_wire(), draw_wire());
      ncontrols = rng.next_below(2);
    } else {
      prim = rc::flip(draw_wire());
      ncontrols = rng.next_below(5);
    }
    for (u64 c = 0; c < ncontrols && used != (1ULL << width) - 1; ++c)
      prim = rc::ctrl(draw_wire(), prim);
    elems.push_back(prim);
  }
  return rc::seq_all(elems);
}

}  // namespace

TEST_CASE("gate constructors fill cardinality, wires, and params") {
  const gi::Gate cx = gi::g_cx(3, 1);
  CHECK(cx.kind == GateKind::cx);
  CHECK(cx.nq == 2);
  CHECK(cx.np == 0);
  CHECK(cx.q[0] == 3);
  CHECK(cx.q[1] == 1);
  const gi::Gate u3 = gi::g_u3(0.25, -0.5, 1.0, 6);
  CHECK(u3.kind == GateKind::u3);
  CHECK(u3.nq == 1);
  CHECK(u3.np == 3);
  CHECK(u3.p[0] == 0.25);
  CHECK(u3.p[1] == -0.5);
  CHECK(u3.p[2] == 1.0);
  const gi::Gate c4 = gi::g_c4x(0, 1, 2, 3, 4);
  CHECK(c4.nq == 5);
  CHECK(c4.q[4] == 4);
}

TEST_CASE("equal_gates compares kind, wires, and exact angles") {
  const GateCircuit a = {gi::g_h(0), gi::g_cu1(M_PI / 4, 0, 1)};
  CHECK(gi::equal_gates(a, {gi::g_h(0), gi::g_cu1(M_PI / 4, 0, 1)}));
  CHECK(!gi::equal_gates(a, {gi::g_h(1), gi::g_cu1(M_PI / 4, 0, 1)}));
  CHECK(!gi::equal_gates(a, {gi::g_h(0), gi::g_cu1(M_PI / 2, 0, 1)}));
  CHECK(!gi::equal_gates(a, {gi::g_h(0), gi::g_cu1(M_PI / 4, 1, 0)}));
  CHECK(!gi::equal_gates(a, {gi::g_h(0)}));
  CHECK(gi::equal_gates({}, {}));
}

TEST_CASE("translate lowers the majority step to the frozen gate list") {
  const GateCircuit got = gi::translate_rcir(qshor::revarith::maj(0, 1, 2));
  const GateCircuit want = {gi::g_cx(2, 1), gi::g_cx(2, 0), gi::g_ccx(0, 1, 2)};
  CHECK(gi::equal_gates(got, want));
}

TEST_CASE("translate accumulates controls and dedupes repeats") {
  // Two distinct controls on a flip become a ccx, controls outermost-first.
  const rc::RevPtr two = rc::ctrl(0, rc::ctrl(1, rc::flip(2)));
  CHECK(gi::equal_gates(gi::translate_rcir(two), {gi::g_ccx(0, 1, 2)}));
  // Four controls are the ceiling for a flip.
  rc::RevPtr four = rc::flip(4);
  for (u32 c = 0; c < 4; ++c) four = rc::ctrl(c, four);
  const GateCircuit got = gi::translate_rcir(four);
  REQUIRE(got.size() == 1);
  CHECK(got[0].kind == GateKind::c4x);
  // A repeated control wire folds into one.
  const rc::RevPtr dup = rc::ctrl(0, rc::seq(rc::skip(), rc::ctrl(0, rc::flip(1))));
  CHECK(gi::equal_gates(gi::translate_rcir(dup), {gi::g_cx(0, 1)}));
  // One control fits on a swap.
  const rc::RevPtr csw = rc::ctrl(2, rc::swap_bits(0, 1));
  CHECK(gi::equal_gates(gi::translate_rcir(csw), {gi::g_cswap(2, 0, 1)}));
  // Skips vanish and sequences concatenate.
  const rc::RevPtr chain = rc::seq(rc::flip(0), rc::seq(rc::skip(), rc::flip(1)));
  CHECK(gi::equal_gates(gi::translate_rcir(chain), {gi::g_x(0), gi::g_x(1)}));
}

TEST_CASE("translate rejects control depth beyond the gate set") {
  rc::RevPtr five = rc::flip(5);
  for (u32 c = 0; c < 5; ++c) five = rc::ctrl(c, five);
  CHECK_THROWS_AS(gi::translate_rcir(five), qshor::translate_error);
  const rc::RevPtr two_on_swap = rc::ctrl(0, rc::ctrl(1, rc::swap_bits(2, 3)));
  CHECK_THROWS_AS(gi::translate_rcir(two_on_swap), qshor::translate_error);
}

TEST_CASE("translate_rcir_into appends after existing gates") {
  GateCircuit out = {gi::g_h(0)};
  gi::translate_rcir_into(rc::flip(1), out);
  CHECK(gi::equal_gates(out, {gi::g_h(0), gi::g_x(1)}));
}

TEST_CASE("translated programs act like their reversible source") {
  qshor::Rng rng(31);
  const u32 width = 5;
  for (int trial = 0; trial < 200; ++trial) {
    const rc::RevPtr prog = random_translatable(rng, width, 30);
    REQUIRE(rc::well_typed(prog, width));
    const GateCircuit circ = gi::translate_rcir(prog);
    for (u64 x = 0; x < (1ULL << width); ++x) {
      rc::BitRegister reg = rc::register_of_value(width, x);
      rc::eval_rcir(prog, reg);
      const u64 y = rc::value_of_register(reg);
      const dense::Vec psi = dense::run(dense::basis(width, x), circ);
      for (u64 j = 0; j < psi.size(); ++j) {
        const double want = (j == y) ? 1.0 : 0.0;
        CHECK(std::abs(psi[j] - want) < 1e-12);
      }
    }
  }
}

TEST_CASE("qft frozen structure at one and two wires") {
  CHECK(gi::equal_gates(gi::qft(1), {gi::g_h(0)}));
  const GateCircuit want = {gi::g_h(1), gi::g_cu1(M_PI / 2, 0, 1), gi::g_h(0),
                            gi::g_swap(0, 1)};
  CHECK(gi::equal_gates(gi::qft(2), want));
}

TEST_CASE("qft equals the DFT matrix on up to five wires") {
  for (u32 k = 1; k <= 5; ++k) {
    const GateCircuit circ = gi::qft(k);
    const u64 K = 1ULL << k;
    const double invsqrt = 1.0 / std::sqrt(static_cast<double>(K));
    for (u64 l = 0; l < K; ++l) {
      const dense::Vec psi = dense::run(dense::basis(k, l), circ);
      for (u64 j = 0; j < K; ++j) {
        const double ang = 2.0 * M_PI * static_cast<double>(j * l % K) / static_cast<double>(K);
        const dense::cplx want = std::polar(invsqrt, ang);
        CHECK(std::abs(psi[j] - want) < 1e-12);
      }
    }
  }
}

TEST_CASE("invert negates angles, reverses order, and cancels densely") {
  CHECK(gi::equal_gates(gi::invert({gi::g_u1(0.5, 0)}), {gi::g_u1(-0.5, 0)}));
  CHECK(gi::equal_gates(gi::invert({gi::g_cu1(0.5, 1, 0)}), {gi::g_cu1(-0.5, 1, 0)}));
  CHECK(gi::equal_gates(gi::invert({gi::g_h(2)}), {gi::g_h(2)}));
  CHECK(gi::equal_gates(gi::invert({gi::g_x(0), gi::g_h(1)}), {gi::g_h(1), gi::g_x(0)}));
  CHECK(gi::equal_gates(gi::invert({gi::g_u3(0.3, 0.5, 0.7, 0)}),
                        {gi::g_u3(-0.3, -0.7, -0.5, 0)}));
  qshor::Rng rng(32);
  for (int trial = 0; trial < 50; ++trial) {
    const GateCircuit c = dense::random_circuit(rng, 4, 25);
    GateCircuit round = c;
    const GateCircuit inv = gi::invert(c);
    round.insert(round.end(), inv.begin(), inv.end());
    for (u64 x = 0; x < 16; ++x) {
      const dense::Vec psi = dense::run(dense::basis(4, x), round);
      CHECK(dense::distance(psi, dense::basis(4, x)) < 1e-9);
    }
  }
}

TEST_CASE("control absorbs one more wire or refuses") {
  const GateCircuit src = {gi::g_x(1), gi::g_cx(1, 2), gi::g_u1(0.25, 2), gi::g_swap(1, 2)};
  const GateCircuit got = gi::control(0, src);
  const GateCircuit want = {gi::g_cx(0, 1), gi::g_ccx(0, 1, 2), gi::g_cu1(0.25, 0, 2),
                            gi::g_cswap(0, 1, 2)};
  CHECK(gi::equal_gates(got, want));
  CHECK_THROWS_AS(gi::control(5, {gi::g_c4x(0, 1, 2, 3, 4)}), qshor::translate_error);
  CHECK_THROWS_AS(gi::control(2, {gi::g_cswap(0, 1, 3)}), qshor::translate_error);
  CHECK_THROWS_AS(gi::control(1, {gi::g_h(0)}), qshor::translate_error);
  CHECK_THROWS_AS(gi::control(1, {gi::g_u2(0.1, 0.2, 0)}), qshor::translate_error);
  CHECK_THROWS_AS(gi::control(1, {gi::g_u3(0.1, 0.2, 0.3, 0)}), qshor::translate_error);
  CHECK_THROWS_AS(gi::control(1, {gi::g_cu1(0.1, 0, 2)}), qshor::translate_error);

  // Dense check: the controlled block is the identity when the control is off.
  qshor::Rng rng(33);
  for (int trial = 0; trial < 40; ++trial) {
    // Permutation-only circuits absorb controls without error.
    const rc::RevPtr prog = random_translatable(rng, 3, 10);
    GateCircuit inner = gi::translate_rcir(prog);
    bool controllable = true;
    for (const auto& g : inner) controllable &= g.kind != GateKind::c4x && g.kind != GateKind::cswap;
    if (!controllable) continue;
    const GateCircuit ctl = gi::control(3, inner);
    for (u64 x = 0; x < 16; ++x) {
      const dense::Vec got_psi = dense::run(dense::basis(4, x), ctl);
      dense::Vec want_psi;
      if (x >> 3 & 1) {
        want_psi = dense::run(dense::basis(4, x), inner);  // wires [0,3) untouched offset
      } else {
        want_psi = dense::basis(4, x);
      }
      CHECK(dense::distance(got_psi, want_psi) < 1e-12);
    }
  }
}

TEST_CASE("map_qubits shifts every wire") {
  const GateCircuit src = {gi::g_ccx(0, 1, 2), gi::g_u1(0.5, 0), gi::g_swap(1, 3)};
  const GateCircuit got = gi::map_qubits(2, src);
  const GateCircuit want = {gi::g_ccx(2, 3, 4), gi::g_u1(0.5, 2), gi::g_swap(3, 5)};
  CHECK(gi::equal_gates(got, want));
  CHECK(gi::equal_gates(gi::map_qubits(0, src), src));
}

TEST_CASE("npar lays one kind across the first k wires") {
  CHECK(gi::equal_gates(gi::npar(3, GateKind::h), {gi::g_h(0), gi::g_h(1), gi::g_h(2)}));
  CHECK(gi::equal_gates(gi::npar(1, GateKind::x), {gi::g_x(0)}));
  CHECK(gi::npar(0, GateKind::h).empty());
  CHECK_THROWS_AS(gi::npar(2, GateKind::u1), qshor::param_error);
}

TEST_CASE("controlled_powers wires readout controls top-down") {
  const auto f = [](u32 i) { return GateCircuit{gi::g_x(i)}; };
  const GateCircuit got = gi::controlled_powers(f, 2, 4);
  const GateCircuit want = {gi::g_cx(3, 0), gi::g_cx(2, 1)};
  CHECK(gi::equal_gates(got, want));
  CHECK(gi::controlled_powers(f, 0, 4).empty());
}

TEST_CASE("qpe reads exact eigenphases off a u1 target") {
  struct Case {
    u32 k;
    u64 numerator;  // phase = numerator / 2^k
  };
  for (const Case tc : {Case{2, 1}, Case{3, 5}, Case{3, 0}, Case{4, 9}}) {
    const double theta =
        static_cast<double>(tc.numerator) / static_cast<double>(1ULL << tc.k);
    const auto f = [&](u32 i) {
      return GateCircuit{gi::g_u1(2.0 * M_PI * theta * static_cast<double>(1ULL << i), 0)};
    };
    const GateCircuit circ = gi::qpe(tc.k, 1, f);
    // Target wire k starts in |1>, the u1 eigenstate with eigenphase theta.
    const dense::Vec psi = dense::run(dense::basis(tc.k + 1, 1ULL << tc.k), circ);
    CHECK(readout_prob(psi, tc.k, tc.numerator) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("shor_params frozen wire budgets") {
  const gi::ShorParams p37 = gi::shor_params(3, 7);
  CHECK(p37.m == 6);
  CHECK(p37.n == 3);
  CHECK(p37.s == 20);
  CHECK(p37.total == 29);
  for (u64 a : {2ULL, 4ULL, 7ULL, 8ULL, 11ULL, 13ULL, 14ULL}) {
    const gi::ShorParams p = gi::shor_params(a, 15);
    CHECK(p.m == 8);
    CHECK(p.n == 4);
    CHECK(p.s == 23);
    CHECK(p.total == 35);
  }
  const gi::ShorParams p23 = gi::shor_params(2, 3);
  CHECK(p23.total == 23);
  CHECK_THROWS_AS(gi::shor_params(1, 7), qshor::param_error);
  CHECK_THROWS_AS(gi::shor_params(3, 3), qshor::param_error);
  CHECK_THROWS_AS(gi::shor_params(3, 15), qshor::param_error);  // shared factor
}

TEST_CASE("shor_circuit structure and closed-form gate count") {
  for (const auto [a, N] : {std::pair<u64, u64>{2, 3}, {3, 7}, {5, 7}, {7, 15}, {4, 15},
                            {5, 21}, {11, 35}}) {
    const gi::ShorCircuit sc = gi::shor_circuit(a, N);
    const gi::ShorParams p = gi::shor_params(a, N);
    CHECK(sc.params.total == p.total);
    REQUIRE(!sc.gates.empty());
    // Work register preparation: X on the lowest work wire.
    CHECK(sc.gates[0].kind == GateKind::x);
    CHECK(sc.gates[0].q[0] == p.m);
    for (const auto& g : sc.gates)
      for (int j = 0; j < g.nq; ++j) REQUIRE(g.q[j] < p.total);
    CHECK(gi::gate_count(sc.gates) == sc.gates.size());
    CHECK(gi::shor_gate_count(a, N) == gi::gate_count(sc.gates));
    CHECK(gi::shor_gate_count(a, N) <= gi::gate_count_bound(p.n, p.m));
  }
}

TEST_CASE("gate_count_bound frozen value and monotone growth") {
  CHECK(gi::gate_count_bound(3, 6) == 35244);
  CHECK(gi::gate_count_bound(3, 6) ==
        (212 * 3 * 3 + 975 * 3 + 1031) * 6 + 4 * 6 + 6 * 6);
  CHECK(gi::gate_count_bound(4, 8) > gi::gate_count_bound(3, 6));
}
