#include "../vendor/doctest.h"

#include <cstdint>
#include <numeric>
#include <vector>

#include "qshor/errors.hpp"
#include "qshor/rcir.hpp"
#include "qshor/revarith.hpp"

namespace rc = qshor::rcir;
namespace rv = qshor::revarith;
using rv::u32;
using rv::u64;

namespace {

void set_wires(rc::BitRegister& reg, const std::vector<u32>& wires, u64 value) {
  for (std::size_t i = 0; i < wires.size(); ++i) reg[wires[i]] = (value >> i) & 1;
}

u64 get_wires(const rc::BitRegister& reg, const std::vector<u32>& wires) {
  u64 v = 0;
  for (std::size_t i = 0; i < wires.size(); ++i) v |= static_cast<u64>(reg[wires[i]]) << i;
  return v;
}

// Layout with parking wires appended, as mm() requires.
rv::ArithLayout mm_layout(u32 w) {
  rv::ArithLayout L = rv::basic_layout(w);
  for (u32 i = 0; i + 2 < w; ++i) L.parks.push_back(L.total + i);
  L.total += w >= 2 ? w - 2 : 0;
  return L;
}

}  // namespace

TEST_CASE("maj computes carry majorities in place") {
  // Wires (0, 1, 2) hold (a, b, c); afterwards (a^c, b^c, MAJ(a, b, c)).
  const rc::RevPtr m = rv::maj(0, 1, 2);
  for (u64 in = 0; in < 8; ++in) {
    const u64 a = in & 1, b = (in >> 1) & 1, c = (in >> 2) & 1;
    rc::BitRegister reg = rc::register_of_value(3, in);
    rc::eval_rcir(m, reg);
    CHECK(reg[0] == (a ^ c));
    CHECK(reg[1] == (b ^ c));
    CHECK(reg[2] == ((a & b) | (a & c) | (b & c)));
  }
  // The two frozen rows: MAJ(1,0,1) -> (0,1,1) and MAJ(1,1,1) -> (0,0,1).
  rc::BitRegister reg = {1, 0, 1};
  rc::eval_rcir(m, reg);
  CHECK(reg == rc::BitRegister{0, 1, 1});
  reg = {1, 1, 1};
  rc::eval_rcir(m, reg);
  CHECK(reg == rc::BitRegister{0, 0, 1});
}

TEST_CASE("rca adds with carry-in, restoring x and carry") {
  for (u32 w = 1; w <= 4; ++w) {
    std::vector<u32> x(w), y(w);
    for (u32 i = 0; i < w; ++i) x[i] = 1 + i, y[i] = 1 + w + i;
    const rc::RevPtr add = rv::rca(0, x, y);
    const u32 total = 1 + 2 * w;
    REQUIRE(rc::well_typed(add, total));
    for (u64 carry = 0; carry <= 1; ++carry) {
      for (u64 xv = 0; xv < (1ULL << w); ++xv) {
        for (u64 yv = 0; yv < (1ULL << w); ++yv) {
          rc::BitRegister reg(total, 0);
          reg[0] = static_cast<std::uint8_t>(carry);
          set_wires(reg, x, xv);
          set_wires(reg, y, yv);
          rc::eval_rcir(add, reg);
          CHECK(reg[0] == carry);
          CHECK(get_wires(reg, x) == xv);
          CHECK(get_wires(reg, y) == ((xv + yv + carry) & ((1ULL << w) - 1)));
        }
      }
    }
  }
}

TEST_CASE("sub subtracts modulo 2^w, restoring x and the helper flag") {
  for (u32 w = 1; w <= 4; ++w) {
    std::vector<u32> x(w), y(w);
    for (u32 i = 0; i < w; ++i) x[i] = 1 + i, y[i] = 1 + w + i;
    const rc::RevPtr s = rv::sub(0, x, y);
    const u32 total = 1 + 2 * w;
    REQUIRE(rc::well_typed(s, total));
    for (u64 xv = 0; xv < (1ULL << w); ++xv) {
      for (u64 yv = 0; yv < (1ULL << w); ++yv) {
        rc::BitRegister reg(total, 0);
        set_wires(reg, x, xv);
        set_wires(reg, y, yv);
        rc::eval_rcir(s, reg);
        CHECK(reg[0] == 0);
        CHECK(get_wires(reg, x) == xv);
        CHECK(get_wires(reg, y) == ((yv - xv) & ((1ULL << w) - 1)));
      }
    }
  }
}

TEST_CASE("cmp xors the comparison into the flag and restores everything else") {
  for (u32 w = 1; w <= 4; ++w) {
    std::vector<u32> x(w), y(w);
    for (u32 i = 0; i < w; ++i) x[i] = 2 + i, y[i] = 2 + w + i;
    const rc::RevPtr c = rv::cmp(0, 1, x, y);
    const u32 total = 2 + 2 * w;
    REQUIRE(rc::well_typed(c, total));
    for (u64 flag = 0; flag <= 1; ++flag) {
      for (u64 xv = 0; xv < (1ULL << w); ++xv) {
        for (u64 yv = 0; yv < (1ULL << w); ++yv) {
          rc::BitRegister reg(total, 0);
          reg[0] = static_cast<std::uint8_t>(flag);
          set_wires(reg, x, xv);
          set_wires(reg, y, yv);
          rc::eval_rcir(c, reg);
          CHECK(reg[0] == (flag ^ (xv >= yv ? 1 : 0)));
          CHECK(reg[1] == 0);
          CHECK(get_wires(reg, x) == xv);
          CHECK(get_wires(reg, y) == yv);
        }
      }
    }
  }
}

TEST_CASE("swp exchanges registers and sft rotates left") {
  std::vector<u32> a{0, 1, 2}, b{3, 4, 5};
  const rc::RevPtr s = rv::swp(a, b);
  for (u64 av = 0; av < 8; ++av) {
    for (u64 bv = 0; bv < 8; ++bv) {
      rc::BitRegister reg(6, 0);
      set_wires(reg, a, av);
      set_wires(reg, b, bv);
      rc::eval_rcir(s, reg);
      CHECK(get_wires(reg, a) == bv);
      CHECK(get_wires(reg, b) == av);
    }
  }
  for (u32 w = 2; w <= 5; ++w) {
    std::vector<u32> r(w);
    for (u32 i = 0; i < w; ++i) r[i] = i;
    const rc::RevPtr rot = rv::sft(r);
    for (u64 v = 0; v < (1ULL << w); ++v) {
      rc::BitRegister reg(w, 0);
      set_wires(reg, r, v);
      rc::eval_rcir(rot, reg);
      const u64 want = ((v << 1) | (v >> (w - 1))) & ((1ULL << w) - 1);
      CHECK(get_wires(reg, r) == want);
    }
  }
}

TEST_CASE("mod_add accumulates modulo the loaded modulus") {
  for (u32 w = 3; w <= 5; ++w) {
    const rv::ArithLayout L = rv::basic_layout(w);
    const rc::RevPtr madd = rv::mod_add(L);
    REQUIRE(rc::well_typed(madd, L.total));
    for (u64 N = 1; N < (1ULL << (w - 1)); ++N) {
      for (u64 x = 0; x < N; ++x) {
        for (u64 y = 0; y < N; ++y) {
          rc::BitRegister reg(L.total, 0);
          set_wires(reg, L.reg_m, N);
          set_wires(reg, L.reg_x, x);
          set_wires(reg, L.reg_y, y);
          rc::eval_rcir(madd, reg);
          CHECK(reg[L.flag0] == 0);
          CHECK(reg[L.flag1] == 0);
          CHECK(get_wires(reg, L.reg_m) == N);
          CHECK(get_wires(reg, L.reg_x) == x);
          CHECK(get_wires(reg, L.reg_y) == (x + y) % N);
        }
      }
    }
  }
  // Frozen row: (5 + 4) mod 7 = 2 at width 4.
  const rv::ArithLayout L = rv::basic_layout(4);
  rc::BitRegister reg(L.total, 0);
  set_wires(reg, L.reg_m, 7);
  set_wires(reg, L.reg_x, 5);
  set_wires(reg, L.reg_y, 4);
  rc::eval_rcir(rv::mod_add(L), reg);
  CHECK(get_wires(reg, L.reg_y) == 2);
}

TEST_CASE("mod_sft doubles x and leaves the overflow flag dirty") {
  for (u32 w = 3; w <= 5; ++w) {
    const rv::ArithLayout L = rv::basic_layout(w);
    const rc::RevPtr msft = rv::mod_sft(L);
    REQUIRE(rc::well_typed(msft, L.total));
    for (u64 N = 1; N < (1ULL << (w - 1)); ++N) {
      for (u64 x = 0; x < N; ++x) {
        rc::BitRegister reg(L.total, 0);
        set_wires(reg, L.reg_m, N);
        set_wires(reg, L.reg_x, x);
        rc::eval_rcir(msft, reg);
        CHECK(reg[L.flag0] == 0);
        CHECK(reg[L.flag1] == (2 * x >= N ? 1 : 0));
        CHECK(get_wires(reg, L.reg_m) == N);
        CHECK(get_wires(reg, L.reg_x) == (2 * x) % N);
        // Replaying it backwards with the dirty flag restores x exactly.
        rc::eval_rcir(rc::reverse(msft), reg);
        CHECK(get_wires(reg, L.reg_x) == x);
        CHECK(reg[L.flag1] == 0);
      }
    }
  }
}

TEST_CASE("mm multiply-accumulates and restores x, modulus, flags, and parks") {
  for (u32 w = 3; w <= 4; ++w) {
    const rv::ArithLayout L = mm_layout(w);
    for (u64 N = 2; N < (1ULL << (w - 1)); ++N) {
      for (u64 a = 1; a < N; ++a) {
        const rc::RevPtr prog = rv::mm(a, N, L);
        REQUIRE(rc::well_typed(prog, L.total));
        for (u64 x = 0; x < N; ++x) {
          for (u64 y = 0; y < N; ++y) {
            // mm loads and unloads the modulus itself; reg_m starts clear.
            rc::BitRegister reg(L.total, 0);
            set_wires(reg, L.reg_x, x);
            set_wires(reg, L.reg_y, y);
            rc::eval_rcir(prog, reg);
            CHECK(get_wires(reg, L.reg_y) == (y + a * x) % N);
            CHECK(get_wires(reg, L.reg_x) == x);
            CHECK(get_wires(reg, L.reg_m) == 0);
            CHECK(reg[L.flag0] == 0);
            CHECK(reg[L.flag1] == 0);
            CHECK(get_wires(reg, L.parks) == 0);
          }
        }
      }
    }
  }
}

TEST_CASE("mm frozen rows") {
  const rv::ArithLayout L = mm_layout(4);
  // 3 * 4 mod 7 = 5.
  rc::BitRegister reg(L.total, 0);
  set_wires(reg, L.reg_x, 4);
  rc::eval_rcir(rv::mm(3, 7, L), reg);
  CHECK(get_wires(reg, L.reg_y) == 5);
  // 5 * 5 mod 6 = 1 (an even modulus exercises the parked shift flags).
  reg.assign(L.total, 0);
  set_wires(reg, L.reg_x, 5);
  rc::eval_rcir(rv::mm(5, 6, L), reg);
  CHECK(get_wires(reg, L.reg_y) == 1);
  CHECK(get_wires(reg, L.reg_x) == 5);
}

TEST_CASE("mm and imm reject bad parameters") {
  const rv::ArithLayout L = mm_layout(4);
  CHECK_THROWS_AS(rv::mm(0, 7, L), qshor::param_error);
  CHECK_THROWS_AS(rv::mm(7, 7, L), qshor::param_error);
  CHECK_THROWS_AS(rv::mm(1, 8, L), qshor::param_error);  // modulus too wide
  CHECK_THROWS_AS(rv::mm(1, 7, rv::basic_layout(4)), qshor::param_error);  // no parks
  CHECK_THROWS_AS(rv::basic_layout(0), qshor::param_error);
  CHECK_THROWS_AS(rv::imm_layout(1), qshor::param_error);
  CHECK_THROWS_AS(rv::imm(0, 7), qshor::param_error);
  CHECK_THROWS_AS(rv::imm(7, 7), qshor::param_error);
  CHECK_THROWS_AS(rv::imm(2, 4), qshor::param_error);  // gcd(2, 4) > 1
  CHECK_THROWS_AS(rv::imm(3, 1), qshor::param_error);
}

TEST_CASE("imm_layout spans disjoint registers inside the fixed budget") {
  for (u32 n = 2; n <= 8; ++n) {
    const rv::ArithLayout L = rv::imm_layout(n);
    CHECK(L.width == n + 1);
    CHECK(L.total == 4 * n + 11);
    CHECK(L.parks.size() == n - 1);
    std::vector<bool> seen(L.total, false);
    const auto claim = [&](u32 wire) {
      REQUIRE(wire < L.total);
      CHECK(!seen[wire]);
      seen[wire] = true;
    };
    for (const u32 w : L.reg_m) claim(w);
    for (const u32 w : L.reg_x) claim(w);
    for (const u32 w : L.reg_y) claim(w);
    for (const u32 w : L.parks) claim(w);
    claim(L.flag0);
    claim(L.flag1);
  }
}

TEST_CASE("imm maps |x>|0> to |a x mod N>|0> for every coprime multiplier") {
  for (u64 N = 2; N <= 21; ++N) {
    for (u64 a = 1; a < N; ++a) {
      if (std::gcd(a, N) != 1) continue;
      const rv::ImmCircuit circ = rv::imm(a, N);
      REQUIRE(rc::well_typed(circ.prog, circ.width));
      CHECK(circ.width == 4 * circ.n + 11);
      CHECK(N < (1ULL << circ.n));
      for (u64 x = 0; x < N; ++x) {
        rc::BitRegister reg(circ.width, 0);
        for (u32 i = 0; i < circ.n; ++i) reg[i] = (x >> i) & 1;
        rc::eval_rcir(circ.prog, reg);
        u64 out = 0;
        for (u32 i = 0; i < circ.n; ++i) out |= static_cast<u64>(reg[i]) << i;
        CHECK(out == a * x % N);
        // Every ancilla above the work register must come back clean.
        for (u32 i = circ.n; i < circ.width; ++i) CHECK(reg[i] == 0);
      }
    }
  }
}

TEST_CASE("imm frozen rows") {
  const auto eval_imm = [](u64 a, u64 N, u64 x) {
    const rv::ImmCircuit circ = rv::imm(a, N);
    rc::BitRegister reg(circ.width, 0);
    for (u32 i = 0; i < circ.n; ++i) reg[i] = (x >> i) & 1;
    rc::eval_rcir(circ.prog, reg);
    u64 out = 0;
    for (u32 i = 0; i < circ.n; ++i) out |= static_cast<u64>(reg[i]) << i;
    return out;
  };
  CHECK(eval_imm(3, 7, 2) == 6);
  CHECK(eval_imm(4, 15, 7) == 13);
  CHECK(eval_imm(1, 7, 3) == 3);
}

TEST_CASE("imm composes like modular multiplication") {
  // Running imm(a) then imm(b) equals imm(a b mod N) on the work register.
  const u64 N = 15;
  for (const auto [a, b] : {std::pair<u64, u64>{2, 7}, {4, 13}, {8, 11}}) {
    const rv::ImmCircuit ca = rv::imm(a, N);
    const rv::ImmCircuit cb = rv::imm(b, N);
    const rv::ImmCircuit cab = rv::imm(a * b % N, N);
    REQUIRE(ca.width == cb.width);
    for (u64 x = 0; x < N; ++x) {
      rc::BitRegister reg(ca.width, 0);
      for (u32 i = 0; i < ca.n; ++i) reg[i] = (x >> i) & 1;
      rc::eval_rcir(ca.prog, reg);
      rc::eval_rcir(cb.prog, reg);
      rc::BitRegister want(cab.width, 0);
      for (u32 i = 0; i < cab.n; ++i) want[i] = (x >> i) & 1;
      rc::eval_rcir(cab.prog, want);
      CHECK(reg == want);
    }
  }
}
