#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qshor/gateir.hpp"

namespace qshor::qasm {

using u32 = std::uint32_t;

// Measurement of wires [offset, offset + count) into classical bits 0..count-1.
struct MeasureSpec {
  u32 offset = 0;
  u32 count = 0;
};

// Render OpenQASM 2.0. Output is byte-deterministic: fixed header, one gate per
// line, angles printed as exact multiples of pi when the double is exactly
// p*pi/q (q <= 64), shortest round-trip decimals otherwise. When compat is set,
// portable definitions of c3x/c4x (built from cx/ccx/cu1) are emitted after the
// include, for toolchains whose qelib1.inc lacks them.
std::string emit(const gateir::GateCircuit& c, u32 num_qubits,
                 const std::optional<MeasureSpec>& measure = std::nullopt,
                 bool compat = false);

struct ParsedProgram {
  u32 num_qubits = 0;
  u32 creg_size = 0;
  gateir::GateCircuit gates;
  std::vector<std::pair<u32, u32>> measurements;  // (wire, classical bit)
};

// Parse the emitted subset (header, one quantum and one classical register,
// the twelve gate names, measure statements). Gate-definition blocks from the
// compat preamble are checked for shape and skipped. Throws parse_error with
// 1-based line/column on malformed input.
ParsedProgram parse(std::string_view text);

// The compat preamble's gate bodies as circuits over wires 0..k (controls
// first, target last); exposed so tests can check them against dense matrices.
gateir::GateCircuit c3x_decomposition();
gateir::GateCircuit c4x_decomposition();

// Deterministic angle rendering used by emit (exposed for tests).
std::string format_angle(double x);

}  // namespace qshor::qasm
