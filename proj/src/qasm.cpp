#include "qshor/qasm.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qshor/errors.hpp"

namespace qshor::qasm {

using gateir::Gate;
using gateir::GateCircuit;
using gateir::GateKind;
using u64 = std::uint64_t;

namespace {

const char* gate_name(GateKind k) {
  switch (k) {
    case GateKind::x: return "x";
    case GateKind::h: return "h";
    case GateKind::u1: return "u1";
    case GateKind::u2: return "u2";
    case GateKind::u3: return "u3";
    case GateKind::cu1: return "cu1";
    case GateKind::swap: return "swap";
    case GateKind::cswap: return "cswap";
    case GateKind::cx: return "cx";
    case GateKind::ccx: return "ccx";
    case GateKind::c3x: return "c3x";
    case GateKind::c4x: return "c4x";
  }
  return "?";
}

void append_gate_line(std::string& out, const Gate& g,
                      const std::function<std::string(u32)>& wire_name) {
  out += gate_name(g.kind);
  if (g.np > 0) {
    out += '(';
    for (int i = 0; i < g.np; ++i) {
      if (i) out += ',';
      out += format_angle(g.p[i]);
    }
    out += ')';
  }
  out += ' ';
  for (int i = 0; i < g.nq; ++i) {
    if (i) out += ',';
    out += wire_name(g.q[i]);
  }
  out += ";\n";
}

// k-controlled X over wires 0..k-1 with target k, using only h/u1/cx: an H
// sandwich around the fully-controlled phase pi, which expands over every
// nonempty subset of the k+1 wires as u1(+-pi/2^k) on the subset's parity
// (computed and uncomputed by cx chains).
GateCircuit ckx_decomposition(u32 k) {
  GateCircuit c;
  const u32 target = k;
  c.push_back(gateir::g_h(target));
  const double unit = M_PI / static_cast<double>(1u << k);
  for (u32 mask = 1; mask < (1u << (k + 1)); ++mask) {
    std::vector<u32> wires;
    for (u32 w = 0; w <= k; ++w)
      if (mask & (1u << w)) wires.push_back(w);
    const u32 head = wires.back();
    for (std::size_t i = 0; i + 1 < wires.size(); ++i)
      c.push_back(gateir::g_cx(wires[i], head));
    const double sign = (wires.size() % 2 == 1) ? 1.0 : -1.0;
    c.push_back(gateir::g_u1(sign * unit, head));
    for (std::size_t i = wires.size() - 1; i-- > 0;)
      c.push_back(gateir::g_cx(wires[i], head));
  }
  c.push_back(gateir::g_h(target));
  return c;
}

void append_compat_def(std::string& out, const char* name, u32 k) {
  static const char* args[] = {"a", "b", "c", "d", "e"};
  out += "gate ";
  out += name;
  out += ' ';
  for (u32 i = 0; i <= k; ++i) {
    if (i) out += ',';
    out += args[i];
  }
  out += "\n{\n";
  for (const Gate& g : ckx_decomposition(k)) {
    out += "  ";
    append_gate_line(out, g, [&](u32 w) { return std::string(args[w]); });
  }
  out += "}\n";
}

}  // namespace

GateCircuit c3x_decomposition() { return ckx_decomposition(3); }
GateCircuit c4x_decomposition() { return ckx_decomposition(4); }

std::string format_angle(double x) {
  if (x == 0.0) return "0";
  const double ax = std::fabs(x);
  const bool neg = x < 0.0;
  // Exact rational multiples of pi, smallest denominator first. The candidate
  // numerators are the two integers around ax*q/pi; equality is on the double
  // produced by the same left-associative arithmetic the parser uses.
  for (u64 q = 1; q <= 64; ++q) {
    const double p_real = ax * static_cast<double>(q) / M_PI;
    if (!(p_real >= 0.5 && p_real < 9.007199254740992e15)) continue;
    const u64 p_lo = static_cast<u64>(p_real);
    for (u64 p = p_lo; p <= p_lo + 1; ++p) {
      if (p < 1) continue;
      if ((static_cast<double>(p) * M_PI) / static_cast<double>(q) != ax) continue;
      std::string s = neg ? "-" : "";
      if (p != 1) {
        s += std::to_string(p);
        s += "*pi";
      } else {
        s += "pi";
      }
      if (q != 1) {
        s += '/';
        s += std::to_string(q);
      }
      return s;
    }
  }
  // Shortest decimal that round-trips to the same double (locale-independent).
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  std::string s(buf, res.ptr);
  // Keep the token inside the OpenQASM real grammar: a mantissa without a dot
  // (e.g. "1e-05") gains ".0" before the exponent.
  const auto epos = s.find_first_of("eE");
  if (s.find('.') == std::string::npos) {
    if (epos == std::string::npos)
      s += ".0";
    else
      s.insert(epos, ".0");
  }
  return s;
}

std::string emit(const GateCircuit& c, u32 num_qubits,
                 const std::optional<MeasureSpec>& measure, bool compat) {
  for (const Gate& g : c)
    for (int i = 0; i < g.nq; ++i)
      if (g.q[i] >= num_qubits)
        throw param_error("emit: gate touches a wire outside the register");
  u32 measured = 0;
  if (measure) {
    if (measure->offset + measure->count > num_qubits)
      throw param_error("emit: measured range exceeds the register");
    measured = measure->count;
  }

  std::string out;
  out += "OPENQASM 2.0;\n";
  out += "include \"qelib1.inc\";\n";
  if (compat) {
    append_compat_def(out, "c3x", 3);
    append_compat_def(out, "c4x", 4);
  }
  out += "qreg q[" + std::to_string(num_qubits) + "];\n";
  // Zero-size classical registers are not legal, so an unmeasured program
  // still declares one classical bit.
  out += "creg c[" + std::to_string(measured > 0 ? measured : 1) + "];\n";
  for (const Gate& g : c)
    append_gate_line(out, g, [](u32 w) { return "q[" + std::to_string(w) + "]"; });
  if (measure)
    for (u32 j = 0; j < measure->count; ++j)
      out += "measure q[" + std::to_string(measure->offset + j) + "] -> c[" +
             std::to_string(j) + "];\n";
  return out;
}

// ---------------------------------------------------------------------------
// Parser for the emitted subset.
// ---------------------------------------------------------------------------

namespace {

enum class Tok {
  ident, number, string, lparen, rparen, lbracket, rbracket, lbrace, rbrace,
  comma, semicolon, arrow, star, slash, minus, plus, end
};

struct Token {
  Tok kind = Tok::end;
  std::string_view text;
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    // Skip whitespace and // comments.
    while (pos_ < s_.size()) {
      const char ch = s_[pos_];
      if (ch == ' ' || ch == '\t' || ch == '\r') {
        step();
      } else if (ch == '\n') {
        step();
      } else if (ch == '/' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '/') {
        while (pos_ < s_.size() && s_[pos_] != '\n') step();
      } else {
        break;
      }
    }
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= s_.size()) {
      tok_.kind = Tok::end;
      tok_.text = {};
      return;
    }
    const std::size_t start = pos_;
    const char ch = s_[pos_];
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        step();
      tok_.kind = Tok::ident;
    } else if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      bool seen_e = false;
      while (pos_ < s_.size()) {
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
          step();
        } else if ((c == 'e' || c == 'E') && !seen_e) {
          seen_e = true;
          step();
          if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) step();
        } else {
          break;
        }
      }
      tok_.kind = Tok::number;
    } else if (ch == '"') {
      step();
      while (pos_ < s_.size() && s_[pos_] != '"') step();
      if (pos_ >= s_.size()) throw parse_error("unterminated string", tok_.line, tok_.col);
      step();
      tok_.kind = Tok::string;
    } else {
      step();
      switch (ch) {
        case '(': tok_.kind = Tok::lparen; break;
        case ')': tok_.kind = Tok::rparen; break;
        case '[': tok_.kind = Tok::lbracket; break;
        case ']': tok_.kind = Tok::rbracket; break;
        case '{': tok_.kind = Tok::lbrace; break;
        case '}': tok_.kind = Tok::rbrace; break;
        case ',': tok_.kind = Tok::comma; break;
        case ';': tok_.kind = Tok::semicolon; break;
        case '*': tok_.kind = Tok::star; break;
        case '/': tok_.kind = Tok::slash; break;
        case '+': tok_.kind = Tok::plus; break;
        case '-':
          if (pos_ < s_.size() && s_[pos_] == '>') {
            step();
            tok_.kind = Tok::arrow;
          } else {
            tok_.kind = Tok::minus;
          }
          break;
        default:
          throw parse_error(std::string("unexpected character '") + ch + "'",
                            tok_.line, tok_.col);
      }
    }
    tok_.text = s_.substr(start, pos_ - start);
  }

  void step() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

[[noreturn]] void fail(const Token& t, const std::string& msg) {
  throw parse_error(msg, t.line, t.col);
}

class Parser {
 public:
  explicit Parser(std::string_view s) : lex_(s) {}

  ParsedProgram run() {
    expect_ident("OPENQASM");
    const Token ver = expect(Tok::number, "version number");
    if (ver.text != "2.0") fail(ver, "unsupported version '" + std::string(ver.text) + "'");
    expect(Tok::semicolon, "';'");
    expect_ident("include");
    const Token inc = expect(Tok::string, "include path");
    if (inc.text != "\"qelib1.inc\"") fail(inc, "expected include \"qelib1.inc\"");
    expect(Tok::semicolon, "';'");

    while (lex_.peek().kind != Tok::end) statement();

    if (prog_.num_qubits == 0)
      throw parse_error("program declares no quantum register", 1, 1);
    return std::move(prog_);
  }

 private:
  void statement() {
    const Token head = expect(Tok::ident, "statement");
    const std::string_view name = head.text;
    if (name == "gate") {
      skip_gate_def();
    } else if (name == "qreg") {
      declare_register(head, true);
    } else if (name == "creg") {
      declare_register(head, false);
    } else if (name == "measure") {
      measure_statement();
    } else {
      gate_statement(head);
    }
  }

  // The compat preamble defines gates this parser never needs to expand
  // (applications must use the fixed gate set), so definitions are shape
  // checked and skipped.
  void skip_gate_def() {
    expect(Tok::ident, "gate name");
    if (lex_.peek().kind == Tok::lparen) {  // parameter list
      lex_.take();
      while (lex_.peek().kind == Tok::ident) {
        lex_.take();
        if (lex_.peek().kind == Tok::comma) lex_.take();
      }
      expect(Tok::rparen, "')'");
    }
    expect(Tok::ident, "gate argument");
    while (lex_.peek().kind == Tok::comma) {
      lex_.take();
      expect(Tok::ident, "gate argument");
    }
    const Token open = expect(Tok::lbrace, "'{'");
    for (;;) {
      const Token t = lex_.take();
      if (t.kind == Tok::rbrace) break;
      if (t.kind == Tok::end) fail(open, "unterminated gate body");
      if (t.kind == Tok::lbrace) fail(t, "nested gate body");
    }
  }

  void declare_register(const Token& head, bool quantum) {
    const Token name = expect(Tok::ident, "register name");
    expect(Tok::lbracket, "'['");
    const Token size_tok = expect(Tok::number, "register size");
    const u64 size = parse_index(size_tok);
    expect(Tok::rbracket, "']'");
    expect(Tok::semicolon, "';'");
    if (size == 0) fail(size_tok, "zero-size register");
    auto& slot = quantum ? qreg_ : creg_;
    if (!slot.first.empty()) fail(head, quantum ? "second quantum register"
                                                : "second classical register");
    if (size > (quantum ? 63u : 1u << 20))
      fail(size_tok, "register too large");
    slot = {std::string(name.text), size};
    if (quantum)
      prog_.num_qubits = static_cast<u32>(size);
    else
      prog_.creg_size = static_cast<u32>(size);
  }

  void measure_statement() {
    const auto [qname, qidx, qtok] = reference();
    if (qname != qreg_.first) fail(qtok, "unknown quantum register '" + qname + "'");
    if (qidx >= qreg_.second) fail(qtok, "qubit index out of range");
    expect(Tok::arrow, "'->'");
    const auto [cname, cidx, ctok] = reference();
    if (cname != creg_.first) fail(ctok, "unknown classical register '" + cname + "'");
    if (cidx >= creg_.second) fail(ctok, "classical index out of range");
    expect(Tok::semicolon, "';'");
    prog_.measurements.emplace_back(static_cast<u32>(qidx), static_cast<u32>(cidx));
  }

  void gate_statement(const Token& head) {
    static const std::map<std::string_view, std::pair<GateKind, std::pair<int, int>>>
        kinds = {
            {"x", {GateKind::x, {1, 0}}},       {"h", {GateKind::h, {1, 0}}},
            {"u1", {GateKind::u1, {1, 1}}},     {"u2", {GateKind::u2, {1, 2}}},
            {"u3", {GateKind::u3, {1, 3}}},     {"cu1", {GateKind::cu1, {2, 1}}},
            {"swap", {GateKind::swap, {2, 0}}}, {"cswap", {GateKind::cswap, {3, 0}}},
            {"cx", {GateKind::cx, {2, 0}}},     {"ccx", {GateKind::ccx, {3, 0}}},
            {"c3x", {GateKind::c3x, {4, 0}}},   {"c4x", {GateKind::c4x, {5, 0}}},
        };
    const auto it = kinds.find(head.text);
    if (it == kinds.end())
      fail(head, "unknown gate '" + std::string(head.text) + "'");
    const auto [kind, shape] = it->second;
    const auto [nq, np] = shape;

    Gate g;
    g.kind = kind;
    g.nq = static_cast<std::uint8_t>(nq);
    g.np = static_cast<std::uint8_t>(np);

    if (np > 0) {
      expect(Tok::lparen, "'('");
      for (int i = 0; i < np; ++i) {
        if (i) expect(Tok::comma, "','");
        g.p[i] = angle_expr();
      }
      expect(Tok::rparen, "')'");
    } else if (lex_.peek().kind == Tok::lparen) {
      fail(lex_.peek(), "gate takes no parameters");
    }

    for (int i = 0; i < nq; ++i) {
      if (i) expect(Tok::comma, "','");
      const auto [name, idx, tok] = reference();
      if (name != qreg_.first) fail(tok, "unknown quantum register '" + name + "'");
      if (idx >= qreg_.second) fail(tok, "qubit index out of range");
      g.q[i] = static_cast<u32>(idx);
      for (int j = 0; j < i; ++j)
        if (g.q[j] == g.q[i]) fail(tok, "repeated qubit argument");
    }
    expect(Tok::semicolon, "';'");
    prog_.gates.push_back(g);
  }

  // product := ['-'] term (('*' | '/') term)*, evaluated left to right with
  // the unary minus applied to the leading term — the same arithmetic emit
  // uses, so symbolic angles round-trip bit for bit.
  double angle_expr() {
    bool neg = false;
    if (lex_.peek().kind == Tok::minus) {
      lex_.take();
      neg = true;
    }
    double value = angle_term();
    if (neg) value = -value;
    for (;;) {
      const Tok k = lex_.peek().kind;
      if (k == Tok::star) {
        lex_.take();
        value *= angle_term();
      } else if (k == Tok::slash) {
        lex_.take();
        value /= angle_term();
      } else {
        break;
      }
    }
    return value;
  }

  double angle_term() {
    const Token t = lex_.take();
    if (t.kind == Tok::ident && t.text == "pi") return M_PI;
    if (t.kind == Tok::number) {
      double v = 0;
      const auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
      if (res.ec != std::errc{} || res.ptr != t.text.data() + t.text.size())
        fail(t, "malformed number '" + std::string(t.text) + "'");
      return v;
    }
    fail(t, "expected a number or pi");
  }

  struct Ref {
    std::string name;
    u64 index;
    Token tok;
  };

  Ref reference() {
    const Token name = expect(Tok::ident, "register reference");
    expect(Tok::lbracket, "'['");
    const Token idx = expect(Tok::number, "index");
    const u64 i = parse_index(idx);
    expect(Tok::rbracket, "']'");
    return {std::string(name.text), i, name};
  }

  u64 parse_index(const Token& t) {
    u64 v = 0;
    const auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (res.ec != std::errc{} || res.ptr != t.text.data() + t.text.size())
      fail(t, "expected a nonnegative integer");
    return v;
  }

  Token expect(Tok kind, const char* what) {
    const Token t = lex_.take();
    if (t.kind != kind) fail(t, std::string("expected ") + what);
    return t;
  }

  void expect_ident(const char* word) {
    const Token t = lex_.take();
    if (t.kind != Tok::ident || t.text != word)
      fail(t, std::string("expected '") + word + "'");
  }

  Lexer lex_;
  ParsedProgram prog_;
  std::pair<std::string, u64> qreg_;
  std::pair<std::string, u64> creg_;
};

}  // namespace

ParsedProgram parse(std::string_view text) { return Parser(text).run(); }

}  // namespace qshor::qasm
