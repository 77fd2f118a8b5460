#include "qshor/rcir.hpp"

#include <functional>
#include <unordered_map>
#include <utility>

#include "qshor/errors.hpp"

namespace qshor::rcir {

namespace {

RevPtr make(Rev r) { return std::make_shared<const Rev>(std::move(r)); }

}  // namespace

RevPtr skip() {
  static const RevPtr s = make({Rev::Kind::skip, 0, 0, nullptr, nullptr, nullptr});
  return s;
}

RevPtr flip(u32 target) { return make({Rev::Kind::flip, target, 0, nullptr, nullptr, nullptr}); }

RevPtr ctrl(u32 wire, RevPtr body) {
  return make({Rev::Kind::ctrl, wire, 0, std::move(body), nullptr, nullptr});
}

RevPtr swap_bits(u32 m, u32 n) {
  return make({Rev::Kind::swap_bits, m, n, nullptr, nullptr, nullptr});
}

RevPtr seq(RevPtr a, RevPtr b) {
  return make({Rev::Kind::seq, 0, 0, nullptr, std::move(a), std::move(b)});
}

RevPtr seq_all(const std::vector<RevPtr>& parts) {
  // Balanced fold keeps recursion depth logarithmic in the program length.
  std::function<RevPtr(size_t, size_t)> build = [&](size_t lo, size_t hi) -> RevPtr {
    if (lo == hi) return skip();
    if (hi - lo == 1) return parts[lo];
    size_t mid = lo + (hi - lo) / 2;
    return seq(build(lo, mid), build(mid, hi));
  };
  return build(0, parts.size());
}

BitRegister register_of_value(u32 width, u64 value) {
  BitRegister reg(width, 0);
  for (u32 i = 0; i < width && i < 64; ++i) reg[i] = (value >> i) & 1;
  return reg;
}

u64 value_of_register(const BitRegister& reg) {
  u64 v = 0;
  for (size_t i = 0; i < reg.size(); ++i)
    if (reg[i]) v |= 1ULL << i;
  return v;
}

void eval_rcir(const RevPtr& r, BitRegister& reg) {
  switch (r->kind) {
    case Rev::Kind::skip:
      return;
    case Rev::Kind::flip:
      reg[r->a] ^= 1;
      return;
    case Rev::Kind::swap_bits:
      std::swap(reg[r->a], reg[r->b]);
      return;
    case Rev::Kind::ctrl:
      if (reg[r->a]) eval_rcir(r->body, reg);
      return;
    case Rev::Kind::seq:
      eval_rcir(r->first, reg);
      eval_rcir(r->second, reg);
      return;
  }
}

namespace {

RevPtr reverse_memo(const RevPtr& r, std::unordered_map<const Rev*, RevPtr>& memo) {
  switch (r->kind) {
    case Rev::Kind::skip:
    case Rev::Kind::flip:
    case Rev::Kind::swap_bits:
      return r;  // self-inverse primitives are shared as-is
    case Rev::Kind::ctrl:
    case Rev::Kind::seq:
      break;
  }
  auto it = memo.find(r.get());
  if (it != memo.end()) return it->second;
  RevPtr out;
  if (r->kind == Rev::Kind::ctrl) {
    out = ctrl(r->a, reverse_memo(r->body, memo));
  } else {
    out = seq(reverse_memo(r->second, memo), reverse_memo(r->first, memo));
  }
  memo.emplace(r.get(), out);
  return out;
}

// Bit mask of writable wires, one u64 word per 64 wires; memoized across the
// shared subtrees so validation stays linear in the number of unique nodes.
using Mask = std::vector<u64>;

void mask_set(Mask& m, u32 bit) {
  if (m.size() <= bit / 64) m.resize(bit / 64 + 1, 0);
  m[bit / 64] |= 1ULL << (bit % 64);
}

bool mask_get(const Mask& m, u32 bit) {
  if (m.size() <= bit / 64) return false;
  return (m[bit / 64] >> (bit % 64)) & 1;
}

void mask_or(Mask& into, const Mask& from) {
  if (into.size() < from.size()) into.resize(from.size(), 0);
  for (size_t i = 0; i < from.size(); ++i) into[i] |= from[i];
}

const Mask& targets_memo(const RevPtr& r, std::unordered_map<const Rev*, Mask>& memo) {
  auto it = memo.find(r.get());
  if (it != memo.end()) return it->second;
  Mask m;
  switch (r->kind) {
    case Rev::Kind::skip:
      break;
    case Rev::Kind::flip:
      mask_set(m, r->a);
      break;
    case Rev::Kind::swap_bits:
      mask_set(m, r->a);
      mask_set(m, r->b);
      break;
    case Rev::Kind::ctrl:
      m = targets_memo(r->body, memo);
      break;
    case Rev::Kind::seq:
      m = targets_memo(r->first, memo);
      mask_or(m, targets_memo(r->second, memo));
      break;
  }
  return memo.emplace(r.get(), std::move(m)).first->second;
}

bool well_typed_memo(const RevPtr& r, u32 width,
                     std::unordered_map<const Rev*, bool>& ok,
                     std::unordered_map<const Rev*, Mask>& masks) {
  auto it = ok.find(r.get());
  if (it != ok.end()) return it->second;
  bool result = true;
  switch (r->kind) {
    case Rev::Kind::skip:
      break;
    case Rev::Kind::flip:
      result = r->a < width;
      break;
    case Rev::Kind::swap_bits:
      result = r->a < width && r->b < width && r->a != r->b;
      break;
    case Rev::Kind::ctrl:
      result = r->a < width && well_typed_memo(r->body, width, ok, masks) &&
               !mask_get(targets_memo(r->body, masks), r->a);
      break;
    case Rev::Kind::seq:
      result = well_typed_memo(r->first, width, ok, masks) &&
               well_typed_memo(r->second, width, ok, masks);
      break;
  }
  ok.emplace(r.get(), result);
  return result;
}

u64 primitive_count_memo(const RevPtr& r, std::unordered_map<const Rev*, u64>& memo) {
  switch (r->kind) {
    case Rev::Kind::skip:
      return 0;
    case Rev::Kind::flip:
    case Rev::Kind::swap_bits:
      return 1;
    default:
      break;
  }
  auto it = memo.find(r.get());
  if (it != memo.end()) return it->second;
  u64 n = 0;
  if (r->kind == Rev::Kind::ctrl) {
    n = primitive_count_memo(r->body, memo);
  } else {
    n = primitive_count_memo(r->first, memo) + primitive_count_memo(r->second, memo);
  }
  memo.emplace(r.get(), n);
  return n;
}

}  // namespace

RevPtr reverse(const RevPtr& r) {
  std::unordered_map<const Rev*, RevPtr> memo;
  return reverse_memo(r, memo);
}

std::vector<u32> targets(const RevPtr& r) {
  std::unordered_map<const Rev*, Mask> memo;
  const Mask& m = targets_memo(r, memo);
  std::vector<u32> out;
  for (size_t w = 0; w < m.size(); ++w)
    for (u32 b = 0; b < 64; ++b)
      if ((m[w] >> b) & 1) out.push_back(static_cast<u32>(w * 64 + b));
  return out;
}

bool well_typed(const RevPtr& r, u32 width) {
  std::unordered_map<const Rev*, bool> ok;
  std::unordered_map<const Rev*, Mask> masks;
  return well_typed_memo(r, width, ok, masks);
}

u64 primitive_count(const RevPtr& r) {
  std::unordered_map<const Rev*, u64> memo;
  return primitive_count_memo(r, memo);
}

bool equal_rcir(const RevPtr& a, const RevPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Rev::Kind::skip:
      return true;
    case Rev::Kind::flip:
      return a->a == b->a;
    case Rev::Kind::swap_bits:
      return a->a == b->a && a->b == b->b;
    case Rev::Kind::ctrl:
      return a->a == b->a && equal_rcir(a->body, b->body);
    case Rev::Kind::seq:
      return equal_rcir(a->first, b->first) && equal_rcir(a->second, b->second);
  }
  return false;
}

}  // namespace qshor::rcir
