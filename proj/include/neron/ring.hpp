#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "neron/fp.hpp"
#include "neron/rational.hpp"

namespace neron {

enum class FieldKind { Rational, Prime };

struct FieldSpec {
  FieldKind kind = FieldKind::Rational;
  long long p = 0;

  friend bool operator==(const FieldSpec& a, const FieldSpec& b) {
    return a.kind == b.kind && a.p == b.p;
  }
};

template <class K>
K coeff_from_long(const FieldSpec&, long);
template <>
inline Rat coeff_from_long<Rat>(const FieldSpec&, long n) { return Rat(n); }
template <>
inline Fp coeff_from_long<Fp>(const FieldSpec& f, long n) { return Fp(n, f.p); }

template <class K>
K coeff_from_string(const FieldSpec&, const std::string&);
template <>
inline Rat coeff_from_string<Rat>(const FieldSpec&, const std::string& s) { return Rat(s); }
template <>
inline Fp coeff_from_string<Fp>(const FieldSpec& f, const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Fp(std::stoll(s), f.p);
  return Fp(std::stoll(s.substr(0, slash)), f.p) / Fp(std::stoll(s.substr(slash + 1)), f.p);
}

// Base vars are the coordinates of the local base ring (ordered locally, so
// units are exactly the series with nonzero constant term); Tower vars are
// adjoined algebra generators; Tangent vars carry the linear T-directions of
// the smoothing construction; Aux vars exist only for elimination.
enum class BlockRole { Base, Tower, Tangent, Aux };

struct VarBlock {
  std::string name;
  int arity = 0;
  BlockRole role = BlockRole::Tower;
  // Optional explicit variable names; default is name followed by 1-based index.
  std::vector<std::string> var_names;
};

enum class SegKind { DegRevLex, Lex, LocalDegRevLex };

struct OrderSeg {
  int lo = 0, hi = 0;  // var index range [lo, hi)
  SegKind kind = SegKind::DegRevLex;
};

enum class OrderStyle { MixedLocal, GlobalDegRevLex, Custom };

using Mono = std::vector<int>;

class Ring;
using RingPtr = std::shared_ptr<const Ring>;

class Ring {
 public:
  FieldSpec field;
  std::vector<VarBlock> blocks;
  std::vector<OrderSeg> order;
  OrderStyle style = OrderStyle::MixedLocal;

  int nvars() const { return static_cast<int>(names_.size()); }
  const std::string& var_name(int v) const { return names_.at(v); }
  const std::vector<std::string>& var_names() const { return names_; }

  int var(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw std::invalid_argument("unknown variable: " + name);
    return it->second;
  }
  bool has_var(const std::string& name) const { return index_.count(name) != 0; }

  int block_count() const { return static_cast<int>(blocks.size()); }
  int block_lo(int b) const { return offsets_.at(b); }
  int block_hi(int b) const { return offsets_.at(b) + blocks.at(b).arity; }
  int block_of(int v) const {
    for (int b = block_count() - 1; b >= 0; --b)
      if (v >= block_lo(b)) return b;
    throw std::out_of_range("variable index");
  }
  int find_block(const std::string& name) const {
    for (int b = 0; b < block_count(); ++b)
      if (blocks[b].name == name) return b;
    return -1;
  }
  BlockRole role_of(int v) const { return blocks[block_of(v)].role; }
  bool is_base_var(int v) const { return role_of(v) == BlockRole::Base; }
  std::vector<int> block_vars(const std::string& name) const {
    int b = find_block(name);
    if (b < 0) throw std::invalid_argument("no block named " + name);
    std::vector<int> vs;
    for (int v = block_lo(b); v < block_hi(b); ++v) vs.push_back(v);
    return vs;
  }
  std::vector<int> non_base_vars() const {
    std::vector<int> vs;
    for (int v = 0; v < nvars(); ++v)
      if (!is_base_var(v)) vs.push_back(v);
    return vs;
  }

  // Strict order on monomials: positive if a > b.
  int cmp(const Mono& a, const Mono& b) const {
    for (const auto& seg : order) {
      int r = cmp_seg(a, b, seg);
      if (r != 0) return r;
    }
    return 0;
  }

  bool global() const {
    for (const auto& seg : order)
      if (seg.kind == SegKind::LocalDegRevLex) return false;
    return true;
  }

  static RingPtr make(FieldSpec field, std::vector<VarBlock> blocks,
                      OrderStyle style = OrderStyle::MixedLocal) {
    auto r = std::make_shared<Ring>();
    r->field = field;
    r->blocks = std::move(blocks);
    r->style = style;
    r->finish();
    return r;
  }

  static RingPtr make_custom(FieldSpec field, std::vector<VarBlock> blocks,
                             std::vector<OrderSeg> segs) {
    auto r = std::make_shared<Ring>();
    r->field = field;
    r->blocks = std::move(blocks);
    r->style = OrderStyle::Custom;
    r->finish();
    r->order = std::move(segs);
    return r;
  }

  // New ring with one more block appended; existing variable indices are
  // preserved, and the rebuilt mixed order puts the newest block in front.
  static RingPtr extend(const RingPtr& base, VarBlock extra) {
    if (base->style == OrderStyle::Custom)
      throw std::logic_error("cannot extend a ring with a custom order");
    auto bs = base->blocks;
    bs.push_back(std::move(extra));
    return make(base->field, std::move(bs), base->style);
  }

  static RingPtr reorder(const RingPtr& base, OrderStyle style) {
    return make(base->field, base->blocks, style);
  }

 private:
  int cmp_seg(const Mono& a, const Mono& b, const OrderSeg& seg) const {
    switch (seg.kind) {
      case SegKind::Lex:
        for (int i = seg.lo; i < seg.hi; ++i)
          if (a[i] != b[i]) return a[i] > b[i] ? 1 : -1;
        return 0;
      case SegKind::DegRevLex: {
        long da = 0, db = 0;
        for (int i = seg.lo; i < seg.hi; ++i) { da += a[i]; db += b[i]; }
        if (da != db) return da > db ? 1 : -1;
        for (int i = seg.hi - 1; i >= seg.lo; --i)
          if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
        return 0;
      }
      case SegKind::LocalDegRevLex: {
        long da = 0, db = 0;
        for (int i = seg.lo; i < seg.hi; ++i) { da += a[i]; db += b[i]; }
        if (da != db) return da < db ? 1 : -1;
        for (int i = seg.hi - 1; i >= seg.lo; --i)
          if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
        return 0;
      }
    }
    return 0;
  }

  void finish() {
    names_.clear();
    index_.clear();
    offsets_.clear();
    for (auto& blk : blocks) {
      offsets_.push_back(static_cast<int>(names_.size()));
      if (!blk.var_names.empty() && static_cast<int>(blk.var_names.size()) != blk.arity)
        throw std::invalid_argument("variable name list does not match arity");
      for (int i = 0; i < blk.arity; ++i) {
        std::string nm = blk.var_names.empty() ? blk.name + std::to_string(i + 1)
                                               : blk.var_names[i];
        if (!index_.emplace(nm, static_cast<int>(names_.size())).second)
          throw std::invalid_argument("duplicate variable name: " + nm);
        names_.push_back(std::move(nm));
      }
    }
    order.clear();
    if (style == OrderStyle::Custom) return;
    // Aux blocks always dominate (they exist to be eliminated).
    for (int b = block_count() - 1; b >= 0; --b)
      if (blocks[b].role == BlockRole::Aux)
        order.push_back({block_lo(b), block_hi(b), SegKind::DegRevLex});
    if (style == OrderStyle::GlobalDegRevLex) {
      bool has_aux = !order.empty();
      if (!has_aux) {
        order.push_back({0, nvars(), SegKind::DegRevLex});
      } else {
        for (int b = 0; b < block_count(); ++b)
          if (blocks[b].role != BlockRole::Aux)
            order.push_back({block_lo(b), block_hi(b), SegKind::DegRevLex});
      }
      return;
    }
    // Newest non-base blocks first (each degrevlex), base blocks last (local).
    for (int b = block_count() - 1; b >= 0; --b)
      if (blocks[b].role != BlockRole::Base && blocks[b].role != BlockRole::Aux)
        order.push_back({block_lo(b), block_hi(b), SegKind::DegRevLex});
    for (int b = block_count() - 1; b >= 0; --b)
      if (blocks[b].role == BlockRole::Base)
        order.push_back({block_lo(b), block_hi(b), SegKind::LocalDegRevLex});
  }

  std::vector<std::string> names_;
  std::map<std::string, int> index_;
  std::vector<int> offsets_;
};

inline bool same_ring(const RingPtr& a, const RingPtr& b) { return a.get() == b.get(); }

// Monomial helpers; exponent vectors are dense, one slot per ring variable.
inline Mono mono_one(const Ring& r) { return Mono(r.nvars(), 0); }
inline Mono mono_mul(const Mono& a, const Mono& b) {
  Mono c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}
inline bool mono_divides(const Mono& a, const Mono& b) {  // a | b
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}
inline Mono mono_quot(const Mono& b, const Mono& a) {  // b / a
  Mono c(b.size());
  for (size_t i = 0; i < b.size(); ++i) c[i] = b[i] - a[i];
  return c;
}
inline Mono mono_lcm(const Mono& a, const Mono& b) {
  Mono c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = std::max(a[i], b[i]);
  return c;
}
inline long mono_total_deg(const Mono& a) {
  return std::accumulate(a.begin(), a.end(), 0L);
}
inline bool mono_is_one(const Mono& a) {
  return std::all_of(a.begin(), a.end(), [](int e) { return e == 0; });
}

}  // namespace neron
