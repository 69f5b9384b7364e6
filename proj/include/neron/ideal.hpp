#pragma once

#include <memory>
#include <optional>
#include <set>
#include <tuple>

#include "neron/groebner.hpp"
#include "neron/jet.hpp"

namespace neron {

template <class K>
struct Ideal {
  RingPtr ring;
  std::vector<Poly<K>> gens;

  Ideal() = default;
  Ideal(RingPtr r, std::vector<Poly<K>> g) : ring(std::move(r)), gens(std::move(g)) {}

  const std::vector<Poly<K>>& basis() const {
    if (!cache_) cache_ = std::make_shared<std::vector<Poly<K>>>(std_basis(ring, gens));
    return *cache_;
  }

 private:
  mutable std::shared_ptr<std::vector<Poly<K>>> cache_;
};

// unit * target = sum cofactors[i] * gens[i] exactly; unit has an invertible
// constant term (it is 1 whenever the order is global), so membership in the
// localized ring is witnessed by pure arithmetic.
template <class K>
struct Witness {
  Poly<K> target;
  Poly<K> unit;
  std::vector<Poly<K>> cofactors;

  bool reassembles(const std::vector<Poly<K>>& gens) const {
    Poly<K> acc = unit * target;
    for (size_t i = 0; i < gens.size(); ++i) acc -= cofactors[i] * gens[i];
    return acc.is_zero();
  }
};

// Standard basis together with expressions of every basis element in the
// original generators, so normal-form quotients translate back.
template <class K>
struct TrackedBasis {
  std::vector<Poly<K>> basis;
  std::vector<std::vector<Poly<K>>> expr;  // basis[k] = sum expr[k][j]*gens[j]
};

template <class K>
TrackedBasis<K> tracked_std_basis(const RingPtr& ring, const std::vector<Poly<K>>& gens) {
  basis_computation_count()++;
  Poly<K> zero = Poly<K>::zero(ring);
  TrackedBasis<K> out;
  for (size_t j = 0; j < gens.size(); ++j) {
    if (gens[j].is_zero()) continue;
    Poly<K> p = primitive_normalized(gens[j]);
    std::vector<Poly<K>> row(gens.size(), zero);
    row[j] = Poly<K>::constant(ring, p.lc() / gens[j].lc());
    out.expr.push_back(std::move(row));
    out.basis.push_back(std::move(p));
  }
  auto& G = out.basis;
  auto& A = out.expr;
  using Key = std::tuple<long, size_t, size_t>;
  std::set<Key> queue;
  std::set<std::pair<size_t, size_t>> pending;
  auto push_pairs = [&](size_t j) {
    for (size_t i = 0; i < j; ++i) {
      queue.insert({mono_total_deg(mono_lcm(G[i].lm(), G[j].lm())), i, j});
      pending.insert({i, j});
    }
  };
  for (size_t j = 0; j < G.size(); ++j) push_pairs(j);
  long processed = 0;
  while (!queue.empty()) {
    if (++processed > 50000) throw std::runtime_error("basis budget exceeded");
    auto [deg, i, j] = *queue.begin();
    queue.erase(queue.begin());
    pending.erase({i, j});
    Mono l = mono_lcm(G[i].lm(), G[j].lm());
    if (detail::pair_redundant(G, i, j, l, pending, ring->global())) continue;
    Mono mi = mono_quot(l, G[i].lm()), mj = mono_quot(l, G[j].lm());
    Poly<K> sp = G[i].term_multiple(mi, G[j].lc()) - G[j].term_multiple(mj, G[i].lc());
    Division<K> d = weak_normal_form(sp, G);
    if (d.remainder.is_zero()) continue;
    std::vector<Poly<K>> expr(gens.size(), zero);
    for (size_t t = 0; t < gens.size(); ++t) {
      expr[t] = d.unit * (A[i][t].term_multiple(mi, G[j].lc()) -
                          A[j][t].term_multiple(mj, G[i].lc()));
      for (size_t k = 0; k < G.size(); ++k)
        if (!d.quotients[k].is_zero()) expr[t] -= d.quotients[k] * A[k][t];
    }
    Poly<K> p = primitive_normalized(d.remainder);
    K scale = p.lc() / d.remainder.lc();
    for (auto& e : expr) e = e.scaled(scale);
    A.push_back(std::move(expr));
    G.push_back(std::move(p));
    push_pairs(G.size() - 1);
  }
  return out;
}

// Membership in the ideal generated by gens (in the localization the order
// encodes); witness cofactors are over the original generator list.
template <class K>
std::optional<Witness<K>> membership_witness(const Poly<K>& f,
                                             const std::vector<Poly<K>>& gens,
                                             const TrackedBasis<K>& tb) {
  Division<K> d = weak_normal_form(f, tb.basis);
  if (!d.remainder.is_zero()) return std::nullopt;
  Witness<K> w;
  w.target = f;
  w.unit = d.unit;
  w.cofactors.assign(gens.size(), Poly<K>::zero(f.ring()));
  for (size_t k = 0; k < tb.basis.size(); ++k) {
    if (d.quotients[k].is_zero()) continue;
    for (size_t j = 0; j < gens.size(); ++j)
      if (!tb.expr[k][j].is_zero()) w.cofactors[j] += d.quotients[k] * tb.expr[k][j];
  }
  return w;
}

template <class K>
std::optional<Witness<K>> membership_witness(const Poly<K>& f,
                                             const std::vector<Poly<K>>& gens) {
  return membership_witness(f, gens, tracked_std_basis(f.ring(), gens));
}

template <class K>
std::optional<Witness<K>> membership_witness(const Poly<K>& f, const Ideal<K>& I) {
  return membership_witness(f, I.gens);
}

template <class K>
bool is_member(const Poly<K>& f, const Ideal<K>& I) {
  return weak_normal_form(f, I.basis()).remainder.is_zero();
}

template <class K>
bool ideal_contains(const Ideal<K>& big, const Ideal<K>& small) {
  for (const auto& g : small.gens)
    if (!is_member(g, big)) return false;
  return true;
}

template <class K>
bool ideal_equal(const Ideal<K>& a, const Ideal<K>& b) {
  return ideal_contains(a, b) && ideal_contains(b, a);
}

template <class K>
Ideal<K> intersect(const Ideal<K>& a, const Ideal<K>& b) {
  RingPtr ext = Ring::extend(a.ring, {"elim", 1, BlockRole::Aux});
  int t = ext->var("elim1");
  Poly<K> tp = Poly<K>::variable(ext, t);
  Poly<K> omt = Poly<K>::from_long(ext, 1) - tp;
  std::vector<Poly<K>> gens;
  for (const auto& g : a.gens) gens.push_back(tp * transport(g, ext));
  for (const auto& g : b.gens) gens.push_back(omt * transport(g, ext));
  std::vector<Poly<K>> basis = std_basis(ext, gens);
  std::vector<Poly<K>> kept;
  for (const auto& g : basis) {
    bool free_of_t = true;
    for (const auto& term : g.terms())
      if (term.mono[t] != 0) free_of_t = false;
    if (free_of_t) kept.push_back(transport(g, a.ring));
  }
  return Ideal<K>(a.ring, std::move(kept));
}

// (J : g) = (J intersect (g)) / g.  Division of each intersection generator by
// g is exact up to the tracked unit, and dropping the unit keeps the ideal.
template <class K>
Ideal<K> colon(const Ideal<K>& J, const Poly<K>& g) {
  if (g.is_zero()) throw std::invalid_argument("colon by zero");
  Ideal<K> inter = intersect(J, Ideal<K>(J.ring, {g}));
  std::vector<Poly<K>> out;
  for (const auto& h : inter.gens) {
    Division<K> d = weak_normal_form(h, std::vector<Poly<K>>{g});
    if (!d.remainder.is_zero())
      throw std::logic_error("intersection generator not divisible by divisor");
    if (!d.quotients[0].is_zero()) out.push_back(d.quotients[0]);
  }
  return Ideal<K>(J.ring, std::move(out));
}

template <class K>
Ideal<K> colon(const Ideal<K>& J, const Ideal<K>& I) {
  std::optional<Ideal<K>> acc;
  for (const auto& g : I.gens) {
    if (g.is_zero()) continue;
    Ideal<K> c = colon(J, g);
    acc = acc ? intersect(*acc, c) : c;
  }
  if (!acc) throw std::invalid_argument("colon by zero ideal");
  return *acc;
}

// Smallest e >= 1 with (J : d^e) = (J : d^{e+1}), i.e. the annihilator chain
// of d in the quotient by J stabilizes.
template <class K>
long stabilization_exponent(const Ideal<K>& J, const Poly<K>& d, long cap = 16) {
  Ideal<K> prev = colon(J, d);
  Poly<K> p = d;
  for (long e = 1; e <= cap; ++e) {
    p = p * d;
    Ideal<K> next = colon(J, p);
    if (ideal_equal(prev, next)) return e;
    prev = next;
  }
  throw std::runtime_error("cap exceeded");
}

// All monomials of the given total degree in the base variables, in a fixed
// deterministic order.
inline std::vector<Mono> base_monomials(const RingPtr& ring, long deg) {
  std::vector<int> base;
  for (int v = 0; v < ring->nvars(); ++v)
    if (ring->is_base_var(v)) base.push_back(v);
  std::vector<Mono> out;
  Mono cur = mono_one(*ring);
  std::function<void(size_t, long)> rec = [&](size_t i, long left) {
    if (i + 1 == base.size()) {
      cur[base[i]] = static_cast<int>(left);
      out.push_back(cur);
      cur[base[i]] = 0;
      return;
    }
    for (long e = left; e >= 0; --e) {
      cur[base[i]] = static_cast<int>(e);
      rec(i + 1, left - e);
    }
    cur[base[i]] = 0;
  };
  if (!base.empty()) rec(0, deg);
  return out;
}

// Smallest k such that every degree-k monomial in the base variables lies in
// the ideal; nullopt if none up to the cap (the ideal is not primary to the
// base maximal ideal at this cap).
template <class K>
std::optional<long> min_power_k(const Ideal<K>& I, long cap = 64) {
  for (const auto& g : I.basis())
    if (!g.is_zero() && mono_is_one(g.lm()) ) return 0;
  for (long k = 1; k <= cap; ++k) {
    bool all_in = true;
    for (const auto& m : base_monomials(I.ring, k)) {
      Poly<K> f = Poly<K>::monomial(I.ring, m, coeff_from_long<K>(I.ring->field, 1));
      if (!weak_normal_form(f, I.basis()).remainder.is_zero()) {
        all_in = false;
        break;
      }
    }
    if (all_in) return k;
  }
  return std::nullopt;
}

// First degree-k base monomial outside the ideal, if any: the strictness
// witness accompanying min_power_k.
template <class K>
std::optional<Poly<K>> nonmember_at_degree(const Ideal<K>& I, long k) {
  for (const auto& m : base_monomials(I.ring, k)) {
    Poly<K> f = Poly<K>::monomial(I.ring, m, coeff_from_long<K>(I.ring->field, 1));
    if (!weak_normal_form(f, I.basis()).remainder.is_zero()) return f;
  }
  return std::nullopt;
}

// Division with relations at finite precision: find s and cofactors c with
//   a = s*divisor + sum c_i*rels_i + O(x^N),
// the residual claim checkable by arithmetic alone.  The tracked unit is
// absorbed into s and c by series inversion, so the output is unit-free.
template <class K>
struct PrecisionDivision {
  Poly<K> quotient;                 // s, truncated at N
  std::vector<Poly<K>> cofactors;   // over rels, truncated at N
  long prec = 0;

  Poly<K> residual(const Poly<K>& a, const Poly<K>& divisor,
                   const std::vector<Poly<K>>& rels) const {
    Poly<K> acc = a - quotient * divisor;
    for (size_t i = 0; i < rels.size(); ++i) acc -= cofactors[i] * rels[i];
    return acc;
  }
};

template <class K>
std::optional<PrecisionDivision<K>> divide_at_precision(const Poly<K>& a,
                                                        const Poly<K>& divisor,
                                                        const std::vector<Poly<K>>& rels,
                                                        long N) {
  const RingPtr& ring = a.ring();
  std::vector<Poly<K>> gens;
  gens.push_back(divisor);
  for (const auto& r : rels) gens.push_back(r);
  for (const auto& m : base_monomials(ring, N))
    gens.push_back(Poly<K>::monomial(ring, m, coeff_from_long<K>(ring->field, 1)));
  // straight reduction first; only complete to a standard basis if it sticks
  Division<K> d = weak_normal_form(a, gens);
  Poly<K> unit = d.unit;
  std::vector<Poly<K>> qs = d.quotients;
  if (!d.remainder.is_zero()) {
    auto w = membership_witness(a, gens);
    if (!w) return std::nullopt;
    unit = w->unit;
    qs = w->cofactors;
  }
  Jet<K> uinv = series_inverse(Jet<K>::of(unit, N), N);
  PrecisionDivision<K> out;
  out.prec = N;
  out.quotient = (uinv.val * qs[0]).truncate_base(N);
  for (size_t i = 0; i < rels.size(); ++i)
    out.cofactors.push_back((uinv.val * qs[1 + i]).truncate_base(N));
  if (out.residual(a, divisor, rels).base_order() < N)
    throw std::logic_error("precision division lost accuracy");
  return out;
}

}  // namespace neron
