#pragma once

#include <atomic>
#include <optional>
#include <set>
#include <stdexcept>
#include <tuple>
#include <type_traits>
#include <vector>

#include "neron/poly.hpp"

namespace neron {

// Counts standard-basis computations; the certificate checker asserts the
// count stays flat while it verifies.
inline std::atomic<long>& basis_computation_count() {
  static std::atomic<long> n{0};
  return n;
}

// Result of a weak normal form: unit * f = sum quotients[i]*gens[i] + remainder,
// with unit having a nonzero constant leading term (exactly 1 over global
// orders up to a constant), verifiable by pure arithmetic.
template <class K>
struct Division {
  Poly<K> remainder;
  std::vector<Poly<K>> quotients;
  Poly<K> unit;

  bool reassembles(const Poly<K>& f, const std::vector<Poly<K>>& gens) const {
    Poly<K> acc = unit * f - remainder;
    for (size_t i = 0; i < gens.size(); ++i) acc -= quotients[i] * gens[i];
    return acc.is_zero();
  }
};

namespace detail {

template <class K>
long ecart(const Poly<K>& f) {
  return f.total_deg() - mono_total_deg(f.lm());
}

}  // namespace detail

// Scale to the cheapest representative of the same ideal element: over the
// rationals clear denominators and divide out the integer content (monic
// normalization compounds coefficient growth badly in basis loops), over a
// finite field just make it monic.
template <class K>
Poly<K> primitive_normalized(const Poly<K>& f) {
  if (f.is_zero()) return f;
  if constexpr (std::is_same_v<K, Rat>) {
    mpz_t g, l;
    mpz_init_set_ui(g, 0);
    mpz_init_set_ui(l, 1);
    for (const auto& t : f.terms()) t.coeff.content_step(g, l);
    Rat content = Rat::from_mpz_frac(g, l);
    mpz_clear(g);
    mpz_clear(l);
    if (f.lc().sgn() < 0) content = -content;
    return f.scaled(content.inv());
  } else {
    return f.monic();
  }
}

// Mora's weak normal form with the ecart strategy.  Works for any monomial
// order; for local/mixed orders the result is a normal form in the
// localization, with the unit multiplier tracked explicitly.
template <class K>
Division<K> weak_normal_form(const Poly<K>& f, const std::vector<Poly<K>>& gens) {
  const RingPtr& ring = f.ring();
  Poly<K> one = Poly<K>::from_long(ring, 1);
  Poly<K> zero = Poly<K>::zero(ring);
  struct Entry {
    Poly<K> poly;
    Poly<K> u;                    // expression: poly = u*f + sum c_i*gens_i
    std::vector<Poly<K>> c;
  };
  std::vector<Entry> T;
  T.reserve(gens.size());
  for (size_t i = 0; i < gens.size(); ++i) {
    std::vector<Poly<K>> c(gens.size(), zero);
    c[i] = one;
    T.push_back({gens[i], zero, std::move(c)});
  }
  Poly<K> h = f;
  Poly<K> u = one;
  std::vector<Poly<K>> c(gens.size(), zero);
  while (!h.is_zero()) {
    long he = detail::ecart(h);
    int pick = -1;
    long pick_ecart = 0;
    size_t pick_len = 0;
    for (size_t k = 0; k < T.size(); ++k) {
      if (T[k].poly.is_zero() || !mono_divides(T[k].poly.lm(), h.lm())) continue;
      long e = detail::ecart(T[k].poly);
      size_t len = T[k].poly.terms().size();
      if (pick < 0 || e < pick_ecart || (e == pick_ecart && len < pick_len)) {
        pick = static_cast<int>(k);
        pick_ecart = e;
        pick_len = len;
      }
    }
    if (pick < 0) break;
    if (pick_ecart > he) T.push_back({h, u, c});
    const Entry& g = T[pick];
    Mono m = mono_quot(h.lm(), g.poly.lm());
    K cf = h.lc() / g.poly.lc();
    h -= g.poly.term_multiple(m, cf);
    u -= g.u.term_multiple(m, cf);
    for (size_t i = 0; i < gens.size(); ++i)
      if (!g.c[i].is_zero()) c[i] -= g.c[i].term_multiple(m, cf);
  }
  if (u.is_zero() || !mono_is_one(u.lm()))
    throw std::logic_error("normal form produced a non-unit multiplier");
  Division<K> out;
  out.remainder = std::move(h);
  out.unit = std::move(u);
  out.quotients.reserve(gens.size());
  for (auto& ci : c) out.quotients.push_back(-ci);
  return out;
}

// Classical division with full tail reduction; requires a global order
// (otherwise it need not terminate).  Unit is always 1.
template <class K>
Division<K> full_normal_form(const Poly<K>& f, const std::vector<Poly<K>>& gens) {
  const RingPtr& ring = f.ring();
  if (!ring->global()) throw std::logic_error("full normal form needs a global order");
  Poly<K> zero = Poly<K>::zero(ring);
  Division<K> out;
  out.unit = Poly<K>::from_long(ring, 1);
  out.quotients.assign(gens.size(), zero);
  out.remainder = zero;
  Poly<K> h = f;
  while (!h.is_zero()) {
    bool reduced = false;
    for (size_t i = 0; i < gens.size(); ++i) {
      if (gens[i].is_zero() || !mono_divides(gens[i].lm(), h.lm())) continue;
      Mono m = mono_quot(h.lm(), gens[i].lm());
      K cf = h.lc() / gens[i].lc();
      h -= gens[i].term_multiple(m, cf);
      out.quotients[i] += Poly<K>::monomial(ring, m, cf);
      reduced = true;
      break;
    }
    if (!reduced) {
      out.remainder += h.lt();
      h -= h.lt();
    }
  }
  return out;
}

template <class K>
Division<K> normal_form(const Poly<K>& f, const std::vector<Poly<K>>& gens) {
  return f.ring()->global() ? full_normal_form(f, gens) : weak_normal_form(f, gens);
}

template <class K>
Poly<K> spoly(const Poly<K>& a, const Poly<K>& b) {
  // cross-multiplied to stay denominator-free when the inputs are
  Mono l = mono_lcm(a.lm(), b.lm());
  return a.term_multiple(mono_quot(l, a.lm()), b.lc()) -
         b.term_multiple(mono_quot(l, b.lm()), a.lc());
}

namespace detail {

// Buchberger's chain criterion: the pair (i,j) is redundant if some other
// leading monomial divides lcm(i,j) and both flanking pairs are already
// handled.  Valid for any monomial order; the coprimality criterion below is
// only sound for global ones.
template <class K>
bool pair_redundant(const std::vector<Poly<K>>& G, size_t i, size_t j, const Mono& l,
                    const std::set<std::pair<size_t, size_t>>& pending, bool global) {
  if (global && mono_lcm(G[i].lm(), G[j].lm()) == mono_mul(G[i].lm(), G[j].lm()))
    return true;
  for (size_t k = 0; k < G.size(); ++k) {
    if (k == i || k == j || G[k].is_zero()) continue;
    if (!mono_divides(G[k].lm(), l)) continue;
    auto p1 = std::minmax(i, k), p2 = std::minmax(j, k);
    if (!pending.count({p1.first, p1.second}) && !pending.count({p2.first, p2.second}))
      return true;
  }
  return false;
}

}  // namespace detail

// Standard basis by the Buchberger/Mora pair loop; the same loop serves
// global and local orders (the normal form dispatches).  Output is minimal
// and sorted by leading monomial; over a global order it is the reduced
// basis, monic and canonical.
template <class K>
std::vector<Poly<K>> std_basis(const RingPtr& ring, const std::vector<Poly<K>>& gens,
                               long pair_budget = 50000) {
  basis_computation_count()++;
  std::vector<Poly<K>> G;
  for (const auto& g : gens)
    if (!g.is_zero()) G.push_back(primitive_normalized(g));
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
    if (++processed > pair_budget) throw std::runtime_error("basis budget exceeded");
    auto [deg, i, j] = *queue.begin();
    queue.erase(queue.begin());
    pending.erase({i, j});
    Mono l = mono_lcm(G[i].lm(), G[j].lm());
    if (detail::pair_redundant(G, i, j, l, pending, ring->global())) continue;
    Poly<K> r = normal_form(spoly(G[i], G[j]), G).remainder;
    if (r.is_zero()) continue;
    G.push_back(primitive_normalized(r));
    push_pairs(G.size() - 1);
  }
  // minimalize: keep elements whose leading monomial no other kept one divides
  std::vector<size_t> order_idx(G.size());
  for (size_t i = 0; i < order_idx.size(); ++i) order_idx[i] = i;
  std::sort(order_idx.begin(), order_idx.end(), [&](size_t a, size_t b) {
    int c = ring->cmp(G[a].lm(), G[b].lm());
    if (c != 0) return c < 0;
    return a < b;
  });
  std::vector<Poly<K>> kept;
  for (size_t idx : order_idx) {
    bool dominated = false;
    for (const auto& k : kept)
      if (mono_divides(k.lm(), G[idx].lm())) { dominated = true; break; }
    if (!dominated) kept.push_back(G[idx]);
  }
  if (ring->global()) {
    // inter-reduce to the canonical reduced basis
    for (bool changed = true; changed;) {
      changed = false;
      for (size_t i = 0; i < kept.size(); ++i) {
        std::vector<Poly<K>> others;
        for (size_t j = 0; j < kept.size(); ++j)
          if (j != i) others.push_back(kept[j]);
        Poly<K> r = full_normal_form(kept[i], others).remainder;
        if (r.is_zero()) {
          kept.erase(kept.begin() + i);
          changed = true;
          break;
        }
        r = r.monic();
        if (r != kept[i]) {
          kept[i] = r;
          changed = true;
        }
      }
    }
    std::sort(kept.begin(), kept.end(), [&](const Poly<K>& a, const Poly<K>& b) {
      return ring->cmp(a.lm(), b.lm()) < 0;
    });
  }
  return kept;
}

// Syzygy module of the given generators by Schreyer's construction: track
// every basis element as a combination of the input generators, record one
// syzygy per reduced S-pair, and add the rows of Id - B*A expressing the two
// change-of-basis directions.  Under a local order the normal forms carry a
// unit multiplier; folding it into the row keeps every entry polynomial while
// still generating the syzygy module over the localization.
template <class K>
std::vector<std::vector<Poly<K>>> syzygies(const RingPtr& ring,
                                           const std::vector<Poly<K>>& gens) {
  const bool global = ring->global();
  basis_computation_count()++;
  Poly<K> zero = Poly<K>::zero(ring);
  size_t s = gens.size();
  std::vector<Poly<K>> G;
  std::vector<std::vector<Poly<K>>> A;  // G[k] = sum A[k][j]*gens[j]
  for (size_t j = 0; j < s; ++j) {
    if (gens[j].is_zero()) continue;
    Poly<K> p = primitive_normalized(gens[j]);
    std::vector<Poly<K>> row(s, zero);
    row[j] = Poly<K>::constant(ring, p.lc() / gens[j].lc());
    A.push_back(std::move(row));
    G.push_back(std::move(p));
  }
  auto reduce = [&](const Poly<K>& f) {
    return global ? full_normal_form(f, G) : weak_normal_form(f, G);
  };
  std::vector<std::vector<Poly<K>>> syz;
  using Key = std::tuple<long, size_t, size_t>;
  std::set<Key> queue;
  auto push_pairs = [&](size_t j) {
    for (size_t i = 0; i < j; ++i)
      queue.insert({mono_total_deg(mono_lcm(G[i].lm(), G[j].lm())), i, j});
  };
  for (size_t j = 0; j < G.size(); ++j) push_pairs(j);
  size_t processed = 0;
  while (!queue.empty()) {
    if (++processed > 50000) throw std::runtime_error("basis budget exceeded");
    auto [deg, i, j] = *queue.begin();
    queue.erase(queue.begin());
    Mono l = mono_lcm(G[i].lm(), G[j].lm());
    Mono mi = mono_quot(l, G[i].lm()), mj = mono_quot(l, G[j].lm());
    Poly<K> sp = G[i].term_multiple(mi, G[j].lc()) - G[j].term_multiple(mj, G[i].lc());
    Division<K> d = reduce(sp);
    // combination of gens representing the reduced remainder
    std::vector<Poly<K>> expr(s, zero);
    for (size_t t = 0; t < s; ++t)
      expr[t] = d.unit * (A[i][t].term_multiple(mi, G[j].lc()) -
                          A[j][t].term_multiple(mj, G[i].lc()));
    for (size_t k = 0; k < G.size(); ++k) {
      if (d.quotients[k].is_zero()) continue;
      for (size_t t = 0; t < s; ++t) expr[t] -= d.quotients[k] * A[k][t];
    }
    if (d.remainder.is_zero()) {
      bool nontrivial = false;
      for (const auto& e : expr)
        if (!e.is_zero()) nontrivial = true;
      if (nontrivial) syz.push_back(std::move(expr));
    } else {
      Poly<K> p = primitive_normalized(d.remainder);
      K scale = p.lc() / d.remainder.lc();
      for (auto& e : expr) e = e.scaled(scale);
      A.push_back(std::move(expr));
      G.push_back(std::move(p));
      push_pairs(G.size() - 1);
    }
  }
  // rows of u*Id - B*A, where u_j*gens[j] = sum B[j][k]*G[k]
  for (size_t j = 0; j < s; ++j) {
    Division<K> d = reduce(gens[j]);
    if (!d.remainder.is_zero())
      throw std::logic_error("generator fails to reduce against its own basis");
    std::vector<Poly<K>> row(s, zero);
    row[j] = d.unit;
    for (size_t k = 0; k < G.size(); ++k) {
      if (d.quotients[k].is_zero()) continue;
      for (size_t t = 0; t < s; ++t) row[t] -= d.quotients[k] * A[k][t];
    }
    bool nontrivial = false;
    for (const auto& e : row)
      if (!e.is_zero()) nontrivial = true;
    if (nontrivial) syz.push_back(std::move(row));
  }
  return syz;
}

}  // namespace neron
