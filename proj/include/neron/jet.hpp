#pragma once

#include <map>
#include <optional>
#include <stdexcept>

#include "neron/poly.hpp"

namespace neron {

// Polynomial known modulo (x)^prec, x the base variables; prec == kOrdInf
// means exact.  The stored value is always truncated to its precision.
template <class K>
struct Jet {
  Poly<K> val;
  long prec = kOrdInf;

  static Jet of(Poly<K> f, long prec = kOrdInf) {
    return Jet{f.truncate_base(prec), prec};
  }
  bool is_exact() const { return prec >= kOrdInf; }
  bool is_zero() const { return val.is_zero(); }

  friend Jet operator+(const Jet& a, const Jet& b) {
    long p = std::min(a.prec, b.prec);
    return of(a.val + b.val, p);
  }
  friend Jet operator-(const Jet& a, const Jet& b) {
    long p = std::min(a.prec, b.prec);
    return of(a.val - b.val, p);
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    long p = std::min(a.prec, b.prec);
    return of(a.val * b.val, p);
  }
  Jet operator-() const { return Jet{-val, prec}; }
  Jet truncated(long p) const { return of(val, std::min(prec, p)); }

  // Equality as jets: difference vanishes to the shared precision.
  friend bool congruent(const Jet& a, const Jet& b) {
    long p = std::min(a.prec, b.prec);
    return (a.val - b.val).truncate_base(p).is_zero();
  }
};

// Inverse of a unit to the requested precision by Newton doubling.  Requires
// an invertible constant coefficient and positive base order for the rest
// (terms free of base variables would break the filtration argument).
template <class K>
Jet<K> series_inverse(const Jet<K>& a, long prec) {
  const RingPtr& ring = a.val.ring();
  K c0 = a.val.constant_term();
  if (c0.is_zero()) throw std::domain_error("series inverse of a non-unit");
  Poly<K> rest = a.val - Poly<K>::constant(ring, c0);
  if (!rest.is_zero() && rest.base_order() < 1)
    throw std::domain_error("series inverse needs positive order off the constant");
  long target = std::min(prec, a.prec);
  if (target >= kOrdInf && !rest.is_zero())
    throw std::domain_error("exact inverse of a non-constant");
  Poly<K> g = Poly<K>::constant(ring, c0.inv());
  if (target >= kOrdInf) return Jet<K>{g, kOrdInf};
  Poly<K> two = Poly<K>::from_long(ring, 2);
  for (long n = 1; n < target;) {
    n = std::min(2 * n, target);
    g = (g * (two - a.val.truncate_base(n) * g)).truncate_base(n);
  }
  return Jet<K>{g.truncate_base(target), target};
}

// Exact divide by a single-term divisor; the quotient loses the divisor's
// base order in precision.  nullopt when some term is not divisible.
template <class K>
std::optional<Jet<K>> jet_divide_monomial(const Jet<K>& a, const Poly<K>& m) {
  if (m.is_zero() || m.size() != 1) throw std::invalid_argument("monomial divisor expected");
  const Mono& dm = m.lm();
  K dcinv = m.lc().inv();
  std::vector<Term<K>> out;
  for (const auto& t : a.val.terms()) {
    if (!mono_divides(dm, t.mono)) return std::nullopt;
    out.push_back({mono_quot(t.mono, dm), t.coeff * dcinv});
  }
  long p = a.is_exact() ? kOrdInf : a.prec - m.base_order();
  return Jet<K>::of(Poly<K>::from_terms(a.val.ring(), std::move(out)), p);
}

// Evaluate f with the given variable assignments, all arithmetic truncated to
// the weakest incoming precision (and cap).  Unassigned variables remain.
template <class K>
Jet<K> evaluate_jet(const Poly<K>& f, const std::map<int, Jet<K>>& assign,
                    long cap = kOrdInf) {
  long prec = cap;
  for (const auto& [v, j] : assign) prec = std::min(prec, j.prec);
  const RingPtr& ring = f.ring();
  std::map<int, std::vector<Poly<K>>> powers;
  auto power = [&](int v, int e) -> const Poly<K>& {
    auto& cache = powers[v];
    if (cache.empty()) cache.push_back(Poly<K>::from_long(ring, 1));
    while (static_cast<int>(cache.size()) <= e)
      cache.push_back((cache.back() * assign.at(v).val).truncate_base(prec));
    return cache[e];
  };
  Poly<K> acc = Poly<K>::zero(ring);
  for (const auto& t : f.terms()) {
    Mono rest = t.mono;
    Poly<K> part = Poly<K>::constant(ring, t.coeff);
    for (int v = 0; v < ring->nvars(); ++v) {
      if (t.mono[v] == 0 || !assign.count(v)) continue;
      rest[v] = 0;
      part = (part * power(v, t.mono[v])).truncate_base(prec);
    }
    acc += part.term_multiple(rest, coeff_from_long<K>(ring->field, 1));
  }
  return Jet<K>::of(std::move(acc), prec);
}

}  // namespace neron
