#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "neron/ring.hpp"

namespace neron {

// Sentinel order for the zero element: larger than any order that occurs.
inline constexpr long kOrdInf = std::numeric_limits<long>::max() / 4;

template <class K>
struct Term {
  Mono mono;
  K coeff;
};

// Sparse multivariate polynomial.  Terms are strictly decreasing in the ring
// order and carry nonzero coefficients; equality is structural.
template <class K>
class Poly {
 public:
  Poly() = default;
  explicit Poly(RingPtr ring) : ring_(std::move(ring)) {}

  static Poly zero(RingPtr ring) { return Poly(std::move(ring)); }
  static Poly constant(RingPtr ring, K c) {
    Poly f(std::move(ring));
    if (!c.is_zero()) f.terms_.push_back({mono_one(*f.ring_), std::move(c)});
    return f;
  }
  static Poly from_long(RingPtr ring, long n) {
    K c = coeff_from_long<K>(ring->field, n);
    return constant(std::move(ring), std::move(c));
  }
  static Poly variable(RingPtr ring, int v, int exp = 1) {
    Poly f(std::move(ring));
    Mono m = mono_one(*f.ring_);
    m.at(v) = exp;
    f.terms_.push_back({std::move(m), coeff_from_long<K>(f.ring_->field, 1)});
    return f;
  }
  static Poly monomial(RingPtr ring, Mono m, K c) {
    Poly f(std::move(ring));
    if (!c.is_zero()) f.terms_.push_back({std::move(m), std::move(c)});
    return f;
  }
  static Poly from_terms(RingPtr ring, std::vector<Term<K>> ts) {
    Poly f(std::move(ring));
    f.terms_ = std::move(ts);
    f.normalize();
    return f;
  }

  const RingPtr& ring() const { return ring_; }
  const std::vector<Term<K>>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  size_t size() const { return terms_.size(); }

  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && mono_is_one(terms_[0].mono));
  }
  K constant_value() const {
    if (terms_.empty()) return coeff_from_long<K>(ring_->field, 0);
    if (!is_constant()) throw std::domain_error("not a constant");
    return terms_[0].coeff;
  }
  K constant_term() const {
    for (const auto& t : terms_)
      if (mono_is_one(t.mono)) return t.coeff;
    return coeff_from_long<K>(ring_->field, 0);
  }

  const Mono& lm() const { return lead().mono; }
  const K& lc() const { return lead().coeff; }
  const Term<K>& lead() const {
    if (terms_.empty()) throw std::domain_error("zero polynomial has no leading term");
    return terms_[0];
  }
  Poly lt() const { return monomial(ring_, lead().mono, lead().coeff); }
  Poly tail() const {
    Poly f(ring_);
    f.terms_.assign(terms_.begin() + (terms_.empty() ? 0 : 1), terms_.end());
    return f;
  }

  long total_deg() const {
    long d = -1;
    for (const auto& t : terms_) d = std::max(d, mono_total_deg(t.mono));
    return d;
  }
  long deg_where(const std::function<bool(int)>& pred) const {
    long d = -1;
    for (const auto& t : terms_) d = std::max(d, deg_of(t.mono, pred));
    return d;
  }
  // Minimal total degree in base variables over all terms; kOrdInf for zero.
  long base_order() const {
    if (terms_.empty()) return kOrdInf;
    long d = kOrdInf;
    for (const auto& t : terms_) {
      long e = 0;
      for (int v = 0; v < ring_->nvars(); ++v)
        if (ring_->is_base_var(v)) e += t.mono[v];
      d = std::min(d, e);
    }
    return d;
  }

  Poly operator-() const {
    Poly f(ring_);
    f.terms_.reserve(terms_.size());
    for (const auto& t : terms_) f.terms_.push_back({t.mono, -t.coeff});
    return f;
  }

  friend Poly operator+(const Poly& a, const Poly& b) { return merged(a, b, false); }
  friend Poly operator-(const Poly& a, const Poly& b) { return merged(a, b, true); }

  friend Poly operator*(const Poly& a, const Poly& b) {
    check_rings(a, b);
    if (a.is_zero() || b.is_zero()) return zero(a.ring_ ? a.ring_ : b.ring_);
    std::map<Mono, K> acc;
    for (const auto& ta : a.terms_)
      for (const auto& tb : b.terms_) {
        Mono m = mono_mul(ta.mono, tb.mono);
        auto it = acc.find(m);
        if (it == acc.end())
          acc.emplace(std::move(m), ta.coeff * tb.coeff);
        else
          it->second += ta.coeff * tb.coeff;
      }
    Poly f(a.ring_);
    f.terms_.reserve(acc.size());
    for (auto& [m, c] : acc)
      if (!c.is_zero()) f.terms_.push_back({m, std::move(c)});
    f.sort_terms();
    return f;
  }

  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  Poly scaled(const K& c) const {
    Poly f(ring_);
    if (c.is_zero()) return f;
    f.terms_.reserve(terms_.size());
    for (const auto& t : terms_) f.terms_.push_back({t.mono, t.coeff * c});
    return f;
  }
  Poly term_multiple(const Mono& m, const K& c) const {
    Poly f(ring_);
    if (c.is_zero()) return f;
    f.terms_.reserve(terms_.size());
    for (const auto& t : terms_) f.terms_.push_back({mono_mul(t.mono, m), t.coeff * c});
    return f;
  }
  Poly monic() const {
    if (is_zero()) return *this;
    return scaled(lc().inv());
  }

  Poly pow(long e) const {
    if (e < 0) throw std::invalid_argument("negative exponent");
    Poly r = from_long(ring_, 1);
    Poly b = *this;
    for (; e > 0; e >>= 1) {
      if (e & 1) r = r * b;
      if (e > 1) b = b * b;
    }
    return r;
  }

  Poly derivative(int v) const {
    Poly f(ring_);
    for (const auto& t : terms_) {
      int e = t.mono[v];
      if (e == 0) continue;
      Mono m = t.mono;
      m[v] = e - 1;
      K c = t.coeff * coeff_from_long<K>(ring_->field, e);
      if (!c.is_zero()) f.terms_.push_back({std::move(m), std::move(c)});
    }
    f.sort_terms();
    return f;
  }

  K coeff_of(const Mono& m) const {
    for (const auto& t : terms_)
      if (t.mono == m) return t.coeff;
    return coeff_from_long<K>(ring_->field, 0);
  }

  // Keep only terms whose base-variable degree is < n.
  Poly truncate_base(long n) const {
    if (n >= kOrdInf) return *this;
    Poly f(ring_);
    for (const auto& t : terms_) {
      long e = 0;
      for (int v = 0; v < ring_->nvars(); ++v)
        if (ring_->is_base_var(v)) e += t.mono[v];
      if (e < n) f.terms_.push_back(t);
    }
    return f;
  }

  Poly filter(const std::function<bool(const Mono&)>& keep) const {
    Poly f(ring_);
    for (const auto& t : terms_)
      if (keep(t.mono)) f.terms_.push_back(t);
    return f;
  }

  friend bool operator==(const Poly& a, const Poly& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (size_t i = 0; i < a.terms_.size(); ++i)
      if (!(a.terms_[i].mono == b.terms_[i].mono) || a.terms_[i].coeff != b.terms_[i].coeff)
        return false;
    return true;
  }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  static long deg_of(const Mono& m, const std::function<bool(int)>& pred) {
    long d = 0;
    for (size_t v = 0; v < m.size(); ++v)
      if (pred(static_cast<int>(v))) d += m[v];
    return d;
  }

 private:
  static void check_rings(const Poly& a, const Poly& b) {
    if (a.ring_ && b.ring_ && !same_ring(a.ring_, b.ring_))
      throw std::invalid_argument("mixed rings");
  }
  static Poly merged(const Poly& a, const Poly& b, bool subtract) {
    check_rings(a, b);
    const RingPtr& ring = a.ring_ ? a.ring_ : b.ring_;
    Poly f(ring);
    f.terms_.reserve(a.terms_.size() + b.terms_.size());
    size_t i = 0, j = 0;
    while (i < a.terms_.size() && j < b.terms_.size()) {
      int c = ring->cmp(a.terms_[i].mono, b.terms_[j].mono);
      if (c > 0) {
        f.terms_.push_back(a.terms_[i++]);
      } else if (c < 0) {
        const auto& t = b.terms_[j++];
        f.terms_.push_back({t.mono, subtract ? -t.coeff : t.coeff});
      } else {
        K c2 = subtract ? a.terms_[i].coeff - b.terms_[j].coeff
                        : a.terms_[i].coeff + b.terms_[j].coeff;
        if (!c2.is_zero()) f.terms_.push_back({a.terms_[i].mono, std::move(c2)});
        ++i, ++j;
      }
    }
    for (; i < a.terms_.size(); ++i) f.terms_.push_back(a.terms_[i]);
    for (; j < b.terms_.size(); ++j) {
      const auto& t = b.terms_[j];
      f.terms_.push_back({t.mono, subtract ? -t.coeff : t.coeff});
    }
    return f;
  }

  void sort_terms() {
    std::sort(terms_.begin(), terms_.end(), [this](const Term<K>& x, const Term<K>& y) {
      return ring_->cmp(x.mono, y.mono) > 0;
    });
  }
  void normalize() {
    sort_terms();
    std::vector<Term<K>> out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
      if (!out.empty() && out.back().mono == t.mono)
        out.back().coeff += t.coeff;
      else
        out.push_back(std::move(t));
      if (!out.empty() && out.back().coeff.is_zero()) out.pop_back();
    }
    terms_ = std::move(out);
  }

  RingPtr ring_;
  std::vector<Term<K>> terms_;
};

// Substitution: vars absent from the map stay themselves.  Exact, no
// truncation; substituted values must live in the same ring.
template <class K>
Poly<K> substitute(const Poly<K>& f, const std::map<int, Poly<K>>& assign) {
  const RingPtr& ring = f.ring();
  std::map<int, std::vector<Poly<K>>> powers;  // var -> [v^0, v^1, ...]
  auto power = [&](int v, int e) -> const Poly<K>& {
    auto& cache = powers[v];
    if (cache.empty()) cache.push_back(Poly<K>::from_long(ring, 1));
    while (static_cast<int>(cache.size()) <= e)
      cache.push_back(cache.back() * assign.at(v));
    return cache[e];
  };
  Poly<K> out = Poly<K>::zero(ring);
  for (const auto& t : f.terms()) {
    Mono rest = t.mono;
    Poly<K> part = Poly<K>::constant(ring, t.coeff);
    for (int v = 0; v < ring->nvars(); ++v) {
      if (t.mono[v] == 0 || !assign.count(v)) continue;
      rest[v] = 0;
      part = part * power(v, t.mono[v]);
    }
    out += part.term_multiple(rest, coeff_from_long<K>(ring->field, 1));
  }
  return out;
}

// Map a polynomial into another ring by matching variable names.
template <class K>
Poly<K> transport(const Poly<K>& f, const RingPtr& target) {
  if (same_ring(f.ring(), target)) return f;
  const Ring& src = *f.ring();
  std::vector<int> remap(src.nvars(), -1);  // resolved on first use
  std::vector<Term<K>> ts;
  ts.reserve(f.terms().size());
  for (const auto& t : f.terms()) {
    Mono m = mono_one(*target);
    for (int v = 0; v < src.nvars(); ++v) {
      if (t.mono[v] == 0) continue;
      if (remap[v] < 0) remap[v] = target->var(src.var_name(v));
      m[remap[v]] = t.mono[v];
    }
    ts.push_back({std::move(m), t.coeff});
  }
  return Poly<K>::from_terms(target, std::move(ts));
}

template <class K>
std::vector<Poly<K>> transport_all(const std::vector<Poly<K>>& fs, const RingPtr& target) {
  std::vector<Poly<K>> out;
  out.reserve(fs.size());
  for (const auto& f : fs) out.push_back(transport(f, target));
  return out;
}

// Map a polynomial into another ring by explicit variable indices; var_map[v]
// is the target index of source variable v, or -1 when v must not occur.
template <class K>
Poly<K> transport_mapped(const Poly<K>& f, const RingPtr& target,
                         const std::vector<int>& var_map) {
  const Ring& src = *f.ring();
  std::vector<Term<K>> ts;
  ts.reserve(f.terms().size());
  for (const auto& t : f.terms()) {
    Mono m = mono_one(*target);
    for (int v = 0; v < src.nvars(); ++v) {
      if (t.mono[v] == 0) continue;
      if (var_map[v] < 0)
        throw std::invalid_argument("transport_mapped: unmapped variable occurs");
      m[var_map[v]] = t.mono[v];
    }
    ts.push_back({std::move(m), t.coeff});
  }
  return Poly<K>::from_terms(target, std::move(ts));
}

// Split f as a sum of homogeneous parts with respect to degree in the
// variables selected by pred; parts[d] collects the degree-d terms.
template <class K>
std::map<long, Poly<K>> split_by_degree(const Poly<K>& f,
                                        const std::function<bool(int)>& pred) {
  std::map<long, std::vector<Term<K>>> buckets;
  for (const auto& t : f.terms())
    buckets[Poly<K>::deg_of(t.mono, pred)].push_back(t);
  std::map<long, Poly<K>> parts;
  for (auto& [d, ts] : buckets) parts.emplace(d, Poly<K>::from_terms(f.ring(), std::move(ts)));
  return parts;
}

}  // namespace neron
