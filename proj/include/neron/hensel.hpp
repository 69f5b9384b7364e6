#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "neron/groebner.hpp"
#include "neron/jet.hpp"
#include "neron/matrix.hpp"

namespace neron {

// Outcome of a Newton lift: the images carry every input variable at the
// requested precision, and residual_orders records the minimal base order of
// the system at the start and after each correction (kOrdInf when it vanished
// identically).  A healthy run at least doubles the order per entry.
template <class K>
struct NewtonResult {
  std::map<int, Jet<K>> images;
  std::vector<long> residual_orders;
};

namespace detail {

template <class K>
bool pure_base(const Poly<K>& f, const Ring& ring) {
  for (const auto& t : f.terms())
    for (int v = 0; v < ring.nvars(); ++v)
      if (t.mono[v] != 0 && !ring.is_base_var(v)) return false;
  return true;
}

}  // namespace detail

// Implicit-function-theorem lifting.  g is a square system in the solved
// variables; z0 assigns a base-ring jet to every non-base variable occurring
// in g.  The solved coordinates are corrected until g vanishes modulo
// (x)^N; all other coordinates pass through unchanged, which pins the
// solution uniquely at that precision.  The initial residual must have
// positive base order, and the Jacobian minor on the solved columns must be
// a unit at the closed point.
template <class K>
NewtonResult<K> newton_lift(const std::vector<Poly<K>>& g,
                            const std::vector<int>& solve_vars,
                            const std::map<int, Jet<K>>& z0, long N) {
  if (g.empty()) throw std::invalid_argument("newton_lift on an empty system");
  if (solve_vars.size() != g.size())
    throw std::invalid_argument("newton_lift needs one equation per solved variable");
  if (N < 1) throw std::invalid_argument("newton_lift needs a positive precision");
  const RingPtr& ring = g.front().ring();
  const size_t q = g.size();
  const Poly<K> zero = Poly<K>::zero(ring);

  for (const auto& [v, j] : z0)
    if (!detail::pure_base(j.val, *ring))
      throw std::invalid_argument("newton_lift: image of " + ring->var_name(v) +
                                  " is not a base-ring jet");
  for (const auto& f : g)
    for (const auto& t : f.terms())
      for (int v = 0; v < ring->nvars(); ++v)
        if (t.mono[v] != 0 && !ring->is_base_var(v) && !z0.count(v))
          throw std::invalid_argument("newton_lift: variable without an image: " +
                                      ring->var_name(v));

  std::map<int, Jet<K>> cur;
  for (const auto& [v, j] : z0) cur[v] = Jet<K>::of(j.val, N);

  std::vector<Poly<K>> rs(q, zero);
  auto refresh = [&]() {
    long o = kOrdInf;
    for (size_t i = 0; i < q; ++i) {
      rs[i] = evaluate_jet(g[i], cur, N).val;
      if (!rs[i].is_zero()) o = std::min(o, rs[i].base_order());
    }
    return o;
  };

  long cur_ord = refresh();
  std::vector<long> trace{cur_ord};
  if (cur_ord < 1)
    throw std::runtime_error("insufficient initial precision: the residual has a constant term");

  const Grid<Poly<K>> Jsym = jacobian(g, solve_vars);
  while (cur_ord < N) {
    const long target = std::min(2 * cur_ord, N);
    Grid<Poly<K>> Jv(q, std::vector<Poly<K>>(q, zero));
    for (size_t i = 0; i < q; ++i)
      for (size_t j = 0; j < q; ++j) Jv[i][j] = evaluate_jet(Jsym[i][j], cur, N).val;
    Poly<K> dv = laplace_det(Jv, zero);
    if (dv.is_zero() || dv.base_order() != 0)
      throw std::runtime_error("IFT hypothesis fails: the selected minor is not a unit");
    Jet<K> dinv = series_inverse(Jet<K>::of(dv, N), N);
    Grid<Poly<K>> adj = adjugate(Jv, ring);
    for (size_t i = 0; i < q; ++i) {
      Poly<K> num = zero;
      for (size_t j = 0; j < q; ++j) num = num + adj[i][j] * rs[j];
      Poly<K> delta = (num * dinv.val).truncate_base(target);
      int v = solve_vars[i];
      cur[v] = Jet<K>::of((cur[v].val - delta).truncate_base(N), N);
    }
    cur_ord = refresh();
    trace.push_back(cur_ord);
    if (cur_ord < target)
      throw std::logic_error("lifting stalled: the residual order failed to double");
  }
  return {std::move(cur), std::move(trace)};
}

// Lift images of a presentation that are only valid modulo a quotient ideal of
// the base to images valid modulo (x)^N.  Every relation evaluated at zbar
// must lie in the quotient ideal; the solved coordinates then converge to the
// unique correction agreeing with zbar modulo the initial defect order.
template <class K>
NewtonResult<K> lift_presentation_morphism(const std::vector<Poly<K>>& relations,
                                           const std::vector<int>& solve_vars,
                                           const std::vector<Poly<K>>& quotient,
                                           const std::map<int, Jet<K>>& zbar,
                                           long N) {
  for (const auto& f : relations) {
    Jet<K> r = evaluate_jet(f, zbar, kOrdInf);
    if (r.val.is_zero()) continue;
    if (quotient.empty() || !weak_normal_form(r.val, quotient).remainder.is_zero())
      throw std::runtime_error(
          "images violate the relations modulo the quotient ideal");
  }
  return newton_lift(relations, solve_vars, zbar, N);
}

}  // namespace neron
