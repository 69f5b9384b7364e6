#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "neron/hensel.hpp"
#include "neron/ideal.hpp"
#include "neron/jet.hpp"
#include "neron/matrix.hpp"
#include "neron/smoothlocus.hpp"
#include "neron/tower.hpp"

namespace neron {

// Input of the standard-smooth extension step: a level D = (base + optional
// Z-block)/(J + L), chosen images y' for the Y-block, the designated rows f
// of I with their minor systems, and the parameter d with exponent e.  The
// morphism images ybar fix the canonical evaluation point.
template <class K>
struct ExtensionInput {
  RingPtr ring;
  std::vector<int> xvars, zvars, yvars, tvars;
  std::vector<Poly<K>> J, L, I;
  std::vector<InvertedElement<K>> L_inverted;
  std::vector<size_t> L_solve_rows;
  std::vector<int> L_solve_cols;
  std::vector<size_t> f_rows;        // indices into I of the designated rows
  std::vector<MinorSystem<K>> systems;
  std::vector<Poly<K>> d_witness;    // cofactors over I for d - sum N_j M_j
  Poly<K> d;
  long e = 1;
  std::vector<Poly<K>> yprime;       // per Y-variable, in base and Z variables
  std::map<int, Jet<K>> zpoint;      // canonical Z-values, jets in base vars
  std::vector<Poly<K>> ybar;         // morphism images of Y, in base vars
  long precision = 0;                // N
  long defect_floor = -1;            // -1: any division failure throws
  long target_c = 0;
};

// The constructed extension C = (D[Y,T]/(I,g,h)) localized at s s' s'',
// with every auxiliary object of the construction kept for verification and
// for factoring morphisms later.  Large instances leave sprime/sdd empty and
// carry unit evidence at the canonical point instead.
template <class K>
struct SmoothPresentation {
  RingTower<K> tower;
  std::vector<Poly<K>> pi;           // images of Y, the Y-classes themselves
  std::vector<size_t> f_rows;
  std::vector<Poly<K>> f;
  std::vector<MinorSystem<K>> systems;
  std::vector<Poly<K>> d_witness;
  Poly<K> d;
  long e = 1;
  long p = 0;                        // max Y-degree of the designated rows
  long pP = 0;                       // Y-degree of P = sum N_j M_j
  Poly<K> s;
  std::vector<Poly<K>> b;
  std::vector<Poly<K>> yprime, ybar;
  std::vector<Poly<K>> W, h, Q, g;
  std::optional<Poly<K>> sprime, sdd;
  std::optional<PrecisionDivision<K>> s_division;
  std::vector<std::optional<PrecisionDivision<K>>> b_divisions;
  size_t r = 0, n = 0, q = 0;
  long precision = 0, target_c = 0, k = 0;
  std::map<int, Jet<K>> point;       // canonical evaluation point
  std::vector<Poly<K>> cube_gens;    // moduli of the factoring neighborhood
  PrecisionLedger ledger;
  std::shared_ptr<SmoothPresentation<K>> child;  // recursion product, if any
  std::map<int, int> child_var_map;  // child variable -> this ring's variable
};

namespace detail {

template <class K>
long order_of(const Poly<K>& f) {
  return f.is_zero() ? kOrdInf : f.base_order();
}

inline std::function<bool(int)> var_pred(const RingPtr& ring, const std::vector<int>& vars) {
  std::vector<char> flag(ring->nvars(), 0);
  for (int v : vars) flag.at(v) = 1;
  return [flag = std::move(flag)](int v) {
    return v >= 0 && v < static_cast<int>(flag.size()) && flag[v] != 0;
  };
}

template <class K>
Jet<K> jet_pow(const Jet<K>& a, long e, const RingPtr& ring) {
  Jet<K> acc = Jet<K>::of(Poly<K>::from_long(ring, 1), a.prec);
  for (long i = 0; i < e; ++i) acc = acc * a;
  return acc;
}

template <class K>
Grid<Poly<K>> substituted_grid(const Grid<Poly<K>>& m, const std::map<int, Poly<K>>& sub,
                               long N) {
  Grid<Poly<K>> out = m;
  for (auto& row : out)
    for (auto& entry : row) entry = substitute(entry, sub).truncate_base(N);
  return out;
}

// W_i = sum over systems j of (G_j(y') T_j)_i in the shared slot layout.
template <class K>
std::vector<Poly<K>> tangent_offsets(const RingPtr& ring,
                                     const std::vector<Grid<Poly<K>>>& Gy,
                                     const std::vector<int>& tvars, size_t r, size_t n) {
  std::vector<Poly<K>> W(n, Poly<K>::zero(ring));
  for (size_t j = 0; j < Gy.size(); ++j)
    for (size_t i = 0; i < n; ++i)
      for (size_t c = 0; c < n; ++c) {
        if (Gy[j][i][c].is_zero()) continue;
        W[i] += Gy[j][i][c] * Poly<K>::variable(ring, tvars[t_slot(j, c, r, n)]);
      }
  return W;
}

// Layers of f(y' + W) by tangent degree; layer 0 is f(y') on the nose since
// every term of W carries a tangent variable.
template <class K>
std::map<long, Poly<K>> tangent_layers(const Poly<K>& f, const std::vector<int>& yvars,
                                       const std::vector<Poly<K>>& yprime,
                                       const std::vector<Poly<K>>& W,
                                       const std::function<bool(int)>& is_t) {
  std::map<int, Poly<K>> sub;
  for (size_t i = 0; i < yvars.size(); ++i) sub[yvars[i]] = yprime[i] + W[i];
  return split_by_degree(substitute(f, sub), is_t);
}

template <class K>
Poly<K> layer_or_zero(const std::map<long, Poly<K>>& parts, long mu, const RingPtr& ring) {
  auto it = parts.find(mu);
  return it == parts.end() ? Poly<K>::zero(ring) : it->second;
}

// Q = sum_{mu >= 2} s^{p-mu} d^{e(mu-2)} layer_mu, the tail of the expansion
// of s^p f(y' + s^{-1} d^e W) after the constant and linear layers.
template <class K>
Poly<K> assemble_Q(const std::map<long, Poly<K>>& parts, const Poly<K>& s,
                   const Poly<K>& d, long p, long e, const RingPtr& ring) {
  Poly<K> Q = Poly<K>::zero(ring);
  for (const auto& [mu, part] : parts) {
    if (mu < 2) continue;
    if (mu > p) throw std::logic_error("internal error: tangent layer above the row degree");
    Q += s.pow(p - mu) * d.pow(e * (mu - 2)) * part;
  }
  return Q;
}

// s-cleared second unit s^{pP} s'' = s^{pP+1} + sum_{mu>=1} s^{pP-mu}
// d^{e mu - 1} layer_mu(P); localizing at it is localizing at s''.
template <class K>
Poly<K> assemble_sdd(const std::map<long, Poly<K>>& partsP, const Poly<K>& s,
                     const Poly<K>& d, long pP, long e, const RingPtr& ring) {
  Poly<K> out = s.pow(pP + 1);
  for (const auto& [mu, part] : partsP) {
    if (mu < 1) continue;
    if (mu > pP) throw std::logic_error("internal error: tangent layer above the row degree");
    out += s.pow(pP - mu) * d.pow(e * mu - 1) * part;
  }
  return out;
}

// Base order of the weak normal form; kOrdInf when f reduces to zero.
template <class K>
long reduced_order(const Poly<K>& f, const Ideal<K>& rels) {
  if (f.is_zero()) return kOrdInf;
  return order_of(weak_normal_form(f, rels.basis()).remainder);
}

// Order of a jet modulo an ideal, honestly capped at the jet's precision:
// nothing above the precision is claimable.
template <class K>
long jet_order(const Jet<K>& a, const Ideal<K>& rels) {
  return std::min(reduced_order(a.val, rels), a.prec);
}

// Tangent values placing the Y-images over the section: nu solves
// images - y'(z) = d^{e+1} nu with nu in (d^e), and T_j = H_j(y')(z) nu
// solves every h-row; the first r rows of all H_j agree, so the shared
// slots are consistent.  nullopt when the images leave the neighborhood.
template <class K>
std::optional<std::map<int, Jet<K>>> solve_point_tangents(
    const SmoothPresentation<K>& P, const std::map<int, Jet<K>>& zassign,
    const std::vector<Jet<K>>& yimages) {
  const RingPtr& ring = P.tower.ring;
  long N = P.precision;
  std::map<int, Jet<K>> tvals;
  std::vector<Jet<K>> delta;
  long prec = N;
  std::map<int, Poly<K>> ysub;
  for (size_t i = 0; i < P.n; ++i) ysub[P.tower.yvars[i]] = P.yprime[i];
  for (size_t i = 0; i < P.n; ++i) {
    Jet<K> ytilde = evaluate_jet(P.yprime[i], zassign, N);
    delta.push_back(yimages[i] - ytilde);
    prec = std::min(prec, delta.back().prec);
  }
  bool trivial = true;
  for (const auto& dl : delta) trivial = trivial && dl.is_zero();
  if (trivial) {
    for (int tv : P.tower.tvars) tvals[tv] = Jet<K>::of(Poly<K>::zero(ring), prec);
    return tvals;
  }
  Jet<K> dhat = evaluate_jet(P.d, zassign, N);
  if (dhat.is_zero()) return std::nullopt;
  long w = dhat.val.base_order();
  Poly<K> dcube = jet_pow(dhat, 2 * P.e + 1, ring).val;
  Poly<K> dpow = jet_pow(dhat, P.e, ring).val;
  long nuprec = prec - (2 * P.e + 1) * w;
  if (nuprec <= 0) return std::nullopt;
  std::vector<Jet<K>> nu;
  for (size_t i = 0; i < P.n; ++i) {
    auto dv = divide_at_precision(delta[i].val, dcube, P.tower.J, prec);
    if (!dv) return std::nullopt;
    nu.push_back(Jet<K>::of(dpow * dv->quotient, nuprec));
  }
  for (size_t j = 0; j < P.q; ++j) {
    Grid<Poly<K>> Hy = substituted_grid(P.systems[j].H, ysub, N);
    for (size_t c = 0; c < P.n; ++c) {
      if (j > 0 && c < P.r) continue;  // shared slots come from the first system
      Jet<K> acc = Jet<K>::of(Poly<K>::zero(ring), nuprec);
      for (size_t c2 = 0; c2 < P.n; ++c2) {
        if (Hy[c][c2].is_zero()) continue;
        acc = acc + evaluate_jet(Hy[c][c2], zassign, N) * nu[c2];
      }
      tvals[P.tower.tvars[t_slot(j, c, P.r, P.n)]] = acc;
    }
  }
  return tvals;
}

// Canonical point over given images: tail slots and the initial shared
// slots from the h-fit, the shared slots Newton-corrected until every g-row
// vanishes modulo (x)^N, and Y read back from the h-rows.  The g-rows are
// free of Y, so the correction and the Y-images never feed back.
template <class K>
std::map<int, Jet<K>> canonical_point(const SmoothPresentation<K>& P,
                                      const std::map<int, Jet<K>>& zassign,
                                      const std::vector<Jet<K>>& yimages) {
  const RingPtr& ring = P.tower.ring;
  long N = P.precision;
  auto tvals = solve_point_tangents(P, zassign, yimages);
  if (!tvals)
    throw std::runtime_error(
        "morphism images do not lie in the parameter neighborhood of y'");
  std::map<int, Jet<K>> z0 = zassign;
  for (const auto& [v, jv] : *tvals) z0[v] = jv;
  bool solved = true;
  for (const auto& gi : P.g) solved = solved && evaluate_jet(gi, z0, N).is_zero();
  if (!solved) {
    std::vector<int> shared(P.tower.tvars.begin(), P.tower.tvars.begin() + P.r);
    z0 = newton_lift(P.g, shared, z0, N).images;
  }
  Jet<K> spt = evaluate_jet(P.s, zassign, N);
  if (spt.val.constant_term().is_zero())
    throw std::runtime_error("localized element not a unit at evaluation point");
  Jet<K> sinv = series_inverse(spt, N);
  Jet<K> dpow = jet_pow(evaluate_jet(P.d, zassign, N), P.e, ring);
  std::map<int, Jet<K>> point = z0;
  for (size_t i = 0; i < P.n; ++i) {
    Jet<K> ytilde = evaluate_jet(P.yprime[i], zassign, N);
    point[P.tower.yvars[i]] = ytilde + sinv * dpow * evaluate_jet(P.W[i], z0, N);
  }
  return point;
}

// Determinant of the first-r block of (dg/dT) at the point.
template <class K>
K sprime_evidence(const SmoothPresentation<K>& P) {
  const RingPtr& ring = P.tower.ring;
  std::vector<int> shared(P.tower.tvars.begin(), P.tower.tvars.begin() + P.r);
  Grid<Poly<K>> Jg = jacobian(P.g, shared);
  Grid<Jet<K>> at;
  for (size_t i = 0; i < P.r; ++i) {
    at.emplace_back();
    for (size_t c = 0; c < P.r; ++c)
      at.back().push_back(evaluate_jet(Jg[i][c], P.point, P.precision));
  }
  return det_jet(std::move(at), ring, P.precision).val.constant_term();
}

// Constant term of s^{pP} P(y' + s^{-1} d^e W)/d at the point, the second
// unit's value there; computable without expanding P(y' + W) symbolically.
template <class K>
K sdd_evidence(const SmoothPresentation<K>& P) {
  const RingPtr& ring = P.tower.ring;
  long N = P.precision;
  Jet<K> spt = evaluate_jet(P.s, P.point, N);
  if (spt.val.constant_term().is_zero())
    throw std::runtime_error("localized element not a unit at evaluation point");
  Jet<K> sinv = series_inverse(spt, N);
  Jet<K> dhat = evaluate_jet(P.d, P.point, N);
  Jet<K> dpow = jet_pow(dhat, P.e, ring);
  std::map<int, Jet<K>> at = P.point;
  for (size_t i = 0; i < P.n; ++i) {
    Jet<K> ytilde = evaluate_jet(P.yprime[i], P.point, N);
    at[P.tower.yvars[i]] = ytilde + sinv * dpow * evaluate_jet(P.W[i], P.point, N);
  }
  Poly<K> Psum = Poly<K>::zero(ring);
  for (const auto& sys : P.systems) Psum += sys.N * sys.M;
  Jet<K> PE = evaluate_jet(Psum, at, N);
  auto dv = divide_at_precision(PE.val, dhat.val, P.tower.J, N);
  if (!dv)
    throw std::logic_error("internal error: second unit division failed at the point");
  Jet<K> quot = Jet<K>::of(dv->quotient, N - std::max<long>(dhat.val.base_order(), 0));
  return (jet_pow(spt, P.pP, ring) * quot).val.constant_term();
}

}  // namespace detail

template <class K>
SmoothPresentation<K> build_smooth_extension(const ExtensionInput<K>& in) {
  const RingPtr& ring = in.ring;
  size_t n = in.yvars.size();
  size_t r = in.f_rows.size();
  size_t q = in.systems.size();
  long N = in.precision;
  if (n == 0 || r == 0 || r > n || q == 0)
    throw std::invalid_argument("need 1 <= r <= n designated rows and a minor system");
  if (in.yprime.size() != n || in.ybar.size() != n)
    throw std::invalid_argument("y' and the morphism images must cover the Y-block");
  if (in.tvars.size() != r + q * (n - r))
    throw std::invalid_argument("tangent block must have r + q(n-r) variables");
  if (N <= 0) throw std::invalid_argument("positive working precision required");
  if (in.e < 1) throw std::invalid_argument("exponent e must be at least 1");
  for (const auto& sys : in.systems)
    if (sys.H.size() != n || sys.G.size() != n || sys.cols.size() != r)
      throw std::invalid_argument("minor system shape does not match the Y-block");

  SmoothPresentation<K> out;
  out.tower.ring = ring;
  out.tower.xvars = in.xvars;
  out.tower.zvars = in.zvars;
  out.tower.yvars = in.yvars;
  out.tower.tvars = in.tvars;
  out.tower.J = in.J;
  out.tower.L = in.L;
  out.tower.I = in.I;
  out.tower.L_inverted = in.L_inverted;
  out.tower.L_solve_rows = in.L_solve_rows;
  out.tower.L_solve_cols = in.L_solve_cols;
  out.f_rows = in.f_rows;
  out.systems = in.systems;
  out.d_witness = in.d_witness;
  out.d = in.d;
  out.e = in.e;
  out.yprime = in.yprime;
  out.ybar = in.ybar;
  out.r = r;
  out.n = n;
  out.q = q;
  out.precision = N;
  out.target_c = in.target_c;

  auto is_y = detail::var_pred(ring, in.yvars);
  auto is_t = detail::var_pred(ring, in.tvars);
  for (size_t idx : in.f_rows) out.f.push_back(in.I.at(idx));
  out.p = 1;
  for (const auto& fi : out.f) out.p = std::max(out.p, fi.deg_where(is_y));

  Poly<K> P = Poly<K>::zero(ring);
  for (const auto& sys : in.systems) P += sys.N * sys.M;
  out.pP = std::max<long>(P.deg_where(is_y), 0);

  if (!in.d_witness.empty()) {
    if (in.d_witness.size() != in.I.size())
      throw std::invalid_argument("parameter witness must have one cofactor per relation");
    Poly<K> acc = in.d - P;
    for (size_t i = 0; i < in.I.size(); ++i) acc -= in.d_witness[i] * in.I[i];
    if (!acc.is_zero())
      throw std::runtime_error("parameter witness does not reassemble");
  }

  std::vector<Poly<K>> rels = in.J;
  rels.insert(rels.end(), in.L.begin(), in.L.end());
  std::map<int, Poly<K>> ysub;
  for (size_t i = 0; i < n; ++i) ysub[in.yvars[i]] = in.yprime[i];

  Poly<K> Py = substitute(P, ysub);
  auto sdiv = divide_at_precision(Py, in.d, rels, N);
  if (!sdiv)
    throw std::runtime_error(
        "parameter hypothesis violated: d does not divide P(y') modulo the relations");
  out.s = sdiv->quotient;
  out.s_division = *sdiv;

  Poly<K> dcube = in.d.pow(2 * in.e + 1);
  Poly<K> dpow = in.d.pow(in.e);
  std::optional<Ideal<K>> defect_rels;
  std::vector<Poly<K>> fy;
  for (size_t i = 0; i < r; ++i) {
    fy.push_back(substitute(out.f[i], ysub));
    auto bd = divide_at_precision(fy[i], dcube, rels, N);
    if (bd) {
      out.b.push_back((dpow * bd->quotient).truncate_base(N));
      out.ledger.note("b[" + std::to_string(i) + "]", "(d^(2e+1)) + relations",
                      detail::order_of(bd->residual(fy[i], dcube, rels)));
      out.b_divisions.push_back(std::move(bd));
      continue;
    }
    if (!defect_rels) {
      std::vector<Poly<K>> gens = rels;
      gens.push_back(dcube);
      defect_rels = Ideal<K>(ring, std::move(gens));
    }
    long defect = detail::reduced_order(fy[i], *defect_rels);
    if (in.defect_floor < 0 || defect < in.defect_floor)
      throw std::runtime_error(
          "defect hypothesis violated: f(y') is not divisible by d^(e+1) at the working "
          "precision");
    out.b.push_back(Poly<K>::zero(ring));
    out.b_divisions.push_back(std::nullopt);
    out.ledger.note("b-defect[" + std::to_string(i) + "]", "(d^(2e+1)) + relations", defect);
  }

  std::vector<Grid<Poly<K>>> Gy;
  for (const auto& sys : in.systems)
    Gy.push_back(detail::substituted_grid(sys.G, ysub, N));
  out.W = detail::tangent_offsets(ring, Gy, in.tvars, r, n);

  for (size_t i = 0; i < n; ++i) {
    Poly<K> Yi = Poly<K>::variable(ring, in.yvars[i]);
    out.h.push_back(out.s * (Yi - in.yprime[i]) - dpow * out.W[i]);
  }

  for (size_t i = 0; i < r; ++i) {
    auto parts = detail::tangent_layers(out.f[i], in.yvars, in.yprime, out.W, is_t);
    if (detail::layer_or_zero(parts, 0, ring) != fy[i])
      throw std::logic_error("internal error: constant tangent layer disagrees with f(y')");
    Poly<K> l1 = detail::layer_or_zero(parts, 1, ring) -
                 Py * Poly<K>::variable(ring, in.tvars[i]);
    if (!l1.is_zero() && l1.base_order() < N)
      throw std::logic_error("internal error: linear tangent layer disagrees with P(y')");
    out.Q.push_back(detail::assemble_Q(parts, out.s, in.d, out.p, in.e, ring));
    out.g.push_back(out.s.pow(out.p) * out.b[i] +
                    out.s.pow(out.p) * Poly<K>::variable(ring, in.tvars[i]) +
                    in.d.pow(in.e - 1) * out.Q[i]);
  }

  bool small = r <= 8 && n <= 8;
  if (small) {
    std::vector<int> shared(in.tvars.begin(), in.tvars.begin() + r);
    out.sprime = det(jacobian(out.g, shared), ring);
    Poly<K> diff = *out.sprime - out.s.pow(static_cast<long>(r) * out.p);
    for (const auto& t : diff.terms())
      if (Poly<K>::deg_of(t.mono, is_t) == 0)
        throw std::logic_error("internal error: first unit minor is not s^(rp) modulo (T)");
    auto partsP = detail::tangent_layers(P, in.yvars, in.yprime, out.W, is_t);
    if (detail::layer_or_zero(partsP, 0, ring) != Py)
      throw std::logic_error("internal error: constant tangent layer disagrees with P(y')");
    out.sdd = detail::assemble_sdd(partsP, out.s, in.d, out.pP, in.e, ring);
  }

  out.cube_gens = {dcube};
  for (size_t i = 0; i < n; ++i)
    out.pi.push_back(Poly<K>::variable(ring, in.yvars[i]));

  // canonical evaluation point over the morphism images
  std::vector<Jet<K>> yimages;
  for (size_t i = 0; i < n; ++i) yimages.push_back(Jet<K>::of(in.ybar[i], N));
  out.point = detail::canonical_point(out, in.zpoint, yimages);

  // precision claims at the canonical point
  Ideal<K> baseJ(ring, in.J);
  auto rows_order = [&](const std::vector<Poly<K>>& rows) {
    long o = kOrdInf;
    for (const auto& row : rows)
      o = std::min(o, detail::jet_order(evaluate_jet(row, out.point, N), baseJ));
    return o;
  };
  long hmin = rows_order(out.h);
  if (hmin < N) throw std::logic_error("internal error: h does not vanish at the point");
  out.ledger.note("h(point)", "J", hmin);

  Jet<K> dz = evaluate_jet(in.d, in.zpoint, N);
  long dord = dz.is_zero() ? 0 : dz.val.base_order();
  long gmin = rows_order(out.g);
  if (gmin < N - (in.e + 1) * dord)
    throw std::logic_error("internal error: g does not vanish at the point");
  out.ledger.note("g(point)", "J", gmin);

  Ideal<K> srels = [&] {
    std::vector<Poly<K>> gens = rels;
    gens.push_back(in.d);
    return Ideal<K>(ring, std::move(gens));
  }();
  out.ledger.note("s-congruence", "(d) + relations",
                  detail::reduced_order(out.s - Poly<K>::from_long(ring, 1), srels));

  out.ledger.note("I(ybar)", "J", rows_order(in.I));
  if (!in.L.empty()) out.ledger.note("L(zpoint)", "J", rows_order(in.L));

  long dmin = kOrdInf;
  for (size_t i = 0; i < n; ++i) {
    const Jet<K>& yj = out.point.at(in.yvars[i]);
    dmin = std::min(dmin, std::min(detail::order_of(yj.val - in.ybar[i]), yj.prec));
  }
  if (dmin < in.target_c)
    throw std::logic_error("internal error: composite misses the morphism images");
  out.ledger.note("diagram", "0", dmin);

  // kernel claims through the substitution killing h, available whenever s
  // has an exact inverse (any nonzero constant; the drivers arrange s = 1)
  if (out.s.is_constant() && !out.s.constant_term().is_zero()) {
    Poly<K> sinv = Poly<K>::constant(
        ring, coeff_from_long<K>(ring->field, 1) / out.s.constant_term());
    std::map<int, Poly<K>> hsub;
    for (size_t i = 0; i < n; ++i)
      hsub[in.yvars[i]] = in.yprime[i] + sinv * (dpow * out.W[i]);
    Ideal<K> relsN = detail::precision_ideal(ring, rels, N);
    Grid<Poly<K>> Jf = jacobian(out.f, in.yvars);
    for (size_t i = 0; i < r; ++i) {
      Poly<K> lin = Poly<K>::zero(ring);
      for (size_t c = 0; c < n; ++c)
        lin += substitute(Jf[i][c], ysub).truncate_base(N) * out.W[c];
      Poly<K> taylor = out.s.pow(out.p) * out.f[i] - out.s.pow(out.p) * fy[i] -
                       out.s.pow(out.p - 1) * dpow * lin - in.d.pow(2 * in.e) * out.Q[i];
      out.ledger.note("taylor-split[" + std::to_string(i) + "]", "(h) + relations",
                      detail::reduced_order(substitute(taylor, hsub), relsN));
      Poly<K> kernel = out.s.pow(out.p) * out.f[i] - in.d.pow(in.e + 1) * out.g[i];
      out.ledger.note("kernel[" + std::to_string(i) + "]", "(h) + relations",
                      detail::reduced_order(substitute(kernel, hsub), relsN));
    }
  }

  // localized elements with unit evidence at the point
  K sev = evaluate_jet(out.s, out.point, N).val.constant_term();
  K spev = detail::sprime_evidence(out);
  K sddev = detail::sdd_evidence(out);
  if (sev.is_zero() || spev.is_zero() || sddev.is_zero())
    throw std::runtime_error("localized element not a unit at evaluation point");
  out.tower.gh = out.g;
  out.tower.gh.insert(out.tower.gh.end(), out.h.begin(), out.h.end());
  out.tower.C_inverted = {{"s", out.s, sev},
                          {"s'", out.sprime, spev},
                          {"s''", out.sdd, sddev}};
  return out;
}

// Full revalidation of a constructed presentation: the matrix identities,
// the witnessed divisions, the structural equations for W, h, Q, g, the
// congruences for s, s', s'', the kernel identities through the h-killing
// substitution, and every ledger claim at its recorded order.
template <class K>
IdentityReport verify_standard_smooth(const SmoothPresentation<K>& P) {
  IdentityReport rep;
  auto fail = [&](const std::string& w) { detail::report_fail(rep, w); };
  const RingPtr& ring = P.tower.ring;
  long N = P.precision;
  size_t r = P.r, n = P.n, q = P.q;
  if (P.f.size() != r || P.h.size() != n || P.g.size() != r || P.Q.size() != r ||
      P.W.size() != n || P.b.size() != r || P.systems.size() != q ||
      P.yprime.size() != n || P.ybar.size() != n || P.tower.yvars.size() != n ||
      P.tower.tvars.size() != r + q * (n - r)) {
    fail("presentation shapes are inconsistent");
    return rep;
  }

  auto is_t = detail::var_pred(ring, P.tower.tvars);
  Grid<Poly<K>> Jf = jacobian(P.f, P.tower.yvars);
  for (size_t j = 0; j < q; ++j) {
    auto sub = verify_minor_identities(P.systems[j], Jf, ring);
    for (const auto& w : sub.failures)
      fail("system " + std::to_string(j) + ":" + w);
  }

  Poly<K> Psum = Poly<K>::zero(ring);
  for (const auto& sys : P.systems) Psum += sys.N * sys.M;
  if (!P.d_witness.empty()) {
    if (P.d_witness.size() != P.tower.I.size()) {
      fail("parameter witness shape");
    } else {
      Poly<K> acc = P.d - Psum;
      for (size_t i = 0; i < P.tower.I.size(); ++i) acc -= P.d_witness[i] * P.tower.I[i];
      if (!acc.is_zero()) fail("parameter witness does not reassemble");
    }
  }

  std::map<int, Poly<K>> ysub;
  for (size_t i = 0; i < n; ++i) ysub[P.tower.yvars[i]] = P.yprime[i];
  Poly<K> Py = substitute(Psum, ysub);
  std::vector<Poly<K>> rels = P.tower.J;
  rels.insert(rels.end(), P.tower.L.begin(), P.tower.L.end());

  if (!P.s_division) {
    fail("s division missing");
  } else {
    if (P.s_division->quotient != P.s) fail("s division quotient mismatch");
    if (detail::order_of(P.s_division->residual(Py, P.d, rels)) < N)
      fail("s division residual below precision");
  }

  Poly<K> dcube = P.d.pow(2 * P.e + 1);
  Poly<K> dpow = P.d.pow(P.e);
  std::vector<Poly<K>> fy;
  for (size_t i = 0; i < r; ++i) fy.push_back(substitute(P.f[i], ysub));
  std::optional<Ideal<K>> defect_rels;
  for (size_t i = 0; i < r; ++i) {
    const std::string tag = "[" + std::to_string(i) + "]";
    if (i < P.b_divisions.size() && P.b_divisions[i]) {
      const auto& bd = *P.b_divisions[i];
      if (P.b[i] != (dpow * bd.quotient).truncate_base(N)) fail("b" + tag + " shape");
      long res = detail::order_of(bd.residual(fy[i], dcube, rels));
      const auto* claim = P.ledger.find("b" + tag);
      if (!claim)
        fail("b" + tag + " claim missing");
      else if (res < claim->order)
        fail("b" + tag + " claim overstated");
    } else {
      const auto* claim = P.ledger.find("b-defect" + tag);
      if (!claim) {
        fail("b" + tag + " claim missing");
      } else {
        if (!P.b[i].is_zero()) fail("b" + tag + " must be zero under a defect claim");
        if (!defect_rels) {
          std::vector<Poly<K>> gens = rels;
          gens.push_back(dcube);
          defect_rels = detail::precision_ideal(ring, std::move(gens), N);
        }
        if (detail::reduced_order(fy[i], *defect_rels) < claim->order)
          fail("b-defect" + tag + " claim overstated");
      }
    }
  }

  std::vector<Grid<Poly<K>>> Gy;
  for (const auto& sys : P.systems)
    Gy.push_back(detail::substituted_grid(sys.G, ysub, N));
  auto Wr = detail::tangent_offsets(ring, Gy, P.tower.tvars, r, n);
  for (size_t i = 0; i < n; ++i)
    if (Wr[i] != P.W[i]) fail("W row " + std::to_string(i) + " disagrees with the adjugates");

  for (size_t i = 0; i < n; ++i) {
    Poly<K> Yi = Poly<K>::variable(ring, P.tower.yvars[i]);
    if (P.h[i] != P.s * (Yi - P.yprime[i]) - dpow * P.W[i])
      fail("h row " + std::to_string(i) + " structure");
  }

  for (size_t i = 0; i < r; ++i) {
    const std::string tag = std::to_string(i);
    auto parts = detail::tangent_layers(P.f[i], P.tower.yvars, P.yprime, P.W, is_t);
    if (detail::layer_or_zero(parts, 0, ring) != fy[i]) fail("layer 0 mismatch row " + tag);
    Poly<K> l1 = detail::layer_or_zero(parts, 1, ring) -
                 Py * Poly<K>::variable(ring, P.tower.tvars[i]);
    if (!l1.is_zero() && l1.base_order() < N) fail("layer 1 mismatch row " + tag);
    if (P.Q[i] != detail::assemble_Q(parts, P.s, P.d, P.p, P.e, ring))
      fail("Q row " + tag + " mismatch");
    for (const auto& t : P.Q[i].terms())
      if (Poly<K>::deg_of(t.mono, is_t) < 2) {
        fail("Q row " + tag + " tangent order");
        break;
      }
    if (P.g[i] != P.s.pow(P.p) * P.b[i] +
                      P.s.pow(P.p) * Poly<K>::variable(ring, P.tower.tvars[i]) +
                      P.d.pow(P.e - 1) * P.Q[i])
      fail("g row " + tag + " structure");
  }

  std::vector<int> shared(P.tower.tvars.begin(), P.tower.tvars.begin() + r);
  Grid<Poly<K>> Jg = jacobian(P.g, shared);
  if (P.sprime) {
    if (*P.sprime != det(Jg, ring)) fail("s' determinant mismatch");
    Poly<K> diff = *P.sprime - P.s.pow(static_cast<long>(r) * P.p);
    for (const auto& t : diff.terms())
      if (Poly<K>::deg_of(t.mono, is_t) == 0) {
        fail("s' tangent congruence");
        break;
      }
  } else {
    std::map<int, Poly<K>> t0;
    for (int tv : P.tower.tvars) t0[tv] = Poly<K>::zero(ring);
    Poly<K> sp = P.s.pow(P.p);
    for (size_t i = 0; i < r; ++i)
      for (size_t c = 0; c < r; ++c) {
        Poly<K> want = (i == c) ? sp : Poly<K>::zero(ring);
        if (substitute(Jg[i][c], t0) != want) {
          fail("(dg/dT) at T = 0 is not s^p Id");
          i = r;
          break;
        }
      }
  }
  if (P.sdd) {
    auto partsP = detail::tangent_layers(Psum, P.tower.yvars, P.yprime, P.W, is_t);
    if (*P.sdd != detail::assemble_sdd(partsP, P.s, P.d, P.pP, P.e, ring))
      fail("s'' formula mismatch");
    Poly<K> diff = *P.sdd - P.s.pow(P.pP + 1);
    for (const auto& t : diff.terms())
      if (Poly<K>::deg_of(t.mono, is_t) == 0) {
        fail("s'' tangent congruence");
        break;
      }
  }

  // ledger claims at the canonical point
  Ideal<K> baseN = detail::precision_ideal(ring, P.tower.J, N);
  auto check_point_claim = [&](const char* name, const std::vector<Poly<K>>& rows,
                               long floor) {
    const auto* claim = P.ledger.find(name);
    if (!claim) {
      fail(std::string(name) + " claim missing");
      return;
    }
    long actual = kOrdInf;
    for (const auto& row : rows)
      actual =
          std::min(actual, detail::reduced_order(evaluate_jet(row, P.point, N).val, baseN));
    if (actual < claim->order) fail(std::string(name) + " claim overstated");
    if (claim->order < floor) fail(std::string(name) + " claim below the required floor");
  };
  Jet<K> dz = evaluate_jet(P.d, P.point, N);
  long dord = dz.is_zero() ? 0 : dz.val.base_order();
  check_point_claim("h(point)", P.h, N);
  check_point_claim("g(point)", P.g, N - (P.e + 1) * dord);
  check_point_claim("I(ybar)", P.tower.I, 0);
  if (!P.tower.L.empty()) check_point_claim("L(zpoint)", P.tower.L, 0);

  {
    Ideal<K> srels = [&] {
      std::vector<Poly<K>> gens = rels;
      gens.push_back(P.d);
      return detail::precision_ideal(ring, std::move(gens), N);
    }();
    const auto* claim = P.ledger.find("s-congruence");
    if (!claim)
      fail("s-congruence claim missing");
    else if (detail::reduced_order(P.s - Poly<K>::from_long(ring, 1), srels) < claim->order)
      fail("s-congruence claim overstated");
  }
  {
    const auto* claim = P.ledger.find("diagram");
    if (!claim) {
      fail("diagram claim missing");
    } else {
      long actual = kOrdInf;
      for (size_t i = 0; i < n; ++i)
        actual = std::min(actual,
                          detail::order_of((P.point.at(P.tower.yvars[i]).val - P.ybar[i])
                                               .truncate_base(N)));
      if (actual < claim->order) fail("diagram claim overstated");
      if (claim->order < P.target_c) fail("diagram claim below the required floor");
    }
  }

  if (P.s.is_constant() && !P.s.constant_term().is_zero()) {
    Poly<K> sinv = Poly<K>::constant(
        ring, coeff_from_long<K>(ring->field, 1) / P.s.constant_term());
    std::map<int, Poly<K>> hsub;
    for (size_t i = 0; i < n; ++i)
      hsub[P.tower.yvars[i]] = P.yprime[i] + sinv * (dpow * P.W[i]);
    Ideal<K> relsN = detail::precision_ideal(ring, rels, N);
    for (size_t i = 0; i < r; ++i) {
      const std::string tag = "[" + std::to_string(i) + "]";
      Poly<K> lin = Poly<K>::zero(ring);
      for (size_t c = 0; c < n; ++c)
        lin += substitute(Jf[i][c], ysub).truncate_base(N) * P.W[c];
      Poly<K> taylor = P.s.pow(P.p) * P.f[i] - P.s.pow(P.p) * fy[i] -
                       P.s.pow(P.p - 1) * dpow * lin - P.d.pow(2 * P.e) * P.Q[i];
      const auto* tclaim = P.ledger.find("taylor-split" + tag);
      if (!tclaim)
        fail("taylor-split" + tag + " claim missing");
      else if (detail::reduced_order(substitute(taylor, hsub), relsN) < tclaim->order)
        fail("taylor-split" + tag + " claim overstated");
      else if (tclaim->order < N)
        fail("taylor-split" + tag + " claim below the required floor");
      Poly<K> kernel = P.s.pow(P.p) * P.f[i] - P.d.pow(P.e + 1) * P.g[i];
      const auto* kclaim = P.ledger.find("kernel" + tag);
      if (!kclaim)
        fail("kernel" + tag + " claim missing");
      else if (detail::reduced_order(substitute(kernel, hsub), relsN) < kclaim->order)
        fail("kernel" + tag + " claim overstated");
    }
  } else {
    fail("verification requires the unit normalization s = 1");
  }

  if (P.tower.C_inverted.size() != 3) {
    fail("expected the three localized elements s, s', s''");
  } else {
    try {
      K sev = evaluate_jet(P.s, P.point, N).val.constant_term();
      K spev = detail::sprime_evidence(P);
      K sddev = detail::sdd_evidence(P);
      const K want[3] = {sev, spev, sddev};
      for (size_t i = 0; i < 3; ++i) {
        if (!(P.tower.C_inverted[i].evidence == want[i]))
          fail(P.tower.C_inverted[i].name + " evidence mismatch");
        if (want[i].is_zero())
          fail(P.tower.C_inverted[i].name + " is not a unit at the point");
      }
      if (P.sprime && !(evaluate_jet(*P.sprime, P.point, N).val.constant_term() == spev))
        fail("s' evidence disagrees with the stored value");
      if (P.sdd && !(evaluate_jet(*P.sdd, P.point, N).val.constant_term() == sddev))
        fail("s'' evidence disagrees with the stored value");
    } catch (const std::exception& ex) {
      fail(std::string("unit evidence recomputation failed: ") + ex.what());
    }
  }
  return rep;
}

}  // namespace neron
