#pragma once

#include <optional>
#include <string>
#include <vector>

#include "neron/groebner.hpp"
#include "neron/smoothlocus.hpp"

namespace neron {

// A presentation A[Y...]/I of an algebra over the local base ring carried by
// the ring's base block; gens generate I.
template <class K>
struct Presentation {
  RingPtr ring;
  std::vector<Poly<K>> gens;
};

template <class K>
struct SymAlgebraResult {
  Presentation<K> pres;   // ring gains one linear variable per generator
  std::string tblock;     // name of the adjoined block; the retraction kills it
  int relations_kept = 0;
};

// Symmetric algebra of the conormal module I/I^2: adjoin one linear variable
// per generator and impose the syzygy relations sum a_i*U_i whose coefficient
// vectors present I/I^2.  Rows with every coefficient in I are redundant,
// since I times any variable already lies in the extended ideal.  Kept rows
// are exact syzygies, so substituting the generators for the variables kills
// them identically.
template <class K>
SymAlgebraResult<K> sym_algebra(const Presentation<K>& pres,
                                const std::string& tblock = "U") {
  size_t l = pres.gens.size();
  if (l == 0) return {pres, tblock, 0};
  std::vector<std::vector<Poly<K>>> rows = syzygies(pres.ring, pres.gens);
  RingPtr ext = Ring::extend(pres.ring, {tblock, static_cast<int>(l),
                                         BlockRole::Tangent});
  std::vector<int> tvars = ext->block_vars(tblock);
  Ideal<K> I(pres.ring, pres.gens);
  SymAlgebraResult<K> out{{ext, transport_all(pres.gens, ext)}, tblock, 0};
  for (const auto& row : rows) {
    bool redundant = true;
    for (const auto& a : row)
      if (!a.is_zero() && !is_member(a, I)) redundant = false;
    if (redundant) continue;
    Poly<K> rel = Poly<K>::zero(ext);
    for (size_t i = 0; i < l; ++i) {
      if (row[i].is_zero()) continue;
      rel += transport(row[i], ext) * Poly<K>::variable(ext, tvars[i]);
    }
    out.pres.gens.push_back(std::move(rel));
    out.relations_kept++;
  }
  return out;
}

template <class K>
struct AdjoinTrivialResult {
  Presentation<K> pres;      // fresh ring: base blocks plus one flat Y block
  int old_count = 0;         // old non-base variables, mapped to Y1..Y_old
  int z_lo = 0;              // ring index of the first appended variable
  std::vector<int> var_map;  // old ring index -> new ring index
};

// Adjoin one trivially-presented variable per existing non-base variable:
// the new presentation has generators (I, Z) with Z fresh, and the quotient
// is unchanged because Z maps to zero under the evident section.  All
// non-base variables are renamed into a single flat Y block so later stages
// see a uniform presentation.
template <class K>
AdjoinTrivialResult<K> adjoin_trivial(const Presentation<K>& pres,
                                      const std::string& yname = "Y") {
  const Ring& src = *pres.ring;
  if (src.style == OrderStyle::Custom)
    throw std::invalid_argument("adjoin_trivial requires a block order style");
  std::vector<int> old_vars = src.non_base_vars();
  int n = static_cast<int>(old_vars.size());

  std::vector<VarBlock> blocks;
  for (int b = 0; b < src.block_count(); ++b)
    if (src.blocks[b].role == BlockRole::Base) blocks.push_back(src.blocks[b]);
  blocks.push_back({yname, 2 * n, BlockRole::Tower});
  RingPtr flat = Ring::make(src.field, std::move(blocks), src.style);

  AdjoinTrivialResult<K> out;
  out.old_count = n;
  out.var_map.assign(src.nvars(), -1);
  std::vector<int> yvars = flat->block_vars(yname);
  for (int v = 0; v < src.nvars(); ++v)
    if (src.is_base_var(v)) out.var_map[v] = flat->var(src.var_name(v));
  for (int k = 0; k < n; ++k) out.var_map[old_vars[k]] = yvars[k];
  out.z_lo = yvars[n];

  out.pres.ring = flat;
  for (const auto& g : pres.gens)
    out.pres.gens.push_back(transport_mapped(g, flat, out.var_map));
  for (int k = n; k < 2 * n; ++k)
    out.pres.gens.push_back(Poly<K>::variable(flat, yvars[k]));
  return out;
}

template <class K>
struct MinorHint {
  Poly<K> N;
  std::vector<int> cols;
};

template <class K>
struct SystemHint {
  std::vector<int> f_indices;
  std::vector<MinorHint<K>> minors;
  int t = 1;
};

struct FindBudget {
  int max_power = 6;
  size_t max_subsets = 64;
  size_t max_minors = 64;
};

// A certified solution of the system search: d = gamma^t decomposes as
// sum N_i*M_i plus a combination of the presentation's generators, with each
// N_i in ((f):I) and each M_i an r x r minor of the Jacobian of f.
template <class K>
struct FoundSystem {
  std::vector<int> f_indices;
  int t = 1;
  Poly<K> d;
  std::vector<MinorSystem<K>> systems;
  std::vector<Poly<K>> ideal_cofactors;  // over the presentation generators

  bool reassembles(const Presentation<K>& pres) const {
    Poly<K> acc = d;
    for (const auto& sys : systems) acc -= sys.N * sys.M;
    for (size_t k = 0; k < pres.gens.size(); ++k)
      acc -= ideal_cofactors[k] * pres.gens[k];
    return acc.is_zero();
  }
};

namespace detail {

// True when the witness multiplier is a nonzero constant, which can then be
// divided out to leave an exact polynomial decomposition.
template <class K>
bool constant_unit(const Poly<K>& u) {
  return !u.is_zero() && u.terms().size() == 1 && mono_is_one(u.lm());
}

template <class K>
std::optional<FoundSystem<K>> assemble_found(
    const Presentation<K>& pres, const std::vector<int>& f_indices,
    const Grid<Poly<K>>& J, const std::vector<std::vector<int>>& minor_cols,
    const std::vector<Poly<K>>& colon_gens, const TrackedBasis<K>& tb,
    const std::vector<Poly<K>>& query_gens, const Poly<K>& d, int t) {
  auto w = membership_witness(d, query_gens, tb);
  if (!w) return std::nullopt;
  if (!constant_unit(w->unit)) return std::nullopt;
  K uinv = w->unit.lc().inv();

  FoundSystem<K> out;
  out.f_indices = f_indices;
  out.t = t;
  out.d = d;
  size_t nprod = colon_gens.size() * minor_cols.size();
  for (size_t p = 0; p < nprod; ++p) {
    Poly<K> coeff = w->cofactors[p].scaled(uinv);
    if (coeff.is_zero()) continue;
    size_t c = p / minor_cols.size(), m = p % minor_cols.size();
    MinorSystem<K> sys =
        make_minor_system(pres.ring, J, minor_cols[m], coeff * colon_gens[c]);
    out.systems.push_back(std::move(sys));
  }
  for (size_t k = 0; k < pres.gens.size(); ++k)
    out.ideal_cofactors.push_back(w->cofactors[nprod + k].scaled(uinv));
  return out;
}

}  // namespace detail

// Search for a system f of generators, minors M_i of its Jacobian, and
// cofactors N_i in ((f):I) with gamma^t = sum N_i*M_i modulo I, exactly
// witnessed.  Subsets are tried by increasing size, minors by column order,
// powers from 1 up.  An explicit hint replaces the search with validation.
template <class K>
std::optional<FoundSystem<K>> find_system(
    const Poly<K>& gamma, const Presentation<K>& pres,
    const std::vector<int>& vars, const FindBudget& budget = {},
    const std::optional<SystemHint<K>>& hint = std::nullopt) {
  const RingPtr& ring = pres.ring;
  size_t l = pres.gens.size();
  int n = static_cast<int>(vars.size());

  auto subset_covers = [&](const std::vector<Poly<K>>& f) {
    Ideal<K> ff(ring, f);
    for (const auto& g : pres.gens)
      if (!is_member(g, ff)) return false;
    return true;
  };

  if (hint) {
    std::vector<Poly<K>> f;
    for (int i : hint->f_indices) f.push_back(pres.gens[i]);
    Grid<Poly<K>> J = jacobian(f, vars);
    Ideal<K> ff(ring, f);
    Poly<K> d = gamma.pow(hint->t);
    Poly<K> rest = d;
    FoundSystem<K> out;
    out.f_indices = hint->f_indices;
    out.t = hint->t;
    out.d = d;
    for (const auto& mh : hint->minors) {
      for (const auto& g : pres.gens)
        if (!is_member(mh.N * g, ff)) return std::nullopt;
      MinorSystem<K> sys = make_minor_system(ring, J, mh.cols, mh.N);
      rest -= sys.N * sys.M;
      out.systems.push_back(std::move(sys));
    }
    auto w = membership_witness(rest, pres.gens);
    if (!w || !detail::constant_unit(w->unit)) return std::nullopt;
    K uinv = w->unit.lc().inv();
    for (auto& c : w->cofactors) out.ideal_cofactors.push_back(c.scaled(uinv));
    return out;
  }

  size_t subsets_tried = 0;
  for (size_t size = 1; size <= l && subsets_tried < budget.max_subsets; ++size) {
    if (static_cast<int>(size) > n) break;
    for (const auto& idx : detail::column_subsets(
             static_cast<int>(l), static_cast<int>(size),
             budget.max_subsets - subsets_tried)) {
      ++subsets_tried;
      std::vector<Poly<K>> f;
      for (int i : idx) f.push_back(pres.gens[i]);
      Grid<Poly<K>> J = jacobian(f, vars);
      auto minor_cols =
          detail::column_subsets(n, static_cast<int>(size), budget.max_minors);
      std::vector<Poly<K>> colon_gens;
      if (subset_covers(f))
        colon_gens.push_back(Poly<K>::from_long(ring, 1));
      else
        colon_gens = colon(Ideal<K>(ring, f), Ideal<K>(ring, pres.gens)).gens;
      if (colon_gens.empty()) continue;

      std::vector<Poly<K>> query_gens;
      for (const auto& c : colon_gens)
        for (const auto& cols : minor_cols)
          query_gens.push_back(c * minor_on_columns(J, cols, ring));
      for (const auto& g : pres.gens) query_gens.push_back(g);
      TrackedBasis<K> tb = tracked_std_basis(ring, query_gens);

      Poly<K> d = Poly<K>::from_long(ring, 1);
      for (int t = 1; t <= budget.max_power; ++t) {
        d = d * gamma;
        auto found = detail::assemble_found(pres, idx, J, minor_cols, colon_gens,
                                            tb, query_gens, d, t);
        if (found) return found;
      }
    }
  }
  return std::nullopt;
}

template <class K>
std::optional<FoundSystem<K>> find_system(const Poly<K>& gamma,
                                          const Presentation<K>& pres,
                                          const std::vector<int>& vars,
                                          const FindBudget& budget,
                                          const SystemHint<K>& hint) {
  return find_system(gamma, pres, vars, budget,
                     std::optional<SystemHint<K>>(hint));
}

}  // namespace neron
