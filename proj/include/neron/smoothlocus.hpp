#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "neron/ideal.hpp"
#include "neron/matrix.hpp"

namespace neron {

// A chosen square completion of the Jacobian of f on a column set: M is the
// minor on those columns, N a cofactor with N*I inside (f), H the completed
// square matrix with det H = M, and G = N*adjugate(H), so that G*H = H*G =
// M*N*Id and the first r rows of (df/dY)*G form (M*N*Id_r | 0).
template <class K>
struct MinorSystem {
  std::vector<int> rows;  // row indices into f (always 0..r-1 here)
  std::vector<int> cols;  // column indices into the Jacobian
  Poly<K> M;
  Poly<K> N;
  Grid<Poly<K>> H;
  Grid<Poly<K>> G;
};

template <class K>
MinorSystem<K> make_minor_system(const RingPtr& ring, const Grid<Poly<K>>& J,
                                 const std::vector<int>& cols, const Poly<K>& N) {
  MinorSystem<K> sys;
  for (size_t i = 0; i < J.size(); ++i) sys.rows.push_back(static_cast<int>(i));
  sys.cols = cols;
  sys.N = N;
  sys.M = minor_on_columns(J, cols, ring);
  sys.H = complete_to_square(J, cols, ring);
  Grid<Poly<K>> adj = adjugate(sys.H, ring);
  sys.G = adj;
  for (auto& row : sys.G)
    for (auto& e : row) e = e * N;
  return sys;
}

struct IdentityReport {
  bool ok = true;
  std::vector<std::string> failures;
};

namespace detail {
inline void report_fail(IdentityReport& rep, const std::string& what) {
  rep.ok = false;
  rep.failures.push_back(what);
}
inline std::string at(size_t i, size_t j) {
  return " entry (" + std::to_string(i) + "," + std::to_string(j) + ")";
}
}  // namespace detail

// Exact check of the defining matrix identities of a MinorSystem.
template <class K>
IdentityReport verify_minor_identities(const MinorSystem<K>& sys,
                                       const Grid<Poly<K>>& J, const RingPtr& ring) {
  IdentityReport rep;
  size_t n = sys.H.size();
  Poly<K> zero = Poly<K>::zero(ring);
  if (det(sys.H, ring) != sys.M) detail::report_fail(rep, "det(H) != M");
  Poly<K> mn = sys.M * sys.N;
  Grid<Poly<K>> gh = mat_mul(sys.G, sys.H, zero);
  Grid<Poly<K>> hg = mat_mul(sys.H, sys.G, zero);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      const Poly<K>& want = (i == j) ? mn : zero;
      if (gh[i][j] != want) detail::report_fail(rep, "G*H" + detail::at(i, j));
      if (hg[i][j] != want) detail::report_fail(rep, "H*G" + detail::at(i, j));
    }
  Grid<Poly<K>> jg = mat_mul(J, sys.G, zero);
  for (size_t i = 0; i < J.size(); ++i)
    for (size_t j = 0; j < n; ++j) {
      const Poly<K>& want = (i == j) ? mn : zero;
      if (jg[i][j] != want) detail::report_fail(rep, "(df/dY)*G" + detail::at(i, j));
    }
  return rep;
}

namespace detail {

// All size-r column subsets of {0..n-1} in lexicographic order, capped.
inline std::vector<std::vector<int>> column_subsets(int n, int r, size_t cap) {
  std::vector<std::vector<int>> out;
  if (r > n || r <= 0) return out;
  std::vector<int> cur(r);
  for (int i = 0; i < r; ++i) cur[i] = i;
  while (out.size() < cap) {
    out.push_back(cur);
    int i = r - 1;
    while (i >= 0 && cur[i] == n - r + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < r; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

}  // namespace detail

// ((f):I) * Delta_f, where Delta_f is generated by all r x r minors of the
// Jacobian of f on the given variables.  The quotient by I is smooth wherever
// some such ideal (over a family of subsets f) meets the units.
template <class K>
Ideal<K> delta_ideal(const RingPtr& ring, const std::vector<Poly<K>>& f,
                     const Ideal<K>& I, const std::vector<int>& vars,
                     size_t max_minors = 256) {
  int r = static_cast<int>(f.size());
  int n = static_cast<int>(vars.size());
  if (r == 0 || r > n) return Ideal<K>(ring, {});
  Grid<Poly<K>> J = jacobian(f, vars);

  // when (f) already contains I the colon is the whole ring
  Ideal<K> ff(ring, f);
  bool covers = true;
  for (const auto& g : I.gens)
    if (!is_member(g, ff)) covers = false;
  std::vector<Poly<K>> colon_gens;
  if (covers)
    colon_gens.push_back(Poly<K>::from_long(ring, 1));
  else
    colon_gens = colon(ff, I).gens;

  std::vector<Poly<K>> out;
  for (const auto& cols : detail::column_subsets(n, r, max_minors)) {
    Poly<K> m = minor_on_columns(J, cols, ring);
    if (m.is_zero()) continue;
    for (const auto& c : colon_gens) {
      Poly<K> prod = c * m;
      if (!prod.is_zero()) out.push_back(std::move(prod));
    }
  }
  return Ideal<K>(ring, std::move(out));
}

struct SubsetCap {
  size_t max_size = 4;
  size_t max_subsets = 64;
};

// The smooth-locus ideal: the sum of ((f):I)*Delta_f over subsets f of the
// generators, by increasing subset size.  Not a radical; membership of an
// element here is a sufficient certificate of smoothness on its complement.
template <class K>
Ideal<K> smooth_locus_ideal(const RingPtr& ring, const std::vector<Poly<K>>& gens,
                            const std::vector<int>& vars, const SubsetCap& cap = {}) {
  Ideal<K> I(ring, gens);
  size_t l = gens.size();
  size_t top = std::min({cap.max_size, l, vars.size()});
  std::vector<Poly<K>> acc;
  size_t used = 0;
  for (size_t size = 1; size <= top && used < cap.max_subsets; ++size) {
    for (const auto& idx :
         detail::column_subsets(static_cast<int>(l), static_cast<int>(size),
                                cap.max_subsets - used)) {
      ++used;
      std::vector<Poly<K>> f;
      for (int i : idx) f.push_back(gens[i]);
      for (auto& g : delta_ideal(ring, f, I, vars).gens) acc.push_back(std::move(g));
    }
  }
  return Ideal<K>(ring, std::move(acc));
}

}  // namespace neron
