#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "neron/jet.hpp"
#include "neron/poly.hpp"

namespace neron {

// Quotient of two polynomials when the division is exact; nullopt otherwise.
// Leading-term cancellation works under any of our orders because each step
// strips one term of the true quotient.
template <class K>
std::optional<Poly<K>> try_exact_divide(const Poly<K>& a, const Poly<K>& b) {
  if (b.is_zero()) throw std::domain_error("division by zero polynomial");
  Poly<K> rem = a;
  Poly<K> q = Poly<K>::zero(a.ring());
  while (!rem.is_zero()) {
    if (!mono_divides(b.lm(), rem.lm())) return std::nullopt;
    Mono m = mono_quot(rem.lm(), b.lm());
    K c = rem.lc() / b.lc();
    q += Poly<K>::monomial(a.ring(), m, c);
    rem -= b.term_multiple(m, c);
  }
  return q;
}

template <class K>
Poly<K> exact_divide(const Poly<K>& a, const Poly<K>& b) {
  auto q = try_exact_divide(a, b);
  if (!q) throw std::domain_error("inexact polynomial division");
  return *q;
}

template <class E>
using Grid = std::vector<std::vector<E>>;

// Laplace expansion along the sparsest row or column.  Exact over any
// coefficient structure with +,-,*; efficient exactly when unit rows collapse
// the recursion, which is the shape our completed matrices have.
template <class E>
E laplace_det(const Grid<E>& m, const E& zero) {
  size_t n = m.size();
  if (n == 0) return zero;  // caller handles the empty-matrix unit case
  if (n == 1) return m[0][0];
  if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  size_t best = 0, best_nnz = n + 1;
  bool best_is_row = true;
  for (size_t i = 0; i < n; ++i) {
    size_t nnz = 0;
    for (size_t j = 0; j < n; ++j)
      if (!m[i][j].is_zero()) ++nnz;
    if (nnz < best_nnz) { best_nnz = nnz; best = i; best_is_row = true; }
  }
  for (size_t j = 0; j < n; ++j) {
    size_t nnz = 0;
    for (size_t i = 0; i < n; ++i)
      if (!m[i][j].is_zero()) ++nnz;
    if (nnz < best_nnz) { best_nnz = nnz; best = j; best_is_row = false; }
  }
  if (best_nnz == 0) return zero;
  E acc = zero;
  for (size_t k = 0; k < n; ++k) {
    const E& piv = best_is_row ? m[best][k] : m[k][best];
    if (piv.is_zero()) continue;
    Grid<E> sub;
    sub.reserve(n - 1);
    for (size_t i = 0; i < n; ++i) {
      if (i == (best_is_row ? best : k)) continue;
      std::vector<E> row;
      row.reserve(n - 1);
      for (size_t j = 0; j < n; ++j) {
        if (j == (best_is_row ? k : best)) continue;
        row.push_back(m[i][j]);
      }
      sub.push_back(std::move(row));
    }
    E term = piv * laplace_det(sub, zero);
    size_t par = best_is_row ? best + k : k + best;
    if (par % 2 == 0)
      acc = acc + term;
    else
      acc = acc - term;
  }
  return acc;
}

// Fraction-free Bareiss elimination; every division is exact in the
// polynomial ring.  Used for dense blocks where Laplace would branch.
template <class K>
Poly<K> bareiss_det(Grid<Poly<K>> m, const RingPtr& ring) {
  size_t n = m.size();
  Poly<K> one = Poly<K>::from_long(ring, 1);
  if (n == 0) return one;
  Poly<K> prev = one;
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      size_t piv = k + 1;
      while (piv < n && m[piv][k].is_zero()) ++piv;
      if (piv == n) return Poly<K>::zero(ring);
      std::swap(m[k], m[piv]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j)
        m[i][j] = exact_divide(m[k][k] * m[i][j] - m[i][k] * m[k][j], prev);
    prev = m[k][k];
  }
  return sign > 0 ? m[n - 1][n - 1] : -m[n - 1][n - 1];
}

template <class K>
size_t sparse_rows(const Grid<Poly<K>>& m, size_t bound) {
  size_t cnt = 0;
  for (const auto& row : m) {
    size_t nnz = 0;
    for (const auto& e : row)
      if (!e.is_zero()) ++nnz;
    if (nnz <= bound) ++cnt;
  }
  return cnt;
}

template <class K>
Poly<K> det(const Grid<Poly<K>>& m, const RingPtr& ring) {
  if (m.empty()) return Poly<K>::from_long(ring, 1);
  if (m.size() != m[0].size()) throw std::invalid_argument("determinant of non-square matrix");
  if (m.size() <= 4 || sparse_rows(m, 2) * 3 >= m.size())
    return laplace_det(m, Poly<K>::zero(ring));
  return bareiss_det(m, ring);
}

template <class K>
Grid<Poly<K>> minor_grid(const Grid<Poly<K>>& m, size_t cut_row, size_t cut_col) {
  Grid<Poly<K>> sub;
  sub.reserve(m.size() - 1);
  for (size_t i = 0; i < m.size(); ++i) {
    if (i == cut_row) continue;
    std::vector<Poly<K>> row;
    row.reserve(m.size() - 1);
    for (size_t j = 0; j < m.size(); ++j)
      if (j != cut_col) row.push_back(m[i][j]);
    sub.push_back(std::move(row));
  }
  return sub;
}

namespace detail {

// Transpose cofactor matrix by direct expansion; quadratic in determinant
// evaluations, so reserved for matrices without exploitable structure.
template <class K>
Grid<Poly<K>> cofactor_adjugate(const Grid<Poly<K>>& m, const RingPtr& ring) {
  size_t n = m.size();
  Grid<Poly<K>> adj(n, std::vector<Poly<K>>(n, Poly<K>::zero(ring)));
  if (n == 0) return adj;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      Poly<K> c = det(minor_grid(m, i, j), ring);
      adj[j][i] = ((i + j) % 2 == 0) ? c : -c;
    }
  return adj;
}

// Column and sign of the single constant +-1 entry of a unit row, if any.
template <class K>
std::optional<std::pair<size_t, long>> unit_row_entry(const std::vector<Poly<K>>& row,
                                                      const FieldSpec& field) {
  std::optional<std::pair<size_t, long>> hit;
  K one = coeff_from_long<K>(field, 1);
  K minus = coeff_from_long<K>(field, -1);
  for (size_t j = 0; j < row.size(); ++j) {
    const Poly<K>& e = row[j];
    if (e.is_zero()) continue;
    if (hit) return std::nullopt;
    if (e.terms().size() != 1 || !mono_is_one(e.lm())) return std::nullopt;
    if (e.lc() == one) hit = {j, 1};
    else if (e.lc() == minus) hit = {j, -1};
    else return std::nullopt;
  }
  return hit;
}

inline long permutation_sign(const std::vector<size_t>& perm) {
  long inv = 0;
  for (size_t i = 0; i < perm.size(); ++i)
    for (size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) ++inv;
  return inv % 2 == 0 ? 1 : -1;
}

}  // namespace detail

// Transpose cofactor matrix: adj(H)·H = H·adj(H) = det(H)·Id.  Unit rows are
// eliminated first: permuting them to a diagonal block D gives
//   adj([[A,B],[0,D]]) = [[det(D)·adj(A), -det(D)·adj(A)·B·D^{-1}],
//                         [0,             det(A)·det(D)·D^{-1}]],
// so only the dense core A needs cofactor work.  Completed Jacobians are
// mostly unit rows, which turns their quadratically many cofactors into a
// handful of small determinants.
template <class K>
Grid<Poly<K>> adjugate(const Grid<Poly<K>>& m, const RingPtr& ring) {
  size_t n = m.size();
  if (n == 0) return {};
  std::vector<long> usign(n, 0);
  std::vector<size_t> ucol(n, 0);
  std::vector<bool> taken(n, false);
  size_t units = 0;
  for (size_t i = 0; i < n; ++i) {
    auto u = detail::unit_row_entry(m[i], ring->field);
    if (!u || taken[u->first]) continue;
    usign[i] = u->second;
    ucol[i] = u->first;
    taken[u->first] = true;
    ++units;
  }
  if (units == 0) return detail::cofactor_adjugate(m, ring);

  std::vector<size_t> rowof, colof;
  rowof.reserve(n);
  colof.reserve(n);
  for (size_t i = 0; i < n; ++i)
    if (usign[i] == 0) rowof.push_back(i);
  size_t k = rowof.size();
  for (size_t i = 0; i < n; ++i)
    if (usign[i] != 0) rowof.push_back(i);
  for (size_t j = 0; j < n; ++j)
    if (!taken[j]) colof.push_back(j);
  for (size_t u = k; u < n; ++u) colof.push_back(ucol[rowof[u]]);
  long sgn = detail::permutation_sign(rowof) * detail::permutation_sign(colof);

  Poly<K> zero = Poly<K>::zero(ring);
  Grid<Poly<K>> A(k, std::vector<Poly<K>>(k, zero));
  for (size_t a = 0; a < k; ++a)
    for (size_t b = 0; b < k; ++b) A[a][b] = m[rowof[a]][colof[b]];
  Grid<Poly<K>> adjA = adjugate(A, ring);
  Poly<K> detA = Poly<K>::from_long(ring, 1);
  if (k > 0) {
    detA = zero;
    for (size_t j = 0; j < k; ++j) detA += A[0][j] * adjA[j][0];
  }
  long detD = 1;
  for (size_t u = k; u < n; ++u) detD *= usign[rowof[u]];

  Grid<Poly<K>> adj(n, std::vector<Poly<K>>(n, zero));
  auto put = [&](size_t q, size_t p, Poly<K> v) {
    adj[colof[q]][rowof[p]] = sgn * detD > 0 ? std::move(v) : -v;
  };
  for (size_t a = 0; a < k; ++a)
    for (size_t b = 0; b < k; ++b) put(a, b, adjA[a][b]);
  for (size_t a = 0; a < k; ++a)
    for (size_t u = k; u < n; ++u) {
      Poly<K> acc = zero;
      for (size_t c = 0; c < k; ++c) {
        const Poly<K>& bc = m[rowof[c]][colof[u]];
        if (bc.is_zero() || adjA[a][c].is_zero()) continue;
        acc += adjA[a][c] * bc;
      }
      put(a, u, usign[rowof[u]] > 0 ? -acc : std::move(acc));
    }
  for (size_t u = k; u < n; ++u)
    put(u, u, usign[rowof[u]] > 0 ? detA : -detA);
  return adj;
}

template <class E>
Grid<E> mat_mul(const Grid<E>& a, const Grid<E>& b, const E& zero) {
  size_t n = a.size(), p = b.size(), q = p ? b[0].size() : 0;
  Grid<E> out(n, std::vector<E>(q, zero));
  for (size_t i = 0; i < n; ++i)
    for (size_t k = 0; k < p; ++k) {
      if (a[i][k].is_zero()) continue;
      for (size_t j = 0; j < q; ++j) {
        if (b[k][j].is_zero()) continue;
        out[i][j] = out[i][j] + a[i][k] * b[k][j];
      }
    }
  return out;
}

template <class E>
std::vector<E> mat_apply(const Grid<E>& a, const std::vector<E>& v, const E& zero) {
  std::vector<E> out(a.size(), zero);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < v.size(); ++j) {
      if (a[i][j].is_zero() || v[j].is_zero()) continue;
      out[i] = out[i] + a[i][j] * v[j];
    }
  return out;
}

template <class K>
Grid<Poly<K>> identity_grid(const RingPtr& ring, size_t n) {
  Grid<Poly<K>> m(n, std::vector<Poly<K>>(n, Poly<K>::zero(ring)));
  for (size_t i = 0; i < n; ++i) m[i][i] = Poly<K>::from_long(ring, 1);
  return m;
}

template <class K>
Grid<Poly<K>> jacobian(const std::vector<Poly<K>>& fs, const std::vector<int>& vars) {
  Grid<Poly<K>> J;
  J.reserve(fs.size());
  for (const auto& f : fs) {
    std::vector<Poly<K>> row;
    row.reserve(vars.size());
    for (int v : vars) row.push_back(f.derivative(v));
    J.push_back(std::move(row));
  }
  return J;
}

// Extract the r x r submatrix on the given columns and take its determinant.
template <class K>
Poly<K> minor_on_columns(const Grid<Poly<K>>& J, const std::vector<int>& cols,
                         const RingPtr& ring) {
  Grid<Poly<K>> sub;
  sub.reserve(J.size());
  for (const auto& row : J) {
    std::vector<Poly<K>> r;
    for (int c : cols) r.push_back(row.at(c));
    sub.push_back(std::move(r));
  }
  return det(sub, ring);
}

// Complete an r x n Jacobian to a square matrix by unit rows on the columns
// not selected, signs arranged so that det H equals the selected minor with
// its natural sign (not merely up to sign).
template <class K>
Grid<Poly<K>> complete_to_square(const Grid<Poly<K>>& J, const std::vector<int>& cols,
                                 const RingPtr& ring) {
  size_t r = J.size(), n = r ? J[0].size() : 0;
  std::vector<bool> chosen(n, false);
  for (int c : cols) chosen.at(c) = true;
  std::vector<int> comp;
  for (size_t j = 0; j < n; ++j)
    if (!chosen[j]) comp.push_back(static_cast<int>(j));
  // parity of the permutation (cols ascending, complement ascending)
  std::vector<int> sorted_cols = cols;
  std::sort(sorted_cols.begin(), sorted_cols.end());
  long inversions = 0;
  for (int a : sorted_cols)
    for (int b : comp)
      if (a > b) ++inversions;
  Grid<Poly<K>> H = J;
  for (size_t i = 0; i < comp.size(); ++i) {
    std::vector<Poly<K>> row(n, Poly<K>::zero(ring));
    long sign = (i == 0 && inversions % 2 == 1) ? -1 : 1;
    row[comp[i]] = Poly<K>::from_long(ring, sign);
    H.push_back(std::move(row));
  }
  return H;
}

// Determinant of a matrix of jets by Gaussian elimination; requires a pivot
// with invertible constant term at every step, which holds whenever the
// matrix is a unit perturbation of the identity.
template <class K>
Jet<K> det_jet(Grid<Jet<K>> m, const RingPtr& ring, long prec) {
  size_t n = m.size();
  Jet<K> acc = Jet<K>::of(Poly<K>::from_long(ring, 1), prec);
  int sign = 1;
  for (size_t k = 0; k < n; ++k) {
    size_t piv = k;
    while (piv < n && m[piv][k].val.constant_term().is_zero()) ++piv;
    if (piv == n) {
      // no unit pivot: fall back to expansion (small n expected here)
      Grid<Jet<K>> rest;
      for (size_t i = k; i < n; ++i)
        rest.push_back(std::vector<Jet<K>>(m[i].begin() + k, m[i].end()));
      auto zero = Jet<K>::of(Poly<K>::zero(ring), prec);
      Jet<K> d = laplace_det(rest, zero);
      Jet<K> out = acc * d;
      return sign > 0 ? out : -out;
    }
    if (piv != k) {
      std::swap(m[piv], m[k]);
      sign = -sign;
    }
    acc = acc * m[k][k];
    Jet<K> inv = series_inverse(m[k][k], prec);
    for (size_t i = k + 1; i < n; ++i) {
      if (m[i][k].is_zero()) continue;
      Jet<K> factor = m[i][k] * inv;
      for (size_t j = k; j < n; ++j) m[i][j] = m[i][j] - factor * m[k][j];
    }
  }
  return sign > 0 ? acc : -acc;
}

}  // namespace neron
