#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "neron/jet.hpp"
#include "neron/poly.hpp"
#include "neron/ring.hpp"

namespace neron {

// One finite-precision statement: `name` holds modulo the relations named by
// `modulus` up to base-variable order `order` (kOrdInf marks an exact claim).
struct LedgerClaim {
  std::string name;
  std::string modulus;
  long order = 0;
};

// Append-only record of every claim whose verification is order-bounded.
// Verifiers replay each claim and must reach at least the recorded order.
struct PrecisionLedger {
  std::vector<LedgerClaim> claims;

  void note(std::string name, std::string modulus, long order) {
    claims.push_back({std::move(name), std::move(modulus), order});
  }
  const LedgerClaim* find(const std::string& name) const {
    for (const auto& c : claims)
      if (c.name == name) return &c;
    return nullptr;
  }
};

// Element inverted when localizing a tower level.  Small instances carry the
// polynomial; large ones keep only `evidence`, the constant term of the
// element at the canonical evaluation point, whose nonvanishing makes the
// element a unit in the local ring.
template <class K>
struct InvertedElement {
  std::string name;
  std::optional<Poly<K>> value;
  K evidence{};
};

// Levels of the extension tower, all presented inside one ambient ring:
//   A = (base x-vars)/J,  B = A[Y]/I,  D = (A[Z]/L) localized,
//   C = (D[Y,T]/(I,g,h)) localized.
// Z- and T-level data are optional; generators of each level involve only
// variables of that level and below.
template <class K>
struct RingTower {
  RingPtr ring;
  std::vector<int> xvars, zvars, yvars, tvars;

  std::vector<Poly<K>> J;  // base relations
  std::vector<Poly<K>> I;  // Y-level relations

  std::vector<Poly<K>> L;  // Z-level relations
  std::vector<InvertedElement<K>> L_inverted;
  // Square subsystem of L used to lift a Z-level morphism by Newton steps:
  // row L[L_solve_rows[i]] solves variable L_solve_cols[i]; the remaining
  // Z-variables are free tail parameters carried along verbatim.
  std::vector<size_t> L_solve_rows;
  std::vector<int> L_solve_cols;

  std::vector<Poly<K>> gh;  // T-level relations, g rows first, then h rows
  std::vector<InvertedElement<K>> C_inverted;
};

// Finite-precision morphism out of the tower over the base: jet images (in
// base variables) for the Y-block, optionally for the Z-block, required to
// kill the respective relations at order `c`.
template <class K>
struct MorphismApprox {
  std::map<int, Jet<K>> y;
  std::map<int, Jet<K>> z;
  long c = 0;
};

// Images of every non-base variable under a factored morphism, with the
// ledger recording at which order each relation was checked to vanish.
template <class K>
struct MorphismLift {
  std::map<int, Jet<K>> images;
  PrecisionLedger ledger;
};

// Neighborhood test applied to a morphism before factoring it: congruent to
// the base morphism modulo the cubes of the parameters, or modulo a power of
// the maximal ideal.
enum class FactorMode { Cubes, MPower };

// Column layout of the T-block: the first r slots are shared by all minor
// systems, then each system j owns a tail of n - r slots.
inline size_t t_slot(size_t j, size_t c, size_t r, size_t n) {
  return c < r ? c : r + j * (n - r) + (c - r);
}

}  // namespace neron
