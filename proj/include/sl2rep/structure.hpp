// Exact finite-window verification of the module-structure claims:
// truncated generator matrices over the rationals, extremal-weight
// detection, invariant-subspace checks, subquotient connectivity, and
// composition-series reports per parity class.
#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sl2rep/liealg.hpp"

namespace sl2rep {

// Truncation of the weight lattice: degrees l <= l_max, weights
// |m| <= m_bound.  m_bound >= 2 l_max + 5 keeps every extremal weight for
// l <= l_max inside with two ladder steps of margin.
struct Window {
  int q = 0;
  int l_max = 6;
  int m_bound = 29;
};

enum class Extremal { kNone, kLowest, kHighest };

struct ExtremalInfo {
  Extremal kind = Extremal::kNone;
  int m = 0;  // the extremal weight when kind != kNone
};

// Whether the (q, l) lattice line carries a weight annihilated by a ladder:
// lowest at m = 2l+1 exactly when q = 1, highest at m = -(2l+1) exactly
// when q = 3, none for even q.
ExtremalInfo detect_extremal(int q, int l);

// Finite slice of the module with exact-rational generator matrices.
// Matrix entries are stored as (row, col) -> coefficient with col the
// source basis position and row the target; they equal the ladder_terms
// coefficients verbatim (sign convention +1 for every generator).
struct TruncatedModule {
  Window window;
  std::vector<KTypeIndex> basis;
  // True when some generator maps the vector to a target outside the
  // window; structural claims are only asserted on the interior.
  std::vector<bool> boundary_mask;
  std::map<GeneratorTag, std::map<std::pair<int, int>, mpq_class>> matrices;

  // Basis position of the index, or -1 when outside the window.
  int position(const KTypeIndex& idx) const;

 private:
  std::map<std::pair<int, int>, int> positions_;
  friend TruncatedModule build_truncated(const Window&);
};

// Builds the basis (degree-major, weight-ascending), the five generator
// matrices {kappa, eta_pm, E_pm}, and the boundary mask.  Throws
// std::invalid_argument when the window is malformed or too small to hold
// the extremal weights.
TruncatedModule build_truncated(const Window& window);

using IndexPredicate = std::function<bool(const KTypeIndex&)>;

struct InvarianceViolation {
  KTypeIndex from;
  GeneratorTag gen = GeneratorTag::kappa;
  KTypeIndex to;
};

struct InvarianceReport {
  bool invariant = true;
  int interior_members = 0;
  std::vector<InvarianceViolation> violations;
};

// Checks that every generator maps each interior basis vector of the
// subspace back into the subspace; lists every violating edge.
InvarianceReport verify_invariance(const TruncatedModule& module,
                                   const IndexPredicate& subspace);

struct QuotientReport {
  bool strongly_connected = true;
  int interior_vertices = 0;
  // Witnesses when connectivity fails: vertices separated from the probe
  // vertex in the forward or backward direction.
  std::vector<KTypeIndex> unreachable;
};

// Reachability on the subquotient super/sub: vertices are interior basis
// vectors in super minus sub, edges the nonzero matrix entries between
// them (images landing in sub are projected away).  Strong connectivity of
// this graph is the finite-window irreducibility certificate.
QuotientReport verify_irreducible_quotient(const TruncatedModule& module,
                                           const IndexPredicate& sub,
                                           const IndexPredicate& super);

struct ChainMemberReport {
  std::string name;
  int dim_in_window = 0;
  bool invariant = false;
  std::vector<InvarianceViolation> violations;
};

struct SubquotientReport {
  std::string name;
  bool irreducible_interior = false;
  int interior_vertices = 0;
};

struct SeriesReport {
  int q = 0;
  Window window;
  std::vector<ChainMemberReport> chain;  // ascending members, ending in H
  // Entry 0: the first member is nonzero; entry i >= 1: chain[i-1] sits
  // strictly inside chain[i].
  std::vector<bool> verified_inclusions;
  std::vector<SubquotientReport> subquotients;
  std::vector<std::string> boundary_caveats;
};

// Verifies the composition chain for the parity class q on the window:
// even q gives 0 < H_0 + H_1 < H; q = 1 the four-step chain through the
// lowest-weight ladders H_l^+ (m >= 2l+1); q = 3 the mirror through
// H_l^- (m <= -(2l+1)).  Both ladder labelings are computed for odd q and
// the caveats record which one the matrices support.
SeriesReport composition_series(int q, int l_max = 6, int m_bound = 29);

}  // namespace sl2rep
