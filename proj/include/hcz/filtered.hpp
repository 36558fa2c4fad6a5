#pragma once

// Filtered abelian groups and rings indexed by Z, stored on the window
// [-m, 0]: X(s) = X(0) for s >= 0 and X(s) = 0 for s < -m. Pieces are
// finitely presented groups Z^g / im(R) with distinguished generators, and
// all maps are integer matrices on generators.

#include "hcz/intlin.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace hcz {

struct Presentation {
  std::size_t generators = 0;
  SparseIntMatrix relations;  // generators x r

  static Presentation zero() { return {}; }
  static Presentation free(std::size_t rank);
  // One generator per factor; a factor 0 gives a free summand.
  static Presentation from_factors(const IntVector& factors);

  AbelianGroup group() const { return cokernel(relations); }
  // Every column of m lies in the relation lattice.
  bool kills(const SparseIntMatrix& m) const;
};

Presentation tensor(const Presentation& a, const Presentation& b);
Presentation tensor(const std::vector<Presentation>& factors);
Presentation direct_sum(const std::vector<Presentation>& parts);
// p / <columns of sub>
Presentation quotient(const Presentation& p, const SparseIntMatrix& sub);
// f (target.generators x source.generators) sends relations to relations.
bool is_homomorphism(const SparseIntMatrix& f, const Presentation& source, const Presentation& target);
// f = g as homomorphisms into target.
bool same_map(const SparseIntMatrix& f, const SparseIntMatrix& g, const Presentation& target);

class FilteredAbelianGroup {
 public:
  FilteredAbelianGroup() = default;
  // pieces for s in [-window, 0]; transitions[s] maps piece s to piece s+1
  // for s in [-window, -1]. Throws INVALID_PARAMS on shape or
  // well-definedness failures.
  FilteredAbelianGroup(int window, std::map<int, Presentation> pieces,
                       std::map<int, SparseIntMatrix> transitions);

  int window() const noexcept { return window_; }
  const Presentation& piece(int s) const;
  // piece(s) -> piece(s+1); identity for s >= 0.
  SparseIntMatrix transition(int s) const;
  // Composite piece(s) -> piece(t) for s <= t.
  SparseIntMatrix transition(int s, int t) const;

  // Z in degree 0 and above, 0 below.
  static FilteredAbelianGroup unit();

 private:
  int window_ = 0;
  std::map<int, Presentation> pieces_;
  std::map<int, SparseIntMatrix> transitions_;
};

class FilteredRing {
 public:
  FilteredRing() = default;
  // products[(i, j)] for i, j in the window with i + j >= -window maps the
  // tensor presentation piece(i) (x) piece(j) to piece(i+j); unit lies in
  // piece(0). Validates the ring axioms (INVALID_ALGEBRA).
  FilteredRing(FilteredAbelianGroup group, std::map<std::pair<int, int>, SparseIntMatrix> products,
               IntVector unit);

  const FilteredAbelianGroup& group() const noexcept { return group_; }
  int window() const noexcept { return group_.window(); }
  const Presentation& piece(int s) const { return group_.piece(s); }
  SparseIntMatrix transition(int s) const { return group_.transition(s); }
  // piece(i) (x) piece(j) -> piece(i+j); indices above 0 act as 0.
  SparseIntMatrix product(int i, int j) const;
  const IntVector& unit() const noexcept { return unit_; }

  // A ring with the one-step filtration R(s) = R for s >= 0, 0 below.
  static FilteredRing trivial(const Presentation& ring, const SparseIntMatrix& product, IntVector unit);

 private:
  FilteredAbelianGroup group_;
  std::map<std::pair<int, int>, SparseIntMatrix> products_;
  IntVector unit_;
};

// R = Z/p^n filtered by powers of I = p^e Z/p^n: piece(-s) = I^s.
FilteredRing adic_filtration(long p, int n, int e = 1);

// ---------------------------------------------------------------------------
// Filtered tensor products

using Tuple = std::vector<int>;

// (X_0 (x) ... (x) X_q)(k) presented on the antidiagonal tuples with
// sum min(k, 0) inside the window box, glued along the tuples one below.
struct TensorLevel {
  int level = 0;
  std::vector<Tuple> tuples;
  std::vector<std::size_t> offsets;  // generator offset of each tuple
  std::vector<Presentation> blocks;  // presentation of each tuple's tensor
  Presentation presentation;

  std::size_t find(const Tuple& t) const;  // index into tuples, or npos
};

TensorLevel filtered_tensor(const std::vector<FilteredAbelianGroup>& factors, int k);
TensorLevel filtered_tensor(const FilteredAbelianGroup& x, const FilteredAbelianGroup& y, int k);

// The structure map (X (x) ...)(k-1) -> (X (x) ...)(k) on generators.
SparseIntMatrix level_inclusion(const std::vector<FilteredAbelianGroup>& factors,
                                const TensorLevel& lower, const TensorLevel& upper);

// Generators of a tuple with sum <= k sent into the level presentation.
SparseIntMatrix embed_tuple(const std::vector<FilteredAbelianGroup>& factors, const Tuple& t,
                            const TensorLevel& level);

// ---------------------------------------------------------------------------
// Associated graded

// M(i) / M(i-1) presented on the generators of M(i).
Presentation graded_quotient(const FilteredAbelianGroup& m, int i);
// gr(M)(k) = sum_{i <= k} M(i)/M(i-1) with the induced products.
FilteredRing graded(const FilteredRing& m);

// ---------------------------------------------------------------------------
// Cyclic bar construction Z_q(M)(k) = M^{(x)(q+1)}(k)

struct CyclicBarLevel {
  int q = 0;
  int k = 0;
  TensorLevel level;
  SparseIntMatrix rotation;                  // t_q, shifts factors to the right
  std::vector<SparseIntMatrix> faces;        // d_i: Z_q -> Z_{q-1}
  std::vector<SparseIntMatrix> degeneracies;  // s_i: Z_q -> Z_{q+1}

  const Presentation& presentation() const { return level.presentation; }
};

CyclicBarLevel cyclic_bar(const FilteredRing& m, int q, int k);

struct IdentityReport {
  bool ok = true;
  std::size_t checked = 0;
  std::string first_failure;
};

// Well-definedness of every operator, t^{q+1} = id, d_i t = t d_{i-1},
// d_0 t = d_q, s_i t = t s_{i-1}, s_0 t = t^2 s_q and the simplicial
// identities, for simplicial degrees 0..q_max at level k.
IdentityReport cyclic_identities(const FilteredRing& m, int q_max, int k);

struct ComparisonReport {
  AbelianGroup lhs;  // Z_q(M)(k) / Z_q(M)(k-1)
  AbelianGroup rhs;  // sum over i_0 + ... + i_q = k of the graded tensors
  bool groups_equal = false;
  bool map_is_isomorphism = false;   // generator identification rhs -> lhs
  bool rotation_compatible = false;  // t_q against index rotation
  bool ok() const { return groups_equal && map_is_isomorphism && rotation_compatible; }
};

ComparisonReport graded_comparison(const FilteredRing& m, int q, int k);

struct FixedPointReport {
  bool ok = false;
  std::vector<std::size_t> diagonal;  // basis b with b^{(x)q} in level s
  std::vector<std::size_t> expected;  // basis of Y(floor(s/q))
};

// Y must have free pieces with split inclusions: every transition sends
// each basis vector to a distinct basis vector. UNSUPPORTED_FILTRATION otherwise.
FixedPointReport fixed_points_check(const FilteredAbelianGroup& y, int q, int s);

// {"schema": "hcz.filtered_ring/1", "window": m,
//  "pieces": [{"index": s, "invariant_factors": ["9"]}],
//  "transitions": [{"from": s, "matrix": [[3]]}],
//  "products": [{"left": i, "right": j, "matrix": [[1]]}],
//  "unit": [1]}
FilteredRing filtered_ring_from_json(const std::string& text);

}  // namespace hcz
