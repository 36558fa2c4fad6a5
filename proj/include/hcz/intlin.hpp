#pragma once

// Exact integer linear algebra over arbitrary-precision integers: sparse
// matrices, Smith normal form, finitely generated abelian groups and the
// lattice helpers that homology maps are built on.

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <map>
#include <ostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hcz {

using Integer = mpz_class;
using IntVector = std::vector<Integer>;

class SparseIntMatrix {
 public:
  using Index = std::pair<std::size_t, std::size_t>;
  using Storage = std::map<Index, Integer>;

  SparseIntMatrix() = default;
  SparseIntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

  static SparseIntMatrix identity(std::size_t n);
  static SparseIntMatrix from_rows(std::initializer_list<std::initializer_list<long>> rows);
  static SparseIntMatrix from_dense(const std::vector<IntVector>& rows, std::size_t cols);
  static SparseIntMatrix from_columns(const std::vector<IntVector>& columns, std::size_t rows);
  static SparseIntMatrix diagonal(const IntVector& diag, std::size_t rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return entries_.size(); }
  bool is_zero() const noexcept { return entries_.empty(); }
  const Storage& entries() const noexcept { return entries_; }

  Integer get(std::size_t r, std::size_t c) const;
  void set(std::size_t r, std::size_t c, const Integer& value);
  void add(std::size_t r, std::size_t c, const Integer& value);

  IntVector column(std::size_t c) const;
  IntVector apply(const IntVector& x) const;
  SparseIntMatrix transpose() const;
  SparseIntMatrix scaled(const Integer& k) const;
  SparseIntMatrix reduced_mod(const Integer& q) const;
  SparseIntMatrix select_columns(const std::vector<std::size_t>& cols) const;
  std::vector<IntVector> to_dense() const;

  friend SparseIntMatrix operator*(const SparseIntMatrix& a, const SparseIntMatrix& b);
  friend SparseIntMatrix operator+(const SparseIntMatrix& a, const SparseIntMatrix& b);
  friend SparseIntMatrix operator-(const SparseIntMatrix& a, const SparseIntMatrix& b);
  friend bool operator==(const SparseIntMatrix& a, const SparseIntMatrix& b);

  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Storage entries_;
};

// [a | b]
SparseIntMatrix hstack(const SparseIntMatrix& a, const SparseIntMatrix& b);
// [a ; b]
SparseIntMatrix vstack(const SparseIntMatrix& a, const SparseIntMatrix& b);
// Copies `block` into `target` with its (0,0) entry at (row, col).
void place_block(SparseIntMatrix& target, const SparseIntMatrix& block, std::size_t row,
                 std::size_t col);
SparseIntMatrix kronecker(const SparseIntMatrix& a, const SparseIntMatrix& b);

// Finitely generated abelian group Z^free_rank + Z/d_1 + ... + Z/d_k with
// d_1 | d_2 | ... and every d_i >= 2. Equality of groups is equality of this
// canonical form.
class AbelianGroup {
 public:
  AbelianGroup() = default;
  // Canonicalizes: factors equal to 1 are dropped, the rest are brought into
  // divisibility order. A factor 0 counts as a free summand.
  AbelianGroup(std::size_t free_rank, IntVector factors);

  static AbelianGroup trivial() { return {}; }
  static AbelianGroup free(std::size_t rank) { return AbelianGroup(rank, {}); }
  static AbelianGroup cyclic(const Integer& order);

  std::size_t free_rank() const noexcept { return free_rank_; }
  const IntVector& invariant_factors() const noexcept { return factors_; }

  bool is_trivial() const noexcept { return free_rank_ == 0 && factors_.empty(); }
  bool is_finite() const noexcept { return free_rank_ == 0; }
  bool is_cyclic() const noexcept;
  // Product of invariant factors; nullopt when the group is infinite.
  std::optional<Integer> order() const;
  // Subgroup of elements of order a power of `p`.
  AbelianGroup primary_part(const Integer& p) const;
  AbelianGroup direct_sum(const AbelianGroup& other) const;

  std::string to_string() const;

  friend bool operator==(const AbelianGroup&, const AbelianGroup&) = default;
  friend std::ostream& operator<<(std::ostream& os, const AbelianGroup& g) {
    return os << g.to_string();
  }

 private:
  std::size_t free_rank_ = 0;
  IntVector factors_;
};

struct SmithForm {
  SparseIntMatrix diagonal;  // D
  SparseIntMatrix left;      // U, unimodular
  SparseIntMatrix right;     // V, unimodular
  IntVector pivots;          // positive diagonal entries d_1 | d_2 | ... | d_rank
  std::size_t rank() const noexcept { return pivots.size(); }
};

// U * M * V = D with D diagonal, nonnegative, divisibility-ordered.
SmithForm smith_normal_form(const SparseIntMatrix& m);
// Same pivots as smith_normal_form without tracking U and V.
IntVector smith_pivots(const SparseIntMatrix& m);
std::size_t rank(const SparseIntMatrix& m);

// Z^rows / image(M).
AbelianGroup cokernel(const SparseIntMatrix& m);
// ker(d_out) / im(d_in).
AbelianGroup homology_pair(const SparseIntMatrix& d_out, const SparseIntMatrix& d_in);

// Columns form a Z-basis of {x : M x = 0}.
SparseIntMatrix kernel_basis(const SparseIntMatrix& m);

// Solves `generators * x = v` over the integers. Precomputes one Smith form
// so that repeated membership queries against the same lattice are cheap.
class LatticeSolver {
 public:
  explicit LatticeSolver(const SparseIntMatrix& generators);

  std::size_t ambient_dimension() const noexcept { return ambient_; }
  std::optional<IntVector> solve(const IntVector& v) const;
  bool contains(const IntVector& v) const { return solve(v).has_value(); }
  bool contains_columns(const SparseIntMatrix& m) const;
  // Columns form a basis of the lattice spanned by the generators.
  SparseIntMatrix basis() const;

 private:
  std::size_t ambient_ = 0;
  std::size_t generator_count_ = 0;
  SparseIntMatrix generators_;
  SmithForm smith_;
};

bool same_lattice(const SparseIntMatrix& a, const SparseIntMatrix& b);

}  // namespace hcz
