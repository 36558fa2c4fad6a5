#pragma once

// Normalized Hochschild complex of a DG algebra, with Connes' operator.
//
// A word a0[a1|...|ak] has a1..ak non-unit basis elements and total degree
// |a0| + |a1| + ... + |ak| + k. Signs use the suspended degrees |ai| + 1 for
// i >= 1:
//   eps_i = |a0| + sum_{0<j<i} (|aj| + 1)
//   delta(w) = (d a0)[...] + sum_i (-1)^{eps_i + 1} a0[...|d ai|...]
//   b'(w)    = sum_{i=1..k} (-1)^{eps_i} a0[...|a_{i-1} a_i|...]
//              - (-1)^{(|ak|+1) eps_k} (ak a0)[a1|...|a_{k-1}]
//   B(w)     = sum_i (-1)^{eta_i} 1[a_i|...|a_k|a_0|...|a_{i-1}]
// where eta_i = (sum_{j<i} (|aj|+1)) (sum_{j>=i} (|aj|+1)), a0 suspended too.
// D = delta + b'.

#include "hcz/complexes.hpp"
#include "hcz/dga.hpp"

#include <map>
#include <vector>

namespace hcz {

using Word = std::vector<std::size_t>;  // basis indices a0, a1, ..., ak
using WordChain = std::map<Word, Integer>;

class HochschildComplex {
 public:
  // Chains in total degrees 0..bound+1, so homology is available through
  // `bound`. Throws BOUND_TOO_SMALL for bound < 0, INVALID_ALGEBRA when the
  // algebra fails validation, COMPOSITION_NONZERO if B^2 or DB + BD fails.
  HochschildComplex(DGAlgebra algebra, int bound);

  const DGAlgebra& algebra() const noexcept { return algebra_; }
  int bound() const noexcept { return bound_; }
  int top_degree() const noexcept { return bound_ + 1; }

  const std::vector<Word>& words(int degree) const;
  std::size_t position(const Word& w) const;
  int total_degree(const Word& w) const;
  Label word_label(const Word& w) const;

  // Word-length / internal-degree bicomplex and its total complex.
  const Bicomplex& bicomplex() const noexcept { return bicomplex_; }
  const ChainComplex& complex() const noexcept { return complex_; }

  // degree n -> n-1
  const SparseIntMatrix& internal(int n) const { return internal_.at(n); }
  const SparseIntMatrix& bar(int n) const { return bar_.at(n); }
  SparseIntMatrix differential(int n) const { return complex_.differential(n); }
  // degree n -> n+1, for 0 <= n <= bound
  const SparseIntMatrix& connes(int n) const { return connes_.at(n); }

  WordChain apply_internal(const Word& w) const;
  WordChain apply_bar(const Word& w) const;
  WordChain apply_connes(const Word& w) const;

 private:
  SparseIntMatrix matrix_of(int n, int target, WordChain (HochschildComplex::*op)(const Word&) const) const;

  DGAlgebra algebra_;
  int bound_ = 0;
  std::map<int, std::vector<Word>> words_;
  std::map<Word, std::size_t> position_;
  Bicomplex bicomplex_;
  ChainComplex complex_;
  std::map<int, SparseIntMatrix> internal_;
  std::map<int, SparseIntMatrix> bar_;
  std::map<int, SparseIntMatrix> connes_;
};

HochschildComplex hochschild_complex(const DGAlgebra& a, int bound);

// H_i of the normalized Hochschild complex; BOUND_TOO_SMALL unless 0 <= i <= bound.
AbelianGroup hh(const DGAlgebra& a, int i, int bound);

// Connes' operator as matrices from degree n to n+1.
std::map<int, SparseIntMatrix> connes_B(const HochschildComplex& h);

struct StructuralCheck {
  bool d_squared = true;
  bool b_squared = true;
  bool db_plus_bd = true;
  bool ok() const { return d_squared && b_squared && db_plus_bd; }
};

// Recomputes D^2, B^2 and DB + BD from the stored matrices.
StructuralCheck structural_identities(const HochschildComplex& h);

// Word-wise application of f. Throws NOT_A_CHAIN_MAP unless the result
// commutes with D and with B.
ChainMap induced_map(const DGAMorphism& f, const HochschildComplex& source,
                     const HochschildComplex& target);
ChainMap induced_map(const DGAMorphism& f, int bound);

// Matrix of word-wise application of f from degree n of source to target.
SparseIntMatrix induced_matrix(const DGAMorphism& f, const HochschildComplex& source,
                               const HochschildComplex& target, int n);

}  // namespace hcz
