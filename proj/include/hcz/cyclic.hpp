#pragma once

// Cyclic homology through the (b, B) bicomplex B(A)_{s,t} = C_{t-s}: column s
// is the Hochschild complex shifted up by s, the vertical differential is D
// and the horizontal one is Connes' B.

#include "hcz/complexes.hpp"
#include "hcz/dga.hpp"
#include "hcz/hochschild.hpp"

#include <string>
#include <vector>

namespace hcz {

struct CyclicComplexBundle {
  HochschildComplex hochschild;
  Bicomplex bicomplex;
  ChainComplex total;  // homology available through `bound`
  int bound = 0;

  const DGAlgebra& algebra() const noexcept { return hochschild.algebra(); }
  // Columns s with 2s <= n; Tot_n = C_n + C_{n-2} + ... in increasing s.
  int columns(int n) const noexcept { return n < 0 ? 0 : n / 2 + 1; }
  std::size_t column_offset(int n, int s) const;
  // C_n -> Tot_n, inclusion of column 0.
  SparseIntMatrix inclusion(int n) const;
  // Tot_n -> Tot_{n-2}, drop column 0 and shift the others down.
  SparseIntMatrix periodicity(int n) const;
  // Tot_{n-2} -> C_{n-1}, z -> B(z_0): the connecting map of 0 -> C -> Tot -> Tot[2] -> 0.
  SparseIntMatrix connecting(int n) const;
};

// Chains through total degree bound+1. BOUND_TOO_SMALL for bound < 0.
CyclicComplexBundle cyclic_bundle(const DGAlgebra& a, int bound);

// BOUND_TOO_SMALL unless i <= bound.
AbelianGroup hc(const DGAlgebra& a, int i, int bound);
// Homology of Tot(B(A)) tensor Z/q.
AbelianGroup hc_mod(const DGAlgebra& a, int i, const Integer& q, int bound);

// Block-diagonal map Tot(src) -> Tot(tgt) induced word-wise by f.
ChainMap induced_total_map(const DGAMorphism& f, const CyclicComplexBundle& source,
                           const CyclicComplexBundle& target);

// Fibre convention: HC_i(f) = H_{i+1}(Cone(Tot f)), so that
// ... -> HC_{i+1}(tgt) -> HC_i(f) -> HC_i(src) -> HC_i(tgt) -> ... is exact.
AbelianGroup hc_relative(const DGAMorphism& f, int i, int bound);

// Exactness of the fibre sequence of Tot(f) in degrees 0..bound.
ExactnessReport hc_relative_sequence_report(const DGAMorphism& f, int bound);

struct SurjectivityReport {
  bool onto = false;
  AbelianGroup source;
  AbelianGroup target;
  AbelianGroup cokernel;
  std::vector<std::string> flags;  // "RANGE" when i is outside 0..2p-1
};

// HC_i(Z/p^n) -> HC_i(Z/p^{n-1}) through the Koszul resolutions.
// INVALID_PARAMS unless p is prime, n >= 2 and i >= 0.
SurjectivityReport hc_tower_surjectivity(long p, int n, int i);

// ... -> HH_n -I-> HC_n -S-> HC_{n-2} -d-> HH_{n-1} -> ... checked at every
// node whose groups lie in degrees <= bound.
ExactnessReport sbi_check(const DGAlgebra& a, int bound);

bool is_prime(long p);

}  // namespace hcz
