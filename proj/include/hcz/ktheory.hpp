#pragma once

// K-groups of Z/p^n in low degrees, assembled from relative cyclic homology
// of the tower Z/p^n -> Z/p^{n-1} and the closed form for K(Z/p).

#include "hcz/intlin.hpp"

#include <gmpxx.h>

#include <string>
#include <vector>

namespace hcz {

using Rational = mpq_class;

// Comparison range for a nilpotent ideal I with I^m = 0: an isomorphism for
// 0 <= i < p/(m-1) - 2 and a surjection for 0 <= i < p/(m-1) - 1.
struct RangeCertificate {
  long p = 0;
  long m = 0;
  Rational iso_below;
  Rational surj_below;

  bool is_iso(int i) const { return i >= 0 && Rational(i) < iso_below; }
  bool is_surjection(int i) const { return i >= 0 && Rational(i) < surj_below; }
  // "ISO", "SURJECTION" or "UNVERIFIED"
  std::string flag(int i) const;
};

// INVALID_PARAMS unless p is prime and m >= 2.
RangeCertificate goodwillie_range(long p, long m);

struct RelativeK {
  AbelianGroup group;  // p-part of HC_{i-1}(Z/p^n, p^{n-1}Z/p^n)
  AbelianGroup hc;     // the relative cyclic group itself
  std::string flag;
};

// INVALID_PARAMS unless p is prime, n >= 2 and i >= 0; BOUND_TOO_SMALL
// unless i - 1 <= bound.
RelativeK relative_k(long p, int n, int i, int bound);

// Z/(p^{j(n-1)} (p^j - 1)) for i = 2j - 1, 0 for even i.
// OUT_OF_RANGE unless 1 <= i <= p - 3; INVALID_PARAMS for non-prime p or n < 1.
AbelianGroup k_group(long p, int n, int i);

struct KEntry {
  int degree = 0;
  AbelianGroup group;
  AbelianGroup p_part;
  AbelianGroup prime_to_p;            // K_i(Z/p)
  std::vector<AbelianGroup> relative;  // relative_k for n' = 2..n
  std::vector<std::string> provenance;
  std::vector<std::string> flags;
  bool consistent = false;  // p_part order equals the product of the relative orders
};

struct KTable {
  long p = 0;
  int n = 0;
  std::vector<KEntry> entries;  // i = 1..p-3
  bool consistent() const;
};

// RANGE_EMPTY for p <= 3; INVALID_PARAMS for non-prime p or n < 1.
KTable k_table(long p, int n);

}  // namespace hcz
