#include "hcz/error.hpp"
#include "hcz/hochschild.hpp"

#include "algebras.hpp"
#include "doctest.h"

#include <cmath>

using namespace hcz;

namespace {

long ipow(long b, int e) {
  long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace

TEST_CASE("koszul words match the expected shape") {
  for (long m : {4L, 9L, 125L}) {
    HochschildComplex h(koszul_resolution(m), 8);
    const std::size_t one = 0, t = 1;
    for (int n = 0; n <= h.top_degree(); ++n) {
      REQUIRE(h.words(n).size() == 1);
      const Word& w = h.words(n)[0];
      int k = n / 2 + n % 2;
      CHECK(w.size() == std::size_t(k + (n % 2 == 0 ? 1 : 0)));
      CHECK(w[0] == (n % 2 == 0 ? one : t));
    }
    // b(t[t^{k-1}]) = m 1[t^{k-1}], B(t[t^{k-1}]) = k 1[t^k], B(1[t^k]) = 0
    for (int k = 1; 2 * k <= h.bound(); ++k) {
      CHECK(h.differential(2 * k - 1) == SparseIntMatrix::from_rows({{m}}));
      CHECK(h.differential(2 * k).is_zero());
      CHECK(h.connes(2 * k - 1) == SparseIntMatrix::from_rows({{k}}));
      CHECK(h.connes(2 * k).is_zero());
    }
    CHECK(h.connes(0).is_zero());
  }
}

TEST_CASE("hh of the koszul resolution") {
  for (long p : {3L, 5L, 7L})
    for (int n = 1; n <= 3; ++n) {
      DGAlgebra r = koszul_resolution(ipow(p, n));
      for (int i = 0; i < 2 * p; ++i) {
        AbelianGroup expected = (i % 2 == 0) ? AbelianGroup::cyclic(ipow(p, n)) : AbelianGroup::trivial();
        CHECK(hh(r, i, 2 * p) == expected);
      }
    }
}

TEST_CASE("hh of the base ring") {
  HochschildComplex h(base_ring(), 4);
  CHECK(h.words(0).size() == 1);
  for (int n = 1; n <= h.top_degree(); ++n) CHECK(h.words(n).empty());
  CHECK(hh(base_ring(), 0, 3) == AbelianGroup::free(1));
  for (int i = 1; i <= 3; ++i) CHECK(hh(base_ring(), i, 3) == AbelianGroup::trivial());
}

TEST_CASE("hh errors") {
  try {
    hh(base_ring(), 3, 2);
    FAIL("expected BOUND_TOO_SMALL");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BoundTooSmall);
  }
  CHECK_THROWS_AS(HochschildComplex(base_ring(), -1), Error);
}

TEST_CASE("structural identities on mixed-degree algebras") {
  using namespace fixture;
  std::vector<DGAlgebra> algebras{
      koszul_resolution(6),
      tensor(exterior("t", 1, 6), exterior("u", 1, 4)),
      tensor(exterior("t", 1, 2), exterior("v", 3, 0)),
      tensor(exterior("t", 1, 3), truncated_polynomial("x", 2, 2)),
      truncated_polynomial("x", 2, 3),
      truncated_polynomial("y", 4, 3),
      triangular(),
      square_zero({{"a", 1}, {"b", 2}}),
      tensor(triangular(), exterior("t", 1, 5)),
  };
  for (const DGAlgebra& a : algebras) {
    REQUIRE(validate(a).ok);
    HochschildComplex h(a, 6);
    StructuralCheck s = structural_identities(h);
    CHECK(s.d_squared);
    CHECK(s.b_squared);
    CHECK(s.db_plus_bd);
  }
}

TEST_CASE("hh of the triangular algebra is Z^2 in degree 0") {
  // Triangular algebras split HH into the HH of the diagonal blocks: Z + Z.
  DGAlgebra t = fixture::triangular();
  CHECK(hh(t, 0, 4) == AbelianGroup::free(2));
  for (int i = 1; i <= 4; ++i) CHECK(hh(t, i, 4) == AbelianGroup::trivial());
}

TEST_CASE("hh is independent of the bound") {
  DGAlgebra a = fixture::tensor(fixture::exterior("t", 1, 6), fixture::exterior("u", 1, 4));
  for (int i = 0; i <= 3; ++i)
    for (int b = i + 1; b <= i + 3; ++b) CHECK(hh(a, i, b) == hh(a, i, i));
}

TEST_CASE("induced maps") {
  HochschildComplex h9(koszul_resolution(9), 6);
  ChainMap id = induced_map(identity_morphism(koszul_resolution(9)), h9, h9);
  for (int n = 0; n <= h9.top_degree(); ++n)
    CHECK(id.at(n) == SparseIntMatrix::identity(h9.words(n).size()));

  // t^{k} -> p^k t'^{k} word-wise: both t[t^{k-1}] and 1[t^k] scale by p^k
  const long p = 5;
  ChainMap f = induced_map(reduction_map(p * p, p), 6);
  for (int n = 0; n <= 7; ++n) {
    int k = (n + 1) / 2;
    CHECK(f.at(n) == SparseIntMatrix::from_rows({{ipow(p, k)}}));
  }
  auto h0 = induced_homology_map(homology_presentation(f.source, 0),
                                 homology_presentation(f.target, 0), f.at(0));
  CHECK(h0.source.group() == AbelianGroup::cyclic(25));
  CHECK(h0.target.group() == AbelianGroup::cyclic(5));
  CHECK(h0.is_surjective());

  HochschildComplex h27(koszul_resolution(27), 5), h3(koszul_resolution(3), 5);
  HochschildComplex h9b(koszul_resolution(9), 5);
  ChainMap g = induced_map(reduction_map(9, 3), h9b, h3);
  ChainMap ff = induced_map(reduction_map(27, 9), h27, h9b);
  ChainMap gf = induced_map(compose(reduction_map(9, 3), reduction_map(27, 9)), h27, h3);
  for (int n = 0; n <= 6; ++n) CHECK(gf.at(n) == g.at(n) * ff.at(n));
}
