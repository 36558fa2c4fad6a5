#include "hcz/complexes.hpp"
#include "hcz/error.hpp"

#include "doctest.h"

using namespace hcz;

namespace {

// 0 -> Z --m--> Z -> 0 in degrees 1, 0
ChainComplex two_term(long m) {
  return ChainComplex(0, 1, {{0, {Label::atom("x")}}, {1, {Label::atom("y")}}},
                      {{1, SparseIntMatrix::from_rows({{m}})}}, false);
}

ChainComplex single(int degree) {
  return ChainComplex(degree, degree, {{degree, {Label::atom("z")}}}, {}, false);
}

}  // namespace

TEST_CASE("homology of two-term complexes") {
  CHECK(homology(two_term(0), 0) == AbelianGroup::free(1));
  CHECK(homology(two_term(0), 1) == AbelianGroup::free(1));
  CHECK(homology(two_term(27), 0) == AbelianGroup::cyclic(27));
  CHECK(homology(two_term(27), 1) == AbelianGroup::trivial());
  CHECK(homology(two_term(27), 5) == AbelianGroup::trivial());
}

TEST_CASE("d^2 != 0 is rejected at construction") {
  std::map<int, Basis> basis{{0, {Label::atom("a")}}, {1, {Label::atom("b")}}, {2, {Label::atom("c")}}};
  std::map<int, SparseIntMatrix> d{{1, SparseIntMatrix::from_rows({{1}})},
                                   {2, SparseIntMatrix::from_rows({{1}})}};
  CHECK_THROWS_AS(ChainComplex(0, 2, basis, d, false), Error);
}

TEST_CASE("truncated complexes refuse degrees without incoming boundary") {
  ChainComplex c(0, 1, {{0, {Label::atom("x")}}, {1, {Label::atom("y")}}},
                 {{1, SparseIntMatrix::from_rows({{4}})}}, true);
  CHECK(homology(c, 0) == AbelianGroup::cyclic(4));
  try {
    homology(c, 1);
    FAIL("expected TRUNCATION_TOO_TIGHT");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TruncationTooTight);
  }
}

TEST_CASE("homology mod q") {
  for (long p : {2L, 3L, 5L, 7L}) {
    CHECK(homology_mod(two_term(p), 0, p) == AbelianGroup::cyclic(p));
    CHECK(homology_mod(two_term(-p), 1, p) == AbelianGroup::cyclic(p));
  }
  ChainComplex zero_diff(0, 1, {{0, {Label::atom("a"), Label::atom("b")}}, {1, {Label::atom("c")}}},
                         {}, false);
  CHECK(homology_mod(zero_diff, 0, 6) == AbelianGroup(0, {6, 6}));
  CHECK(homology_mod(zero_diff, 1, 6) == AbelianGroup(0, {6}));
  // Z --4--> Z mod 6: H_0 = Z/gcd = Z/2, H_1 = Z/2
  CHECK(homology_mod(two_term(4), 0, 6) == AbelianGroup::cyclic(2));
  CHECK(homology_mod(two_term(4), 1, 6) == AbelianGroup::cyclic(2));
  CHECK_THROWS_AS(homology_mod(two_term(4), 0, 1), Error);
}

TEST_CASE("tensor products") {
  ChainComplex c = two_term(6);
  ChainComplex cu = tensor(c, unit_complex());
  for (int d = 0; d <= 2; ++d) CHECK(homology(cu, d) == homology(c, d));

  // (Z --m--> Z) tensor (Z --m--> Z): 4-term complex Z -> Z^2 -> Z.
  // By hand: d_1 = [m, m], d_2 = [m; -m]^T, so H_0 = Z/m, H_1 = Z/m, H_2 = 0.
  for (long m : {2L, 5L, 12L}) {
    ChainComplex cc = tensor(two_term(m), two_term(m));
    CHECK(cc.rank(0) == 1);
    CHECK(cc.rank(1) == 2);
    CHECK(cc.rank(2) == 1);
    CHECK(homology(cc, 0) == AbelianGroup::cyclic(m));
    CHECK(homology(cc, 1) == AbelianGroup::cyclic(m));
    CHECK(homology(cc, 2) == AbelianGroup::trivial());
  }
}

TEST_CASE("tensor product is symmetric on homology") {
  ChainComplex a = two_term(4);
  ChainComplex b = tensor(two_term(6), single(1));
  ChainComplex ab = tensor(a, b), ba = tensor(b, a);
  for (int d = 0; d <= 4; ++d) CHECK(homology(ab, d) == homology(ba, d));
}

TEST_CASE("tensor of truncated complexes respects the honest range") {
  ChainComplex t(0, 1, {{0, {Label::atom("x")}}, {1, {Label::atom("y")}}},
                 {{1, SparseIntMatrix::from_rows({{3}})}}, true);
  ChainComplex tt = tensor(t, two_term(3));
  CHECK(tt.max_degree() == 1);
  CHECK(tt.truncated());
  CHECK_THROWS_AS(tensor(t, two_term(3), 2), Error);
}

TEST_CASE("mapping cones") {
  ChainComplex c = two_term(5);
  ChainComplex cone = mapping_cone(identity_map(c));
  for (int d = 0; d <= 3; ++d) CHECK(homology(cone, d) == AbelianGroup::trivial());

  // cone of zero: H_n = H_{n-1}(src) + H_n(tgt)
  ChainMap zero = make_chain_map(c, c, {});
  ChainComplex cz = mapping_cone(zero);
  CHECK(homology(cz, 0) == AbelianGroup::cyclic(5));
  CHECK(homology(cz, 1) == AbelianGroup::cyclic(5));
  CHECK(homology(cz, 2) == AbelianGroup::trivial());

  // Z --p--> Z as a map of complexes in degree 0: H_0 = Z/p, H_1 = 0.
  ChainMap mult = make_chain_map(single(0), single(0), {{0, SparseIntMatrix::from_rows({{7}})}});
  ChainComplex cm = mapping_cone(mult);
  CHECK(homology(cm, 0) == AbelianGroup::cyclic(7));
  CHECK(homology(cm, 1) == AbelianGroup::trivial());
}

TEST_CASE("non chain maps are rejected") {
  try {
    make_chain_map(two_term(2), two_term(2), {{0, SparseIntMatrix::from_rows({{1}})}});
    FAIL("expected NOT_A_CHAIN_MAP");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotAChainMap);
  }
}

TEST_CASE("fibre sequence is exact") {
  // multiplication by 3 on Z --9--> Z, and a map Z/4 complex -> Z/2 complex
  ChainMap times3 = make_chain_map(two_term(9), two_term(9),
                                   {{0, SparseIntMatrix::from_rows({{3}})},
                                    {1, SparseIntMatrix::from_rows({{3}})}});
  ChainMap reduce = make_chain_map(two_term(4), two_term(2),
                                   {{0, SparseIntMatrix::from_rows({{1}})},
                                    {1, SparseIntMatrix::from_rows({{2}})}});
  for (const ChainMap* f : {&times3, &reduce}) {
    ExactnessReport report = fibre_sequence_report(*f, 2);
    CHECK(report.all_exact());
    CHECK(!report.nodes.empty());
  }
  CHECK(relative_homology(reduce, 0) == AbelianGroup::cyclic(2));
}

TEST_CASE("induced maps detect surjectivity and injectivity") {
  ChainComplex c4 = two_term(4), c2 = two_term(2);
  ChainMap reduce = make_chain_map(c4, c2, {{0, SparseIntMatrix::from_rows({{1}})},
                                            {1, SparseIntMatrix::from_rows({{2}})}});
  auto h = induced_homology_map(homology_presentation(c4, 0), homology_presentation(c2, 0),
                                reduce.at(0));
  CHECK(h.is_surjective());
  CHECK(!h.is_injective());
  auto h2 = induced_homology_map(homology_presentation(c2, 0), homology_presentation(c4, 0),
                                 SparseIntMatrix::from_rows({{2}}));
  CHECK(h2.is_injective());
  CHECK(!h2.is_surjective());
}

TEST_CASE("bicomplexes") {
  // one column: Z --3--> Z at (0,1) -> (0,0)
  Bicomplex col({{{0, 0}, {Label::atom("a")}}, {{0, 1}, {Label::atom("b")}}},
                {{{0, 1}, SparseIntMatrix::from_rows({{3}})}}, {}, 3);
  ChainComplex tot = total_complex(col, 2);
  CHECK(homology(tot, 0) == AbelianGroup::cyclic(3));
  CHECK(homology(tot, 1) == AbelianGroup::trivial());
  auto e1 = bicomplex_e1(col, 1);
  CHECK(e1.at({0, 0}) == AbelianGroup::cyclic(3));

  // square with anticommuting differentials: Z at (1,1),(0,1),(1,0),(0,0)
  Bicomplex sq({{{0, 0}, {Label::atom("a")}}, {{1, 0}, {Label::atom("b")}},
                {{0, 1}, {Label::atom("c")}}, {{1, 1}, {Label::atom("d")}}},
               {{{0, 1}, SparseIntMatrix::from_rows({{2}})}, {{1, 1}, SparseIntMatrix::from_rows({{-1}})}},
               {{{1, 0}, SparseIntMatrix::from_rows({{2}})}, {{1, 1}, SparseIntMatrix::from_rows({{1}})}},
               4);
  ChainComplex t = total_complex(sq, 3);
  ChainComplex tt = total_complex(sq.transposed(), 3);
  for (int d = 0; d <= 2; ++d) CHECK(homology(t, d) == homology(tt, d));

  // commuting instead of anticommuting squares are rejected
  try {
    Bicomplex bad({{{0, 0}, {Label::atom("a")}}, {{1, 0}, {Label::atom("b")}},
                   {{0, 1}, {Label::atom("c")}}, {{1, 1}, {Label::atom("d")}}},
                  {{{0, 1}, SparseIntMatrix::from_rows({{2}})}, {{1, 1}, SparseIntMatrix::from_rows({{1}})}},
                  {{{1, 0}, SparseIntMatrix::from_rows({{2}})}, {{1, 1}, SparseIntMatrix::from_rows({{1}})}},
                  4);
    FAIL("expected COMPOSITION_NONZERO");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CompositionNonzero);
  }
  CHECK_THROWS_AS(total_complex(sq, 5), Error);
}

TEST_CASE("structured text round trip is bit exact") {
  ChainComplex c = tensor(two_term(6), two_term(4));
  std::string text = to_json(c);
  ChainComplex back = chain_complex_from_json(text);
  CHECK(back == c);
  CHECK(to_json(back) == text);
  CHECK_THROWS_AS(chain_complex_from_json("{not json"), Error);
  CHECK_THROWS_AS(chain_complex_from_json(R"({"schema":"other"})"), Error);
}
