#include "hcz/dga.hpp"
#include "hcz/error.hpp"

#include "doctest.h"

using namespace hcz;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidParams;
}

}  // namespace

TEST_CASE("koszul resolution") {
  DGAlgebra a = koszul_resolution(2);
  CHECK(a.size() == 2);
  CHECK(a.in_degree(0).size() == 1);
  CHECK(a.in_degree(1).size() == 1);
  CHECK(a.diff(1) == Combination{{0, 2}});
  CHECK(a.multiply(1, 1).empty());
  CHECK(validate(a).ok);
  CHECK(code_of([] { koszul_resolution(1); }) == ErrorCode::InvalidModulus);

  for (long m : {2L, 9L, 25L, 27L, 343L}) {
    ChainComplex c = underlying_complex(koszul_resolution(m));
    CHECK(homology(c, 0) == AbelianGroup::cyclic(m));
    CHECK(homology(c, 1) == AbelianGroup::trivial());
    CHECK(homology(c, 2) == AbelianGroup::trivial());
  }
}

TEST_CASE("base ring") {
  DGAlgebra z = base_ring();
  CHECK(validate(z).ok);
  ChainComplex c = underlying_complex(z);
  CHECK(homology(c, 0) == AbelianGroup::free(1));
  CHECK(homology(c, 1) == AbelianGroup::trivial());
  ChainComplex t = tensor(c, underlying_complex(koszul_resolution(4)));
  CHECK(homology(t, 0) == AbelianGroup::cyclic(4));
}

TEST_CASE("reduction maps") {
  CHECK(reduction_map(9, 9) == identity_morphism(koszul_resolution(9)));
  DGAMorphism f = reduction_map(25, 5);
  CHECK(f.action[1] == Combination{{1, 5}});
  // induced map on H_0: Z/25 -> Z/5 sends the generator to the generator
  ChainMap cf = underlying_chain_map(f);
  auto h = induced_homology_map(homology_presentation(cf.source, 0),
                                homology_presentation(cf.target, 0), cf.at(0));
  CHECK(h.source.group() == AbelianGroup::cyclic(25));
  CHECK(h.target.group() == AbelianGroup::cyclic(5));
  CHECK(h.is_surjective());
  CHECK(!h.is_injective());

  CHECK(compose(reduction_map(9, 3), reduction_map(27, 9)) == reduction_map(27, 3));
  CHECK(code_of([] { reduction_map(9, 2); }) == ErrorCode::NotDivisible);
}

TEST_CASE("validation names the failing pair") {
  // Basis 1, x (deg 1), y (deg 1), w (deg 2); dx = 1, dy = 0, x*y = w, dw = 0.
  // d(xy) = 0 while d(x) y - x d(y) = y.
  DGAlgebra bad({{Label::atom("1"), 0}, {Label::atom("x"), 1}, {Label::atom("y"), 1},
                 {Label::atom("w"), 2}},
                0, {{{1, 2}, {{3, 1}}}}, {{1, {{0, 1}}}});
  ValidationReport r = validate(bad);
  CHECK(!r.ok);
  CHECK(r.counterexample.find("Leibniz") != std::string::npos);
  CHECK(r.counterexample.find("(x, y)") != std::string::npos);

  CHECK(code_of([] {
          DGAlgebra({{Label::atom("1"), 0}, {Label::atom("t"), 1}}, 0, {}, {{1, {{1, 1}}}});
        }) == ErrorCode::InvalidAlgebra);
}

TEST_CASE("algebra files") {
  const std::string text = R"({
    "basis": [{"label": "1", "degree": 0}, {"label": "t", "degree": 1}],
    "unit": "1",
    "differential": {"t": {"1": "8"}},
    "multiplication": [{"left": "t", "right": "t", "result": {}}]
  })";
  DGAlgebra a = dga_from_json(text);
  CHECK(a == koszul_resolution(8));
  CHECK(dga_from_json(to_json(a)) == a);
  CHECK(to_json(dga_from_json(to_json(a))) == to_json(a));

  const std::string unknown = R"({
    "basis": [{"label": "1", "degree": 0}], "unit": "1",
    "differential": {"s": {"1": 1}}
  })";
  CHECK(code_of([&] { dga_from_json(unknown); }) == ErrorCode::Parse);
  CHECK(code_of([] { dga_from_json("[1,"); }) == ErrorCode::Parse);
  CHECK(validate(dga_from_json(text)).counterexample == validate(dga_from_json(text)).counterexample);
}
