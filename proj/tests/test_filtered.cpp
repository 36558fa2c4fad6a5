#include "hcz/error.hpp"
#include "hcz/filtered.hpp"

#include "doctest.h"

#include <functional>
#include <numeric>

using namespace hcz;

namespace {

Integer power(long p, int e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), p, e);
  return r;
}

Integer order_of(const AbelianGroup& g) {
  auto o = g.order();
  REQUIRE(o.has_value());
  return *o;
}

// Colimit of X_0(i_0) (x) ... over every tuple with sum <= k in the box
// [-m-1, 1]^r, with one relation per generator and per unit arrow.
AbelianGroup brute_colimit(const std::vector<FilteredAbelianGroup>& xs, int k) {
  const std::size_t r = xs.size();
  std::vector<Tuple> objects;
  Tuple t(r);
  std::function<void(std::size_t)> rec = [&](std::size_t l) {
    if (l == r) {
      if (std::accumulate(t.begin(), t.end(), 0) <= k) objects.push_back(t);
      return;
    }
    for (int v = -xs[l].window() - 1; v <= 1; ++v) {
      t[l] = v;
      rec(l + 1);
    }
  };
  rec(0);
  auto block = [&](const Tuple& u) {
    SparseIntMatrix gens = SparseIntMatrix::identity(1), rels(1, 0);
    for (std::size_t l = 0; l < r; ++l) {
      const Presentation& p = xs[l].piece(u[l]);
      SparseIntMatrix g = SparseIntMatrix::identity(p.generators);
      rels = hstack(kronecker(rels, g), kronecker(gens, p.relations));
      gens = kronecker(gens, g);
    }
    return std::make_pair(gens.rows(), rels);
  };
  std::vector<std::size_t> offset;
  std::size_t total = 0;
  for (const Tuple& u : objects) {
    offset.push_back(total);
    total += block(u).first;
  }
  auto index = [&](const Tuple& u) {
    return static_cast<std::size_t>(std::find(objects.begin(), objects.end(), u) - objects.begin());
  };
  SparseIntMatrix relations(total, 0);
  for (std::size_t a = 0; a < objects.size(); ++a) {
    const Tuple& u = objects[a];
    auto [g, rel] = block(u);
    SparseIntMatrix placed(total, rel.cols());
    place_block(placed, rel, offset[a], 0);
    relations = hstack(relations, placed);
    for (std::size_t l = 0; l < r; ++l) {
      Tuple v = u;
      ++v[l];
      const std::size_t b = index(v);
      if (b == objects.size()) continue;
      SparseIntMatrix arrow = SparseIntMatrix::identity(1);
      for (std::size_t j = 0; j < r; ++j)
        arrow = kronecker(arrow, j == l ? xs[j].transition(u[j])
                                        : SparseIntMatrix::identity(xs[j].piece(u[j]).generators));
      SparseIntMatrix cols(total, g);
      place_block(cols, SparseIntMatrix::identity(g), offset[a], 0);
      SparseIntMatrix image(total, g);
      place_block(image, arrow, offset[b], 0);
      relations = hstack(relations, cols - image);
    }
  }
  return cokernel(relations);
}

// |A (x) B| for finite A, B from invariant factors.
Integer tensor_order(const AbelianGroup& a, const AbelianGroup& b) {
  Integer o = 1;
  for (const Integer& x : a.invariant_factors())
    for (const Integer& y : b.invariant_factors()) o *= gcd(x, y);
  return o;
}

FilteredAbelianGroup split_free(std::size_t rank0, std::size_t rank1) {
  // Y(0) = Z^rank0, Y(-1) = Z^rank1 on the first basis vectors.
  SparseIntMatrix inc(rank0, rank1);
  for (std::size_t i = 0; i < rank1; ++i) inc.set(i, i, 1);
  return FilteredAbelianGroup(1, {{0, Presentation::free(rank0)}, {-1, Presentation::free(rank1)}}, {{-1, inc}});
}

}  // namespace

TEST_CASE("adic filtration pieces") {
  for (long p : {2L, 3L, 5L}) {
    FilteredRing r1 = adic_filtration(p, 1);
    CHECK(r1.window() == 0);
    CHECK(r1.piece(0).group() == AbelianGroup::cyclic(p));
    CHECK(r1.piece(-1).group() == AbelianGroup::trivial());

    FilteredRing r2 = adic_filtration(p, 2);
    CHECK(r2.piece(0).group() == AbelianGroup::cyclic(p * p));
    CHECK(r2.piece(-1).group() == AbelianGroup::cyclic(p));
    CHECK(r2.piece(-2).group() == AbelianGroup::trivial());
    CHECK(r2.piece(3).group() == AbelianGroup::cyclic(p * p));
    // I * I = 0
    CHECK(r2.product(-1, -1).is_zero());
    CHECK(r2.product(-1, -1).rows() == 0);
    // the transition is the subgroup inclusion p^{-s} Z / p^n
    CHECK(r2.transition(-1) == SparseIntMatrix::from_rows({{p}}));

    FilteredRing top = adic_filtration(p, 3, 2);
    CHECK(top.window() == 1);
    CHECK(top.piece(-1).group() == AbelianGroup::cyclic(p));
  }
  CHECK_THROWS_AS(adic_filtration(4, 2), Error);
  CHECK_THROWS_AS(adic_filtration(3, 0), Error);
  try {
    adic_filtration(6, 1);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidParams);
  }
}

TEST_CASE("ring axioms are validated") {
  Presentation z4 = Presentation::from_factors({4});
  CHECK_NOTHROW(FilteredRing::trivial(z4, SparseIntMatrix::from_rows({{1}}), {1}));
  CHECK_THROWS_AS(FilteredRing::trivial(z4, SparseIntMatrix::from_rows({{1}}), {3}), Error);
  CHECK_THROWS_AS(FilteredRing::trivial(z4, SparseIntMatrix::from_rows({{2}}), {1}), Error);
  // the transition Z/3 -> Z/9, 1 -> 1 is not well defined
  CHECK_THROWS_AS(FilteredAbelianGroup(1, {{0, Presentation::from_factors({9})}, {-1, Presentation::from_factors({3})}},
                                       {{-1, SparseIntMatrix::from_rows({{1}})}}),
                  Error);
}

TEST_CASE("filtered tensor against the brute colimit") {
  for (long p : {2L, 3L}) {
    std::vector<FilteredRing> rings{adic_filtration(p, 1), adic_filtration(p, 2), adic_filtration(p, 3),
                                    adic_filtration(p, 3, 2)};
    for (const auto& x : rings)
      for (const auto& y : rings) {
        const int lo = -x.window() - y.window() - 2;
        for (int k = lo; k <= 2; ++k) {
          AbelianGroup got = filtered_tensor(x.group(), y.group(), k).presentation.group();
          CHECK(got == brute_colimit({x.group(), y.group()}, k));
        }
      }
    FilteredRing r = adic_filtration(p, 2);
    for (int k = -4; k <= 1; ++k) {
      std::vector<FilteredAbelianGroup> three(3, r.group());
      CHECK(filtered_tensor(three, k).presentation.group() == brute_colimit(three, k));
    }
  }
}

TEST_CASE("adic(p,2) tensor square at level -1") {
  for (long p : {2L, 3L, 5L}) {
    FilteredRing r = adic_filtration(p, 2);
    TensorLevel level = filtered_tensor(r.group(), r.group(), -1);
    CHECK(level.tuples == std::vector<Tuple>{{-1, 0}, {0, -1}});
    // p Z/p^2 (x) Z/p^2 twice, glued along pZ/p^2 (x) pZ/p^2 whose images vanish
    CHECK(level.presentation.group() == AbelianGroup({0, {p, p}}));
    CHECK(order_of(level.presentation.group()) == p * p);
    CHECK(filtered_tensor(r.group(), r.group(), -2).presentation.group() == AbelianGroup::cyclic(p));
    CHECK(filtered_tensor(r.group(), r.group(), -3).presentation.group() == AbelianGroup::trivial());
    CHECK(filtered_tensor(r.group(), r.group(), 0).presentation.group() == AbelianGroup::cyclic(p * p));
  }
}

TEST_CASE("unit law and symmetry") {
  const FilteredAbelianGroup u = FilteredAbelianGroup::unit();
  for (long p : {2L, 3L}) {
    std::vector<FilteredRing> rings{adic_filtration(p, 2), adic_filtration(p, 3), adic_filtration(p, 3, 2)};
    for (const auto& x : rings)
      for (int k = -x.window() - 2; k <= 2; ++k) {
        CHECK(filtered_tensor(x.group(), u, k).presentation.group() == x.piece(k).group());
        CHECK(filtered_tensor(u, x.group(), k).presentation.group() == x.piece(k).group());
      }
    for (const auto& x : rings)
      for (const auto& y : rings)
        for (int k = -5; k <= 1; ++k)
          CHECK(filtered_tensor(x.group(), y.group(), k).presentation.group() ==
                filtered_tensor(y.group(), x.group(), k).presentation.group());
  }
}

TEST_CASE("graded layers have the product order") {
  for (long p : {2L, 3L, 5L}) {
    std::vector<FilteredRing> rings{adic_filtration(p, 2), adic_filtration(p, 3), adic_filtration(p, 3, 2),
                                    adic_filtration(p, 4, 3)};
    for (const auto& x : rings)
      for (const auto& y : rings) {
        const std::vector<FilteredAbelianGroup> f{x.group(), y.group()};
        for (int k = -x.window() - y.window() - 1; k <= 1; ++k) {
          TensorLevel upper = filtered_tensor(f, k), lower = filtered_tensor(f, k - 1);
          AbelianGroup layer = quotient(upper.presentation, level_inclusion(f, lower, upper)).group();
          Integer expected = 1;
          for (int i = -x.window(); i <= 0; ++i) {
            int j = k - i;
            if (j < -y.window() || j > 0) continue;
            expected *= tensor_order(graded_quotient(x.group(), i).group(), graded_quotient(y.group(), j).group());
          }
          if (k > 0) expected = 1;
          CHECK(order_of(layer) == expected);
        }
      }
  }
}

TEST_CASE("associated graded") {
  for (long p : {2L, 3L, 5L})
    for (int n = 1; n <= 4; ++n) {
      FilteredRing r = adic_filtration(p, n);
      for (int i = -(n - 1); i <= 0; ++i) CHECK(graded_quotient(r.group(), i).group() == AbelianGroup::cyclic(p));
      CHECK(graded_quotient(r.group(), -n).group() == AbelianGroup::trivial());
      FilteredRing g = graded(r);
      for (int k = -(n - 1); k <= 0; ++k) CHECK(order_of(g.piece(k).group()) == power(p, k + n));
      if (n >= 3) {
        // Q_{-1} * Q_{-1} lands in the Q_{-2} slot of gr(-2)
        SparseIntMatrix mu = g.product(-1, -1);
        const std::size_t g1 = g.piece(-1).generators;
        const std::size_t q_minus1 = g1 - 1;  // last block of gr(-1)
        IntVector column = mu.column(q_minus1 * g1 + q_minus1);
        IntVector slot(g.piece(-2).generators, 0);
        slot[g.piece(-2).generators - 1] = 1;
        CHECK(column == slot);
      }
    }
  Presentation z6 = Presentation::from_factors({6});
  FilteredRing t = FilteredRing::trivial(z6, SparseIntMatrix::from_rows({{1}}), {1});
  FilteredRing g = graded(t);
  CHECK(g.window() == 0);
  CHECK(g.piece(0).group() == AbelianGroup::cyclic(6));
  CHECK(g.product(0, 0) == SparseIntMatrix::from_rows({{1}}));
}

TEST_CASE("cyclic bar construction") {
  for (long p : {2L, 3L}) {
    FilteredRing r = adic_filtration(p, 2);
    for (int k = -3; k <= 1; ++k) {
      CyclicBarLevel z0 = cyclic_bar(r, 0, k);
      CHECK(z0.presentation().group() == r.piece(k).group());
      CHECK(z0.rotation == SparseIntMatrix::identity(z0.presentation().generators));
      for (int q = 1; q <= 3; ++q) {
        CyclicBarLevel z = cyclic_bar(r, q, k);
        SparseIntMatrix t = SparseIntMatrix::identity(z.presentation().generators);
        for (int i = 0; i <= q; ++i) t = z.rotation * t;
        CHECK(same_map(t, SparseIntMatrix::identity(t.rows()), z.presentation()));
        CHECK(z.faces.size() == static_cast<std::size_t>(q + 1));
        CHECK(z.degeneracies.size() == static_cast<std::size_t>(q + 1));
      }
    }
    CyclicBarLevel z1 = cyclic_bar(r, 1, 0);
    CHECK(z1.level.tuples == std::vector<Tuple>{{0, 0}});
    // 1 (x) 1 -> 1
    CHECK(z1.faces[0] == SparseIntMatrix::from_rows({{1}}));
    CHECK(z1.faces[1] == SparseIntMatrix::from_rows({{1}}));
    CHECK(z1.degeneracies[0] == SparseIntMatrix::from_rows({{1}}));
  }
}

TEST_CASE("cyclic identities") {
  for (long p : {2L, 3L})
    for (int n = 1; n <= 3; ++n) {
      FilteredRing r = adic_filtration(p, n);
      for (int k = -n - 1; k <= 1; ++k) {
        IdentityReport rep = cyclic_identities(r, 2, k);
        INFO(rep.first_failure);
        CHECK(rep.ok);
        CHECK(rep.checked > 0);
      }
    }
  // a non-commutative piece: upper triangular 2x2 matrices over Z/4 with
  // the trivial filtration
  Presentation g = Presentation::from_factors({4, 4, 4});
  // basis e11, e12, e22
  SparseIntMatrix mu(3, 9);
  auto at = [](int a, int b) { return static_cast<std::size_t>(3 * a + b); };
  mu.set(0, at(0, 0), 1);
  mu.set(1, at(0, 1), 1);
  mu.set(1, at(1, 2), 1);
  mu.set(2, at(2, 2), 1);
  FilteredRing tri = FilteredRing::trivial(g, mu, {1, 0, 1});
  IdentityReport rep = cyclic_identities(tri, 2, 0);
  INFO(rep.first_failure);
  CHECK(rep.ok);
}

TEST_CASE("graded comparison") {
  for (long p : {2L, 3L, 5L}) {
    FilteredRing r = adic_filtration(p, 2);
    ComparisonReport c = graded_comparison(r, 1, -1);
    CHECK(c.ok());
    CHECK(order_of(c.lhs) == p * p);
    CHECK(c.rhs == AbelianGroup({0, {p, p}}));
    for (int n = 1; n <= 3; ++n) {
      FilteredRing m = adic_filtration(p, n);
      for (int q = 0; q <= 3; ++q)
        for (int k = -(q + 1) * (n - 1) - 1; k <= 1; ++k) {
          ComparisonReport rep = graded_comparison(m, q, k);
          INFO("p=" << p << " n=" << n << " q=" << q << " k=" << k);
          CHECK(rep.ok());
          if (k < -(q + 1) * (n - 1) || k > 0) {
            CHECK(rep.lhs == AbelianGroup::trivial());
            CHECK(rep.rhs == AbelianGroup::trivial());
          }
        }
    }
  }
  // single jump: both sides are the plain tensor power
  Presentation z6 = Presentation::from_factors({6});
  FilteredRing t = FilteredRing::trivial(z6, SparseIntMatrix::from_rows({{1}}), {1});
  for (int q = 0; q <= 2; ++q) {
    ComparisonReport rep = graded_comparison(t, q, 0);
    CHECK(rep.ok());
    CHECK(rep.lhs == AbelianGroup::cyclic(6));
  }
}

TEST_CASE("fixed points on the diagonal") {
  FilteredAbelianGroup y = split_free(1, 1);
  FixedPointReport r = fixed_points_check(y, 2, -1);
  CHECK(r.ok);
  CHECK(r.diagonal == std::vector<std::size_t>{0});

  FilteredAbelianGroup w = split_free(3, 1);
  for (int q = 1; q <= 3; ++q)
    for (int s = -3 * q - 1; s <= 1; ++s) {
      FixedPointReport rep = fixed_points_check(w, q, s);
      INFO("q=" << q << " s=" << s);
      CHECK(rep.ok);
    }
  CHECK(fixed_points_check(w, 2, -1).diagonal == std::vector<std::size_t>{0});
  CHECK(fixed_points_check(w, 2, 0).diagonal == std::vector<std::size_t>{0, 1, 2});
  CHECK(fixed_points_check(w, 2, -3).diagonal.empty());
  CHECK(fixed_points_check(w, 2, -3).expected.empty());
  // q = 1 is Y(s) itself
  CHECK(fixed_points_check(w, 1, -1).diagonal == std::vector<std::size_t>{0});

  FilteredRing adic = adic_filtration(3, 2);
  try {
    fixed_points_check(adic.group(), 2, -1);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnsupportedFiltration);
  }
  FilteredAbelianGroup scaled(1, {{0, Presentation::free(1)}, {-1, Presentation::free(1)}},
                              {{-1, SparseIntMatrix::from_rows({{2}})}});
  CHECK_THROWS_AS(fixed_points_check(scaled, 2, -1), Error);
}

TEST_CASE("filtered ring files") {
  const std::string text = R"({
    "schema": "hcz.filtered_ring/1",
    "window": 1,
    "pieces": [{"index": 0, "invariant_factors": ["9"]}, {"index": -1, "invariant_factors": [3]}],
    "transitions": [{"from": -1, "matrix": [[3]]}],
    "products": [{"left": 0, "right": 0, "matrix": [[1]]},
                 {"left": 0, "right": -1, "matrix": [[1]]},
                 {"left": -1, "right": 0, "matrix": [[1]]}],
    "unit": [1]
  })";
  FilteredRing r = filtered_ring_from_json(text);
  FilteredRing a = adic_filtration(3, 2);
  for (int k = -3; k <= 1; ++k) {
    CHECK(r.piece(k).group() == a.piece(k).group());
    CHECK(graded_comparison(r, 1, k).ok());
  }
  auto code = [](const std::string& s) {
    try {
      filtered_ring_from_json(s);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::OutOfRange;
  };
  CHECK(code("{") == ErrorCode::Parse);
  CHECK(code(R"({"window": 0, "pieces": [], "unit": []})") == ErrorCode::Parse);
  CHECK(code(R"({"window": 0, "pieces": [{"index": 0, "invariant_factors": [4]}],
                 "products": [{"left": 0, "right": 0, "matrix": [[1, 2]]}], "unit": [1]})") == ErrorCode::Parse);
}
