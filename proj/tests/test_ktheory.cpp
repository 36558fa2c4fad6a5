#include "hcz/cyclic.hpp"
#include "hcz/dga.hpp"
#include "hcz/error.hpp"
#include "hcz/ktheory.hpp"

#include "doctest.h"

#include <functional>

using namespace hcz;

namespace {

Integer power(long p, int e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), p, e);
  return r;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::Parse;
}

// Euler phi of p^n, the order of (Z/p^n)^x.
Integer unit_count(long p, int n) { return power(p, n) - power(p, n - 1); }

}  // namespace

TEST_CASE("goodwillie ranges") {
  for (long p : {3L, 5L, 7L, 11L}) {
    RangeCertificate c = goodwillie_range(p, 2);
    CHECK(c.iso_below == Rational(p - 2));
    CHECK(c.surj_below == Rational(p - 1));
    for (int i = 0; i < p - 2; ++i) CHECK(c.is_iso(i));
    CHECK_FALSE(c.is_iso(p - 2));
    CHECK(c.is_surjection(p - 2));
    CHECK_FALSE(c.is_surjection(p - 1));
    CHECK(c.flag(p - 1) == "UNVERIFIED");
    for (long m = 2; m <= 5; ++m) {
      RangeCertificate a = goodwillie_range(p, m), b = goodwillie_range(p, m + 1);
      CHECK(a.iso_below < a.surj_below);
      CHECK(b.iso_below <= a.iso_below);
      CHECK(b.surj_below <= a.surj_below);
    }
  }
  RangeCertificate seven = goodwillie_range(7, 2);
  CHECK(seven.is_iso(4));
  CHECK_FALSE(seven.is_iso(5));
  RangeCertificate five = goodwillie_range(5, 3);
  CHECK(five.iso_below == Rational(1, 2));
  CHECK(five.is_iso(0));
  CHECK_FALSE(five.is_iso(1));
  CHECK(code_of([] { goodwillie_range(4, 2); }) == ErrorCode::InvalidParams);
  CHECK(code_of([] { goodwillie_range(5, 1); }) == ErrorCode::InvalidParams);
}

TEST_CASE("relative K of the tower") {
  for (long p : {5L, 7L})
    for (int n = 2; n <= 3; ++n) {
      for (int i = 1; i <= p - 3; ++i) {
        RelativeK r = relative_k(p, n, i, i);
        CHECK(r.flag == "ISO");
        if (i % 2) {
          CHECK(r.group == AbelianGroup::cyclic(power(p, (i + 1) / 2)));
        } else {
          CHECK(r.group == AbelianGroup::trivial());
        }
        // recomputed from scratch through the cyclic module
        CHECK(r.hc == hc_relative(reduction_map(power(p, n), power(p, n - 1)), i - 1, i - 1));
      }
      CHECK(relative_k(p, n, p - 2, p - 2).flag == "SURJECTION");
      CHECK(relative_k(p, n, p - 1, p - 1).flag == "UNVERIFIED");
    }
  CHECK(code_of([] { relative_k(5, 1, 1, 1); }) == ErrorCode::InvalidParams);
  CHECK(code_of([] { relative_k(5, 2, 4, 2); }) == ErrorCode::BoundTooSmall);
}

TEST_CASE("k groups") {
  CHECK(k_group(7, 2, 1) == AbelianGroup::cyclic(42));
  CHECK(k_group(7, 2, 1) == AbelianGroup::cyclic(unit_count(7, 2)));
  CHECK(k_group(7, 1, 3) == AbelianGroup::cyclic(48));
  CHECK(k_group(7, 3, 3) == AbelianGroup::cyclic(power(7, 4) * 48));
  for (long p : {5L, 7L, 11L, 13L})
    for (int n = 1; n <= 4; ++n)
      for (int i = 1; i <= p - 3; ++i) {
        AbelianGroup g = k_group(p, n, i);
        if (i % 2 == 0) {
          CHECK(g == AbelianGroup::trivial());
          continue;
        }
        const int j = (i + 1) / 2;
        CHECK(g.is_cyclic());
        CHECK(g.order() == power(p, j * (n - 1)) * (power(p, j) - 1));
        CHECK(gcd(power(p, j * (n - 1)), power(p, j) - 1) == 1);
        if (n == 1) CHECK(g.primary_part(p) == AbelianGroup::trivial());
        // K_1 is the unit group
        if (i == 1) CHECK(g.order() == unit_count(p, n));
      }
  CHECK(code_of([] { k_group(7, 2, 5); }) == ErrorCode::OutOfRange);
  CHECK(code_of([] { k_group(7, 2, 0); }) == ErrorCode::OutOfRange);
  CHECK(code_of([] { k_group(8, 2, 1); }) == ErrorCode::InvalidParams);
}

TEST_CASE("k tables") {
  KTable five = k_table(5, 2);
  REQUIRE(five.entries.size() == 2);
  CHECK(five.entries[0].group == AbelianGroup::cyclic(20));
  CHECK(five.entries[1].group == AbelianGroup::trivial());

  KTable seven = k_table(7, 1);
  REQUIRE(seven.entries.size() == 4);
  CHECK(seven.entries[0].group == AbelianGroup::cyclic(6));
  CHECK(seven.entries[1].group == AbelianGroup::trivial());
  CHECK(seven.entries[2].group == AbelianGroup::cyclic(48));
  CHECK(seven.entries[3].group == AbelianGroup::trivial());

  for (long p : {5L, 7L})
    for (int n = 1; n <= 3; ++n) {
      KTable t = k_table(p, n);
      CHECK(t.consistent());
      for (const KEntry& e : t.entries) {
        CHECK(e.relative.size() == static_cast<std::size_t>(n - 1));
        Integer product = 1;
        for (const auto& r : e.relative) product *= *r.order();
        CHECK(e.p_part.order() == product);
        if (e.degree % 2) CHECK(product == power(p, (e.degree + 1) / 2 * (n - 1)));
        bool axiom = false;
        for (const auto& s : e.provenance) axiom = axiom || s.rfind("AXIOM-TC", 0) == 0;
        CHECK(axiom);
        CHECK(e.provenance.size() == static_cast<std::size_t>(n + 1));
      }
    }
  CHECK(code_of([] { k_table(3, 2); }) == ErrorCode::RangeEmpty);
  CHECK(code_of([] { k_table(2, 2); }) == ErrorCode::RangeEmpty);
}
