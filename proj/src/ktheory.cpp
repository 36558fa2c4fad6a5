#include "hcz/ktheory.hpp"

#include "hcz/cyclic.hpp"
#include "hcz/dga.hpp"
#include "hcz/error.hpp"

namespace hcz {

namespace {

Integer power(long p, long e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e));
  return r;
}

void require_prime(long p) {
  if (!is_prime(p)) throw Error(ErrorCode::InvalidParams, std::to_string(p) + " is not prime");
}

Integer order_of(const AbelianGroup& g) {
  auto o = g.order();
  return o ? *o : Integer(0);
}

}  // namespace

std::string RangeCertificate::flag(int i) const {
  if (is_iso(i)) return "ISO";
  if (is_surjection(i)) return "SURJECTION";
  return "UNVERIFIED";
}

RangeCertificate goodwillie_range(long p, long m) {
  require_prime(p);
  if (m < 2) throw Error(ErrorCode::InvalidParams, "nilpotency degree must be >= 2");
  RangeCertificate c;
  c.p = p;
  c.m = m;
  Rational ratio(p, m - 1);
  ratio.canonicalize();
  c.iso_below = ratio - 2;
  c.surj_below = ratio - 1;
  return c;
}

RelativeK relative_k(long p, int n, int i, int bound) {
  require_prime(p);
  if (n < 2) throw Error(ErrorCode::InvalidParams, "relative K needs n >= 2");
  if (i < 0) throw Error(ErrorCode::InvalidParams, "degree must be >= 0");
  const DGAMorphism f = reduction_map(power(p, n), power(p, n - 1));
  RelativeK r;
  r.hc = hc_relative(f, i - 1, bound);
  r.group = r.hc.primary_part(Integer(p));
  r.flag = goodwillie_range(p, 2).flag(i);
  return r;
}

AbelianGroup k_group(long p, int n, int i) {
  require_prime(p);
  if (n < 1) throw Error(ErrorCode::InvalidParams, "level must be >= 1");
  if (i < 1 || i > p - 3)
    throw Error(ErrorCode::OutOfRange, "K_" + std::to_string(i) + " is outside 1..p-3 for p = " + std::to_string(p));
  if (i % 2 == 0) return AbelianGroup::trivial();
  const long j = (i + 1) / 2;
  return AbelianGroup::cyclic(power(p, j * (n - 1)) * (power(p, j) - 1));
}

bool KTable::consistent() const {
  for (const auto& e : entries)
    if (!e.consistent) return false;
  return true;
}

KTable k_table(long p, int n) {
  require_prime(p);
  if (n < 1) throw Error(ErrorCode::InvalidParams, "level must be >= 1");
  if (p <= 3) throw Error(ErrorCode::RangeEmpty, "no degrees 1 <= i <= p-3 for p = " + std::to_string(p));
  KTable t;
  t.p = p;
  t.n = n;
  for (int i = 1; i <= p - 3; ++i) {
    KEntry e;
    e.degree = i;
    e.group = k_group(p, n, i);
    e.p_part = e.group.primary_part(Integer(p));
    e.prime_to_p = k_group(p, 1, i);
    if (i % 2) {
      const long j = (i + 1) / 2;
      e.provenance.push_back("QUILLEN: K_" + std::to_string(i) + "(Z/" + std::to_string(p) + ") = Z/" +
                             Integer(power(p, j) - 1).get_str());
    } else {
      e.provenance.push_back("QUILLEN: K_" + std::to_string(i) + "(Z/" + std::to_string(p) + ") = 0");
    }
    Integer product = 1;
    bool cyclic = true;
    for (int m = 2; m <= n; ++m) {
      RelativeK r = relative_k(p, m, i, i);
      product *= order_of(r.group);
      cyclic = cyclic && r.group.is_cyclic() && r.group.free_rank() == 0;
      e.relative.push_back(r.group);
      e.provenance.push_back("HC_" + std::to_string(i - 1) + "(Z/" + power(p, m).get_str() + ", " +
                             power(p, m - 1).get_str() + "Z/" + power(p, m).get_str() + ") = " +
                             r.group.to_string() + " [" + r.flag + "]");
      if (r.flag != "ISO") e.flags.push_back(r.flag);
    }
    e.provenance.push_back("AXIOM-TC: the p-part is cyclic");
    e.consistent = cyclic && order_of(e.p_part) == product &&
                   e.group == AbelianGroup::cyclic(product * order_of(e.prime_to_p));
    if (!e.consistent) e.flags.push_back("INCONSISTENT");
    t.entries.push_back(std::move(e));
  }
  return t;
}

}  // namespace hcz
