#include "hcz/cyclic.hpp"

#include "hcz/error.hpp"

namespace hcz {

namespace {

void require_bound(int i, int bound) {
  if (bound < 0 || i > bound)
    throw Error(ErrorCode::BoundTooSmall,
                "degree " + std::to_string(i) + " needs bound >= " + std::to_string(i));
}

Integer power(long p, int n) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(n));
  return r;
}

}  // namespace

bool is_prime(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::size_t CyclicComplexBundle::column_offset(int n, int s) const {
  std::size_t off = 0;
  for (int r = 0; r < s; ++r) off += hochschild.words(n - 2 * r).size();
  return off;
}

SparseIntMatrix CyclicComplexBundle::inclusion(int n) const {
  SparseIntMatrix m(total.rank(n), hochschild.words(n).size());
  for (std::size_t i = 0; i < m.cols(); ++i) m.set(i, i, 1);
  return m;
}

SparseIntMatrix CyclicComplexBundle::periodicity(int n) const {
  SparseIntMatrix m(total.rank(n - 2), total.rank(n));
  for (int s = 1; s < columns(n); ++s) {
    const std::size_t width = hochschild.words(n - 2 * s).size();
    const std::size_t from = column_offset(n, s), to = column_offset(n - 2, s - 1);
    for (std::size_t i = 0; i < width; ++i) m.set(to + i, from + i, 1);
  }
  return m;
}

SparseIntMatrix CyclicComplexBundle::connecting(int n) const {
  SparseIntMatrix m(hochschild.words(n - 1).size(), total.rank(n - 2));
  if (n - 2 >= 0) place_block(m, hochschild.connes(n - 2), 0, 0);
  return m;
}

CyclicComplexBundle cyclic_bundle(const DGAlgebra& a, int bound) {
  if (bound < 0) throw Error(ErrorCode::BoundTooSmall, "bound must be >= 0");
  HochschildComplex h(a, bound);
  const int top = bound + 1;
  std::map<Bidegree, Basis> cells;
  std::map<Bidegree, SparseIntMatrix> vertical, horizontal;
  for (int s = 0; 2 * s <= top; ++s)
    for (int n = 0; 2 * s + n <= top; ++n) {
      const Bidegree st{s, s + n};
      cells[st] = h.complex().basis(n);
      if (n >= 1) vertical.emplace(st, h.differential(n));
      if (s >= 1) horizontal.emplace(st, h.connes(n));
    }
  Bicomplex bi(std::move(cells), std::move(vertical), std::move(horizontal), top);
  ChainComplex total = total_complex(bi, top);
  return CyclicComplexBundle{std::move(h), std::move(bi), std::move(total), bound};
}

AbelianGroup hc(const DGAlgebra& a, int i, int bound) {
  require_bound(i, bound);
  if (i < 0) return AbelianGroup::trivial();
  return homology(cyclic_bundle(a, bound).total, i);
}

AbelianGroup hc_mod(const DGAlgebra& a, int i, const Integer& q, int bound) {
  require_bound(i, bound);
  return homology_mod(cyclic_bundle(a, bound).total, i, q);
}

ChainMap induced_total_map(const DGAMorphism& f, const CyclicComplexBundle& source,
                           const CyclicComplexBundle& target) {
  const int top = std::min(source.total.max_degree(), target.total.max_degree());
  std::map<int, SparseIntMatrix> comps;
  for (int m = 0; m <= top; ++m) {
    SparseIntMatrix block(target.total.rank(m), source.total.rank(m));
    for (int s = 0; s < source.columns(m); ++s)
      place_block(block, induced_matrix(f, source.hochschild, target.hochschild, m - 2 * s),
                  target.column_offset(m, s), source.column_offset(m, s));
    comps.emplace(m, std::move(block));
  }
  return make_chain_map(source.total, target.total, std::move(comps));
}

AbelianGroup hc_relative(const DGAMorphism& f, int i, int bound) {
  require_bound(i, bound);
  CyclicComplexBundle src = cyclic_bundle(f.source, bound + 1);
  CyclicComplexBundle tgt = cyclic_bundle(f.target, bound + 1);
  return relative_homology(induced_total_map(f, src, tgt), i);
}

ExactnessReport hc_relative_sequence_report(const DGAMorphism& f, int bound) {
  CyclicComplexBundle src = cyclic_bundle(f.source, bound + 1);
  CyclicComplexBundle tgt = cyclic_bundle(f.target, bound + 1);
  return fibre_sequence_report(induced_total_map(f, src, tgt), bound);
}

SurjectivityReport hc_tower_surjectivity(long p, int n, int i) {
  if (!is_prime(p)) throw Error(ErrorCode::InvalidParams, std::to_string(p) + " is not prime");
  if (n < 2) throw Error(ErrorCode::InvalidParams, "tower needs n >= 2");
  if (i < 0) throw Error(ErrorCode::InvalidParams, "degree must be >= 0");
  const DGAMorphism f = reduction_map(power(p, n), power(p, n - 1));
  CyclicComplexBundle src = cyclic_bundle(f.source, i);
  CyclicComplexBundle tgt = cyclic_bundle(f.target, i);
  ChainMap map = induced_total_map(f, src, tgt);
  HomologyMap h = induced_homology_map(homology_presentation(src.total, i),
                                       homology_presentation(tgt.total, i), map.at(i));
  SurjectivityReport r;
  r.onto = h.is_surjective();
  r.source = h.source.group();
  r.target = h.target.group();
  r.cokernel = h.cokernel_group();
  if (i > 2 * p - 1) r.flags.push_back("RANGE");
  return r;
}

ExactnessReport sbi_check(const DGAlgebra& a, int bound) {
  CyclicComplexBundle b = cyclic_bundle(a, bound);
  const ChainComplex& c = b.hochschild.complex();
  std::map<int, HomologyPresentation> hh_p, hc_p;
  for (int k = -2; k <= bound; ++k) {
    hh_p.emplace(k, homology_presentation(c, k));
    hc_p.emplace(k, homology_presentation(b.total, k));
  }
  auto I = [&](int k) { return induced_homology_map(hh_p.at(k), hc_p.at(k), b.inclusion(k)); };
  auto S = [&](int k) { return induced_homology_map(hc_p.at(k), hc_p.at(k - 2), b.periodicity(k)); };
  auto d = [&](int k) { return induced_homology_map(hc_p.at(k - 2), hh_p.at(k - 1), b.connecting(k)); };

  ExactnessReport report;
  auto node = [&](std::string name, bool exact) { report.nodes.push_back({std::move(name), exact}); };
  for (int n = 0; n <= bound + 1; ++n) {
    if (n <= bound) {
      auto in = I(n), sn = S(n), dn = d(n);
      node("HC_" + std::to_string(n), is_exact_at(in, sn));
      if (n >= 2) node("HC_" + std::to_string(n - 2) + " (S, B)", is_exact_at(sn, dn));
    }
    if (n >= 1) node("HH_" + std::to_string(n - 1), is_exact_at(d(n), I(n - 1)));
  }
  return report;
}

}  // namespace hcz
