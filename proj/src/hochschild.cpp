#include "hcz/hochschild.hpp"

#include "hcz/error.hpp"

#include <algorithm>

namespace hcz {

namespace {

Integer sign(long exponent) { return (exponent % 2 == 0) ? Integer(1) : Integer(-1); }

void add_term(WordChain& chain, Word w, const Integer& c) {
  if (c == 0) return;
  auto [it, inserted] = chain.try_emplace(std::move(w), c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) chain.erase(it);
  }
}

bool lex_less(const DGAlgebra& a, const Word& x, const Word& y) {
  if (x.size() != y.size()) return x.size() < y.size();
  return std::lexicographical_compare(
      x.begin(), x.end(), y.begin(), y.end(),
      [&](std::size_t i, std::size_t j) { return a.label(i) < a.label(j); });
}

}  // namespace

HochschildComplex::HochschildComplex(DGAlgebra algebra, int bound)
    : algebra_(std::move(algebra)), bound_(bound) {
  if (bound_ < 0) throw Error(ErrorCode::BoundTooSmall, "bound must be >= 0");
  ValidationReport report = validate(algebra_);
  if (!report.ok) throw Error(ErrorCode::InvalidAlgebra, report.counterexample);

  const int top = top_degree();
  const DGAlgebra& a = algebra_;
  std::vector<std::size_t> non_unit;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (i != a.unit()) non_unit.push_back(i);

  // grouped by (word length, internal degree)
  std::map<Bidegree, std::vector<Word>> cells;
  Word w;
  auto extend = [&](auto&& self, int internal, int total) -> void {
    cells[{static_cast<int>(w.size()) - 1, internal}].push_back(w);
    for (std::size_t x : non_unit) {
      int step = a.degree(x) + 1;
      if (total + step > top) continue;
      w.push_back(x);
      self(self, internal + a.degree(x), total + step);
      w.pop_back();
    }
  };
  for (std::size_t a0 = 0; a0 < a.size(); ++a0) {
    if (a.degree(a0) > top) continue;
    w.assign(1, a0);
    extend(extend, a.degree(a0), a.degree(a0));
  }

  std::map<Bidegree, Basis> cell_labels;
  for (auto& [st, list] : cells) {
    std::sort(list.begin(), list.end(), [&](const Word& x, const Word& y) { return lex_less(a, x, y); });
    for (const Word& word : list) cell_labels[st].push_back(word_label(word));
  }
  for (int n = 0; n <= top; ++n) words_[n];
  for (const auto& [st, list] : cells)
    for (const Word& word : list) {
      int n = st.first + st.second;
      position_[word] = words_[n].size();
      words_[n].push_back(word);
    }

  std::map<Bidegree, SparseIntMatrix> vertical, horizontal;
  auto cell_matrix = [&](const Bidegree& from, const Bidegree& to,
                         WordChain (HochschildComplex::*op)(const Word&) const) {
    const auto& src = cells.at(from);
    auto it = cells.find(to);
    std::size_t rows = it == cells.end() ? 0 : it->second.size();
    SparseIntMatrix m(rows, src.size());
    for (std::size_t c = 0; c < src.size(); ++c)
      for (const auto& [image, v] : (this->*op)(src[c])) {
        const auto& dst = it->second;
        auto pos = std::lower_bound(dst.begin(), dst.end(), image,
                                    [&](const Word& x, const Word& y) { return lex_less(a, x, y); });
        m.set(static_cast<std::size_t>(pos - dst.begin()), c, v);
      }
    return m;
  };
  for (const auto& [st, list] : cells) {
    auto [s, t] = st;
    if (t > 0) vertical.emplace(st, cell_matrix(st, {s, t - 1}, &HochschildComplex::apply_internal));
    if (s > 0) horizontal.emplace(st, cell_matrix(st, {s - 1, t}, &HochschildComplex::apply_bar));
  }
  bicomplex_ = Bicomplex(std::move(cell_labels), std::move(vertical), std::move(horizontal), top);
  ChainComplex total = total_complex(bicomplex_, top);

  std::map<int, Basis> basis;
  std::map<int, SparseIntMatrix> diffs;
  for (int n = 0; n <= top; ++n) {
    for (const Word& word : words_[n]) basis[n].push_back(word_label(word));
    if (total.rank(n) != basis[n].size())
      throw Error(ErrorCode::DimensionMismatch, "total complex disagrees with word enumeration");
    if (n > 0) diffs.emplace(n, total.differential(n));
  }
  complex_ = ChainComplex(0, top, std::move(basis), std::move(diffs), true);

  for (int n = 1; n <= top; ++n) {
    internal_.emplace(n, matrix_of(n, n - 1, &HochschildComplex::apply_internal));
    bar_.emplace(n, matrix_of(n, n - 1, &HochschildComplex::apply_bar));
  }
  for (int n = 0; n <= bound_; ++n) connes_.emplace(n, matrix_of(n, n + 1, &HochschildComplex::apply_connes));

  StructuralCheck check = structural_identities(*this);
  if (!check.ok())
    throw Error(ErrorCode::CompositionNonzero, check.b_squared ? "DB + BD != 0" : "B^2 != 0");
}

const std::vector<Word>& HochschildComplex::words(int degree) const {
  static const std::vector<Word> kEmpty;
  auto it = words_.find(degree);
  return it == words_.end() ? kEmpty : it->second;
}

std::size_t HochschildComplex::position(const Word& w) const { return position_.at(w); }

int HochschildComplex::total_degree(const Word& w) const {
  int n = static_cast<int>(w.size()) - 1;
  for (std::size_t x : w) n += algebra_.degree(x);
  return n;
}

Label HochschildComplex::word_label(const Word& w) const {
  std::vector<Label> parts;
  for (std::size_t x : w) parts.push_back(algebra_.label(x));
  return Label::node("word", std::move(parts));
}

SparseIntMatrix HochschildComplex::matrix_of(int n, int target,
                                             WordChain (HochschildComplex::*op)(const Word&) const) const {
  const auto& src = words(n);
  SparseIntMatrix m(words(target).size(), src.size());
  for (std::size_t c = 0; c < src.size(); ++c)
    for (const auto& [image, v] : (this->*op)(src[c])) m.set(position_.at(image), c, v);
  return m;
}

WordChain HochschildComplex::apply_internal(const Word& w) const {
  const DGAlgebra& a = algebra_;
  WordChain out;
  for (const auto& [x, c] : a.diff(w[0])) {
    Word v = w;
    v[0] = x;
    add_term(out, std::move(v), c);
  }
  long eps = a.degree(w[0]);
  for (std::size_t i = 1; i < w.size(); ++i) {
    for (const auto& [x, c] : a.diff(w[i])) {
      if (x == a.unit()) continue;
      Word v = w;
      v[i] = x;
      add_term(out, std::move(v), sign(eps + 1) * c);
    }
    eps += a.degree(w[i]) + 1;
  }
  return out;
}

WordChain HochschildComplex::apply_bar(const Word& w) const {
  const DGAlgebra& a = algebra_;
  WordChain out;
  const std::size_t k = w.size() - 1;
  if (k == 0) return out;
  long eps = a.degree(w[0]);
  for (std::size_t i = 1; i <= k; ++i) {
    for (const auto& [x, c] : a.multiply(w[i - 1], w[i])) {
      if (i - 1 >= 1 && x == a.unit()) continue;
      Word v;
      v.reserve(k);
      v.insert(v.end(), w.begin(), w.begin() + static_cast<long>(i) - 1);
      v.push_back(x);
      v.insert(v.end(), w.begin() + static_cast<long>(i) + 1, w.end());
      add_term(out, std::move(v), sign(eps) * c);
    }
    if (i < k) eps += a.degree(w[i]) + 1;
  }
  // eps is now eps_k
  const long last = a.degree(w[k]) + 1;
  for (const auto& [x, c] : a.multiply(w[k], w[0])) {
    Word v(w.begin(), w.end() - 1);
    v[0] = x;
    add_term(out, std::move(v), -sign(last * eps) * c);
  }
  return out;
}

WordChain HochschildComplex::apply_connes(const Word& w) const {
  const DGAlgebra& a = algebra_;
  WordChain out;
  if (w[0] == a.unit()) return out;
  const std::size_t len = w.size();
  std::vector<long> e(len);
  long total = 0;
  for (std::size_t j = 0; j < len; ++j) total += e[j] = a.degree(w[j]) + 1;
  long before = 0;
  for (std::size_t i = 0; i < len; ++i) {
    Word v;
    v.reserve(len + 1);
    v.push_back(a.unit());
    v.insert(v.end(), w.begin() + static_cast<long>(i), w.end());
    v.insert(v.end(), w.begin(), w.begin() + static_cast<long>(i));
    add_term(out, std::move(v), sign(before * (total - before)));
    before += e[i];
  }
  return out;
}

HochschildComplex hochschild_complex(const DGAlgebra& a, int bound) { return HochschildComplex(a, bound); }

AbelianGroup hh(const DGAlgebra& a, int i, int bound) {
  if (bound < 0 || i > bound)
    throw Error(ErrorCode::BoundTooSmall,
                "degree " + std::to_string(i) + " needs bound >= " + std::to_string(i));
  if (i < 0) return AbelianGroup::trivial();
  return homology(HochschildComplex(a, bound).complex(), i);
}

std::map<int, SparseIntMatrix> connes_B(const HochschildComplex& h) {
  std::map<int, SparseIntMatrix> out;
  for (int n = 0; n <= h.bound(); ++n) out.emplace(n, h.connes(n));
  return out;
}

StructuralCheck structural_identities(const HochschildComplex& h) {
  StructuralCheck r;
  for (int n = 2; n <= h.top_degree(); ++n)
    if (!(h.differential(n - 1) * h.differential(n)).is_zero()) r.d_squared = false;
  for (int n = 0; n + 1 <= h.bound(); ++n)
    if (!(h.connes(n + 1) * h.connes(n)).is_zero()) r.b_squared = false;
  for (int n = 0; n <= h.bound(); ++n) {
    SparseIntMatrix db = h.differential(n + 1) * h.connes(n);
    if (n > 0) db = db + h.connes(n - 1) * h.differential(n);
    if (!db.is_zero()) r.db_plus_bd = false;
  }
  return r;
}

SparseIntMatrix induced_matrix(const DGAMorphism& f, const HochschildComplex& source,
                               const HochschildComplex& target, int n) {
  const auto& src = source.words(n);
  const std::size_t tunit = target.algebra().unit();
  SparseIntMatrix m(target.words(n).size(), src.size());
  for (std::size_t c = 0; c < src.size(); ++c) {
    WordChain partial{{Word{}, 1}};
    for (std::size_t i = 0; i < src[c].size(); ++i) {
      WordChain next;
      for (const auto& [prefix, coeff] : partial)
        for (const auto& [x, v] : f.action.at(src[c][i])) {
          if (i >= 1 && x == tunit) continue;
          Word w = prefix;
          w.push_back(x);
          add_term(next, std::move(w), coeff * v);
        }
      partial = std::move(next);
    }
    for (const auto& [w, v] : partial) m.add(target.position(w), c, v);
  }
  return m;
}

ChainMap induced_map(const DGAMorphism& f, const HochschildComplex& source,
                     const HochschildComplex& target) {
  if (!(f.source == source.algebra()) || !(f.target == target.algebra()))
    throw Error(ErrorCode::NotAChainMap, "morphism does not match the complexes");
  const int top = std::min(source.top_degree(), target.top_degree());
  std::map<int, SparseIntMatrix> comps;
  for (int n = 0; n <= top; ++n) comps.emplace(n, induced_matrix(f, source, target, n));
  for (int n = 0; n + 1 <= top; ++n)
    if (comps.at(n + 1) * source.connes(n) != target.connes(n) * comps.at(n))
      throw Error(ErrorCode::NotAChainMap, "induced map does not commute with B in degree " +
                                               std::to_string(n));
  return make_chain_map(source.complex(), target.complex(), std::move(comps));
}

ChainMap induced_map(const DGAMorphism& f, int bound) {
  return induced_map(f, HochschildComplex(f.source, bound), HochschildComplex(f.target, bound));
}

}  // namespace hcz
