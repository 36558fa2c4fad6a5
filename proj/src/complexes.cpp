#include "hcz/complexes.hpp"

#include "hcz/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <climits>
#include <numeric>
#include <sstream>

namespace hcz {

// ---------------------------------------------------------------------------
// Label

Label Label::atom(std::string text) {
  Label l;
  l.kind_ = Kind::Atom;
  l.text_ = std::move(text);
  return l;
}

Label Label::integer(std::int64_t value) {
  Label l;
  l.kind_ = Kind::Int;
  l.value_ = value;
  return l;
}

Label Label::node(std::string tag, std::vector<Label> children) {
  Label l;
  l.kind_ = Kind::Node;
  l.text_ = std::move(tag);
  l.children_ = std::move(children);
  return l;
}

std::string Label::to_string() const {
  switch (kind_) {
    case Kind::Int: return std::to_string(value_);
    case Kind::Atom: return text_;
    case Kind::Node: {
      std::string out = text_ + "(";
      for (std::size_t i = 0; i < children_.size(); ++i)
        out += (i ? "," : "") + children_[i].to_string();
      return out + ")";
    }
  }
  return {};
}

int compare(const Label& a, const Label& b) {
  if (a.kind_ != b.kind_) return a.kind_ < b.kind_ ? -1 : 1;
  switch (a.kind_) {
    case Label::Kind::Int:
      return a.value_ < b.value_ ? -1 : (a.value_ > b.value_ ? 1 : 0);
    case Label::Kind::Atom:
      return a.text_.compare(b.text_) < 0 ? -1 : (a.text_ == b.text_ ? 0 : 1);
    case Label::Kind::Node: {
      if (int c = a.text_.compare(b.text_)) return c < 0 ? -1 : 1;
      std::size_t n = std::min(a.children_.size(), b.children_.size());
      for (std::size_t i = 0; i < n; ++i)
        if (int c = compare(a.children_[i], b.children_[i])) return c;
      if (a.children_.size() == b.children_.size()) return 0;
      return a.children_.size() < b.children_.size() ? -1 : 1;
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// ChainComplex

namespace {

const Basis kEmptyBasis;

void require_zero(const SparseIntMatrix& m, const std::string& what) {
  if (!m.is_zero()) throw Error(ErrorCode::CompositionNonzero, what);
}

}  // namespace

ChainComplex::ChainComplex(int min_degree, int max_degree, std::map<int, Basis> basis,
                           std::map<int, SparseIntMatrix> differentials, bool truncated)
    : min_(min_degree), max_(max_degree), truncated_(truncated), basis_(std::move(basis)) {
  for (auto it = basis_.begin(); it != basis_.end();) {
    if (it->first < min_ || it->first > max_) {
      if (!it->second.empty())
        throw Error(ErrorCode::DimensionMismatch,
                    "basis in degree " + std::to_string(it->first) + " outside range");
      it = basis_.erase(it);
    } else {
      ++it;
    }
  }
  for (auto& [d, m] : differentials) {
    if (d < min_ || d > max_) {
      if (!m.is_zero())
        throw Error(ErrorCode::DimensionMismatch,
                    "differential in degree " + std::to_string(d) + " outside range");
      continue;
    }
    if (m.rows() != rank(d - 1) || m.cols() != rank(d))
      throw Error(ErrorCode::DimensionMismatch,
                  "differential " + std::to_string(d) + " has shape " +
                      std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    if (!m.is_zero()) diff_.emplace(d, std::move(m));
  }
  for (int d = min_ + 1; d <= max_; ++d)
    require_zero(differential(d - 1) * differential(d),
                 "d_" + std::to_string(d - 1) + " * d_" + std::to_string(d) + " != 0");
}

const Basis& ChainComplex::basis(int degree) const {
  auto it = basis_.find(degree);
  return it == basis_.end() ? kEmptyBasis : it->second;
}

SparseIntMatrix ChainComplex::differential(int degree) const {
  auto it = diff_.find(degree);
  if (it != diff_.end()) return it->second;
  return SparseIntMatrix(rank(degree - 1), rank(degree));
}

int ChainComplex::homology_limit() const noexcept { return truncated_ ? max_ - 1 : INT_MAX; }

namespace {

void check_homology_degree(const ChainComplex& c, int degree) {
  if (degree > c.homology_limit())
    throw Error(ErrorCode::TruncationTooTight,
                "H_" + std::to_string(degree) + " needs chains through degree " +
                    std::to_string(degree + 1) + ", complex stops at " +
                    std::to_string(c.max_degree()));
}

}  // namespace

AbelianGroup homology(const ChainComplex& c, int degree) {
  check_homology_degree(c, degree);
  return homology_pair(c.differential(degree), c.differential(degree + 1));
}

AbelianGroup homology_mod(const ChainComplex& c, int degree, const Integer& q) {
  if (q < 2) throw Error(ErrorCode::InvalidModulus, "modulus must be >= 2");
  return homology_presentation(c, degree, q).group();
}

// ---------------------------------------------------------------------------
// Chain maps

SparseIntMatrix ChainMap::at(int degree) const {
  auto it = components.find(degree);
  if (it != components.end()) return it->second;
  return SparseIntMatrix(target.rank(degree), source.rank(degree));
}

ChainMap make_chain_map(ChainComplex source, ChainComplex target,
                        std::map<int, SparseIntMatrix> components) {
  ChainMap f{std::move(source), std::move(target), {}};
  for (auto& [d, m] : components) {
    if (m.rows() != f.target.rank(d) || m.cols() != f.source.rank(d))
      throw Error(ErrorCode::DimensionMismatch,
                  "chain map component " + std::to_string(d) + " has wrong shape");
    if (!m.is_zero()) f.components.emplace(d, std::move(m));
  }
  int lo = std::min(f.source.min_degree(), f.target.min_degree());
  int hi = std::min(f.source.max_degree(), f.target.max_degree());
  for (int d = lo + 1; d <= hi; ++d) {
    if (!(f.target.differential(d) * f.at(d) - f.at(d - 1) * f.source.differential(d)).is_zero())
      throw Error(ErrorCode::NotAChainMap, "f d != d f in degree " + std::to_string(d));
  }
  return f;
}

ChainMap identity_map(const ChainComplex& c) {
  std::map<int, SparseIntMatrix> comps;
  for (int d = c.min_degree(); d <= c.max_degree(); ++d)
    comps.emplace(d, SparseIntMatrix::identity(c.rank(d)));
  return make_chain_map(c, c, std::move(comps));
}

ChainMap compose(const ChainMap& g, const ChainMap& f) {
  if (!(f.target == g.source))
    throw Error(ErrorCode::DimensionMismatch, "composable maps need matching complexes");
  std::map<int, SparseIntMatrix> comps;
  for (int d = f.source.min_degree(); d <= f.source.max_degree(); ++d)
    comps.emplace(d, g.at(d) * f.at(d));
  return make_chain_map(f.source, g.target, std::move(comps));
}

// ---------------------------------------------------------------------------
// Constructions

ChainComplex unit_complex() {
  return ChainComplex(0, 0, {{0, {Label::atom("1")}}}, {}, false);
}

ChainComplex tensor(const ChainComplex& c, const ChainComplex& d, std::optional<int> max_degree) {
  if (c.min_degree() > c.max_degree() || d.min_degree() > d.max_degree())
    throw Error(ErrorCode::InvalidParams, "tensor of an empty complex");
  int honest = c.max_degree() + d.max_degree();
  if (c.truncated()) honest = std::min(honest, c.max_degree() + d.min_degree());
  if (d.truncated()) honest = std::min(honest, d.max_degree() + c.min_degree());
  bool truncated = c.truncated() || d.truncated();
  int top = honest;
  if (max_degree) {
    if (*max_degree > honest && truncated)
      throw Error(ErrorCode::TruncationTooTight,
                  "tensor product is only known through degree " + std::to_string(honest));
    if (*max_degree < honest) truncated = true;
    top = std::min(*max_degree, honest);
  }
  const int bottom = c.min_degree() + d.min_degree();

  struct Entry {
    int a;
    std::size_t i, j;
    Label label;
  };
  std::map<int, std::vector<Entry>> entries;
  std::map<int, Basis> basis;
  // position of (a, i, j) within its degree
  std::map<std::tuple<int, int, std::size_t, std::size_t>, std::size_t> where;
  for (int n = bottom; n <= top; ++n) {
    auto& list = entries[n];
    for (int a = c.min_degree(); a <= c.max_degree(); ++a) {
      int b = n - a;
      if (b < d.min_degree() || b > d.max_degree()) continue;
      for (std::size_t i = 0; i < c.rank(a); ++i)
        for (std::size_t j = 0; j < d.rank(b); ++j)
          list.push_back({a, i, j,
                          Label::node("tensor", {Label::integer(a), c.basis(a)[i],
                                                 Label::integer(b), d.basis(b)[j]})});
    }
    std::sort(list.begin(), list.end(),
              [](const Entry& x, const Entry& y) { return x.label < y.label; });
    auto& bas = basis[n];
    for (std::size_t k = 0; k < list.size(); ++k) {
      where[{n, list[k].a, list[k].i, list[k].j}] = k;
      bas.push_back(list[k].label);
    }
  }

  std::map<int, SparseIntMatrix> diffs;
  for (int n = bottom + 1; n <= top; ++n) {
    SparseIntMatrix m(basis[n - 1].size(), basis[n].size());
    for (std::size_t col = 0; col < entries[n].size(); ++col) {
      const Entry& e = entries[n][col];
      const int b = n - e.a;
      // d(x tensor y) = dx tensor y + (-1)^{|x|} x tensor dy
      if (e.a - 1 >= c.min_degree()) {
        SparseIntMatrix dc = c.differential(e.a);
        for (const auto& [idx, v] : dc.entries())
          if (idx.second == e.i) m.add(where.at({n - 1, e.a - 1, idx.first, e.j}), col, v);
      }
      if (b - 1 >= d.min_degree()) {
        SparseIntMatrix dd = d.differential(b);
        const int sign = (e.a % 2 == 0) ? 1 : -1;
        for (const auto& [idx, v] : dd.entries())
          if (idx.second == e.j) m.add(where.at({n - 1, e.a, e.i, idx.first}), col, v * sign);
      }
    }
    diffs.emplace(n, std::move(m));
  }
  return ChainComplex(bottom, top, std::move(basis), std::move(diffs), truncated);
}

ChainComplex mapping_cone(const ChainMap& f) {
  const ChainComplex& src = f.source;
  const ChainComplex& tgt = f.target;
  const int bottom = std::min(src.min_degree() + 1, tgt.min_degree());
  int top = std::max(src.max_degree() + 1, tgt.max_degree());
  if (src.truncated() || tgt.truncated()) {
    top = INT_MAX;
    if (src.truncated()) top = std::min(top, src.max_degree() + 1);
    if (tgt.truncated()) top = std::min(top, tgt.max_degree());
  }
  std::map<int, Basis> basis;
  for (int n = bottom; n <= top; ++n) {
    auto& bas = basis[n];
    for (const auto& l : src.basis(n - 1)) bas.push_back(Label::node("cone.src", {l}));
    for (const auto& l : tgt.basis(n)) bas.push_back(Label::node("cone.tgt", {l}));
  }
  std::map<int, SparseIntMatrix> diffs;
  for (int n = bottom + 1; n <= top; ++n) {
    const std::size_t s_lo = src.rank(n - 2);
    SparseIntMatrix m(basis[n - 1].size(), basis[n].size());
    place_block(m, src.differential(n - 1).scaled(-1), 0, 0);
    place_block(m, f.at(n - 1), s_lo, 0);
    place_block(m, tgt.differential(n), s_lo, src.rank(n - 1));
    diffs.emplace(n, std::move(m));
  }
  return ChainComplex(bottom, top, std::move(basis), std::move(diffs),
                      src.truncated() || tgt.truncated());
}

AbelianGroup relative_homology(const ChainMap& f, int degree) {
  return homology(mapping_cone(f), degree + 1);
}

// ---------------------------------------------------------------------------
// Bicomplex

Bicomplex::Bicomplex(std::map<Bidegree, Basis> cells, std::map<Bidegree, SparseIntMatrix> vertical,
                     std::map<Bidegree, SparseIntMatrix> horizontal, int complete_through)
    : cells_(std::move(cells)), complete_through_(complete_through) {
  auto name = [](int s, int t) {
    return "(" + std::to_string(s) + "," + std::to_string(t) + ")";
  };
  for (auto& [st, m] : vertical) {
    auto [s, t] = st;
    if (m.rows() != rank(s, t - 1) || m.cols() != rank(s, t))
      throw Error(ErrorCode::DimensionMismatch, "vertical differential at " + name(s, t));
    if (!m.is_zero()) vertical_.emplace(st, std::move(m));
  }
  for (auto& [st, m] : horizontal) {
    auto [s, t] = st;
    if (m.rows() != rank(s - 1, t) || m.cols() != rank(s, t))
      throw Error(ErrorCode::DimensionMismatch, "horizontal differential at " + name(s, t));
    if (!m.is_zero()) horizontal_.emplace(st, std::move(m));
  }
  for (const auto& [st, bas] : cells_) {
    auto [s, t] = st;
    require_zero(this->vertical(s, t - 1) * this->vertical(s, t), "v^2 != 0 at " + name(s, t));
    require_zero(this->horizontal(s - 1, t) * this->horizontal(s, t), "h^2 != 0 at " + name(s, t));
    require_zero(this->vertical(s - 1, t) * this->horizontal(s, t) +
                     this->horizontal(s, t - 1) * this->vertical(s, t),
                 "vh + hv != 0 at " + name(s, t));
  }
}

const Basis& Bicomplex::cell(int s, int t) const {
  auto it = cells_.find({s, t});
  return it == cells_.end() ? kEmptyBasis : it->second;
}

SparseIntMatrix Bicomplex::vertical(int s, int t) const {
  auto it = vertical_.find({s, t});
  if (it != vertical_.end()) return it->second;
  return SparseIntMatrix(rank(s, t - 1), rank(s, t));
}

SparseIntMatrix Bicomplex::horizontal(int s, int t) const {
  auto it = horizontal_.find({s, t});
  if (it != horizontal_.end()) return it->second;
  return SparseIntMatrix(rank(s - 1, t), rank(s, t));
}

Bicomplex Bicomplex::transposed() const {
  std::map<Bidegree, Basis> cells;
  std::map<Bidegree, SparseIntMatrix> v, h;
  for (const auto& [st, bas] : cells_) cells.emplace(Bidegree{st.second, st.first}, bas);
  for (const auto& [st, m] : horizontal_) v.emplace(Bidegree{st.second, st.first}, m);
  for (const auto& [st, m] : vertical_) h.emplace(Bidegree{st.second, st.first}, m);
  return Bicomplex(std::move(cells), std::move(v), std::move(h), complete_through_);
}

ChainComplex total_complex(const Bicomplex& b, int max_degree) {
  if (max_degree > b.complete_through())
    throw Error(ErrorCode::TruncationTooTight,
                "bicomplex is only complete through total degree " +
                    std::to_string(b.complete_through()));
  int bottom = max_degree + 1;
  for (const auto& [st, bas] : b.cells())
    if (!bas.empty()) bottom = std::min(bottom, st.first + st.second);
  bottom = std::min(bottom, max_degree);

  // cells of each total degree, increasing s
  std::map<int, std::vector<Bidegree>> cells_by_degree;
  for (const auto& [st, bas] : b.cells())
    if (!bas.empty() && st.first + st.second <= max_degree)
      cells_by_degree[st.first + st.second].push_back(st);

  std::map<int, Basis> basis;
  std::map<Bidegree, std::size_t> offset;
  for (auto& [n, list] : cells_by_degree) {
    auto& bas = basis[n];
    for (const auto& st : list) {
      offset[st] = bas.size();
      for (const auto& l : b.cell(st.first, st.second))
        bas.push_back(Label::node("bi", {Label::integer(st.first), Label::integer(st.second), l}));
    }
  }
  std::map<int, SparseIntMatrix> diffs;
  for (int n = bottom + 1; n <= max_degree; ++n) {
    SparseIntMatrix m(basis[n - 1].size(), basis[n].size());
    for (const auto& st : cells_by_degree[n]) {
      auto [s, t] = st;
      if (b.rank(s, t - 1)) place_block(m, b.vertical(s, t), offset.at({s, t - 1}), offset.at(st));
      if (b.rank(s - 1, t))
        place_block(m, b.horizontal(s, t), offset.at({s - 1, t}), offset.at(st));
    }
    diffs.emplace(n, std::move(m));
  }
  return ChainComplex(bottom, max_degree, std::move(basis), std::move(diffs), true);
}

namespace {

std::map<Bidegree, AbelianGroup> e1_page(const Bicomplex& b, int max_total, const Integer& q) {
  if (max_total + 1 > b.complete_through())
    throw Error(ErrorCode::TruncationTooTight,
                "E^1 through total degree " + std::to_string(max_total) +
                    " needs the bicomplex through " + std::to_string(max_total + 1));
  std::map<Bidegree, AbelianGroup> page;
  for (const auto& [st, bas] : b.cells()) {
    auto [s, t] = st;
    if (s + t > max_total) continue;
    if (q == 0) {
      page.emplace(st, homology_pair(b.vertical(s, t), b.vertical(s, t + 1)));
    } else {
      page.emplace(st, homology_presentation(b.vertical(s, t), b.vertical(s, t + 1), q).group());
    }
  }
  return page;
}

}  // namespace

std::map<Bidegree, AbelianGroup> bicomplex_e1(const Bicomplex& b, int max_total) {
  return e1_page(b, max_total, 0);
}

std::map<Bidegree, AbelianGroup> bicomplex_e1_mod(const Bicomplex& b, int max_total,
                                                  const Integer& q) {
  if (q < 2) throw Error(ErrorCode::InvalidModulus, "modulus must be >= 2");
  return e1_page(b, max_total, q);
}

// ---------------------------------------------------------------------------
// Homology presentations

HomologyPresentation homology_presentation(const SparseIntMatrix& d_out,
                                           const SparseIntMatrix& d_in, const Integer& modulus) {
  if (d_in.rows() != d_out.cols())
    throw Error(ErrorCode::DimensionMismatch, "homology presentation shapes");
  const std::size_t n = d_out.cols();
  HomologyPresentation h;
  h.modulus = modulus;
  if (modulus == 0) {
    h.cycles = kernel_basis(d_out);
  } else {
    // x is a cycle mod q iff d_out x + q y = 0 for some y.
    const std::size_t m = d_out.rows();
    SparseIntMatrix k = kernel_basis(hstack(d_out, SparseIntMatrix::identity(m).scaled(modulus)));
    SparseIntMatrix projected(n, k.cols());
    for (const auto& [idx, v] : k.entries())
      if (idx.first < n) projected.set(idx.first, idx.second, v);
    h.cycles = LatticeSolver(projected).basis();
  }
  SparseIntMatrix boundaries = d_in;
  if (modulus != 0) boundaries = hstack(boundaries, SparseIntMatrix::identity(n).scaled(modulus));

  LatticeSolver solver(h.cycles);
  h.relations = SparseIntMatrix(h.cycles.cols(), boundaries.cols());
  for (std::size_t c = 0; c < boundaries.cols(); ++c) {
    auto coords = solver.solve(boundaries.column(c));
    if (!coords) throw Error(ErrorCode::CompositionNonzero, "boundary is not a cycle");
    for (std::size_t r = 0; r < coords->size(); ++r) h.relations.set(r, c, (*coords)[r]);
  }
  return h;
}

HomologyPresentation homology_presentation(const ChainComplex& c, int degree,
                                           const Integer& modulus) {
  check_homology_degree(c, degree);
  return homology_presentation(c.differential(degree), c.differential(degree + 1), modulus);
}

HomologyMap induced_homology_map(const HomologyPresentation& source,
                                 const HomologyPresentation& target,
                                 const SparseIntMatrix& chain_matrix) {
  if (chain_matrix.rows() != target.cycles.rows() || chain_matrix.cols() != source.cycles.rows())
    throw Error(ErrorCode::DimensionMismatch, "chain matrix shape for induced map");
  SparseIntMatrix images = chain_matrix * source.cycles;
  LatticeSolver cycles(target.cycles);
  SparseIntMatrix matrix(target.generator_count(), source.generator_count());
  for (std::size_t c = 0; c < images.cols(); ++c) {
    auto coords = cycles.solve(images.column(c));
    if (!coords) throw Error(ErrorCode::NotAChainMap, "a cycle is not sent to a cycle");
    for (std::size_t r = 0; r < coords->size(); ++r) matrix.set(r, c, (*coords)[r]);
  }
  if (!LatticeSolver(target.relations).contains_columns(matrix * source.relations))
    throw Error(ErrorCode::NotAChainMap, "a boundary is not sent to a boundary");
  return HomologyMap{source, target, std::move(matrix)};
}

namespace {

// Lattice of x with M x in span(relations), as generating columns.
SparseIntMatrix preimage_lattice(const SparseIntMatrix& m, const SparseIntMatrix& relations) {
  SparseIntMatrix k = kernel_basis(hstack(m, relations));
  SparseIntMatrix out(m.cols(), k.cols());
  for (const auto& [idx, v] : k.entries())
    if (idx.first < m.cols()) out.set(idx.first, idx.second, v);
  return out;
}

}  // namespace

AbelianGroup HomologyMap::cokernel_group() const {
  return cokernel(hstack(matrix, target.relations));
}

bool HomologyMap::is_surjective() const { return cokernel_group().is_trivial(); }

bool HomologyMap::is_injective() const {
  if (source.generator_count() == 0) return true;
  return same_lattice(preimage_lattice(matrix, target.relations), source.relations);
}

HomologyMap e1_horizontal_map(const Bicomplex& b, int s, int t, const Integer& modulus) {
  if (s + t + 1 > b.complete_through())
    throw Error(ErrorCode::TruncationTooTight, "E^1 map outside the stored bicomplex");
  auto src = homology_presentation(b.vertical(s, t), b.vertical(s, t + 1), modulus);
  auto tgt = homology_presentation(b.vertical(s - 1, t), b.vertical(s - 1, t + 1), modulus);
  return induced_homology_map(src, tgt, b.horizontal(s, t));
}

bool is_exact_at(const HomologyMap& f, const HomologyMap& g) {
  const std::size_t middle = f.target.generator_count();
  if (g.source.generator_count() != middle)
    throw Error(ErrorCode::DimensionMismatch, "maps do not meet at a common group");
  if (middle == 0) return true;
  SparseIntMatrix kernel = preimage_lattice(g.matrix, g.target.relations);
  SparseIntMatrix image = hstack(f.matrix, f.target.relations);
  return same_lattice(kernel, image);
}

bool ExactnessReport::all_exact() const {
  return std::all_of(nodes.begin(), nodes.end(), [](const ExactnessNode& n) { return n.exact; });
}

std::string ExactnessReport::first_failure() const {
  for (const auto& n : nodes)
    if (!n.exact) return n.name;
  return {};
}

ExactnessReport fibre_sequence_report(const ChainMap& f, int max_degree) {
  ChainComplex cone = mapping_cone(f);
  // H_n(F) = H_{n+1}(cone) and the sequence reaches H_{n+1}(tgt).
  int limit = std::min({cone.homology_limit() - 1, f.target.homology_limit() - 1,
                        f.source.homology_limit()});
  if (max_degree > limit)
    throw Error(ErrorCode::TruncationTooTight,
                "fibre sequence only computable through degree " + std::to_string(limit));
  const int lo = std::min(f.source.min_degree(), f.target.min_degree());

  auto fibre = [&](int n) { return homology_presentation(cone, n + 1); };
  auto src = [&](int n) { return homology_presentation(f.source, n); };
  auto tgt = [&](int n) { return homology_presentation(f.target, n); };
  // projection F_n = src_n + tgt_{n+1} -> src_n
  auto projection = [&](int n) {
    SparseIntMatrix p(f.source.rank(n), cone.rank(n + 1));
    for (std::size_t i = 0; i < f.source.rank(n); ++i) p.set(i, i, 1);
    return p;
  };
  // inclusion tgt_{n} -> F_{n-1} = src_{n-1} + tgt_n
  auto inclusion = [&](int n) {
    SparseIntMatrix p(cone.rank(n), f.target.rank(n));
    for (std::size_t i = 0; i < f.target.rank(n); ++i) p.set(f.source.rank(n - 1) + i, i, 1);
    return p;
  };

  ExactnessReport report;
  for (int n = lo; n <= max_degree; ++n) {
    auto fib_n = fibre(n), src_n = src(n), tgt_n = tgt(n), tgt_n1 = tgt(n + 1);
    auto beta_next = induced_homology_map(tgt_n1, fib_n, inclusion(n + 1));
    auto alpha = induced_homology_map(fib_n, src_n, projection(n));
    auto fn = induced_homology_map(src_n, tgt_n, f.at(n));
    auto beta = induced_homology_map(tgt_n, fibre(n - 1), inclusion(n));
    const std::string d = std::to_string(n);
    report.nodes.push_back({"H_" + d + "(fibre)", is_exact_at(beta_next, alpha)});
    report.nodes.push_back({"H_" + d + "(source)", is_exact_at(alpha, fn)});
    report.nodes.push_back({"H_" + d + "(target)", is_exact_at(fn, beta)});
  }
  return report;
}

// ---------------------------------------------------------------------------
// Structured text form

namespace {

using ojson = nlohmann::ordered_json;

ojson label_to_json(const Label& l) {
  switch (l.kind()) {
    case Label::Kind::Int: return l.value();
    case Label::Kind::Atom: return l.text();
    case Label::Kind::Node: {
      ojson args = ojson::array();
      for (const auto& c : l.children()) args.push_back(label_to_json(c));
      return ojson{{"node", l.text()}, {"args", args}};
    }
  }
  return nullptr;
}

Label label_from_json(const ojson& j) {
  if (j.is_number_integer()) return Label::integer(j.get<std::int64_t>());
  if (j.is_string()) return Label::atom(j.get<std::string>());
  if (j.is_object() && j.contains("node") && j.contains("args") && j["args"].is_array()) {
    std::vector<Label> children;
    for (const auto& c : j["args"]) children.push_back(label_from_json(c));
    return Label::node(j["node"].get<std::string>(), std::move(children));
  }
  throw Error(ErrorCode::Parse, "malformed basis label: " + j.dump());
}

}  // namespace

std::string to_json(const ChainComplex& c) {
  ojson doc;
  doc["schema"] = "hcz.chain_complex/1";
  doc["min_degree"] = c.min_degree();
  doc["max_degree"] = c.max_degree();
  doc["truncated"] = c.truncated();
  ojson degrees = ojson::array();
  for (int d = c.min_degree(); d <= c.max_degree(); ++d) {
    ojson deg;
    deg["degree"] = d;
    ojson basis = ojson::array();
    for (const auto& l : c.basis(d)) basis.push_back(label_to_json(l));
    deg["basis"] = basis;
    ojson entries = ojson::array();
    const SparseIntMatrix diff = c.differential(d);
    for (const auto& [idx, v] : diff.entries())
      entries.push_back(ojson::array({idx.first, idx.second, v.get_str()}));
    deg["differential"] = entries;
    degrees.push_back(deg);
  }
  doc["degrees"] = degrees;
  return doc.dump(2) + "\n";
}

ChainComplex chain_complex_from_json(const std::string& text) {
  ojson doc;
  try {
    doc = ojson::parse(text);
  } catch (const ojson::parse_error& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
  try {
    if (doc.value("schema", "") != "hcz.chain_complex/1")
      throw Error(ErrorCode::Parse, "unknown chain complex schema");
    const int lo = doc.at("min_degree").get<int>();
    const int hi = doc.at("max_degree").get<int>();
    std::map<int, Basis> basis;
    std::map<int, std::vector<std::tuple<std::size_t, std::size_t, Integer>>> raw;
    for (const auto& deg : doc.at("degrees")) {
      const int d = deg.at("degree").get<int>();
      auto& bas = basis[d];
      for (const auto& l : deg.at("basis")) bas.push_back(label_from_json(l));
      for (const auto& e : deg.at("differential")) {
        Integer v;
        if (v.set_str(e.at(2).get<std::string>(), 10) != 0)
          throw Error(ErrorCode::Parse, "bad integer " + e.at(2).dump());
        raw[d].emplace_back(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>(), v);
      }
    }
    std::map<int, SparseIntMatrix> diffs;
    for (auto& [d, list] : raw) {
      const std::size_t rows = basis.count(d - 1) ? basis[d - 1].size() : 0;
      SparseIntMatrix m(rows, basis[d].size());
      for (auto& [r, c, v] : list) m.set(r, c, v);
      diffs.emplace(d, std::move(m));
    }
    return ChainComplex(lo, hi, std::move(basis), std::move(diffs), doc.at("truncated").get<bool>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Parse) throw;
    throw Error(ErrorCode::Parse, e.what());
  }
}

}  // namespace hcz
