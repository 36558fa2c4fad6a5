#include "hcz/filtered.hpp"

#include "hcz/cyclic.hpp"
#include "hcz/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace hcz {

// ---------------------------------------------------------------------------
// Presentations

Presentation Presentation::free(std::size_t rank) { return {rank, SparseIntMatrix(rank, 0)}; }

Presentation Presentation::from_factors(const IntVector& factors) {
  Presentation p;
  p.generators = factors.size();
  IntVector nonzero;
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < factors.size(); ++i)
    if (factors[i] != 0) rows.push_back(i);
  p.relations = SparseIntMatrix(factors.size(), rows.size());
  for (std::size_t c = 0; c < rows.size(); ++c) p.relations.set(rows[c], c, factors[rows[c]]);
  return p;
}

bool Presentation::kills(const SparseIntMatrix& m) const {
  if (m.is_zero()) return true;
  return LatticeSolver(relations).contains_columns(m);
}

Presentation tensor(const Presentation& a, const Presentation& b) {
  Presentation p;
  p.generators = a.generators * b.generators;
  p.relations = hstack(kronecker(a.relations, SparseIntMatrix::identity(b.generators)),
                       kronecker(SparseIntMatrix::identity(a.generators), b.relations));
  return p;
}

Presentation tensor(const std::vector<Presentation>& factors) {
  Presentation p = Presentation::free(1);
  for (const auto& f : factors) p = tensor(p, f);
  return p;
}

Presentation direct_sum(const std::vector<Presentation>& parts) {
  std::size_t gens = 0, rels = 0;
  for (const auto& p : parts) {
    gens += p.generators;
    rels += p.relations.cols();
  }
  Presentation out{gens, SparseIntMatrix(gens, rels)};
  std::size_t r = 0, c = 0;
  for (const auto& p : parts) {
    place_block(out.relations, p.relations, r, c);
    r += p.generators;
    c += p.relations.cols();
  }
  return out;
}

Presentation quotient(const Presentation& p, const SparseIntMatrix& sub) {
  return {p.generators, hstack(p.relations, sub)};
}

bool is_homomorphism(const SparseIntMatrix& f, const Presentation& source, const Presentation& target) {
  if (f.rows() != target.generators || f.cols() != source.generators) return false;
  return target.kills(f * source.relations);
}

bool same_map(const SparseIntMatrix& f, const SparseIntMatrix& g, const Presentation& target) {
  if (f.rows() != g.rows() || f.cols() != g.cols()) return false;
  return target.kills(f - g);
}

// ---------------------------------------------------------------------------
// Filtered groups and rings

namespace {

const Presentation kZeroPresentation;

Integer power(long p, long e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e));
  return r;
}

int clamp_top(int s) { return std::min(s, 0); }

}  // namespace

FilteredAbelianGroup::FilteredAbelianGroup(int window, std::map<int, Presentation> pieces,
                                           std::map<int, SparseIntMatrix> transitions)
    : window_(window), pieces_(std::move(pieces)), transitions_(std::move(transitions)) {
  if (window_ < 0) throw Error(ErrorCode::InvalidParams, "window must be >= 0");
  for (int s = -window_; s <= 0; ++s) {
    auto it = pieces_.find(s);
    if (it == pieces_.end()) throw Error(ErrorCode::InvalidParams, "missing piece " + std::to_string(s));
    if (it->second.relations.rows() != it->second.generators)
      throw Error(ErrorCode::InvalidParams, "relation shape of piece " + std::to_string(s));
  }
  for (const auto& [s, p] : pieces_)
    if (s < -window_ || s > 0) throw Error(ErrorCode::InvalidParams, "piece outside the window");
  for (int s = -window_; s < 0; ++s) {
    auto it = transitions_.find(s);
    if (it == transitions_.end())
      throw Error(ErrorCode::InvalidParams, "missing transition from " + std::to_string(s));
    if (!is_homomorphism(it->second, piece(s), piece(s + 1)))
      throw Error(ErrorCode::InvalidParams, "transition from " + std::to_string(s) + " is not well defined");
  }
}

const Presentation& FilteredAbelianGroup::piece(int s) const {
  if (s < -window_) return kZeroPresentation;
  return pieces_.at(clamp_top(s));
}

SparseIntMatrix FilteredAbelianGroup::transition(int s) const {
  if (s >= 0) return SparseIntMatrix::identity(piece(0).generators);
  if (s < -window_) return SparseIntMatrix(piece(s + 1).generators, 0);
  return transitions_.at(s);
}

SparseIntMatrix FilteredAbelianGroup::transition(int s, int t) const {
  SparseIntMatrix m = SparseIntMatrix::identity(piece(s).generators);
  for (int u = s; u < t; ++u) m = transition(u) * m;
  return m;
}

FilteredAbelianGroup FilteredAbelianGroup::unit() {
  return FilteredAbelianGroup(0, {{0, Presentation::free(1)}}, {});
}

FilteredRing::FilteredRing(FilteredAbelianGroup group,
                           std::map<std::pair<int, int>, SparseIntMatrix> products, IntVector unit)
    : group_(std::move(group)), products_(std::move(products)), unit_(std::move(unit)) {
  const int m = window();
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidAlgebra, what); };
  auto pair_name = [](int i, int j) { return "(" + std::to_string(i) + ", " + std::to_string(j) + ")"; };
  if (unit_.size() != piece(0).generators) fail("unit has the wrong length");
  for (int i = -m; i <= 0; ++i)
    for (int j = -m; j <= 0; ++j) {
      if (i + j < -m) continue;
      auto it = products_.find({i, j});
      if (it == products_.end()) fail("missing product " + pair_name(i, j));
      if (!is_homomorphism(it->second, tensor(piece(i), piece(j)), piece(i + j)))
        fail("product " + pair_name(i, j) + " is not well defined");
    }
  // products commute with transitions
  for (int i = -m; i <= 0; ++i)
    for (int j = -m; j <= 0; ++j) {
      const Presentation& target = piece(i + j + 1);
      if (i < 0) {
        SparseIntMatrix lhs = product(i + 1, j) * kronecker(transition(i), SparseIntMatrix::identity(piece(j).generators));
        SparseIntMatrix rhs = transition(i + j) * product(i, j);
        if (!same_map(lhs, rhs, target)) fail("product " + pair_name(i, j) + " does not commute with transitions");
      }
      if (j < 0) {
        SparseIntMatrix lhs = product(i, j + 1) * kronecker(SparseIntMatrix::identity(piece(i).generators), transition(j));
        SparseIntMatrix rhs = transition(i + j) * product(i, j);
        if (!same_map(lhs, rhs, target)) fail("product " + pair_name(i, j) + " does not commute with transitions");
      }
    }
  for (int i = -m; i <= 0; ++i)
    for (int j = -m; j <= 0; ++j)
      for (int k = -m; k <= 0; ++k) {
        const std::size_t gi = piece(i).generators, gj = piece(j).generators, gk = piece(k).generators;
        SparseIntMatrix left = product(i + j, k) * kronecker(product(i, j), SparseIntMatrix::identity(gk));
        SparseIntMatrix right = product(i, j + k) * kronecker(SparseIntMatrix::identity(gi), product(j, k));
        (void)gj;
        if (!same_map(left, right, piece(i + j + k)))
          fail("associativity fails on (" + std::to_string(i) + ", " + std::to_string(j) + ", " +
               std::to_string(k) + ")");
      }
  SparseIntMatrix u = SparseIntMatrix::from_columns({unit_}, piece(0).generators);
  for (int i = -m; i <= 0; ++i) {
    const std::size_t g = piece(i).generators;
    SparseIntMatrix id = SparseIntMatrix::identity(g);
    if (!same_map(product(0, i) * kronecker(u, id), id, piece(i)) ||
        !same_map(product(i, 0) * kronecker(id, u), id, piece(i)))
      fail("unit law fails in piece " + std::to_string(i));
  }
}

SparseIntMatrix FilteredRing::product(int i, int j) const {
  i = clamp_top(i);
  j = clamp_top(j);
  const std::size_t cols = piece(i).generators * piece(j).generators;
  if (i < -window() || j < -window() || i + j < -window()) return SparseIntMatrix(piece(i + j).generators, cols);
  return products_.at({i, j});
}

FilteredRing FilteredRing::trivial(const Presentation& ring, const SparseIntMatrix& product, IntVector unit) {
  return FilteredRing(FilteredAbelianGroup(0, {{0, ring}}, {}), {{{0, 0}, product}}, std::move(unit));
}

FilteredRing adic_filtration(long p, int n, int e) {
  if (!is_prime(p)) throw Error(ErrorCode::InvalidParams, std::to_string(p) + " is not prime");
  if (n < 1 || e < 1) throw Error(ErrorCode::InvalidParams, "adic filtration needs n >= 1 and e >= 1");
  const int m = (n + e - 1) / e - 1;
  std::map<int, Presentation> pieces;
  std::map<int, SparseIntMatrix> transitions;
  for (int s = -m; s <= 0; ++s) {
    pieces[s] = Presentation::from_factors({power(p, n + static_cast<long>(s) * e)});
    if (s < 0) {
      SparseIntMatrix t(1, 1);
      t.set(0, 0, power(p, e));
      transitions[s] = t;
    }
  }
  std::map<std::pair<int, int>, SparseIntMatrix> products;
  for (int i = -m; i <= 0; ++i)
    for (int j = -m; j <= 0; ++j)
      if (i + j >= -m) products[{i, j}] = SparseIntMatrix::from_rows({{1}});
  return FilteredRing(FilteredAbelianGroup(m, std::move(pieces), std::move(transitions)),
                      std::move(products), {1});
}

// ---------------------------------------------------------------------------
// Filtered tensor products

namespace {

std::vector<Tuple> antidiagonal(const std::vector<FilteredAbelianGroup>& factors, int sum) {
  std::vector<Tuple> out;
  Tuple t(factors.size());
  std::function<void(std::size_t, int)> rec = [&](std::size_t l, int remaining) {
    if (l == factors.size()) {
      if (remaining == 0) out.push_back(t);
      return;
    }
    for (int v = -factors[l].window(); v <= 0; ++v) {
      t[l] = v;
      rec(l + 1, remaining - v);
    }
  };
  if (!factors.empty()) rec(0, sum);
  return out;
}

Presentation tuple_presentation(const std::vector<FilteredAbelianGroup>& factors, const Tuple& t) {
  std::vector<Presentation> parts;
  for (std::size_t l = 0; l < t.size(); ++l) parts.push_back(factors[l].piece(t[l]));
  return tensor(parts);
}

// Raise coordinate l of t by one.
SparseIntMatrix raise(const std::vector<FilteredAbelianGroup>& factors, const Tuple& t, std::size_t l) {
  SparseIntMatrix m = SparseIntMatrix::identity(1);
  for (std::size_t j = 0; j < t.size(); ++j)
    m = kronecker(m, j == l ? factors[j].transition(t[j])
                            : SparseIntMatrix::identity(factors[j].piece(t[j]).generators));
  return m;
}

int tuple_sum(const Tuple& t) { return std::accumulate(t.begin(), t.end(), 0); }

}  // namespace

std::size_t TensorLevel::find(const Tuple& t) const {
  auto it = std::find(tuples.begin(), tuples.end(), t);
  return it == tuples.end() ? static_cast<std::size_t>(-1) : static_cast<std::size_t>(it - tuples.begin());
}

SparseIntMatrix embed_tuple(const std::vector<FilteredAbelianGroup>& factors, const Tuple& t,
                            const TensorLevel& level) {
  Tuple c = t;
  for (int& v : c) v = clamp_top(v);
  const int target = clamp_top(level.level);
  SparseIntMatrix m = SparseIntMatrix::identity(tuple_presentation(factors, c).generators);
  for (std::size_t l = 0; l < c.size(); ++l)
    if (c[l] < -factors[l].window()) return SparseIntMatrix(level.presentation.generators, m.cols());
  if (tuple_sum(c) > target) throw Error(ErrorCode::InvalidParams, "tuple lies above the level");
  while (tuple_sum(c) < target) {
    std::size_t l = 0;
    while (c[l] >= 0) ++l;
    m = raise(factors, c, l) * m;
    ++c[l];
  }
  const std::size_t idx = level.find(c);
  SparseIntMatrix out(level.presentation.generators, m.cols());
  if (idx != static_cast<std::size_t>(-1)) place_block(out, m, level.offsets[idx], 0);
  return out;
}

TensorLevel filtered_tensor(const std::vector<FilteredAbelianGroup>& factors, int k) {
  TensorLevel level;
  level.level = k;
  const int top = clamp_top(k);
  level.tuples = antidiagonal(factors, top);
  std::vector<Presentation> blocks;
  std::size_t offset = 0;
  for (const Tuple& t : level.tuples) {
    level.offsets.push_back(offset);
    blocks.push_back(tuple_presentation(factors, t));
    offset += blocks.back().generators;
  }
  level.blocks = blocks;
  level.presentation = direct_sum(blocks);

  // gluing along the tuples one step below: raising different coordinates
  // of the same element gives the same class
  SparseIntMatrix glue(offset, 0);
  for (const Tuple& c : antidiagonal(factors, top - 1)) {
    std::vector<std::size_t> raisable;
    for (std::size_t l = 0; l < c.size(); ++l)
      if (c[l] < 0) raisable.push_back(l);
    std::vector<SparseIntMatrix> images;
    for (std::size_t l : raisable) {
      Tuple up = c;
      ++up[l];
      SparseIntMatrix m(offset, 0);
      const std::size_t idx = level.find(up);
      SparseIntMatrix r = raise(factors, c, l);
      m = SparseIntMatrix(offset, r.cols());
      place_block(m, r, level.offsets[idx], 0);
      images.push_back(std::move(m));
    }
    for (std::size_t a = 1; a < images.size(); ++a) glue = hstack(glue, images[a] - images[0]);
  }
  level.presentation.relations = hstack(level.presentation.relations, glue);
  return level;
}

TensorLevel filtered_tensor(const FilteredAbelianGroup& x, const FilteredAbelianGroup& y, int k) {
  return filtered_tensor(std::vector<FilteredAbelianGroup>{x, y}, k);
}

SparseIntMatrix level_inclusion(const std::vector<FilteredAbelianGroup>& factors,
                                const TensorLevel& lower, const TensorLevel& upper) {
  SparseIntMatrix m(upper.presentation.generators, 0);
  for (const Tuple& t : lower.tuples) m = hstack(m, embed_tuple(factors, t, upper));
  return m;
}

// ---------------------------------------------------------------------------
// Associated graded

Presentation graded_quotient(const FilteredAbelianGroup& m, int i) {
  if (i > 0 || i < -m.window()) return Presentation::zero();
  return quotient(m.piece(i), m.transition(i - 1));
}

FilteredRing graded(const FilteredRing& m) {
  const int w = m.window();
  std::vector<Presentation> q;
  for (int i = -w; i <= 0; ++i) q.push_back(graded_quotient(m.group(), i));
  auto gen = [&](int i) { return q[static_cast<std::size_t>(i + w)].generators; };
  // offset of Q_i inside gr(k) = Q_{-w} + ... + Q_k
  auto offset = [&](int i) {
    std::size_t o = 0;
    for (int j = -w; j < i; ++j) o += gen(j);
    return o;
  };
  std::map<int, Presentation> pieces;
  std::map<int, SparseIntMatrix> transitions;
  for (int k = -w; k <= 0; ++k) {
    pieces[k] = direct_sum(std::vector<Presentation>(q.begin(), q.begin() + (k + w + 1)));
    if (k < 0) {
      SparseIntMatrix t(offset(k + 1) + gen(k + 1), offset(k) + gen(k));
      for (std::size_t r = 0; r < t.cols(); ++r) t.set(r, r, 1);
      transitions[k] = t;
    }
  }
  std::map<std::pair<int, int>, SparseIntMatrix> products;
  for (int k1 = -w; k1 <= 0; ++k1)
    for (int k2 = -w; k2 <= 0; ++k2) {
      if (k1 + k2 < -w) continue;
      const std::size_t g1 = pieces[k1].generators, g2 = pieces[k2].generators;
      SparseIntMatrix prod(pieces[k1 + k2].generators, g1 * g2);
      for (int i = -w; i <= k1; ++i)
        for (int j = -w; j <= k2; ++j) {
          if (i + j < -w) continue;
          SparseIntMatrix mu = m.product(i, j);
          for (const auto& [idx, v] : mu.entries()) {
            const std::size_t a = idx.second / gen(j), b = idx.second % gen(j);
            prod.set(offset(i + j) + idx.first, (offset(i) + a) * g2 + offset(j) + b, v);
          }
        }
      products[{k1, k2}] = prod;
    }
  IntVector unit(pieces[0].generators, 0);
  for (std::size_t r = 0; r < m.unit().size(); ++r) unit[offset(0) + r] = m.unit()[r];
  return FilteredRing(FilteredAbelianGroup(w, std::move(pieces), std::move(transitions)),
                      std::move(products), std::move(unit));
}

// ---------------------------------------------------------------------------
// Cyclic bar construction

namespace {

std::vector<std::size_t> digits(std::size_t flat, const std::vector<std::size_t>& radix) {
  std::vector<std::size_t> d(radix.size());
  for (std::size_t l = radix.size(); l-- > 0;) {
    d[l] = flat % radix[l];
    flat /= radix[l];
  }
  return d;
}

std::size_t flatten(const std::vector<std::size_t>& d, const std::vector<std::size_t>& radix) {
  std::size_t f = 0;
  for (std::size_t l = 0; l < radix.size(); ++l) f = f * radix[l] + d[l];
  return f;
}

std::vector<std::size_t> radix_of(const FilteredRing& m, const Tuple& t) {
  std::vector<std::size_t> r;
  for (int v : t) r.push_back(m.piece(v).generators);
  return r;
}

SparseIntMatrix rotation_matrix(const FilteredRing& m, const TensorLevel& level) {
  const std::size_t n = level.presentation.generators;
  SparseIntMatrix r(n, n);
  for (std::size_t u = 0; u < level.tuples.size(); ++u) {
    const Tuple& a = level.tuples[u];
    Tuple b(a.size());
    for (std::size_t l = 0; l < a.size(); ++l) b[(l + 1) % a.size()] = a[l];
    const std::size_t v = level.find(b);
    auto ra = radix_of(m, a), rb = radix_of(m, b);
    for (std::size_t g = 0; g < level.blocks[u].generators; ++g) {
      auto d = digits(g, ra);
      std::vector<std::size_t> e(d.size());
      for (std::size_t l = 0; l < d.size(); ++l) e[(l + 1) % d.size()] = d[l];
      r.set(level.offsets[v] + flatten(e, rb), level.offsets[u] + g, 1);
    }
  }
  return r;
}

// mu (x) id: Z_q -> Z_{q-1}
SparseIntMatrix multiply_first(const FilteredRing& m, const TensorLevel& from, const TensorLevel& to) {
  SparseIntMatrix out(to.presentation.generators, from.presentation.generators);
  for (std::size_t u = 0; u < from.tuples.size(); ++u) {
    const Tuple& a = from.tuples[u];
    if (a[0] + a[1] < -m.window()) continue;
    Tuple b{a[0] + a[1]};
    b.insert(b.end(), a.begin() + 2, a.end());
    std::size_t rest = 1;
    for (std::size_t l = 2; l < a.size(); ++l) rest *= m.piece(a[l]).generators;
    SparseIntMatrix block = kronecker(m.product(a[0], a[1]), SparseIntMatrix::identity(rest));
    place_block(out, block, to.offsets[to.find(b)], from.offsets[u]);
  }
  return out;
}

// eta (x) id: Z_q -> Z_{q+1}
SparseIntMatrix insert_unit_first(const FilteredRing& m, const TensorLevel& from, const TensorLevel& to) {
  SparseIntMatrix out(to.presentation.generators, from.presentation.generators);
  SparseIntMatrix u = SparseIntMatrix::from_columns({m.unit()}, m.piece(0).generators);
  for (std::size_t i = 0; i < from.tuples.size(); ++i) {
    Tuple b{0};
    b.insert(b.end(), from.tuples[i].begin(), from.tuples[i].end());
    SparseIntMatrix block = kronecker(u, SparseIntMatrix::identity(from.blocks[i].generators));
    place_block(out, block, to.offsets[to.find(b)], from.offsets[i]);
  }
  return out;
}

SparseIntMatrix matrix_power(const SparseIntMatrix& a, int e) {
  SparseIntMatrix r = SparseIntMatrix::identity(a.rows());
  for (int i = 0; i < e; ++i) r = a * r;
  return r;
}

std::vector<FilteredAbelianGroup> copies(const FilteredRing& m, int count) {
  return std::vector<FilteredAbelianGroup>(static_cast<std::size_t>(count), m.group());
}

}  // namespace

CyclicBarLevel cyclic_bar(const FilteredRing& m, int q, int k) {
  if (q < 0) throw Error(ErrorCode::InvalidParams, "simplicial degree must be >= 0");
  CyclicBarLevel bar;
  bar.q = q;
  bar.k = k;
  bar.level = filtered_tensor(copies(m, q + 1), k);
  bar.rotation = rotation_matrix(m, bar.level);
  const int n = q + 1;
  if (q >= 1) {
    TensorLevel below = filtered_tensor(copies(m, q), k);
    SparseIntMatrix t_below = rotation_matrix(m, below);
    SparseIntMatrix mu = multiply_first(m, bar.level, below);
    for (int i = 0; i <= q; ++i)
      bar.faces.push_back(matrix_power(t_below, i) * mu * matrix_power(bar.rotation, (n - i) % n));
  }
  TensorLevel above = filtered_tensor(copies(m, q + 2), k);
  SparseIntMatrix t_above = rotation_matrix(m, above);
  SparseIntMatrix eta = insert_unit_first(m, bar.level, above);
  for (int i = 0; i <= q; ++i)
    bar.degeneracies.push_back(matrix_power(t_above, i + 1) * eta * matrix_power(bar.rotation, (n - i - 1) % n));
  return bar;
}

IdentityReport cyclic_identities(const FilteredRing& m, int q_max, int k) {
  IdentityReport report;
  std::vector<CyclicBarLevel> z;
  for (int q = 0; q <= q_max + 2; ++q) z.push_back(cyclic_bar(m, q, k));
  auto check = [&](bool ok, const std::string& what) {
    ++report.checked;
    if (!ok && report.ok) {
      report.ok = false;
      report.first_failure = what;
    }
  };
  auto P = [&](int q) -> const Presentation& { return z[static_cast<std::size_t>(q)].presentation(); };
  auto t = [&](int q) -> const SparseIntMatrix& { return z[static_cast<std::size_t>(q)].rotation; };
  auto d = [&](int q, int i) -> const SparseIntMatrix& { return z[static_cast<std::size_t>(q)].faces[static_cast<std::size_t>(i)]; };
  auto s = [&](int q, int i) -> const SparseIntMatrix& { return z[static_cast<std::size_t>(q)].degeneracies[static_cast<std::size_t>(i)]; };
  const std::string at = " at level " + std::to_string(k);

  for (int q = 0; q <= q_max; ++q) {
    const std::string tag = " in degree " + std::to_string(q) + at;
    const SparseIntMatrix id = SparseIntMatrix::identity(P(q).generators);
    check(is_homomorphism(t(q), P(q), P(q)), "t well defined" + tag);
    for (int i = 0; i <= q; ++i) {
      if (q >= 1) check(is_homomorphism(d(q, i), P(q), P(q - 1)), "d_" + std::to_string(i) + " well defined" + tag);
      check(is_homomorphism(s(q, i), P(q), P(q + 1)), "s_" + std::to_string(i) + " well defined" + tag);
    }
    check(same_map(matrix_power(t(q), q + 1), id, P(q)), "t^{q+1} = id" + tag);
    if (q >= 1) {
      for (int i = 1; i <= q; ++i)
        check(same_map(d(q, i) * t(q), t(q - 1) * d(q, i - 1), P(q - 1)), "d_i t = t d_{i-1}" + tag);
      check(same_map(d(q, 0) * t(q), d(q, q), P(q - 1)), "d_0 t = d_q" + tag);
    }
    for (int i = 1; i <= q; ++i)
      check(same_map(s(q, i) * t(q), t(q + 1) * s(q, i - 1), P(q + 1)), "s_i t = t s_{i-1}" + tag);
    check(same_map(s(q, 0) * t(q), t(q + 1) * t(q + 1) * s(q, q), P(q + 1)), "s_0 t = t^2 s_q" + tag);
    if (q >= 2)
      for (int j = 1; j <= q; ++j)
        for (int i = 0; i < j; ++i)
          check(same_map(d(q - 1, i) * d(q, j), d(q - 1, j - 1) * d(q, i), P(q - 2)), "d_i d_j" + tag);
    for (int j = 0; j <= q; ++j)
      for (int i = 0; i <= j; ++i)
        check(same_map(s(q + 1, i) * s(q, j), s(q + 1, j + 1) * s(q, i), P(q + 2)), "s_i s_j" + tag);
    for (int j = 0; j <= q; ++j)
      for (int i = 0; i <= q + 1; ++i) {
        SparseIntMatrix lhs = d(q + 1, i) * s(q, j);
        SparseIntMatrix rhs;
        if (i < j)
          rhs = s(q - 1, j - 1) * d(q, i);
        else if (i == j || i == j + 1)
          rhs = id;
        else
          rhs = s(q - 1, j) * d(q, i - 1);
        check(same_map(lhs, rhs, P(q)), "d_i s_j" + tag);
      }
  }
  return report;
}

ComparisonReport graded_comparison(const FilteredRing& m, int q, int k) {
  if (q < 0) throw Error(ErrorCode::InvalidParams, "simplicial degree must be >= 0");
  const auto factors = copies(m, q + 1);
  TensorLevel upper = filtered_tensor(factors, k);
  TensorLevel lower = filtered_tensor(factors, k - 1);
  Presentation lhs = quotient(upper.presentation, level_inclusion(factors, lower, upper));
  SparseIntMatrix t = rotation_matrix(m, upper);

  ComparisonReport r;
  r.lhs = lhs.group();
  if (k > 0) {
    r.rhs = AbelianGroup::trivial();
    r.groups_equal = r.lhs == r.rhs;
    r.map_is_isomorphism = r.lhs.is_trivial();
    r.rotation_compatible = is_homomorphism(t, lhs, lhs);
    return r;
  }
  std::vector<Presentation> parts;
  for (const Tuple& a : upper.tuples) {
    std::vector<Presentation> f;
    for (int v : a) f.push_back(graded_quotient(m.group(), v));
    parts.push_back(tensor(f));
  }
  Presentation rhs = direct_sum(parts);
  r.rhs = rhs.group();
  r.groups_equal = r.lhs == r.rhs;
  const SparseIntMatrix phi = SparseIntMatrix::identity(upper.presentation.generators);
  r.map_is_isomorphism = rhs.generators == lhs.generators && is_homomorphism(phi, rhs, lhs) &&
                         is_homomorphism(phi, lhs, rhs);
  r.rotation_compatible = is_homomorphism(t, lhs, lhs) && is_homomorphism(t, rhs, rhs) &&
                          same_map(phi * t, t * phi, lhs);
  return r;
}

FixedPointReport fixed_points_check(const FilteredAbelianGroup& y, int q, int s) {
  if (q < 1) throw Error(ErrorCode::InvalidParams, "power must be >= 1");
  const int w = y.window();
  for (int i = -w; i <= 0; ++i) {
    if (!y.piece(i).relations.is_zero())
      throw Error(ErrorCode::UnsupportedFiltration, "piece " + std::to_string(i) + " is not free");
    if (i == 0) continue;
    SparseIntMatrix t = y.transition(i);
    std::vector<bool> hit(t.rows(), false);
    std::vector<int> per_column(t.cols(), 0);
    for (const auto& [idx, v] : t.entries()) {
      if (v != 1 || hit[idx.first])
        throw Error(ErrorCode::UnsupportedFiltration, "transition from " + std::to_string(i) + " is not a split basis inclusion");
      hit[idx.first] = true;
      ++per_column[idx.second];
    }
    for (int c : per_column)
      if (c != 1)
        throw Error(ErrorCode::UnsupportedFiltration, "transition from " + std::to_string(i) + " is not a split basis inclusion");
  }
  const std::size_t g0 = y.piece(0).generators;
  auto basis_at = [&](int level) {
    std::vector<std::size_t> out;
    if (level < -w) return out;
    SparseIntMatrix inc = y.transition(level, 0);
    for (const auto& [idx, v] : inc.entries()) out.push_back(idx.first);
    std::sort(out.begin(), out.end());
    return out;
  };

  const std::vector<FilteredAbelianGroup> factors(static_cast<std::size_t>(q), y);
  TensorLevel level = filtered_tensor(factors, s);
  TensorLevel top = filtered_tensor(factors, 0);
  LatticeSolver image(level_inclusion(factors, level, top));
  FixedPointReport r;
  std::size_t step = 0;
  for (int i = 0; i < q; ++i) step = step * g0 + 1;
  for (std::size_t b = 0; b < g0; ++b) {
    IntVector v(top.presentation.generators, 0);
    v[b * step] = 1;
    if (image.contains(v)) r.diagonal.push_back(b);
  }
  const int fl = s >= 0 ? s / q : -((-s + q - 1) / q);
  r.expected = basis_at(std::min(fl, 0));
  r.ok = r.diagonal == r.expected;
  return r;
}

// ---------------------------------------------------------------------------
// Structured text form

namespace {

using ojson = nlohmann::ordered_json;

Integer parse_integer(const ojson& j) {
  if (j.is_number_integer()) return Integer(j.get<long>());
  if (j.is_string()) {
    Integer v;
    if (v.set_str(j.get<std::string>(), 10) == 0) return v;
  }
  throw Error(ErrorCode::Parse, "bad integer " + j.dump());
}

SparseIntMatrix parse_matrix(const ojson& j, std::size_t rows, std::size_t cols) {
  if (!j.is_array() || j.size() != rows) throw Error(ErrorCode::Parse, "matrix needs " + std::to_string(rows) + " rows");
  SparseIntMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw Error(ErrorCode::Parse, "matrix row needs " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c) m.set(r, c, parse_integer(j[r][c]));
  }
  return m;
}

}  // namespace

FilteredRing filtered_ring_from_json(const std::string& text) {
  ojson doc;
  try {
    doc = ojson::parse(text);
  } catch (const ojson::parse_error& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
  try {
    if (doc.value("schema", "hcz.filtered_ring/1") != "hcz.filtered_ring/1")
      throw Error(ErrorCode::Parse, "unknown filtered ring schema");
    const int w = doc.at("window").get<int>();
    std::map<int, Presentation> pieces;
    for (const auto& p : doc.at("pieces")) {
      IntVector factors;
      for (const auto& f : p.at("invariant_factors")) factors.push_back(parse_integer(f));
      int s = p.at("index").get<int>();
      if (pieces.count(s)) throw Error(ErrorCode::Parse, "piece listed twice: " + std::to_string(s));
      pieces[s] = Presentation::from_factors(factors);
    }
    auto gens = [&](int s) {
      auto it = pieces.find(std::min(s, 0));
      if (it == pieces.end()) throw Error(ErrorCode::Parse, "unknown piece " + std::to_string(s));
      return it->second.generators;
    };
    std::map<int, SparseIntMatrix> transitions;
    if (doc.contains("transitions"))
      for (const auto& t : doc["transitions"]) {
        int s = t.at("from").get<int>();
        transitions[s] = parse_matrix(t.at("matrix"), gens(s + 1), gens(s));
      }
    std::map<std::pair<int, int>, SparseIntMatrix> products;
    if (doc.contains("products"))
      for (const auto& p : doc["products"]) {
        int i = p.at("left").get<int>(), j = p.at("right").get<int>();
        products[{i, j}] = parse_matrix(p.at("matrix"), gens(i + j), gens(i) * gens(j));
      }
    IntVector unit;
    for (const auto& u : doc.at("unit")) unit.push_back(parse_integer(u));
    return FilteredRing(FilteredAbelianGroup(w, std::move(pieces), std::move(transitions)),
                        std::move(products), std::move(unit));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Parse) throw;
    throw Error(ErrorCode::Parse, e.what());
  }
}

}  // namespace hcz
