#include "hcz/intlin.hpp"

#include "hcz/error.hpp"

#include <algorithm>
#include <sstream>

namespace hcz {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::CompositionNonzero: return "COMPOSITION_NONZERO";
    case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::TruncationTooTight: return "TRUNCATION_TOO_TIGHT";
    case ErrorCode::InvalidModulus: return "INVALID_MODULUS";
    case ErrorCode::NotAChainMap: return "NOT_A_CHAIN_MAP";
    case ErrorCode::NotDivisible: return "NOT_DIVISIBLE";
    case ErrorCode::BoundTooSmall: return "BOUND_TOO_SMALL";
    case ErrorCode::InvalidParams: return "INVALID_PARAMS";
    case ErrorCode::UnsupportedFiltration: return "UNSUPPORTED_FILTRATION";
    case ErrorCode::OutOfRange: return "OUT_OF_RANGE";
    case ErrorCode::RangeEmpty: return "RANGE_EMPTY";
    case ErrorCode::Parse: return "PARSE";
    case ErrorCode::InvalidAlgebra: return "INVALID_ALGEBRA";
  }
  return "UNKNOWN";
}

// ---------------------------------------------------------------------------
// SparseIntMatrix

SparseIntMatrix SparseIntMatrix::identity(std::size_t n) {
  SparseIntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.entries_.emplace(Index{i, i}, 1);
  return m;
}

SparseIntMatrix SparseIntMatrix::from_rows(
    std::initializer_list<std::initializer_list<long>> rows) {
  std::size_t cols = rows.size() ? rows.begin()->size() : 0;
  SparseIntMatrix m(rows.size(), cols);
  std::size_t r = 0;
  for (const auto& row : rows) {
    if (row.size() != cols) throw Error(ErrorCode::DimensionMismatch, "ragged rows");
    std::size_t c = 0;
    for (long v : row) m.set(r, c++, Integer(v));
    ++r;
  }
  return m;
}

SparseIntMatrix SparseIntMatrix::from_dense(const std::vector<IntVector>& rows,
                                            std::size_t cols) {
  SparseIntMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw Error(ErrorCode::DimensionMismatch, "ragged rows");
    for (std::size_t c = 0; c < cols; ++c) m.set(r, c, rows[r][c]);
  }
  return m;
}

SparseIntMatrix SparseIntMatrix::from_columns(const std::vector<IntVector>& columns,
                                              std::size_t rows) {
  SparseIntMatrix m(rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != rows) throw Error(ErrorCode::DimensionMismatch, "ragged columns");
    for (std::size_t r = 0; r < rows; ++r) m.set(r, c, columns[c][r]);
  }
  return m;
}

SparseIntMatrix SparseIntMatrix::diagonal(const IntVector& diag, std::size_t rows,
                                          std::size_t cols) {
  SparseIntMatrix m(rows, cols);
  for (std::size_t i = 0; i < diag.size() && i < rows && i < cols; ++i) m.set(i, i, diag[i]);
  return m;
}

Integer SparseIntMatrix::get(std::size_t r, std::size_t c) const {
  auto it = entries_.find({r, c});
  return it == entries_.end() ? Integer(0) : it->second;
}

void SparseIntMatrix::set(std::size_t r, std::size_t c, const Integer& value) {
  if (r >= rows_ || c >= cols_) throw Error(ErrorCode::DimensionMismatch, "index out of range");
  if (value == 0) {
    entries_.erase({r, c});
  } else {
    entries_[{r, c}] = value;
  }
}

void SparseIntMatrix::add(std::size_t r, std::size_t c, const Integer& value) {
  if (value == 0) return;
  if (r >= rows_ || c >= cols_) throw Error(ErrorCode::DimensionMismatch, "index out of range");
  auto [it, inserted] = entries_.try_emplace({r, c}, value);
  if (!inserted) {
    it->second += value;
    if (it->second == 0) entries_.erase(it);
  }
}

IntVector SparseIntMatrix::column(std::size_t c) const {
  IntVector out(rows_);
  for (const auto& [idx, v] : entries_)
    if (idx.second == c) out[idx.first] = v;
  return out;
}

IntVector SparseIntMatrix::apply(const IntVector& x) const {
  if (x.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "vector length");
  IntVector out(rows_);
  for (const auto& [idx, v] : entries_) out[idx.first] += v * x[idx.second];
  return out;
}

SparseIntMatrix SparseIntMatrix::transpose() const {
  SparseIntMatrix t(cols_, rows_);
  for (const auto& [idx, v] : entries_) t.entries_.emplace(Index{idx.second, idx.first}, v);
  return t;
}

SparseIntMatrix SparseIntMatrix::scaled(const Integer& k) const {
  SparseIntMatrix out(rows_, cols_);
  if (k == 0) return out;
  for (const auto& [idx, v] : entries_) out.entries_.emplace(idx, v * k);
  return out;
}

SparseIntMatrix SparseIntMatrix::reduced_mod(const Integer& q) const {
  SparseIntMatrix out(rows_, cols_);
  for (const auto& [idx, v] : entries_) {
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), q.get_mpz_t());
    if (r != 0) out.entries_.emplace(idx, r);
  }
  return out;
}

SparseIntMatrix SparseIntMatrix::select_columns(const std::vector<std::size_t>& cols) const {
  SparseIntMatrix out(rows_, cols.size());
  std::vector<std::ptrdiff_t> where(cols_, -1);
  for (std::size_t i = 0; i < cols.size(); ++i) where.at(cols[i]) = static_cast<std::ptrdiff_t>(i);
  for (const auto& [idx, v] : entries_)
    if (where[idx.second] >= 0) out.entries_.emplace(Index{idx.first, std::size_t(where[idx.second])}, v);
  return out;
}

std::vector<IntVector> SparseIntMatrix::to_dense() const {
  std::vector<IntVector> out(rows_, IntVector(cols_));
  for (const auto& [idx, v] : entries_) out[idx.first][idx.second] = v;
  return out;
}

SparseIntMatrix operator*(const SparseIntMatrix& a, const SparseIntMatrix& b) {
  if (a.cols_ != b.rows_) throw Error(ErrorCode::DimensionMismatch, "matrix product shapes");
  std::vector<std::vector<std::pair<std::size_t, const Integer*>>> b_rows(b.rows_);
  for (const auto& [idx, v] : b.entries_) b_rows[idx.first].emplace_back(idx.second, &v);
  SparseIntMatrix out(a.rows_, b.cols_);
  for (const auto& [idx, v] : a.entries_)
    for (const auto& [c, w] : b_rows[idx.second]) out.add(idx.first, c, v * *w);
  return out;
}

SparseIntMatrix operator+(const SparseIntMatrix& a, const SparseIntMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
    throw Error(ErrorCode::DimensionMismatch, "matrix sum shapes");
  SparseIntMatrix out = a;
  for (const auto& [idx, v] : b.entries_) out.add(idx.first, idx.second, v);
  return out;
}

SparseIntMatrix operator-(const SparseIntMatrix& a, const SparseIntMatrix& b) {
  return a + b.scaled(-1);
}

bool operator==(const SparseIntMatrix& a, const SparseIntMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
}

std::string SparseIntMatrix::to_string() const {
  std::ostringstream os;
  auto dense = to_dense();
  os << "[";
  for (std::size_t r = 0; r < rows_; ++r) {
    os << (r ? "; " : "");
    for (std::size_t c = 0; c < cols_; ++c) os << (c ? " " : "") << dense[r][c].get_str();
  }
  os << "] (" << rows_ << "x" << cols_ << ")";
  return os.str();
}

SparseIntMatrix hstack(const SparseIntMatrix& a, const SparseIntMatrix& b) {
  if (a.rows() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "hstack rows");
  SparseIntMatrix out(a.rows(), a.cols() + b.cols());
  place_block(out, a, 0, 0);
  place_block(out, b, 0, a.cols());
  return out;
}

SparseIntMatrix vstack(const SparseIntMatrix& a, const SparseIntMatrix& b) {
  if (a.cols() != b.cols()) throw Error(ErrorCode::DimensionMismatch, "vstack cols");
  SparseIntMatrix out(a.rows() + b.rows(), a.cols());
  place_block(out, a, 0, 0);
  place_block(out, b, a.rows(), 0);
  return out;
}

void place_block(SparseIntMatrix& target, const SparseIntMatrix& block, std::size_t row,
                 std::size_t col) {
  for (const auto& [idx, v] : block.entries()) target.add(row + idx.first, col + idx.second, v);
}

SparseIntMatrix kronecker(const SparseIntMatrix& a, const SparseIntMatrix& b) {
  SparseIntMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (const auto& [ia, va] : a.entries())
    for (const auto& [ib, vb] : b.entries())
      out.set(ia.first * b.rows() + ib.first, ia.second * b.cols() + ib.second, va * vb);
  return out;
}

// ---------------------------------------------------------------------------
// Smith normal form

namespace {

using DenseRows = std::vector<IntVector>;

// Elimination with minimal-absolute-value pivoting. Row operations are
// mirrored into `u`, column operations into `v`, when tracking is enabled.
class SmithReducer {
 public:
  SmithReducer(const SparseIntMatrix& m, bool track)
      : rows_(m.rows()), cols_(m.cols()), track_(track), a_(m.to_dense()) {
    if (track_) {
      u_ = SparseIntMatrix::identity(rows_).to_dense();
      // V is kept transposed so column operations become row operations.
      vt_ = SparseIntMatrix::identity(cols_).to_dense();
    }
  }

  void run() {
    const std::size_t limit = std::min(rows_, cols_);
    for (std::size_t t = 0; t < limit; ++t) {
      if (!reduce_step(t)) break;
      if (a_[t][t] < 0) negate_row(t);
      pivots_.push_back(a_[t][t]);
    }
  }

  const IntVector& pivots() const { return pivots_; }

  SmithForm result() const {
    SmithForm out;
    out.pivots = pivots_;
    out.diagonal = SparseIntMatrix::diagonal(pivots_, rows_, cols_);
    out.left = SparseIntMatrix::from_dense(u_, rows_);
    out.right = SparseIntMatrix::from_dense(vt_, cols_).transpose();
    return out;
  }

 private:
  // Returns false when the trailing submatrix is zero.
  bool reduce_step(std::size_t t) {
    for (;;) {
      std::size_t pi = 0, pj = 0;
      if (!find_pivot(t, pi, pj)) return false;
      swap_rows(t, pi);
      swap_cols(t, pj);

      bool clean = true;
      Integer q;
      for (std::size_t i = t + 1; i < rows_; ++i) {
        if (a_[i][t] == 0) continue;
        mpz_tdiv_q(q.get_mpz_t(), a_[i][t].get_mpz_t(), a_[t][t].get_mpz_t());
        if (q != 0) add_row_multiple(i, t, -q);
        if (a_[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols_; ++j) {
        if (a_[t][j] == 0) continue;
        mpz_tdiv_q(q.get_mpz_t(), a_[t][j].get_mpz_t(), a_[t][t].get_mpz_t());
        if (q != 0) add_col_multiple(j, t, -q);
        if (a_[t][j] != 0) clean = false;
      }
      if (!clean) continue;

      // Row t and column t are clear; enforce d_t | every remaining entry.
      bool divides_all = true;
      for (std::size_t i = t + 1; i < rows_ && divides_all; ++i) {
        for (std::size_t j = t + 1; j < cols_; ++j) {
          if (a_[i][j] != 0 && !mpz_divisible_p(a_[i][j].get_mpz_t(), a_[t][t].get_mpz_t())) {
            add_row_multiple(t, i, 1);
            divides_all = false;
            break;
          }
        }
      }
      if (divides_all) return true;
    }
  }

  bool find_pivot(std::size_t t, std::size_t& pi, std::size_t& pj) const {
    const Integer* best = nullptr;
    for (std::size_t i = t; i < rows_; ++i) {
      for (std::size_t j = t; j < cols_; ++j) {
        const Integer& x = a_[i][j];
        if (x == 0) continue;
        if (!best || mpz_cmpabs(x.get_mpz_t(), best->get_mpz_t()) < 0) {
          best = &x;
          pi = i;
          pj = j;
          if (mpz_cmpabs_ui(x.get_mpz_t(), 1) == 0) return true;
        }
      }
    }
    return best != nullptr;
  }

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    std::swap(a_[i], a_[j]);
    if (track_) std::swap(u_[i], u_[j]);
  }

  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (auto& row : a_) std::swap(row[i], row[j]);
    if (track_) std::swap(vt_[i], vt_[j]);
  }

  static void axpy(IntVector& dst, const IntVector& src, const Integer& k) {
    for (std::size_t c = 0; c < dst.size(); ++c)
      if (src[c] != 0) mpz_addmul(dst[c].get_mpz_t(), src[c].get_mpz_t(), k.get_mpz_t());
  }

  // row_i += k * row_j
  void add_row_multiple(std::size_t i, std::size_t j, const Integer& k) {
    axpy(a_[i], a_[j], k);
    if (track_) axpy(u_[i], u_[j], k);
  }

  // col_i += k * col_j
  void add_col_multiple(std::size_t i, std::size_t j, const Integer& k) {
    for (auto& row : a_)
      if (row[j] != 0) mpz_addmul(row[i].get_mpz_t(), row[j].get_mpz_t(), k.get_mpz_t());
    if (track_) axpy(vt_[i], vt_[j], k);
  }

  void negate_row(std::size_t t) {
    for (auto& x : a_[t]) x = -x;
    if (track_)
      for (auto& x : u_[t]) x = -x;
  }

  std::size_t rows_, cols_;
  bool track_;
  DenseRows a_, u_, vt_;
  IntVector pivots_;
};

}  // namespace

SmithForm smith_normal_form(const SparseIntMatrix& m) {
  SmithReducer reducer(m, true);
  reducer.run();
  return reducer.result();
}

IntVector smith_pivots(const SparseIntMatrix& m) {
  if (m.is_zero()) return {};
  SmithReducer reducer(m, false);
  reducer.run();
  return reducer.pivots();
}

std::size_t rank(const SparseIntMatrix& m) { return smith_pivots(m).size(); }

// ---------------------------------------------------------------------------
// AbelianGroup

AbelianGroup::AbelianGroup(std::size_t free_rank, IntVector factors) : free_rank_(free_rank) {
  IntVector orders;
  for (auto& f : factors) {
    Integer a = abs(f);
    if (a == 0) {
      ++free_rank_;
    } else if (a != 1) {
      orders.push_back(std::move(a));
    }
  }
  if (orders.empty()) return;
  // The Smith form of diag(orders) gives the divisibility-ordered presentation.
  IntVector canonical = smith_pivots(SparseIntMatrix::diagonal(orders, orders.size(), orders.size()));
  for (auto& d : canonical)
    if (d != 1) factors_.push_back(std::move(d));
}

AbelianGroup AbelianGroup::cyclic(const Integer& order) { return AbelianGroup(0, {order}); }

bool AbelianGroup::is_cyclic() const noexcept {
  return free_rank_ + factors_.size() <= 1;
}

std::optional<Integer> AbelianGroup::order() const {
  if (free_rank_ != 0) return std::nullopt;
  Integer n = 1;
  for (const auto& d : factors_) n *= d;
  return n;
}

AbelianGroup AbelianGroup::primary_part(const Integer& p) const {
  IntVector parts;
  for (const auto& d : factors_) {
    Integer part = 1, rest = d;
    while (mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t())) {
      rest /= p;
      part *= p;
    }
    parts.push_back(part);
  }
  return AbelianGroup(0, parts);
}

AbelianGroup AbelianGroup::direct_sum(const AbelianGroup& other) const {
  IntVector all = factors_;
  all.insert(all.end(), other.factors_.begin(), other.factors_.end());
  return AbelianGroup(free_rank_ + other.free_rank_, all);
}

std::string AbelianGroup::to_string() const {
  if (is_trivial()) return "0";
  std::ostringstream os;
  bool first = true;
  if (free_rank_ > 0) {
    os << "Z";
    if (free_rank_ > 1) os << "^" << free_rank_;
    first = false;
  }
  for (const auto& d : factors_) {
    os << (first ? "" : " + ") << "Z/" << d.get_str();
    first = false;
  }
  return os.str();
}

AbelianGroup cokernel(const SparseIntMatrix& m) {
  IntVector pivots = smith_pivots(m);
  return AbelianGroup(m.rows() - pivots.size(), pivots);
}

AbelianGroup homology_pair(const SparseIntMatrix& d_out, const SparseIntMatrix& d_in) {
  if (d_in.rows() != d_out.cols())
    throw Error(ErrorCode::DimensionMismatch, "d_in has " + std::to_string(d_in.rows()) +
                                                  " rows but d_out has " +
                                                  std::to_string(d_out.cols()) + " columns");
  if (!(d_out * d_in).is_zero())
    throw Error(ErrorCode::CompositionNonzero, "d_out * d_in != 0");
  // Z^n / ker(d_out) is torsion free, so the torsion of ker/im is the torsion
  // of Z^n / im(d_in).
  IntVector in_pivots = smith_pivots(d_in);
  std::size_t kernel_rank = d_out.cols() - rank(d_out);
  IntVector torsion;
  for (auto& d : in_pivots)
    if (d != 1) torsion.push_back(d);
  return AbelianGroup(kernel_rank - in_pivots.size(), torsion);
}

SparseIntMatrix kernel_basis(const SparseIntMatrix& m) {
  SmithForm snf = smith_normal_form(m);
  std::vector<std::size_t> cols;
  for (std::size_t c = snf.rank(); c < m.cols(); ++c) cols.push_back(c);
  return snf.right.select_columns(cols);
}

// ---------------------------------------------------------------------------
// LatticeSolver

LatticeSolver::LatticeSolver(const SparseIntMatrix& generators)
    : ambient_(generators.rows()),
      generator_count_(generators.cols()),
      generators_(generators),
      smith_(smith_normal_form(generators)) {}

std::optional<IntVector> LatticeSolver::solve(const IntVector& v) const {
  if (v.size() != ambient_) throw Error(ErrorCode::DimensionMismatch, "lattice vector length");
  IntVector uv = smith_.left.apply(v);
  IntVector y(generator_count_);
  for (std::size_t i = 0; i < uv.size(); ++i) {
    if (i < smith_.rank()) {
      if (!mpz_divisible_p(uv[i].get_mpz_t(), smith_.pivots[i].get_mpz_t())) return std::nullopt;
      y[i] = uv[i] / smith_.pivots[i];
    } else if (uv[i] != 0) {
      return std::nullopt;
    }
  }
  return smith_.right.apply(y);
}

bool LatticeSolver::contains_columns(const SparseIntMatrix& m) const {
  for (std::size_t c = 0; c < m.cols(); ++c)
    if (!contains(m.column(c))) return false;
  return true;
}

SparseIntMatrix LatticeSolver::basis() const {
  // G * V has the lattice basis in its first `rank` columns and zeros after.
  std::vector<std::size_t> cols(smith_.rank());
  for (std::size_t i = 0; i < cols.size(); ++i) cols[i] = i;
  return (generators_ * smith_.right).select_columns(cols);
}

bool same_lattice(const SparseIntMatrix& a, const SparseIntMatrix& b) {
  if (a.rows() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "lattice ambient dims");
  return LatticeSolver(a).contains_columns(b) && LatticeSolver(b).contains_columns(a);
}

}  // namespace hcz
