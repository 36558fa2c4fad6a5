#pragma once

// Chain complexes and bicomplexes of finitely generated free abelian groups
// with structured basis labels, plus the homology machinery (integral and
// mod q, induced maps, exactness) used by the Hochschild and cyclic layers.

#include "hcz/intlin.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hcz {

// A basis label: an atom ("t"), an integer, or a tagged tuple of labels.
// Compound complexes (tensor products, cones, total complexes) build their
// labels from the labels of their constituents.
class Label {
 public:
  enum class Kind : std::uint8_t { Int, Atom, Node };

  Label() = default;
  static Label atom(std::string text);
  static Label integer(std::int64_t value);
  static Label node(std::string tag, std::vector<Label> children);

  Kind kind() const noexcept { return kind_; }
  const std::string& text() const noexcept { return text_; }
  std::int64_t value() const noexcept { return value_; }
  const std::vector<Label>& children() const noexcept { return children_; }

  std::string to_string() const;

  friend int compare(const Label& a, const Label& b);
  friend bool operator==(const Label& a, const Label& b) { return compare(a, b) == 0; }
  friend bool operator<(const Label& a, const Label& b) { return compare(a, b) < 0; }

 private:
  Kind kind_ = Kind::Atom;
  std::string text_;
  std::int64_t value_ = 0;
  std::vector<Label> children_;
};

using Basis = std::vector<Label>;

// Chain complex C_min <- ... <- C_max. differential(d) maps degree d to d-1.
// When `truncated` is set the groups above max_degree are not known to be
// zero, so homology is only reported in degrees whose incoming boundary is
// present.
class ChainComplex {
 public:
  ChainComplex() = default;
  // Validates matrix shapes and d^2 = 0.
  ChainComplex(int min_degree, int max_degree, std::map<int, Basis> basis,
               std::map<int, SparseIntMatrix> differentials, bool truncated);

  int min_degree() const noexcept { return min_; }
  int max_degree() const noexcept { return max_; }
  bool truncated() const noexcept { return truncated_; }

  const Basis& basis(int degree) const;
  std::size_t rank(int degree) const { return basis(degree).size(); }
  // rank(d-1) x rank(d); zero matrix outside the stored range.
  SparseIntMatrix differential(int degree) const;
  // Highest degree whose homology is determined by the stored data.
  int homology_limit() const noexcept;

  friend bool operator==(const ChainComplex&, const ChainComplex&) = default;

 private:
  int min_ = 0;
  int max_ = -1;
  bool truncated_ = false;
  std::map<int, Basis> basis_;
  std::map<int, SparseIntMatrix> diff_;
};

struct ChainMap {
  ChainComplex source;
  ChainComplex target;
  std::map<int, SparseIntMatrix> components;  // target.rank(n) x source.rank(n)

  SparseIntMatrix at(int degree) const;
};

// Checks f d = d f in every degree where both complexes are stored.
ChainMap make_chain_map(ChainComplex source, ChainComplex target,
                        std::map<int, SparseIntMatrix> components);
ChainMap identity_map(const ChainComplex& c);
ChainMap compose(const ChainMap& g, const ChainMap& f);

AbelianGroup homology(const ChainComplex& c, int degree);
// H_degree(C tensor Z/q).
AbelianGroup homology_mod(const ChainComplex& c, int degree, const Integer& q);

// Unit complex: Z in degree 0.
ChainComplex unit_complex();
ChainComplex tensor(const ChainComplex& c, const ChainComplex& d,
                    std::optional<int> max_degree = std::nullopt);
// Cone(f)_n = source_{n-1} + target_n, d(a, b) = (-d a, f a + d b).
ChainComplex mapping_cone(const ChainMap& f);
// Fiber(f)_n = Cone(f)_{n+1}; relative homology in the homotopy fibre sense.
AbelianGroup relative_homology(const ChainMap& f, int degree);

// ---------------------------------------------------------------------------
// Bicomplexes

using Bidegree = std::pair<int, int>;  // (s, t)

class Bicomplex {
 public:
  Bicomplex() = default;
  // vertical(s,t): (s,t) -> (s,t-1); horizontal(s,t): (s,t) -> (s-1,t).
  // Validates shapes and v^2 = 0, h^2 = 0, vh + hv = 0. Cells with total
  // degree above `complete_through` are not stored and are treated as unknown.
  Bicomplex(std::map<Bidegree, Basis> cells, std::map<Bidegree, SparseIntMatrix> vertical,
            std::map<Bidegree, SparseIntMatrix> horizontal, int complete_through);

  const Basis& cell(int s, int t) const;
  std::size_t rank(int s, int t) const { return cell(s, t).size(); }
  SparseIntMatrix vertical(int s, int t) const;
  SparseIntMatrix horizontal(int s, int t) const;
  int complete_through() const noexcept { return complete_through_; }
  const std::map<Bidegree, Basis>& cells() const noexcept { return cells_; }

  // Swaps s and t together with the two differentials.
  Bicomplex transposed() const;

 private:
  std::map<Bidegree, Basis> cells_;
  std::map<Bidegree, SparseIntMatrix> vertical_;
  std::map<Bidegree, SparseIntMatrix> horizontal_;
  int complete_through_ = 0;
};

// Total complex in degrees up to max_degree; basis of degree n lists the cells
// with s + t = n in increasing s.
ChainComplex total_complex(const Bicomplex& b, int max_degree);
// E^1_{s,t}: homology of column s at row t, for all cells with s + t < max_total.
std::map<Bidegree, AbelianGroup> bicomplex_e1(const Bicomplex& b, int max_total);
std::map<Bidegree, AbelianGroup> bicomplex_e1_mod(const Bicomplex& b, int max_total,
                                                  const Integer& q);

// ---------------------------------------------------------------------------
// Homology with explicit representatives

// H = cycles / boundaries presented on a basis of the cycle lattice.
// With modulus q > 0 this is homology of C tensor Z/q.
struct HomologyPresentation {
  SparseIntMatrix cycles;     // chain coordinates; columns are a lattice basis
  SparseIntMatrix relations;  // boundaries (and q-multiples) in cycle coordinates
  Integer modulus = 0;

  AbelianGroup group() const { return cokernel(relations); }
  std::size_t generator_count() const { return cycles.cols(); }
};

HomologyPresentation homology_presentation(const SparseIntMatrix& d_out,
                                           const SparseIntMatrix& d_in,
                                           const Integer& modulus = 0);
HomologyPresentation homology_presentation(const ChainComplex& c, int degree,
                                           const Integer& modulus = 0);

struct HomologyMap {
  HomologyPresentation source;
  HomologyPresentation target;
  SparseIntMatrix matrix;  // target generators x source generators

  bool is_surjective() const;
  bool is_injective() const;
  bool is_isomorphism() const { return is_surjective() && is_injective(); }
  AbelianGroup cokernel_group() const;
};

// Map on homology induced by a chain-level matrix (target chains x source
// chains). Throws NOT_A_CHAIN_MAP if cycles or boundaries are not preserved.
HomologyMap induced_homology_map(const HomologyPresentation& source,
                                 const HomologyPresentation& target,
                                 const SparseIntMatrix& chain_matrix);

// Map E^1_{s,t} -> E^1_{s-1,t} induced by the horizontal differential.
HomologyMap e1_horizontal_map(const Bicomplex& b, int s, int t, const Integer& modulus = 0);

// Exactness of A -f-> B -g-> C at B: ker g = im f.
bool is_exact_at(const HomologyMap& f, const HomologyMap& g);

// One node of a long exact sequence check.
struct ExactnessNode {
  std::string name;
  bool exact = false;
};

struct ExactnessReport {
  std::vector<ExactnessNode> nodes;
  bool all_exact() const;
  std::string first_failure() const;
};

// Long exact sequence of the fibre of f:
// ... -> H_{n+1}(tgt) -> H_n(F) -> H_n(src) -> H_n(tgt) -> H_{n-1}(F) -> ...
// checked at every node whose groups lie in degrees [0, max_degree].
ExactnessReport fibre_sequence_report(const ChainMap& f, int max_degree);

// ---------------------------------------------------------------------------
// Structured text form

std::string to_json(const ChainComplex& c);
ChainComplex chain_complex_from_json(const std::string& text);

}  // namespace hcz
