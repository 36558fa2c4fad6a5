#pragma once

// Differential graded algebras over Z with a finite homogeneous basis and an
// explicit multiplication table.

#include "hcz/complexes.hpp"
#include "hcz/intlin.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hcz {

// Integer combination of basis elements, keyed by basis index. No zero
// coefficients are stored.
using Combination = std::map<std::size_t, Integer>;

void add_scaled(Combination& into, const Combination& term, const Integer& scale = 1);

class DGAlgebra {
 public:
  struct Element {
    Label label;
    int degree = 0;
  };
  using ProductTable = std::map<std::pair<std::size_t, std::size_t>, Combination>;

  DGAlgebra() = default;
  // Checks structure only (labels unique, degrees nonnegative, unit in degree
  // 0, products and differential homogeneous). Products involving the unit
  // that are not listed default to the unit laws; other missing products are 0.
  DGAlgebra(std::vector<Element> basis, std::size_t unit, ProductTable products,
            std::map<std::size_t, Combination> differential);

  std::size_t size() const noexcept { return basis_.size(); }
  std::size_t unit() const noexcept { return unit_; }
  const Label& label(std::size_t i) const { return basis_.at(i).label; }
  int degree(std::size_t i) const { return basis_.at(i).degree; }
  int max_degree() const noexcept;
  std::optional<std::size_t> index_of(const Label& label) const;
  // Basis indices of the given degree, in basis order.
  std::vector<std::size_t> in_degree(int degree) const;

  const Combination& multiply(std::size_t a, std::size_t b) const;
  Combination multiply(const Combination& a, const Combination& b) const;
  const Combination& diff(std::size_t a) const;
  Combination diff(const Combination& a) const;

  const std::vector<Element>& basis() const noexcept { return basis_; }
  const ProductTable& products() const noexcept { return products_; }

  friend bool operator==(const DGAlgebra& a, const DGAlgebra& b);

 private:
  std::vector<Element> basis_;
  std::size_t unit_ = 0;
  ProductTable products_;
  std::vector<Combination> diff_;
};

struct ValidationReport {
  bool ok = true;
  std::string counterexample;  // first failing check, empty when ok
};

// Exhaustive basis-level check of d^2 = 0, the Leibniz rule
// d(xy) = d(x)y + (-1)^{|x|} x d(y), associativity and unitality.
ValidationReport validate(const DGAlgebra& a);

// Exterior algebra on t in degree 1 with dt = m: the Koszul resolution of Z/m.
DGAlgebra koszul_resolution(const Integer& m);
// Z concentrated in degree 0.
DGAlgebra base_ring();

// The algebra as a chain complex of free abelian groups.
ChainComplex underlying_complex(const DGAlgebra& a);

struct DGAMorphism {
  DGAlgebra source;
  DGAlgebra target;
  std::vector<Combination> action;  // indexed by source basis

  Combination apply(const Combination& x) const;
  friend bool operator==(const DGAMorphism&, const DGAMorphism&) = default;
};

ValidationReport validate(const DGAMorphism& f);
// Throws INVALID_ALGEBRA when the morphism checks fail.
DGAMorphism make_morphism(DGAlgebra source, DGAlgebra target, std::vector<Combination> action);
DGAMorphism identity_morphism(const DGAlgebra& a);
DGAMorphism compose(const DGAMorphism& g, const DGAMorphism& f);

// koszul_resolution(m) -> koszul_resolution(m_prime), 1 -> 1, t -> (m/m') t'.
DGAMorphism reduction_map(const Integer& m, const Integer& m_prime);

ChainMap underlying_chain_map(const DGAMorphism& f);

// Structured text form:
// {"schema": "hcz.dga/1",
//  "basis": [{"label": "1", "degree": 0}, ...], "unit": "1",
//  "differential": {"t": {"1": "4"}},
//  "multiplication": [{"left": "t", "right": "t", "result": {}}]}
// Coefficients may be JSON integers or decimal strings.
DGAlgebra dga_from_json(const std::string& text);
std::string to_json(const DGAlgebra& a);

}  // namespace hcz
