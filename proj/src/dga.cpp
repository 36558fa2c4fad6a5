#include "hcz/dga.hpp"

#include "hcz/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <set>

namespace hcz {

void add_scaled(Combination& into, const Combination& term, const Integer& scale) {
  if (scale == 0) return;
  for (const auto& [i, c] : term) {
    auto [it, inserted] = into.try_emplace(i, c * scale);
    if (!inserted) {
      it->second += c * scale;
      if (it->second == 0) into.erase(it);
    }
  }
}

namespace {

const Combination kZero;

std::string describe(const Combination& c, const DGAlgebra& a) {
  if (c.empty()) return "0";
  std::string out;
  for (const auto& [i, v] : c) {
    if (!out.empty()) out += " + ";
    out += v.get_str() + "*" + a.label(i).to_string();
  }
  return out;
}

}  // namespace

DGAlgebra::DGAlgebra(std::vector<Element> basis, std::size_t unit, ProductTable products,
                     std::map<std::size_t, Combination> differential)
    : basis_(std::move(basis)), unit_(unit), products_(std::move(products)) {
  if (basis_.empty()) throw Error(ErrorCode::InvalidAlgebra, "empty basis");
  if (unit_ >= basis_.size()) throw Error(ErrorCode::InvalidAlgebra, "unit index out of range");
  if (basis_[unit_].degree != 0) throw Error(ErrorCode::InvalidAlgebra, "unit must have degree 0");
  std::set<Label> seen;
  for (const auto& e : basis_) {
    if (e.degree < 0)
      throw Error(ErrorCode::InvalidAlgebra, "negative degree for " + e.label.to_string());
    if (!seen.insert(e.label).second)
      throw Error(ErrorCode::InvalidAlgebra, "duplicate label " + e.label.to_string());
  }
  auto check_terms = [&](const Combination& c, int degree, const std::string& what) {
    for (const auto& [i, v] : c) {
      if (i >= basis_.size()) throw Error(ErrorCode::InvalidAlgebra, what + ": index out of range");
      if (v == 0) throw Error(ErrorCode::InvalidAlgebra, what + ": stored zero coefficient");
      if (basis_[i].degree != degree)
        throw Error(ErrorCode::InvalidAlgebra, what + ": term " + basis_[i].label.to_string() +
                                                   " has the wrong degree");
    }
  };
  for (const auto& [ab, c] : products_) {
    if (ab.first >= basis_.size() || ab.second >= basis_.size())
      throw Error(ErrorCode::InvalidAlgebra, "product index out of range");
    check_terms(c, basis_[ab.first].degree + basis_[ab.second].degree,
                "product " + label(ab.first).to_string() + "*" + label(ab.second).to_string());
  }
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    products_.try_emplace({unit_, i}, Combination{{i, 1}});
    products_.try_emplace({i, unit_}, Combination{{i, 1}});
  }
  for (auto it = products_.begin(); it != products_.end();)
    it = it->second.empty() ? products_.erase(it) : std::next(it);

  diff_.assign(basis_.size(), {});
  for (auto& [i, c] : differential) {
    if (i >= basis_.size()) throw Error(ErrorCode::InvalidAlgebra, "differential index out of range");
    check_terms(c, basis_[i].degree - 1, "d(" + label(i).to_string() + ")");
    diff_[i] = std::move(c);
  }
}

int DGAlgebra::max_degree() const noexcept {
  int m = 0;
  for (const auto& e : basis_) m = std::max(m, e.degree);
  return m;
}

std::optional<std::size_t> DGAlgebra::index_of(const Label& label) const {
  for (std::size_t i = 0; i < basis_.size(); ++i)
    if (basis_[i].label == label) return i;
  return std::nullopt;
}

std::vector<std::size_t> DGAlgebra::in_degree(int degree) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < basis_.size(); ++i)
    if (basis_[i].degree == degree) out.push_back(i);
  return out;
}

const Combination& DGAlgebra::multiply(std::size_t a, std::size_t b) const {
  auto it = products_.find({a, b});
  return it == products_.end() ? kZero : it->second;
}

Combination DGAlgebra::multiply(const Combination& a, const Combination& b) const {
  Combination out;
  for (const auto& [i, x] : a)
    for (const auto& [j, y] : b) add_scaled(out, multiply(i, j), x * y);
  return out;
}

const Combination& DGAlgebra::diff(std::size_t a) const { return diff_.at(a); }

Combination DGAlgebra::diff(const Combination& a) const {
  Combination out;
  for (const auto& [i, x] : a) add_scaled(out, diff(i), x);
  return out;
}

bool operator==(const DGAlgebra& a, const DGAlgebra& b) {
  if (a.basis_.size() != b.basis_.size() || a.unit_ != b.unit_) return false;
  for (std::size_t i = 0; i < a.basis_.size(); ++i)
    if (!(a.basis_[i].label == b.basis_[i].label) || a.basis_[i].degree != b.basis_[i].degree)
      return false;
  return a.products_ == b.products_ && a.diff_ == b.diff_;
}

ValidationReport validate(const DGAlgebra& a) {
  auto fail = [](std::string what) { return ValidationReport{false, std::move(what)}; };
  const std::size_t n = a.size();
  auto name = [&](std::size_t i) { return a.label(i).to_string(); };

  for (std::size_t i = 0; i < n; ++i) {
    if (!a.diff(a.diff(i)).empty()) return fail("d^2 != 0 on " + name(i));
  }
  for (std::size_t i = 0; i < n; ++i) {
    Combination xi{{i, 1}};
    if (a.multiply(a.unit(), i) != xi || a.multiply(i, a.unit()) != xi)
      return fail("unit law fails on " + name(i));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Combination lhs = a.diff(a.multiply(i, j));
      Combination rhs = a.multiply(a.diff(i), Combination{{j, 1}});
      const Integer sign = (a.degree(i) % 2 == 0) ? 1 : -1;
      add_scaled(rhs, a.multiply(Combination{{i, 1}}, a.diff(j)), sign);
      if (lhs != rhs)
        return fail("Leibniz fails on (" + name(i) + ", " + name(j) + "): d(xy) = " +
                    describe(lhs, a) + " but d(x)y +- x d(y) = " + describe(rhs, a));
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        Combination left = a.multiply(a.multiply(i, j), Combination{{k, 1}});
        Combination right = a.multiply(Combination{{i, 1}}, a.multiply(j, k));
        if (left != right)
          return fail("associativity fails on (" + name(i) + ", " + name(j) + ", " + name(k) + ")");
      }
  return {};
}

DGAlgebra koszul_resolution(const Integer& m) {
  if (m < 2) throw Error(ErrorCode::InvalidModulus, "Koszul resolution needs m >= 2");
  return DGAlgebra({{Label::atom("1"), 0}, {Label::atom("t"), 1}}, 0, {}, {{1, {{0, m}}}});
}

DGAlgebra base_ring() { return DGAlgebra({{Label::atom("1"), 0}}, 0, {}, {}); }

ChainComplex underlying_complex(const DGAlgebra& a) {
  const int top = a.max_degree();
  std::map<int, Basis> basis;
  std::map<int, std::vector<std::size_t>> index;
  std::map<std::size_t, std::size_t> position;
  for (int d = 0; d <= top; ++d) {
    index[d] = a.in_degree(d);
    for (std::size_t k = 0; k < index[d].size(); ++k) {
      basis[d].push_back(a.label(index[d][k]));
      position[index[d][k]] = k;
    }
  }
  std::map<int, SparseIntMatrix> diffs;
  for (int d = 1; d <= top; ++d) {
    SparseIntMatrix m(index[d - 1].size(), index[d].size());
    for (std::size_t k = 0; k < index[d].size(); ++k)
      for (const auto& [i, v] : a.diff(index[d][k])) m.set(position.at(i), k, v);
    diffs.emplace(d, std::move(m));
  }
  return ChainComplex(0, top, std::move(basis), std::move(diffs), false);
}

// ---------------------------------------------------------------------------
// Morphisms

Combination DGAMorphism::apply(const Combination& x) const {
  Combination out;
  for (const auto& [i, v] : x) add_scaled(out, action.at(i), v);
  return out;
}

ValidationReport validate(const DGAMorphism& f) {
  auto fail = [](std::string what) { return ValidationReport{false, std::move(what)}; };
  const DGAlgebra& s = f.source;
  const DGAlgebra& t = f.target;
  if (f.action.size() != s.size()) return fail("action does not cover the source basis");
  for (std::size_t i = 0; i < s.size(); ++i)
    for (const auto& [j, v] : f.action[i]) {
      if (j >= t.size()) return fail("image of " + s.label(i).to_string() + " out of range");
      if (t.degree(j) != s.degree(i))
        return fail("image of " + s.label(i).to_string() + " has the wrong degree");
    }
  if (f.action[s.unit()] != Combination{{t.unit(), 1}}) return fail("unit is not preserved");
  for (std::size_t i = 0; i < s.size(); ++i)
    if (f.apply(s.diff(i)) != t.diff(f.action[i]))
      return fail("f d != d f on " + s.label(i).to_string());
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j)
      if (f.apply(s.multiply(i, j)) != t.multiply(f.action[i], f.action[j]))
        return fail("not multiplicative on (" + s.label(i).to_string() + ", " +
                    s.label(j).to_string() + ")");
  return {};
}

DGAMorphism make_morphism(DGAlgebra source, DGAlgebra target, std::vector<Combination> action) {
  DGAMorphism f{std::move(source), std::move(target), std::move(action)};
  ValidationReport r = validate(f);
  if (!r.ok) throw Error(ErrorCode::InvalidAlgebra, "morphism: " + r.counterexample);
  return f;
}

DGAMorphism identity_morphism(const DGAlgebra& a) {
  std::vector<Combination> action;
  for (std::size_t i = 0; i < a.size(); ++i) action.push_back({{i, 1}});
  return make_morphism(a, a, std::move(action));
}

DGAMorphism compose(const DGAMorphism& g, const DGAMorphism& f) {
  if (!(f.target == g.source))
    throw Error(ErrorCode::InvalidAlgebra, "morphisms are not composable");
  std::vector<Combination> action;
  for (const auto& image : f.action) action.push_back(g.apply(image));
  return make_morphism(f.source, g.target, std::move(action));
}

DGAMorphism reduction_map(const Integer& m, const Integer& m_prime) {
  if (m < 2 || m_prime < 2) throw Error(ErrorCode::InvalidModulus, "moduli must be >= 2");
  if (!mpz_divisible_p(m.get_mpz_t(), m_prime.get_mpz_t()))
    throw Error(ErrorCode::NotDivisible, m_prime.get_str() + " does not divide " + m.get_str());
  const Integer ratio = m / m_prime;
  return make_morphism(koszul_resolution(m), koszul_resolution(m_prime),
                       {Combination{{0, 1}}, Combination{{1, ratio}}});
}

ChainMap underlying_chain_map(const DGAMorphism& f) {
  ChainComplex src = underlying_complex(f.source);
  ChainComplex tgt = underlying_complex(f.target);
  std::map<int, SparseIntMatrix> comps;
  for (int d = 0; d <= src.max_degree(); ++d) {
    auto s_idx = f.source.in_degree(d);
    auto t_idx = f.target.in_degree(d);
    SparseIntMatrix m(t_idx.size(), s_idx.size());
    for (std::size_t c = 0; c < s_idx.size(); ++c)
      for (const auto& [j, v] : f.action[s_idx[c]]) {
        auto pos = std::find(t_idx.begin(), t_idx.end(), j) - t_idx.begin();
        m.set(static_cast<std::size_t>(pos), c, v);
      }
    comps.emplace(d, std::move(m));
  }
  return make_chain_map(std::move(src), std::move(tgt), std::move(comps));
}

// ---------------------------------------------------------------------------
// Structured text form

namespace {

using ojson = nlohmann::ordered_json;

Integer parse_coefficient(const ojson& j) {
  if (j.is_number_integer()) return Integer(j.get<long>());
  if (j.is_string()) {
    Integer v;
    if (v.set_str(j.get<std::string>(), 10) == 0) return v;
  }
  throw Error(ErrorCode::Parse, "bad coefficient " + j.dump());
}

}  // namespace

DGAlgebra dga_from_json(const std::string& text) {
  ojson doc;
  try {
    doc = ojson::parse(text);
  } catch (const ojson::parse_error& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
  try {
    if (doc.value("schema", "hcz.dga/1") != "hcz.dga/1")
      throw Error(ErrorCode::Parse, "unknown algebra schema");
    std::vector<DGAlgebra::Element> basis;
    std::map<std::string, std::size_t> index;
    for (const auto& e : doc.at("basis")) {
      std::string label = e.at("label").get<std::string>();
      if (index.count(label)) throw Error(ErrorCode::Parse, "duplicate label " + label);
      index[label] = basis.size();
      basis.push_back({Label::atom(label), e.at("degree").get<int>()});
    }
    auto lookup = [&](const std::string& label) {
      auto it = index.find(label);
      if (it == index.end()) throw Error(ErrorCode::Parse, "unknown label " + label);
      return it->second;
    };
    auto combination = [&](const ojson& obj) {
      Combination c;
      for (const auto& [label, coeff] : obj.items()) add_scaled(c, {{lookup(label), 1}}, parse_coefficient(coeff));
      return c;
    };
    const std::size_t unit = lookup(doc.at("unit").get<std::string>());
    std::map<std::size_t, Combination> diff;
    if (doc.contains("differential"))
      for (const auto& [label, obj] : doc["differential"].items()) diff[lookup(label)] = combination(obj);
    DGAlgebra::ProductTable products;
    if (doc.contains("multiplication"))
      for (const auto& e : doc["multiplication"]) {
        auto key = std::make_pair(lookup(e.at("left").get<std::string>()),
                                  lookup(e.at("right").get<std::string>()));
        if (products.count(key))
          throw Error(ErrorCode::Parse, "product listed twice: " + e.dump());
        products[key] = combination(e.at("result"));
      }
    return DGAlgebra(std::move(basis), unit, std::move(products), std::move(diff));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Parse) throw;
    throw Error(ErrorCode::Parse, e.what());
  }
}

std::string to_json(const DGAlgebra& a) {
  ojson doc;
  doc["schema"] = "hcz.dga/1";
  ojson basis = ojson::array();
  for (const auto& e : a.basis()) basis.push_back({{"label", e.label.to_string()}, {"degree", e.degree}});
  doc["basis"] = basis;
  doc["unit"] = a.label(a.unit()).to_string();
  auto combination = [&](const Combination& c) {
    ojson obj = ojson::object();
    for (const auto& [i, v] : c) obj[a.label(i).to_string()] = v.get_str();
    return obj;
  };
  ojson diff = ojson::object();
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a.diff(i).empty()) diff[a.label(i).to_string()] = combination(a.diff(i));
  doc["differential"] = diff;
  ojson mult = ojson::array();
  for (const auto& [ab, c] : a.products()) {
    if (ab.first == a.unit() || ab.second == a.unit()) continue;
    mult.push_back({{"left", a.label(ab.first).to_string()},
                    {"right", a.label(ab.second).to_string()},
                    {"result", combination(c)}});
  }
  doc["multiplication"] = mult;
  return doc.dump(2) + "\n";
}

}  // namespace hcz
