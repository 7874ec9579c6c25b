#include "contact_spinor/expr.hpp"

#include <algorithm>
#include <numeric>

namespace contact_spinor {

std::string keyword(DerivOp op) {
  switch (op) {
    case DerivOp::Nabla: return "nabla";
    case DerivOp::BarNabla: return "bnabla";
    case DerivOp::HatNabla: return "hnabla";
    case DerivOp::HatBarNabla: return "hbnabla";
  }
  return "?";
}

bool is_hatted(DerivOp op) { return op == DerivOp::HatNabla || op == DerivOp::HatBarNabla; }

DerivOp unhatted(DerivOp op) {
  if (op == DerivOp::HatNabla) return DerivOp::Nabla;
  if (op == DerivOp::HatBarNabla) return DerivOp::BarNabla;
  return op;
}

DerivOp hatted(DerivOp op) {
  if (op == DerivOp::Nabla) return DerivOp::HatNabla;
  if (op == DerivOp::BarNabla) return DerivOp::HatBarNabla;
  return op;
}

Factor Factor::sym(std::string name, std::vector<Index> idx) {
  Factor f;
  f.kind = FactorKind::Symbol;
  f.symbol = std::move(name);
  f.indices = std::move(idx);
  return f;
}

Factor Factor::eps_lower(std::string a, std::string b) {
  Factor f;
  f.kind = FactorKind::EpsLower;
  f.indices = {lo(std::move(a)), lo(std::move(b))};
  return f;
}

Factor Factor::eps_upper(std::string a, std::string b) {
  Factor f;
  f.kind = FactorKind::EpsUpper;
  f.indices = {up(std::move(a)), up(std::move(b))};
  return f;
}

Factor Factor::delta(std::string lower, std::string upper) {
  Factor f;
  f.kind = FactorKind::Delta;
  f.indices = {lo(std::move(lower)), up(std::move(upper))};
  return f;
}

Factor Factor::derivative(DerivOp op, std::vector<Index> d, std::string name, std::vector<Index> idx) {
  Factor f;
  f.kind = FactorKind::Derivative;
  f.op = op;
  f.deriv = std::move(d);
  f.symbol = std::move(name);
  f.indices = std::move(idx);
  return f;
}

std::vector<Index> Factor::all_indices() const {
  std::vector<Index> out = deriv;
  out.insert(out.end(), indices.begin(), indices.end());
  return out;
}

void Factor::for_each_index(const std::function<void(Index&)>& fn) {
  for (auto& i : deriv) fn(i);
  for (auto& i : indices) fn(i);
}

// ---------------------------------------------------------------------------

Expr Expr::constant(const Coefficient& c) {
  if (c.is_zero()) return {};
  return Expr({Term{c, {}}});
}

Expr Expr::factor(Factor f, Coefficient c) {
  if (c.is_zero()) return {};
  return Expr({Term{c, {std::move(f)}}});
}

Expr& Expr::operator+=(const Expr& o) {
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  return *this;
}

Expr& Expr::operator-=(const Expr& o) { return *this += -o; }

Expr Expr::operator-() const {
  Expr r = *this;
  for (auto& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

Expr& Expr::operator*=(const Coefficient& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.coeff *= c;
  return *this;
}

namespace {

std::set<std::string> names_of(const Term& t) {
  std::set<std::string> out;
  for (const auto& f : t.factors)
    for (const auto& i : f.all_indices()) out.insert(i.name);
  return out;
}

void rename_in_term(Term& t, const std::map<std::string, std::string>& map) {
  for (auto& f : t.factors) {
    f.for_each_index([&](Index& i) {
      auto it = map.find(i.name);
      if (it != map.end()) i.name = it->second;
    });
  }
}

// Rename the dummies of t that lie in `avoid`, drawing from ns.
void rename_dummies_away(Term& t, const std::set<std::string>& avoid, NameSource& ns) {
  std::map<std::string, std::string> map;
  for (const auto& d : dummy_names(t))
    if (avoid.count(d)) map[d] = ns.fresh();
  if (!map.empty()) rename_in_term(t, map);
}

Term multiply_terms(Term a, Term b) {
  std::set<std::string> used = names_of(a);
  auto nb = names_of(b);
  used.insert(nb.begin(), nb.end());
  NameSource ns(used);
  rename_dummies_away(b, names_of(a), ns);
  std::set<std::string> bfree;
  for (const auto& i : free_indices(b)) bfree.insert(i.name);
  rename_dummies_away(a, bfree, ns);
  Term out{a.coeff * b.coeff, std::move(a.factors)};
  out.factors.insert(out.factors.end(), b.factors.begin(), b.factors.end());
  return out;
}

// Distribute without renaming; caller guarantees distinct dummies.
Expr multiply_plain(const Expr& a, const Expr& b) {
  std::vector<Term> out;
  out.reserve(a.terms().size() * b.terms().size());
  for (const auto& ta : a.terms()) {
    for (const auto& tb : b.terms()) {
      Term t{ta.coeff * tb.coeff, ta.factors};
      t.factors.insert(t.factors.end(), tb.factors.begin(), tb.factors.end());
      out.push_back(std::move(t));
    }
  }
  return Expr(std::move(out));
}

}  // namespace

Expr operator*(const Expr& a, const Expr& b) {
  std::vector<Term> out;
  out.reserve(a.terms().size() * b.terms().size());
  for (const auto& ta : a.terms())
    for (const auto& tb : b.terms()) out.push_back(multiply_terms(ta, tb));
  return Expr(std::move(out));
}

// ---------------------------------------------------------------------------

void SymbolTable::declare(SymbolDecl decl) {
  if (decl.name.empty()) throw DeclarationError("empty symbol name");
  if (decl.arity < 0) throw DeclarationError("negative arity for " + decl.name);
  std::vector<int> seen(static_cast<std::size_t>(decl.arity), 0);
  for (auto& g : decl.symmetry) {
    std::sort(g.begin(), g.end());
    for (int s : g) {
      if (s < 0 || s >= decl.arity || seen[static_cast<std::size_t>(s)]++)
        throw DeclarationError("bad symmetry group for " + decl.name);
    }
  }
  decl.symmetry.erase(std::remove_if(decl.symmetry.begin(), decl.symmetry.end(),
                                     [](const auto& g) { return g.size() < 2; }),
                      decl.symmetry.end());
  std::sort(decl.symmetry.begin(), decl.symmetry.end());
  if (decl.bundle && decl.bundle->valence() > decl.arity)
    throw DeclarationError("bundle valence exceeds arity for " + decl.name);
  auto it = decls_.find(decl.name);
  if (it != decls_.end()) {
    if (it->second == decl) return;
    throw DeclarationError("conflicting redeclaration of " + decl.name);
  }
  order_.push_back(decl.name);
  decls_.emplace(decl.name, std::move(decl));
}

void SymbolTable::redeclare(SymbolDecl decl) {
  auto it = decls_.find(decl.name);
  if (it != decls_.end()) {
    decls_.erase(it);
    order_.erase(std::find(order_.begin(), order_.end(), decl.name));
  }
  declare(std::move(decl));
}

void SymbolTable::declare_symmetric(const std::string& name, const BundleLabel& label) {
  SymbolDecl d;
  d.name = name;
  d.arity = label.valence();
  if (d.arity > 1) {
    std::vector<int> g(static_cast<std::size_t>(d.arity));
    std::iota(g.begin(), g.end(), 0);
    d.symmetry.push_back(g);
  }
  d.bundle = label;
  declare(std::move(d));
}

const SymbolDecl& SymbolTable::at(const std::string& name) const {
  auto it = decls_.find(name);
  if (it == decls_.end()) throw DeclarationError("undeclared symbol " + name);
  return it->second;
}

// ---------------------------------------------------------------------------

namespace {

std::map<std::string, std::vector<Variance>> occurrences(const Term& t) {
  std::map<std::string, std::vector<Variance>> occ;
  for (const auto& f : t.factors)
    for (const auto& i : f.all_indices()) occ[i.name].push_back(i.variance);
  return occ;
}

}  // namespace

std::vector<Index> free_indices(const Term& t) {
  std::vector<Index> out;
  for (const auto& [name, vs] : occurrences(t)) {
    if (vs.size() == 1) {
      out.push_back({name, vs[0]});
    } else if (vs.size() == 2) {
      if (vs[0] == vs[1])
        throw StructuralError("index " + name + " repeated with the same variance");
    } else {
      throw StructuralError("index " + name + " used " + std::to_string(vs.size()) + " times");
    }
  }
  return out;
}

std::set<std::string> dummy_names(const Term& t) {
  std::set<std::string> out;
  for (const auto& [name, vs] : occurrences(t))
    if (vs.size() == 2) out.insert(name);
  return out;
}

std::vector<Index> free_indices(const Expr& e) {
  std::optional<std::vector<Index>> ref;
  for (const auto& t : e.terms()) {
    auto f = free_indices(t);
    if (t.coeff.is_zero()) continue;
    if (!ref) {
      ref = std::move(f);
    } else if (*ref != f) {
      throw StructuralError("terms of a sum have different free indices");
    }
  }
  return ref.value_or(std::vector<Index>{});
}

void validate(const Expr& e, const SymbolTable& table) {
  for (const auto& t : e.terms()) {
    for (const auto& f : t.factors) {
      switch (f.kind) {
        case FactorKind::EpsLower:
        case FactorKind::EpsUpper: {
          Variance want = f.kind == FactorKind::EpsLower ? Variance::Lower : Variance::Upper;
          if (f.indices.size() != 2 || f.indices[0].variance != want || f.indices[1].variance != want)
            throw StructuralError("malformed eps factor");
          break;
        }
        case FactorKind::Delta:
          if (f.indices.size() != 2 || f.indices[0].variance != Variance::Lower ||
              f.indices[1].variance != Variance::Upper)
            throw StructuralError("malformed delta factor");
          break;
        case FactorKind::Derivative:
          if (f.deriv.empty()) throw StructuralError("derivative without indices");
          [[fallthrough]];
        case FactorKind::Symbol: {
          const auto& d = table.at(f.symbol);
          if (static_cast<int>(f.indices.size()) != d.arity)
            throw StructuralError("symbol " + f.symbol + " expects " + std::to_string(d.arity) +
                                  " indices, got " + std::to_string(f.indices.size()));
          break;
        }
      }
    }
  }
  free_indices(e);
}

// ---------------------------------------------------------------------------

NameSource::NameSource(const Term& t, std::string prefix) : used_(names_of(t)), prefix_(std::move(prefix)) {}

NameSource::NameSource(std::set<std::string> used, std::string prefix)
    : used_(std::move(used)), prefix_(std::move(prefix)) {}

std::string NameSource::fresh() {
  for (;;) {
    std::string n = prefix_ + std::to_string(next_++);
    if (used_.insert(n).second) return n;
  }
}

Expr transform_factors(const Expr& e, const FactorRewriter& rw) {
  Expr out;
  for (const auto& t : e.terms()) {
    NameSource ns(t);
    Expr acc = Expr::constant(t.coeff);
    for (const auto& f : t.factors) {
      auto rep = rw(f, ns);
      acc = multiply_plain(acc, rep ? *rep : Expr::factor(f));
      if (acc.empty()) break;
    }
    out += acc;
  }
  return out;
}

Expr rename_free(const Expr& e, const std::map<std::string, std::string>& map) {
  std::set<std::string> targets;
  for (const auto& [k, v] : map) targets.insert(v);
  Expr out;
  for (Term t : e.terms()) {
    auto used = names_of(t);
    used.insert(targets.begin(), targets.end());
    NameSource ns(used);
    rename_dummies_away(t, targets, ns);
    std::set<std::string> fr;
    for (const auto& i : free_indices(t)) fr.insert(i.name);
    std::map<std::string, std::string> m;
    for (const auto& [k, v] : map)
      if (fr.count(k)) m[k] = v;
    rename_in_term(t, m);
    out.terms().push_back(std::move(t));
  }
  return out;
}

namespace {

Expr permutation_average(const Expr& e, const std::vector<std::string>& slots, bool alternating) {
  auto fr = free_indices(e);
  for (const auto& s : slots) {
    if (std::none_of(fr.begin(), fr.end(), [&](const Index& i) { return i.name == s; }) && !e.empty())
      throw StructuralError("cannot symmetrize over non-free index " + s);
  }
  std::vector<int> perm(slots.size());
  std::iota(perm.begin(), perm.end(), 0);
  Expr out;
  std::int64_t count = 0;
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < perm.size(); ++i)
      for (std::size_t j = i + 1; j < perm.size(); ++j)
        if (perm[i] > perm[j]) ++inversions;
    std::map<std::string, std::string> m;
    for (std::size_t i = 0; i < slots.size(); ++i) m[slots[i]] = slots[static_cast<std::size_t>(perm[i])];
    Expr p = rename_free(e, m);
    if (alternating && inversions % 2) p = -p;
    out += p;
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out * Coefficient(Rational(1, count));
}

}  // namespace

Expr symmetrize(const Expr& e, const std::vector<std::string>& slots) { return permutation_average(e, slots, false); }

Expr antisymmetrize(const Expr& e, const std::vector<std::string>& slots) {
  return permutation_average(e, slots, true);
}

Expr substitute(const Expr& e, const std::string& symbol, const std::vector<std::string>& slots,
                const Expr& replacement) {
  return transform_factors(e, [&](const Factor& f, NameSource& ns) -> std::optional<Expr> {
    if (f.kind != FactorKind::Symbol || f.symbol != symbol) return std::nullopt;
    if (f.indices.size() != slots.size())
      throw StructuralError("substitution template arity mismatch for " + symbol);
    std::map<std::string, std::string> slot_map;
    std::vector<Factor> raisers;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      const Index& idx = f.indices[i];
      if (idx.variance == Variance::Lower) {
        slot_map[slots[i]] = idx.name;
      } else {
        std::string d = ns.fresh();
        raisers.push_back(Factor::eps_upper(idx.name, d));
        slot_map[slots[i]] = d;
      }
    }
    Expr out;
    for (Term t : replacement.terms()) {
      std::map<std::string, std::string> m = slot_map;
      for (const auto& d : dummy_names(t)) m[d] = ns.fresh();
      rename_in_term(t, m);
      t.factors.insert(t.factors.end(), raisers.begin(), raisers.end());
      out.terms().push_back(std::move(t));
    }
    return out;
  });
}

Expr lower_all(const Expr& e) {
  return transform_factors(e, [](const Factor& f, NameSource& ns) -> std::optional<Expr> {
    if (f.kind != FactorKind::Symbol && f.kind != FactorKind::Derivative) return std::nullopt;
    Factor g = f;
    std::vector<Factor> extra;
    g.for_each_index([&](Index& i) {
      if (i.variance == Variance::Upper) {
        std::string d = ns.fresh();
        extra.push_back(Factor::eps_upper(i.name, d));
        i = lo(d);
      }
    });
    if (extra.empty()) return std::nullopt;
    Term t{Coefficient(1), {g}};
    t.factors.insert(t.factors.end(), extra.begin(), extra.end());
    return Expr({t});
  });
}

Expr coefficient_of(const Expr& e, const std::string& name) {
  Expr out;
  for (const auto& t : e.terms()) {
    int hits = 0;
    Term r{t.coeff, {}};
    for (const auto& f : t.factors) {
      if (f.kind == FactorKind::Derivative && f.symbol == name)
        throw StructuralError("unknown " + name + " appears differentiated");
      if (f.kind == FactorKind::Symbol && f.symbol == name) {
        if (!f.indices.empty()) throw StructuralError("unknown " + name + " is not a scalar");
        ++hits;
        continue;
      }
      r.factors.push_back(f);
    }
    if (hits > 1) throw StructuralError("unknown " + name + " appears nonlinearly");
    if (hits == 1) out.terms().push_back(std::move(r));
  }
  return out;
}

Expr drop_terms_with(const Expr& e, const std::set<std::string>& names) {
  Expr out;
  for (const auto& t : e.terms()) {
    bool hit = std::any_of(t.factors.begin(), t.factors.end(), [&](const Factor& f) {
      return (f.kind == FactorKind::Symbol || f.kind == FactorKind::Derivative) && names.count(f.symbol);
    });
    if (!hit) out.terms().push_back(t);
  }
  return out;
}

}  // namespace contact_spinor
