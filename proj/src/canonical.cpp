#include <algorithm>

#include "contact_spinor/expr.hpp"

namespace contact_spinor {

namespace {

bool is_tensor(const Factor& f) { return f.kind == FactorKind::Symbol || f.kind == FactorKind::Derivative; }

// Find (factor, slot) holding index `name` with variance `v`, skipping factor `skip`.
// Slots count across deriv then operand indices.
bool find_slot(std::vector<Factor>& fs, std::size_t skip, const std::string& name, Variance v, bool tensors_only,
               std::size_t& fi, Index*& slot) {
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (i == skip || (tensors_only && !is_tensor(fs[i]))) continue;
    Index* found = nullptr;
    fs[i].for_each_index([&](Index& x) {
      if (!found && x.name == name && x.variance == v) found = &x;
    });
    if (found) {
      fi = i;
      slot = found;
      return true;
    }
  }
  return false;
}

bool contract_deltas(Term& t) {
  for (std::size_t p = 0; p < t.factors.size(); ++p) {
    if (t.factors[p].kind != FactorKind::Delta) continue;
    const std::string a = t.factors[p].indices[0].name, b = t.factors[p].indices[1].name;
    if (a == b) {
      t.coeff *= Coefficient(2);
    } else {
      std::size_t fi;
      Index* slot;
      if (find_slot(t.factors, p, b, Variance::Lower, false, fi, slot)) {
        slot->name = a;
      } else if (find_slot(t.factors, p, a, Variance::Upper, false, fi, slot)) {
        slot->name = b;
      } else {
        continue;
      }
    }
    t.factors.erase(t.factors.begin() + static_cast<std::ptrdiff_t>(p));
    return true;
  }
  return false;
}

bool contract_eps_pairs(Term& t) {
  for (std::size_t p = 0; p < t.factors.size(); ++p) {
    if (t.factors[p].kind != FactorKind::EpsLower) continue;
    for (std::size_t q = 0; q < t.factors.size(); ++q) {
      if (t.factors[q].kind != FactorKind::EpsUpper) continue;
      auto l = t.factors[p].indices, u = t.factors[q].indices;
      std::string shared;
      for (const auto& x : l)
        for (const auto& y : u)
          if (shared.empty() && x.name == y.name) shared = x.name;
      if (shared.empty()) continue;
      int sign = 1;
      if (l[0].name != shared) {
        std::swap(l[0], l[1]);
        sign = -sign;
      }
      if (u[0].name != shared) {
        std::swap(u[0], u[1]);
        sign = -sign;
      }
      // eps_{XB} eps^{XC} = delta_B^C
      Term r{sign > 0 ? t.coeff : -t.coeff, {}};
      for (std::size_t i = 0; i < t.factors.size(); ++i)
        if (i != p && i != q) r.factors.push_back(t.factors[i]);
      if (l[1].name == u[1].name) {
        r.coeff *= Coefficient(2);
      } else {
        r.factors.push_back(Factor::delta(l[1].name, u[1].name));
      }
      t = std::move(r);
      return true;
    }
  }
  return false;
}

bool absorb_eps(Term& t) {
  for (std::size_t p = 0; p < t.factors.size(); ++p) {
    const FactorKind k = t.factors[p].kind;
    if (k != FactorKind::EpsLower && k != FactorKind::EpsUpper) continue;
    const std::string P = t.factors[p].indices[0].name, Q = t.factors[p].indices[1].name;
    // eps^{PQ} X_Q = X^P ; X^P eps_{PQ} = X_Q
    const Variance want = k == FactorKind::EpsUpper ? Variance::Lower : Variance::Upper;
    const Variance result = flip(want);
    std::size_t fi;
    Index* slot;
    int sign;
    if (k == FactorKind::EpsUpper && find_slot(t.factors, p, Q, want, true, fi, slot)) {
      *slot = {P, result};
      sign = 1;
    } else if (k == FactorKind::EpsUpper && find_slot(t.factors, p, P, want, true, fi, slot)) {
      *slot = {Q, result};
      sign = -1;
    } else if (k == FactorKind::EpsLower && find_slot(t.factors, p, P, want, true, fi, slot)) {
      *slot = {Q, result};
      sign = 1;
    } else if (k == FactorKind::EpsLower && find_slot(t.factors, p, Q, want, true, fi, slot)) {
      *slot = {P, result};
      sign = -1;
    } else {
      continue;
    }
    if (sign < 0) t.coeff = -t.coeff;
    t.factors.erase(t.factors.begin() + static_cast<std::ptrdiff_t>(p));
    return true;
  }
  return false;
}

void sort_slots(Term& t, const SymbolTable& table) {
  for (auto& f : t.factors) {
    if (f.kind == FactorKind::EpsLower || f.kind == FactorKind::EpsUpper) {
      if (f.indices[1].name < f.indices[0].name) {
        std::swap(f.indices[0], f.indices[1]);
        t.coeff = -t.coeff;
      }
      continue;
    }
    if (!is_tensor(f)) continue;
    std::sort(f.deriv.begin(), f.deriv.end());
    for (const auto& g : table.at(f.symbol).symmetry) {
      std::vector<Index> part;
      for (int s : g) part.push_back(f.indices[static_cast<std::size_t>(s)]);
      std::sort(part.begin(), part.end());
      for (std::size_t i = 0; i < g.size(); ++i) f.indices[static_cast<std::size_t>(g[i])] = part[i];
    }
  }
}

Factor masked(Factor f, const std::set<std::string>& dummies) {
  f.for_each_index([&](Index& i) {
    if (dummies.count(i.name)) i = Index{"", Variance::Lower};
  });
  return f;
}

void order_and_rename(Term& t, const std::set<std::string>& free_names) {
  auto dummies = dummy_names(t);
  std::stable_sort(t.factors.begin(), t.factors.end(), [&](const Factor& a, const Factor& b) {
    return masked(a, dummies) < masked(b, dummies);
  });
  std::vector<std::string> order;
  for (const auto& f : t.factors)
    for (const auto& i : f.all_indices())
      if (dummies.count(i.name) && std::find(order.begin(), order.end(), i.name) == order.end())
        order.push_back(i.name);
  std::map<std::string, std::string> map;
  int next = 1;
  for (const auto& d : order) {
    std::string n;
    do n = "_" + std::to_string(next++);
    while (free_names.count(n));
    map[d] = n;
  }
  for (auto& f : t.factors)
    f.for_each_index([&](Index& i) {
      if (auto it = map.find(i.name); it != map.end()) i.name = it->second;
    });
}

// X^A Y_A = -X_A Y^A: make the first occurrence of each dummy lower.
void seesaw(Term& t) {
  std::set<std::string> seen;
  auto dummies = dummy_names(t);
  for (auto& f : t.factors) {
    if (!is_tensor(f)) continue;
    f.for_each_index([&](Index& i) {
      if (!dummies.count(i.name) || !seen.insert(i.name).second) return;
      if (i.variance == Variance::Lower) return;
      for (auto& g : t.factors)
        g.for_each_index([&](Index& j) {
          if (j.name == i.name) j.variance = flip(j.variance);
        });
      t.coeff = -t.coeff;
    });
  }
}

Term canonical_term(Term t, const SymbolTable& table, const std::set<std::string>& free_names) {
  while (contract_deltas(t) || contract_eps_pairs(t) || absorb_eps(t)) {
  }
  for (int iter = 0; iter < 8; ++iter) {
    Term before = t;
    sort_slots(t, table);
    order_and_rename(t, free_names);
    sort_slots(t, table);
    std::sort(t.factors.begin(), t.factors.end());
    seesaw(t);
    sort_slots(t, table);
    std::sort(t.factors.begin(), t.factors.end());
    if (t == before) break;
  }
  return t;
}

}  // namespace

Expr canonicalize(const Expr& e, const SymbolTable& table) {
  validate(e, table);
  std::set<std::string> free_names;
  for (const auto& i : free_indices(e)) free_names.insert(i.name);
  std::map<std::vector<Factor>, Coefficient> collected;
  for (const auto& t : e.terms()) {
    if (t.coeff.is_zero()) continue;
    Term c = canonical_term(t, table, free_names);
    collected[c.factors] += c.coeff;
  }
  Expr out;
  for (auto& [fs, c] : collected)
    if (!c.is_zero()) out.terms().push_back(Term{c, fs});
  if (!out.empty() && is_zero(out, table)) return {};
  return out;
}

}  // namespace contact_spinor
