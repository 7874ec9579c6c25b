#pragma once

// Random well-formed expressions for property tests.

#include <algorithm>
#include <random>

#include "contact_spinor/expr.hpp"

namespace testgen {

using namespace contact_spinor;

inline SymbolTable fuzz_table() {
  SymbolTable t;
  t.declare({"f", 0, {}, std::nullopt});
  t.declare({"g", 0, {}, std::nullopt});
  for (const char* n : {"phi", "psi", "chi"}) t.declare({n, 1, {}, std::nullopt});
  t.declare({"s", 2, {{0, 1}}, std::nullopt});
  t.declare({"w", 2, {}, std::nullopt});
  t.declare({"mu", 3, {{0, 1, 2}}, std::nullopt});
  t.declare({"G", 3, {{0, 1}}, std::nullopt});
  return t;
}

inline Coefficient random_coeff(std::mt19937& rng) {
  auto r = [&] { return Rational(static_cast<std::int64_t>(rng() % 9) - 4, 1 + static_cast<std::int64_t>(rng() % 4)); };
  Coefficient c = rng() % 3 == 0 ? Coefficient(r(), r()) : Coefficient(r());
  return c.is_zero() ? Coefficient(1) : c;
}

// Consume `n` slots from the front of `slots` into one factor.
inline Factor tensor_factor(std::mt19937& rng, std::vector<Index>& slots, std::size_t n) {
  std::vector<Index> idx(slots.begin(), slots.begin() + static_cast<std::ptrdiff_t>(n));
  slots.erase(slots.begin(), slots.begin() + static_cast<std::ptrdiff_t>(n));
  static const char* by_arity[4][2] = {{"f", "g"}, {"phi", "psi"}, {"s", "w"}, {"mu", "G"}};
  std::string name = by_arity[n][rng() % 2];
  return Factor::sym(name, idx);
}

/// One term with the given free indices and up to `max_pairs` dummy pairs.
inline Term random_term(std::mt19937& rng, const std::vector<Index>& free, int max_pairs) {
  std::vector<Index> slots = free;
  int pairs = static_cast<int>(rng() % static_cast<unsigned>(max_pairs + 1));
  for (int i = 0; i < pairs; ++i) {
    std::string n = "D" + std::to_string(i);
    slots.push_back(lo(n));
    slots.push_back(up(n));
  }
  std::shuffle(slots.begin(), slots.end(), rng);
  Term t{random_coeff(rng), {}};
  while (!slots.empty()) {
    unsigned kind = rng() % 8;
    if (kind == 0) {
      t.factors.push_back(tensor_factor(rng, slots, 0));
      continue;
    }
    if (kind <= 2 && slots.size() >= 2 && slots[0].variance == slots[1].variance && slots[0].name != slots[1].name) {
      t.factors.push_back(slots[0].variance == Variance::Lower ? Factor::eps_lower(slots[0].name, slots[1].name)
                                                               : Factor::eps_upper(slots[0].name, slots[1].name));
      slots.erase(slots.begin(), slots.begin() + 2);
      continue;
    }
    if (kind == 3 && slots.size() >= 2 && slots[0].variance != slots[1].variance) {
      Index a = slots[0], b = slots[1];
      if (a.variance == Variance::Upper) std::swap(a, b);
      t.factors.push_back(Factor::delta(a.name, b.name));
      slots.erase(slots.begin(), slots.begin() + 2);
      continue;
    }
    if (kind == 4 && slots.size() >= 2) {
      std::size_t nd = 1 + rng() % std::min<std::size_t>(2, slots.size() - 1);
      std::vector<Index> d(slots.begin(), slots.begin() + static_cast<std::ptrdiff_t>(nd));
      slots.erase(slots.begin(), slots.begin() + static_cast<std::ptrdiff_t>(nd));
      std::size_t na = std::min<std::size_t>(slots.size(), rng() % 3);
      Factor op = tensor_factor(rng, slots, na);
      DerivOp ops[] = {DerivOp::Nabla, DerivOp::BarNabla};
      t.factors.push_back(Factor::derivative(ops[rng() % 2], d, op.symbol, op.indices));
      continue;
    }
    std::size_t n = 1 + rng() % std::min<std::size_t>(3, slots.size());
    t.factors.push_back(tensor_factor(rng, slots, n));
  }
  return t;
}

inline Expr random_expr(std::mt19937& rng, int max_terms = 3, int max_pairs = 2) {
  static const std::vector<std::vector<Index>> free_sets = {
      {}, {lo("A")}, {up("B")}, {lo("A"), up("B")}, {lo("A"), lo("C")}};
  const auto& free = free_sets[rng() % free_sets.size()];
  Expr e;
  int n = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_terms));
  for (int i = 0; i < n; ++i) e.terms().push_back(random_term(rng, free, max_pairs));
  return e;
}

}  // namespace testgen
