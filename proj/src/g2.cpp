#include "contact_spinor/g2.hpp"

#include <mutex>

#include "contact_spinor/parser.hpp"

namespace contact_spinor {

std::string to_string(GammaPart p) {
  switch (p) {
    case GammaPart::Lambda: return "lambda";
    case GammaPart::Mu: return "mu";
    case GammaPart::Nu: return "nu";
  }
  return "?";
}

SymbolTable g2_symbols() {
  using R = Rational;
  SymbolTable t;
  t.declare_symmetric("lambda", BundleLabel::g2(5, R(-3)));
  t.declare_symmetric("mu", BundleLabel::g2(3, R(-2)));
  t.declare_symmetric("nu", BundleLabel::g2(1, R(-1)));
  t.declare_symmetric("omega", BundleLabel::g2(3, R(-2)));
  return t;
}

namespace {

const SymbolTable& table() {
  static const SymbolTable t = g2_symbols();
  return t;
}

Expr p(const std::string& text) { return parse_expr(text, table()); }

}  // namespace

Expr gamma_expr(GammaPart part) {
  switch (part) {
    case GammaPart::Lambda: return p("lambda_{A B C}^{D E}");
    case GammaPart::Mu: return p("sym(A B C){ sym(D E){ mu_{A B}^{D} * delta_{C}^{E} } }");
    case GammaPart::Nu: return p("sym(A B C){ nu_{A} * delta_{B}^{D} * delta_{C}^{E} }");
  }
  return {};
}

namespace {

// Gamma_{AB}^E_C^G = eps^{EX} Gamma_{ABX}^{YG} eps_{YC}
Expr gamma_mixed(GammaPart part) {
  Expr g = rename_free(gamma_expr(part), {{"C", "X"}, {"D", "Y"}, {"E", "G"}});
  return g * Expr::factor(Factor::eps_upper("E", "X")) * Expr::factor(Factor::eps_lower("Y", "C"));
}

// Gamma_{EAB}^{EG}
Expr gamma_trace(GammaPart part) {
  return rename_free(gamma_expr(part), {{"A", "Q"}, {"B", "A"}, {"C", "B"}, {"D", "Q"}, {"E", "G"}});
}

}  // namespace

GammaParts gamma_parts(GammaPart part) {
  const auto& t = table();
  GammaParts out;
  out.sym = canonicalize(symmetrize(symmetrize(gamma_mixed(part), {"A", "B", "C"}), {"E", "G"}), t);
  out.trace = canonicalize(gamma_trace(part), t);
  return out;
}

Expr induced_correction(GammaPart part) {
  Expr first = gamma_mixed(part) * p("omega_{D E G}");
  Expr second = gamma_trace(part) * p("omega_{C D G}");
  Expr total = symmetrize(first, {"A", "B", "C", "D"}) * Coefficient(2) - symmetrize(second, {"A", "B", "C", "D"});
  return canonicalize(total, table());
}

Expr sym_template(GammaPart part) {
  switch (part) {
    case GammaPart::Lambda: return p("lambda_{A B C}^{E G}");
    case GammaPart::Mu: return p("sym(A B C){ sym(E G){ mu_{A B}^{E} * delta_{C}^{G} } }");
    case GammaPart::Nu: return p("sym(A B C){ nu_{A} * delta_{B}^{E} * delta_{C}^{G} }");
  }
  return {};
}

Expr trace_template(GammaPart part) {
  switch (part) {
    case GammaPart::Lambda:
    case GammaPart::Mu: return p("mu_{A B}^{G}");
    case GammaPart::Nu: return p("sym(A B){ nu_{A} * delta_{B}^{G} }");
  }
  return {};
}

Expr correction_template(GammaPart part) {
  switch (part) {
    case GammaPart::Lambda: return p("sym(A B C D){ lambda_{A B C}^{E G} * omega_{D E G} }");
    case GammaPart::Mu: return p("sym(A B C D){ mu_{A B}^{E} * omega_{C D E} }");
    case GammaPart::Nu: return p("sym(A B C D){ nu_{A} * omega_{B C D} }");
  }
  return {};
}

std::vector<CoefficientRow> coefficient_table() {
  std::vector<CoefficientRow> rows;
  for (GammaPart part : {GammaPart::Lambda, GammaPart::Mu, GammaPart::Nu}) {
    GammaParts gp = gamma_parts(part);
    CoefficientRow r;
    r.part = part;
    r.sym = proportional(gp.sym, sym_template(part), table());
    r.trace = proportional(gp.trace, trace_template(part), table());
    r.correction = proportional(induced_correction(part), correction_template(part), table());
    rows.push_back(r);
  }
  return rows;
}

// ---------------------------------------------------------------------------

std::vector<Index> hom_indices() { return {lo("A"), lo("B"), lo("C"), lo("D"), up("E"), up("F"), up("G")}; }

std::vector<Index> summand_indices(int s) {
  switch (s) {
    case 7: return hom_indices();
    case 5: return {lo("A"), lo("B"), lo("C"), up("E"), up("F")};
    case 3: return {lo("A"), lo("B"), up("E")};
    case 1: return {lo("A")};
  }
  throw UsageError("no Hom summand of valence " + std::to_string(s));
}

namespace {

const std::array<std::pair<const char*, const char*>, 3> kPairs = {{{"D", "G"}, {"C", "F"}, {"B", "E"}}};

ComponentTensor symmetrize_hom(const ComponentTensor& x) {
  return symmetrize(symmetrize(reorder(x, hom_indices()), {"A", "B", "C", "D"}), {"E", "F", "G"});
}

// Symmetrize over every index, lowering the upper ones for the purpose.
ComponentTensor symmetrize_all(const ComponentTensor& t) {
  ComponentTensor x = t;
  std::vector<std::string> uppers, all;
  for (const auto& i : t.free())
    if (i.variance == Variance::Upper) uppers.push_back(i.name);
  for (const auto& u : uppers) x = lower(x, u, "_l" + u);
  for (const auto& i : x.free()) all.push_back(i.name);
  x = symmetrize(x, all);
  for (const auto& u : uppers) x = raise(x, "_l" + u, u);
  return reorder(x, t.free());
}

}  // namespace

ComponentTensor hom_embed(int s, const ComponentTensor& part) {
  ComponentTensor x = reorder(part, summand_indices(s));
  for (int i = 0; i < (7 - s) / 2; ++i) x = outer(x, delta_tensor(kPairs[static_cast<std::size_t>(i)].first,
                                                                   kPairs[static_cast<std::size_t>(i)].second));
  return symmetrize_hom(x);
}

ComponentTensor hom_extract(int s, const ComponentTensor& x) {
  ComponentTensor t = reorder(x, hom_indices());
  for (int i = 0; i < (7 - s) / 2; ++i)
    t = contract(t, kPairs[static_cast<std::size_t>(i)].first, kPairs[static_cast<std::size_t>(i)].second);
  return reorder(symmetrize_all(t), summand_indices(s));
}

ComponentTensor symbolic_tensor(const std::string& name, const std::vector<Index>& free,
                                const std::vector<std::vector<int>>& groups) {
  SymbolTable t;
  t.declare({name, static_cast<int>(free.size()), groups, std::nullopt});
  return components_in_order(Expr::factor(Factor::sym(name, free)), t, free);
}

namespace {

std::vector<std::vector<int>> full_group(std::size_t n) {
  std::vector<std::vector<int>> g(1);
  for (std::size_t i = 0; i < n; ++i) g[0].push_back(static_cast<int>(i));
  return g;
}

}  // namespace

Coefficient projector_constant(int s) {
  static std::once_flag once;
  static std::map<int, Coefficient> constants;
  std::call_once(once, [] {
    for (int k : {7, 5, 3, 1}) {
      auto idx = summand_indices(k);
      ComponentTensor rho = symbolic_tensor("rho", idx, full_group(idx.size()));
      auto c = proportional(hom_extract(k, hom_embed(k, rho)), rho);
      if (!c || c->is_zero()) throw std::logic_error("Hom summand embedding is not invertible");
      constants[k] = c->inverse();
    }
  });
  auto it = constants.find(s);
  if (it == constants.end()) throw UsageError("no Hom summand of valence " + std::to_string(s));
  return it->second;
}

ComponentTensor project(int s, const ComponentTensor& x) {
  return hom_embed(s, hom_extract(s, x)) * projector_constant(s);
}

TorsionComponents decompose(const ComponentTensor& x) {
  TorsionComponents t;
  t.t7 = hom_extract(7, x) * projector_constant(7);
  t.t5 = hom_extract(5, x) * projector_constant(5);
  t.t3 = hom_extract(3, x) * projector_constant(3);
  t.t1 = hom_extract(1, x) * projector_constant(1);
  return t;
}

ComponentTensor assemble(const TorsionComponents& t) {
  return hom_embed(7, t.t7) + hom_embed(5, t.t5) + hom_embed(3, t.t3) + hom_embed(1, t.t1);
}

GammaSplit zero_split() {
  return {ComponentTensor({lo("A"), lo("B"), lo("C"), up("D"), up("E")}),
          ComponentTensor({lo("A"), lo("B"), lo("C")}), ComponentTensor({lo("A")})};
}

namespace {

const std::vector<Index>& gamma_indices() {
  static const std::vector<Index> g = {lo("A"), lo("B"), lo("C"), up("D"), up("E")};
  return g;
}

}  // namespace

ComponentTensor gamma_tensor(const GammaSplit& g) {
  ComponentTensor out = reorder(g.lambda, gamma_indices());
  ComponentTensor mu = outer(raise(g.mu, "C", "D"), delta_tensor("C", "E"));
  out += symmetrize(symmetrize(reorder(mu, gamma_indices()), {"A", "B", "C"}), {"D", "E"});
  ComponentTensor nu = outer(outer(g.nu, delta_tensor("B", "D")), delta_tensor("C", "E"));
  out += symmetrize(reorder(nu, gamma_indices()), {"A", "B", "C"});
  return out;
}

ComponentTensor correction_hom(const ComponentTensor& gamma) {
  // 2 Gamma_{AB}^X_C^Y omega_{DXY}
  ComponentTensor g0 = rename(gamma, {{"C", "P"}, {"D", "Q"}, {"E", "Y"}});
  ComponentTensor mixed = lower(raise(g0, "P", "X"), "Q", "C");
  ComponentTensor first = rename(outer(mixed, delta_tensor("D", "W")), {{"W", "E"}, {"X", "F"}, {"Y", "G"}});
  // Gamma_{QAB}^{QY} omega_{CDY}
  ComponentTensor tr = contract(rename(gamma, {{"A", "P"}, {"B", "A"}, {"C", "B"}, {"D", "Q"}, {"E", "Y"}}), "P", "Q");
  ComponentTensor second =
      rename(outer(outer(tr, delta_tensor("C", "U")), delta_tensor("D", "V")), {{"U", "E"}, {"V", "F"}, {"Y", "G"}});
  return symmetrize_hom(first * Coefficient(2) - reorder(second, first.free()));
}

namespace {

// k_s with extract_s(correction of a unit part) = k_s * part, for s = 5, 3, 1.
struct Elimination {
  Coefficient k5, k3, k1;
};

const Elimination& elimination() {
  static const Elimination e = [] {
    Elimination out;
    GammaSplit g = zero_split();
    g.lambda = symbolic_tensor("l", gamma_indices(), full_group(5));
    auto c5 = proportional(decompose(correction_hom(gamma_tensor(g))).t5, rename(g.lambda, {{"D", "E"}, {"E", "F"}}));
    g = zero_split();
    g.mu = symbolic_tensor("m", {lo("A"), lo("B"), lo("C")}, full_group(3));
    auto c3 = proportional(decompose(correction_hom(gamma_tensor(g))).t3, raise(g.mu, "C", "E"));
    g = zero_split();
    g.nu = symbolic_tensor("n", {lo("A")}, {});
    auto c1 = proportional(decompose(correction_hom(gamma_tensor(g))).t1, g.nu);
    if (!c5 || !c3 || !c1 || c5->is_zero() || c3->is_zero() || c1->is_zero())
      throw std::logic_error("connection freedom does not surject onto the torsion summands");
    out.k5 = *c5;
    out.k3 = *c3;
    out.k1 = *c1;
    return out;
  }();
  return e;
}

}  // namespace

GammaSplit normalize_connection(const TorsionComponents& t) {
  const Elimination& e = elimination();
  GammaSplit g;
  g.lambda = reorder(rename(t.t5, {{"E", "D"}, {"F", "E"}}), gamma_indices()) * (-e.k5.inverse());
  g.mu = reorder(lower(t.t3, "E", "C"), {lo("A"), lo("B"), lo("C")}) * (-e.k3.inverse());
  g.nu = t.t1 * (-e.k1.inverse());
  return g;
}

ComponentTensor harmonic_torsion(const TorsionComponents& t) { return t.t7; }

}  // namespace contact_spinor
