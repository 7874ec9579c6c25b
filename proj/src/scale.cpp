#include "contact_spinor/scale.hpp"

#include "contact_spinor/parser.hpp"

namespace contact_spinor {

int derivative_order(Notation n) {
  switch (n) {
    case Notation::Leg: return 1;
    case Notation::Conformal3D: return 2;
    case Notation::G2: return 3;
  }
  return 0;
}

void declare_scale_symbols(SymbolTable& table, const ScaleContext& ctx) {
  const int n = derivative_order(ctx.geometry);
  std::vector<std::vector<int>> g;
  if (n > 1) {
    g.emplace_back();
    for (int i = 0; i < n; ++i) g.back().push_back(i);
  }
  table.declare({ctx.upsilon, n, g, std::nullopt});
  if (ctx.geometry == Notation::Leg) table.declare({ctx.bupsilon, 1, {}, std::nullopt});
  table.declare({"Omega", 0, {}, std::nullopt});
}

Expr hat(const Expr& e) {
  Expr out = e;
  for (auto& t : out.terms())
    for (auto& f : t.factors)
      if (f.kind == FactorKind::Derivative) f.op = hatted(f.op);
  return out;
}

namespace {

bool same_family(Notation label, Notation geometry) { return label == geometry; }

// Expansion of one hatted derivative whose slots are all lower.
Expr expand_lowered(const Factor& g, const SymbolDecl& decl, const ScaleContext& ctx) {
  const BundleLabel& label = *decl.bundle;
  const bool barred = g.op == DerivOp::HatBarNabla;
  const std::string& Y = barred ? ctx.bupsilon : ctx.upsilon;

  Rational c;
  if (ctx.geometry == Notation::Leg) c = barred ? label.density_b() : label.density_a();
  else c = label.weight() + Rational(label.valence());
  c += ctx.density_offset;

  std::vector<std::string> D;
  for (const auto& i : g.deriv) D.push_back(i.name);

  Factor plain = g;
  plain.op = unhatted(g.op);
  Expr out = Expr::factor(plain);

  std::vector<Index> ydx;
  for (const auto& d : D) ydx.push_back(lo(d));
  out += Expr::factor(Factor::sym(Y, ydx)) * Expr::factor(Factor::sym(g.symbol, g.indices)) * Coefficient(c);

  for (std::size_t i = 0; i < g.indices.size(); ++i) {
    // Upsilon_{C_i D_0 .. D_{n-2}} phi_{.. D_{n-1} ..}, symmetrized over D
    std::vector<Index> y = {g.indices[i]};
    for (std::size_t j = 0; j + 1 < D.size(); ++j) y.push_back(lo(D[j]));
    std::vector<Index> p = g.indices;
    p[i] = lo(D.back());
    Expr t = Expr::factor(Factor::sym(Y, y)) * Expr::factor(Factor::sym(g.symbol, p));
    if (D.size() > 1) t = symmetrize(t, D);
    out -= t;
  }
  return out;
}

}  // namespace

Expr hat_rewrite(const Expr& e, const SymbolTable& table, const ScaleContext& ctx) {
  const int order = derivative_order(ctx.geometry);
  return transform_factors(e, [&](const Factor& f, NameSource& ns) -> std::optional<Expr> {
    if (f.kind != FactorKind::Derivative || !is_hatted(f.op)) return std::nullopt;
    if (static_cast<int>(f.deriv.size()) != order)
      throw UsageError("derivative with " + std::to_string(f.deriv.size()) + " indices in " +
                       to_string(ctx.geometry) + " geometry");
    if (f.op == DerivOp::HatBarNabla && ctx.geometry != Notation::Leg)
      throw UsageError("barred derivative outside the Legendrean geometry");
    const SymbolDecl& decl = table.at(f.symbol);
    if (!decl.bundle) throw DeclarationError("symbol " + f.symbol + " has no bundle label");
    if (!same_family(decl.bundle->notation(), ctx.geometry))
      throw DeclarationError("symbol " + f.symbol + " is labelled in " + to_string(decl.bundle->notation()) +
                             " notation");
    if (decl.bundle->valence() != decl.arity)
      throw DeclarationError("symbol " + f.symbol + " has arity different from its valence");

    Factor g = f;
    std::vector<Factor> raisers;
    g.for_each_index([&](Index& i) {
      if (i.variance == Variance::Upper) {
        std::string d = ns.fresh();
        raisers.push_back(Factor::eps_upper(i.name, d));
        i = lo(d);
      }
    });
    Expr out = expand_lowered(g, decl, ctx);
    for (auto& t : out.terms()) t.factors.insert(t.factors.end(), raisers.begin(), raisers.end());
    return out;
  });
}

bool is_invariant(const Expr& formula, const SymbolTable& table, const ScaleContext& ctx) {
  SymbolTable t = table;
  if (!t.contains(ctx.upsilon)) declare_scale_symbols(t, ctx);
  Expr rewritten = hat_rewrite(hat(formula), t, ctx);
  return is_zero(rewritten - formula, t);
}

bool verify_invariant(const OperatorSpec& op, const SymbolTable& table, const ScaleContext& ctx) {
  SymbolTable t = table;
  SymbolDecl d = t.at(op.source_symbol);
  d.bundle = op.source;
  t.redeclare(d);
  if (op.target && !op.formula.empty() &&
      static_cast<int>(free_indices(op.formula).size()) != op.target->valence())
    throw StructuralError("operator " + op.name + ": formula valence does not match its target");
  return is_invariant(op.formula, t, ctx);
}

bool epsilon_consistency(const ScaleContext& ctx) {
  if (ctx.geometry != Notation::Leg) throw UsageError("eps consistency is a Legendrean check");
  SymbolTable t;
  declare_scale_symbols(t, ctx);
  t.declare({"e", 2, {}, BundleLabel::leg_from_weights(2, Rational(0), Rational(0))});
  const std::string Y = ctx.upsilon;
  // hnabla_A (Omega e_{BC}) by Leibniz, Omega a function with gradient Omega Upsilon
  Expr lhs = parse_expr("Omega * " + Y + "_{A} * e_{B C} + Omega * hnabla_{A} e_{B C}", t);
  lhs = hat_rewrite(lhs, t, ctx);
  Expr eps = parse_expr("eps_{P Q}", t);
  lhs = substitute(lhs, "e", {"P", "Q"}, eps);
  Expr rhs = substitute(parse_expr("Omega * nabla_{A} e_{B C}", t), "e", {"P", "Q"}, eps);
  return equal(lhs, rhs, t);
}

std::vector<OperatorCase> standard_invariant_operators() {
  using R = Rational;
  struct Row {
    const char* name;
    Notation n;
    BundleLabel src, tgt;
    const char* formula;
  };
  const std::vector<Row> rows = {
      {"g2-twistor", Notation::G2, BundleLabel::g2(1, R(0)), BundleLabel::g2(4, R(-3)),
       "sym(A B C D){ nabla_{A B C} phi_{D} }"},
      {"g2-dirac", Notation::G2, BundleLabel::g2(1, R(-4, 3)), BundleLabel::g2(2, R(-7, 3)),
       "nabla_{A B}^{C} phi_{C}"},
      {"c3-twistor", Notation::Conformal3D, BundleLabel::conformal3d(1, R(0)), BundleLabel::conformal3d(3, R(-2)),
       "sym(A B C){ nabla_{A B} phi_{C} }"},
      {"c3-dirac", Notation::Conformal3D, BundleLabel::conformal3d(1, R(-3, 2)),
       BundleLabel::conformal3d(1, R(-5, 2)), "nabla_{A B} phi^{B}"},
      {"leg-sym", Notation::Leg, BundleLabel::leg(R(0), 1, R(-2)), BundleLabel::leg(R(-2), 2, R(-2)),
       "sym(A B){ nabla_{A} phi_{B} }"},
      {"leg-skew", Notation::Leg, BundleLabel::leg(R(-2), 1, R(0)), BundleLabel::leg(R(-3), 0, R(1)),
       "1/2 eps^{A B} * nabla_{A} phi_{B}"},
  };
  std::vector<OperatorCase> out;
  for (const auto& r : rows) {
    OperatorCase c;
    c.ctx.geometry = r.n;
    declare_scale_symbols(c.table, c.ctx);
    c.table.declare({"phi", 1, {}, r.src});
    c.op = {r.name, "phi", r.src, r.tgt, parse_expr(r.formula, c.table)};
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace contact_spinor
