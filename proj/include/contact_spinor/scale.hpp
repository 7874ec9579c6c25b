#pragma once

// Change-of-scale calculus.  A hatted derivative (hnabla / hbnabla) is the
// derivative of the rescaled connection; hat_rewrite expands it in terms of
// the original derivative and the gradient symbols Upsilon / bUpsilon.
//
// All laws act slot by slot on lowered indices.  eps is treated as
// invariant: upper slots are lowered through eps before the law applies.
//
//   Leg  : hnabla_A  phi_{C..} = nabla_A phi  + (u+k) Upsilon_A phi  - sum_i Upsilon_{C_i} phi_{..A..}
//          hbnabla_A phi_{C..} = bnabla_A phi + (v+k) bUpsilon_A phi - sum_i bUpsilon_{C_i} phi_{..A..}
//   3D   : hnabla_{AB} phi = nabla phi + (w+k) Upsilon_{AB} phi - sum_i Upsilon_{C_i (A} phi_{..B)..}
//   G2   : hnabla_{ABC} phi = nabla phi + (w+k) Upsilon_{ABC} phi - sum_i Upsilon_{C_i (AB} phi_{..C)..}

#include <string>

#include "contact_spinor/expr.hpp"

namespace contact_spinor {

struct ScaleContext {
  Notation geometry = Notation::Leg;
  std::string upsilon = "Upsilon";
  std::string bupsilon = "bUpsilon";
  /// Added to every density coefficient (u+k), (v+k), (w+k).  Zero for the
  /// true laws; nonzero values are mutation probes.
  Rational density_offset;
};

/// Number of derivative indices of the geometry's first-order operator.
int derivative_order(Notation n);

/// Declare the context's gradient symbols (and Omega) in `table`.
void declare_scale_symbols(SymbolTable& table, const ScaleContext& ctx);

/// Replace nabla/bnabla by their hatted markers.
Expr hat(const Expr& e);

/// Expand every hatted derivative.  Throws DeclarationError when an operand
/// has no bundle label and UsageError when the derivative does not match
/// the geometry.
Expr hat_rewrite(const Expr& e, const SymbolTable& table, const ScaleContext& ctx);

struct OperatorSpec {
  std::string name;
  std::string source_symbol;
  BundleLabel source;
  std::optional<BundleLabel> target;
  Expr formula;
};

/// hat_rewrite(hat(formula)) - formula == 0 for arbitrary Upsilon, with the
/// source symbol carrying op.source.  Throws StructuralError if the target
/// valence disagrees with the formula's free indices.
bool verify_invariant(const OperatorSpec& op, const SymbolTable& table, const ScaleContext& ctx);

/// Same check for a bare expression whose symbols already carry labels.
bool is_invariant(const Expr& formula, const SymbolTable& table, const ScaleContext& ctx);

/// Rescaled eps-hat = Omega eps: checks hnabla_A(Omega e_{BC}) with
/// e -> eps equals Omega nabla_A eps_{BC}.  Leg context only.
bool epsilon_consistency(const ScaleContext& ctx);

/// The shipped operator pairs (G2, 3D, Leg) with their symbol tables.
struct OperatorCase {
  OperatorSpec op;
  SymbolTable table;
  ScaleContext ctx;
};
std::vector<OperatorCase> standard_invariant_operators();

}  // namespace contact_spinor
