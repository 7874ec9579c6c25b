#pragma once

// Connection freedom and partial torsion for G2 contact structures.
//
// The freedom Gamma_{ABC}^{DE} = Gamma_{(ABC)(DE)} splits as
//   lambda_{ABC}^{DE} + mu_{(AB}^{(D} delta_{C)}^{E)} + nu_{(A} delta_B^D delta_{C)}^E
// and a partial torsion X in Hom((3,-2), (4,-3)) is stored as
// X_{ABCD}^{EFG}, acting by omega_{EFG} -> X_{ABCD}^{EFG} omega_{EFG}.

#include <array>

#include "contact_spinor/expr.hpp"
#include "contact_spinor/tensor_ops.hpp"

namespace contact_spinor {

enum class GammaPart { Lambda, Mu, Nu };

std::string to_string(GammaPart p);

/// lambda/5, mu/3, nu/1, omega/3 (all symmetric) with their G2 labels.
SymbolTable g2_symbols();

/// Gamma_{ABC}^{DE} built from one summand of the split.
Expr gamma_expr(GammaPart p);

struct GammaParts {
  Expr sym;    // Gamma_{(AB}^{(E}_{C)}^{G)}   free A B C lower, E G upper
  Expr trace;  // Gamma_{EAB}^{EG}             free A B lower, G upper
};
GammaParts gamma_parts(GammaPart p);

/// 2 Gamma_{(AB}^E_C^G omega_{D)EG} - Gamma_{E(AB}^{EG} omega_{CD)G},
/// canonicalized; free A B C D lower.
Expr induced_correction(GammaPart p);

/// Paper-form templates the parts are compared against.
Expr sym_template(GammaPart p);
Expr trace_template(GammaPart p);
Expr correction_template(GammaPart p);

struct CoefficientRow {
  GammaPart part;
  std::optional<Coefficient> sym;         // sym part / sym template
  std::optional<Coefficient> trace;       // trace part / trace template (0 when the trace vanishes)
  std::optional<Coefficient> correction;  // induced correction / correction template
};
/// The full elimination table, computed from the formulas above.
std::vector<CoefficientRow> coefficient_table();

// ---------------------------------------------------------------------------
// Hom((3,-2), (4,-3)) = (7,-4) + (5,-3) + (3,-2) + (1,-1)

/// Free indices of a Hom element and of each summand's parameter:
///   7: A B C D / E F G    5: A B C / E F    3: A B / E    1: A
std::vector<Index> hom_indices();
std::vector<Index> summand_indices(int s);

ComponentTensor hom_embed(int s, const ComponentTensor& part);
ComponentTensor hom_extract(int s, const ComponentTensor& x);
/// c_s with project_s = c_s * embed_s o extract_s idempotent.
Coefficient projector_constant(int s);
ComponentTensor project(int s, const ComponentTensor& x);

struct TorsionComponents {
  ComponentTensor t7, t5, t3, t1;  // summand parameters, index layout as above
};
TorsionComponents decompose(const ComponentTensor& x);
ComponentTensor assemble(const TorsionComponents& t);

/// Parameters of a connection shift:
///   lambda: A B C / D E (symmetric),  mu: A B C lower,  nu: A lower.
struct GammaSplit {
  ComponentTensor lambda, mu, nu;
};
GammaSplit zero_split();
/// Gamma_{ABC}^{DE} reassembled from the split.
ComponentTensor gamma_tensor(const GammaSplit& g);
/// Hom element of the induced-operator correction of an arbitrary Gamma
/// (free A B C lower, D E upper), computed from its definition.
ComponentTensor correction_hom(const ComponentTensor& gamma);

/// The unique split whose correction cancels the 5, 3 and 1 summands.
GammaSplit normalize_connection(const TorsionComponents& t);
/// The (7,-4) summand; unchanged by every connection shift.
ComponentTensor harmonic_torsion(const TorsionComponents& t);

/// Generic symbolic tensor: one indeterminate per independent component of a
/// symbol with the given symmetry groups.
ComponentTensor symbolic_tensor(const std::string& name, const std::vector<Index>& free,
                                const std::vector<std::vector<int>>& groups);

}  // namespace contact_spinor
