#pragma once

// G2 contact structure from Legendrean data plus a spin-frame o_A, iota^A
// with o_A iota^A = 1: the defining isomorphism, the induced connection on
// Sym^3 S, the twelve spinor equations, the 20 x 12 linear system and the
// eight obstructions psi_0 .. psi_7.
//
// Symbols: o (lower, (0|1|-1)), iota (stored lower, (-1|1|0)), Pi, Sigma;
// connection one-forms kappa, lambda, mu (E^* parts) and bkappa, blambda,
// bmu (the E parts, stored lowered); scalars x, y, z, w.

#include <array>
#include <string>
#include <vector>

#include "contact_spinor/expr.hpp"
#include "contact_spinor/polynomial.hpp"
#include "contact_spinor/scale.hpp"

namespace contact_spinor {

BundleLabel label_o();
BundleLabel label_iota();

SymbolTable saucer_symbols();

/// 1/sqrt3, the factor of the defining isomorphism.
Coefficient iso_factor();

struct IsoImage {
  Expr lower;  // x o_A - c y iota_A        (free A lower)
  Expr upper;  // w iota^A - c z o^A        (free A upper)
};

/// Symbolic image of scalar expressions (x, y, z, w).
IsoImage iso_map(const Expr& x, const Expr& y, const Expr& z, const Expr& w, const Coefficient& c = iso_factor());

// ---------------------------------------------------------------------------
// induced connection on Sym^3 S

using Matrix4 = std::array<std::array<Polynomial, 4>, 4>;

/// Rows (3k, l, 0, 0), (3m, k, 2l, 0), (0, 2m, -k, 3l), (0, 0, m, -3k) in the
/// indeterminates kappa, lambda, mu.
Matrix4 induced_matrix();

/// Action of the 2 x 2 connection matrix [[kappa, lambda], [mu, nu]] on the
/// basis y^3, 3y^2z, 3yz^2, z^3 of Sym^3 S, derived by the Leibniz rule.
/// With nu_is_minus_kappa the indeterminate nu is replaced by -kappa.
Matrix4 symmetric_cube_action(bool nu_is_minus_kappa = true);

// ---------------------------------------------------------------------------
// equations

struct SpinorEquation {
  std::string name;
  Expr lhs;
  Expr rhs;
  /// Two-index equations (free A lower, B upper) hold for trace-free parts.
  bool trace_free = false;
  int scalar_count() const { return trace_free ? 3 : 1; }
  Expr residual() const;
};

/// The twelve equations in displayed form.
std::vector<SpinorEquation> twelve_equations();

/// The same equations derived by comparing the induced operator with the
/// Rumin operator, with isomorphism factor c.  Returned in the displayed
/// order; lhs holds the whole difference and rhs is zero.
std::vector<SpinorEquation> derive_equations(const Coefficient& c = iso_factor());

struct ScalarEquation {
  std::string name;
  Expr residual;  // scalar; zero when the equation holds
};

/// Scalar equations: the eight scalar ones plus three contractions of each
/// trace-free one with o^A o_B, o^A iota_B + iota^A o_B, iota^A iota_B.
std::vector<ScalarEquation> scalar_equations(const std::vector<SpinorEquation>& eqs);

/// kappaO = kappa^A o_A, kappaI = kappa^A iota_A, ... (12 names).
const std::vector<std::string>& unknown_names();

/// Rows: sum_j matrix[i][j] u_j = rhs[i], entries polynomial in the
/// component indeterminates of o, iota, their derivatives, Pi, Sigma.
struct SystemTemplate {
  std::vector<std::string> row_names;
  std::vector<std::vector<Polynomial>> matrix;
  std::vector<Polynomial> rhs;
};

SystemTemplate assemble_system(const std::vector<SpinorEquation>& eqs);
const SystemTemplate& standard_system();

// ---------------------------------------------------------------------------
// obstructions

std::vector<Expr> psi();
/// psi_6 without its (2/sqrt3) term.
Expr psi6_truncated();
/// Components of each psi_i as polynomials.
const std::vector<Polynomial>& psi_polynomials();

/// o_A iota^A = 1 is imposed by eliminating iota_0 = (o_0 iota_1 - 1) / o_1;
/// the result is o_1^d times the substituted polynomial, d the degree in iota_0.
/// It is zero exactly when the input vanishes on normalized frames.
Polynomial reduce_normalized_frame(const Polynomial& p);
bool vanishes_on_normalized_frame(const Expr& scalar);

/// hat_rewrite(psi_i) - psi_i vanishes for every normalized frame.
std::vector<bool> psi_invariance(const std::vector<Expr>& psis, const ScaleContext& ctx = {});
/// Same with caller-supplied labels (for weight mutations).
std::vector<bool> psi_invariance(const std::vector<Expr>& psis, const SymbolTable& table, const ScaleContext& ctx);
bool psi_scale_invariance(const ScaleContext& ctx = {});

/// Indeterminate names of the first jets (20: nabla o, nabla iota, bnabla o,
/// bnabla iota, each [d][a] with iota lowered, then Pi, Sigma) and of the
/// frame (o_0, o_1, iota_0, iota_1).
std::vector<std::string> jet_variables();
std::vector<std::string> frame_variables();

}  // namespace contact_spinor
