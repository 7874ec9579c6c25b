#include "contact_spinor/saucer.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "contact_spinor/legendre.hpp"
#include "contact_spinor/parser.hpp"

namespace contact_spinor {

using R = Rational;

BundleLabel label_o() { return BundleLabel::leg(R(0), 1, R(-1)); }
BundleLabel label_iota() { return BundleLabel::leg(R(-1), 1, R(0)); }

SymbolTable saucer_symbols() {
  SymbolTable t = leg_symbols();
  declare_scale_symbols(t, ScaleContext{});
  t.declare_symmetric("o", label_o());
  t.declare_symmetric("iota", label_iota());
  for (const char* n : {"kappa", "lambda", "mu", "bkappa", "blambda", "bmu"}) t.declare({n, 1, {}, std::nullopt});
  // x, y, z, w in Lambda^0[0,3], [1,2], [2,1], [3,0], shifted by [-2,-2]
  t.declare_symmetric("x", BundleLabel::leg(R(-2), 0, R(1)));
  t.declare_symmetric("y", BundleLabel::leg(R(-1), 0, R(0)));
  t.declare_symmetric("z", BundleLabel::leg(R(0), 0, R(-1)));
  t.declare_symmetric("w", BundleLabel::leg(R(1), 0, R(-2)));
  for (const auto& u : unknown_names()) t.declare({u, 0, {}, std::nullopt});
  return t;
}

Coefficient iso_factor() { return Coefficient(R(0), R(1, 3)); }

namespace {

const SymbolTable& table() {
  static const SymbolTable t = saucer_symbols();
  return t;
}

Expr p(const std::string& s) { return parse_expr(s, table()); }

Expr f1(const std::string& name, Index i) { return Expr::factor(Factor::sym(name, {std::move(i)})); }

}  // namespace

IsoImage iso_map(const Expr& x, const Expr& y, const Expr& z, const Expr& w, const Coefficient& c) {
  IsoImage out;
  out.lower = x * f1("o", lo("A")) - y * f1("iota", lo("A")) * c;
  out.upper = w * f1("iota", up("A")) - z * f1("o", up("A")) * c;
  return out;
}

// ---------------------------------------------------------------------------

namespace {

Polynomial var(const std::string& n) { return Polynomial::variable(n); }

Polynomial power(const Polynomial& a, int n) {
  Polynomial r(Coefficient(1));
  for (int i = 0; i < n; ++i) r = r * a;
  return r;
}

}  // namespace

Matrix4 induced_matrix() {
  auto k = var("kappa"), l = var("lambda"), m = var("mu");
  auto c = [](long n) { return Coefficient(n); };
  Matrix4 M;
  M[0][0] = k * c(3);
  M[0][1] = l;
  M[1][0] = m * c(3);
  M[1][1] = k;
  M[1][2] = l * c(2);
  M[2][1] = m * c(2);
  M[2][2] = k * c(-1);
  M[2][3] = l * c(3);
  M[3][2] = m;
  M[3][3] = k * c(-3);
  return M;
}

Matrix4 symmetric_cube_action(bool nu_is_minus_kappa) {
  Polynomial y = var("y"), z = var("z");
  Polynomial nu = nu_is_minus_kappa ? var("kappa") * Coefficient(-1) : var("nu");
  Polynomial dy = var("kappa") * y + var("lambda") * z;
  Polynomial dz = var("mu") * y + nu * z;
  const int binom[4] = {1, 3, 3, 1};
  Matrix4 M;
  for (int i = 0; i < 4; ++i) {
    int a = 3 - i, b = i;
    Polynomial d;
    if (a > 0) d += power(y, a - 1) * power(z, b) * dy * Coefficient(a);
    if (b > 0) d += power(y, a) * power(z, b - 1) * dz * Coefficient(b);
    d *= Coefficient(binom[i]);
    for (const auto& [mono, coeff] : d.terms()) {
      int zs = 0;
      Monomial rest;
      for (const auto& v : mono) {
        if (v == "z") ++zs;
        else if (v != "y") rest.push_back(v);
      }
      M[static_cast<std::size_t>(i)][static_cast<std::size_t>(zs)].add_term(rest, coeff * Coefficient(R(1, binom[zs])));
    }
  }
  return M;
}

// ---------------------------------------------------------------------------

Expr SpinorEquation::residual() const {
  Expr r = lhs - rhs;
  return trace_free ? contact_spinor::trace_free(r, "A", "B") : r;
}

std::vector<SpinorEquation> twelve_equations() {
  auto eq = [](std::string name, const std::string& l, const std::string& r, bool tf = false) {
    return SpinorEquation{std::move(name), p(l), r == "0" ? Expr() : p(r), tf};
  };
  return {
      eq("nabla o", "nabla^{A} o_{A}", "3 kappa^{A} * o_{A} - sqrt3 * mu^{A} * iota_{A}"),
      eq("nabla iota", "nabla^{A} iota_{A}", "-1 * sqrt3 * lambda^{A} * o_{A} + kappa^{A} * iota_{A}"),
      eq("Pi o", "Pi_{A} * o^{A}", "-2 lambda^{A} * iota_{A}"),
      eq("Pi iota", "Pi_{A} * iota^{A}", "0"),
      eq("bnabla o tf", "bnabla^{B} o_{A}", "-1 * sqrt3 * bmu^{B} * iota_{A} + 3 bkappa^{B} * o_{A}", true),
      eq("bnabla iota tf", "bnabla^{B} iota_{A}",
         "-2 mu_{A} * o^{B} - sqrt3 * blambda^{B} * o_{A} + bkappa^{B} * iota_{A}", true),
      eq("nabla o tf", "nabla_{A} o^{B}",
         "-1 * kappa_{A} * o^{B} - sqrt3 * mu_{A} * iota^{B} - 2 blambda^{B} * iota_{A}", true),
      eq("nabla iota tf", "nabla_{A} iota^{B}", "-1 * sqrt3 * lambda_{A} * o^{B} - 3 kappa_{A} * iota^{B}", true),
      eq("bnabla o", "bnabla_{A} o^{A}", "-1 * bkappa_{A} * o^{A} - sqrt3 * bmu_{A} * iota^{A}"),
      eq("bnabla iota", "bnabla_{A} iota^{A}", "-1 * sqrt3 * blambda_{A} * o^{A} - 3 bkappa_{A} * iota^{A}"),
      eq("Sigma iota", "Sigma^{A} * iota_{A}", "2 bmu_{A} * o^{A}"),
      eq("Sigma o", "Sigma^{A} * o_{A}", "0"),
  };
}

namespace {

const char* kScalars[4] = {"x", "y", "z", "w"};

// (nabla_d v)_i = nabla_d v_i + sum_j M_ij v_j, with the E-part forms for
// nabla and the E-parts of the barred forms for bnabla.
Expr covariant(DerivOp op, const Index& d, int i) {
  static const Matrix4 M = induced_matrix();
  Expr out = Expr::factor(Factor::derivative(op, {d}, kScalars[i], {}));
  std::string prefix = op == DerivOp::Nabla ? "" : "b";
  for (int j = 0; j < 4; ++j)
    for (const auto& [mono, coeff] : M[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].terms())
      out += f1(prefix + mono.at(0), d) * Expr::factor(Factor::sym(kScalars[j], {}), coeff);
  return out;
}

Expr scalar(int i) { return Expr::factor(Factor::sym(kScalars[i], {})); }

bool differentiates_scalars(const Expr& e) {
  for (const auto& t : e.terms())
    for (const auto& f : t.factors)
      if (f.kind == FactorKind::Derivative)
        for (const char* s : kScalars)
          if (f.symbol == s) return true;
  return false;
}

}  // namespace

std::vector<SpinorEquation> derive_equations(const Coefficient& c) {
  const auto& t = table();
  // induced operator: iso applied to the covariant derivative of (x, y, z, w)
  auto cov = [](DerivOp op, Variance v, int i) { return covariant(op, Index{"D", v}, i); };
  IsoImage firstE = iso_map(cov(DerivOp::Nabla, Variance::Lower, 0), cov(DerivOp::Nabla, Variance::Lower, 1), {}, {}, c);
  Expr i1 = firstE.lower * Expr::factor(Factor::eps_upper("D", "A"));
  IsoImage midE = iso_map({}, {}, cov(DerivOp::Nabla, Variance::Lower, 2), cov(DerivOp::Nabla, Variance::Lower, 3), c);
  IsoImage midF =
      iso_map(cov(DerivOp::BarNabla, Variance::Upper, 0), cov(DerivOp::BarNabla, Variance::Upper, 1), {}, {}, c);
  Expr i2 = rename_free(midE.upper, {{"D", "A"}, {"A", "B"}}) - rename_free(midF.lower, {{"D", "B"}});
  IsoImage lastF =
      iso_map({}, {}, cov(DerivOp::BarNabla, Variance::Lower, 2), cov(DerivOp::BarNabla, Variance::Lower, 3), c);
  Expr i3 = rename_free(lastF.upper, {{"D", "A"}});

  // Rumin operator on the image, frame differentiated
  IsoImage img = iso_map(scalar(0), scalar(1), scalar(2), scalar(3), c);
  Expr r1 = apply_derivative(DerivOp::Nabla, up("A"), img.lower) * Coefficient(-1) + f1("Pi", lo("A")) * img.upper;
  Expr r2 = apply_derivative(DerivOp::Nabla, lo("A"), rename_free(img.upper, {{"A", "B"}})) -
            apply_derivative(DerivOp::BarNabla, up("B"), img.lower);
  Expr r3 = apply_derivative(DerivOp::BarNabla, lo("A"), img.upper) + f1("Sigma", up("A")) * img.lower;

  std::array<Expr, 3> diff = {canonicalize(i1 - r1, t), canonicalize(trace_free(i2 - r2, "A", "B"), t),
                              canonicalize(i3 - r3, t)};
  for (const auto& d : diff)
    if (differentiates_scalars(d)) throw std::logic_error("induced and Rumin operators differ at first order");

  std::vector<SpinorEquation> out;
  auto add = [&](const std::string& name, int slot, int s, bool tf) {
    out.push_back({name, canonicalize(coefficient_of(diff[static_cast<std::size_t>(slot)], kScalars[s]), t), {}, tf});
  };
  auto display = twelve_equations();
  // slot / scalar of each displayed equation
  const int where[12][2] = {{0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 0}, {1, 1}, {1, 2}, {1, 3}, {2, 2}, {2, 3}, {2, 1}, {2, 0}};
  for (int i = 0; i < 12; ++i) add(display[static_cast<std::size_t>(i)].name, where[i][0], where[i][1], display[static_cast<std::size_t>(i)].trace_free);
  return out;
}

std::vector<ScalarEquation> scalar_equations(const std::vector<SpinorEquation>& eqs) {
  std::vector<ScalarEquation> out;
  const std::pair<const char*, const char*> pairings[3] = {
      {"o^{A} * o_{B}", "oo"}, {"o^{A} * iota_{B} + iota^{A} * o_{B}", "oi+io"}, {"iota^{A} * iota_{B}", "ii"}};
  for (const auto& e : eqs) {
    Expr r = e.residual();
    if (!e.trace_free) {
      out.push_back({e.name, r});
      continue;
    }
    for (const auto& [pair, tag] : pairings) out.push_back({e.name + " [" + tag + "]", r * p(pair)});
  }
  return out;
}

const std::vector<std::string>& unknown_names() {
  static const std::vector<std::string> names = {"kappaO",  "kappaI",  "lambdaO",  "lambdaI",  "muO",  "muI",
                                                 "bkappaO", "bkappaI", "blambdaO", "blambdaI", "bmuO", "bmuI"};
  return names;
}

namespace {

Polynomial scalar_components(const Expr& e) {
  ComponentTensor c = components(e, table());
  if (c.rank() != 0) throw StructuralError("expected a scalar expression");
  return c.cell(0);
}

}  // namespace

SystemTemplate assemble_system(const std::vector<SpinorEquation>& eqs) {
  SystemTemplate s;
  std::set<std::string> unknowns(unknown_names().begin(), unknown_names().end());
  for (const auto& se : scalar_equations(eqs)) {
    Expr r = se.residual;
    // form_A = -formI o_A + formO iota_A, so that form^A o_A = formO and form^A iota_A = formI
    for (const char* f : {"kappa", "lambda", "mu", "bkappa", "blambda", "bmu"}) {
      std::string n = f;
      r = substitute(r, n, {"P"}, p("-1 * " + n + "I * o_{P} + " + n + "O * iota_{P}"));
    }
    s.row_names.push_back(se.name);
    std::vector<Polynomial> row;
    for (const auto& u : unknown_names()) row.push_back(scalar_components(coefficient_of(r, u)) * Coefficient(-1));
    s.matrix.push_back(std::move(row));
    s.rhs.push_back(scalar_components(drop_terms_with(r, unknowns)));
  }
  return s;
}

const SystemTemplate& standard_system() {
  static const SystemTemplate s = assemble_system(twelve_equations());
  return s;
}

// ---------------------------------------------------------------------------

std::vector<Expr> psi() {
  return {
      p("Pi_{A} * iota^{A}"),
      p("Pi_{A} * o^{A} - 2/3 sqrt3 * iota^{A} * nabla_{A} iota^{B} * iota_{B}"),
      p("iota_{A} * bnabla^{A} o_{B} * o^{B} + o_{A} * bnabla^{A} o_{B} * iota^{B} - bnabla_{A} o^{A}"
        " + 2 o_{A} * bnabla^{A} iota_{B} * o^{B}"),
      p("iota_{A} * bnabla^{A} iota_{B} * o^{B} + o_{A} * bnabla^{A} iota_{B} * iota^{B} - 1/3 bnabla_{A} iota^{A}"
        " + 2/3 iota_{A} * bnabla^{A} o_{B} * iota^{B} + 2/3 sqrt3 * o^{A} * nabla_{A} o^{B} * o_{B}"),
      p("o^{A} * nabla_{A} o^{B} * iota_{B} + iota^{A} * nabla_{A} o^{B} * o_{B} - 1/3 nabla^{A} o_{A}"
        " + 2/3 o^{A} * nabla_{A} iota^{B} * o_{B} + 2/3 sqrt3 * iota_{A} * bnabla^{A} iota_{B} * iota^{B}"),
      p("o^{A} * nabla_{A} iota^{B} * iota_{B} + iota^{A} * nabla_{A} iota^{B} * o_{B} - nabla^{A} iota_{A}"
        " + 2 iota^{A} * nabla_{A} o^{B} * iota_{B}"),
      p("Sigma^{A} * iota_{A} + 2/3 sqrt3 * o_{A} * bnabla^{A} o_{B} * o^{B}"),
      p("Sigma^{A} * o_{A}"),
  };
}

Expr psi6_truncated() { return p("Sigma^{A} * iota_{A}"); }

const std::vector<Polynomial>& psi_polynomials() {
  static const std::vector<Polynomial> polys = [] {
    std::vector<Polynomial> out;
    for (const auto& e : psi()) out.push_back(scalar_components(e));
    return out;
  }();
  return polys;
}

Polynomial reduce_normalized_frame(const Polynomial& poly) {
  const auto fv = frame_variables();
  const std::string &o0 = fv[0], &o1 = fv[1], &i0 = fv[2], &i1 = fv[3];
  int degree = 0;
  for (const auto& [mono, c] : poly.terms())
    degree = std::max(degree, static_cast<int>(std::count(mono.begin(), mono.end(), i0)));
  Polynomial numerator = Polynomial::variable(o0) * Polynomial::variable(i1) - Polynomial(Coefficient(1));
  Polynomial out;
  for (const auto& [mono, c] : poly.terms()) {
    Monomial rest;
    int k = 0;
    for (const auto& v : mono) {
      if (v == i0) ++k;
      else rest.push_back(v);
    }
    Polynomial term;
    term.add_term(rest, c);
    for (int i = 0; i < k; ++i) term = term * numerator;
    for (int i = k; i < degree; ++i) term = term * Polynomial::variable(o1);
    out += term;
  }
  return out;
}

bool vanishes_on_normalized_frame(const Expr& scalar) {
  return reduce_normalized_frame(scalar_components(scalar)).is_zero();
}

std::vector<bool> psi_invariance(const std::vector<Expr>& psis, const SymbolTable& t, const ScaleContext& ctx) {
  std::vector<bool> out;
  for (const auto& e : psis) out.push_back(vanishes_on_normalized_frame(hat_rewrite(hat(e), t, ctx) - e));
  return out;
}

std::vector<bool> psi_invariance(const std::vector<Expr>& psis, const ScaleContext& ctx) {
  return psi_invariance(psis, table(), ctx);
}

bool psi_scale_invariance(const ScaleContext& ctx) {
  for (bool b : psi_invariance(psi(), ctx))
    if (!b) return false;
  return true;
}

std::vector<std::string> frame_variables() {
  const auto& t = table();
  std::vector<std::string> out;
  for (const char* s : {"o", "iota"})
    for (int a = 0; a < 2; ++a) out.push_back(component_key(t.at(s), {a}));
  return out;
}

std::vector<std::string> jet_variables() {
  const auto& t = table();
  std::vector<std::string> out;
  for (DerivOp op : {DerivOp::Nabla, DerivOp::BarNabla})
    for (const char* s : {"o", "iota"})
      for (int d = 0; d < 2; ++d)
        for (int a = 0; a < 2; ++a) out.push_back(derivative_key(op, {d}, component_key(t.at(s), {a})));
  for (const char* s : {"Pi", "Sigma"})
    for (int a = 0; a < 2; ++a) out.push_back(component_key(t.at(s), {a}));
  return out;
}

}  // namespace contact_spinor
