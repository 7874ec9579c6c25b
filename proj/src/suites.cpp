#include "contact_spinor/suites.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "contact_spinor/g2.hpp"
#include "contact_spinor/legendre.hpp"
#include "contact_spinor/numeric.hpp"
#include "contact_spinor/parser.hpp"
#include "contact_spinor/saucer.hpp"
#include "contact_spinor/scale.hpp"
#include "contact_spinor/tensor_ops.hpp"

namespace contact_spinor {

namespace {

using R = Rational;

class Recorder {
 public:
  explicit Recorder(Suite s) : suite_(to_string(s)) {}
  void add(std::string name, bool ok, std::string detail = {}) {
    out_.push_back({suite_, std::move(name), ok, std::move(detail)});
  }
  std::vector<CheckResult> take() { return std::move(out_); }

 private:
  std::string suite_;
  std::vector<CheckResult> out_;
};

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

std::string opt_str(const std::optional<Coefficient>& c) { return c ? c->str() : std::string("none"); }

void invariant_operators(Recorder& rec, Notation n) {
  for (const auto& c : standard_invariant_operators()) {
    if (c.ctx.geometry != n) continue;
    bool ok = verify_invariant(c.op, c.table, c.ctx);
    int caught = 0;
    for (R shift : {R(1, 3), R(-1, 3)}) {
      OperatorSpec m = c.op;
      m.source = m.source.shifted(shift, R(0));
      if (!verify_invariant(m, c.table, c.ctx)) ++caught;
    }
    rec.add("invariant " + c.op.name, ok && caught == 2,
            c.op.source.str() + " -> " + (c.op.target ? c.op.target->str() : "?") + ", weight shifts caught " +
                std::to_string(caught) + "/2");
  }
}

// ---------------------------------------------------------------------------

std::vector<CheckResult> conformal3d(const SuiteOptions&) {
  Recorder rec(Suite::Conformal3D);
  ScaleContext ctx;
  ctx.geometry = Notation::Conformal3D;
  SymbolTable t;
  declare_scale_symbols(t, ctx);

  t.declare({"phi", 1, {}, BundleLabel::conformal3d(1, R(0))});
  bool law = equal(hat_rewrite(parse_expr("hnabla_{A B} phi_{C}", t), t, ctx),
                   parse_expr("nabla_{A B} phi_{C} + Upsilon_{A B} * phi_{C} - sym(A B){ Upsilon_{C A} * phi_{B} }", t),
                   t);
  rec.add("spin connection law", law, "hnabla_{AB} phi_C = nabla phi + Upsilon_{AB} phi_C - Upsilon_{C(A} phi_{B)}");

  // Lambda^2 S = (0, 1): on sigma_{CD} = eps_{CD} rho the law reduces to weight one
  t.declare({"sigma", 2, {}, BundleLabel::conformal3d(2, R(0))});
  t.declare({"rho", 0, {}, BundleLabel::conformal3d(0, R(1))});
  Expr lhs = substitute(hat_rewrite(parse_expr("hnabla_{A B} sigma_{C D}", t), t, ctx), "sigma", {"P", "Q"},
                        parse_expr("eps_{P Q} * rho", t));
  Expr rhs = substitute(parse_expr("nabla_{A B} sigma_{C D} + Upsilon_{A B} * sigma_{C D}", t), "sigma", {"P", "Q"},
                        parse_expr("eps_{P Q} * rho", t));
  rec.add("skew weight-one law", equal(lhs, rhs, t), "hnabla_{AB} sigma_{CD} = nabla sigma + Upsilon_{AB} sigma_{CD}");

  // torsion-free: the skew part of nabla_{AB} omega_{CD} on one-forms is invariant
  t.declare_symmetric("omega", BundleLabel::conformal3d(2, R(-2)));
  Expr d = parse_expr("nabla_{A B} omega_{C D} - nabla_{C D} omega_{A B}", t);
  bool inv = is_invariant(d, t, ctx);
  SymbolTable bad = t;
  bad.redeclare({"omega", 2, {{0, 1}}, BundleLabel::conformal3d(2, R(-1))});
  rec.add("exterior derivative invariant", inv && !is_invariant(d, bad, ctx), "weight -1 mutation caught");

  invariant_operators(rec, Notation::Conformal3D);
  return rec.take();
}

std::vector<CheckResult> g2(const SuiteOptions&) {
  Recorder rec(Suite::G2);
  const std::vector<std::array<Coefficient, 3>> want = {
      {Coefficient(R(1)), Coefficient(R(0)), Coefficient(R(2))},
      {Coefficient(R(1, 6)), Coefficient(R(5, 6)), Coefficient(R(-1, 2))},
      {Coefficient(R(-1, 3)), Coefficient(R(4, 3)), Coefficient(R(-2))}};
  auto rows = coefficient_table();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    bool ok = i < want.size() && r.sym == want[i][0] && r.trace == want[i][1] && r.correction == want[i][2];
    rec.add("coefficients " + to_string(r.part), ok,
            "sym " + opt_str(r.sym) + "  trace " + opt_str(r.trace) + "  correction " + opt_str(r.correction));
  }

  auto x = symbolic_tensor("X", hom_indices(), {{0, 1, 2, 3}, {4, 5, 6}});
  ComponentTensor total(x.free());
  bool idem = true;
  for (int s : {7, 5, 3, 1}) {
    auto p = project(s, x);
    idem = idem && same_tensor(project(s, p), p);
    total += reorder(p, x.free());
  }
  rec.add("Hom decomposition", idem && same_tensor(total, x), "(7,-4)+(5,-3)+(3,-2)+(1,-1), projectors idempotent");

  auto td = decompose(x);
  GammaSplit g = normalize_connection(td);
  auto fixed = decompose(x + reorder(correction_hom(gamma_tensor(g)), x.free()));
  bool unique = fixed.t5.is_zero() && fixed.t3.is_zero() && fixed.t1.is_zero() &&
                same_tensor(fixed.t7, harmonic_torsion(td));
  rec.add("preferred partial connection", unique, "(5,-3), (3,-2), (1,-1) parts eliminated, (7,-4) part unchanged");

  invariant_operators(rec, Notation::G2);
  return rec.take();
}

std::vector<CheckResult> leg(const SuiteOptions& opt) {
  Recorder rec(Suite::Leg);
  ScaleContext ctx;
  SymbolTable t;
  declare_scale_symbols(t, ctx);
  t.declare({"phi", 1, {}, BundleLabel::leg(R(2, 3), 1, R(-5))});
  t.declare({"s", 0, {}, BundleLabel::leg(R(3), 0, R(-1, 2))});
  bool laws =
      equal(hat_rewrite(parse_expr("hnabla_{A} phi_{B}", t), t, ctx),
            parse_expr("nabla_{A} phi_{B} + 5/3 Upsilon_{A} * phi_{B} - Upsilon_{B} * phi_{A}", t), t) &&
      equal(hat_rewrite(parse_expr("hbnabla_{A} phi_{B}", t), t, ctx),
            parse_expr("bnabla_{A} phi_{B} - 4 bUpsilon_{A} * phi_{B} - bUpsilon_{B} * phi_{A}", t), t) &&
      equal(hat_rewrite(parse_expr("hnabla_{A} s", t), t, ctx), parse_expr("nabla_{A} s + 3 Upsilon_{A} * s", t), t) &&
      equal(hat_rewrite(parse_expr("hbnabla_{A} s", t), t, ctx),
            parse_expr("bnabla_{A} s - 1/2 bUpsilon_{A} * s", t), t);
  rec.add("transformation laws", laws, "(u+1) Upsilon_A phi_B - Upsilon_B phi_A, barred with (v+1); densities u, v");

  ScaleContext off;
  off.density_offset = R(-1);
  rec.add("eps consistency", epsilon_consistency(ctx) && !epsilon_consistency(off),
          "hnabla_A heps_{BC} = Omega nabla_A eps_{BC}");

  invariant_operators(rec, Notation::Leg);

  SymbolTable lt = leg_symbols();
  declare_scale_symbols(lt, ctx);
  lt.declare({"f", 0, {}, BundleLabel::leg(R(0), 0, R(0))});
  rec.add("first Rumin operator", is_invariant(parse_expr("nabla_{A} f", lt), lt, ctx) &&
                                      is_invariant(parse_expr("bnabla_{A} f", lt), lt, ctx),
          "d_perp f = (nabla_A f, bnabla_A f)");

  auto dp = rumin_dperp();
  bool dinv = is_invariant(dp.first, lt, ctx) && is_invariant(dp.middle, lt, ctx) && is_invariant(dp.last, lt, ctx);
  rec.add("d_perp invariant", dinv, "Lambda^1_H -> Lambda^2_Hperp with Pi, Sigma");

  std::size_t arrows = rumin_arrows().size();
  std::size_t nodes = 0;
  for (const auto& c : rumin_nodes()) nodes += c.size();
  rec.add("Rumin array", nodes == 12 && arrows == 20, std::to_string(nodes) + " nodes, " + std::to_string(arrows) + " arrows");

  // flat model
  std::mt19937_64 rng(opt.seed);
  auto pts = numeric::random_points(rng, static_cast<std::size_t>(opt.points));
  double worst = 0;
  bool flat = true;
  for (const auto& p : pts) {
    auto r = numeric::verify_flat_connection(p, {}, opt.tol);
    flat = flat && r.pass;
    worst = std::max({worst, r.scale_defect, r.torsion_defect, r.dperp_square});
  }
  numeric::ConnectionCoefficients bumped;
  bumped.c[0][1][0] = 0.1;
  auto br = numeric::verify_flat_connection(pts.front(), bumped, opt.tol);
  rec.add("distinguished connection (flat model)", flat && !br.pass,
          "max defect " + sci(worst) + ", perturbed slot defect " + sci(br.torsion_defect));

  // obstructions
  auto inv = psi_invariance(psi());
  int n_inv = static_cast<int>(std::count(inv.begin(), inv.end(), true));
  rec.add("psi scale invariance", n_inv == 8, std::to_string(n_inv) + "/8 invariant on normalized frames");

  double cpsi = 0;
  for (const auto& p : pts)
    for (double v : numeric::eval_psi_numeric(numeric::constant_frame(), p)) cpsi = std::max(cpsi, std::abs(v));
  rec.add("constant frame psi", cpsi <= 1e-8, "max |psi| " + sci(cpsi));

  auto frame = numeric::random_polynomial_frame(rng, 2, 0.4);
  auto reports = numeric::system_table(frame, pts);
  bool sys = true;
  double align = 0;
  for (const auto& r : reports) {
    sys = sys && r.rows == 20 && r.cols == 12 && r.rank == 12 && r.consistency_dim == 8;
    align = std::max(align, std::max(r.alignment_residual, r.psi_defect_residual));
  }
  rec.add("linear system", sys && align < opt.tol, "20x12, rank 12, consistency dim 8, alignment residual " + sci(align));

  double dpsi = 0;
  numeric::ScalarField om1 = [](const numeric::Point& p) { return std::exp(p[0]); };
  numeric::ScalarField om2 = [](const numeric::Point& p) { return 1 + 0.1 * std::sin(p[4]); };
  for (const auto& p : pts)
    dpsi = std::max({dpsi, numeric::rescale_psi_check(frame, om1, p), numeric::rescale_psi_check(frame, om2, p)});
  double mutated = numeric::rescale_psi_check(frame, om1, pts.front(), numeric::kDefaultStep, true);
  rec.add("numeric rescaling", dpsi < opt.tol && mutated > opt.tol,
          "max |dpsi| " + sci(dpsi) + ", mutated law " + sci(mutated));
  return rec.take();
}

}  // namespace

std::string to_string(Suite s) {
  switch (s) {
    case Suite::Conformal3D: return "3d";
    case Suite::G2: return "g2";
    case Suite::Leg: return "leg";
  }
  return "?";
}

std::vector<CheckResult> run_suite(Suite s, const SuiteOptions& opt) {
  switch (s) {
    case Suite::Conformal3D: return conformal3d(opt);
    case Suite::G2: return g2(opt);
    case Suite::Leg: return leg(opt);
  }
  return {};
}

}  // namespace contact_spinor
