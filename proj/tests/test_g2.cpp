#include <doctest.h>

#include <chrono>

#include "contact_spinor/g2.hpp"
#include "contact_spinor/parser.hpp"
#include "contact_spinor/tensor_ops.hpp"

using namespace contact_spinor;
using R = Rational;

namespace {

Coefficient q(long n, long d = 1) { return Coefficient(R(n, d)); }

ComponentTensor generic_hom(const std::string& name = "X") {
  return symbolic_tensor(name, hom_indices(), {{0, 1, 2, 3}, {4, 5, 6}});
}

GammaSplit generic_split() {
  GammaSplit g;
  g.lambda = symbolic_tensor("l", {lo("A"), lo("B"), lo("C"), up("D"), up("E")}, {{0, 1, 2, 3, 4}});
  g.mu = symbolic_tensor("m", {lo("A"), lo("B"), lo("C")}, {{0, 1, 2}});
  g.nu = symbolic_tensor("n", {lo("A")}, {});
  return g;
}

}  // namespace

TEST_CASE("tensor ops: raise then lower is the identity, delta traces to 2") {
  auto phi = symbolic_tensor("p", {lo("A"), lo("B")}, {});
  CHECK(same_tensor(lower(raise(phi, "A", "X"), "X", "A"), phi));
  auto d = delta_tensor("A", "B");
  auto tr = contract(d, "A", "B");
  CHECK(tr.rank() == 0);
  CHECK(tr.cell(0) == Polynomial(Coefficient(2)));
  // phi^0 = phi_1 and phi^1 = -phi_0
  auto v = symbolic_tensor("v", {lo("A")}, {});
  auto vu = raise(v, "A", "A");
  CHECK(vu.cell(0) == v.cell(1));
  CHECK(vu.cell(1) == v.cell(0) * Coefficient(-1));
}

TEST_CASE("tensor ops agree with the expression oracle") {
  SymbolTable t;
  t.declare({"p", 2, {}, std::nullopt});
  t.declare({"s", 3, {{0, 1, 2}}, std::nullopt});
  Expr e = parse_expr("eps^{A C} * p_{C B} * s_{A D E}", t);
  auto direct = components(e, t);
  auto p = symbolic_tensor("p", {lo("C"), lo("B")}, {});
  auto s = symbolic_tensor("s", {lo("A"), lo("D"), lo("E")}, {{0, 1, 2}});
  auto viaops = contract(outer(raise(p, "C", "Z"), s), "A", "Z");
  CHECK(same_tensor(viaops, direct));
  Expr sy = parse_expr("sym(B D){ p_{B D} }", t);
  CHECK(same_tensor(symmetrize(symbolic_tensor("p", {lo("B"), lo("D")}, {}), {"B", "D"}), components(sy, t)));
}

TEST_CASE("Gamma part coefficients") {
  auto rows = coefficient_table();
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) {
    CAPTURE(to_string(r.part));
    REQUIRE(r.sym.has_value());
    REQUIRE(r.trace.has_value());
    REQUIRE(r.correction.has_value());
    switch (r.part) {
      case GammaPart::Lambda:
        CHECK(*r.sym == q(1));
        CHECK(r.trace->is_zero());
        CHECK(*r.correction == q(2));
        break;
      case GammaPart::Mu:
        CHECK(*r.sym == q(1, 6));
        CHECK(*r.trace == q(5, 6));
        CHECK(*r.correction == q(-1, 2));
        break;
      case GammaPart::Nu:
        CHECK(*r.sym == q(-1, 3));
        CHECK(*r.trace == q(4, 3));
        CHECK(*r.correction == q(-2));
        break;
    }
  }
}

TEST_CASE("nu part of the correction equals -(1/3) nu_{(A} omega_{BCD)} times 6") {
  // 2 * (-1/3) nu_(A omega_BCD) - (4/3) nu_(A omega_BCD) = -2 nu_(A omega_BCD)
  auto t = g2_symbols();
  Expr lhs = induced_correction(GammaPart::Nu);
  Expr rhs = parse_expr("-2 sym(A B C D){ nu_{A} * omega_{B C D} }", t);
  CHECK(equal(lhs, rhs, t));
}

TEST_CASE("Hom projectors") {
  auto x = generic_hom();
  ComponentTensor total(x.free());
  std::map<int, ComponentTensor> ps;
  for (int s : {7, 5, 3, 1}) {
    ps[s] = project(s, x);
    CAPTURE(s);
    CHECK(same_tensor(project(s, ps[s]), ps[s]));
    for (int r : {7, 5, 3, 1})
      if (r != s) CHECK(hom_extract(r, ps[s]).is_zero());
    total += reorder(ps[s], x.free());
    CHECK_FALSE(ps[s].is_zero());
  }
  CHECK(same_tensor(total, x));
  CHECK(same_tensor(assemble(decompose(x)), x));
}

TEST_CASE("Hom projector constants are nonzero and rational") {
  for (int s : {7, 5, 3, 1}) {
    Coefficient c = projector_constant(s);
    CHECK_FALSE(c.is_zero());
    CHECK(c.sqrt3_part().is_zero());
  }
  CHECK_THROWS_AS(projector_constant(4), UsageError);
}

TEST_CASE("correction of a pure part lands in its summand") {
  auto full = generic_split();
  GammaSplit g = zero_split();
  g.lambda = full.lambda;
  auto d = decompose(correction_hom(gamma_tensor(g)));
  CHECK(d.t7.is_zero());
  CHECK(d.t3.is_zero());
  CHECK(d.t1.is_zero());
  CHECK(same_tensor(d.t5, rename(full.lambda, {{"D", "E"}, {"E", "F"}}) * q(2)));

  g = zero_split();
  g.nu = full.nu;
  d = decompose(correction_hom(gamma_tensor(g)));
  CHECK(d.t7.is_zero());
  CHECK(d.t5.is_zero());
  CHECK(d.t3.is_zero());
  CHECK(same_tensor(d.t1, full.nu * q(-2)));

  g = zero_split();
  g.mu = full.mu;
  d = decompose(correction_hom(gamma_tensor(g)));
  CHECK(d.t7.is_zero());
  CHECK(d.t5.is_zero());
  CHECK(d.t1.is_zero());
  CHECK(same_tensor(d.t3, raise(full.mu, "C", "E") * q(-1, 2)));
}

TEST_CASE("gamma_tensor matches the expression form of each part") {
  auto t = g2_symbols();
  auto order = std::vector<Index>{lo("A"), lo("B"), lo("C"), up("D"), up("E")};
  GammaSplit g = zero_split();
  g.mu = symbolic_tensor("mu", {lo("A"), lo("B"), lo("C")}, {{0, 1, 2}});
  // The oracle keys symmetric components as name[sorted values]; match that.
  CHECK(same_tensor(gamma_tensor(g), components_in_order(gamma_expr(GammaPart::Mu), t, order)));
  g = zero_split();
  g.nu = symbolic_tensor("nu", {lo("A")}, {});
  CHECK(same_tensor(gamma_tensor(g), components_in_order(gamma_expr(GammaPart::Nu), t, order)));
}

TEST_CASE("normalization removes the 5, 3 and 1 parts and keeps the harmonic part") {
  auto x = generic_hom();
  auto t = decompose(x);
  GammaSplit g = normalize_connection(t);
  auto fixed = x + reorder(correction_hom(gamma_tensor(g)), x.free());
  auto td = decompose(fixed);
  CHECK(td.t5.is_zero());
  CHECK(td.t3.is_zero());
  CHECK(td.t1.is_zero());
  CHECK(same_tensor(td.t7, harmonic_torsion(t)));
}

TEST_CASE("harmonic torsion is unchanged by every connection shift") {
  auto x = generic_hom();
  auto shifted = x + reorder(correction_hom(gamma_tensor(generic_split())), x.free());
  CHECK(same_tensor(harmonic_torsion(decompose(shifted)), harmonic_torsion(decompose(x))));
  CHECK_FALSE(harmonic_torsion(decompose(x)).is_zero());
}

TEST_CASE("mutation: flipping the nu sign leaves a 1 part behind") {
  auto x = generic_hom();
  GammaSplit g = normalize_connection(decompose(x));
  g.nu *= q(-1);
  auto td = decompose(x + reorder(correction_hom(gamma_tensor(g)), x.free()));
  CHECK(td.t5.is_zero());
  CHECK(td.t3.is_zero());
  CHECK_FALSE(td.t1.is_zero());
}
