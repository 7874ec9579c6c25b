#include <doctest.h>

#include <random>

#include "contact_spinor/expr.hpp"

using namespace contact_spinor;

namespace {

SymbolTable table() {
  SymbolTable t;
  for (const char* n : {"phi", "psi", "chi", "Y", "X"}) t.declare({n, 1, {}, std::nullopt});
  t.declare({"mu", 3, {{0, 1, 2}}, std::nullopt});
  t.declare({"s", 2, {{0, 1}}, std::nullopt});
  t.declare({"w", 2, {}, std::nullopt});
  t.declare({"f", 0, {}, std::nullopt});
  return t;
}

Expr S(const std::string& n, std::vector<Index> idx) { return Expr::factor(Factor::sym(n, std::move(idx))); }

}  // namespace

TEST_CASE("eps eps contracts to delta") {
  auto t = table();
  Expr e = Expr::factor(Factor::eps_lower("A", "B")) * Expr::factor(Factor::eps_upper("A", "C"));
  Expr c = canonicalize(e, t);
  REQUIRE(c.terms().size() == 1);
  CHECK(c.terms()[0].coeff == Coefficient(1));
  CHECK(c.terms()[0].factors == std::vector<Factor>{Factor::delta("B", "C")});
  Expr full = Expr::factor(Factor::eps_lower("A", "B")) * Expr::factor(Factor::eps_upper("A", "B"));
  CHECK(canonicalize(full, t) == Expr::constant(Coefficient(2)));
  CHECK(canonicalize(Expr::factor(Factor::delta("A", "A")), t) == Expr::constant(Coefficient(2)));
}

TEST_CASE("Schouten identity canonicalizes to zero") {
  auto t = table();
  Expr e = S("Y", {lo("A")}) * S("chi", {up("B")}) - S("Y", {up("B")}) * S("chi", {lo("A")}) -
           Expr::factor(Factor::delta("A", "B")) * S("Y", {lo("C")}) * S("chi", {up("C")});
  CHECK(canonicalize(e, t).empty());
  CHECK(is_zero(e, t));
}

TEST_CASE("component table of eps_{AB} psi^A phi^B") {
  auto t = table();
  Expr e = Expr::factor(Factor::eps_lower("A", "B")) * S("psi", {up("A")}) * S("phi", {up("B")});
  auto ct = components(e, t);
  REQUIRE(ct.size() == 1);
  Polynomial want;
  want.add_term({"psi[0]", "phi[1]"}, Coefficient(1));
  want.add_term({"psi[1]", "phi[0]"}, Coefficient(-1));
  CHECK(ct.cell(0) == want);
}

TEST_CASE("raising and lowering conventions") {
  auto t = table();
  // phi^A = eps^{AB} phi_B ; phi_A = phi^B eps_{BA}
  CHECK(canonicalize(Expr::factor(Factor::eps_upper("A", "B")) * S("phi", {lo("B")}), t) == S("phi", {up("A")}));
  CHECK(canonicalize(S("phi", {up("B")}) * Expr::factor(Factor::eps_lower("B", "A")), t) == S("phi", {lo("A")}));
  auto up0 = components(S("phi", {up("A")}), t);
  CHECK(up0.cell(0) == Polynomial::variable("phi[1]"));
  CHECK(up0.cell(1) == -Polynomial::variable("phi[0]"));
  // seesaw
  CHECK(equal(S("X", {lo("A")}) * S("Y", {up("A")}), -(S("X", {up("A")}) * S("Y", {lo("A")})), t));
  // symmetric spinor contracted with eps vanishes
  CHECK(is_zero(S("s", {lo("A"), lo("B")}) * Expr::factor(Factor::eps_upper("A", "B")), t));
}

TEST_CASE("skew part of a symmetric symbol is zero") {
  auto t = table();
  CHECK(canonicalize(antisymmetrize(S("s", {lo("A"), lo("B")}), {"A", "B"}), t).empty());
  Expr w = S("w", {lo("A"), lo("B")});
  // w_{[AB]} = 1/2 eps_{AB} w_C^C
  Expr trace = Expr::factor(Factor::eps_lower("A", "B")) * S("w", {lo("C"), up("C")}) * Coefficient(Rational(1, 2));
  CHECK(equal(antisymmetrize(w, {"A", "B"}), trace, t));
}

TEST_CASE("symmetrization matches brute-force averaging of components") {
  auto t = table();
  Expr e = S("mu", {lo("A"), lo("B"), up("E")}) * Expr::factor(Factor::delta("C", "G"));
  auto raw = components(e, t);
  auto sym = components(symmetrize(symmetrize(e, {"A", "B", "C"}), {"E", "G"}), t);
  REQUIRE(raw.free() == sym.free());
  // free order A B C E G -> bits 0..4
  std::vector<std::vector<int>> perms3 = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (std::size_t m = 0; m < 32; ++m) {
    Polynomial avg;
    for (const auto& p : perms3) {
      for (int swap = 0; swap < 2; ++swap) {
        std::size_t src = 0;
        for (int i = 0; i < 3; ++i) src |= ((m >> p[static_cast<std::size_t>(i)]) & 1U) << i;
        std::size_t e0 = (m >> 3) & 1U, g0 = (m >> 4) & 1U;
        if (swap) std::swap(e0, g0);
        src |= e0 << 3 | g0 << 4;
        avg += raw.cell(src);
      }
    }
    avg *= Coefficient(Rational(1, 12));
    CHECK(avg == sym.cell(m));
  }
}

TEST_CASE("substitution lowers upper occurrences through eps") {
  auto t = table();
  // phi -> s_{A B} psi^B  (template slot A)
  Expr tmpl = S("s", {lo("A"), lo("B")}) * S("psi", {up("B")});
  Expr e = S("phi", {up("C")}) * S("chi", {lo("C")});
  Expr r = substitute(e, "phi", {"A"}, tmpl);
  Expr want = S("s", {up("C"), lo("B")}) * S("psi", {up("B")}) * S("chi", {lo("C")});
  CHECK(equal(r, want, t));
}

TEST_CASE("structural errors") {
  auto t = table();
  CHECK_THROWS_AS(validate(S("phi", {lo("A")}) * S("psi", {lo("A")}), t), StructuralError);
  CHECK_THROWS_AS(validate(S("phi", {lo("A")}) + S("psi", {lo("B")}), t), StructuralError);
  CHECK_THROWS_AS(validate(S("phi", {lo("A"), lo("B")}), t), StructuralError);
  CHECK_THROWS_AS(validate(S("nope", {}), t), DeclarationError);
  CHECK_THROWS_AS(equal(S("phi", {lo("A")}), S("phi", {lo("B")}), t), StructuralError);
  CHECK(equal(Expr::zero(), S("phi", {lo("A")}) - S("phi", {lo("A")}), t));
  CHECK_THROWS_AS(t.declare({"phi", 2, {}, std::nullopt}), DeclarationError);
}

TEST_CASE("products rename clashing dummies") {
  auto t = table();
  Expr a = S("X", {lo("C")}) * S("Y", {up("C")});
  Expr sq = a * a;
  CHECK_NOTHROW(validate(sq, t));
  auto ca = components(a, t).cell(0);
  CHECK(components(sq, t).cell(0) == ca * ca);
}

TEST_CASE("canonicalize preserves components on random products") {
  auto t = table();
  std::mt19937 rng(12345);
  const std::vector<std::string> vec = {"phi", "psi", "chi", "Y", "X"};
  for (int trial = 0; trial < 200; ++trial) {
    // random contraction network with two free indices P (lower) and Q (upper)
    std::vector<Index> slots = {lo("P"), up("Q")};
    int pairs = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < pairs; ++i) {
      std::string n = "d" + std::to_string(i);
      slots.push_back(lo(n));
      slots.push_back(up(n));
    }
    std::shuffle(slots.begin(), slots.end(), rng);
    Expr e = Expr::constant(Coefficient(Rational(static_cast<std::int64_t>(rng() % 7) - 3, 2)));
    std::size_t i = 0;
    while (i < slots.size()) {
      int kind = static_cast<int>(rng() % 5);
      if (kind <= 1 || i + 1 >= slots.size()) {
        e = e * S(vec[rng() % vec.size()], {slots[i]});
        i += 1;
        continue;
      }
      Index a = slots[i], b = slots[i + 1];
      if (kind == 2 && a.variance == b.variance) {
        e = e * Expr::factor(a.variance == Variance::Lower ? Factor::eps_lower(a.name, b.name)
                                                           : Factor::eps_upper(a.name, b.name));
      } else if (kind == 3 && a.variance != b.variance) {
        if (a.variance == Variance::Upper) std::swap(a, b);
        e = e * Expr::factor(Factor::delta(a.name, b.name));
      } else {
        e = e * S(kind == 4 ? "s" : "w", {a, b});
      }
      i += 2;
    }
    Expr sum = e + e * Coefficient(Coefficient::sqrt3());
    Expr c = canonicalize(sum, t);
    CHECK(equal(c, sum, t));
    CHECK(canonicalize(c, t) == c);
  }
}
