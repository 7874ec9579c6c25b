#include <doctest.h>

#include "contact_spinor/bundle.hpp"

using namespace contact_spinor;
using R = Rational;

TEST_CASE("Legendrean label conventions") {
  auto s = dictionary(Notation::Leg, "S");
  CHECK(s.density_a() == R(0));
  CHECK(s.density_b() == R(0));
  CHECK(s.str() == "(-1|1|-1)");
  auto l = dictionary(Notation::Leg, "L");
  CHECK(exterior_square(s).summands.size() == 1);
  CHECK(exterior_square(s).summands[0].label == l);
  CHECK(dictionary(Notation::Leg, "Lambda0[2,-3]") == BundleLabel::leg(R(2), 0, R(-3)));
  // E* and F* are the duals of E and F
  CHECK(dictionary(Notation::Leg, "E").dual() == dictionary(Notation::Leg, "E*"));
  CHECK(dictionary(Notation::Leg, "F").dual() == dictionary(Notation::Leg, "F*"));
}

TEST_CASE("G2 label conventions") {
  auto s = dictionary(Notation::G2, "S");
  auto d = tensor_decompose(s, s);
  REQUIRE(d.summands.size() == 2);
  CHECK(d.summands[0].label == BundleLabel::g2(2, R(0)));
  CHECK(d.summands[1].label == BundleLabel::g2(0, R(1)));
  CHECK(s.dual() == BundleLabel::g2(1, R(-1)));
  CHECK(dictionary(Notation::G2, "H").rank() == 4);
  CHECK_THROWS_AS(dictionary(Notation::G2, "E"), UsageError);
}

TEST_CASE("decompositions preserve rank") {
  for (int j = 0; j <= 5; ++j) {
    for (int k = 0; k <= 5; ++k) {
      auto a = BundleLabel::leg(R(j - 3), j, R(1, 2));
      auto b = BundleLabel::leg(R(-1), k, R(k));
      CHECK(tensor_decompose(a, b).total_rank() == (j + 1) * (k + 1));
      auto g = BundleLabel::g2(j, R(-j));
      CHECK(tensor_decompose(g, BundleLabel::g2(k, R(2))).total_rank() == (j + 1) * (k + 1));
    }
    auto g = BundleLabel::g2(j, R(1, 3));
    int n = j + 1;
    CHECK(exterior_square(g).total_rank() == n * (n - 1) / 2);
    CHECK(symmetric_square(g).total_rank() == n * (n + 1) / 2);
    CHECK(g.dual().dual() == g);
    auto l = BundleLabel::leg(R(2), j, R(-5));
    CHECK(l.dual().dual() == l);
  }
}

TEST_CASE("mixed notation is rejected") {
  CHECK_THROWS_AS(tensor_decompose(BundleLabel::g2(1, R(0)), BundleLabel::leg(R(0), 1, R(0))), UsageError);
}
