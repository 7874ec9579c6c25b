#include <doctest.h>

#include <cmath>
#include <random>

#include "contact_spinor/numeric.hpp"

using namespace contact_spinor::numeric;

namespace {

const Point kP = {0.3, -0.7, 0.45, 1.1, -0.2};

FrameField sample_frame(unsigned seed) {
  std::mt19937_64 rng(seed);
  return random_polynomial_frame(rng, 2, 0.4);
}

}  // namespace

TEST_CASE("frame derivative against closed forms") {
  // g = x1 y2 t: e1 g = y2 t + y1 x1 y2, e2 g = y2 x1 y2, f1 g = 0, f2 g = x1 t
  ScalarField g = [](const Point& p) { return p[0] * p[3] * p[4]; };
  const auto& p = kP;
  CHECK(frame_derivative(g, Direction::E1, p) == doctest::Approx(p[3] * p[4] + p[2] * p[0] * p[3]).epsilon(1e-10));
  CHECK(frame_derivative(g, Direction::E2, p) == doctest::Approx(p[3] * p[0] * p[3]).epsilon(1e-10));
  CHECK(std::abs(frame_derivative(g, Direction::F1, p)) < 1e-10);
  CHECK(frame_derivative(g, Direction::F2, p) == doctest::Approx(p[0] * p[4]).epsilon(1e-10));
  ScalarField s = [](const Point& p) { return std::sin(p[4]) * std::exp(p[0]); };
  double want = std::exp(p[0]) * (std::sin(p[4]) + p[2] * std::cos(p[4]));
  CHECK(std::abs(frame_derivative(s, Direction::E1, p) - want) < 1e-9);
}

TEST_CASE("Darboux frame brackets") {
  auto b = bracket(Direction::E1, Direction::F1, kP);
  CHECK(std::abs(b[4] + 1) < 1e-9);  // [e1, f1] = -d/dt
  for (int i = 0; i < 4; ++i) CHECK(std::abs(b[i]) < 1e-12);
  auto c = bracket(Direction::E1, Direction::E2, kP);
  for (double v : c) CHECK(std::abs(v) < 1e-12);
  for (Direction d : kDirections) CHECK(std::abs(contact_form(kP, direction_vector(d, kP))) < 1e-15);
}

TEST_CASE("polynomial fields") {
  PolyField f({{2.0, {1, 0, 0, 2, 0}}, {-1.0, {0, 0, 0, 0, 3}}});
  CHECK(f(kP) == doctest::Approx(2 * 0.3 * 1.1 * 1.1 + 0.008));
  CHECK(f.partial(3)(kP) == doctest::Approx(4 * 0.3 * 1.1));
  CHECK(f.partial(4)(kP) == doctest::Approx(-3 * 0.04));
  PolyField g = PolyField::from_json(f.to_json());
  CHECK(g(kP) == doctest::Approx(f(kP)));
  CHECK((f * f)(kP) == doctest::Approx(f(kP) * f(kP)));
  CHECK_THROWS_AS(PolyField::from_json(nlohmann::json::parse(R"([{"c":1,"pow":[1,2]}])")), FrameError);
}

TEST_CASE("random frames are normalized and round-trip") {
  for (unsigned s : {1u, 2u, 3u}) {
    FrameField f = sample_frame(s);
    std::mt19937_64 rng(s + 100);
    for (const auto& p : random_points(rng, 10)) {
      double pair = f.o[0](p) * f.iota[1](p) - f.o[1](p) * f.iota[0](p);
      CHECK(std::abs(pair - 1) < 1e-12);
    }
    FrameField g = FrameField::from_json(f.to_json());
    CHECK(g.o[1](kP) == doctest::Approx(f.o[1](kP)));
  }
}

TEST_CASE("jets equal exact polynomial derivatives") {
  FrameField f = sample_frame(7);
  JetData d = frame_jets(f, kP);
  // nabla[0](o[1]) = e1(o_1) = d/dx1 + y1 d/dt
  double e1o1 = f.o[1].partial(0)(kP) + kP[2] * f.o[1].partial(4)(kP);
  CHECK(std::abs(d.jets[1] - e1o1) < 1e-8);
  // bnabla[1](iota[0]) = f2(iota_0)
  CHECK(std::abs(d.jets[8 + 4 + 2 + 0] - f.iota[0].partial(3)(kP)) < 1e-8);
  for (int i = 16; i < 20; ++i) CHECK(d.jets[i] == 0);
}

TEST_CASE("unnormalized frames are rejected") {
  FrameField f = constant_frame();
  f.iota[1] = PolyField::constant(1.5);
  CHECK_THROWS_AS(frame_jets(f, kP), FrameError);
  FrameField g = constant_frame();
  g.o[0] = PolyField::constant(1 + 1e-7);
  CHECK_THROWS_AS(frame_jets(g, kP), FrameError);
}

TEST_CASE("constant frame has vanishing obstructions") {
  auto psi = eval_psi_numeric(constant_frame(), kP);
  for (double v : psi) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("psi is robust to the step") {
  FrameField f = sample_frame(21);
  std::mt19937_64 rng(22);
  for (const auto& p : random_points(rng, 5, 0.8)) {
    auto a = eval_psi_numeric(f, p, 1e-4), b = eval_psi_numeric(f, p, 5e-5);
    for (int i = 0; i < 8; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-6);
  }
}

TEST_CASE("Richardson step converges at high order") {
  ScalarField g = [](const Point& p) { return std::exp(p[0]) * std::sin(p[4]); };
  double exact = std::exp(kP[0]) * (std::sin(kP[4]) + kP[2] * std::cos(kP[4]));
  double e1 = std::abs(frame_derivative(g, Direction::E1, kP, 4e-2) - exact);
  double e2 = std::abs(frame_derivative(g, Direction::E1, kP, 2e-2) - exact);
  CHECK(e1 / e2 >= 8);
  ScalarField t = [](const Point& p) { return p[4]; };
  CHECK(frame_derivative(t, Direction::E1, {0, 0, 1, 0, 0}) == doctest::Approx(1).epsilon(1e-14));
}

TEST_CASE("system diagnostics along a random frame") {
  FrameField f = sample_frame(42);
  std::mt19937_64 rng(9);
  for (const auto& p : random_points(rng, 20, 0.8)) {
    SystemReport r = analyze_system(frame_jets(f, p));
    CHECK(r.rows == 20);
    CHECK(r.rank == 12);
    CHECK(r.consistency_dim == 8);
    CHECK(r.alignment_residual < 1e-9);
    CHECK(r.psi_defect_residual < 1e-7);
    CHECK(r.transform_condition < 1e8);
    // the system is solvable exactly when every psi vanishes
    double psi_max = 0;
    for (double v : r.psi) psi_max = std::max(psi_max, std::abs(v));
    if (psi_max > 1e-6) CHECK(r.residual > 1e-12);
  }
}

TEST_CASE("numeric rescaling") {
  FrameField f = sample_frame(3);
  ScalarField omega = [](const Point& p) { return std::exp(0.3 * p[0] - 0.2 * p[3] + 0.1 * p[4] * p[2]); };
  std::mt19937_64 rng(4);
  double worst = 0, mutated = 0;
  for (const auto& p : random_points(rng, 10, 0.8)) {
    worst = std::max(worst, rescale_psi_check(f, omega, p));
    mutated = std::max(mutated, rescale_psi_check(f, omega, p, kDefaultStep, true));
  }
  CHECK(worst < 1e-8);
  CHECK(mutated > 1e-3);
  ScalarField bad = [](const Point&) { return 0.0; };
  CHECK_THROWS_AS(rescale_psi_check(f, bad, kP), EvaluationError);
  ScalarField one = [](const Point&) { return 1.0; };
  CHECK(rescale_psi_check(f, one, kP) == 0.0);
  ScalarField ex = [](const Point& p) { return std::exp(p[0]); };
  CHECK(rescale_psi_check(f, ex, kP) < 1e-6);
}

TEST_CASE("flat model connection") {
  std::mt19937_64 rng(12);
  for (const auto& p : random_points(rng, 5)) {
    auto r = verify_flat_connection(p);
    CHECK(r.pass);
    CHECK(r.scale_defect < 1e-6);
    CHECK(r.torsion_defect < 1e-6);
    CHECK(r.dperp_square < 1e-6);
    CHECK(r.pi < 1e-9);
    CHECK(r.sigma < 1e-9);
  }
  ConnectionCoefficients bad;
  bad.c[0][1][0] = 0.1;
  auto r = verify_flat_connection(kP, bad);
  CHECK_FALSE(r.pass);
  CHECK(r.torsion_defect == doctest::Approx(0.1).epsilon(1e-6));
  ConnectionCoefficients scaled;
  scaled.c[2][0][0] = 0.25;  // does not preserve the volume
  CHECK(verify_flat_connection(kP, scaled).scale_defect > 0.1);
}

TEST_CASE("parallel batches agree with the serial reference") {
  FrameField f = sample_frame(8);
  std::mt19937_64 rng(13);
  auto pts = random_points(rng, 64, 0.9);
  auto a = psi_table(f, pts), b = psi_table_serial(f, pts);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (int k = 0; k < 8; ++k) CHECK(a[i][k] == b[i][k]);
  auto s = system_table(f, pts), t = system_table_serial(f, pts);
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(s[i].rank == t[i].rank);
    CHECK(s[i].residual == t[i].residual);
  }
  FrameField broken = f;
  broken.o[0] = broken.o[0] + PolyField::constant(0.5);
  CHECK_THROWS_AS(psi_table(broken, pts), FrameError);
}

TEST_CASE("points json") {
  auto j = nlohmann::json::parse(R"({"points": [[0,1,2,3,4],[1,1,1,1,1]]})");
  auto pts = points_from_json(j);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0][4] == 4);
  CHECK(points_from_json(points_to_json(pts)) == pts);
  CHECK_THROWS_AS(points_from_json(nlohmann::json::parse("[[1,2]]")), EvaluationError);
}
