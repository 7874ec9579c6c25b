#pragma once

// Darboux model of the flat Legendrean contact structure on R^5 with
// coordinates (x1, x2, y1, y2, t), contact form alpha = dt - y1 dx1 - y2 dx2,
// E-frame e_i = d/dx_i + y_i d/dt and F-frame f_i = d/dy_i.  Weighted
// sections are components in this frame; index value A = 0, 1 means e_1, e_2
// (or f_1, f_2 for barred derivatives).

#include <array>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace contact_spinor::numeric {

inline constexpr double kDefaultStep = 1e-4;

class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FrameError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Point = std::array<double, 5>;
using Vector = std::array<double, 5>;
using ScalarField = std::function<double(const Point&)>;

enum class Direction { E1, E2, F1, F2 };
inline constexpr std::array<Direction, 4> kDirections = {Direction::E1, Direction::E2, Direction::F1, Direction::F2};

Vector direction_vector(Direction d, const Point& p);
double contact_form(const Point& p, const Vector& v);

/// Central difference with one Richardson level.
double frame_derivative(const ScalarField& g, Direction d, const Point& p, double h = kDefaultStep);
/// Lie bracket of two frame fields by finite differences of their components.
Vector bracket(Direction a, Direction b, const Point& p, double h = kDefaultStep);
/// Components of v in the basis (e1, e2, f1, f2, d/dt) at p.
std::array<double, 5> frame_components(const Vector& v, const Point& p);

// ---------------------------------------------------------------------------
// polynomial fields and spin-frames

struct Monomial5 {
  double c = 0;
  std::array<int, 5> pow{};
};

class PolyField {
 public:
  PolyField() = default;
  explicit PolyField(std::vector<Monomial5> terms) : terms_(std::move(terms)) {}
  static PolyField constant(double c);

  double operator()(const Point& p) const;
  /// Exact partial derivative in coordinate i.
  PolyField partial(int i) const;
  const std::vector<Monomial5>& terms() const { return terms_; }

  friend PolyField operator+(const PolyField& a, const PolyField& b);
  friend PolyField operator*(const PolyField& a, const PolyField& b);
  friend PolyField operator*(double s, const PolyField& a);

  nlohmann::json to_json() const;
  static PolyField from_json(const nlohmann::json& j);

 private:
  std::vector<Monomial5> terms_;
};

/// o_A and iota_A, both lowered, with o_A iota^A = o_0 iota_1 - o_1 iota_0 = 1.
struct FrameField {
  std::array<PolyField, 2> o;
  std::array<PolyField, 2> iota;

  nlohmann::json to_json() const;
  static FrameField from_json(const nlohmann::json& j);
};

FrameField constant_frame();
/// Rows of an SL(2) product of elementary matrices with random polynomial
/// entries of the given degree; o.iota = 1 identically.
FrameField random_polynomial_frame(std::mt19937_64& rng, int degree = 2, double scale = 0.5);

std::vector<Point> points_from_json(const nlohmann::json& j);
nlohmann::json points_to_json(const std::vector<Point>& pts);
std::vector<Point> random_points(std::mt19937_64& rng, std::size_t n, double radius = 1.0);

// ---------------------------------------------------------------------------
// jets and psi

/// Values of the frame (o_0, o_1, iota_0, iota_1 with iota lowered) and the
/// 20 first jets in the order of jet_variables().
struct JetData {
  std::array<double, 4> frame{};
  std::array<double, 20> jets{};
};

/// Rejects points with |o_A iota^A - 1| > 1e-9.
JetData frame_jets(const FrameField& f, const Point& p, double h = kDefaultStep);

std::array<double, 8> psi_values(const JetData& d);
std::array<double, 8> eval_psi_numeric(const FrameField& f, const Point& p, double h = kDefaultStep);

struct SystemReport {
  int rows = 0;
  int cols = 0;
  int rank = 0;
  int consistency_dim = 0;
  double residual = 0;             // least-squares residual of the system
  std::array<double, 8> psi{};
  std::array<double, 8> defects{};  // left null space applied to the rhs
  double alignment_residual = 0;   // || N^T B - T P || over admissible jets
  double psi_defect_residual = 0;  // || defects - T psi ||
  double transform_condition = 0;  // condition number of T
};

SystemReport analyze_system(const JetData& d);

/// Scale change through the transformation laws with the registered
/// weights of o and iota.  `mutate` replaces (u+1) by u in the law of o.
JetData rescale_jets(const JetData& d, const std::array<double, 4>& upsilon, bool mutate = false);
/// Upsilon_A = Omega^-1 e_A(Omega), bUpsilon_A = Omega^-1 f_A(Omega).
std::array<double, 4> scale_gradient(const ScalarField& omega, const Point& p, double h = kDefaultStep);
double rescale_psi_check(const FrameField& f, const ScalarField& omega, const Point& p, double h = kDefaultStep,
                         bool mutate = false);

// ---------------------------------------------------------------------------
// distinguished connection in the standard frame

/// nabla_{X_d} X_a = sum_b c[d][a][b] X_b for X = (e1, e2, f1, f2).
struct ConnectionCoefficients {
  std::array<std::array<std::array<double, 4>, 4>, 4> c{};
};

struct FlatConnectionReport {
  double scale_defect = 0;    // induced connection on Lambda^4_H applied to sigma^-2
  double torsion_defect = 0;  // induced Lambda^1_H -> Lambda^2_Hperp minus d_perp
  double pi = 0;              // [f1, f2] outside F
  double sigma = 0;           // [e1, e2] outside E
  double mixed = 0;           // H part of [e_i, f_j]
  double dperp_square = 0;    // d_perp d_perp g on a test function
  bool pass = false;
};

FlatConnectionReport verify_flat_connection(const Point& p, const ConnectionCoefficients& conn = {},
                                            double tol = 1e-6, double h = kDefaultStep);

// ---------------------------------------------------------------------------
// batches (OpenMP; the serial versions are the reference)

std::vector<std::array<double, 8>> psi_table(const FrameField& f, const std::vector<Point>& pts,
                                             double h = kDefaultStep);
std::vector<std::array<double, 8>> psi_table_serial(const FrameField& f, const std::vector<Point>& pts,
                                                    double h = kDefaultStep);
std::vector<SystemReport> system_table(const FrameField& f, const std::vector<Point>& pts, double h = kDefaultStep);
std::vector<SystemReport> system_table_serial(const FrameField& f, const std::vector<Point>& pts,
                                              double h = kDefaultStep);

}  // namespace contact_spinor::numeric
