#include "contact_spinor/numeric.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "contact_spinor/saucer.hpp"

namespace contact_spinor::numeric {

namespace {

constexpr double kFrameTolerance = 1e-9;

Point shifted(const Point& p, const Vector& v, double s) {
  Point q = p;
  for (int i = 0; i < 5; ++i) q[i] += s * v[i];
  return q;
}

double central(const ScalarField& g, const Point& p, const Vector& v, double h) {
  return (g(shifted(p, v, h)) - g(shifted(p, v, -h))) / (2 * h);
}

// Variables are frame (4) then jets (20).
class CompiledPolynomial {
 public:
  CompiledPolynomial() = default;
  CompiledPolynomial(const Polynomial& p, const std::map<std::string, int>& index) {
    for (const auto& [mono, c] : p.terms()) {
      Term t{c.to_double(), {}};
      for (const auto& name : mono) {
        auto it = index.find(name);
        if (it == index.end()) throw EvaluationError("unknown indeterminate " + name);
        t.vars.push_back(it->second);
      }
      terms_.push_back(std::move(t));
    }
  }
  double operator()(const std::array<double, 24>& x) const {
    double s = 0;
    for (const auto& t : terms_) {
      double m = t.c;
      for (int v : t.vars) m *= x[v];
      s += m;
    }
    return s;
  }

 private:
  struct Term {
    double c;
    std::vector<int> vars;
  };
  std::vector<Term> terms_;
};

struct Compiled {
  std::array<CompiledPolynomial, 8> psi;
  std::vector<std::vector<CompiledPolynomial>> matrix;
  std::vector<CompiledPolynomial> rhs;
};

const Compiled& compiled() {
  static const Compiled c = [] {
    std::map<std::string, int> index;
    int k = 0;
    for (const auto& n : frame_variables()) index[n] = k++;
    for (const auto& n : jet_variables()) index[n] = k++;
    Compiled out;
    const auto& ps = psi_polynomials();
    for (int i = 0; i < 8; ++i) out.psi[i] = CompiledPolynomial(ps[i], index);
    const auto& sys = standard_system();
    for (const auto& row : sys.matrix) {
      std::vector<CompiledPolynomial> r;
      for (const auto& e : row) r.emplace_back(e, index);
      out.matrix.push_back(std::move(r));
    }
    for (const auto& e : sys.rhs) out.rhs.emplace_back(e, index);
    return out;
  }();
  return c;
}

std::array<double, 24> flatten(const JetData& d) {
  std::array<double, 24> x{};
  std::copy(d.frame.begin(), d.frame.end(), x.begin());
  std::copy(d.jets.begin(), d.jets.end(), x.begin() + 4);
  return x;
}

int jet_index(int op, int sym, int d, int a) { return op * 8 + sym * 4 + d * 2 + a; }

}  // namespace

// ---------------------------------------------------------------------------
// Darboux model

Vector direction_vector(Direction d, const Point& p) {
  switch (d) {
    case Direction::E1: return {1, 0, 0, 0, p[2]};
    case Direction::E2: return {0, 1, 0, 0, p[3]};
    case Direction::F1: return {0, 0, 1, 0, 0};
    case Direction::F2: return {0, 0, 0, 1, 0};
  }
  return {};
}

double contact_form(const Point& p, const Vector& v) { return v[4] - p[2] * v[0] - p[3] * v[1]; }

double frame_derivative(const ScalarField& g, Direction d, const Point& p, double h) {
  Vector v = direction_vector(d, p);
  double coarse = central(g, p, v, h);
  double fine = central(g, p, v, h / 2);
  double r = (4 * fine - coarse) / 3;
  if (!std::isfinite(r)) throw EvaluationError("non-finite derivative");
  return r;
}

Vector bracket(Direction a, Direction b, const Point& p, double h) {
  // [X, Y]^i = X(Y^i) - Y(X^i)
  Vector out{};
  for (int i = 0; i < 5; ++i) {
    ScalarField xi = [a, i](const Point& q) { return direction_vector(a, q)[i]; };
    ScalarField yi = [b, i](const Point& q) { return direction_vector(b, q)[i]; };
    out[i] = frame_derivative(yi, a, p, h) - frame_derivative(xi, b, p, h);
  }
  return out;
}

std::array<double, 5> frame_components(const Vector& v, const Point& p) {
  // v = a1 e1 + a2 e2 + b1 f1 + b2 f2 + s d/dt
  return {v[0], v[1], v[2], v[3], v[4] - p[2] * v[0] - p[3] * v[1]};
}

// ---------------------------------------------------------------------------
// polynomial fields

PolyField PolyField::constant(double c) { return PolyField({Monomial5{c, {}}}); }

double PolyField::operator()(const Point& p) const {
  double s = 0;
  for (const auto& t : terms_) {
    double m = t.c;
    for (int i = 0; i < 5; ++i)
      for (int e = 0; e < t.pow[i]; ++e) m *= p[i];
    s += m;
  }
  return s;
}

PolyField PolyField::partial(int i) const {
  std::vector<Monomial5> out;
  for (auto t : terms_) {
    if (t.pow[i] == 0) continue;
    t.c *= t.pow[i];
    --t.pow[i];
    out.push_back(t);
  }
  return PolyField(std::move(out));
}

PolyField operator+(const PolyField& a, const PolyField& b) {
  std::vector<Monomial5> t = a.terms_;
  t.insert(t.end(), b.terms_.begin(), b.terms_.end());
  return PolyField(std::move(t));
}

PolyField operator*(const PolyField& a, const PolyField& b) {
  std::map<std::array<int, 5>, double> acc;
  for (const auto& x : a.terms_)
    for (const auto& y : b.terms_) {
      std::array<int, 5> pw;
      for (int i = 0; i < 5; ++i) pw[i] = x.pow[i] + y.pow[i];
      acc[pw] += x.c * y.c;
    }
  std::vector<Monomial5> out;
  for (const auto& [pw, c] : acc)
    if (c != 0) out.push_back({c, pw});
  return PolyField(std::move(out));
}

PolyField operator*(double s, const PolyField& a) {
  PolyField r = a;
  for (auto& t : r.terms_) t.c *= s;
  return r;
}

nlohmann::json PolyField::to_json() const {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& t : terms_) j.push_back({{"c", t.c}, {"pow", t.pow}});
  return j;
}

PolyField PolyField::from_json(const nlohmann::json& j) {
  if (j.is_number()) return constant(j.get<double>());
  if (!j.is_array()) throw FrameError("polynomial must be a number or an array of terms");
  std::vector<Monomial5> out;
  for (const auto& t : j) {
    Monomial5 m;
    m.c = t.at("c").get<double>();
    if (t.contains("pow")) {
      const auto& p = t.at("pow");
      if (!p.is_array() || p.size() != 5) throw FrameError("pow must list 5 exponents");
      for (int i = 0; i < 5; ++i) {
        m.pow[i] = p[i].get<int>();
        if (m.pow[i] < 0) throw FrameError("negative exponent");
      }
    }
    out.push_back(m);
  }
  return PolyField(std::move(out));
}

nlohmann::json FrameField::to_json() const {
  return {{"o", {o[0].to_json(), o[1].to_json()}}, {"iota", {iota[0].to_json(), iota[1].to_json()}}};
}

FrameField FrameField::from_json(const nlohmann::json& j) {
  try {
    FrameField f;
    for (int a = 0; a < 2; ++a) {
      f.o[a] = PolyField::from_json(j.at("o").at(a));
      f.iota[a] = PolyField::from_json(j.at("iota").at(a));
    }
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw FrameError(std::string("malformed frame: ") + e.what());
  }
}

FrameField constant_frame() {
  FrameField f;
  f.o = {PolyField::constant(1), PolyField::constant(0)};
  f.iota = {PolyField::constant(0), PolyField::constant(1)};
  return f;
}

FrameField random_polynomial_frame(std::mt19937_64& rng, int degree, double scale) {
  std::normal_distribution<double> nd(0.0, scale);
  auto random_poly = [&] {
    std::vector<Monomial5> terms;
    // every monomial of total degree <= degree
    std::array<int, 5> pw{};
    std::function<void(int, int)> rec = [&](int i, int left) {
      if (i == 5) {
        terms.push_back({nd(rng), pw});
        return;
      }
      for (int e = 0; e <= left; ++e) {
        pw[i] = e;
        rec(i + 1, left - e);
      }
      pw[i] = 0;
    };
    rec(0, degree);
    return PolyField(std::move(terms));
  };
  PolyField P = random_poly(), Q = random_poly(), R = random_poly();
  PolyField one = PolyField::constant(1);
  // [[1,P],[0,1]] [[1,0],[Q,1]] [[1,R],[0,1]] = [[a, b], [c, d]]
  PolyField a = one + P * Q;
  PolyField b = a * R + P;
  PolyField c = Q;
  PolyField d = Q * R + one;
  FrameField f;
  f.o = {a, b};
  f.iota = {c, d};
  return f;
}

std::vector<Point> points_from_json(const nlohmann::json& j) {
  const nlohmann::json& arr = j.is_object() ? j.at("points") : j;
  std::vector<Point> out;
  for (const auto& p : arr) {
    if (!p.is_array() || p.size() != 5) throw EvaluationError("a point has 5 coordinates (x1, x2, y1, y2, t)");
    Point q;
    for (int i = 0; i < 5; ++i) q[i] = p[i].get<double>();
    out.push_back(q);
  }
  return out;
}

nlohmann::json points_to_json(const std::vector<Point>& pts) { return {{"points", pts}}; }

std::vector<Point> random_points(std::mt19937_64& rng, std::size_t n, double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  std::vector<Point> out(n);
  for (auto& p : out)
    for (auto& c : p) c = u(rng);
  return out;
}

// ---------------------------------------------------------------------------
// jets

JetData frame_jets(const FrameField& f, const Point& p, double h) {
  double o0 = f.o[0](p), o1 = f.o[1](p), i0 = f.iota[0](p), i1 = f.iota[1](p);
  double pairing = o0 * i1 - o1 * i0;
  if (!std::isfinite(pairing)) throw EvaluationError("non-finite frame value");
  if (std::abs(pairing - 1) > kFrameTolerance)
    throw FrameError("frame is not normalized: o.iota - 1 = " + std::to_string(pairing - 1));
  JetData d;
  d.frame = {o0, o1, i0, i1};
  std::array<ScalarField, 4> comp = {
      [&](const Point& q) { return f.o[0](q); }, [&](const Point& q) { return f.o[1](q); },
      [&](const Point& q) { return f.iota[0](q); }, [&](const Point& q) { return f.iota[1](q); }};
  for (int op = 0; op < 2; ++op)
    for (int sym = 0; sym < 2; ++sym)
      for (int dd = 0; dd < 2; ++dd)
        for (int a = 0; a < 2; ++a) {
          Direction dir = kDirections[op * 2 + dd];
          d.jets[jet_index(op, sym, dd, a)] = frame_derivative(comp[sym * 2 + a], dir, p, h);
        }
  // Pi = Sigma = 0 in the flat model: the last four jets stay zero.
  return d;
}

std::array<double, 8> psi_values(const JetData& d) {
  const auto& c = compiled();
  auto x = flatten(d);
  std::array<double, 8> out;
  for (int i = 0; i < 8; ++i) out[i] = c.psi[i](x);
  return out;
}

std::array<double, 8> eval_psi_numeric(const FrameField& f, const Point& p, double h) {
  return psi_values(frame_jets(f, p, h));
}

SystemReport analyze_system(const JetData& d) {
  const auto& c = compiled();
  auto x = flatten(d);
  const int rows = static_cast<int>(c.matrix.size()), cols = 12;
  Eigen::MatrixXd A(rows, cols);
  Eigen::VectorXd b(rows);
  for (int r = 0; r < rows; ++r) {
    for (int k = 0; k < cols; ++k) A(r, k) = c.matrix[r][k](x);
    b(r) = c.rhs[r](x);
  }
  SystemReport rep;
  rep.rows = rows;
  rep.cols = cols;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  double cut = 1e-9 * std::max(1.0, sv(0));
  rep.rank = static_cast<int>((sv.array() > cut).count());
  rep.consistency_dim = rows - rep.rank;
  Eigen::MatrixXd N = svd.matrixU().rightCols(rep.consistency_dim).transpose();
  Eigen::VectorXd u = svd.solve(b);
  rep.residual = (A * u - b).norm();
  rep.psi = psi_values(d);
  Eigen::VectorXd defects = N * b;
  for (int i = 0; i < std::min<int>(8, static_cast<int>(defects.size())); ++i) rep.defects[i] = defects(i);

  // Linear maps from admissible jets: derivatives of o_A iota^A = 1 vanish.
  std::array<double, 2> iota_up = {d.frame[3], -d.frame[2]};
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(4, 20);
  for (int op = 0; op < 2; ++op)
    for (int dd = 0; dd < 2; ++dd) {
      int r = op * 2 + dd;
      for (int a = 0; a < 2; ++a) C(r, jet_index(op, 0, dd, a)) = iota_up[a];
      C(r, jet_index(op, 1, dd, 1)) = d.frame[0];
      C(r, jet_index(op, 1, dd, 0)) = -d.frame[1];
    }
  Eigen::MatrixXd K = Eigen::FullPivLU<Eigen::MatrixXd>(C).kernel();
  Eigen::MatrixXd B(rows, 20), P(8, 20);
  for (int j = 0; j < 20; ++j) {
    JetData unit = d;
    unit.jets.fill(0);
    unit.jets[j] = 1;
    auto ux = flatten(unit);
    for (int r = 0; r < rows; ++r) B(r, j) = c.rhs[r](ux);
    for (int r = 0; r < 8; ++r) P(r, j) = c.psi[r](ux);
  }
  Eigen::MatrixXd NB = N * B * K, PK = P * K;
  Eigen::MatrixXd T = NB * PK.completeOrthogonalDecomposition().pseudoInverse();
  rep.alignment_residual = (NB - T * PK).cwiseAbs().maxCoeff() / std::max(1.0, NB.cwiseAbs().maxCoeff());
  Eigen::VectorXd psi(8);
  for (int i = 0; i < 8; ++i) psi(i) = rep.psi[i];
  if (T.rows() == 8) {
    rep.psi_defect_residual = (defects - T * psi).cwiseAbs().maxCoeff();
    Eigen::JacobiSVD<Eigen::MatrixXd> ts(T);
    const auto& s = ts.singularValues();
    rep.transform_condition = s(s.size() - 1) > 0 ? s(0) / s(s.size() - 1) : INFINITY;
  } else {
    rep.psi_defect_residual = INFINITY;
    rep.transform_condition = INFINITY;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// rescaling

std::array<double, 4> scale_gradient(const ScalarField& omega, const Point& p, double h) {
  double w = omega(p);
  if (!std::isfinite(w) || w <= 0) throw EvaluationError("scale must be finite and positive");
  for (Direction d : kDirections) {
    Vector v = direction_vector(d, p);
    for (double s : {-h, -h / 2, h / 2, h})
      if (!(omega(shifted(p, v, s)) > 0)) throw EvaluationError("scale must be positive on the stencil");
  }
  std::array<double, 4> out;
  for (int i = 0; i < 4; ++i) out[i] = frame_derivative(omega, kDirections[i], p, h) / w;
  return out;
}

JetData rescale_jets(const JetData& d, const std::array<double, 4>& upsilon, bool mutate) {
  // hnabla_D phi_A = nabla_D phi_A + (u+1) Y_D phi_A - Y_A phi_D, barred with (v+1).
  // The mutation uses u in the unbarred law of o only: a uniform change of
  // every law leaves psi unchanged.
  JetData out = d;
  const std::array<BundleLabel, 2> labels = {label_o(), label_iota()};
  for (int op = 0; op < 2; ++op)
    for (int sym = 0; sym < 2; ++sym) {
      const BundleLabel& lab = labels[sym];
      double k = (op == 0 ? lab.u() : lab.v()).to_double() + (mutate && op == 0 && sym == 0 ? 0.0 : 1.0);
      const double* phi = &d.frame[sym * 2];
      for (int dd = 0; dd < 2; ++dd)
        for (int a = 0; a < 2; ++a)
          out.jets[jet_index(op, sym, dd, a)] += k * upsilon[op * 2 + dd] * phi[a] - upsilon[op * 2 + a] * phi[dd];
    }
  return out;
}

double rescale_psi_check(const FrameField& f, const ScalarField& omega, const Point& p, double h, bool mutate) {
  JetData d = frame_jets(f, p, h);
  auto before = psi_values(d);
  auto after = psi_values(rescale_jets(d, scale_gradient(omega, p, h), mutate));
  double worst = 0;
  for (int i = 0; i < 8; ++i) worst = std::max(worst, std::abs(after[i] - before[i]));
  return worst;
}

// ---------------------------------------------------------------------------
// flat connection

FlatConnectionReport verify_flat_connection(const Point& p, const ConnectionCoefficients& conn, double tol,
                                            double h) {
  FlatConnectionReport rep;
  auto horizontal = [&](Direction a, Direction b, const Point& q) {
    return frame_components(bracket(a, b, q, h), q);
  };

  // sigma^-2 in the frame: (dalpha ^ dalpha)(e1, e2, f1, f2), dalpha(X, Y) = -alpha([X, Y]).
  auto levi = [&](Direction a, Direction b, const Point& q) { return -contact_form(q, bracket(a, b, q, h)); };
  ScalarField volume = [&](const Point& q) {
    using D = Direction;
    double l11 = levi(D::E1, D::F1, q), l22 = levi(D::E2, D::F2, q);
    double l12 = levi(D::E1, D::F2, q), l21 = levi(D::E2, D::F1, q);
    double l_e = levi(D::E1, D::E2, q), l_f = levi(D::F1, D::F2, q);
    return 2 * (l_e * l_f - l11 * l22 + l12 * l21);
  };
  double vol = volume(p);
  for (int dd = 0; dd < 4; ++dd) {
    double trace = 0;
    for (int a = 0; a < 4; ++a) trace += conn.c[dd][a][a];
    double dv = frame_derivative(volume, kDirections[dd], p, h) - trace * vol;
    rep.scale_defect = std::max(rep.scale_defect, std::abs(dv));
  }

  // Torsion: compare (nabla_X w)(Y) - (nabla_Y w)(X) with dw(X, Y) for the
  // coframe w = theta^c, trace-free parts (Levi-form trace).
  std::array<std::array<Vector, 4>, 4> br;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) br[a][b] = horizontal(kDirections[a], kDirections[b], p);
  auto trace_free = [](std::array<std::array<double, 4>, 4> beta) {
    double tr = beta[0][2] + beta[1][3];
    // dalpha restricted to H pairs e_i with f_i
    beta[0][2] -= tr / 2;
    beta[1][3] -= tr / 2;
    beta[2][0] += tr / 2;
    beta[3][1] += tr / 2;
    return beta;
  };
  for (int cc = 0; cc < 4; ++cc) {
    std::array<std::array<double, 4>, 4> ind{}, ext{};
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        ind[a][b] = -conn.c[a][b][cc] + conn.c[b][a][cc];
        ext[a][b] = -br[a][b][cc];
      }
    ind = trace_free(ind);
    ext = trace_free(ext);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) rep.torsion_defect = std::max(rep.torsion_defect, std::abs(ind[a][b] - ext[a][b]));
  }

  // integrability of E and F, mixed brackets transverse
  for (int i : {2, 3, 4}) rep.sigma = std::max(rep.sigma, std::abs(br[0][1][i]));
  for (int i : {0, 1, 4}) rep.pi = std::max(rep.pi, std::abs(br[2][3][i]));
  for (int a : {0, 1})
    for (int b : {2, 3})
      for (int i = 0; i < 4; ++i) rep.mixed = std::max(rep.mixed, std::abs(br[a][b][i]));

  // d_perp d_perp g: the horizontal exterior derivative of dg|_H, trace-free part.
  ScalarField g = [](const Point& q) { return q[0] * q[3] * q[4] + std::sin(q[1] - q[2]) + q[2] * q[2] * q[4]; };
  std::array<std::array<double, 4>, 4> beta{};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      ScalarField xb = [&, b](const Point& q) { return frame_derivative(g, kDirections[b], q, h); };
      ScalarField xa = [&, a](const Point& q) { return frame_derivative(g, kDirections[a], q, h); };
      beta[a][b] = frame_derivative(xb, kDirections[a], p, h) - frame_derivative(xa, kDirections[b], p, h);
    }
  beta = trace_free(beta);
  for (const auto& row : beta)
    for (double v : row) rep.dperp_square = std::max(rep.dperp_square, std::abs(v));

  rep.pass = rep.scale_defect <= tol && rep.torsion_defect <= tol && rep.pi <= tol && rep.sigma <= tol &&
             rep.mixed <= tol && rep.dperp_square <= tol;
  return rep;
}

// ---------------------------------------------------------------------------
// batches

std::vector<std::array<double, 8>> psi_table_serial(const FrameField& f, const std::vector<Point>& pts, double h) {
  std::vector<std::array<double, 8>> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(eval_psi_numeric(f, p, h));
  return out;
}

std::vector<SystemReport> system_table_serial(const FrameField& f, const std::vector<Point>& pts, double h) {
  std::vector<SystemReport> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(analyze_system(frame_jets(f, p, h)));
  return out;
}

namespace {

// Runs body(i) for every index in parallel; the first exception is rethrown.
template <class Body>
void parallel_for(std::size_t n, Body body) {
  compiled();
  std::exception_ptr err;
  std::mutex m;
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < static_cast<long>(n); ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(m);
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
}

}  // namespace

std::vector<std::array<double, 8>> psi_table(const FrameField& f, const std::vector<Point>& pts, double h) {
  std::vector<std::array<double, 8>> out(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { out[i] = eval_psi_numeric(f, pts[i], h); });
  return out;
}

std::vector<SystemReport> system_table(const FrameField& f, const std::vector<Point>& pts, double h) {
  std::vector<SystemReport> out(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { out[i] = analyze_system(frame_jets(f, pts[i], h)); });
  return out;
}

}  // namespace contact_spinor::numeric
