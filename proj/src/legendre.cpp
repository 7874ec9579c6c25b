#include "contact_spinor/legendre.hpp"

#include <algorithm>

#include "contact_spinor/parser.hpp"

namespace contact_spinor {

using R = Rational;

BundleLabel label_sigma() { return BundleLabel::leg(R(-2), 1, R(0)); }
BundleLabel label_tau() { return BundleLabel::leg(R(0), 1, R(-2)); }
BundleLabel label_pi() { return BundleLabel::leg(R(-4), 1, R(2)); }
BundleLabel label_sigma_obstruction() { return BundleLabel::leg(R(2), 1, R(-4)); }

SymbolTable leg_symbols() {
  SymbolTable t;
  t.declare_symmetric("sigma", label_sigma());
  t.declare_symmetric("tau", label_tau());
  t.declare_symmetric("Pi", label_pi());
  t.declare_symmetric("Sigma", label_sigma_obstruction());
  return t;
}

Expr trace_free(const Expr& xi, const std::string& lower, const std::string& upper) {
  Expr trace = rename_free(xi, {{lower, "_tr"}, {upper, "_tr"}});
  return xi - Expr::factor(Factor::delta(lower, upper), Coefficient(R(1, 2))) * trace;
}

namespace {

Expr sym1(const std::string& name, Index i) {
  if (name.empty()) return {};
  return Expr::factor(Factor::sym(name, {std::move(i)}));
}

Expr deriv1(DerivOp op, Index d, const std::string& name, Index i) {
  if (name.empty()) return {};
  return Expr::factor(Factor::derivative(op, {std::move(d)}, name, {std::move(i)}));
}

}  // namespace

DperpTriple rumin_dperp(const LegOneForm& w, const IntegrabilityObstructions& obs) {
  DperpTriple out;
  out.first = deriv1(DerivOp::Nabla, up("A"), w.sigma, lo("A")) * Coefficient(-1) +
              sym1(obs.pi, lo("A")) * sym1(w.tau, up("A"));
  Expr xi = deriv1(DerivOp::Nabla, lo("A"), w.tau, up("B")) - deriv1(DerivOp::BarNabla, up("B"), w.sigma, lo("A"));
  out.middle = xi.empty() ? xi : trace_free(xi, "A", "B");
  out.last = deriv1(DerivOp::BarNabla, lo("A"), w.tau, up("A")) + sym1(obs.sigma, up("A")) * sym1(w.sigma, lo("A"));
  return out;
}

std::vector<BundleLabel> dperp_target_labels() {
  return {BundleLabel::leg(R(-3), 0, R(1)), BundleLabel::leg(R(-2), 2, R(-2)), BundleLabel::leg(R(1), 0, R(-3))};
}

Expr apply_derivative(DerivOp op, const Index& d, const Expr& e) {
  Expr out;
  for (const auto& t : e.terms()) {
    for (std::size_t i = 0; i < t.factors.size(); ++i) {
      const Factor& f = t.factors[i];
      if (f.kind == FactorKind::Delta || f.kind == FactorKind::EpsLower || f.kind == FactorKind::EpsUpper) continue;
      if (f.kind == FactorKind::Derivative) throw UsageError("second derivatives are not represented");
      Term nt = t;
      nt.factors[i] = Factor::derivative(op, {d}, f.symbol, f.indices);
      out.terms().push_back(std::move(nt));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string to_string(ArrowKind k) {
  switch (k) {
    case ArrowKind::FirstOrderNabla: return "first-order nabla";
    case ArrowKind::FirstOrderBarNabla: return "first-order bnabla";
    case ArrowKind::SecondOrder: return "second-order";
    case ArrowKind::Homomorphism: return "homomorphism";
  }
  return "?";
}

namespace {

BundleLabel L(long u, int k, long v) { return BundleLabel::leg(R(u), k, R(v)); }

}  // namespace

std::vector<std::vector<BundleLabel>> rumin_nodes() {
  return {{L(0, 0, 0)},
          {L(-2, 1, 0), L(0, 1, -2)},
          {L(-3, 0, 1), L(-2, 2, -2), L(1, 0, -3)},
          {L(-4, 0, 0), L(-3, 2, -3), L(0, 0, -4)},
          {L(-4, 1, -2), L(-2, 1, -4)},
          {L(-3, 0, -3)}};
}

std::vector<BundleLabel> first_order_targets(const BundleLabel& from, DerivOp op) {
  // tensor with E^* = (-2|1|0) or F^* = (0|1|-2) and keep both Clebsch-Gordan pieces
  R u = from.u(), v = from.v();
  int k = from.valence();
  std::vector<BundleLabel> out;
  if (op == DerivOp::Nabla) {
    out.push_back(BundleLabel::leg(u - R(2), k + 1, v));
    if (k > 0) out.push_back(BundleLabel::leg(u - R(1), k - 1, v + R(1)));
  } else {
    out.push_back(BundleLabel::leg(u, k + 1, v - R(2)));
    if (k > 0) out.push_back(BundleLabel::leg(u + R(1), k - 1, v - R(1)));
  }
  return out;
}

const std::vector<Arrow>& rumin_arrows() {
  static const std::vector<Arrow> arrows = [] {
    auto nodes = rumin_nodes();
    std::vector<Arrow> out;
    auto classify = [](const BundleLabel& a, const BundleLabel& b) {
      for (DerivOp op : {DerivOp::Nabla, DerivOp::BarNabla}) {
        auto ts = first_order_targets(a, op);
        if (std::find(ts.begin(), ts.end(), b) != ts.end())
          return op == DerivOp::Nabla ? ArrowKind::FirstOrderNabla : ArrowKind::FirstOrderBarNabla;
      }
      throw std::logic_error("arrow " + a.str() + " -> " + b.str() + " is not first order");
    };
    const std::vector<std::pair<BundleLabel, BundleLabel>> drawn = {
        {L(0, 0, 0), L(-2, 1, 0)},     {L(0, 0, 0), L(0, 1, -2)},     {L(-2, 1, 0), L(-3, 0, 1)},
        {L(-2, 1, 0), L(-2, 2, -2)},   {L(0, 1, -2), L(-2, 2, -2)},   {L(0, 1, -2), L(1, 0, -3)},
        {L(-3, 0, 1), L(-4, 0, 0)},    {L(-2, 2, -2), L(-3, 2, -3)},  {L(1, 0, -3), L(0, 0, -4)},
        {L(-3, 0, 1), L(-3, 2, -3)},   {L(-2, 2, -2), L(-4, 0, 0)},   {L(-2, 2, -2), L(0, 0, -4)},
        {L(1, 0, -3), L(-3, 2, -3)},   {L(-4, 0, 0), L(-4, 1, -2)},   {L(-3, 2, -3), L(-4, 1, -2)},
        {L(-3, 2, -3), L(-2, 1, -4)},  {L(0, 0, -4), L(-2, 1, -4)},   {L(-4, 1, -2), L(-3, 0, -3)},
        {L(-2, 1, -4), L(-3, 0, -3)}};
    auto column = [&](const BundleLabel& b) {
      for (std::size_t c = 0; c < nodes.size(); ++c)
        if (std::find(nodes[c].begin(), nodes[c].end(), b) != nodes[c].end()) return static_cast<int>(c);
      throw std::logic_error("label not in the array: " + b.str());
    };
    for (const auto& [a, b] : drawn) {
      int c = column(a);
      if (column(b) != c + 1) throw std::logic_error("arrow skips a column");
      ArrowKind k = c == 2 ? ArrowKind::SecondOrder : classify(a, b);
      out.push_back({a, b, k, c});
    }
    out.push_back({L(-2, 1, 0), L(1, 0, -3), ArrowKind::Homomorphism, 1});
    return out;
  }();
  return arrows;
}

ArrowKind rumin_array(const BundleLabel& from, const BundleLabel& to) {
  for (const auto& a : rumin_arrows())
    if (a.source == from && a.target == to) return a.kind;
  throw UsageError("no arrow " + from.str() + " -> " + to.str() + " in the Rumin array");
}

nlohmann::json rumin_array_json() {
  nlohmann::json j;
  j["nodes"] = nlohmann::json::array();
  auto nodes = rumin_nodes();
  for (std::size_t c = 0; c < nodes.size(); ++c)
    for (const auto& n : nodes[c]) j["nodes"].push_back({{"label", n.str()}, {"column", c}});
  j["arrows"] = nlohmann::json::array();
  for (const auto& a : rumin_arrows())
    j["arrows"].push_back({{"from", a.source.str()}, {"to", a.target.str()}, {"kind", to_string(a.kind)}});
  return j;
}

std::vector<ConnectionPredicate> distinguished_connection_spec() {
  return {{"annihilates-scale",
           "the induced partial connection on Lambda^4_H = (-2|0|-2) annihilates sigma^-2"},
          {"minimal-torsion",
           "the induced operator Lambda^1_H -> Lambda^2_Hperp equals d_perp modulo the integrability "
           "homomorphisms Pi, Sigma"}};
}

}  // namespace contact_spinor
