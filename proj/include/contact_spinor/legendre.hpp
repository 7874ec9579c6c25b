#pragma once

// Legendrean calculus in five dimensions: the Rumin operator on
// Lambda^1_H = E^* + E[-1,-1], the operator array of the Rumin complex,
// and the characterization of the distinguished partial connection.

#include <string>
#include <vector>

#include <json.hpp>

#include "contact_spinor/expr.hpp"

namespace contact_spinor {

/// Labels of the pieces (all with lower indices).
BundleLabel label_sigma();  // E^*            (-2|1|0)
BundleLabel label_tau();    // E[-1,-1] = F^* (0|1|-2)
BundleLabel label_pi();     // (-4|1|2)
BundleLabel label_sigma_obstruction();  // (2|1|-4)

/// sigma, tau (one index each) and the obstructions Pi, Sigma.
SymbolTable leg_symbols();

/// A section of Lambda^1_H; an empty name stands for zero.
struct LegOneForm {
  std::string sigma = "sigma";
  std::string tau = "tau";
};

/// Integrability obstructions; empty names stand for zero.
struct IntegrabilityObstructions {
  std::string pi = "Pi";
  std::string sigma = "Sigma";
};

struct DperpTriple {
  Expr first;   // scalar, Lambda^2 E^*
  Expr middle;  // free A lower, B upper, trace-free
  Expr last;    // scalar, Lambda^2 E[-2,-2]
};

/// Xi_A^B - 1/2 delta_A^B Xi_C^C.
Expr trace_free(const Expr& xi, const std::string& lower, const std::string& upper);

DperpTriple rumin_dperp(const LegOneForm& w = {}, const IntegrabilityObstructions& obs = {});

/// Target labels of the three slots.
std::vector<BundleLabel> dperp_target_labels();

/// First-order derivative of every term by the Leibniz rule (eps and delta
/// are parallel).  Only symbol factors may be differentiated.
Expr apply_derivative(DerivOp op, const Index& d, const Expr& e);

// ---------------------------------------------------------------------------
// the operator array

enum class ArrowKind { FirstOrderNabla, FirstOrderBarNabla, SecondOrder, Homomorphism };

std::string to_string(ArrowKind k);

struct Arrow {
  BundleLabel source;
  BundleLabel target;
  ArrowKind kind;
  int column = 0;  // column of the source node
};

/// Nodes by column.
std::vector<std::vector<BundleLabel>> rumin_nodes();
/// Every arrow drawn, plus the named homomorphism (-2|1|0) -> (1|0|-3).
const std::vector<Arrow>& rumin_arrows();
/// Throws UsageError for a pair that is not an arrow.
ArrowKind rumin_array(const BundleLabel& from, const BundleLabel& to);
/// Label change of a first-order arrow from (u|k|v) along E (or F).
std::vector<BundleLabel> first_order_targets(const BundleLabel& from, DerivOp op);

nlohmann::json rumin_array_json();

// ---------------------------------------------------------------------------
// distinguished connection

struct ConnectionPredicate {
  std::string name;
  std::string statement;
};

/// The two conditions pinning down the partial connection of a scale.
std::vector<ConnectionPredicate> distinguished_connection_spec();

}  // namespace contact_spinor
