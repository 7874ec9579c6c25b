#pragma once

// Abstract-index two-component spinor expressions.
//
// An expression is a flat sum of terms; each term is a coefficient in
// Q(sqrt 3) times a product of factors: declared symbols, eps_{AB},
// eps^{AB}, delta_A^B, and first-order derivatives of a symbol.
//
// Conventions: eps_{01} = +1, eps^{01} = +1 (fixed by
// eps_{AB} eps^{AC} = delta_B^C), phi^A = eps^{AB} phi_B,
// phi_A = phi^B eps_{BA}.

#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "contact_spinor/bundle.hpp"
#include "contact_spinor/coefficient.hpp"
#include "contact_spinor/polynomial.hpp"

namespace contact_spinor {

class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DeclarationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Variance : std::uint8_t { Lower, Upper };

inline Variance flip(Variance v) { return v == Variance::Lower ? Variance::Upper : Variance::Lower; }

struct Index {
  std::string name;
  Variance variance = Variance::Lower;

  friend bool operator==(const Index&, const Index&) = default;
  friend auto operator<=>(const Index&, const Index&) = default;
};

inline Index lo(std::string n) { return {std::move(n), Variance::Lower}; }
inline Index up(std::string n) { return {std::move(n), Variance::Upper}; }

enum class FactorKind : std::uint8_t { Symbol, Derivative, Delta, EpsLower, EpsUpper };

/// nabla / bar-nabla, and their "hatted" markers which hat_rewrite expands.
enum class DerivOp : std::uint8_t { Nabla, BarNabla, HatNabla, HatBarNabla };

std::string keyword(DerivOp op);
bool is_hatted(DerivOp op);
DerivOp unhatted(DerivOp op);
DerivOp hatted(DerivOp op);

struct Factor {
  FactorKind kind = FactorKind::Symbol;
  DerivOp op = DerivOp::Nabla;
  std::string symbol;          // symbol, or derivative operand
  std::vector<Index> deriv;    // derivative indices
  std::vector<Index> indices;  // symbol/operand slots; eps: 2; delta: {lower, upper}

  static Factor sym(std::string name, std::vector<Index> idx);
  static Factor eps_lower(std::string a, std::string b);
  static Factor eps_upper(std::string a, std::string b);
  static Factor delta(std::string lower, std::string upper);
  static Factor derivative(DerivOp op, std::vector<Index> d, std::string name, std::vector<Index> idx);

  /// All index slots in order (derivative slots first).
  std::vector<Index> all_indices() const;
  /// Apply fn to every index slot.
  void for_each_index(const std::function<void(Index&)>& fn);

  friend bool operator==(const Factor&, const Factor&) = default;
  friend auto operator<=>(const Factor&, const Factor&) = default;
};

struct Term {
  Coefficient coeff{1};
  std::vector<Factor> factors;

  friend bool operator==(const Term&, const Term&) = default;
};

class Expr {
 public:
  Expr() = default;
  explicit Expr(std::vector<Term> terms) : terms_(std::move(terms)) {}
  static Expr zero() { return {}; }
  static Expr constant(const Coefficient& c);
  static Expr factor(Factor f, Coefficient c = Coefficient(1));

  const std::vector<Term>& terms() const { return terms_; }
  std::vector<Term>& terms() { return terms_; }
  bool empty() const { return terms_.empty(); }

  Expr& operator+=(const Expr& o);
  Expr& operator-=(const Expr& o);
  Expr operator-() const;
  Expr& operator*=(const Coefficient& c);

  friend Expr operator+(Expr a, const Expr& b) { return a += b; }
  friend Expr operator-(Expr a, const Expr& b) { return a -= b; }
  friend Expr operator*(Expr a, const Coefficient& c) { return a *= c; }
  friend Expr operator*(const Coefficient& c, Expr a) { return a *= c; }
  /// Product; dummies of the right operand are renamed apart first.
  friend Expr operator*(const Expr& a, const Expr& b);

  friend bool operator==(const Expr&, const Expr&) = default;

 private:
  std::vector<Term> terms_;
};

struct SymbolDecl {
  std::string name;
  int arity = 0;
  /// Disjoint groups of slot positions within which the symbol is symmetric.
  std::vector<std::vector<int>> symmetry;
  std::optional<BundleLabel> bundle;

  friend bool operator==(const SymbolDecl&, const SymbolDecl&) = default;
};

class SymbolTable {
 public:
  /// Redeclaring a name with a different declaration is an error.
  void declare(SymbolDecl decl);
  /// Convenience: fully symmetric symbol of valence label.valence().
  void declare_symmetric(const std::string& name, const BundleLabel& label);
  /// Declare, replacing any existing declaration of the same name.
  void redeclare(SymbolDecl decl);
  bool contains(const std::string& name) const { return decls_.count(name) != 0; }
  const SymbolDecl& at(const std::string& name) const;
  const std::map<std::string, SymbolDecl>& all() const { return decls_; }
  std::vector<std::string> names_in_order() const { return order_; }

 private:
  std::map<std::string, SymbolDecl> decls_;
  std::vector<std::string> order_;
};

// ---------------------------------------------------------------------------
// index structure

/// Free indices of one term, sorted by name.  Throws StructuralError for
/// repeated same-variance indices or an index used more than twice.
std::vector<Index> free_indices(const Term& t);
/// Dummy (contracted) index names of one term.
std::set<std::string> dummy_names(const Term& t);
/// Free indices of an expression; all terms must agree.
std::vector<Index> free_indices(const Expr& e);
/// Structural checks plus declaration / arity checks against the table.
void validate(const Expr& e, const SymbolTable& table);

// ---------------------------------------------------------------------------
// component oracle

/// Components over free-index assignments in {0,1}.  Cell mask bit i holds
/// the value of free index i (free indices sorted by name).
class ComponentTensor {
 public:
  ComponentTensor() : cells_(1) {}
  explicit ComponentTensor(std::vector<Index> free);

  const std::vector<Index>& free() const { return free_; }
  std::size_t rank() const { return free_.size(); }
  std::size_t size() const { return cells_.size(); }
  /// Position of a free index by name; throws StructuralError when absent.
  std::size_t position(const std::string& name) const;
  const Polynomial& cell(std::size_t mask) const { return cells_[mask]; }
  Polynomial& cell(std::size_t mask) { return cells_[mask]; }
  bool is_zero() const;

  ComponentTensor& operator+=(const ComponentTensor& o);
  ComponentTensor& operator-=(const ComponentTensor& o);
  ComponentTensor& operator*=(const Coefficient& c);
  friend ComponentTensor operator+(ComponentTensor a, const ComponentTensor& b) { return a += b; }
  friend ComponentTensor operator-(ComponentTensor a, const ComponentTensor& b) { return a -= b; }
  friend ComponentTensor operator*(ComponentTensor a, const Coefficient& c) { return a *= c; }
  friend ComponentTensor operator*(const Coefficient& c, ComponentTensor a) { return a *= c; }

  /// Structural equality (same free order).  Use same_tensor() to compare
  /// tensors whose free indices are listed in different orders.
  friend bool operator==(const ComponentTensor&, const ComponentTensor&) = default;

 private:
  std::vector<Index> free_;
  std::vector<Polynomial> cells_;
};

/// Indeterminate name of a symbol component with all-lower index values.
std::string component_key(const SymbolDecl& decl, const std::vector<int>& values);
std::string derivative_key(DerivOp op, std::vector<int> deriv_values, const std::string& operand_key);

ComponentTensor components(const Expr& e, const SymbolTable& table);

/// Components on a caller-chosen free-index order (names must match).
ComponentTensor components_in_order(const Expr& e, const SymbolTable& table, const std::vector<Index>& order);

/// Mathematical equality via the component oracle.  Throws StructuralError
/// when both sides are nonzero and their free index sets differ.
bool equal(const Expr& a, const Expr& b, const SymbolTable& table);
bool is_zero(const Expr& e, const SymbolTable& table);

// ---------------------------------------------------------------------------
// rewriting

Expr canonicalize(const Expr& e, const SymbolTable& table);

/// Average over all permutations of the named free slots (1/n! convention).
Expr symmetrize(const Expr& e, const std::vector<std::string>& slots);
/// Signed average over all permutations of the named free slots.
Expr antisymmetrize(const Expr& e, const std::vector<std::string>& slots);

/// Rename free indices (names only; variance preserved).
Expr rename_free(const Expr& e, const std::map<std::string, std::string>& map);

/// Source of index names not yet used in a term.
class NameSource {
 public:
  explicit NameSource(const Term& t, std::string prefix = "_f");
  explicit NameSource(std::set<std::string> used, std::string prefix = "_f");
  std::string fresh();
  void reserve(const std::string& name) { used_.insert(name); }

 private:
  std::set<std::string> used_;
  std::string prefix_;
  int next_ = 1;
};

/// Returns a replacement for one factor, or nullopt to keep it.  The
/// replacement's free indices must match the factor's free slots; any
/// dummies it introduces must come from the supplied NameSource.
using FactorRewriter = std::function<std::optional<Expr>(const Factor&, NameSource&)>;

/// Apply a rewriter to every factor of every term and multiply out.
Expr transform_factors(const Expr& e, const FactorRewriter& rw);

/// Replace each non-derivative occurrence of `symbol` by `replacement`,
/// a template whose free indices are exactly `slots` (all lower).  Upper
/// occurrences are lowered through eps first.
Expr substitute(const Expr& e, const std::string& symbol, const std::vector<std::string>& slots,
                const Expr& replacement);

/// Lower every upper slot of symbol and derivative factors, inserting
/// eps^{..} factors.  The result has eps/delta as the only upper-index carriers.
Expr lower_all(const Expr& e);

/// Remove one factor that is exactly the scalar symbol `name` from each term
/// containing it (terms without it are dropped): the coefficient of a linear
/// scalar unknown.  Terms containing it twice, or inside a derivative, throw.
Expr coefficient_of(const Expr& e, const std::string& name);
/// Terms free of `names` as plain symbols.
Expr drop_terms_with(const Expr& e, const std::set<std::string>& names);

}  // namespace contact_spinor
