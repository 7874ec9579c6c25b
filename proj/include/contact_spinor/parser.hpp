#pragma once

// Text surface: expressions, session files (.spn) and the printer.
// The grammar is documented in docs/grammar.md.

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "contact_spinor/expr.hpp"

namespace contact_spinor {

enum class ErrorCategory { Lexical, Syntax, Undeclared, IndexBalance, Declaration };

std::string to_string(ErrorCategory c);

struct SourcePos {
  int line = 1;
  int col = 1;
  friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(ErrorCategory category, SourcePos pos, const std::string& message);
  ErrorCategory category() const { return category_; }
  SourcePos pos() const { return pos_; }
  const std::string& detail() const { return detail_; }

 private:
  ErrorCategory category_;
  SourcePos pos_;
  std::string detail_;
};

enum class StatementKind { Declare, Geometry, Def, Check, Invariant, Zero, Bare };

struct Statement {
  StatementKind kind = StatementKind::Bare;
  SourcePos pos;
  std::string name;          // def / invariant / zero target
  Expr lhs;                  // def body, bare expression, check lhs
  Expr rhs;                  // check rhs
  SymbolDecl decl;           // declare
  Notation geometry = Notation::G2;
};

struct Session {
  SymbolTable symbols;
  std::optional<Notation> geometry;
  std::vector<Statement> statements;

  /// Definition body by name; throws UsageError when absent.
  const Expr& def(const std::string& name) const;
  bool has_def(const std::string& name) const;
  bool empty() const { return statements.empty(); }
};

/// Symbols implied by a `geometry` statement: the scale gradients
/// Upsilon (and bUpsilon for the Legendrean case) and the scalar Omega.
void declare_geometry_symbols(SymbolTable& table, Notation n);

Session parse_session(std::string_view text);
Session parse_session_file(const std::filesystem::path& path);

/// Parse a single expression against an existing symbol table.
Expr parse_expr(std::string_view text, const SymbolTable& table);

std::string print(const Expr& e);
std::string print_factor(const Factor& f);
std::string print_decl(const SymbolDecl& d);
std::string print_session(const Session& s);

}  // namespace contact_spinor
