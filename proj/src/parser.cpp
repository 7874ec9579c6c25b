#include "contact_spinor/parser.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace contact_spinor {

std::string to_string(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Lexical: return "lexical";
    case ErrorCategory::Syntax: return "syntax";
    case ErrorCategory::Undeclared: return "undeclared";
    case ErrorCategory::IndexBalance: return "index-balance";
    case ErrorCategory::Declaration: return "declaration";
  }
  return "?";
}

ParseError::ParseError(ErrorCategory category, SourcePos pos, const std::string& message)
    : std::runtime_error(std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": " + to_string(category) +
                         " error: " + message),
      category_(category),
      pos_(pos),
      detail_(message) {}

const Expr& Session::def(const std::string& name) const {
  for (auto it = statements.rbegin(); it != statements.rend(); ++it)
    if (it->kind == StatementKind::Def && it->name == name) return it->lhs;
  throw UsageError("no definition named " + name);
}

bool Session::has_def(const std::string& name) const {
  for (const auto& s : statements)
    if (s.kind == StatementKind::Def && s.name == name) return true;
  return false;
}

void declare_geometry_symbols(SymbolTable& table, Notation n) {
  auto sym_group = [](int k) {
    std::vector<std::vector<int>> g;
    if (k > 1) {
      g.emplace_back();
      for (int i = 0; i < k; ++i) g.back().push_back(i);
    }
    return g;
  };
  table.declare({"Omega", 0, {}, std::nullopt});
  switch (n) {
    case Notation::Leg:
      table.declare({"Upsilon", 1, {}, std::nullopt});
      table.declare({"bUpsilon", 1, {}, std::nullopt});
      break;
    case Notation::Conformal3D: table.declare({"Upsilon", 2, sym_group(2), std::nullopt}); break;
    case Notation::G2: table.declare({"Upsilon", 3, sym_group(3), std::nullopt}); break;
  }
}

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
bool index_start(char c) { return ident_start(c) || c == '_'; }
bool index_char(char c) { return ident_char(c) || c == '_'; }

const std::set<std::string>& reserved() {
  static const std::set<std::string> r = {"eps",  "delta", "nabla",   "bnabla",    "hnabla", "hbnabla",
                                          "sym",  "asym",  "sqrt3",   "declare",   "def",    "check",
                                          "zero", "geometry", "invariant"};
  return r;
}

std::optional<DerivOp> deriv_keyword(const std::string& w) {
  if (w == "nabla") return DerivOp::Nabla;
  if (w == "bnabla") return DerivOp::BarNabla;
  if (w == "hnabla") return DerivOp::HatNabla;
  if (w == "hbnabla") return DerivOp::HatBarNabla;
  return std::nullopt;
}

bool is_constant(const Expr& e) {
  for (const auto& t : e.terms())
    if (!t.factors.empty()) return false;
  return true;
}

Expr fold_constant(const Expr& e) {
  Coefficient c;
  for (const auto& t : e.terms()) c += t.coeff;
  return Expr::constant(c);
}

class Parser {
 public:
  Parser(std::string_view text, SymbolTable& table) : s_(text), table_(table) {}

  Session session() {
    Session out;
    for (;;) {
      skip_blank_statements();
      if (at_end()) break;
      out.statements.push_back(statement(out));
      end_statement();
    }
    out.symbols = table_;
    return out;
  }

  Expr single_expression() {
    ws_all();
    if (at_end()) return {};
    Expr e = expression();
    ws_all();
    if (!at_end()) error(ErrorCategory::Syntax, "unexpected '" + std::string(1, peek()) + "'");
    return e;
  }

 private:
  // ---- cursor -------------------------------------------------------------
  bool at_end() const { return i_ >= s_.size(); }
  char peek(std::size_t k = 0) const { return i_ + k < s_.size() ? s_[i_ + k] : '\0'; }
  SourcePos pos() const { return {line_, col_}; }
  char get() {
    char c = s_[i_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
      ++col_;
    }
    return c;
  }

  [[noreturn]] void error(ErrorCategory c, const std::string& msg) const { throw ParseError(c, pos(), msg); }
  [[noreturn]] void error_at(ErrorCategory c, SourcePos p, const std::string& msg) const {
    throw ParseError(c, p, msg);
  }

  void skip_comment() {
    while (!at_end() && peek() != '\n') get();
  }
  // whitespace; newlines only inside brackets
  void ws() {
    while (!at_end()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r') get();
      else if (c == '#') skip_comment();
      else if (c == '\n' && depth_ > 0) get();
      else break;
    }
  }
  void ws_all() {
    while (!at_end()) {
      char c = peek();
      if (std::isspace(static_cast<unsigned char>(c))) get();
      else if (c == '#') skip_comment();
      else break;
    }
  }
  void expect(char c) {
    ws();
    if (peek() != c) {
      if (at_end()) error(ErrorCategory::Syntax, std::string("expected '") + c + "' before end of input");
      error(ErrorCategory::Syntax, std::string("expected '") + c + "', found '" + peek() + "'");
    }
    get();
  }
  void check_lexical() {
    char c = peek();
    if (at_end()) return;
    if (!(std::isalnum(static_cast<unsigned char>(c)) || std::string_view("_^{}()[]+-*/=:;,|#<>\n \t\r").find(c) !=
                                                             std::string_view::npos))
      error(ErrorCategory::Lexical, "unexpected character '" + std::string(1, c) + "'");
  }
  std::string word() {
    check_lexical();
    if (!ident_start(peek())) error(ErrorCategory::Syntax, "expected a name");
    std::string w;
    while (ident_char(peek())) w += get();
    return w;
  }
  std::int64_t integer() {
    if (!std::isdigit(static_cast<unsigned char>(peek()))) error(ErrorCategory::Syntax, "expected a number");
    SourcePos p = pos();
    std::string d;
    while (std::isdigit(static_cast<unsigned char>(peek()))) d += get();
    if (ident_start(peek())) error(ErrorCategory::Lexical, "malformed number");
    try {
      return std::stoll(d);
    } catch (const std::out_of_range&) {
      error_at(ErrorCategory::Lexical, p, "number out of range: " + d);
    }
  }
  Rational signed_rational() {
    ws();
    bool neg = false;
    if (peek() == '-' || peek() == '+') {
      neg = get() == '-';
      ws();
    }
    Rational r(integer());
    ws();
    if (peek() == '/') {
      get();
      ws();
      std::int64_t d = integer();
      if (d == 0) error(ErrorCategory::Syntax, "zero denominator");
      r = Rational(r.num(), d);
    }
    return neg ? -r : r;
  }

  // ---- statements ---------------------------------------------------------
  void skip_blank_statements() {
    for (;;) {
      ws_all();
      if (peek() == ';') {
        get();
        continue;
      }
      break;
    }
  }
  void end_statement() {
    ws();
    if (at_end()) return;
    if (peek() == '\n' || peek() == ';') {
      get();
      return;
    }
    check_lexical();
    error(ErrorCategory::Syntax, "unexpected '" + std::string(1, peek()) + "' after statement");
  }

  Statement statement(Session& session) {
    Statement st;
    st.pos = pos();
    if (ident_start(peek())) {
      std::size_t save = i_;
      int sl = line_, sc = col_;
      std::string kw = word();
      if (kw == "declare") {
        st.kind = StatementKind::Declare;
        st.decl = declaration(st.pos);
        return st;
      }
      if (kw == "geometry") {
        st.kind = StatementKind::Geometry;
        ws();
        SourcePos p = pos();
        std::string g = word();
        if (g == "g2") st.geometry = Notation::G2;
        else if (g == "leg") st.geometry = Notation::Leg;
        else if (g == "c3") st.geometry = Notation::Conformal3D;
        else error_at(ErrorCategory::Syntax, p, "unknown geometry " + g);
        if (session.geometry && *session.geometry != st.geometry)
          error_at(ErrorCategory::Declaration, st.pos, "conflicting geometry statement");
        session.geometry = st.geometry;
        try {
          declare_geometry_symbols(table_, st.geometry);
        } catch (const DeclarationError& e) {
          error_at(ErrorCategory::Declaration, st.pos, e.what());
        }
        return st;
      }
      if (kw == "def") {
        st.kind = StatementKind::Def;
        ws();
        SourcePos p = pos();
        st.name = word();
        if (session.has_def(st.name)) error_at(ErrorCategory::Declaration, p, "redefinition of " + st.name);
        expect('=');
        after_operator();
        st.lhs = expression();
        return st;
      }
      if (kw == "check") {
        st.kind = StatementKind::Check;
        ws();
        st.lhs = expression();
        ws();
        if (!(peek() == '=' && peek(1) == '=')) error(ErrorCategory::Syntax, "expected '=='");
        get();
        get();
        after_operator();
        st.rhs = expression();
        return st;
      }
      if (kw == "invariant" || kw == "zero") {
        st.kind = kw == "zero" ? StatementKind::Zero : StatementKind::Invariant;
        ws();
        SourcePos p = pos();
        st.name = word();
        if (!session.has_def(st.name)) error_at(ErrorCategory::Undeclared, p, "no definition named " + st.name);
        return st;
      }
      i_ = save;
      line_ = sl;
      col_ = sc;
    }
    st.kind = StatementKind::Bare;
    st.lhs = expression();
    return st;
  }

  SymbolDecl declaration(SourcePos start) {
    SymbolDecl d;
    ws();
    SourcePos name_pos = pos();
    d.name = word();
    if (reserved().count(d.name)) error_at(ErrorCategory::Declaration, name_pos, "reserved word " + d.name);
    std::optional<int> arity;
    ws();
    if (peek() == '/') {
      get();
      ws();
      arity = static_cast<int>(integer());
    }
    ws();
    if (peek() == ':') {
      get();
      ws();
      SourcePos p = pos();
      std::string fam = word();
      expect('(');
      ++depth_;
      try {
        if (fam == "leg") {
          Rational u = signed_rational();
          expect(',');
          Rational k = signed_rational();
          expect(',');
          Rational v = signed_rational();
          if (!k.is_integer() || k.sign() < 0) error_at(ErrorCategory::Declaration, p, "valence must be a natural number");
          d.bundle = BundleLabel::leg(u, static_cast<int>(k.num()), v);
        } else if (fam == "g2" || fam == "c3") {
          Rational k = signed_rational();
          expect(',');
          Rational w = signed_rational();
          if (!k.is_integer() || k.sign() < 0) error_at(ErrorCategory::Declaration, p, "valence must be a natural number");
          int kk = static_cast<int>(k.num());
          d.bundle = fam == "g2" ? BundleLabel::g2(kk, w) : BundleLabel::conformal3d(kk, w);
        } else {
          error_at(ErrorCategory::Syntax, p, "unknown bundle family " + fam);
        }
      } catch (const std::overflow_error& e) {
        error_at(ErrorCategory::Lexical, p, e.what());
      }
      --depth_;
      expect(')');
    }
    d.arity = arity ? *arity : (d.bundle ? d.bundle->valence() : 0);
    ws();
    bool explicit_sym = false;
    if (ident_start(peek())) {
      SourcePos p = pos();
      if (word() != "sym") error_at(ErrorCategory::Syntax, p, "expected sym(...)");
      explicit_sym = true;
      expect('(');
      ++depth_;
      d.symmetry.emplace_back();
      for (;;) {
        ws();
        if (peek() == ')') break;
        if (peek() == '|') {
          get();
          d.symmetry.emplace_back();
          continue;
        }
        d.symmetry.back().push_back(static_cast<int>(integer()));
      }
      --depth_;
      expect(')');
    }
    if (!explicit_sym && d.arity > 1) {
      d.symmetry.emplace_back();
      for (int i = 0; i < d.arity; ++i) d.symmetry.back().push_back(i);
    }
    try {
      table_.declare(d);
    } catch (const DeclarationError& e) {
      error_at(ErrorCategory::Declaration, start, e.what());
    }
    return table_.at(d.name);
  }

  // ---- expressions --------------------------------------------------------
  void after_operator() { ws_all(); }

  bool at_term_end() {
    ws();
    return at_end() || std::string_view("+-)}=;\n").find(peek()) != std::string_view::npos;
  }

  Expr expression() {
    ws();
    Expr out;
    bool neg = false;
    if (peek() == '+' || peek() == '-') {
      neg = get() == '-';
      after_operator();
    }
    std::optional<std::vector<Index>> free_ref;
    for (;;) {
      SourcePos tp = pos();
      Expr t = term();
      if (neg) t = -t;
      check_balance(t, tp, free_ref);
      out += t;
      ws();
      if (peek() == '+' || peek() == '-') {
        neg = get() == '-';
        after_operator();
        continue;
      }
      break;
    }
    return out;
  }

  void check_balance(const Expr& e, SourcePos p, std::optional<std::vector<Index>>& ref) {
    try {
      for (const auto& t : e.terms()) {
        auto f = free_indices(t);
        if (!ref) ref = f;
        else if (*ref != f) throw StructuralError("terms of a sum have different free indices");
      }
    } catch (const StructuralError& err) {
      error_at(ErrorCategory::IndexBalance, p, err.what());
    }
  }

  Expr term() {
    bool numeric = false;
    Expr acc = item(numeric);
    for (;;) {
      ws();
      if (peek() == '*') {
        get();
        after_operator();
        bool n2 = false;
        acc = multiply(acc, item(n2));
        numeric = n2 && numeric;
        continue;
      }
      if (numeric && !at_term_end() && (ident_start(peek()) || peek() == '(' ||
                                        std::isdigit(static_cast<unsigned char>(peek())))) {
        bool n2 = false;
        acc = multiply(acc, item(n2));
        numeric = n2;
        continue;
      }
      break;
    }
    return acc;
  }

  Expr multiply(const Expr& a, const Expr& b) {
    if (is_constant(a) && a.terms().size() <= 1 && b.terms().size() <= 1) {
      if (a.empty()) return {};
      return b * a.terms()[0].coeff;
    }
    return a * b;
  }

  Expr item(bool& numeric) {
    ws();
    check_lexical();
    SourcePos p = pos();
    numeric = false;
    char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c))) {
      numeric = true;
      std::int64_t n = integer();
      ws();
      if (peek() == '/') {
        get();
        ws();
        std::int64_t d = integer();
        if (d == 0) error_at(ErrorCategory::Syntax, p, "zero denominator");
        return Expr::constant(Coefficient(Rational(n, d)));
      }
      return Expr::constant(Coefficient(n));
    }
    if (c == '(') {
      get();
      ++depth_;
      Expr e = expression();
      --depth_;
      expect(')');
      if (is_constant(e)) {
        numeric = true;
        return fold_constant(e);
      }
      return e;
    }
    if (!ident_start(c)) {
      if (at_end()) error(ErrorCategory::Syntax, "unexpected end of input");
      error(ErrorCategory::Syntax, "unexpected '" + std::string(1, c) + "'");
    }
    std::string w = word();
    if (w == "sqrt3") {
      numeric = true;
      return Expr::constant(Coefficient::sqrt3());
    }
    if (w == "sym" || w == "asym") {
      expect('(');
      std::vector<std::string> names;
      for (;;) {
        ws_all();
        if (peek() == ')') break;
        if (peek() == ',') {
          get();
          continue;
        }
        names.push_back(index_name());
      }
      get();
      expect('{');
      ++depth_;
      Expr body = expression();
      --depth_;
      expect('}');
      try {
        return w == "sym" ? symmetrize(body, names) : antisymmetrize(body, names);
      } catch (const StructuralError& e) {
        error_at(ErrorCategory::IndexBalance, p, e.what());
      }
    }
    if (w == "eps") {
      auto idx = index_block();
      if (idx.size() != 2 || idx[0].variance != idx[1].variance)
        error_at(ErrorCategory::IndexBalance, p, "eps takes two indices of the same variance");
      return Expr::factor(idx[0].variance == Variance::Lower ? Factor::eps_lower(idx[0].name, idx[1].name)
                                                             : Factor::eps_upper(idx[0].name, idx[1].name));
    }
    if (w == "delta") {
      auto idx = index_block();
      if (idx.size() != 2 || idx[0].variance == idx[1].variance)
        error_at(ErrorCategory::IndexBalance, p, "delta takes one lower and one upper index");
      if (idx[0].variance == Variance::Upper) std::swap(idx[0], idx[1]);
      return Expr::factor(Factor::delta(idx[0].name, idx[1].name));
    }
    if (auto op = deriv_keyword(w)) {
      auto d = index_block();
      if (d.empty()) error_at(ErrorCategory::IndexBalance, p, "derivative needs at least one index");
      ws();
      bool paren = peek() == '(';
      if (paren) {
        get();
        ++depth_;
        ws_all();
      }
      SourcePos op_pos = pos();
      if (!ident_start(peek())) error(ErrorCategory::Syntax, "expected derivative operand");
      std::string name = word();
      if (reserved().count(name)) error_at(ErrorCategory::Syntax, op_pos, "derivative operand must be a symbol");
      auto idx = symbol_indices(name, op_pos);
      if (paren) {
        --depth_;
        expect(')');
      }
      return Expr::factor(Factor::derivative(*op, d, name, idx));
    }
    if (reserved().count(w)) error_at(ErrorCategory::Syntax, p, "unexpected keyword " + w);
    auto idx = symbol_indices(w, p);
    return Expr::factor(Factor::sym(w, idx));
  }

  std::vector<Index> symbol_indices(const std::string& name, SourcePos p) {
    if (!table_.contains(name)) error_at(ErrorCategory::Undeclared, p, "undeclared symbol " + name);
    auto idx = index_block();
    int arity = table_.at(name).arity;
    if (static_cast<int>(idx.size()) != arity)
      error_at(ErrorCategory::IndexBalance, p,
               name + " expects " + std::to_string(arity) + " indices, got " + std::to_string(idx.size()));
    return idx;
  }

  std::string index_name() {
    if (!index_start(peek())) {
      check_lexical();
      error(ErrorCategory::Syntax, "expected an index name");
    }
    std::string n;
    while (index_char(peek())) n += get();
    return n;
  }

  std::vector<Index> index_block() {
    std::vector<Index> out;
    while (peek() == '_' || peek() == '^') {
      Variance v = get() == '_' ? Variance::Lower : Variance::Upper;
      if (peek() == '{') {
        get();
        ++depth_;
        for (;;) {
          ws();
          if (peek() == '}') break;
          if (peek() == ',') {
            get();
            continue;
          }
          if (at_end()) error(ErrorCategory::Syntax, "unterminated index block");
          out.push_back({index_name(), v});
        }
        --depth_;
        get();
      } else if (ident_start(peek())) {
        out.push_back({std::string(1, get()), v});
      } else {
        check_lexical();
        error(ErrorCategory::Syntax, "expected index after '_' or '^'");
      }
    }
    return out;
  }

  std::string_view s_;
  SymbolTable& table_;
  std::size_t i_ = 0;
  int line_ = 1, col_ = 1;
  int depth_ = 0;
};

}  // namespace

Session parse_session(std::string_view text) {
  SymbolTable table;
  return Parser(text, table).session();
}

Session parse_session_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_session(ss.str());
}

Expr parse_expr(std::string_view text, const SymbolTable& table) {
  SymbolTable copy = table;
  return Parser(text, copy).single_expression();
}

// ---------------------------------------------------------------------------
// printer

namespace {

std::string index_block_str(const std::vector<Index>& idx) {
  std::string out;
  std::size_t i = 0;
  while (i < idx.size()) {
    Variance v = idx[i].variance;
    out += v == Variance::Lower ? "_{" : "^{";
    bool first = true;
    while (i < idx.size() && idx[i].variance == v) {
      out += (first ? "" : " ") + idx[i].name;
      first = false;
      ++i;
    }
    out += "}";
  }
  return out;
}

}  // namespace

std::string print_factor(const Factor& f) {
  switch (f.kind) {
    case FactorKind::Symbol: return f.symbol + index_block_str(f.indices);
    case FactorKind::EpsLower:
    case FactorKind::EpsUpper: return "eps" + index_block_str(f.indices);
    case FactorKind::Delta: return "delta" + index_block_str(f.indices);
    case FactorKind::Derivative:
      return keyword(f.op) + index_block_str(f.deriv) + " " + f.symbol + index_block_str(f.indices);
  }
  return "?";
}

std::string print(const Expr& e) {
  std::string out;
  bool first = true;
  for (const auto& t : e.terms()) {
    if (t.coeff.is_zero()) continue;
    bool neg = t.coeff.is_negative();
    Coefficient mag = neg ? -t.coeff : t.coeff;
    out += first ? (neg ? "-" : "") : (neg ? " - " : " + ");
    first = false;
    std::string body;
    for (const auto& f : t.factors) body += (body.empty() ? "" : " * ") + print_factor(f);
    if (body.empty()) out += mag.str();
    else if (mag.is_one()) out += body;
    else out += mag.str() + " " + body;
  }
  return first ? "0" : out;
}

std::string print_decl(const SymbolDecl& d) {
  std::ostringstream os;
  os << "declare " << d.name << "/" << d.arity;
  if (d.bundle) {
    const auto& b = *d.bundle;
    if (b.notation() == Notation::Leg) os << " : leg(" << b.u() << ", " << b.valence() << ", " << b.v() << ")";
    else os << " : " << to_string(b.notation()) << "(" << b.valence() << ", " << b.weight() << ")";
  }
  std::vector<std::vector<int>> dflt;
  if (d.arity > 1) {
    dflt.emplace_back();
    for (int i = 0; i < d.arity; ++i) dflt.back().push_back(i);
  }
  if (d.symmetry != dflt) {
    os << " sym(";
    for (std::size_t g = 0; g < d.symmetry.size(); ++g) {
      if (g) os << " | ";
      for (std::size_t i = 0; i < d.symmetry[g].size(); ++i) os << (i ? " " : "") << d.symmetry[g][i];
    }
    os << ")";
  }
  return os.str();
}

std::string print_session(const Session& s) {
  std::string out;
  for (const auto& st : s.statements) {
    switch (st.kind) {
      case StatementKind::Declare: out += print_decl(st.decl); break;
      case StatementKind::Geometry: out += "geometry " + to_string(st.geometry); break;
      case StatementKind::Def: out += "def " + st.name + " = " + print(st.lhs); break;
      case StatementKind::Check: out += "check " + print(st.lhs) + " == " + print(st.rhs); break;
      case StatementKind::Invariant: out += "invariant " + st.name; break;
      case StatementKind::Zero: out += "zero " + st.name; break;
      case StatementKind::Bare: out += print(st.lhs); break;
    }
    out += "\n";
  }
  return out;
}

}  // namespace contact_spinor
