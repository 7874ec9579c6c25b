// contact-spinor: canonical forms, verification suites and torsion tables.
//
// Exit codes: 0 every requested check passed, 1 a check failed,
// 2 bad input (usage, I/O, parse or frame errors).

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <random>
#include <sstream>

#include "contact_spinor/bundle.hpp"
#include "contact_spinor/numeric.hpp"
#include "contact_spinor/parser.hpp"
#include "contact_spinor/scale.hpp"
#include "contact_spinor/suites.hpp"

using namespace contact_spinor;
using nlohmann::json;

namespace {

constexpr std::uint64_t kDefaultSeed = 20240611;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  double tol = 1e-6;
  std::optional<std::uint64_t> seed;
  std::string format;  // empty: command default
  std::uint64_t resolved_seed() const {
    if (seed) return *seed;
    if (const char* env = std::getenv("CONTACT_SPINOR_SEED")) {
      try {
        std::size_t used = 0;
        auto v = std::stoull(env, &used);
        if (used == std::string(env).size()) return v;
      } catch (const std::exception&) {
      }
      throw InputError(std::string("CONTACT_SPINOR_SEED is not an unsigned integer: ") + env);
    }
    return kDefaultSeed;
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10e", v);
  return buf;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

numeric::FrameField load_frame(const std::string& arg, std::mt19937_64& rng) {
  if (arg == "constant") return numeric::constant_frame();
  if (arg == "random") return numeric::random_polynomial_frame(rng, 2, 0.4);
  return numeric::FrameField::from_json(read_json(arg));
}

std::vector<numeric::Point> load_points(const std::string& arg, std::mt19937_64& rng) {
  if (arg.rfind("random:", 0) == 0) {
    std::size_t n = 0;
    try {
      n = std::stoul(arg.substr(7));
    } catch (const std::exception&) {
      throw InputError("bad point count in " + arg);
    }
    return numeric::random_points(rng, n);
  }
  try {
    return numeric::points_from_json(read_json(arg));
  } catch (const json::exception& e) {
    throw InputError(arg + ": " + e.what());
  }
}

void header(std::ostream& os, const std::string& cmd, const Globals& g) {
  os << "# contact-spinor " << cmd << " seed=" << g.resolved_seed() << " tol=" << num(g.tol) << "\n";
}

// ---------------------------------------------------------------------------

int cmd_canon(const std::string& file, const Globals& g) {
  Session s;
  try {
    s = parse_session_file(file);
  } catch (const ParseError& e) {
    std::cerr << file << ":" << e.pos().line << ":" << e.pos().col << ": " << to_string(e.category())
              << " error: " << e.detail() << "\n";
    return 2;
  }
  std::string fmt = g.format.empty() ? "text" : g.format;
  ScaleContext ctx;
  if (s.geometry) ctx.geometry = *s.geometry;
  json rows = json::array();
  bool all = true;
  for (const auto& st : s.statements) {
    json r = {{"line", st.pos.line}};
    switch (st.kind) {
      case StatementKind::Declare:
        r["kind"] = "declare";
        r["text"] = print_decl(st.decl);
        break;
      case StatementKind::Geometry:
        r["kind"] = "geometry";
        r["text"] = "geometry " + to_string(st.geometry);
        break;
      case StatementKind::Def:
        r["kind"] = "def";
        r["name"] = st.name;
        r["text"] = print(canonicalize(st.lhs, s.symbols));
        break;
      case StatementKind::Bare:
        r["kind"] = "expr";
        r["text"] = print(canonicalize(st.lhs, s.symbols));
        break;
      case StatementKind::Check: {
        // hatted derivatives expand by the session geometry's laws
        Expr lhs = hat_rewrite(st.lhs, s.symbols, ctx), rhs = hat_rewrite(st.rhs, s.symbols, ctx);
        bool ok = equal(lhs, rhs, s.symbols);
        r["kind"] = "check";
        r["text"] = print(canonicalize(lhs - rhs, s.symbols));
        r["pass"] = ok;
        all = all && ok;
        break;
      }
      case StatementKind::Invariant:
      case StatementKind::Zero: {
        const Expr& body = s.def(st.name);
        bool ok = st.kind == StatementKind::Zero ? is_zero(body, s.symbols) : is_invariant(body, s.symbols, ctx);
        r["kind"] = st.kind == StatementKind::Zero ? "zero" : "invariant";
        r["name"] = st.name;
        r["pass"] = ok;
        all = all && ok;
        break;
      }
    }
    rows.push_back(r);
  }
  if (fmt == "json") {
    std::cout << json{{"file", file}, {"statements", rows}, {"pass", all}}.dump(2) << "\n";
  } else {
    for (const auto& r : rows) {
      std::string kind = r["kind"];
      std::string verdict = r.contains("pass") ? (r["pass"].get<bool>() ? "PASS" : "FAIL") : "";
      std::string name = r.value("name", "");
      std::string text = r.value("text", "");
      if (fmt == "tsv") {
        std::cout << r["line"].get<int>() << "\t" << kind << "\t" << name << "\t" << verdict << "\t" << text << "\n";
        continue;
      }
      if (kind == "def") std::cout << "def " << name << " = " << text << "\n";
      else if (kind == "check") std::cout << "check " << verdict << "  residual " << text << "\n";
      else if (kind == "invariant" || kind == "zero") std::cout << kind << " " << name << " " << verdict << "\n";
      else std::cout << text << "\n";
    }
  }
  return all ? 0 : 1;
}

std::vector<CheckResult> run_suites(const std::vector<Suite>& which, const Globals& g) {
  SuiteOptions opt;
  opt.tol = g.tol;
  opt.seed = g.resolved_seed();
  std::vector<CheckResult> out;
  for (Suite s : which) {
    auto r = run_suite(s, opt);
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

json checks_json(const std::vector<CheckResult>& rs) {
  json a = json::array();
  for (const auto& r : rs) a.push_back({{"suite", r.suite}, {"check", r.name}, {"pass", r.passed}, {"detail", r.detail}});
  return a;
}

void print_checks(const std::vector<CheckResult>& rs, const std::string& fmt) {
  for (const auto& r : rs) {
    if (fmt == "tsv") std::cout << r.suite << "\t" << r.name << "\t" << (r.passed ? "PASS" : "FAIL") << "\t" << r.detail << "\n";
    else std::cout << (r.passed ? "PASS " : "FAIL ") << r.suite << ": " << r.name << "  [" << r.detail << "]\n";
  }
}

bool all_passed(const std::vector<CheckResult>& rs) {
  return std::all_of(rs.begin(), rs.end(), [](const CheckResult& r) { return r.passed; });
}

int cmd_verify(std::vector<Suite> which, const Globals& g) {
  if (which.empty()) which = {Suite::Conformal3D, Suite::G2, Suite::Leg};
  auto rs = run_suites(which, g);
  std::string fmt = g.format.empty() ? "text" : g.format;
  if (fmt == "json") {
    std::cout << json{{"seed", g.resolved_seed()}, {"tol", g.tol}, {"checks", checks_json(rs)}, {"pass", all_passed(rs)}}
                     .dump(2)
              << "\n";
  } else {
    header(std::cout, "verify", g);
    print_checks(rs, fmt);
    if (fmt == "text") std::cout << (all_passed(rs) ? "ALL PASS" : "SOME CHECKS FAILED") << "\n";
  }
  return all_passed(rs) ? 0 : 1;
}

json psi_rows(const std::vector<numeric::Point>& pts, const std::vector<std::array<double, 8>>& psi) {
  json a = json::array();
  for (std::size_t i = 0; i < pts.size(); ++i) a.push_back({{"point", pts[i]}, {"psi", psi[i]}});
  return a;
}

int cmd_psi(const std::string& frame, const std::string& points, const Globals& g) {
  std::mt19937_64 rng(g.resolved_seed());
  auto f = load_frame(frame, rng);
  auto pts = load_points(points, rng);
  auto psi = numeric::psi_table(f, pts);
  std::string fmt = g.format.empty() ? "tsv" : g.format;
  if (fmt == "json") {
    std::cout << json{{"seed", g.resolved_seed()}, {"tol", g.tol}, {"frame", frame}, {"rows", psi_rows(pts, psi)}}.dump(2)
              << "\n";
    return 0;
  }
  header(std::cout, "psi", g);
  std::string sep = fmt == "tsv" ? "\t" : "  ";
  std::cout << "point" << sep << "x1" << sep << "x2" << sep << "y1" << sep << "y2" << sep << "t";
  for (int k = 0; k < 8; ++k) std::cout << sep << "psi" << k;
  std::cout << "\n";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::cout << i;
    for (double c : pts[i]) std::cout << sep << num(c);
    for (double v : psi[i]) std::cout << sep << num(v);
    std::cout << "\n";
  }
  return 0;
}

bool rank_ok(const numeric::SystemReport& r, double tol) {
  return r.rows == 20 && r.cols == 12 && r.rank == 12 && r.consistency_dim == 8 && r.alignment_residual < tol &&
         r.psi_defect_residual < tol;
}

int cmd_rank(const std::string& frame, const std::string& points, const Globals& g) {
  std::mt19937_64 rng(g.resolved_seed());
  auto f = load_frame(frame, rng);
  auto pts = load_points(points, rng);
  auto reps = numeric::system_table(f, pts);
  bool ok = std::all_of(reps.begin(), reps.end(), [&](const auto& r) { return rank_ok(r, g.tol); });
  std::string fmt = g.format.empty() ? "tsv" : g.format;
  if (fmt == "json") {
    json a = json::array();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto& r = reps[i];
      a.push_back({{"point", pts[i]}, {"rows", r.rows}, {"cols", r.cols}, {"rank", r.rank},
                   {"consistency_dim", r.consistency_dim}, {"residual", r.residual},
                   {"alignment_residual", r.alignment_residual}, {"psi_defect_residual", r.psi_defect_residual},
                   {"transform_condition", r.transform_condition}, {"psi", r.psi}});
    }
    std::cout << json{{"seed", g.resolved_seed()}, {"tol", g.tol}, {"frame", frame}, {"rows", a}, {"pass", ok}}.dump(2)
              << "\n";
    return ok ? 0 : 1;
  }
  header(std::cout, "rank", g);
  std::string sep = fmt == "tsv" ? "\t" : "  ";
  std::cout << "point" << sep << "rows" << sep << "cols" << sep << "rank" << sep << "nullity" << sep << "residual" << sep
            << "alignment" << sep << "psi_defect" << sep << "cond_T\n";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& r = reps[i];
    std::cout << i << sep << r.rows << sep << r.cols << sep << r.rank << sep << r.consistency_dim << sep
              << num(r.residual) << sep << num(r.alignment_residual) << sep << num(r.psi_defect_residual) << sep
              << num(r.transform_condition) << "\n";
  }
  return ok ? 0 : 1;
}

int cmd_report(const Globals& g) {
  auto rs = run_suites({Suite::Conformal3D, Suite::G2, Suite::Leg}, g);
  std::mt19937_64 rng(g.resolved_seed() ^ 0x5eedULL);
  auto f = numeric::random_polynomial_frame(rng, 2, 0.4);
  auto pts = numeric::random_points(rng, 10);
  auto reps = numeric::system_table(f, pts);
  bool sys = std::all_of(reps.begin(), reps.end(), [&](const auto& r) { return rank_ok(r, g.tol); });
  rs.push_back({"report", "random frame system", sys, std::to_string(pts.size()) + " points"});
  bool ok = all_passed(rs);
  std::string fmt = g.format.empty() ? "json" : g.format;
  if (fmt == "json") {
    json psi = json::array();
    for (std::size_t i = 0; i < pts.size(); ++i) psi.push_back({{"point", pts[i]}, {"psi", reps[i].psi}, {"rank", reps[i].rank}});
    std::cout << json{{"seed", g.resolved_seed()}, {"tol", g.tol}, {"checks", checks_json(rs)},
                      {"frame", f.to_json()}, {"psi_table", psi}, {"pass", ok}}
                     .dump(2)
              << "\n";
  } else {
    header(std::cout, "report", g);
    print_checks(rs, fmt);
    int failed = static_cast<int>(std::count_if(rs.begin(), rs.end(), [](const auto& r) { return !r.passed; }));
    std::cout << (fmt == "tsv" ? "# " : "") << rs.size() - failed << "/" << rs.size() << " checks passed\n";
  }
  return ok ? 0 : 1;
}

int dump_dictionary(const Globals& g) {
  std::string fmt = g.format.empty() ? "text" : g.format;
  if (fmt == "json") {
    json a = json::array();
    for (const auto& e : dictionary_table())
      a.push_back({{"notation", to_string(e.notation)}, {"name", e.name}, {"label", e.label.str()}});
    std::cout << a.dump(2) << "\n";
    return 0;
  }
  for (const auto& e : dictionary_table())
    std::cout << to_string(e.notation) << (fmt == "tsv" ? "\t" : "  ") << e.name << (fmt == "tsv" ? "\t" : "  ")
              << e.label.str() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spinor calculus for G2 and Legendrean contact structures", "contact-spinor"};
  app.require_subcommand(0, 1);
  Globals g;
  bool dictionary = false;
  app.add_option("--tol", g.tol, "tolerance for numeric checks")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "random seed (default: $CONTACT_SPINOR_SEED, then 20240611)");
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"text", "tsv", "json"}));
  app.add_flag("--dump-dictionary", dictionary, "print the named-bundle dictionary and exit");

  std::string canon_file;
  auto* canon = app.add_subcommand("canon", "parse a session file and print canonical forms");
  canon->add_option("file", canon_file, "session file (.spn)")->required();

  auto* verify = app.add_subcommand("verify", "run verification suites");
  bool v3 = false, vg = false, vl = false, va = false;
  verify->add_flag("--3d", v3, "three-dimensional conformal suite");
  verify->add_flag("--g2", vg, "G2 contact suite");
  verify->add_flag("--leg", vl, "Legendrean and flying-saucer suite");
  verify->add_flag("--all", va, "every suite (default)");

  std::string frame = "constant", points = "random:10";
  auto* psi = app.add_subcommand("psi", "tabulate the eight obstructions");
  auto* rank = app.add_subcommand("rank", "20 x 12 system diagnostics");
  for (auto* c : {psi, rank}) {
    c->add_option("--frame", frame, "frame JSON file, 'constant' or 'random'");
    c->add_option("--points", points, "points JSON file or random:N");
  }
  auto* report = app.add_subcommand("report", "all suites plus a random-frame table");

  for (auto* c : {canon, verify, psi, rank, report}) {
    c->add_option("--tol", g.tol, "tolerance for numeric checks")->check(CLI::PositiveNumber);
    c->add_option("--seed", g.seed, "random seed");
    c->add_option("--format", g.format, "output format")->check(CLI::IsMember({"text", "tsv", "json"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (dictionary) return dump_dictionary(g);
    if (*canon) return cmd_canon(canon_file, g);
    if (*verify) {
      std::vector<Suite> which;
      if (v3 || va) which.push_back(Suite::Conformal3D);
      if (vg || va) which.push_back(Suite::G2);
      if (vl || va) which.push_back(Suite::Leg);
      return cmd_verify(which, g);
    }
    if (*psi) return cmd_psi(frame, points, g);
    if (*rank) return cmd_rank(frame, points, g);
    if (*report) return cmd_report(g);
    std::cout << app.help();
    return 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const numeric::FrameError& e) {
    std::cerr << "frame error: " << e.what() << "\n";
  } catch (const numeric::EvaluationError& e) {
    std::cerr << "evaluation error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 2;
}
