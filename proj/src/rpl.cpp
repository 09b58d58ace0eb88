#include "recmc/rpl.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace recmc {
namespace {

struct Sexp {
  bool atom = false;
  std::string text;
  std::vector<Sexp> kids;
  int line = 1, col = 1;

  bool is(const std::string& head) const { return !atom && !kids.empty() && kids[0].atom && kids[0].text == head; }
};

[[noreturn]] void fail(const Sexp& at, const std::string& msg) { throw SyntaxError(at.line, at.col, msg); }

class Reader {
 public:
  explicit Reader(const std::string& text) : s_(text) {}

  std::vector<Sexp> read_all() {
    std::vector<Sexp> out;
    for (;;) {
      skip();
      if (pos_ >= s_.size()) return out;
      out.push_back(read());
    }
  }

 private:
  void skip() {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == ';') {
        while (pos_ < s_.size() && s_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  void advance() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  Sexp read() {
    skip();
    Sexp e;
    e.line = line_;
    e.col = col_;
    if (pos_ >= s_.size()) throw SyntaxError(line_, col_, "unexpected end of input");
    char c = s_[pos_];
    if (c == ')') throw SyntaxError(line_, col_, "unexpected ')'");
    if (c == '(') {
      advance();
      for (;;) {
        skip();
        if (pos_ >= s_.size()) throw SyntaxError(e.line, e.col, "unclosed '('");
        if (s_[pos_] == ')') {
          advance();
          return e;
        }
        e.kids.push_back(read());
      }
    }
    e.atom = true;
    while (pos_ < s_.size()) {
      char d = s_[pos_];
      if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' || d == ';') break;
      e.text += d;
      advance();
    }
    return e;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'')) return false;
  return true;
}

const std::set<std::string> kKeywords{"true", "false", "and", "or", "not", "call", "divides", "program",
                                       "procedure", "in", "out", "local", "body", "main", "mode", "assert-safe"};

/// Expression parsing in the scope of one procedure.
class Scope {
 public:
  Scope(std::map<std::string, Var> vars, const Program* prog, Sort mode)
      : vars_(std::move(vars)), prog_(prog), mode_(mode) {}

  LinTerm term(const Sexp& e) const {
    if (e.atom) {
      Rational r;
      if (parse_rational(e.text, r)) return LinTerm::constant(r);
      const Var& v = var(e);
      if (v.sort == Sort::Bool) fail(e, "boolean variable " + e.text + " used as a number");
      return LinTerm::variable(v);
    }
    if (e.kids.empty() || !e.kids[0].atom) fail(e, "expected a term");
    const std::string& op = e.kids[0].text;
    if (op == "+") {
      LinTerm t;
      for (std::size_t i = 1; i < e.kids.size(); ++i) t = t + term(e.kids[i]);
      return t;
    }
    if (op == "-") {
      if (e.kids.size() < 2) fail(e, "'-' needs an argument");
      if (e.kids.size() == 2) return -term(e.kids[1]);
      LinTerm t = term(e.kids[1]);
      for (std::size_t i = 2; i < e.kids.size(); ++i) t = t - term(e.kids[i]);
      return t;
    }
    if (op == "*") {
      LinTerm t = LinTerm::constant(1);
      for (std::size_t i = 1; i < e.kids.size(); ++i) {
        LinTerm f = term(e.kids[i]);
        if (f.is_constant())
          t = t * f.constant_part();
        else if (t.is_constant())
          t = f * t.constant_part();
        else
          fail(e, "non-linear product");
      }
      return t;
    }
    fail(e, "unknown term operator '" + op + "'");
  }

  RawFormula formula(const Sexp& e) const {
    if (e.atom) {
      if (e.text == "true") return RawFormula::of(Formula::top());
      if (e.text == "false") return RawFormula::of(Formula::bottom());
      const Var& v = var(e);
      if (v.sort != Sort::Bool) fail(e, "numeric variable " + e.text + " used as a formula");
      return RawFormula::of(mk_bool(v));
    }
    if (e.kids.empty() || !e.kids[0].atom) fail(e, "expected a formula");
    const std::string& op = e.kids[0].text;
    auto args = [&](std::size_t n) {
      if (e.kids.size() != n + 1) fail(e, "'" + op + "' takes " + std::to_string(n) + " arguments");
    };
    if (op == "and" || op == "or") {
      std::vector<RawFormula> kids;
      for (std::size_t i = 1; i < e.kids.size(); ++i) kids.push_back(formula(e.kids[i]));
      return op == "and" ? RawFormula::mk_and(kids) : RawFormula::mk_or(kids);
    }
    if (op == "not") {
      args(1);
      return RawFormula::mk_not(formula(e.kids[1]));
    }
    if (op == "=>") {
      args(2);
      return RawFormula::mk_or({RawFormula::mk_not(formula(e.kids[1])), formula(e.kids[2])});
    }
    if (op == "call") return RawFormula::of(call(e));
    if (op == "divides") {
      args(2);
      Rational d;
      if (!e.kids[1].atom || !parse_rational(e.kids[1].text, d) || !is_integral(d) || d <= 0)
        fail(e.kids[1], "divisor must be a positive integer");
      if (mode_ != Sort::Int) fail(e, "divisibility needs an int program");
      return RawFormula::of(mk_divides(d.get_num(), term(e.kids[2])));
    }
    if (op == "=" && mode_ == Sort::Bool) {
      args(2);
      RawFormula a = formula(e.kids[1]), b = formula(e.kids[2]);
      return RawFormula::mk_or({RawFormula::mk_and({a, b}),
                                RawFormula::mk_and({RawFormula::mk_not(a), RawFormula::mk_not(b)})});
    }
    if (op == "<" || op == "<=" || op == "=" || op == ">" || op == ">=") {
      args(2);
      LinTerm a = term(e.kids[1]), b = term(e.kids[2]);
      if (op == "<") return RawFormula::of(mk_cmp(Cmp::Lt, a, b));
      if (op == "<=") return RawFormula::of(mk_cmp(Cmp::Le, a, b));
      if (op == ">") return RawFormula::of(mk_cmp(Cmp::Lt, b, a));
      if (op == ">=") return RawFormula::of(mk_cmp(Cmp::Le, b, a));
      return RawFormula::of(mk_cmp(Cmp::Eq, a, b));
    }
    fail(e, "unknown operator '" + op + "'");
  }

  Formula nnf(const Sexp& e) const {
    try {
      return to_nnf(formula(e));
    } catch (const Error& err) {
      if (err.kind() == ErrorKind::NegatedCall)
        throw Error(ErrorKind::ValidationError,
                    std::to_string(e.line) + ":" + std::to_string(e.col) + ": call under negation");
      throw;
    }
  }

 private:
  const Var& var(const Sexp& e) const {
    auto it = vars_.find(e.text);
    if (it == vars_.end()) fail(e, "undeclared variable '" + e.text + "'");
    return it->second;
  }

  Formula call(const Sexp& e) const {
    if (e.kids.size() < 2 || !e.kids[1].atom) fail(e, "call needs a procedure name");
    CallAtom c;
    c.callee = e.kids[1].text;
    for (std::size_t i = 2; i < e.kids.size(); ++i) {
      if (!e.kids[i].atom) fail(e.kids[i], "call arguments must be variables");
      c.args.push_back(var(e.kids[i]));
    }
    if (prog_ && prog_->has(c.callee) && prog_->proc(c.callee).formals().size() != c.args.size())
      throw Error(ErrorKind::ArityMismatch, std::to_string(e.line) + ":" + std::to_string(e.col) + ": " + c.callee +
                                                " expects " + std::to_string(prog_->proc(c.callee).formals().size()) +
                                                " arguments");
    return Formula::call(std::move(c));
  }

  std::map<std::string, Var> vars_;
  const Program* prog_;
  Sort mode_;
};

Sort parse_mode(const Sexp& e) {
  if (e.kids.size() != 2 || !e.kids[1].atom) fail(e, "expected (mode bool|rat|int)");
  const std::string& m = e.kids[1].text;
  if (m == "bool") return Sort::Bool;
  if (m == "rat" || m == "real") return Sort::Rat;
  if (m == "int") return Sort::Int;
  fail(e.kids[1], "unknown mode '" + m + "'");
}

std::string ident(const Sexp& e, const std::string& what) {
  if (!e.atom || !is_identifier(e.text) || kKeywords.count(e.text)) fail(e, "expected " + what);
  return e.text;
}

struct ProcDecl {
  const Sexp* form;
  Procedure proc;
  const Sexp* body = nullptr;
};

ProcDecl declare(const Sexp& e, Sort mode) {
  if (e.kids.size() < 2) fail(e, "procedure needs a name");
  ProcDecl d{&e, {}, nullptr};
  d.proc.name = ident(e.kids[1], "procedure name");
  bool seen_in = false, seen_out = false, seen_local = false;
  for (std::size_t i = 2; i < e.kids.size(); ++i) {
    const Sexp& part = e.kids[i];
    auto vars = [&](std::vector<Var>& into, bool& seen) {
      if (seen) fail(part, "repeated section");
      seen = true;
      for (std::size_t k = 1; k < part.kids.size(); ++k)
        into.emplace_back(d.proc.name + "." + ident(part.kids[k], "variable name"), mode);
    };
    if (part.is("in"))
      vars(d.proc.inputs, seen_in);
    else if (part.is("out"))
      vars(d.proc.outputs, seen_out);
    else if (part.is("local"))
      vars(d.proc.locals, seen_local);
    else if (part.is("body")) {
      if (d.body) fail(part, "repeated body");
      if (part.kids.size() != 2) fail(part, "body takes one expression");
      d.body = &part.kids[1];
    } else {
      fail(part, "unexpected procedure section");
    }
  }
  if (!d.body) fail(e, "procedure " + d.proc.name + " has no body");
  return d;
}

std::map<std::string, Var> scope_of(const Procedure& p, bool with_locals) {
  std::map<std::string, Var> m;
  auto add = [&](const std::vector<Var>& vs) {
    for (const auto& v : vs) {
      std::string n = short_name(v);
      if (!m.emplace(n, v).second) throw Error(ErrorKind::ValidationError, p.name + ": variable " + n + " declared twice");
    }
  };
  add(p.inputs);
  add(p.outputs);
  if (with_locals) add(p.locals);
  return m;
}

std::string var_list(const char* head, const std::vector<Var>& vs) {
  std::string s = std::string("(") + head;
  for (const auto& v : vs) s += " " + short_name(v);
  return s + ")";
}

}  // namespace

std::string short_name(const Var& v) {
  auto dot = v.name.find('.');
  return dot == std::string::npos ? v.name : v.name.substr(dot + 1);
}

std::string print_formula(const Formula& f) { return to_sexpr(f, short_name); }

SourceUnit parse_rpl(const std::string& text, std::optional<Sort> mode) {
  std::vector<Sexp> top = Reader(text).read_all();
  if (top.size() != 1) {
    if (top.empty()) throw SyntaxError(1, 1, "empty input");
    fail(top[1], "trailing input after the program");
  }
  const Sexp& prog = top[0];
  if (!prog.is("program")) fail(prog, "expected (program ...)");

  std::optional<Sort> declared;
  for (std::size_t i = 1; i < prog.kids.size(); ++i)
    if (prog.kids[i].is("mode")) {
      if (declared) fail(prog.kids[i], "repeated mode");
      declared = parse_mode(prog.kids[i]);
    }
  SourceUnit unit;
  unit.program.mode = mode ? *mode : declared.value_or(Sort::Int);
  const Sort m = unit.program.mode;

  std::vector<ProcDecl> decls;
  const Sexp* main = nullptr;
  const Sexp* safe = nullptr;
  for (std::size_t i = 1; i < prog.kids.size(); ++i) {
    const Sexp& e = prog.kids[i];
    if (e.is("mode")) continue;
    if (e.is("procedure")) {
      decls.push_back(declare(e, m));
    } else if (e.is("main")) {
      if (main) fail(e, "repeated main");
      if (e.kids.size() != 2) fail(e, "expected (main NAME)");
      main = &e;
    } else if (e.is("assert-safe")) {
      if (safe) fail(e, "repeated assert-safe");
      if (e.kids.size() != 2) fail(e, "assert-safe takes one expression");
      safe = &e;
    } else {
      fail(e, "unexpected top-level form");
    }
  }
  if (!main) fail(prog, "missing (main NAME)");

  // Signatures first so bodies may call procedures declared later.
  Program sigs;
  sigs.mode = m;
  for (const auto& d : decls) {
    if (sigs.has(d.proc.name)) fail(*d.form, "duplicate procedure " + d.proc.name);
    sigs.add(d.proc);
  }
  for (auto& d : decls) {
    Scope scope(scope_of(d.proc, true), &sigs, m);
    d.proc.body = scope.nnf(*d.body);
    unit.program.add(d.proc);
  }
  unit.program.main = ident(main->kids[1], "procedure name");
  unit.program.finalize();
  if (safe) {
    Scope scope(scope_of(unit.program.main_proc(), false), &unit.program, m);
    unit.safe = scope.nnf(safe->kids[1]);
    if (has_calls(unit.safe)) throw Error(ErrorKind::ValidationError, "the safety property may not contain calls");
  } else {
    unit.safe = Formula::top();
  }
  return unit;
}

SourceUnit load_rpl(const std::string& path, std::optional<Sort> mode) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_rpl(ss.str(), mode);
}

Formula parse_rpl_formula(const std::string& text, const Procedure& proc, const Program& prog) {
  std::vector<Sexp> top = Reader(text).read_all();
  if (top.size() != 1) throw SyntaxError(1, 1, "expected one expression");
  Scope scope(scope_of(proc, false), &prog, prog.mode);
  Formula f = scope.nnf(top[0]);
  if (has_calls(f)) throw Error(ErrorKind::ValidationError, "calls are not allowed here");
  return f;
}

std::string print_rpl(const SourceUnit& unit) {
  const Program& p = unit.program;
  std::ostringstream out;
  out << "(program\n  (mode " << (p.mode == Sort::Bool ? "bool" : p.mode == Sort::Rat ? "rat" : "int") << ")\n";
  for (const auto& proc : p.procedures()) {
    out << "  (procedure " << proc.name << " " << var_list("in", proc.inputs) << " " << var_list("out", proc.outputs)
        << " " << var_list("local", proc.locals) << "\n    (body " << print_formula(proc.body) << "))\n";
  }
  out << "  (main " << p.main << ")\n  (assert-safe " << print_formula(unit.safe) << "))\n";
  return out.str();
}

}  // namespace recmc
