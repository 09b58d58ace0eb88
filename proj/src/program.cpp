#include "recmc/program.hpp"

#include <functional>

namespace recmc {

std::vector<Var> Procedure::formals() const {
  std::vector<Var> f = inputs;
  f.insert(f.end(), outputs.begin(), outputs.end());
  return f;
}

void Program::add(Procedure p) {
  if (has(p.name)) throw Error(ErrorKind::ValidationError, "duplicate procedure " + p.name);
  index_[p.name] = procs_.size();
  procs_.push_back(std::move(p));
}

const Procedure& Program::proc(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw Error(ErrorKind::ValidationError, "unknown procedure " + name);
  return procs_[it->second];
}

namespace {

void check_calls(const Formula& f, const Program& prog, const std::map<std::string, Var>& scope,
                 const std::string& where) {
  switch (f.kind()) {
    case FKind::Call: {
      const CallAtom& c = f.call_atom();
      if (!prog.has(c.callee)) throw Error(ErrorKind::ValidationError, where + ": call to unknown procedure " + c.callee);
      std::vector<Var> formals = prog.proc(c.callee).formals();
      if (formals.size() != c.args.size())
        throw Error(ErrorKind::ArityMismatch, where + ": " + c.callee + " expects " + std::to_string(formals.size()) +
                                                  " arguments, got " + std::to_string(c.args.size()));
      for (std::size_t i = 0; i < formals.size(); ++i) {
        auto it = scope.find(c.args[i].name);
        if (it == scope.end()) throw Error(ErrorKind::ValidationError, where + ": undeclared " + c.args[i].name);
        if (it->second.sort != formals[i].sort)
          throw Error(ErrorKind::ValidationError, where + ": argument " + c.args[i].name + " of " + c.callee +
                                                      " has sort " + sort_name(it->second.sort));
      }
      return;
    }
    case FKind::And:
    case FKind::Or:
      for (const auto& k : f.children()) check_calls(k, prog, scope, where);
      return;
    default: return;
  }
}

}  // namespace

void Program::finalize(std::size_t path_limit) {
  if (!has(main)) throw Error(ErrorKind::ValidationError, "main procedure '" + main + "' is not defined");
  for (auto& p : procs_) {
    std::map<std::string, Var> scope;
    for (const auto& vars : {p.inputs, p.outputs, p.locals})
      for (const auto& v : vars) {
        if (!scope.emplace(v.name, v).second)
          throw Error(ErrorKind::ValidationError, p.name + ": variable " + v.name + " declared twice");
        if (v.sort != Sort::Bool && v.sort != mode)
          throw Error(ErrorKind::ValidationError, p.name + ": variable " + v.name + " is " + sort_name(v.sort) +
                                                      " in a " + sort_name(mode) + " program");
      }
    for (const auto& v : free_vars(p.body))
      if (!scope.count(v.name)) throw Error(ErrorKind::ValidationError, p.name + ": undeclared variable " + v.name);
    check_calls(p.body, *this, scope, p.name);
    p.paths = dnf_paths(p.body, path_limit);
  }
}

// ---- assertion maps ----------------------------------------------------------------

std::optional<int> AssertionMap::add(const std::string& proc, int bound, const Formula& f,
                                     std::optional<Provenance> prov) {
  auto& v = entries_[{proc, bound}];
  for (const auto& fact : v)
    if (fact.formula == f) return std::nullopt;
  int id = static_cast<int>(v.size());
  v.push_back(Fact{id, f, std::move(prov)});
  ++count_;
  return id;
}

const std::vector<Fact>& AssertionMap::at(const std::string& proc, int bound) const {
  static const std::vector<Fact> empty;
  auto it = entries_.find({proc, bound});
  return it == entries_.end() ? empty : it->second;
}

const Fact& AssertionMap::fact(const std::string& proc, int bound, int id) const {
  const auto& v = at(proc, bound);
  if (id < 0 || static_cast<std::size_t>(id) >= v.size())
    throw Error(ErrorKind::ProvenanceGap, "no fact " + std::to_string(id) + " at (" + proc + "," + std::to_string(bound) + ")");
  return v[static_cast<std::size_t>(id)];
}

bool AssertionMap::contains(const std::string& proc, int bound, const Formula& f) const {
  for (const auto& fact : at(proc, bound))
    if (fact.formula == f) return true;
  return false;
}

int AssertionMap::max_bound(const std::string& proc) const {
  int best = -1;
  for (const auto& [key, facts] : entries_)
    if (key.first == proc && !facts.empty()) best = std::max(best, key.second);
  return best;
}

// ---- environments ------------------------------------------------------------------

const Formula& Environment::get(const std::string& proc) const {
  auto it = map_.find(proc);
  return it == map_.end() ? fallback_ : it->second;
}

Environment u_env(const AssertionMap& rho, int b, const Program& prog) {
  Environment env(Formula::bottom());
  if (b < 0) return env;
  for (const auto& p : prog.procedures()) {
    std::vector<Formula> parts;
    for (const auto& [key, facts] : rho.entries())
      if (key.first == p.name && key.second <= b)
        for (const auto& f : facts) parts.push_back(f.formula);
    env.set(p.name, Formula::disj(parts));
  }
  return env;
}

Environment o_env(const AssertionMap& sigma, int b, const Program& prog) {
  if (b < 0) return Environment(Formula::bottom());
  Environment env(Formula::top());
  for (const auto& p : prog.procedures()) {
    std::vector<Formula> parts;
    for (const auto& [key, facts] : sigma.entries())
      if (key.first == p.name && key.second >= b)
        for (const auto& f : facts) parts.push_back(f.formula);
    env.set(p.name, Formula::conj(parts));
  }
  return env;
}

Formula instantiate_call(const CallAtom& c, const Formula& callee_formula, const Program& prog) {
  std::vector<Var> formals = prog.proc(c.callee).formals();
  if (formals.size() != c.args.size()) throw Error(ErrorKind::ArityMismatch, "call to " + c.callee);
  std::map<std::string, Var> m;
  for (std::size_t i = 0; i < formals.size(); ++i) m[formals[i].name] = c.args[i];
  return rename(callee_formula, m);
}

Formula instantiate(const Formula& f, const Environment& env, const Program& prog) {
  switch (f.kind()) {
    case FKind::Call: return instantiate_call(f.call_atom(), env.get(f.call_atom().callee), prog);
    case FKind::And:
    case FKind::Or: {
      std::vector<Formula> kids;
      for (const auto& k : f.children()) kids.push_back(instantiate(k, env, prog));
      return f.kind() == FKind::And ? Formula::conj(kids) : Formula::disj(kids);
    }
    default: return f;
  }
}

Formula instantiate(const Path& p, const Environment& env, const Program& prog) {
  std::vector<Formula> parts;
  for (const auto& l : p.literals) parts.push_back(Formula::literal(l));
  for (const auto& c : p.calls) parts.push_back(instantiate_call(c, env.get(c.callee), prog));
  return Formula::conj(parts);
}

Formula instantiate_body(const Procedure& p, const Environment& env, const Program& prog) {
  std::vector<Formula> parts;
  for (const auto& path : p.paths) parts.push_back(instantiate(path, env, prog));
  return Formula::disj(parts);
}

// ---- explicit semantics ------------------------------------------------------------

namespace {

using Levels = std::map<std::string, BoolRelation>;

void require_bool(const Program& prog) {
  if (prog.mode != Sort::Bool) throw Error(ErrorKind::WrongMode, "explicit semantics needs a boolean program");
}

/// One application of the body equations with calls read from `prev`.
BoolRelation apply_body(const Procedure& p, const Levels& prev) {
  std::vector<Var> formals = p.formals();
  std::vector<Var> all = formals;
  all.insert(all.end(), p.locals.begin(), p.locals.end());
  if (all.size() > kMaxEnumeratedVars)
    throw Error(ErrorKind::TooLarge, p.name + " has " + std::to_string(all.size()) + " variables");
  auto calls = [&](const CallAtom& c, const Model& m) {
    auto it = prev.find(c.callee);
    if (it == prev.end()) return false;
    std::vector<bool> key;
    for (const auto& a : c.args) key.push_back(m.get_bool(a));
    return it->second.count(key) != 0;
  };
  BoolRelation out;
  const std::size_t n = all.size();
  for (std::size_t bits = 0; bits < (std::size_t{1} << n); ++bits) {
    Model m;
    for (std::size_t i = 0; i < n; ++i) m.set_bool(all[i], (bits >> i) & 1U);
    if (!eval(p.body, m, calls)) continue;
    std::vector<bool> key;
    for (std::size_t i = 0; i < formals.size(); ++i) key.push_back((bits >> i) & 1U);
    out.insert(key);
  }
  return out;
}

Levels step(const Levels& prev, const Program& prog) {
  Levels next;
  for (const auto& p : prog.procedures()) next[p.name] = apply_body(p, prev);
  return next;
}

}  // namespace

BoolRelation bool_bounded_semantics(const Procedure& p, int b, const Program& prog) {
  require_bool(prog);
  Levels level;  // [[.]]^{-1}: every relation empty
  for (int k = 0; k <= b; ++k) level = step(level, prog);
  return b < 0 ? BoolRelation{} : level[p.name];
}

std::map<std::string, BoolRelation> bool_summaries(const Program& prog) {
  require_bool(prog);
  Levels level;
  for (;;) {
    Levels next = step(level, prog);
    if (next == level) return next;
    level = std::move(next);
  }
}

BoolRelation bool_models(const Formula& f, const std::vector<Var>& vars) {
  if (vars.size() > kMaxEnumeratedVars) throw Error(ErrorKind::TooLarge, "too many variables to enumerate");
  BoolRelation out;
  for (std::size_t bits = 0; bits < (std::size_t{1} << vars.size()); ++bits) {
    Model m;
    std::vector<bool> key;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      m.set_bool(vars[i], (bits >> i) & 1U);
      key.push_back((bits >> i) & 1U);
    }
    if (eval(f, m)) out.insert(key);
  }
  return out;
}

}  // namespace recmc
