#include "recmc/driver.hpp"

namespace recmc {
namespace {

void fill(Model& m, const std::vector<Var>& vars) {
  for (const auto& v : vars)
    if (!m.has(v)) {
      if (v.sort == Sort::Bool)
        m.set_bool(v, false);
      else
        m.set_num(v, 0);
    }
}

std::vector<Var> all_vars(const Procedure& p) {
  std::vector<Var> v = p.formals();
  v.insert(v.end(), p.locals.begin(), p.locals.end());
  return v;
}

Formula pin(const Var& v, const Value& value) {
  if (v.sort == Sort::Bool) return mk_bool(v, std::get<bool>(value));
  return mk_cmp(Cmp::Eq, LinTerm::variable(v), LinTerm::constant(std::get<Rational>(value)));
}

bool fail_with(std::string* why, const std::string& msg) {
  if (why) *why = msg;
  return false;
}

class CexBuilder {
 public:
  CexBuilder(const Program& prog, const AssertionMap& rho, Solver& s) : prog_(prog), rho_(rho), s_(s) {}

  CexNode expand(const std::string& proc, int bound, const Fact& fact, const Formula& pins) {
    if (!fact.provenance)
      throw Error(ErrorKind::ProvenanceGap, "fact " + std::to_string(fact.id) + " of " + proc + " has no provenance");
    const Provenance& prov = *fact.provenance;
    const Procedure& p = prog_.proc(proc);
    if (prov.path >= p.paths.size()) throw Error(ErrorKind::ProvenanceGap, "bad path index");
    const Path& path = p.paths[prov.path];
    if (prov.calls.size() != path.calls.size()) throw Error(ErrorKind::ProvenanceGap, "call count mismatch");

    std::vector<Formula> parts{pins};
    for (const auto& l : path.literals) parts.push_back(Formula::literal(l));
    std::vector<std::vector<std::pair<int, Formula>>> options(path.calls.size());
    for (std::size_t i = 0; i < path.calls.size(); ++i) {
      std::vector<Formula> alts;
      for (const auto& [cb, id] : prov.calls[i].facts) {
        if (cb >= bound) throw Error(ErrorKind::ProvenanceGap, "callee fact is not below its caller");
        Formula fi = instantiate_call(path.calls[i], rho_.fact(path.calls[i].callee, cb, id).formula, prog_);
        options[i].emplace_back(cb, fi);
        alts.push_back(fi);
      }
      parts.push_back(Formula::disj(alts));
    }
    SatResult r = s_.check_sat(Formula::conj(parts));
    if (r.status == SatStatus::Unknown) throw Error(ErrorKind::ResourceLimit, r.reason);
    if (!r.sat()) throw Error(ErrorKind::ProvenanceGap, "path of " + proc + " cannot be re-solved");

    CexNode node;
    node.proc = proc;
    node.path = prov.path;
    node.model = r.model;
    fill(node.model, all_vars(p));
    for (std::size_t i = 0; i < path.calls.size(); ++i) {
      const CallAtom& c = path.calls[i];
      const Procedure& callee = prog_.proc(c.callee);
      std::vector<Var> formals = callee.formals();
      std::vector<Formula> child_pins;
      for (std::size_t a = 0; a < formals.size(); ++a) child_pins.push_back(pin(formals[a], node.model.value(c.args[a])));
      std::size_t chosen = options[i].size();
      for (std::size_t o = 0; o < options[i].size() && chosen == options[i].size(); ++o)
        if (eval(options[i][o].second, node.model)) chosen = o;
      if (chosen == options[i].size()) throw Error(ErrorKind::ProvenanceGap, "no callee fact matches the model");
      auto [cb, id] = prov.calls[i].facts[chosen];
      node.children.push_back(expand(c.callee, cb, rho_.fact(c.callee, cb, id), Formula::conj(child_pins)));
    }
    return node;
  }

 private:
  const Program& prog_;
  const AssertionMap& rho_;
  Solver& s_;
};

bool validate_node(const Program& prog, const CexNode& node, int depth, int n, std::string* why) {
  if (depth > n) return fail_with(why, "tree deeper than the bound");
  if (!prog.has(node.proc)) return fail_with(why, "unknown procedure " + node.proc);
  const Procedure& p = prog.proc(node.proc);
  if (node.path >= p.paths.size()) return fail_with(why, node.proc + ": no path " + std::to_string(node.path));
  const Path& path = p.paths[node.path];
  for (const auto& v : all_vars(p))
    if (!node.model.has(v)) return fail_with(why, node.proc + ": no value for " + v.name);
  for (const auto& l : path.literals)
    if (!eval(l, node.model)) return fail_with(why, node.proc + ": path literal " + to_sexpr(l) + " is false");
  if (node.children.size() != path.calls.size()) return fail_with(why, node.proc + ": wrong number of children");
  for (std::size_t i = 0; i < path.calls.size(); ++i) {
    const CallAtom& c = path.calls[i];
    const CexNode& child = node.children[i];
    if (child.proc != c.callee) return fail_with(why, node.proc + ": child " + std::to_string(i) + " is not " + c.callee);
    std::vector<Var> formals = prog.proc(c.callee).formals();
    for (std::size_t a = 0; a < formals.size(); ++a) {
      if (!child.model.has(formals[a])) return fail_with(why, c.callee + ": no value for " + formals[a].name);
      if (child.model.value(formals[a]) != node.model.value(c.args[a]))
        return fail_with(why, node.proc + " -> " + c.callee + ": argument " + c.args[a].name + " disagrees");
    }
    if (!validate_node(prog, child, depth + 1, n, why)) return false;
  }
  return true;
}

}  // namespace

const char* verdict_name(VerdictKind k) {
  switch (k) {
    case VerdictKind::Safe: return "SAFE";
    case VerdictKind::Unsafe: return "UNSAFE";
    case VerdictKind::Unknown: return "UNKNOWN";
  }
  return "?";
}

std::optional<int> check_inductive(const Program& prog, AssertionMap& sigma, int n, Solver& s) {
  for (int k = 0; k <= n; ++k) {
    bool all = true;
    Environment env = o_env(sigma, k, prog);
    for (const auto& p : prog.procedures()) {
      std::vector<Fact> facts = sigma.at(p.name, k);
      if (facts.empty()) continue;
      Formula body = instantiate_body(p, env, prog);
      for (const auto& f : facts) {
        if (sigma.contains(p.name, k + 1, f.formula)) continue;
        if (s.entails(body, f.formula))
          sigma.add(p.name, k + 1, f.formula);
        else
          all = false;
      }
    }
    if (all) return k;
  }
  return std::nullopt;
}

CexNode build_cex(const Program& prog, const AssertionMap& rho, const Formula& safe, int n, Solver& s) {
  const Procedure& main = prog.main_proc();
  for (int b = 0; b <= n; ++b)
    for (const auto& f : rho.at(main.name, b)) {
      SatResult r = s.check_sat(f.formula && negate(safe));
      if (r.status == SatStatus::Unknown) throw Error(ErrorKind::ResourceLimit, r.reason);
      if (!r.sat()) continue;
      fill(r.model, main.formals());
      std::vector<Formula> pins;
      for (const auto& v : main.formals()) pins.push_back(pin(v, r.model.value(v)));
      return CexBuilder(prog, rho, s).expand(main.name, b, f, Formula::conj(pins));
    }
  throw Error(ErrorKind::ProvenanceGap, "no reachability fact of main violates the property");
}

bool validate_proof(const Program& prog, const Environment& proof, const Formula& safe, std::string* why) {
  Solver s(prog.mode);
  const Procedure& main = prog.main_proc();
  if (!s.entails(proof.get(main.name), safe)) return fail_with(why, "not safe: " + main.name + " does not imply the property");
  for (const auto& p : prog.procedures()) {
    std::vector<Var> formals = p.formals();
    VarSet allowed(formals.begin(), formals.end());
    for (const auto& v : free_vars(proof.get(p.name)))
      if (!allowed.count(v)) return fail_with(why, p.name + ": formula mentions " + v.name);
    if (!s.entails(instantiate_body(p, proof, prog), proof.get(p.name)))
      return fail_with(why, "not inductive at " + p.name);
  }
  return true;
}

bool validate_cex(const Program& prog, const CexNode& root, const Formula& safe, int n, std::string* why) {
  if (root.proc != prog.main) return fail_with(why, "root is not main");
  if (!validate_node(prog, root, 0, n, why)) return false;
  if (eval(safe, root.model)) return fail_with(why, "root satisfies the property");
  if (prog.mode == Sort::Bool) {
    const Procedure& main = prog.main_proc();
    std::vector<bool> key;
    for (const auto& v : main.formals()) key.push_back(root.model.get_bool(v));
    if (!bool_bounded_semantics(main, n, prog).count(key))
      return fail_with(why, "root valuation is outside the bounded semantics");
  }
  return true;
}

Verdict check(const Program& prog, const Formula& safe, const CheckOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  Engine eng(prog, safe, opts.engine);
  eng.set_record_trace(opts.record_trace);
  if (opts.observer) eng.set_observer(opts.observer);
  auto finish = [&](VerdictKind k) {
    v.kind = k;
    v.stats = eng.stats();
    v.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (opts.record_trace) v.trace = eng.trace();
    return v;
  };
  try {
    for (int n = 0; n <= opts.max_bound; ++n) {
      v.bound = n;
      if (eng.run(n) == BndVerdict::Unsafe) {
        Solver s(prog.mode, opts.engine.limits);
        v.cex = build_cex(prog, eng.rho(), safe, n, s);
        std::string why;
        RECMC_CHECK(validate_cex(prog, *v.cex, safe, n, &why), "counterexample does not validate: " + why);
        return finish(VerdictKind::Unsafe);
      }
      if (std::optional<int> k = check_inductive(prog, eng.sigma(), n, eng.solver())) {
        SafetyProof proof{o_env(eng.sigma(), *k, prog), n, *k};
        std::string why;
        RECMC_CHECK(validate_proof(prog, proof.env, safe, &why), "proof does not validate: " + why);
        v.proof = proof;
        return finish(VerdictKind::Safe);
      }
    }
    v.reason = "bound exhausted";
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ResourceLimit) throw;
    v.reason = e.what();
  }
  return finish(VerdictKind::Unknown);
}

}  // namespace recmc
