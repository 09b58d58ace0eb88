#include "recmc/engine.hpp"

#include <algorithm>

namespace recmc {
namespace {

void complete(Model& m, const Formula& f) {
  for (const auto& v : free_vars(f))
    if (!m.has(v)) {
      if (v.sort == Sort::Bool)
        m.set_bool(v, false);
      else
        m.set_num(v, 0);
    }
}

Formula same_value(const Var& a, const Var& b) {
  if (a.sort == Sort::Bool) return (mk_bool(a) && mk_bool(b)) || (mk_bool(a, false) && mk_bool(b, false));
  return mk_cmp(Cmp::Eq, LinTerm::variable(a), LinTerm::variable(b));
}

/// psi over the call arguments, rewritten over the callee's formals. A
/// repeated argument becomes an equality between the formals it feeds.
Formula to_callee(const Formula& psi, const CallAtom& c, const Program& prog) {
  std::vector<Var> formals = prog.proc(c.callee).formals();
  std::map<std::string, Var> m;
  std::vector<Formula> parts;
  for (std::size_t i = 0; i < c.args.size(); ++i) {
    auto [it, fresh] = m.emplace(c.args[i].name, formals[i]);
    if (!fresh) parts.push_back(same_value(it->second, formals[i]));
  }
  parts.insert(parts.begin(), rename(psi, m));
  return Formula::conj(parts);
}

Formula cube_of(const Formula& f, const Model& m) {
  std::vector<Formula> parts;
  for (const auto& l : implicant(f, m)) parts.push_back(Formula::literal(l));
  return Formula::conj(parts);
}

}  // namespace

const char* rule_name(Rule r) {
  switch (r) {
    case Rule::Init: return "Init";
    case Rule::Sum: return "Sum";
    case Rule::Reach: return "Reach";
    case Rule::Query: return "Query";
    case Rule::Safe: return "Safe";
    case Rule::Unsafe: return "Unsafe";
  }
  return "?";
}

Engine::Engine(const Program& prog, Formula safe, EngineOptions opts)
    : prog_(prog), safe_(std::move(safe)), opts_(opts), solver_(prog.mode, opts.limits), itp_(solver_, opts.itp) {}

EngineStats Engine::stats() const {
  EngineStats s = stats_;
  s.solver_checks = solver_.stats().checks;
  s.interpolants = itp_.stats().queries;
  return s;
}

SatResult Engine::sat(const Formula& f) {
  SatResult r = solver_.check_sat(f);
  if (r.status == SatStatus::Unknown) throw Error(ErrorKind::ResourceLimit, r.reason);
  return r;
}

Formula Engine::project_counted(const std::vector<Var>& vars, const Formula& matrix, const Model& m) {
  ++stats_.projections;
  Formula out = project(vars, matrix, m, opts_.proj);
  return opts_.proj == ProjStrategy::Qe ? solver_.simplify(out) : out;
}

void Engine::emit(TraceEvent ev) {
  ev.step = stats_.steps();
  ev.level = level_;
  if (observer_) observer_(*this, ev);
  if (record_) trace_.push_back(std::move(ev));
}

void Engine::remove(int id) {
  queue_.erase(std::remove_if(queue_.begin(), queue_.end(), [&](const BoundedQuery& q) { return q.id == id; }),
               queue_.end());
}

BoundedQuery Engine::pick_next() const {
  const BoundedQuery* best = &queue_.front();
  for (const auto& q : queue_)
    if (q.bound < best->bound || (q.bound == best->bound && q.id < best->id)) best = &q;
  return *best;
}

bool Engine::pending(const BoundedQuery& q) {
  Formula over = o_env(sigma_, q.bound, prog_).get(q.proc);
  Formula under = u_env(rho_, q.bound, prog_).get(q.proc);
  return sat(over && q.phi).sat() && sat(under && q.phi).unsat();
}

BndVerdict Engine::run(int n) {
  auto start = std::chrono::steady_clock::now();
  level_ = n;
  ++stats_.runs;
  queue_.clear();
  const Procedure& main = prog_.main_proc();
  BoundedQuery root{next_id_++, main.name, negate(safe_), n, std::nullopt};
  queue_.push_back(root);
  TraceEvent init;
  init.rule = Rule::Init;
  init.query = root.id;
  init.proc = root.proc;
  init.bound = n;
  init.formula = root.phi;
  init.outcome = "queued";
  emit(init);

  while (!queue_.empty()) {
    if (stats_.steps() >= opts_.step_budget) {
      stats_.seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      throw Error(ErrorKind::ResourceLimit, "step budget of " + std::to_string(opts_.step_budget) + " exhausted");
    }
    step(pick_next());
    if (opts_.check_invariants)
      for (const auto& q : queue_)
        RECMC_CHECK(pending(q), "queued query " + std::to_string(q.id) + " is answerable");
  }

  TraceEvent last;
  last.proc = main.name;
  last.bound = n;
  BndVerdict verdict;
  Formula under = u_env(rho_, n, prog_).get(main.name);
  if (sat(under && negate(safe_)).sat()) {
    last.rule = Rule::Unsafe;
    last.outcome = "unsafe";
    verdict = BndVerdict::Unsafe;
  } else {
    if (opts_.check_invariants)
      RECMC_CHECK(solver_.entails(o_env(sigma_, n, prog_).get(main.name), safe_), "Safe premise fails");
    last.rule = Rule::Safe;
    last.outcome = "safe";
    verdict = BndVerdict::Safe;
  }
  emit(last);
  stats_.seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return verdict;
}

void Engine::step(const BoundedQuery& q) {
  TraceEvent ev;
  ev.query = q.id;
  ev.proc = q.proc;
  ev.bound = q.bound;
  if (try_reach(q, ev)) {
    ++stats_.reach;
  } else if (try_sum(q, ev)) {
    ++stats_.sum;
  } else {
    do_query(q, ev);
    ++stats_.query;
  }
  emit(std::move(ev));
}

bool Engine::try_reach(const BoundedQuery& q, TraceEvent& ev) {
  const Procedure& p = prog_.proc(q.proc);
  const int b = q.bound;
  Environment under = u_env(rho_, b - 1, prog_);
  for (std::size_t i = 0; i < p.paths.size(); ++i) {
    const Path& path = p.paths[i];
    Formula inst = instantiate(path, under, prog_);
    SatResult r = sat(inst && q.phi);
    if (!r.sat()) continue;
    complete(r.model, inst);

    Provenance prov;
    prov.path = i;
    Formula psi;
    if (opts_.proj == ProjStrategy::Mbp) {
      // One callee fact per call, the first true in M, then the cube.
      std::vector<Formula> parts;
      for (const auto& l : path.literals) parts.push_back(Formula::literal(l));
      for (const auto& c : path.calls) {
        CallSource src{c.callee, {}};
        for (int cb = 0; cb <= b - 1 && src.facts.empty(); ++cb)
          for (const auto& f : rho_.at(c.callee, cb)) {
            Formula fi = instantiate_call(c, f.formula, prog_);
            if (eval(fi, r.model)) {
              src.facts.emplace_back(cb, f.id);
              parts.push_back(fi);
              break;
            }
          }
        RECMC_CHECK(!src.facts.empty(), "no callee fact holds in the Reach model");
        prov.calls.push_back(std::move(src));
      }
      psi = project_counted(p.locals, cube_of(Formula::conj(parts), r.model), r.model);
    } else {
      for (const auto& c : path.calls) {
        CallSource src{c.callee, {}};
        for (int cb = 0; cb <= b - 1; ++cb)
          for (const auto& f : rho_.at(c.callee, cb)) src.facts.emplace_back(cb, f.id);
        prov.calls.push_back(std::move(src));
      }
      psi = project_counted(p.locals, inst, r.model);
    }
    RECMC_CHECK(eval(psi, r.model), "reachability fact misses its model");
    auto id = rho_.add(p.name, b, psi, std::move(prov));
    RECMC_CHECK(id.has_value(), "Reach produced a known fact");

    for (const auto& other : std::vector<BoundedQuery>(queue_))
      if (other.proc == q.proc && other.bound >= b && sat(psi && other.phi).sat()) {
        remove(other.id);
        ev.answered.push_back(other.id);
        if (other.id != q.id) ++stats_.swept;
      }
    ev.rule = Rule::Reach;
    ev.formula = psi;
    ev.outcome = "path " + std::to_string(i);
    return true;
  }
  return false;
}

bool Engine::try_sum(const BoundedQuery& q, TraceEvent& ev) {
  const Procedure& p = prog_.proc(q.proc);
  const int b = q.bound;
  Formula body = instantiate_body(p, o_env(sigma_, b - 1, prog_), prog_);
  if (!sat(body && q.phi).unsat()) return false;
  std::vector<Var> formals = p.formals();
  Formula psi = itp_.itp({body, q.phi, VarSet(formals.begin(), formals.end())});
  sigma_.add(p.name, b, psi);

  for (const auto& other : std::vector<BoundedQuery>(queue_))
    if (other.proc == q.proc && other.bound <= b) {
      Formula over = o_env(sigma_, other.bound, prog_).get(p.name);
      if (sat(over && other.phi).unsat()) {
        remove(other.id);
        ev.answered.push_back(other.id);
        if (other.id != q.id) ++stats_.swept;
      }
    }
  RECMC_CHECK(std::find(ev.answered.begin(), ev.answered.end(), q.id) != ev.answered.end(),
              "Sum did not answer its own query");
  ev.rule = Rule::Sum;
  ev.formula = psi;
  ev.outcome = "blocked";
  return true;
}

void Engine::do_query(const BoundedQuery& q, TraceEvent& ev) {
  const Procedure& p = prog_.proc(q.proc);
  const int b = q.bound;
  Environment over = o_env(sigma_, b - 1, prog_);
  Environment under = u_env(rho_, b - 1, prog_);

  for (std::size_t i = 0; i < p.paths.size(); ++i) {
    const Path& path = p.paths[i];
    // Calls before `split` read sigma, calls from `split` on read rho.
    auto config = [&](std::size_t split, bool with_call_over) {
      std::vector<Formula> parts;
      for (const auto& l : path.literals) parts.push_back(Formula::literal(l));
      for (std::size_t k = 0; k < path.calls.size(); ++k) {
        const CallAtom& c = path.calls[k];
        if (k < split)
          parts.push_back(instantiate_call(c, over.get(c.callee), prog_));
        else if (k == split && !with_call_over)
          continue;
        else
          parts.push_back(instantiate_call(c, under.get(c.callee), prog_));
      }
      parts.push_back(q.phi);
      return Formula::conj(parts);
    };
    const std::size_t k = path.calls.size();
    SatResult top = sat(config(k, true));
    if (!top.sat()) continue;
    RECMC_CHECK(k > 0, "Query on a call-free path");

    Model model = top.model;
    std::size_t j = k;
    while (j > 0) {
      SatResult r = sat(config(j - 1, true));
      if (r.unsat()) break;
      model = r.model;
      --j;
    }
    RECMC_CHECK(j > 0, "every call of the path is satisfiable under rho");
    const std::size_t split = j - 1;
    const CallAtom& call = path.calls[split];

    // Matrix: literals, sigma-calls before the split, rho-calls after it, phi.
    Formula matrix = config(split, false);
    complete(model, matrix);
    std::vector<Var> vars;
    VarSet keep(call.args.begin(), call.args.end());
    for (const auto& group : {p.inputs, p.outputs, p.locals})
      for (const auto& v : group)
        if (!keep.count(v)) vars.push_back(v);
    if (opts_.proj == ProjStrategy::Mbp) matrix = cube_of(matrix, model);
    Formula psi = to_callee(project_counted(vars, matrix, model), call, prog_);

    BoundedQuery nq{next_id_++, call.callee, psi, b - 1, QueryOrigin{q.id, i, split}};
    queue_.push_back(nq);
    ev.rule = Rule::Query;
    ev.formula = psi;
    ev.target = call.callee;
    ev.new_query = nq.id;
    ev.outcome = "path " + std::to_string(i) + " call " + std::to_string(split);
    return;
  }
  throw Error(ErrorKind::Internal, "no rule applies to query " + std::to_string(q.id));
}

}  // namespace recmc
