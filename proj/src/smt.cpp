#include "recmc/smt.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "int_solver.hpp"
#include "simplex.hpp"

namespace recmc {

using detail::BoundReason;
using detail::DeltaRat;
using detail::IntOutcome;
using detail::LinCon;
using detail::Simplex;

const char* sat_status_name(SatStatus s) {
  switch (s) {
    case SatStatus::Sat: return "sat";
    case SatStatus::Unsat: return "unsat";
    case SatStatus::Unknown: return "unknown";
  }
  return "?";
}

bool replay_farkas(const FarkasCert& c) {
  LinTerm sum;
  bool strict = false;
  for (const auto& [l, m] : c.terms) {
    if (l.kind() != Literal::Kind::Arith) return false;
    if (l.cmp() != Cmp::Eq && m < 0) return false;
    if (m == 0) continue;
    sum = sum + l.term() * m;
    if (l.cmp() == Cmp::Lt) strict = true;
  }
  if (!sum.is_constant()) return false;
  const Rational& k = sum.constant_part();
  return k > 0 || (k == 0 && strict);
}

namespace {

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

/// Linear constraint fed to the simplex, owned by one theory atom.
struct TCon {
  LinTerm term;
  Cmp op;
  int atom;
};

struct Atom {
  Literal lit;
  int var;
  std::vector<int> cons;
};

/// Asserts `t op 0` into a simplex, mapping variables through `var_id`.
template <typename VarId>
bool assert_con(Simplex& sx, const LinTerm& t, Cmp op, int id, VarId&& var_id) {
  int sv;
  Rational alpha;
  if (t.coeffs().size() == 1) {
    sv = var_id(t.coeffs().front().first);
    alpha = t.coeffs().front().second;
  } else {
    std::vector<std::pair<int, Rational>> lin;
    for (const auto& [v, a] : t.coeffs()) lin.emplace_back(var_id(v), a);
    sv = sx.slack_for(lin);
    alpha = 1;
  }
  const Rational b = -t.constant_part() / alpha;
  const BoundReason why{id, alpha};
  const bool upper = alpha > 0;
  switch (op) {
    case Cmp::Eq: return sx.assert_upper(sv, DeltaRat(b), why) && sx.assert_lower(sv, DeltaRat(b), why);
    case Cmp::Le:
      return upper ? sx.assert_upper(sv, DeltaRat(b), why) : sx.assert_lower(sv, DeltaRat(b), why);
    case Cmp::Lt:
      return upper ? sx.assert_upper(sv, DeltaRat(b, -1), why) : sx.assert_lower(sv, DeltaRat(b, 1), why);
  }
  return false;
}

class SmtCore {
 public:
  SmtCore(Sort mode, const SolverLimits& limits, SolverStats& stats)
      : int_mode_(mode == Sort::Int), rat_mode_(mode == Sort::Rat), limits_(limits), stats_(stats) {
    true_var_ = new_var();
    units_.push_back(lit_of(true_var_, false));
  }

  SatResult solve(const Formula& f) {
    SatResult res;
    int root = encode(f);
    add_clause({root});
    res.status = search();
    if (res.status == SatStatus::Sat) {
      res.model = extract_model(f);
      if (!eval(f, res.model)) throw Error(ErrorKind::Internal, "solver model does not satisfy the query");
    } else if (res.status == SatStatus::Unknown) {
      res.reason = unknown_reason_;
    }
    res.certificates = std::move(certs_);
    return res;
  }

 private:
  // ---- literals and assignment ---------------------------------------------------
  static int lit_of(int v, bool neg) { return 2 * v + (neg ? 1 : 0); }
  static int var_of(int lit) { return lit >> 1; }
  static bool is_neg(int lit) { return lit & 1; }
  static int negl(int lit) { return lit ^ 1; }

  int new_var() {
    assign_.push_back(-1);
    level_.push_back(0);
    reason_.push_back(-1);
    activity_.push_back(0);
    phase_.push_back(false);
    seen_.push_back(false);
    atom_of_.push_back(-1);
    watches_.emplace_back();
    watches_.emplace_back();
    return static_cast<int>(assign_.size()) - 1;
  }

  // 1 true, 0 false, -1 unassigned
  int value(int lit) const {
    int a = assign_[var_of(lit)];
    if (a < 0) return -1;
    return is_neg(lit) ? 1 - a : a;
  }

  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  void enqueue(int lit, int reason) {
    int v = var_of(lit);
    assign_[v] = is_neg(lit) ? 0 : 1;
    level_[v] = decision_level();
    reason_[v] = reason;
    trail_.push_back(lit);
  }

  // ---- encoding -----------------------------------------------------------------
  int bool_var(const Var& v) {
    auto it = bool_vars_.find(v.name);
    if (it != bool_vars_.end()) return it->second;
    int x = new_var();
    bool_vars_[v.name] = x;
    return x;
  }

  int svar(const Var& v) {
    auto it = svars_.find(v.name);
    if (it != svars_.end()) return it->second;
    int x = sx_.new_var();
    svars_[v.name] = x;
    svar_list_.push_back(v);
    return x;
  }

  void add_con(Atom& a, int atom_id, LinTerm t, Cmp op) {
    if (int_mode_ && op == Cmp::Lt) {
      t.add_constant(1);
      op = Cmp::Le;
    }
    a.cons.push_back(static_cast<int>(cons_.size()));
    cons_.push_back({std::move(t), op, atom_id});
  }

  int atom_var(const Literal& l) {
    std::string key = l.key();
    auto it = atom_index_.find(key);
    if (it != atom_index_.end()) return atoms_[it->second].var;
    int id = static_cast<int>(atoms_.size());
    Atom a{l, new_var(), {}};
    atom_of_[a.var] = id;
    if (l.kind() == Literal::Kind::Arith) {
      add_con(a, id, l.term(), l.cmp());
    } else {
      if (!int_mode_) throw Error(ErrorKind::WrongMode, "divisibility literal outside integer mode");
      const Rational d(l.divisor());
      Var k("%k" + std::to_string(id), Sort::Int);
      LinTerm t = l.term() - LinTerm::variable(k, d);
      if (l.positive()) {
        add_con(a, id, t, Cmp::Eq);
      } else {
        Var r("%r" + std::to_string(id), Sort::Int);
        add_con(a, id, t - LinTerm::variable(r), Cmp::Eq);
        add_con(a, id, LinTerm::constant(1) - LinTerm::variable(r), Cmp::Le);
        add_con(a, id, LinTerm::variable(r) - LinTerm::constant(d - 1), Cmp::Le);
      }
    }
    atoms_.push_back(std::move(a));
    atom_index_[key] = id;
    return atoms_.back().var;
  }

  int encode(const Formula& f) {
    switch (f.kind()) {
      case FKind::True: return lit_of(true_var_, false);
      case FKind::False: return lit_of(true_var_, true);
      case FKind::Lit:
        if (f.lit().kind() == Literal::Kind::Bool) return lit_of(bool_var(f.lit().var()), !f.lit().positive());
        return lit_of(atom_var(f.lit()), false);
      case FKind::Call: throw Error(ErrorKind::PreconditionFailed, "solver query contains a call atom");
      case FKind::And:
      case FKind::Or: break;
    }
    auto it = gates_.find(f);
    if (it != gates_.end()) return it->second;
    int g = lit_of(new_var(), false);
    std::vector<int> kids;
    for (const auto& c : f.children()) kids.push_back(encode(c));
    if (f.kind() == FKind::And) {
      for (int k : kids) add_clause({negl(g), k});
    } else {
      std::vector<int> cl{negl(g)};
      cl.insert(cl.end(), kids.begin(), kids.end());
      add_clause(std::move(cl));
    }
    gates_.emplace(f, g);
    return g;
  }

  void add_clause(std::vector<int> lits) {
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    for (std::size_t i = 1; i < lits.size(); ++i)
      if (lits[i] == negl(lits[i - 1])) return;
    if (lits.empty()) {
      root_unsat_ = true;
      return;
    }
    if (lits.size() == 1) {
      units_.push_back(lits[0]);
      return;
    }
    attach(std::move(lits));
  }

  int attach(std::vector<int> lits) {
    int ci = static_cast<int>(clauses_.size());
    watches_[lits[0]].push_back(ci);
    watches_[lits[1]].push_back(ci);
    clauses_.push_back(std::move(lits));
    return ci;
  }

  // ---- propagation ---------------------------------------------------------------
  /// Returns a falsified clause index or -1.
  int propagate() {
    while (qhead_ < trail_.size()) {
      int p = trail_[qhead_++];
      int falsified = negl(p);
      std::vector<int> ws = std::move(watches_[falsified]);
      watches_[falsified].clear();
      std::size_t i = 0;
      for (; i < ws.size(); ++i) {
        int ci = ws[i];
        std::vector<int>& c = clauses_[ci];
        if (c[0] == falsified) std::swap(c[0], c[1]);
        if (value(c[0]) == 1) {
          watches_[falsified].push_back(ci);
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k) {
          if (value(c[k]) != 0) {
            std::swap(c[1], c[k]);
            watches_[c[1]].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        watches_[falsified].push_back(ci);
        if (value(c[0]) == 0) {
          for (++i; i < ws.size(); ++i) watches_[falsified].push_back(ws[i]);
          qhead_ = trail_.size();
          return ci;
        }
        enqueue(c[0], ci);
      }
    }
    return -1;
  }

  /// Asserts newly true atoms and checks rational feasibility. Fills
  /// `conflict` with falsified literals on a theory conflict.
  bool theory_propagate(std::vector<int>& conflict) {
    if (atoms_.empty()) {
      theory_head_ = trail_.size();
      return true;
    }
    while (theory_head_ < trail_.size()) {
      int lit = trail_[theory_head_++];
      if (is_neg(lit)) continue;
      int a = atom_of_[var_of(lit)];
      if (a < 0) continue;
      for (int ci : atoms_[a].cons) {
        const TCon& c = cons_[ci];
        if (!assert_con(sx_, c.term, c.op, ci, [&](const Var& v) { return svar(v); })) {
          theory_conflict(conflict);
          return false;
        }
      }
    }
    if (!sx_.check(limits_.max_pivots)) {
      if (sx_.exhausted()) {
        unknown_ = true;
        unknown_reason_ = "simplex pivot budget exhausted";
        return true;
      }
      theory_conflict(conflict);
      return false;
    }
    return true;
  }

  void theory_conflict(std::vector<int>& conflict) {
    ++stats_.theory_conflicts;
    std::vector<int> atoms;
    for (int id : sx_.conflict_ids())
      if (id >= 0) atoms.push_back(cons_[id].atom);
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    conflict.clear();
    for (int a : atoms) conflict.push_back(lit_of(atoms_[a].var, true));
    if (rat_mode_ && certs_.size() < limits_.max_certificates) {
      FarkasCert cert;
      for (const auto& [id, lambda] : sx_.conflict()) cert.terms.emplace_back(atoms_[cons_[id].atom].lit, lambda);
      certs_.push_back(std::move(cert));
    }
  }

  /// Integer feasibility of the asserted atoms at a full assignment.
  bool final_check(std::vector<int>& conflict) {
    std::vector<int> active;
    for (int lit : trail_) {
      if (is_neg(lit)) continue;
      int a = atom_of_[var_of(lit)];
      if (a >= 0) active.push_back(a);
    }
    ++stats_.integer_checks;
    IntResult r = solve_atoms(active);
    if (r.status == IntOutcome::Sat) {
      int_model_ = std::move(r.model);
      return true;
    }
    if (r.status == IntOutcome::Unknown) {
      unknown_ = true;
      unknown_reason_ = "integer branch budget exhausted";
      return true;
    }
    // Deletion-based core.
    std::vector<int> core = active;
    for (std::size_t i = 0; i < core.size();) {
      std::vector<int> trial = core;
      trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(i));
      if (solve_atoms(trial).status == IntOutcome::Unsat)
        core = std::move(trial);
      else
        ++i;
    }
    conflict.clear();
    for (int a : core) conflict.push_back(lit_of(atoms_[a].var, true));
    return false;
  }

  using IntResult = detail::IntResult;

  IntResult solve_atoms(const std::vector<int>& atoms) {
    std::vector<LinCon> cons;
    for (int a : atoms)
      for (int ci : atoms_[a].cons) cons.push_back({cons_[ci].term, cons_[ci].op});
    return detail::solve_integer(cons, limits_.max_branches);
  }

  // ---- conflict analysis --------------------------------------------------------
  void bump(int v) {
    activity_[v] += var_inc_;
    if (activity_[v] > 1e100) {
      for (auto& a : activity_) a *= 1e-100;
      var_inc_ *= 1e-100;
    }
  }

  void cancel_until(int lvl) {
    if (decision_level() <= lvl) return;
    std::size_t mark = trail_lim_[lvl];
    for (std::size_t i = trail_.size(); i-- > mark;) {
      int v = var_of(trail_[i]);
      phase_[v] = !is_neg(trail_[i]);
      assign_[v] = -1;
      reason_[v] = -1;
    }
    trail_.resize(mark);
    sx_.pop(static_cast<std::size_t>(decision_level() - lvl));
    trail_lim_.resize(lvl);
    qhead_ = trail_.size();
    theory_head_ = std::min(theory_head_, trail_.size());
  }

  /// Learns from a falsified clause; returns false if the conflict is at root.
  bool resolve_conflict(std::vector<int> confl) {
    ++stats_.conflicts;
    ++conflicts_;
    int max_lvl = 0;
    for (int l : confl) max_lvl = std::max(max_lvl, level_[var_of(l)]);
    if (max_lvl == 0) return false;
    cancel_until(max_lvl);

    std::vector<int> learnt{0};
    int counter = 0;
    int p = -1;
    std::size_t idx = trail_.size();
    const std::vector<int>* c = &confl;
    std::vector<int> touched;
    for (;;) {
      for (int q : *c) {
        if (q == p) continue;
        int v = var_of(q);
        if (seen_[v] || level_[v] == 0) continue;
        seen_[v] = true;
        touched.push_back(v);
        bump(v);
        if (level_[v] == decision_level())
          ++counter;
        else
          learnt.push_back(q);
      }
      do {
        --idx;
      } while (!seen_[var_of(trail_[idx])]);
      p = trail_[idx];
      seen_[var_of(p)] = false;
      --counter;
      if (counter <= 0) break;
      c = &clauses_[reason_[var_of(p)]];
    }
    learnt[0] = negl(p);
    for (int v : touched) seen_[v] = false;
    var_inc_ /= 0.95;

    int back = 0;
    std::size_t pos = 1;
    for (std::size_t i = 1; i < learnt.size(); ++i) {
      int l = level_[var_of(learnt[i])];
      if (l > back) {
        back = l;
        pos = i;
      }
    }
    cancel_until(back);
    if (learnt.size() == 1) {
      enqueue(learnt[0], -1);
    } else {
      std::swap(learnt[1], learnt[pos]);
      int ci = attach(learnt);
      enqueue(clauses_[ci][0], ci);
    }
    return true;
  }

  // ---- search ---------------------------------------------------------------
  SatStatus search() {
    if (root_unsat_) return SatStatus::Unsat;
    for (int u : units_) {
      int v = value(u);
      if (v == 0) return SatStatus::Unsat;
      if (v < 0) enqueue(u, -1);
    }
    std::vector<int> conflict;
    for (;;) {
      int ci = propagate();
      if (ci >= 0) {
        if (!resolve_conflict(clauses_[ci])) return SatStatus::Unsat;
      } else if (!theory_propagate(conflict)) {
        if (!resolve_conflict(conflict)) return SatStatus::Unsat;
      } else {
        if (unknown_) return SatStatus::Unknown;
        int next = pick_branch();
        if (next < 0) {
          if (int_mode_ && !atoms_.empty() && !final_check(conflict)) {
            if (!resolve_conflict(conflict)) return SatStatus::Unsat;
            continue;
          }
          if (unknown_) return SatStatus::Unknown;
          return SatStatus::Sat;
        }
        trail_lim_.push_back(trail_.size());
        sx_.push();
        enqueue(lit_of(next, !phase_[next]), -1);
      }
      if (conflicts_ > limits_.max_conflicts) {
        unknown_reason_ = "conflict budget exhausted";
        return SatStatus::Unknown;
      }
    }
  }

  int pick_branch() const {
    int best = -1;
    for (int v = 0; v < static_cast<int>(assign_.size()); ++v) {
      if (assign_[v] >= 0) continue;
      if (best < 0 || activity_[v] > activity_[best]) best = v;
    }
    return best;
  }

  Model extract_model(const Formula& f) {
    Model m;
    std::vector<Rational> vals;
    if (!int_mode_ && !atoms_.empty()) vals = sx_.concrete_values();
    for (const auto& v : free_vars(f)) {
      if (v.sort == Sort::Bool) {
        auto it = bool_vars_.find(v.name);
        m.set_bool(v, it != bool_vars_.end() && assign_[it->second] == 1);
        continue;
      }
      if (int_mode_) {
        m.set_num(v, int_model_.has(v) ? int_model_.get_num(v) : Rational(0));
        continue;
      }
      auto it = svars_.find(v.name);
      m.set_num(v, it != svars_.end() ? vals[it->second] : Rational(0));
    }
    return m;
  }

  bool int_mode_;
  bool rat_mode_;
  const SolverLimits& limits_;
  SolverStats& stats_;

  std::vector<int> assign_, level_, reason_;
  std::vector<double> activity_;
  std::vector<bool> phase_, seen_;
  std::vector<int> atom_of_;
  std::vector<std::vector<int>> watches_;
  std::vector<std::vector<int>> clauses_;
  std::vector<int> units_;
  std::vector<int> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;
  std::size_t theory_head_ = 0;
  double var_inc_ = 1;
  std::size_t conflicts_ = 0;
  bool root_unsat_ = false;
  bool unknown_ = false;
  std::string unknown_reason_;
  int true_var_ = 0;

  std::unordered_map<std::string, int> bool_vars_;
  std::unordered_map<Formula, int, FormulaHash> gates_;
  std::unordered_map<std::string, int> atom_index_;
  std::vector<Atom> atoms_;
  std::vector<TCon> cons_;

  Simplex sx_;
  std::map<std::string, int> svars_;
  std::vector<Var> svar_list_;
  Model int_model_;
  std::vector<FarkasCert> certs_;
};

}  // namespace

Solver::Solver(Sort mode, SolverLimits limits) : mode_(mode), limits_(limits) {}

SatResult Solver::check_sat(const Formula& f) {
  ++stats_.checks;
  SatResult r;
  if (f.is_true()) {
    r.status = SatStatus::Sat;
  } else if (f.is_false()) {
    r.status = SatStatus::Unsat;
  } else {
    SmtCore core(mode_, limits_, stats_);
    r = core.solve(f);
  }
  switch (r.status) {
    case SatStatus::Sat: ++stats_.sat; break;
    case SatStatus::Unsat: ++stats_.unsat; break;
    case SatStatus::Unknown: ++stats_.unknown; break;
  }
  return r;
}

bool Solver::entails(const Formula& a, const Formula& b) {
  if (a.is_false() || b.is_true()) return true;
  SatResult r = check_sat(a && negate(b));
  if (r.status == SatStatus::Unknown) throw Error(ErrorKind::ResourceLimit, r.reason);
  return r.unsat();
}

bool Solver::equivalent(const Formula& a, const Formula& b) { return entails(a, b) && entails(b, a); }

Formula Solver::simplify(const Formula& f) {
  if (f.kind() != FKind::And && f.kind() != FKind::Or) return f;
  const bool is_and = f.kind() == FKind::And;
  std::vector<Formula> kids;
  for (const auto& k : f.children()) kids.push_back(simplify(k));
  for (std::size_t i = kids.size(); i-- > 0;) {
    std::vector<Formula> rest;
    for (std::size_t j = 0; j < kids.size(); ++j)
      if (j != i) rest.push_back(kids[j]);
    bool redundant = is_and ? entails(Formula::conj(rest), kids[i]) : entails(kids[i], Formula::disj(rest));
    if (redundant) kids.erase(kids.begin() + static_cast<std::ptrdiff_t>(i));
  }
  return is_and ? Formula::conj(kids) : Formula::disj(kids);
}

std::vector<Model> Solver::enumerate_models(const Formula& f,
                                            const std::function<Formula(const Model&)>& blocking,
                                            std::size_t limit) {
  std::vector<Model> out;
  Formula g = f;
  while (out.size() < limit) {
    SatResult r = check_sat(g);
    if (r.status == SatStatus::Unknown) throw Error(ErrorKind::ResourceLimit, r.reason);
    if (r.unsat()) break;
    g = g && negate(blocking(r.model));
    out.push_back(std::move(r.model));
  }
  return out;
}

SatResult check_sat(const Formula& f, Sort mode) { return Solver(mode).check_sat(f); }

bool entails(const Formula& a, const Formula& b, Sort mode) { return Solver(mode).entails(a, b); }

std::optional<FarkasCert> farkas_conflict(const std::vector<Literal>& lits) {
  Simplex sx;
  std::map<std::string, int> ids;
  auto var_id = [&](const Var& v) {
    auto it = ids.find(v.name);
    if (it != ids.end()) return it->second;
    int x = sx.new_var();
    ids[v.name] = x;
    return x;
  };
  bool ok = true;
  for (std::size_t i = 0; i < lits.size() && ok; ++i) {
    const Literal& l = lits[i];
    if (l.kind() != Literal::Kind::Arith) continue;
    ok = assert_con(sx, l.term(), l.cmp(), static_cast<int>(i), var_id);
  }
  if (ok && sx.check()) return std::nullopt;
  if (sx.exhausted()) return std::nullopt;
  FarkasCert cert;
  for (const auto& [id, lambda] : sx.conflict()) cert.terms.emplace_back(lits[id], lambda);
  return cert;
}

}  // namespace recmc
