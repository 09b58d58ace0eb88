#include "int_solver.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <tuple>

#include "simplex.hpp"

namespace recmc::detail {
namespace {

const Integer kMaxSplitWidth = 15;

Integer coeff_gcd(const LinTerm& t) {
  Integer g = 0;
  for (const auto& e : t.coeffs()) g = gcd_of(g, e.second.get_num());
  return g;
}

/// Conjunctions of `t <= 0` and `d | t` over the integers.
struct Conj {
  std::vector<LinTerm> le;
  std::vector<std::pair<Integer, LinTerm>> dv;
};

bool simplify(Conj& c) {
  std::vector<LinTerm> le;
  std::set<std::string> seen;
  for (const auto& t : c.le) {
    if (t.is_constant()) {
      if (t.constant_part() > 0) return false;
      continue;
    }
    Integer g = coeff_gcd(t);
    LinTerm n;
    for (const auto& [v, a] : t.coeffs()) n = n + LinTerm::variable(v, Rational(a.get_num() / g));
    n.add_constant(Rational(ceil_of(Rational(t.constant_part() / g))));
    if (seen.insert(n.key()).second) le.push_back(std::move(n));
  }
  std::vector<std::pair<Integer, LinTerm>> dv;
  seen.clear();
  for (const auto& [d, t] : c.dv) {
    LinTerm n;
    for (const auto& [v, a] : t.coeffs()) {
      Integer r = mod_floor(a.get_num(), d);
      if (r != 0) n = n + LinTerm::variable(v, Rational(r));
    }
    n.add_constant(Rational(mod_floor(t.constant_part().get_num(), d)));
    if (n.is_constant()) {
      if (n.constant_part() != 0) return false;
      continue;
    }
    if (d == 1) continue;
    if (seen.insert(d.get_str() + "|" + n.key()).second) dv.emplace_back(d, std::move(n));
  }
  c.le = std::move(le);
  c.dv = std::move(dv);
  return true;
}

/// Depth-first Cooper elimination. Complete, used when branch and bound
/// cannot close an unbounded search.
class CooperSearch {
 public:
  explicit CooperSearch(std::size_t budget) : budget_(budget) {}

  std::optional<Model> solve(Conj c) {
    if (++nodes_ > budget_) {
      exhausted_ = true;
      return std::nullopt;
    }
    if (!simplify(c)) return std::nullopt;
    VarSet vars;
    for (const auto& t : c.le)
      for (const auto& e : t.coeffs()) vars.insert(e.first);
    for (const auto& d : c.dv)
      for (const auto& e : d.second.coeffs()) vars.insert(e.first);
    if (vars.empty()) return Model{};

    const Var* best = nullptr;
    Integer best_cost;
    bool best_flip = false;
    for (const auto& v : vars) {
      Shape sh = shape(c, v);
      for (int flip = 0; flip < 2; ++flip) {
        std::size_t lo = flip ? sh.uppers : sh.lowers;
        Integer cost = sh.period * Integer(static_cast<unsigned long>(lo == 0 ? 1 : lo));
        if (!best || cost < best_cost) {
          best = &v;
          best_cost = cost;
          best_flip = flip;
        }
      }
    }
    Var x = *best;
    if (best_flip) negate_var(c, x);
    std::optional<Model> m = eliminate(c, x);
    if (m && best_flip) m->set_num(x, -m->get_num(x));
    return m;
  }

  bool exhausted() const { return exhausted_; }
  std::size_t nodes() const { return nodes_; }

 private:
  struct Shape {
    std::size_t lowers = 0, uppers = 0;
    Integer scale = 1, period = 1;
  };

  static Shape shape(const Conj& c, const Var& x) {
    Shape s;
    for (const auto& t : c.le) {
      Rational a = t.coeff(x);
      if (a == 0) continue;
      s.scale = lcm_of(s.scale, abs(a.get_num()));
      (a < 0 ? s.lowers : s.uppers)++;
    }
    for (const auto& [d, t] : c.dv) {
      Rational a = t.coeff(x);
      if (a != 0) s.scale = lcm_of(s.scale, abs(a.get_num()));
    }
    s.period = s.scale;
    for (const auto& [d, t] : c.dv) {
      Rational a = t.coeff(x);
      if (a != 0) s.period = lcm_of(s.period, d * (s.scale / abs(a.get_num())));
    }
    return s;
  }

  static void negate_var(Conj& c, const Var& x) {
    LinTerm neg = LinTerm::variable(x, -1);
    for (auto& t : c.le) t = t.substitute(x, neg);
    for (auto& d : c.dv) d.second = d.second.substitute(x, neg);
  }

  /// x occurs; branches on x' = L*x taking the values l + j (or j at -inf).
  std::optional<Model> eliminate(const Conj& c, const Var& x) {
    Shape sh = shape(c, x);
    const Integer& L = sh.scale;
    const Integer& D = sh.period;
    Conj rest;
    std::vector<LinTerm> lowers, uppers;  // x' >= l, x' <= u
    std::vector<std::tuple<Integer, int, LinTerm>> divs;  // d | sign*x' + r
    for (const auto& t : c.le) {
      Rational a = t.coeff(x);
      if (a == 0) {
        rest.le.push_back(t);
        continue;
      }
      Rational m(L / abs(a.get_num()));
      LinTerm r = t.without(x) * m;
      if (a > 0)
        uppers.push_back(-r);
      else
        lowers.push_back(r);
    }
    for (const auto& [d, t] : c.dv) {
      Rational a = t.coeff(x);
      if (a == 0) {
        rest.dv.emplace_back(d, t);
        continue;
      }
      Integer m = L / abs(a.get_num());
      divs.emplace_back(d * m, a > 0 ? 1 : -1, t.without(x) * Rational(m));
    }
    divs.emplace_back(L, 1, LinTerm());

    auto with_value = [&](const LinTerm& e, bool keep_bounds) {
      Conj next = rest;
      if (keep_bounds) {
        for (const auto& u : uppers) next.le.push_back(e - u);
        for (const auto& l : lowers) next.le.push_back(l - e);
      }
      for (const auto& [d, sg, r] : divs) next.dv.emplace_back(d, e * Rational(sg) + r);
      return next;
    };
    auto finish = [&](Model m, const Integer& xp) {
      m.set_num(x, Rational(xp / L));
      return m;
    };

    if (!lowers.empty()) {
      for (const auto& l : lowers)
        for (Integer j = 0; j < D; ++j) {
          LinTerm e = l + LinTerm::constant(Rational(j));
          std::optional<Model> m = solve(with_value(e, true));
          if (m) {
            fill(*m, c);
            return finish(*m, e.evaluate(*m).get_num());
          }
          if (exhausted_) return std::nullopt;
        }
      return std::nullopt;
    }
    for (Integer j = 0; j < D; ++j) {
      std::optional<Model> m = solve(with_value(LinTerm::constant(Rational(j)), false));
      if (m) {
        fill(*m, c);
        Integer xp = j;
        if (!uppers.empty()) {
          Integer top = floor_of(uppers.front().evaluate(*m));
          for (const auto& u : uppers) top = std::min(top, floor_of(u.evaluate(*m)));
          xp = top - mod_floor(top - j, D);
        }
        return finish(*m, xp);
      }
      if (exhausted_) return std::nullopt;
    }
    return std::nullopt;
  }

  /// Variables dropped from a branch are unconstrained there.
  static void fill(Model& m, const Conj& c) {
    for (const auto& t : c.le)
      for (const auto& e : t.coeffs())
        if (!m.has(e.first)) m.set_num(e.first, 0);
    for (const auto& d : c.dv)
      for (const auto& e : d.second.coeffs())
        if (!m.has(e.first)) m.set_num(e.first, 0);
  }

  std::size_t budget_;
  std::size_t nodes_ = 0;
  bool exhausted_ = false;
};

class BranchAndBound {
 public:
  BranchAndBound(const std::vector<LinCon>& cons, std::size_t budget) : budget_(budget) {
    for (const auto& c : cons)
      for (const auto& e : c.term.coeffs()) var_of(e.first);
    for (const auto& c : cons) {
      if (!ok_) break;
      const Rational k = -c.term.constant_part();
      if (c.term.coeffs().size() == 1) {
        const auto& [v, a] = c.term.coeffs().front();
        int x = ids_.at(v.name);
        Rational b = k / a;
        if (a > 0)
          ok_ = sx_.assert_upper(x, DeltaRat(floor_of(b)), {});
        else
          ok_ = sx_.assert_lower(x, DeltaRat(ceil_of(b)), {});
        continue;
      }
      std::vector<std::pair<int, Rational>> lin;
      for (const auto& [v, a] : c.term.coeffs()) lin.emplace_back(ids_.at(v.name), a);
      ok_ = sx_.assert_upper(sx_.slack_for(lin), DeltaRat(k), {});
    }
  }

  /// Iterative deepening keeps the search from diving forever into an
  /// unbounded direction while a shallow solution exists elsewhere.
  IntOutcome run() {
    if (!ok_) return IntOutcome::Unsat;
    for (std::size_t limit = 4;; limit *= 2) {
      cut_ = false;
      IntOutcome r = dfs(0, limit);
      if (r != IntOutcome::Unsat || !cut_) return r;
      if (branches_ >= budget_) return IntOutcome::Unknown;
    }
  }

  const Model& model() const { return model_; }
  std::size_t branches() const { return branches_; }

 private:
  void var_of(const Var& v) {
    if (ids_.count(v.name)) return;
    ids_[v.name] = sx_.new_var();
    order_.push_back(v);
  }

  IntOutcome dfs(std::size_t depth, std::size_t limit) {
    if (!sx_.check()) return sx_.exhausted() ? IntOutcome::Unknown : IntOutcome::Unsat;
    for (const auto& v : order_) {
      const DeltaRat& val = sx_.value(ids_.at(v.name));
      if (val.d == 0 && is_integral(val.r)) continue;
      if (branches_ >= budget_) return IntOutcome::Unknown;
      if (depth >= limit) {
        cut_ = true;
        return IntOutcome::Unsat;
      }
      ++branches_;
      int x = ids_.at(v.name);
      Integer lo = floor_of(val.r);
      bool unknown = false;
      for (int side = 0; side < 2; ++side) {
        sx_.push();
        bool fine = side == 0 ? sx_.assert_upper(x, DeltaRat(lo), {})
                              : sx_.assert_lower(x, DeltaRat(lo + 1), {});
        IntOutcome r = fine ? dfs(depth + 1, limit) : IntOutcome::Unsat;
        sx_.pop();
        if (r == IntOutcome::Sat) return r;
        unknown = unknown || r == IntOutcome::Unknown;
      }
      return unknown ? IntOutcome::Unknown : IntOutcome::Unsat;
    }
    for (const auto& v : order_) model_.set_num(v, sx_.value(ids_.at(v.name)).r);
    return IntOutcome::Sat;
  }

  Simplex sx_;
  std::map<std::string, int> ids_;
  std::vector<Var> order_;
  std::size_t budget_;
  std::size_t branches_ = 0;
  bool ok_ = true;
  bool cut_ = false;
  Model model_;
};

}  // namespace

IntResult solve_integer(const std::vector<LinCon>& input, std::size_t branch_budget) {
  IntResult res;
  VarSet all;
  std::vector<LinCon> eqs, ineqs;
  for (const auto& c : input) {
    for (const auto& e : c.term.coeffs()) all.insert(e.first);
    if (c.op == Cmp::Eq) {
      eqs.push_back(c);
    } else {
      LinCon d = c;
      if (d.op == Cmp::Lt) d.term.add_constant(1);
      d.op = Cmp::Le;
      ineqs.push_back(std::move(d));
    }
  }

  std::vector<std::pair<Var, LinTerm>> subs;
  int fresh = 0;
  auto apply = [&](const Var& x, const LinTerm& e) {
    for (auto& c : eqs) c.term = c.term.substitute(x, e);
    for (auto& c : ineqs) c.term = c.term.substitute(x, e);
    subs.emplace_back(x, e);
  };

  std::vector<LinCon> tight;
  for (;;) {
    while (!eqs.empty()) {
      LinCon& e = eqs.front();
      if (e.term.is_constant()) {
        if (e.term.constant_part() != 0) {
          res.status = IntOutcome::Unsat;
          return res;
        }
        eqs.erase(eqs.begin());
        continue;
      }
      Integer g = coeff_gcd(e.term);
      const Rational& k = e.term.constant_part();
      if (!is_integral(k) || mod_floor(k.get_num(), g) != 0) {
        res.status = IntOutcome::Unsat;
        return res;
      }
      if (g != 1) e.term = e.term * Rational(Integer(1), g);
      const LinTerm::Entry* unit = nullptr;
      const LinTerm::Entry* smallest = nullptr;
      for (const auto& entry : e.term.coeffs()) {
        if (abs(entry.second) == 1 && !unit) unit = &entry;
        if (!smallest || abs(entry.second) < abs(smallest->second)) smallest = &entry;
      }
      if (unit) {
        Var x = unit->first;
        Rational a = unit->second;
        LinTerm expr = e.term.without(x) * Rational(-a);
        eqs.erase(eqs.begin());
        apply(x, expr);
        continue;
      }
      // Unimodular change of variable: x_k := t - sum floor(a_i/a_k) x_i.
      Var xk = smallest->first;
      Integer ak = smallest->second.get_num();
      Var t("%int" + std::to_string(fresh++), Sort::Int);
      LinTerm expr = LinTerm::variable(t);
      for (const auto& [v, a] : e.term.coeffs()) {
        if (v == xk) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), a.get_num_mpz_t(), ak.get_mpz_t());
        if (q != 0) expr = expr - LinTerm::variable(v, Rational(q));
      }
      apply(xk, expr);
    }

    tight.clear();
    for (auto& c : ineqs) {
      if (c.term.is_constant()) {
        if (c.term.constant_part() > 0) {
          res.status = IntOutcome::Unsat;
          return res;
        }
        continue;
      }
      Integer g = coeff_gcd(c.term);
      LinTerm t;
      for (const auto& [v, a] : c.term.coeffs()) t = t + LinTerm::variable(v, Rational(a.get_num() / g));
      t.add_constant(Rational(ceil_of(Rational(c.term.constant_part() / g))));
      tight.push_back({std::move(t), Cmp::Le});
    }

    // t + a <= 0 and -t + b <= 0 pin t between -b and -a.
    bool pinned = false;
    for (std::size_t i = 0; i < tight.size() && !pinned; ++i)
      for (std::size_t j = i + 1; j < tight.size() && !pinned; ++j) {
        LinTerm sum = tight[i].term + tight[j].term;
        if (!sum.is_constant()) continue;
        if (sum.constant_part() > 0) {
          res.status = IntOutcome::Unsat;
          return res;
        }
        if (sum.constant_part() == 0) {
          eqs.push_back({tight[i].term, Cmp::Eq});
          tight.erase(tight.begin() + static_cast<long>(j));
          tight.erase(tight.begin() + static_cast<long>(i));
          pinned = true;
        }
      }
    ineqs = tight;
    if (!pinned) break;
  }

  Model m;
  // A term confined to a short range is split into one equality per value.
  std::size_t best_i = 0, best_j = 0;
  Integer best_width = kMaxSplitWidth + 1;
  for (std::size_t i = 0; i < tight.size(); ++i)
    for (std::size_t j = 0; j < tight.size(); ++j) {
      if (i == j) continue;
      LinTerm sum = tight[i].term + tight[j].term;
      if (!sum.is_constant()) continue;
      Integer width = -sum.constant_part().get_num();
      if (width < best_width) {
        best_width = width;
        best_i = i;
        best_j = j;
      }
    }
  if (best_width <= kMaxSplitWidth) {
    LinTerm t = tight[best_i].term;
    t.add_constant(-t.constant_part());
    const Integer lo = tight[best_j].term.constant_part().get_num();  // -t + lo <= 0
    const Integer hi = -tight[best_i].term.constant_part().get_num();
    bool unknown = false, found = false;
    for (Integer v = lo; v <= hi && !found; ++v) {
      std::vector<LinCon> sub = tight;
      LinTerm e = t;
      e.add_constant(Rational(-v));
      sub.push_back({e, Cmp::Eq});
      IntResult r = solve_integer(sub, branch_budget);
      res.branches += r.branches;
      if (r.status == IntOutcome::Sat) {
        found = true;
        m = std::move(r.model);
      } else if (r.status == IntOutcome::Unknown) {
        unknown = true;
      }
    }
    if (!found) {
      res.status = unknown ? IntOutcome::Unknown : IntOutcome::Unsat;
      return res;
    }
    res.status = IntOutcome::Sat;
  } else {
    BranchAndBound bb(tight, std::max<std::size_t>(branch_budget / 16, 64));
    res.status = bb.run();
    res.branches += bb.branches();
    if (res.status == IntOutcome::Unknown) {
      Conj c;
      for (const auto& tc : tight) c.le.push_back(tc.term);
      CooperSearch cs(branch_budget * 4);
      std::optional<Model> found = cs.solve(c);
      res.branches += cs.nodes();
      if (cs.exhausted()) return res;
      res.status = found ? IntOutcome::Sat : IntOutcome::Unsat;
      if (!found) return res;
      m = *found;
    } else if (res.status == IntOutcome::Sat) {
      m = bb.model();
    } else {
      return res;
    }
  }
  for (auto it = subs.rbegin(); it != subs.rend(); ++it) {
    for (const auto& e : it->second.coeffs())
      if (!m.has(e.first)) m.set_num(e.first, 0);
    m.set_num(it->first, it->second.evaluate(m));
  }
  for (const auto& v : all) {
    if (!m.has(v)) m.set_num(v, 0);
    res.model.set_num(v, m.get_num(v));
  }
  return res;
}

}  // namespace recmc::detail
